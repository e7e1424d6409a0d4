//! Command-line front end: problem-file parsing, subcommand dispatch, and
//! deterministic JSON/text/CSV reporting.
//!
//! Exit codes: 0 on successful computation (whatever the verdict says),
//! 1 on input or validation errors, 2 on cap/resource exhaustion.

mod commands;
mod report;

use clap::{Args, Parser, Subcommand};

use properact::Error;

#[derive(Debug, Parser)]
#[command(
    name = "properact",
    version,
    about = "Properness criteria, temperedness invariants, and dynamical volume estimates for reductive group actions"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct GlobalArgs {
    /// Emit the full report as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Emit tabular results as CSV (volume commands).
    #[arg(long, global = true)]
    csv: bool,

    /// Random seed for every stochastic component.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Rayon thread count (0 = library default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Weyl enumeration cap.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    cap: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cartan projection of an invertible real matrix.
    Mu(commands::MuArgs),
    /// Properness verdict for a reductive pair, with exact witness.
    Proper(commands::PairArgs),
    /// Similarity verdict for a reductive pair.
    Similar(commands::PairArgs),
    /// Existence of infinite discontinuous groups (rank and similarity routes).
    CalabiMarkus(commands::CalabiMarkusArgs),
    /// Cocompactness dimension identity d(L) + d(H) = d(G).
    Cocompact(commands::CocompactArgs),
    /// Partition criterion for SL(2,R) actions on SL(n,R)/SL(m,R).
    Sl2(commands::Sl2Args),
    /// Cross-validate the partition criterion formulas.
    Sl2Audit(commands::Sl2AuditArgs),
    /// Exact decay invariant p_V of a weight system.
    Pv(commands::PvArgs),
    /// Temperedness verdict for L^2(V) from the exact p_V.
    Tempered(commands::PvArgs),
    /// Volume estimation commands.
    #[command(subcommand)]
    Vol(commands::VolCommand),
    /// Space-form catalog queries.
    #[command(subcommand)]
    Catalog(commands::CatalogCommand),
    /// Deterministic self-test battery.
    Selftest,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } | Error::InsufficientSignal { .. } => 2,
        _ => 1,
    }
}

fn main() {
    let cli = Cli::parse();
    if cli.global.threads > 0 {
        // Ignore failure: the global pool may already be initialized.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global();
    }

    let outcome = match &cli.command {
        Command::Mu(args) => commands::run_mu(args),
        Command::Proper(args) => commands::run_proper(args, &cli.global.cap),
        Command::Similar(args) => commands::run_similar(args, &cli.global.cap),
        Command::CalabiMarkus(args) => commands::run_calabi_markus(args, &cli.global.cap),
        Command::Cocompact(args) => commands::run_cocompact(args),
        Command::Sl2(args) => commands::run_sl2(args),
        Command::Sl2Audit(args) => commands::run_sl2_audit(args),
        Command::Pv(args) => commands::run_pv(args, false),
        Command::Tempered(args) => commands::run_pv(args, true),
        Command::Vol(cmd) => commands::run_vol(cmd, cli.global.seed),
        Command::Catalog(cmd) => commands::run_catalog(cmd),
        Command::Selftest => commands::run_selftest(cli.global.seed),
    };

    match outcome {
        Ok(rep) => {
            let format = if cli.global.json {
                report::Format::Json
            } else if cli.global.csv {
                report::Format::Csv
            } else {
                report::Format::Text
            };
            print!("{}", report::emit(&rep, format));
            if let Some(code) = rep.exit_override {
                std::process::exit(code);
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(exit_code_for(&err));
        }
    }
}
