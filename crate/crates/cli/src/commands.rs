//! Subcommand implementations: parse inputs (inline flags or problem
//! files), call the library, and assemble verdict reports.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use properact::cartan::{self, MatrixGroupSpec};
use properact::catalog::{self, Curvature, SpaceFormQuery};
use properact::cones::{RationalSubspace, SubspaceJson};
use properact::linalg::{rat_display, rat_parse};
use properact::properness::{
    self, calabi_markus_by_similarity, calabi_markus_ranks, cocompact_standard_check,
    is_proper_reductive, is_similar_reductive, Partition, ReductivePair,
};
use properact::rootdata::{Family, RootDatum, RootDatumJson};
use properact::selftest;
use properact::tempered::{
    p_v_or_infinite, temperedness_verdict, Convention, PvValue, WeightSystem, WeightSystemJson,
};
use properact::volume::{
    diag_flow, exact_box_overlap, mc_overlap, q_estimate, McConfig, Shape,
};
use properact::Error;

use crate::report::VerdictReport;

type CmdResult = Result<VerdictReport, Error>;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn read_file(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {path:?}: {e}")))
}

fn parse_family(s: &str) -> Result<Family, Error> {
    match s.to_ascii_uppercase().as_str() {
        "A" => Ok(Family::A),
        "B" => Ok(Family::B),
        "C" => Ok(Family::C),
        "D" => Ok(Family::D),
        "BC" => Ok(Family::BC),
        other => Err(invalid(format!("unknown family {other:?}"))),
    }
}

/// Parse `"1,0,-1;0,1/2,-1/2"` into subspace basis rows.
fn parse_rational_rows(s: &str) -> Result<Vec<Vec<properact::Rat>>, Error> {
    s.split(';')
        .filter(|row| !row.trim().is_empty())
        .map(|row| {
            row.split(',')
                .map(|x| rat_parse(x))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| invalid(format!("bad number {x:?}: {e}")))
        })
        .collect()
}

/// `"start:step:count"` or an explicit comma list.
fn parse_t_grid(s: &str) -> Result<Vec<f64>, Error> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid("grid must be start:step:count or a comma list"));
        }
        let start: f64 = parts[0].parse().map_err(|_| invalid("bad grid start"))?;
        let step: f64 = parts[1].parse().map_err(|_| invalid("bad grid step"))?;
        let count: usize = parts[2].parse().map_err(|_| invalid("bad grid count"))?;
        Ok((0..count).map(|k| start + step * k as f64).collect())
    } else {
        parse_f64_list(s)
    }
}

// ---------------------------------------------------------------------------
// mu
// ---------------------------------------------------------------------------

#[derive(Debug, Args)]
pub struct MuArgs {
    /// Row-major JSON matrix, e.g. '[[2.7,0],[0,0.37]]'.
    #[arg(long, conflicts_with = "file")]
    pub matrix: Option<String>,

    /// File holding the JSON matrix.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

pub fn run_mu(args: &MuArgs) -> CmdResult {
    let raw = match (&args.matrix, &args.file) {
        (Some(m), _) => m.clone(),
        (None, Some(f)) => read_file(f)?,
        (None, None) => return Err(invalid("provide --matrix or --file")),
    };
    let matrix: Vec<Vec<f64>> =
        serde_json::from_str(&raw).map_err(|e| invalid(format!("bad matrix JSON: {e}")))?;
    let mu = cartan::cartan_projection_gl(&matrix)?;
    let log_det: f64 = mu.iter().sum();
    let text = format!(
        "mu = ({})",
        mu.iter()
            .map(|x| format!("{x:.9}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(VerdictReport::new(
        "mu",
        json!({ "matrix": matrix }),
        json!({ "mu": mu, "log_abs_det": log_det }),
        json!("jacobi_spectrum_of_gram_matrix"),
    )
    .with_text(vec![text]))
}

// ---------------------------------------------------------------------------
// proper / similar
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairProblem {
    #[allow(dead_code)]
    version: String,
    ambient: RootDatumJson,
    #[serde(rename = "a_L")]
    a_l: SubspaceJson,
    #[serde(rename = "a_H")]
    a_h: SubspaceJson,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Problem file: {"version":"1","ambient":{...},"a_L":{...},"a_H":{...}}.
    #[arg(long)]
    pub file: Option<PathBuf>,

    /// Root-system family (A, B, C, D, BC) for inline input.
    #[arg(long)]
    pub family: Option<String>,

    /// Rank for inline input.
    #[arg(long)]
    pub rank: Option<usize>,

    /// Basis of a_L: rows separated by ';', entries by ',' (rationals).
    #[arg(long = "a-l")]
    pub a_l: Option<String>,

    /// Basis of a_H in the same format.
    #[arg(long = "a-h")]
    pub a_h: Option<String>,
}

fn build_pair(args: &PairArgs) -> Result<(ReductivePair, Value), Error> {
    if let Some(path) = &args.file {
        let problem: PairProblem = serde_json::from_str(&read_file(path)?)
            .map_err(|e| invalid(format!("bad problem file: {e}")))?;
        let datum = RootDatum::from_json(&problem.ambient)?;
        let ambient = datum.ambient_dim();
        let a_l = RationalSubspace::from_json(ambient, &problem.a_l)?;
        let a_h = RationalSubspace::from_json(ambient, &problem.a_h)?;
        let inputs = json!({
            "ambient": { "family": problem.ambient.family, "rank": problem.ambient.rank },
            "a_L": a_l.to_json(),
            "a_H": a_h.to_json(),
        });
        return Ok((ReductivePair::new(datum, a_l, a_h)?, inputs));
    }
    let family = parse_family(args.family.as_deref().ok_or_else(|| invalid("need --family"))?)?;
    let rank = args.rank.ok_or_else(|| invalid("need --rank"))?;
    let datum = RootDatum::new(family, rank)?;
    let ambient = datum.ambient_dim();
    let a_l = RationalSubspace::from_spanning(
        ambient,
        &parse_rational_rows(args.a_l.as_deref().ok_or_else(|| invalid("need --a-l"))?)?,
    )?;
    let a_h = RationalSubspace::from_spanning(
        ambient,
        &parse_rational_rows(args.a_h.as_deref().ok_or_else(|| invalid("need --a-h"))?)?,
    )?;
    let inputs = json!({
        "ambient": { "family": family, "rank": rank },
        "a_L": a_l.to_json(),
        "a_H": a_h.to_json(),
    });
    Ok((ReductivePair::new(datum, a_l, a_h)?, inputs))
}

pub fn run_proper(args: &PairArgs, cap: &u64) -> CmdResult {
    let (pair, inputs) = build_pair(args)?;
    let verdict = is_proper_reductive(&pair, *cap)?;
    let text = if verdict.proper {
        "proper: the subspaces meet every Weyl translate trivially".to_string()
    } else {
        let w = verdict.witness.as_ref().expect("non-proper carries witness");
        format!(
            "not proper: witness vector ({}) lies in a_H and in w·a_L",
            w.vector.iter().map(rat_display).collect::<Vec<_>>().join(", ")
        )
    };
    Ok(VerdictReport::new(
        "proper",
        inputs,
        serde_json::to_value(verdict.to_json()).expect("verdict serializes"),
        json!("weyl_exhaustive"),
    )
    .with_text(vec![text]))
}

pub fn run_similar(args: &PairArgs, cap: &u64) -> CmdResult {
    let (pair, inputs) = build_pair(args)?;
    let similar = is_similar_reductive(&pair, *cap)?;
    Ok(VerdictReport::new(
        "similar",
        inputs,
        json!({ "similar": similar }),
        json!("weyl_orbit_set_equality"),
    )
    .with_text(vec![format!("similar: {similar}")]))
}

// ---------------------------------------------------------------------------
// calabi-markus
// ---------------------------------------------------------------------------

#[derive(Debug, Args)]
pub struct CalabiMarkusArgs {
    /// Space-form signature parameter p (pairs SO(p+1,q) over SO(p,q)).
    #[arg(long, requires = "q")]
    pub p: Option<usize>,

    /// Space-form signature parameter q.
    #[arg(long, requires = "p")]
    pub q: Option<usize>,

    /// Group spec JSON for G, e.g. '{"family":"SL","n":3}'.
    #[arg(long, requires = "spec_h")]
    pub spec_g: Option<String>,

    /// Group spec JSON for H.
    #[arg(long, requires = "spec_g")]
    pub spec_h: Option<String>,

    /// Bare real rank of G.
    #[arg(long, requires = "rank_h")]
    pub rank_g: Option<usize>,

    /// Bare real rank of H.
    #[arg(long, requires = "rank_g")]
    pub rank_h: Option<usize>,
}

fn parse_spec(s: &str) -> Result<MatrixGroupSpec, Error> {
    let spec: MatrixGroupSpec =
        serde_json::from_str(s).map_err(|e| invalid(format!("bad group spec: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

pub fn run_calabi_markus(args: &CalabiMarkusArgs, cap: &u64) -> CmdResult {
    if let (Some(p), Some(q)) = (args.p, args.q) {
        let g = MatrixGroupSpec::SO { p: p + 1, q };
        let h = MatrixGroupSpec::SO { p, q };
        let rank_g = g.real_rank();
        let rank_h = h.real_rank();
        let by_rank = calabi_markus_ranks(rank_g, rank_h);
        let by_predicate = catalog::cm_infinite(p, q);
        let by_similarity = if rank_g == 0 {
            false
        } else {
            let family = if p + 1 == q && rank_g >= 2 {
                Family::D
            } else {
                Family::B
            };
            calabi_markus_by_similarity(&RootDatum::new(family, rank_g)?, rank_h, *cap)?
        };
        let agree = by_rank == by_similarity && by_rank == by_predicate;
        return Ok(VerdictReport::new(
            "calabi-markus",
            json!({ "pair": [g, h], "p": p, "q": q }),
            json!({
                "admits_infinite_discontinuous_group": by_rank,
                "by_rank": by_rank,
                "by_similarity": by_similarity,
                "by_signature_predicate": by_predicate,
                "routes_agree": agree,
            }),
            json!("rank_comparison+similarity_audit"),
        )
        .with_text(vec![format!(
            "{g} / {h}: admits infinite discontinuous group: {by_rank} (similarity route: {by_similarity}, p<q: {by_predicate})"
        )]));
    }
    let (rank_g, rank_h, inputs) = if let (Some(sg), Some(sh)) = (&args.spec_g, &args.spec_h) {
        let g = parse_spec(sg)?;
        let h = parse_spec(sh)?;
        (g.real_rank(), h.real_rank(), json!({ "pair": [g, h] }))
    } else if let (Some(rg), Some(rh)) = (args.rank_g, args.rank_h) {
        (rg, rh, json!({ "rank_g": rg, "rank_h": rh }))
    } else {
        return Err(invalid("provide --p/--q, --spec-g/--spec-h, or --rank-g/--rank-h"));
    };
    let verdict = calabi_markus_ranks(rank_g, rank_h);
    Ok(VerdictReport::new(
        "calabi-markus",
        inputs,
        json!({
            "admits_infinite_discontinuous_group": verdict,
            "rank_g": rank_g,
            "rank_h": rank_h,
        }),
        json!("rank_comparison"),
    )
    .with_text(vec![format!(
        "ranks {rank_g} vs {rank_h}: admits infinite discontinuous group: {verdict}"
    )]))
}

// ---------------------------------------------------------------------------
// cocompact
// ---------------------------------------------------------------------------

#[derive(Debug, Args)]
pub struct CocompactArgs {
    #[arg(long, requires = "d_h", requires = "d_l")]
    pub d_g: Option<usize>,
    #[arg(long)]
    pub d_h: Option<usize>,
    #[arg(long)]
    pub d_l: Option<usize>,

    /// Group spec JSON for G (dimensions computed from the algebra basis).
    #[arg(long, requires = "spec_h", requires = "spec_l")]
    pub spec_g: Option<String>,
    #[arg(long)]
    pub spec_h: Option<String>,
    #[arg(long)]
    pub spec_l: Option<String>,
}

pub fn run_cocompact(args: &CocompactArgs) -> CmdResult {
    let (d_g, d_h, d_l, inputs, method) = if let Some(dg) = args.d_g {
        let dh = args.d_h.ok_or_else(|| invalid("need --d-h"))?;
        let dl = args.d_l.ok_or_else(|| invalid("need --d-l"))?;
        (
            dg,
            dh,
            dl,
            json!({ "d_g": dg, "d_h": dh, "d_l": dl }),
            json!("stated_dimensions"),
        )
    } else if let (Some(sg), Some(sh), Some(sl)) = (&args.spec_g, &args.spec_h, &args.spec_l) {
        let g = parse_spec(sg)?;
        let h = parse_spec(sh)?;
        let l = parse_spec(sl)?;
        let (_, dg) = cartan::cartan_dims(&g)?;
        let (_, dh) = cartan::cartan_dims(&h)?;
        let (_, dl) = cartan::cartan_dims(&l)?;
        (
            dg,
            dh,
            dl,
            json!({ "specs": [g, h, l], "d_g": dg, "d_h": dh, "d_l": dl }),
            json!("exact_basis_dimensions"),
        )
    } else {
        return Err(invalid("provide --d-g/--d-h/--d-l or --spec-g/--spec-h/--spec-l"));
    };
    let cocompact = cocompact_standard_check(d_g, d_h, d_l);
    Ok(VerdictReport::new(
        "cocompact",
        inputs,
        json!({ "cocompact": cocompact, "identity": format!("{d_l} + {d_h} = {d_g}") }),
        method,
    )
    .with_text(vec![format!(
        "d(L) + d(H) = d(G): {d_l} + {d_h} = {d_g}: {cocompact}"
    )]))
}

// ---------------------------------------------------------------------------
// sl2 / sl2-audit
// ---------------------------------------------------------------------------

#[derive(Debug, Args)]
pub struct Sl2Args {
    /// Expected n (validated against the partition when given).
    #[arg(long)]
    pub n: Option<usize>,

    /// Block size m of the quotient subgroup, 1 <= m < n.
    #[arg(long)]
    pub m: usize,

    /// Partition parts, e.g. "5" or "3,1,1".
    #[arg(long)]
    pub partition: String,
}

pub fn run_sl2(args: &Sl2Args) -> CmdResult {
    let parts: Vec<usize> = args
        .partition
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| invalid(format!("bad part {p:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let partition = Partition::from_parts(&parts)?;
    if let Some(n) = args.n {
        if n != partition.n() {
            return Err(invalid(format!(
                "partition sums to {}, but --n is {n}",
                partition.n()
            )));
        }
    }
    let oracle = properness::sl2_proper_oracle(&partition, args.m)?;
    let zero_count = properness::sl2_proper_zero_count(&partition, args.m)?;
    let printed = properness::sl2_proper_printed_formula(&partition, args.m)?;
    let irreducible = partition
        .is_irreducible()
        .then(|| properness::sl2_irreducible_closed_form(partition.n(), args.m));
    let ray = properness::sl2_ray(&partition);
    Ok(VerdictReport::new(
        "sl2",
        json!({ "partition": partition.parts(), "n": partition.n(), "m": args.m }),
        json!({
            "proper": oracle,
            "ray": ray,
            "zero_count_shortcut": zero_count,
            "printed_inequality": printed,
            "irreducible_closed_form": irreducible,
        }),
        json!("weyl_exhaustive"),
    )
    .with_text(vec![format!(
        "partition {partition} with m = {}: proper = {oracle} (shortcut {zero_count}, printed inequality {printed})",
        args.m
    )]))
}

#[derive(Debug, Args)]
pub struct Sl2AuditArgs {
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
}

pub fn run_sl2_audit(args: &Sl2AuditArgs) -> CmdResult {
    if args.n_max > 9 {
        return Err(Error::CapExceeded {
            needed: args.n_max as u128,
            cap: 9,
        });
    }
    let audit = properness::sl2_formula_audit(args.n_max);
    let mut csv = vec!["partition,m,oracle,zero_count,printed,irreducible_form".to_string()];
    for row in &audit.rows {
        csv.push(format!(
            "{},{},{},{},{},{}",
            row.parts
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join("+"),
            row.m,
            row.oracle,
            row.zero_count,
            row.printed,
            row.irreducible_form
                .map(|b| b.to_string())
                .unwrap_or_default(),
        ));
    }
    let text = vec![
        format!(
            "{} cases over partitions of n <= {}",
            audit.rows.len(),
            audit.n_max
        ),
        format!(
            "zero-count shortcut disagreements: {}",
            audit.zero_count_disagreements
        ),
        format!(
            "irreducible closed-form disagreements: {}",
            audit.irreducible_disagreements
        ),
        format!(
            "printed-inequality disagreements: {} (e.g. {:?})",
            audit.printed_disagreements.len(),
            audit.printed_disagreements.first()
        ),
    ];
    Ok(VerdictReport::new(
        "sl2-audit",
        json!({ "n_max": args.n_max }),
        serde_json::to_value(&audit).expect("audit serializes"),
        json!("weyl_exhaustive_vs_closed_forms"),
    )
    .with_text(text)
    .with_csv(csv))
}

// ---------------------------------------------------------------------------
// pv / tempered
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PvProblem {
    #[allow(dead_code)]
    version: String,
    datum: RootDatumJson,
    #[serde(flatten)]
    weights: WeightSystemJson,
}

#[derive(Debug, Args)]
pub struct PvArgs {
    /// Problem file: {"version":"1","datum":{...},"weights":[{"covector":[...],"mult":1},...]}.
    #[arg(long)]
    pub file: Option<PathBuf>,

    /// Weights of the defining representation of SL(n,R).
    #[arg(long, conflicts_with = "file")]
    pub standard_sl: Option<usize>,

    /// Adjoint weights of a family+rank datum, e.g. "B2".
    #[arg(long, conflicts_with_all = ["file", "standard_sl"])]
    pub adjoint: Option<String>,
}

fn parse_family_rank(s: &str) -> Result<(Family, usize), Error> {
    let split = s
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| invalid(format!("expected FAMILYRANK like B2, got {s:?}")))?;
    let family = parse_family(&s[..split])?;
    let rank: usize = s[split..]
        .parse()
        .map_err(|_| invalid(format!("bad rank in {s:?}")))?;
    Ok((family, rank))
}

pub fn run_pv(args: &PvArgs, tempered_headline: bool) -> CmdResult {
    let (ws, datum) = if let Some(path) = &args.file {
        let problem: PvProblem = serde_json::from_str(&read_file(path)?)
            .map_err(|e| invalid(format!("bad problem file: {e}")))?;
        let datum = RootDatum::from_json(&problem.datum)?;
        let ws = WeightSystem::from_json(datum.ambient_dim(), &problem.weights)?;
        (ws, datum)
    } else if let Some(n) = args.standard_sl {
        if n < 2 {
            return Err(invalid("--standard-sl needs n >= 2"));
        }
        (WeightSystem::standard_sl(n)?, RootDatum::new(Family::A, n - 1)?)
    } else if let Some(fr) = &args.adjoint {
        let (family, rank) = parse_family_rank(fr)?;
        let datum = RootDatum::new(family, rank)?;
        (WeightSystem::adjoint(&datum)?, datum)
    } else {
        return Err(invalid("provide --file, --standard-sl, or --adjoint"));
    };

    let (value, result) = p_v_or_infinite(&ws, &datum)?;
    let derived = temperedness_verdict(&value, Convention::DerivedChh);
    let printed = temperedness_verdict(&value, Convention::Printed);
    let verdict = json!({
        "p_v": value.to_display(),
        "argmax_ray": result.as_ref().map(|r| r.argmax_ray.clone()),
        "ray_count": result.as_ref().map(|r| r.ray_count),
        "chamber_count": result.as_ref().and_then(|r| r.chamber_count),
        "tempered": {
            "derived_chh": derived,
            "printed": printed,
        },
    });
    let mut text = Vec::new();
    if tempered_headline {
        text.push(format!(
            "L^2(V) temperedness at p_V = {}: derived_chh -> {derived:?}, printed -> {printed:?}",
            value.to_display()
        ));
    } else {
        text.push(format!("p_V = {}", value.to_display()));
        if let Some(r) = &result {
            text.push(format!(
                "argmax ray {:?} ({} candidate rays, {} chambers)",
                r.argmax_ray,
                r.ray_count,
                r.chamber_count
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| "uncounted".into())
            ));
        }
        text.push(format!(
            "temperedness: derived_chh -> {derived:?}, printed -> {printed:?}"
        ));
    }
    let warnings = if matches!(value, PvValue::Infinite) {
        vec!["representation kernel is non-compact: decay vanishes along some direction".into()]
    } else {
        Vec::new()
    };
    Ok(VerdictReport::new(
        if tempered_headline { "tempered" } else { "pv" },
        json!({
            "datum": { "family": datum.family(), "rank": datum.rank() },
            "weights": ws.to_json(),
        }),
        verdict,
        json!("extreme_ray_enumeration"),
    )
    .with_text(text)
    .with_warnings(warnings))
}

// ---------------------------------------------------------------------------
// vol
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ShapeKind {
    Box,
    Ball,
}

#[derive(Debug, Args)]
pub struct VolSimArgs {
    #[arg(long, value_enum, default_value_t = ShapeKind::Box)]
    pub shape: ShapeKind,

    /// Box half-widths, e.g. "1,1".
    #[arg(long, default_value = "1,1")]
    pub half_widths: String,

    /// Ball radius.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,

    /// Ball dimension.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,

    /// Flow exponents, e.g. "1,-1" (must sum to zero).
    #[arg(long, default_value = "1,-1")]
    pub u: String,

    /// Times: "start:step:count" or a comma list.
    #[arg(long, default_value = "0:0.4:9")]
    pub t_grid: String,

    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,

    #[arg(long, default_value_t = 8)]
    pub shards: u32,
}

#[derive(Debug, Args)]
pub struct VolFitQArgs {
    /// Ambient size n of the diagonal SL(n,R) flow (2 or 3 for the built-in
    /// direction sets).
    #[arg(long)]
    pub sl: usize,

    /// Optional direction rows "a,b;c,d" overriding the built-ins.
    #[arg(long)]
    pub directions: Option<String>,

    /// Box half-widths (defaults to the unit box of dimension n).
    #[arg(long)]
    pub half_widths: Option<String>,

    #[arg(long, default_value = "0.4:0.4:8")]
    pub t_grid: String,

    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,

    #[arg(long, default_value_t = 8)]
    pub shards: u32,
}

#[derive(Debug, Subcommand)]
pub enum VolCommand {
    /// Sample vol(S ∩ g_t S) along a diagonal flow.
    Sim(VolSimArgs),
    /// Fit decay exponents and estimate the optimal L^p exponent.
    FitQ(VolFitQArgs),
}

fn build_shape(kind: ShapeKind, half_widths: &str, radius: f64, dim: usize) -> Result<Shape, Error> {
    let shape = match kind {
        ShapeKind::Box => Shape::Box {
            half_widths: parse_f64_list(half_widths)?,
        },
        ShapeKind::Ball => Shape::Ball { radius, dim },
    };
    shape.validate()?;
    Ok(shape)
}

pub fn run_vol(cmd: &VolCommand, seed: u64) -> CmdResult {
    match cmd {
        VolCommand::Sim(args) => {
            let shape = build_shape(args.shape, &args.half_widths, args.radius, args.dim)?;
            let u = parse_f64_list(&args.u)?;
            if u.len() != shape.dim() {
                return Err(Error::DimensionMismatch {
                    expected: shape.dim(),
                    got: u.len(),
                });
            }
            let grid = parse_t_grid(&args.t_grid)?;
            let cfg = McConfig::new(args.samples, seed, args.shards)?;
            let mut rows = Vec::new();
            let mut csv = vec!["t,estimate,stderr,exact".to_string()];
            for &t in &grid {
                let est = mc_overlap(&shape, &diag_flow(&u, t), &cfg)?;
                let exact = match &shape {
                    Shape::Box { half_widths } => Some(exact_box_overlap(half_widths, &u, t)),
                    _ => None,
                };
                csv.push(format!(
                    "{t},{},{},{}",
                    est.estimate,
                    est.stderr,
                    exact.map(|e| e.to_string()).unwrap_or_default()
                ));
                rows.push(json!({
                    "t": t,
                    "estimate": est.estimate,
                    "stderr": est.stderr,
                    "exact": exact,
                }));
            }
            let text = csv.clone();
            Ok(VerdictReport::new(
                "vol-sim",
                json!({
                    "shape": shape,
                    "u": u,
                    "t_grid": grid,
                    "samples": args.samples,
                    "seed": seed,
                    "shards": args.shards,
                }),
                json!({ "rows": rows }),
                json!({ "monte_carlo": { "seed": seed, "shards": args.shards } }),
            )
            .with_text(text)
            .with_csv(csv))
        }
        VolCommand::FitQ(args) => {
            let n = args.sl;
            if n < 2 {
                return Err(invalid("--sl needs n >= 2"));
            }
            let shape = Shape::Box {
                half_widths: match &args.half_widths {
                    Some(s) => parse_f64_list(s)?,
                    None => vec![1.0; n],
                },
            };
            shape.validate()?;
            let directions: Vec<Vec<f64>> = match &args.directions {
                Some(s) => s
                    .split(';')
                    .map(parse_f64_list)
                    .collect::<Result<Vec<_>, _>>()?,
                None => match n {
                    2 => {
                        let s = std::f64::consts::FRAC_1_SQRT_2;
                        vec![vec![s, -s]]
                    }
                    3 => vec![
                        vec![1.0 / 2f64.sqrt(), 0.0, -1.0 / 2f64.sqrt()],
                        vec![2.0 / 6f64.sqrt(), -1.0 / 6f64.sqrt(), -1.0 / 6f64.sqrt()],
                        vec![3.0 / 26f64.sqrt(), 1.0 / 26f64.sqrt(), -4.0 / 26f64.sqrt()],
                    ],
                    _ => {
                        return Err(invalid(
                            "built-in directions cover n = 2 and 3; pass --directions",
                        ))
                    }
                },
            };
            let grid = parse_t_grid(&args.t_grid)?;
            let cfg = McConfig::new(args.samples, seed, args.shards)?;
            let q = q_estimate(&shape, &directions, &grid, &cfg)?;
            // Exact reference for the standard representation.
            let exact_pv = properact::tempered::p_v(
                &WeightSystem::standard_sl(n)?,
                &RootDatum::new(Family::A, n - 1)?,
            )
            .map(|r| rat_display(&r.value))
            .ok();
            let mut csv = vec!["direction,rho_h,kappa,ratio,r2".to_string()];
            for row in &q.table {
                csv.push(format!(
                    "{},{},{},{},{}",
                    row.direction
                        .iter()
                        .map(|x| format!("{x:.6}"))
                        .collect::<Vec<_>>()
                        .join(" "),
                    row.rho_h,
                    row.kappa,
                    row.ratio,
                    row.r2
                ));
            }
            let text = vec![
                format!("q_hat = {:.4}", q.q_hat),
                format!(
                    "exact p_V of the defining representation: {}",
                    exact_pv.clone().unwrap_or_else(|| "unavailable".into())
                ),
            ];
            Ok(VerdictReport::new(
                "vol-fit-q",
                json!({
                    "sl": n,
                    "shape": shape,
                    "directions": directions,
                    "t_grid": grid,
                    "samples": args.samples,
                    "seed": seed,
                    "shards": args.shards,
                }),
                json!({
                    "q_hat": q.q_hat,
                    "exact_p_v": exact_pv,
                    "table": q.table,
                }),
                json!({ "monte_carlo": { "seed": seed, "shards": args.shards } }),
            )
            .with_text(text)
            .with_warnings(q.warnings)
            .with_csv(csv))
        }
    }
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CurvatureArg {
    Positive,
    Negative,
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// Orthogonal pair and existence predicates for a space form.
    Spaceform {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, value_enum, default_value_t = CurvatureArg::Positive)]
        curvature: CurvatureArg,
    },
    /// Recompute the tangential table and flag printed mismatches.
    TangentialTable {
        #[arg(long, default_value_t = 11)]
        p_max: usize,
    },
}

pub fn run_catalog(cmd: &CatalogCommand) -> CmdResult {
    match cmd {
        CatalogCommand::Spaceform { p, q, curvature } => {
            let query = SpaceFormQuery {
                p: *p,
                q: *q,
                curvature: match curvature {
                    CurvatureArg::Positive => Curvature::Positive,
                    CurvatureArg::Negative => Curvature::Negative,
                },
            };
            let (g, h) = catalog::space_form_pair(&query)?;
            let predicates = json!({
                "cm_infinite": catalog::cm_infinite(*p, *q),
                "surface_group_admissible": catalog::surface_group_admissible(*p, *q),
                "compact_quotient_necessary": catalog::compact_quotient_necessary(*p, *q),
                "conjectured_compact_form": catalog::conjecture_g4_member(*p, *q),
                "tangential_admits_compact": catalog::tangential_admits_compact(*p, *q)?,
            });
            Ok(VerdictReport::new(
                "catalog-spaceform",
                serde_json::to_value(query).expect("query serializes"),
                json!({ "pair": [g, h], "predicates": predicates }),
                json!("closed_form"),
            )
            .with_text(vec![
                format!("pair: {g} acting, {h} isotropy"),
                format!("predicates (positive form of signature ({p},{q})): {predicates}"),
            ]))
        }
        CatalogCommand::TangentialTable { p_max } => {
            let rows = catalog::tangential_table_audit(*p_max)?;
            let mut csv = vec!["p,computed,printed,match".to_string()];
            let mut text = vec![
                "| p | computed | printed | match |".to_string(),
                "|---|----------|---------|-------|".to_string(),
            ];
            for row in &rows {
                csv.push(format!(
                    "{},{}N,{}N,{}",
                    row.p, row.computed_generator, row.printed_generator, row.matches
                ));
                text.push(format!(
                    "| {} | {}N | {}N | {} |",
                    row.p, row.computed_generator, row.printed_generator, row.matches
                ));
            }
            Ok(VerdictReport::new(
                "catalog-tangential-table",
                json!({ "p_max": p_max }),
                serde_json::to_value(&rows).expect("rows serialize"),
                json!("radon_hurwitz_closed_form"),
            )
            .with_text(text)
            .with_csv(csv))
        }
    }
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

pub fn run_selftest(seed: u64) -> CmdResult {
    let battery = selftest::run(seed);
    let mut text = Vec::new();
    for check in &battery.checks {
        text.push(format!(
            "{} {} ({})",
            if check.pass { "PASS" } else { "FAIL" },
            check.name,
            check.detail
        ));
    }
    text.push(format!("all_pass: {}", battery.all_pass));
    let mut report = VerdictReport::new(
        "selftest",
        json!({ "seed": seed }),
        serde_json::to_value(&battery).expect("battery serializes"),
        json!("deterministic_battery"),
    )
    .with_text(text);
    if !battery.all_pass {
        report.exit_override = Some(2);
    }
    Ok(report)
}
