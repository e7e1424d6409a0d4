//! Acceptance criterion 10: the self-test battery emits byte-identical JSON
//! for a fixed seed regardless of the thread count.

use std::process::Command;
use std::time::Instant;

fn run_selftest(threads: &str) -> (Vec<u8>, bool) {
    let out = Command::new(env!("CARGO_BIN_EXE_properact"))
        .args(["selftest", "--seed", "0", "--threads", threads, "--json"])
        .output()
        .expect("binary runs");
    (out.stdout, out.status.success())
}

#[test]
fn criterion_10_selftest_determinism() {
    let started = Instant::now();
    let (single, ok1) = run_selftest("1");
    let (eight, ok8) = run_selftest("8");
    let identical = single == eight;
    let pass = ok1 && ok8 && identical && !single.is_empty();
    println!(
        "ACCEPTANCE 10 {}  selftest --seed 0 --threads 1 vs 8: byte-identical: {identical}, exit ok: {}/{} ({:.2} s)",
        if pass { "PASS" } else { "FAIL" },
        ok1,
        ok8,
        started.elapsed().as_secs_f64()
    );
    assert!(pass, "selftest output differed across thread counts");
}
