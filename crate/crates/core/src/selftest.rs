//! Deterministic smoke battery covering every subsystem.
//!
//! All randomness is drawn from counter-based streams keyed by the given
//! seed, every parallel reduction is order-independent, and floats are
//! serialized by shortest round-trip, so the JSON report is byte-identical
//! across runs and thread counts.

use serde::Serialize;

use crate::cartan::{self, MatrixGroupSpec};
use crate::catalog;
use crate::cones::{ConeUnion, RationalSubspace};
use crate::error::Error;
use crate::linalg::{rat, rvec};
use crate::numeric;
use crate::properness::{
    self, cocompact_standard_check, is_proper_reductive, sharpness_fit, ReductivePair,
};
use crate::rng::CounterRng;
use crate::rootdata::{Family, RootDatum};
use crate::tempered::{p_v, WeightSystem};
use crate::volume::{
    decay_fit, exact_box_overlap, mc_overlap, q_estimate, McConfig, Shape, VolumeSource,
};

#[derive(Debug, Clone, Serialize)]
pub struct SelftestCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<SelftestCheck>,
    pub all_pass: bool,
}

fn check(name: &str, outcome: Result<(bool, String), Error>) -> SelftestCheck {
    match outcome {
        Ok((pass, detail)) => SelftestCheck {
            name: name.into(),
            pass,
            detail,
        },
        Err(e) => SelftestCheck {
            name: name.into(),
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Run the battery. Deterministic for a fixed seed.
pub fn run(seed: u64) -> SelftestReport {
    let checks = vec![
        check("cartan_projection_diag", cartan_projection_diag()),
        check("cartan_projection_bi_invariance", cartan_bi_invariance(seed)),
        check("weyl_orders", weyl_orders()),
        check("properness_overlap_witness", properness_witness()),
        check("properness_symmetry", properness_symmetry(seed)),
        check("sl2_partition_audit", sl2_audit_check()),
        check("pv_exact_values", pv_values()),
        check("mc_box_overlap", mc_box(seed)),
        check("decay_fit_exact", decay_exact()),
        check("q_estimate_sl2", q_sl2(seed)),
        check("catalog_tangential_audit", tangential()),
        check("cocompact_triple_family", cocompact_family()),
        check("sharpness_synthetic_orbit", sharpness(seed)),
    ];
    let all_pass = checks.iter().all(|c| c.pass);
    SelftestReport {
        seed,
        checks,
        all_pass,
    }
}

fn cartan_projection_diag() -> Result<(bool, String), Error> {
    let g = vec![
        vec![(2.0f64).exp(), 0.0],
        vec![0.0, (-2.0f64).exp()],
    ];
    let mu = cartan::cartan_projection_gl(&g)?;
    let err = (mu[0] - 2.0).abs().max((mu[1] + 2.0).abs());
    Ok((err < 1e-9, format!("max_err={err:.3e}")))
}

fn cartan_bi_invariance(seed: u64) -> Result<(bool, String), Error> {
    let mut rng = CounterRng::new(seed ^ 0xA1, 0);
    let h = [2.0f64, 0.0, -2.0];
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let k1 = numeric::random_orthogonal(3, &mut rng);
        let k2 = numeric::random_orthogonal(3, &mut rng);
        let mut d = numeric::identity(3);
        for i in 0..3 {
            d[i][i] = h[i].exp();
        }
        let g = numeric::mat_mul(&numeric::mat_mul(&k1, &d), &k2);
        let mu = cartan::cartan_projection_gl(&g)?;
        for (m, e) in mu.iter().zip(&h) {
            worst = worst.max((m - e).abs());
        }
    }
    Ok((worst < 1e-9, format!("max_err={worst:.3e}")))
}

fn weyl_orders() -> Result<(bool, String), Error> {
    let mut ok = true;
    for (family, rank, expect) in [
        (Family::A, 2, 6u128),
        (Family::B, 3, 48),
        (Family::C, 2, 8),
        (Family::D, 3, 24),
        (Family::BC, 2, 8),
    ] {
        let d = RootDatum::new(family, rank)?;
        ok &= d.weyl_elements(1_000)?.len() as u128 == expect;
    }
    Ok((ok, "orders A2/B3/C2/D3/BC2".into()))
}

fn properness_witness() -> Result<(bool, String), Error> {
    let datum = RootDatum::new(Family::A, 1)?;
    let a = RationalSubspace::from_spanning(2, &[rvec(&[1, -1])])?;
    let pair = ReductivePair::new(datum, a.clone(), a)?;
    let v = is_proper_reductive(&pair, 100)?;
    let ok = !v.proper
        && v.witness
            .as_ref()
            .is_some_and(|w| pair.a_h.contains_vector(&w.vector));
    Ok((ok, "split line against itself".into()))
}

fn properness_symmetry(seed: u64) -> Result<(bool, String), Error> {
    let mut rng = CounterRng::new(seed ^ 0xB2, 0);
    let datum = RootDatum::new(Family::B, 3)?;
    let mut ok = true;
    for _ in 0..25 {
        let mk = |rng: &mut CounterRng| {
            let vecs: Vec<Vec<crate::Rat>> = (0..1 + rng.next_usize(2))
                .map(|_| (0..3).map(|_| rat(rng.next_i64(-2, 2))).collect())
                .collect();
            RationalSubspace::from_spanning(3, &vecs).unwrap()
        };
        let a_l = mk(&mut rng);
        let a_h = mk(&mut rng);
        let pair = ReductivePair::new(datum.clone(), a_l, a_h)?;
        ok &= is_proper_reductive(&pair, 1000)?.proper
            == is_proper_reductive(&pair.swapped(), 1000)?.proper;
    }
    Ok((ok, "25 random pairs in rank 3".into()))
}

fn sl2_audit_check() -> Result<(bool, String), Error> {
    let audit = properness::sl2_formula_audit(6);
    let ok = audit.zero_count_disagreements == 0
        && audit.irreducible_disagreements == 0
        && audit.printed_disagreements.contains(&(vec![5], 3));
    Ok((
        ok,
        format!(
            "rows={} printed_disagreements={}",
            audit.rows.len(),
            audit.printed_disagreements.len()
        ),
    ))
}

fn pv_values() -> Result<(bool, String), Error> {
    let a1 = RootDatum::new(Family::A, 1)?;
    let a2 = RootDatum::new(Family::A, 2)?;
    let std2 = WeightSystem::standard_sl(2)?;
    let std3 = WeightSystem::standard_sl(3)?;
    let mut ok = p_v(&std2, &a1)?.value == rat(2);
    ok &= p_v(&std3, &a2)?.value == rat(4);
    ok &= p_v(&WeightSystem::adjoint(&a2)?, &a2)?.value == rat(1);
    ok &= p_v(&std2.direct_sum(&std2)?, &a1)?.value == rat(1);
    Ok((ok, "std_sl2=2 std_sl3=4 adjoint=1 doubled=1".into()))
}

fn mc_box(seed: u64) -> Result<(bool, String), Error> {
    let shape = Shape::Box {
        half_widths: vec![1.0, 1.0],
    };
    let cfg = McConfig::new(100_000, seed ^ 0xC3, 8)?;
    let t = 1.5;
    let g = crate::volume::diag_flow(&[1.0, -1.0], t);
    let est = mc_overlap(&shape, &g, &cfg)?;
    let exact = exact_box_overlap(&[1.0, 1.0], &[1.0, -1.0], t);
    let ok = (est.estimate - exact).abs() <= 3.0 * est.stderr;
    Ok((
        ok,
        format!("estimate={:.6} exact={exact:.6} stderr={:.2e}", est.estimate, est.stderr),
    ))
}

fn decay_exact() -> Result<(bool, String), Error> {
    let shape = Shape::Box {
        half_widths: vec![1.0, 1.0, 1.0],
    };
    let u = [1.0, 0.5, -1.5];
    let grid: Vec<f64> = (1..=8).map(|k| 0.5 * k as f64).collect();
    let fit = decay_fit(&shape, &u, &grid, VolumeSource::ExactBox)?;
    let expected = crate::volume::rho_v_standard_direction(&u);
    let ok = (fit.kappa - expected).abs() < 1e-6;
    Ok((ok, format!("kappa={:.9} expected={expected:.9}", fit.kappa)))
}

fn q_sl2(seed: u64) -> Result<(bool, String), Error> {
    let shape = Shape::Box {
        half_widths: vec![1.0, 1.0],
    };
    let cfg = McConfig::new(100_000, seed ^ 0xD4, 8)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let grid: Vec<f64> = (1..=8).map(|k| 0.4 * k as f64).collect();
    let q = q_estimate(&shape, &[vec![s, -s]], &grid, &cfg)?;
    let ok = (q.q_hat - 2.0).abs() < 0.15;
    Ok((ok, format!("q_hat={:.4}", q.q_hat)))
}

fn tangential() -> Result<(bool, String), Error> {
    let rows = catalog::tangential_table_audit(11)?;
    let ok = rows
        .iter()
        .all(|r| r.matches == (r.p != 2))
        && rows[1].computed_generator == 4;
    Ok((ok, "printed row p=2 disagrees as expected".into()))
}

fn cocompact_family() -> Result<(bool, String), Error> {
    let mut ok = true;
    for n in 1..=2 {
        let (_, d_g) = cartan::cartan_dims(&MatrixGroupSpec::SO { p: 2 * n, q: 2 })?;
        let (_, d_h) = cartan::cartan_dims(&MatrixGroupSpec::SO { p: 2 * n, q: 1 })?;
        let (_, d_l) = cartan::cartan_dims(&MatrixGroupSpec::U { p: n, q: 1 })?;
        ok &= cocompact_standard_check(d_g, d_h, d_l);
    }
    Ok((ok, "SO(2n,2) over SO(2n,1) and U(n,1), n <= 2".into()))
}

fn sharpness(seed: u64) -> Result<(bool, String), Error> {
    let mut rng = CounterRng::new(seed ^ 0xE5, 0);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let samples: Vec<Vec<f64>> = (1..=800)
        .map(|k| {
            let t = k as f64;
            vec![
                t * s + rng.next_range(-0.05, 0.05),
                t * s + rng.next_range(-0.05, 0.05),
            ]
        })
        .collect();
    let mu_h = ConeUnion::of_subspaces(vec![RationalSubspace::from_spanning(
        2,
        &[rvec(&[1, 0])],
    )?])?;
    let fit = sharpness_fit(&samples, &mu_h, &[0.3, 0.5, 0.7])?;
    let ok = (fit.c_asymptotic - s).abs() < 1e-3;
    Ok((ok, format!("c_asymptotic={:.6}", fit.c_asymptotic)))
}
