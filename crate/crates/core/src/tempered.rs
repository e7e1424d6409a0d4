//! The decay invariant `p_V`: exact maximization of `rho_h / rho_V` over
//! the split space by hyperplane-arrangement extreme-ray enumeration.
//!
//! Both `rho_h` (sum of |root values|) and `rho_V` (half-sum of |weight
//! values|) are piecewise linear and positively homogeneous, linear on each
//! chamber of the arrangement cut out by the kernels of all roots and
//! weights. A ratio of linear functionals on a pointed polyhedral cone
//! attains its maximum on an extreme ray, so scanning the primitive
//! generators of all 1-dimensional hyperplane intersections is exact.
//!
//! The `rho_V` convention carries the global 1/2 factor, so the standard
//! rank-one example evaluates to `|t|` and its invariant is `p_V = 2`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{self, dot, rat, rvec, IntMat, Rat};
use crate::rng::CounterRng;
use crate::rootdata::{Family, RootDatum};

// ---------------------------------------------------------------------------
// Weight systems
// ---------------------------------------------------------------------------

/// Rational covectors with multiplicities on the ambient coordinate space of
/// a root datum; the eigenvalue data of a representation restricted to the
/// split subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    ambient: usize,
    weights: Vec<(Vec<Rat>, usize)>,
    label: String,
}

impl WeightSystem {
    /// Build from raw entries; duplicate covectors merge by adding
    /// multiplicities, zero multiplicities are rejected.
    pub fn new(
        ambient: usize,
        entries: Vec<(Vec<Rat>, usize)>,
        label: impl Into<String>,
    ) -> Result<Self, Error> {
        if ambient == 0 {
            return Err(Error::DegenerateAmbient);
        }
        let mut merged: Vec<(Vec<Rat>, usize)> = Vec::new();
        for (covector, mult) in entries {
            if covector.len() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: covector.len(),
                });
            }
            if mult == 0 {
                return Err(Error::InvalidInput(
                    "weight multiplicities must be at least 1".into(),
                ));
            }
            match merged.iter_mut().find(|(c, _)| *c == covector) {
                Some((_, m)) => *m += mult,
                None => merged.push((covector, mult)),
            }
        }
        Ok(WeightSystem {
            ambient,
            weights: merged,
            label: label.into(),
        })
    }

    /// Weights of the defining representation of `SL(n,R)`: the coordinate
    /// covectors on the trace-zero model of the split space.
    pub fn standard_sl(n: usize) -> Result<Self, Error> {
        let entries = (0..n)
            .map(|i| {
                let mut v = vec![Rat::zero(); n];
                v[i] = rat(1);
                (v, 1)
            })
            .collect();
        WeightSystem::new(n, entries, format!("standard_sl{n}"))
    }

    /// Adjoint weights of a root datum: every root once, plus the zero
    /// covector with multiplicity equal to the rank.
    pub fn adjoint(datum: &RootDatum) -> Result<Self, Error> {
        let ambient = datum.ambient_dim();
        let mut entries: Vec<(Vec<Rat>, usize)> = datum
            .roots()
            .iter()
            .map(|r| (rvec(r), 1))
            .collect();
        entries.push((vec![Rat::zero(); ambient], datum.rank()));
        WeightSystem::new(
            ambient,
            entries,
            format!("adjoint_{}{}", datum.family(), datum.rank()),
        )
    }

    /// Direct sum: union of the weight multisets.
    pub fn direct_sum(&self, other: &WeightSystem) -> Result<Self, Error> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                got: other.ambient,
            });
        }
        let mut entries = self.weights.clone();
        entries.extend(other.weights.clone());
        WeightSystem::new(
            self.ambient,
            entries,
            format!("{}+{}", self.label, other.label),
        )
    }

    /// Image under an ambient transformation (weights move as vectors; for
    /// the orthogonal Weyl matrices this matches the covector action).
    pub fn transformed(&self, w: &IntMat) -> WeightSystem {
        let weights = self
            .weights
            .iter()
            .map(|(c, m)| (w.apply_rat(c), *m))
            .collect();
        WeightSystem {
            ambient: self.ambient,
            weights,
            label: self.label.clone(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn weights(&self) -> &[(Vec<Rat>, usize)] {
        &self.weights
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Total eigenvalue count (dimension of the representation).
    pub fn total_multiplicity(&self) -> usize {
        self.weights.iter().map(|(_, m)| m).sum()
    }
}

/// `rho_V(Y) = 1/2 Σ mult · |λ(Y)|` over the weight multiset.
pub fn rho_value(ws: &WeightSystem, y: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (covector, mult) in &ws.weights {
        acc += dot(covector, y).abs() * rat(*mult as i64);
    }
    acc / rat(2)
}

// ---------------------------------------------------------------------------
// Exact p_V
// ---------------------------------------------------------------------------

/// Subset-enumeration budget for the extreme-ray scan.
pub const RAY_SUBSET_CAP: u128 = 1_000_000;

/// Exact value and diagnostics of the maximization.
#[derive(Debug, Clone)]
pub struct PvResult {
    /// `max rho_h / rho_V`, exact.
    pub value: Rat,
    /// Primitive integer ray attaining the maximum.
    pub argmax_ray: Vec<i64>,
    /// Chambers of the root-plus-weight arrangement inside the split space;
    /// `None` when the count was skipped under the budget.
    pub chamber_count: Option<u64>,
    /// Distinct candidate extreme rays scanned.
    pub ray_count: usize,
}

/// A possibly-infinite invariant value, for verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PvValue {
    Finite(Rat),
    Infinite,
}

impl PvValue {
    pub fn to_display(&self) -> String {
        match self {
            PvValue::Finite(v) => linalg::rat_display(v),
            PvValue::Infinite => "inf".into(),
        }
    }
}

/// Linear constraints pinning the split space inside the ambient
/// coordinates (the trace-zero condition for type A, nothing otherwise).
fn ambient_constraints(datum: &RootDatum) -> Vec<Vec<Rat>> {
    match datum.family() {
        Family::A => vec![vec![rat(1); datum.ambient_dim()]],
        _ => Vec::new(),
    }
}

/// Primitive sign-canonical form of a covector, for dedup up to scale.
fn canonical_covector(v: &[Rat]) -> Option<Vec<i64>> {
    if linalg::is_zero_vec(v) {
        return None;
    }
    linalg::primitive_i64(v)
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Exact `p_V = max_{Y != 0} rho_h(Y) / rho_V(Y)` over the split space.
///
/// Errors with [`Error::NonCompactKernel`] when some direction has zero
/// decay (`rho_V = 0`) but positive Haar growth: the maximum is `+inf`.
pub fn p_v(ws: &WeightSystem, datum: &RootDatum) -> Result<PvResult, Error> {
    if ws.ambient != datum.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: datum.ambient_dim(),
            got: ws.ambient,
        });
    }
    let rank = datum.rank();
    let constraints = ambient_constraints(datum);

    // Pooled hyperplane normals: all positive roots and all nonzero weights,
    // up to sign and scale.
    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut push_normal = |v: Option<Vec<i64>>| {
        if let Some(c) = v {
            if !normals.contains(&c) {
                normals.push(c);
            }
        }
    };
    for root in datum.positive_roots() {
        push_normal(canonical_covector(&rvec(root)));
    }
    for (covector, _) in &ws.weights {
        push_normal(canonical_covector(covector));
    }

    let k = rank - 1;
    let budget = binomial(normals.len(), k);
    if budget > RAY_SUBSET_CAP {
        return Err(Error::CapExceeded {
            needed: budget,
            cap: RAY_SUBSET_CAP,
        });
    }

    // Candidate rays: 1-dimensional intersections of (rank-1)-subsets of
    // hyperplanes within the split space.
    let mut rays: Vec<Vec<i64>> = Vec::new();
    let push_ray = |ray: Option<Vec<i64>>, rays: &mut Vec<Vec<i64>>| {
        if let Some(r) = ray {
            if !r.iter().all(|&x| x == 0) && !rays.contains(&r) {
                rays.push(r);
            }
        }
    };
    for subset in normals.iter().combinations(k) {
        let mut rows: Vec<Vec<Rat>> = constraints.clone();
        rows.extend(subset.iter().map(|s| rvec(s)));
        let kernel = linalg::nullspace(&rows, ws.ambient);
        if kernel.len() == 1 {
            push_ray(linalg::primitive_i64(&kernel[0]), &mut rays);
        }
    }
    if rays.is_empty() {
        // Degenerate arrangement: fall back to the projections of the
        // coordinate axes into the split space.
        for i in 0..ws.ambient {
            let mut v = rvec(&vec![0i64; ws.ambient]);
            v[i] = rat(1);
            if datum.family() == Family::A {
                let n = rat(ws.ambient as i64);
                let mean = dot(&v, &vec![rat(1); ws.ambient]) / n.clone();
                for x in v.iter_mut() {
                    *x -= &mean;
                }
            }
            push_ray(linalg::primitive_i64(&v), &mut rays);
        }
        rays.retain(|r| !r.iter().all(|&x| x == 0));
    }
    rays.sort();

    let mut best: Option<(Rat, Vec<i64>)> = None;
    for ray in &rays {
        let y = rvec(ray);
        let rho_v = rho_value(ws, &y);
        let rho_h = datum.rho_h(&y);
        if rho_v.is_zero() {
            if rho_h.is_positive() {
                return Err(Error::NonCompactKernel { ray: ray.clone() });
            }
            continue;
        }
        let ratio = rho_h / rho_v;
        if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
            best = Some((ratio, ray.clone()));
        }
    }
    let (value, raw_ray) = best.ok_or(Error::DegenerateAmbient)?;

    // Prefer the dominant-chamber representative of the argmax when it
    // attains the same exact ratio (always true for Weyl-stable systems).
    let dominant = datum.dominant_representative(&rvec(&raw_ray));
    let argmax_ray = match linalg::primitive_i64(&dominant) {
        Some(dom_ray) => {
            let y = rvec(&dom_ray);
            let rho_v = rho_value(ws, &y);
            if !rho_v.is_zero() && datum.rho_h(&y) / rho_v == value {
                dom_ray
            } else {
                raw_ray
            }
        }
        None => raw_ray,
    };

    let chamber_count = chamber_count_in_split_space(datum, &normals);

    Ok(PvResult {
        value,
        argmax_ray,
        chamber_count,
        ray_count: rays.len(),
    })
}

/// `p_v` with the non-compact-kernel case folded into a value.
pub fn p_v_or_infinite(ws: &WeightSystem, datum: &RootDatum) -> Result<(PvValue, Option<PvResult>), Error> {
    match p_v(ws, datum) {
        Ok(res) => Ok((PvValue::Finite(res.value.clone()), Some(res))),
        Err(Error::NonCompactKernel { .. }) => Ok((PvValue::Infinite, None)),
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Chamber counting (deletion–restriction)
// ---------------------------------------------------------------------------

/// Number of chambers of the central arrangement cut out by `normals`
/// inside the split space, or `None` when past the budget.
fn chamber_count_in_split_space(datum: &RootDatum, normals: &[Vec<i64>]) -> Option<u64> {
    let constraints = ambient_constraints(datum);
    let basis = if constraints.is_empty() {
        (0..datum.ambient_dim())
            .map(|i| {
                let mut v = vec![Rat::zero(); datum.ambient_dim()];
                v[i] = rat(1);
                v
            })
            .collect::<Vec<_>>()
    } else {
        linalg::nullspace(&constraints, datum.ambient_dim())
    };
    let restricted: Vec<Vec<i64>> = normals
        .iter()
        .filter_map(|n| {
            let nq = rvec(n);
            let coords: Vec<Rat> = basis.iter().map(|b| dot(&nq, b)).collect();
            canonical_covector(&coords)
        })
        .unique()
        .collect();
    if binomial(restricted.len(), basis.len()) > 5_000_000 {
        return None;
    }
    Some(count_regions(&restricted, basis.len()))
}

/// Regions of a central hyperplane arrangement by deletion–restriction:
/// `r(A) = r(A \ H) + r(A|_H)`.
fn count_regions(covectors: &[Vec<i64>], dim: usize) -> u64 {
    if dim == 0 {
        return 1;
    }
    let distinct: Vec<Vec<i64>> = covectors
        .iter()
        .filter(|c| !c.iter().all(|&x| x == 0))
        .unique()
        .cloned()
        .collect();
    let Some((h, rest)) = distinct.split_last() else {
        return 1;
    };
    // Restriction: coordinates of the surviving covectors on ker(h).
    let h_q = rvec(h);
    let kernel_basis = linalg::nullspace(&[h_q], dim);
    let restricted: Vec<Vec<i64>> = rest
        .iter()
        .filter_map(|c| {
            let cq = rvec(c);
            let coords: Vec<Rat> = kernel_basis.iter().map(|b| dot(&cq, b)).collect();
            canonical_covector(&coords)
        })
        .collect();
    count_regions(rest, dim) + count_regions(&restricted, dim - 1)
}

// ---------------------------------------------------------------------------
// Temperedness verdicts
// ---------------------------------------------------------------------------

/// Which reading of the threshold to apply. The two conventions disagree
/// away from the boundary; reports carry both, labeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// Temperedness as slow-growth: `p_V <= 2` (boundary at 2).
    DerivedChh,
    /// The threshold read in the opposite direction: `p_V >= 2`.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TemperednessVerdict {
    Tempered,
    Boundary,
    NotTempered,
}

/// Classify `L^2(V)` against the threshold `p_V = 2` under the chosen
/// convention. The boundary value is reported as such under both.
pub fn temperedness_verdict(value: &PvValue, convention: Convention) -> TemperednessVerdict {
    let two = rat(2);
    match (value, convention) {
        (PvValue::Infinite, Convention::DerivedChh) => TemperednessVerdict::NotTempered,
        (PvValue::Infinite, Convention::Printed) => TemperednessVerdict::Tempered,
        (PvValue::Finite(v), Convention::DerivedChh) => {
            if *v == two {
                TemperednessVerdict::Boundary
            } else if *v < two {
                TemperednessVerdict::Tempered
            } else {
                TemperednessVerdict::NotTempered
            }
        }
        (PvValue::Finite(v), Convention::Printed) => {
            if *v == two {
                TemperednessVerdict::Boundary
            } else if *v > two {
                TemperednessVerdict::Tempered
            } else {
                TemperednessVerdict::NotTempered
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Sampling lower bound (oracle cross-check)
// ---------------------------------------------------------------------------

/// `rho_h / rho_V` at a numeric direction.
pub fn ratio_f64(ws: &WeightSystem, datum: &RootDatum, y: &[f64]) -> f64 {
    let mut rho_v = 0.0;
    for (covector, mult) in &ws.weights {
        let v: f64 = covector
            .iter()
            .zip(y)
            .map(|(c, x)| crate::cones::rat_to_f64(c) * x)
            .sum();
        rho_v += *mult as f64 * v.abs();
    }
    rho_v *= 0.5;
    let mut rho_h = 0.0;
    for root in datum.positive_roots() {
        let v: f64 = root.iter().zip(y).map(|(&c, x)| c as f64 * x).sum();
        rho_h += v.abs();
    }
    if rho_v == 0.0 {
        f64::INFINITY
    } else {
        rho_h / rho_v
    }
}

/// Monte Carlo lower bound for `p_V`: the best ratio over random unit
/// directions in the split space, polished by a shrinking pattern search.
/// Every evaluation is of the true ratio, so the result never exceeds the
/// exact maximum.
pub fn pv_sampling_lower_bound(
    ws: &WeightSystem,
    datum: &RootDatum,
    samples: usize,
    seed: u64,
) -> f64 {
    let ambient = datum.ambient_dim();
    let project = |v: &mut Vec<f64>| {
        if datum.family() == Family::A {
            let mean = v.iter().sum::<f64>() / ambient as f64;
            for x in v.iter_mut() {
                *x -= mean;
            }
        }
    };
    let mut rng = CounterRng::new(seed, 0);
    let mut best_dir: Option<Vec<f64>> = None;
    let mut best = f64::NEG_INFINITY;
    for _ in 0..samples {
        let mut v: Vec<f64> = (0..ambient).map(|_| rng.next_gaussian()).collect();
        project(&mut v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-9 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        let r = ratio_f64(ws, datum, &v);
        if r.is_finite() && r > best {
            best = r;
            best_dir = Some(v);
        }
    }
    let Some(mut dir) = best_dir else {
        return f64::NEG_INFINITY;
    };
    // Pattern-search polish with shrinking step.
    let mut step = 0.1;
    while step > 1e-12 {
        let mut improved = false;
        for i in 0..ambient {
            for sgn in [1.0, -1.0] {
                let mut cand = dir.clone();
                cand[i] += sgn * step;
                project(&mut cand);
                let norm = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm < 1e-9 {
                    continue;
                }
                for x in cand.iter_mut() {
                    *x /= norm;
                }
                let r = ratio_f64(ws, datum, &cand);
                if r.is_finite() && r > best {
                    best = r;
                    dir = cand;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    best
}

// ---------------------------------------------------------------------------
// JSON forms
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightEntryJson {
    pub covector: Vec<String>,
    pub mult: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSystemJson {
    pub weights: Vec<WeightEntryJson>,
    #[serde(default)]
    pub label: Option<String>,
}

impl WeightSystem {
    pub fn to_json(&self) -> WeightSystemJson {
        WeightSystemJson {
            weights: self
                .weights
                .iter()
                .map(|(c, m)| WeightEntryJson {
                    covector: c.iter().map(linalg::rat_display).collect(),
                    mult: *m,
                })
                .collect(),
            label: Some(self.label.clone()),
        }
    }

    pub fn from_json(ambient: usize, j: &WeightSystemJson) -> Result<Self, Error> {
        let entries = j
            .weights
            .iter()
            .map(|e| {
                let cov = e
                    .covector
                    .iter()
                    .map(|s| linalg::rat_parse(s))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok::<_, Error>((cov, e.mult))
            })
            .collect::<Result<Vec<_>, _>>()?;
        WeightSystem::new(
            ambient,
            entries,
            j.label.clone().unwrap_or_else(|| "custom".into()),
        )
    }
}

/// Big-integer helper for narrowing serialized values.
pub fn bigint_to_i64(b: &BigInt) -> Option<i64> {
    i64::try_from(b).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a_datum(rank: usize) -> RootDatum {
        RootDatum::new(Family::A, rank).unwrap()
    }

    #[test]
    fn rho_of_standard_sl2() {
        let ws = WeightSystem::standard_sl(2).unwrap();
        assert_eq!(rho_value(&ws, &rvec(&[1, -1])), rat(1));
        assert_eq!(rho_value(&ws, &rvec(&[0, 0])), rat(0));
    }

    #[test]
    fn rho_of_adjoint_equals_rho_h() {
        for datum in [
            a_datum(1),
            a_datum(2),
            RootDatum::new(Family::B, 2).unwrap(),
        ] {
            let ws = WeightSystem::adjoint(&datum).unwrap();
            let mut rng = CounterRng::new(4, 0);
            for _ in 0..40 {
                let y: Vec<Rat> = (0..datum.ambient_dim())
                    .map(|_| rat(rng.next_i64(-7, 7)))
                    .collect();
                assert_eq!(rho_value(&ws, &y), datum.rho_h(&y));
            }
        }
    }

    #[test]
    fn rho_is_subadditive_and_homogeneous() {
        let ws = WeightSystem::standard_sl(3).unwrap();
        let mut rng = CounterRng::new(6, 0);
        for _ in 0..200 {
            let x: Vec<Rat> = (0..3).map(|_| rat(rng.next_i64(-9, 9))).collect();
            let y: Vec<Rat> = (0..3).map(|_| rat(rng.next_i64(-9, 9))).collect();
            let sum: Vec<Rat> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            assert!(rho_value(&ws, &sum) <= rho_value(&ws, &x) + rho_value(&ws, &y));
            let lambda = rat(rng.next_i64(0, 5));
            let scaled: Vec<Rat> = x.iter().map(|a| a * &lambda).collect();
            assert_eq!(rho_value(&ws, &scaled), rho_value(&ws, &x) * &lambda);
        }
    }

    #[test]
    fn pv_standard_sl2_is_two() {
        let datum = a_datum(1);
        let ws = WeightSystem::standard_sl(2).unwrap();
        let res = p_v(&ws, &datum).unwrap();
        assert_eq!(res.value, rat(2));
        assert_eq!(res.argmax_ray, vec![1, -1]);
        assert_eq!(res.ray_count, 1);
        assert_eq!(res.chamber_count, Some(2));
    }

    #[test]
    fn pv_adjoint_is_one() {
        for datum in [
            a_datum(1),
            a_datum(2),
            RootDatum::new(Family::B, 2).unwrap(),
        ] {
            let ws = WeightSystem::adjoint(&datum).unwrap();
            let res = p_v(&ws, &datum).unwrap();
            assert_eq!(res.value, rat(1), "{}", ws.label());
        }
    }

    #[test]
    fn pv_standard_sl3_is_four() {
        let datum = a_datum(2);
        let ws = WeightSystem::standard_sl(3).unwrap();
        let res = p_v(&ws, &datum).unwrap();
        assert_eq!(res.value, rat(4));
        assert_eq!(res.argmax_ray, vec![1, 0, -1]);
        // Arrangement: three root lines and three weight lines in the plane.
        assert_eq!(res.chamber_count, Some(12));
        assert_eq!(res.ray_count, 6);
    }

    #[test]
    fn pv_direct_sum_halves() {
        let datum = a_datum(1);
        let ws = WeightSystem::standard_sl(2).unwrap();
        let double = ws.direct_sum(&ws).unwrap();
        let res = p_v(&double, &datum).unwrap();
        assert_eq!(res.value, rat(1));

        let mut rng = CounterRng::new(12, 0);
        for trial in 0..20 {
            let rank = 1 + rng.next_usize(2);
            let datum = a_datum(rank);
            let n = datum.ambient_dim();
            let entries: Vec<(Vec<Rat>, usize)> = (0..n)
                .map(|_| {
                    let cov: Vec<Rat> = (0..n).map(|_| rat(rng.next_i64(-3, 3))).collect();
                    (cov, 1 + rng.next_usize(2))
                })
                .collect();
            let Ok(ws) = WeightSystem::new(n, entries, format!("random{trial}")) else {
                continue;
            };
            let single = p_v(&ws, &datum);
            let double = p_v(&ws.direct_sum(&ws).unwrap(), &datum);
            match (single, double) {
                (Ok(s), Ok(d)) => assert_eq!(d.value * rat(2), s.value),
                (Err(Error::NonCompactKernel { .. }), Err(Error::NonCompactKernel { .. })) => {}
                (s, d) => panic!("inconsistent outcomes {s:?} vs {d:?}"),
            }
        }
    }

    #[test]
    fn pv_argmax_reverifies_and_dominates_random_rays() {
        let datum = a_datum(2);
        let ws = WeightSystem::standard_sl(3).unwrap();
        let res = p_v(&ws, &datum).unwrap();
        let y = rvec(&res.argmax_ray);
        assert_eq!(datum.rho_h(&y) / rho_value(&ws, &y), res.value);
        let mut rng = CounterRng::new(8, 0);
        for _ in 0..10_000 {
            let mut y: Vec<i64> = (0..3).map(|_| rng.next_i64(-20, 20)).collect();
            let s: i64 = y.iter().sum();
            y[2] -= s; // stay in the trace-zero space
            let yq = rvec(&y);
            let rho_v = rho_value(&ws, &yq);
            if rho_v.is_zero() {
                continue;
            }
            assert!(datum.rho_h(&yq) / rho_v <= res.value);
        }
    }

    #[test]
    fn pv_invariant_under_weyl_moves() {
        let datum = a_datum(2);
        let ws = WeightSystem::standard_sl(3).unwrap();
        let base = p_v(&ws, &datum).unwrap().value;
        for w in datum.weyl_elements(10).unwrap() {
            let moved = ws.transformed(&w);
            assert_eq!(p_v(&moved, &datum).unwrap().value, base);
        }
    }

    #[test]
    fn non_compact_kernel_detected() {
        let datum = a_datum(2);
        // A single coordinate weight vanishes on the ray (0, 1, -1).
        let ws = WeightSystem::new(3, vec![(rvec(&[1, 0, 0]), 1)], "thin").unwrap();
        match p_v(&ws, &datum) {
            Err(Error::NonCompactKernel { ray }) => {
                assert_eq!(ray, vec![0, 1, -1]);
            }
            other => panic!("expected NonCompactKernel, got {other:?}"),
        }
        let (value, _) = p_v_or_infinite(&ws, &datum).unwrap();
        assert_eq!(value, PvValue::Infinite);
    }

    #[test]
    fn sampling_never_beats_exact() {
        let datum = a_datum(2);
        let ws = WeightSystem::standard_sl(3).unwrap();
        let exact = 4.0;
        let lower = pv_sampling_lower_bound(&ws, &datum, 20_000, 7);
        assert!(lower <= exact + 1e-9);
        assert!(lower > exact - 1e-3, "lower bound too weak: {lower}");
    }

    #[test]
    fn verdict_conventions() {
        use Convention::*;
        use TemperednessVerdict::*;
        let two = PvValue::Finite(rat(2));
        assert_eq!(temperedness_verdict(&two, DerivedChh), Boundary);
        assert_eq!(temperedness_verdict(&two, Printed), Boundary);
        let one = PvValue::Finite(rat(1));
        assert_eq!(temperedness_verdict(&one, DerivedChh), Tempered);
        assert_eq!(temperedness_verdict(&one, Printed), NotTempered);
        let four = PvValue::Finite(rat(4));
        assert_eq!(temperedness_verdict(&four, DerivedChh), NotTempered);
        assert_eq!(temperedness_verdict(&four, Printed), Tempered);
        assert_eq!(temperedness_verdict(&PvValue::Infinite, DerivedChh), NotTempered);
        assert_eq!(temperedness_verdict(&PvValue::Infinite, Printed), Tempered);
    }

    #[test]
    fn weight_system_merging_and_errors() {
        let ws = WeightSystem::new(
            2,
            vec![(rvec(&[1, 0]), 1), (rvec(&[1, 0]), 2), (rvec(&[0, 1]), 1)],
            "merge",
        )
        .unwrap();
        assert_eq!(ws.weights().len(), 2);
        assert_eq!(ws.total_multiplicity(), 4);
        assert!(matches!(
            WeightSystem::new(0, vec![], "empty"),
            Err(Error::DegenerateAmbient)
        ));
        assert!(WeightSystem::new(2, vec![(rvec(&[1, 0]), 0)], "bad").is_err());
    }

    #[test]
    fn weight_json_roundtrip() {
        let ws = WeightSystem::standard_sl(3).unwrap();
        let j = ws.to_json();
        let back = WeightSystem::from_json(3, &j).unwrap();
        assert_eq!(back, ws);
    }
}
