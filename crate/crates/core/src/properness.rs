//! The criterion engine: properness of reductive pairs with exact
//! witnesses, similarity, the Calabi–Markus rank criterion, the
//! cocompactness dimension identity, the partition classification of
//! `SL(2,R)` embeddings into `SL(n,R)` with a formula audit, and sharpness
//! estimation from Cartan-projection samples.
//!
//! A reductive pair is proper exactly when `a_H` meets every Weyl translate
//! of `a_L` trivially. Non-proper verdicts carry a witness `(w, x)` with
//! `x ∈ a_H` and `w^{-1} x ∈ a_L`, both verified by exact arithmetic.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::cones::{
    distance_to_subspace_union, pitchfork_unions, similar_subspace_unions, subspace_intersection,
    ConeMember, ConeUnion, PolyCone, RationalSubspace,
};
use crate::error::Error;
use crate::linalg::{rat_display, rvec, IntMat, Rat};
use crate::rootdata::RootDatum;

// ---------------------------------------------------------------------------
// Reductive pairs
// ---------------------------------------------------------------------------

/// Split-subspace data of a triple `L ⊂ G ⊃ H`: the ambient restricted root
/// datum of `G` and the split subspaces of the two subgroups.
#[derive(Debug, Clone)]
pub struct ReductivePair {
    pub datum: RootDatum,
    pub a_l: RationalSubspace,
    pub a_h: RationalSubspace,
}

impl ReductivePair {
    pub fn new(
        datum: RootDatum,
        a_l: RationalSubspace,
        a_h: RationalSubspace,
    ) -> Result<Self, Error> {
        let ambient = datum.ambient_dim();
        for s in [&a_l, &a_h] {
            if s.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    got: s.ambient_dim(),
                });
            }
        }
        Ok(ReductivePair { datum, a_l, a_h })
    }

    pub fn swapped(&self) -> ReductivePair {
        ReductivePair {
            datum: self.datum.clone(),
            a_l: self.a_h.clone(),
            a_h: self.a_l.clone(),
        }
    }
}

/// How a verdict was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    WeylExhaustive,
    ClosedForm,
}

/// Witness of a non-proper pair: `vector ∈ a_H ∩ w·a_L`, nonzero.
#[derive(Debug, Clone)]
pub struct PropernessWitness {
    pub weyl: IntMat,
    pub vector: Vec<Rat>,
}

/// Outcome of the properness criterion.
#[derive(Debug, Clone)]
pub struct PropernessVerdict {
    pub proper: bool,
    pub witness: Option<PropernessWitness>,
    pub method: Method,
}

/// Properness of the `L`-action on `G/H` (equivalently of `H` on `G/L`):
/// true iff `a_H ∩ w·a_L = {0}` for every Weyl element `w`. Scans the Weyl
/// group in deterministic breadth-first order and returns the first
/// violation found.
pub fn is_proper_reductive(pair: &ReductivePair, cap: u64) -> Result<PropernessVerdict, Error> {
    let elements = pair.datum.weyl_elements(cap)?;
    for w in elements {
        let moved = pair.a_l.transformed(&w);
        let inter = subspace_intersection(&pair.a_h, &moved)?;
        if let Some(x) = inter.basis().first() {
            debug_assert!(pair.a_h.contains_vector(x));
            debug_assert!(pair.a_l.contains_vector(&w.transpose().apply_rat(x)));
            return Ok(PropernessVerdict {
                proper: false,
                witness: Some(PropernessWitness {
                    weyl: w,
                    vector: x.clone(),
                }),
                method: Method::WeylExhaustive,
            });
        }
    }
    Ok(PropernessVerdict {
        proper: true,
        witness: None,
        method: Method::WeylExhaustive,
    })
}

/// Distinct subspaces in the Weyl orbit `W · s`.
pub fn weyl_orbit_subspaces(
    datum: &RootDatum,
    s: &RationalSubspace,
    cap: u64,
) -> Result<Vec<RationalSubspace>, Error> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for w in datum.weyl_elements(cap)? {
        let moved = s.transformed(&w);
        let key: String = moved
            .basis()
            .iter()
            .map(|row| row.iter().map(rat_display).join(","))
            .join(";");
        if seen.insert(key) {
            out.push(moved);
        }
    }
    Ok(out)
}

/// Similarity of the pair: set equality of the Weyl-invariant projections
/// `W·a_L` and `W·a_H`.
pub fn is_similar_reductive(pair: &ReductivePair, cap: u64) -> Result<bool, Error> {
    let orbit_l = ConeUnion::of_subspaces(weyl_orbit_subspaces(&pair.datum, &pair.a_l, cap)?)?;
    let orbit_h = ConeUnion::of_subspaces(weyl_orbit_subspaces(&pair.datum, &pair.a_h, cap)?)?;
    similar_subspace_unions(&orbit_l, &orbit_h)
}

// ---------------------------------------------------------------------------
// Calabi–Markus and cocompactness
// ---------------------------------------------------------------------------

/// Rank criterion for the existence of an infinite discontinuous group on
/// `G/H`: strict rank drop.
pub fn calabi_markus_ranks(rank_g: usize, rank_h: usize) -> bool {
    rank_g > rank_h
}

/// Split space of the standard rank-`rank_h` subgroup inside the datum's
/// ambient coordinates: the first `rank_h` axes for the signed families, the
/// leading trace-zero block for type A.
pub fn standard_sub_split_space(
    datum: &RootDatum,
    rank_h: usize,
) -> Result<RationalSubspace, Error> {
    let ambient = datum.ambient_dim();
    if rank_h > datum.rank() {
        return Err(Error::DimensionMismatch {
            expected: datum.rank(),
            got: rank_h,
        });
    }
    let vectors: Vec<Vec<Rat>> = match datum.family() {
        crate::rootdata::Family::A => (0..rank_h)
            .map(|i| {
                let mut v = vec![0i64; ambient];
                v[i] = 1;
                v[i + 1] = -1;
                rvec(&v)
            })
            .collect(),
        _ => (0..rank_h)
            .map(|i| {
                let mut v = vec![0i64; ambient];
                v[i] = 1;
                rvec(&v)
            })
            .collect(),
    };
    RationalSubspace::from_spanning(ambient, &vectors)
}

/// Full split space of the datum itself (the trace-zero hyperplane for
/// type A, everything otherwise).
pub fn full_split_space(datum: &RootDatum) -> RationalSubspace {
    standard_sub_split_space(datum, datum.rank()).expect("rank fits")
}

/// Similarity route to the same verdict, run on explicit subspace data: the
/// space admits an infinite discontinuous group iff the full split space is
/// NOT similar to the Weyl orbit of the standard rank-`rank_h` subgroup's
/// split space.
pub fn calabi_markus_by_similarity(
    datum: &RootDatum,
    rank_h: usize,
    cap: u64,
) -> Result<bool, Error> {
    let a_h = standard_sub_split_space(datum, rank_h)?;
    let pair = ReductivePair::new(datum.clone(), full_split_space(datum), a_h)?;
    Ok(!is_similar_reductive(&pair, cap)?)
}

/// Dimension identity satisfied exactly when a proper reductive `L`-action
/// on `G/H` is cocompact: `d(L) + d(H) = d(G)` with `d` the dimension of the
/// symmetric-space part.
pub fn cocompact_standard_check(d_g: usize, d_h: usize, d_l: usize) -> bool {
    d_l + d_h == d_g
}

// ---------------------------------------------------------------------------
// SL(2,R) -> SL(n,R) partition machinery
// ---------------------------------------------------------------------------

/// A partition of `n` stored as multiplicities: `mults[j-1]` copies of the
/// part `j`, with `Σ j·m_j = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    mults: Vec<usize>,
}

impl Partition {
    /// From multiplicities `m_1, m_2, ...` (index `j-1` holds `m_j`).
    pub fn from_multiplicities(mults: Vec<usize>) -> Result<Self, Error> {
        let n: usize = mults.iter().enumerate().map(|(i, m)| (i + 1) * m).sum();
        if n == 0 {
            return Err(Error::InvalidPartition {
                reason: "empty partition".into(),
            });
        }
        let mut mults = mults;
        mults.resize(n, 0);
        Ok(Partition { mults })
    }

    /// From explicit parts, e.g. `[3, 2, 2, 1]` for `n = 8`.
    pub fn from_parts(parts: &[usize]) -> Result<Self, Error> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidPartition {
                reason: "parts must be a nonempty list of positive integers".into(),
            });
        }
        let n: usize = parts.iter().sum();
        let mut mults = vec![0usize; n];
        for &p in parts {
            mults[p - 1] += 1;
        }
        Ok(Partition { mults })
    }

    pub fn n(&self) -> usize {
        self.mults.len()
    }

    /// Multiplicity of the part `j` (1-based).
    pub fn multiplicity(&self, j: usize) -> usize {
        if j >= 1 && j <= self.mults.len() {
            self.mults[j - 1]
        } else {
            0
        }
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.mults
    }

    /// Parts in descending order.
    pub fn parts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for j in (1..=self.n()).rev() {
            out.extend(std::iter::repeat_n(j, self.multiplicity(j)));
        }
        out
    }

    /// The single-part partition `(n)`.
    pub fn is_irreducible(&self) -> bool {
        self.multiplicity(self.n()) == 1
    }

    /// All partitions of `n`, in descending lexicographic part order.
    pub fn all_of(n: usize) -> Vec<Partition> {
        fn rec(
            remaining: usize,
            max_part: usize,
            stack: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if remaining == 0 {
                out.push(stack.clone());
                return;
            }
            for part in (1..=max_part.min(remaining)).rev() {
                stack.push(part);
                rec(remaining - part, part, stack, out);
                stack.pop();
            }
        }
        let mut parts_list = Vec::new();
        rec(n, n, &mut Vec::new(), &mut parts_list);
        parts_list
            .into_iter()
            .map(|p| Partition::from_parts(&p).expect("generated parts are valid"))
            .collect()
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", self.parts().iter().join(","))
    }
}

/// Split direction of the embedding attached to a partition: the
/// concatenation, over parts `j` in descending order, of
/// `v_j = (j-1, j-3, ..., 1-j)`. Entries sum to zero.
pub fn sl2_ray(partition: &Partition) -> Vec<i64> {
    let mut ray = Vec::with_capacity(partition.n());
    for j in (1..=partition.n()).rev() {
        for _ in 0..partition.multiplicity(j) {
            let j = j as i64;
            ray.extend((0..j).map(|k| j - 1 - 2 * k));
        }
    }
    debug_assert_eq!(ray.iter().sum::<i64>(), 0);
    ray
}

fn check_sl2_range(partition: &Partition, m: usize) -> Result<(), Error> {
    if m < 1 || m >= partition.n() {
        return Err(Error::InvalidPartition {
            reason: format!("need 1 <= m < n, got m = {m}, n = {}", partition.n()),
        });
    }
    Ok(())
}

/// Exhaustive properness verdict for the action attached to `partition` on
/// the quotient by the block-diagonal `SL(m,R)`: proper iff no permutation
/// of the ray lands (nonzero) in `{(b_1..b_m, 0..0) : Σb = 0}`. Since the
/// ray sums to zero, membership is exactly "the last `n-m` coordinates
/// vanish". The zero ray (all parts of size one) is proper: the image group
/// is compact.
pub fn sl2_proper_oracle(partition: &Partition, m: usize) -> Result<bool, Error> {
    check_sl2_range(partition, m)?;
    let ray = sl2_ray(partition);
    let n = partition.n();
    if ray.iter().all(|&x| x == 0) {
        return Ok(true);
    }
    for perm in (0..n).permutations(n) {
        if perm[m..].iter().all(|&i| ray[i] == 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Zero-count shortcut for the same verdict: a permutation can zero out the
/// tail iff the ray has at least `n-m` zero entries (the ray has exactly one
/// zero per odd part).
pub fn sl2_proper_zero_count(partition: &Partition, m: usize) -> Result<bool, Error> {
    check_sl2_range(partition, m)?;
    let ray = sl2_ray(partition);
    if ray.iter().all(|&x| x == 0) {
        return Ok(true);
    }
    let zeros = ray.iter().filter(|&&x| x == 0).count();
    Ok(zeros < partition.n() - m)
}

/// The general closed-form inequality as printed: `Σ_{j odd} j·m_j < n-m`.
/// Kept verbatim for the audit; see [`sl2_formula_audit`].
pub fn sl2_proper_printed_formula(partition: &Partition, m: usize) -> Result<bool, Error> {
    check_sl2_range(partition, m)?;
    let odd_sum: usize = (1..=partition.n())
        .filter(|j| j % 2 == 1)
        .map(|j| j * partition.multiplicity(j))
        .sum();
    Ok(odd_sum < partition.n() - m)
}

/// Closed form for the irreducible embedding (single part `n`): proper iff
/// `n` is even or `n - m >= 2`.
pub fn sl2_irreducible_closed_form(n: usize, m: usize) -> bool {
    n % 2 == 0 || n - m >= 2
}

/// One audited case of the partition criterion.
#[derive(Debug, Clone, Serialize)]
pub struct Sl2AuditRow {
    pub parts: Vec<usize>,
    pub m: usize,
    pub oracle: bool,
    pub zero_count: bool,
    pub printed: bool,
    /// Set on irreducible partitions only.
    pub irreducible_form: Option<bool>,
}

/// Cross-validation table of the partition criterion over all partitions of
/// `n <= n_max` and all `1 <= m < n`.
#[derive(Debug, Clone, Serialize)]
pub struct Sl2Audit {
    pub n_max: usize,
    pub rows: Vec<Sl2AuditRow>,
    pub zero_count_disagreements: usize,
    pub irreducible_disagreements: usize,
    /// Cases where the printed inequality contradicts the exhaustive oracle.
    pub printed_disagreements: Vec<(Vec<usize>, usize)>,
}

/// Tabulate oracle vs. shortcut vs. printed inequality vs. irreducible
/// closed form. Disagreements are reported, never reconciled.
pub fn sl2_formula_audit(n_max: usize) -> Sl2Audit {
    let mut cases = Vec::new();
    for n in 2..=n_max {
        for partition in Partition::all_of(n) {
            for m in 1..n {
                cases.push((partition.clone(), m));
            }
        }
    }
    let rows: Vec<Sl2AuditRow> = cases
        .par_iter()
        .map(|(partition, m)| {
            let oracle = sl2_proper_oracle(partition, *m).expect("validated range");
            let zero_count = sl2_proper_zero_count(partition, *m).expect("validated range");
            let printed = sl2_proper_printed_formula(partition, *m).expect("validated range");
            let irreducible_form = partition
                .is_irreducible()
                .then(|| sl2_irreducible_closed_form(partition.n(), *m));
            Sl2AuditRow {
                parts: partition.parts(),
                m: *m,
                oracle,
                zero_count,
                printed,
                irreducible_form,
            }
        })
        .collect();
    let zero_count_disagreements = rows.iter().filter(|r| r.zero_count != r.oracle).count();
    let irreducible_disagreements = rows
        .iter()
        .filter(|r| r.irreducible_form.is_some_and(|v| v != r.oracle))
        .count();
    let printed_disagreements = rows
        .iter()
        .filter(|r| r.printed != r.oracle)
        .map(|r| (r.parts.clone(), r.m))
        .collect();
    Sl2Audit {
        n_max,
        rows,
        zero_count_disagreements,
        irreducible_disagreements,
        printed_disagreements,
    }
}

// ---------------------------------------------------------------------------
// Sharpness
// ---------------------------------------------------------------------------

/// Linear lower-bound fit `dist(x, mu_H) >= c‖x‖ - C` over a sample of
/// Cartan projections.
#[derive(Debug, Clone, Serialize)]
pub struct SharpnessFit {
    /// `(c, C(c))` with `C(c)` the smallest offset valid for every sample.
    pub pareto: Vec<(f64, f64)>,
    /// Infimum of `dist/norm` over the deep-tail samples.
    pub c_asymptotic: f64,
    /// Norm threshold used for the tail estimate (top half of sample norms).
    pub tail_floor: f64,
}

/// For each `c` in the grid, report the minimal `C` making the bound hold on
/// all samples; the asymptotic slope uses samples in the top half of norms.
pub fn sharpness_fit(
    samples: &[Vec<f64>],
    mu_h: &ConeUnion,
    c_grid: &[f64],
) -> Result<SharpnessFit, Error> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut norms = Vec::with_capacity(samples.len());
    let mut dists = Vec::with_capacity(samples.len());
    for x in samples {
        norms.push(x.iter().map(|v| v * v).sum::<f64>().sqrt());
        dists.push(distance_to_subspace_union(x, mu_h)?);
    }
    let pareto = c_grid
        .iter()
        .map(|&c| {
            let cc = norms
                .iter()
                .zip(&dists)
                .map(|(&n, &d)| (c * n - d).max(0.0))
                .fold(0.0f64, f64::max);
            (c, cc)
        })
        .collect();
    let mut sorted = norms.clone();
    sorted.sort_by(f64::total_cmp);
    let tail_floor = sorted[sorted.len() / 2];
    let c_asymptotic = norms
        .iter()
        .zip(&dists)
        .filter(|(&n, _)| n >= tail_floor && n > 0.0)
        .map(|(&n, &d)| d / n)
        .fold(f64::INFINITY, f64::min);
    let c_asymptotic = if c_asymptotic.is_finite() {
        c_asymptotic
    } else {
        0.0
    };
    Ok(SharpnessFit {
        pareto,
        c_asymptotic,
        tail_floor,
    })
}

/// Sharpness in asymptotic-cone form: the sample cone meets the union of
/// limit cones of `mu_H` only at the origin.
pub fn is_sharp_cones(gamma_inf: &PolyCone, mu_h_inf: &ConeUnion) -> Result<bool, Error> {
    let gamma = ConeUnion::new(vec![ConeMember::Cone(gamma_inf.clone())])?;
    pitchfork_unions(&gamma, mu_h_inf)
}

// ---------------------------------------------------------------------------
// Verdict JSON
// ---------------------------------------------------------------------------

/// Wire form of a properness verdict.
#[derive(Debug, Clone, Serialize)]
pub struct PropernessVerdictJson {
    pub proper: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    pub method: Method,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub weyl: Vec<Vec<i64>>,
    pub vector: Vec<String>,
}

impl PropernessVerdict {
    pub fn to_json(&self) -> PropernessVerdictJson {
        PropernessVerdictJson {
            proper: self.proper,
            witness: self.witness.as_ref().map(|w| WitnessJson {
                weyl: w.weyl.rows(),
                vector: w.vector.iter().map(rat_display).collect(),
            }),
            method: self.method,
        }
    }
}
