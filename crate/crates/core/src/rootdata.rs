//! Restricted root systems and Weyl groups for the classical families.
//!
//! Coordinates: the type-A rank-`r` system lives in the trace-zero
//! hyperplane of the ambient `Z^(r+1)` (so Weyl elements are plain
//! permutation matrices on the ambient space); types B/C/D/BC live in
//! `Z^r` with signed-permutation Weyl groups. All arithmetic in this
//! module is exact.

use std::collections::HashSet;
use std::collections::VecDeque;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{rat, IntMat, Rat};

/// Classical family tag for a restricted root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
        };
        f.write_str(s)
    }
}

/// A restricted root system with its Weyl group generators.
#[derive(Debug, Clone)]
pub struct RootDatum {
    family: Family,
    rank: usize,
    ambient: usize,
    roots: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    simple_roots: Vec<Vec<i64>>,
    simple_reflections: Vec<IntMat>,
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn axis_diff(n: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v[j] = -1;
    v
}

fn axis_sum(n: usize, i: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v[j] = 1;
    v
}

fn neg(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| -x).collect()
}

/// Coordinate swap `i <-> j` as a matrix (reflection in `e_i - e_j`).
fn swap_matrix(n: usize, i: usize, j: usize) -> IntMat {
    let mut m = IntMat::identity(n);
    m.set(i, i, 0);
    m.set(j, j, 0);
    m.set(i, j, 1);
    m.set(j, i, 1);
    m
}

/// Sign flip of coordinate `i` (reflection in `e_i`, equivalently `2e_i`).
fn flip_matrix(n: usize, i: usize) -> IntMat {
    let mut m = IntMat::identity(n);
    m.set(i, i, -1);
    m
}

/// Swap `i <-> j` with both signs negated (reflection in `e_i + e_j`).
fn swap_negate_matrix(n: usize, i: usize, j: usize) -> IntMat {
    let mut m = IntMat::identity(n);
    m.set(i, i, 0);
    m.set(j, j, 0);
    m.set(i, j, -1);
    m.set(j, i, -1);
    m
}

impl RootDatum {
    /// Build the root datum for `family` at the given rank.
    pub fn new(family: Family, rank: usize) -> Result<Self, Error> {
        let fail = || Error::UnsupportedFamily {
            family: family.to_string(),
            rank,
        };
        if rank == 0 {
            return Err(fail());
        }
        if family == Family::D && rank < 2 {
            return Err(fail());
        }

        let (ambient, positive, simple, reflections) = match family {
            Family::A => {
                let n = rank + 1;
                let mut positive = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        positive.push(axis_diff(n, i, j));
                    }
                }
                let simple: Vec<_> = (0..rank).map(|i| axis_diff(n, i, i + 1)).collect();
                let refl: Vec<_> = (0..rank).map(|i| swap_matrix(n, i, i + 1)).collect();
                (n, positive, simple, refl)
            }
            Family::B | Family::C | Family::BC => {
                let n = rank;
                let mut positive = Vec::new();
                for i in 0..n {
                    match family {
                        Family::B => positive.push(unit(n, i)),
                        Family::C => {
                            let mut v = unit(n, i);
                            v[i] = 2;
                            positive.push(v);
                        }
                        Family::BC => {
                            positive.push(unit(n, i));
                            let mut v = unit(n, i);
                            v[i] = 2;
                            positive.push(v);
                        }
                        _ => unreachable!(),
                    }
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        positive.push(axis_diff(n, i, j));
                        positive.push(axis_sum(n, i, j));
                    }
                }
                let mut simple: Vec<_> = (0..rank - 1).map(|i| axis_diff(n, i, i + 1)).collect();
                match family {
                    Family::C => {
                        let mut v = unit(n, rank - 1);
                        v[rank - 1] = 2;
                        simple.push(v);
                    }
                    _ => simple.push(unit(n, rank - 1)),
                }
                let mut refl: Vec<_> = (0..rank - 1).map(|i| swap_matrix(n, i, i + 1)).collect();
                refl.push(flip_matrix(n, rank - 1));
                (n, positive, simple, refl)
            }
            Family::D => {
                let n = rank;
                let mut positive = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        positive.push(axis_diff(n, i, j));
                        positive.push(axis_sum(n, i, j));
                    }
                }
                let mut simple: Vec<_> = (0..rank - 1).map(|i| axis_diff(n, i, i + 1)).collect();
                simple.push(axis_sum(n, rank - 2, rank - 1));
                let mut refl: Vec<_> = (0..rank - 1).map(|i| swap_matrix(n, i, i + 1)).collect();
                refl.push(swap_negate_matrix(n, rank - 2, rank - 1));
                (n, positive, simple, refl)
            }
        };

        let mut roots = positive.clone();
        roots.extend(positive.iter().map(|v| neg(v)));

        Ok(RootDatum {
            family,
            rank,
            ambient,
            roots,
            positive_roots: positive,
            simple_roots: simple,
            simple_reflections: reflections,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the ambient coordinate space (`rank + 1` for type A).
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn simple_reflections(&self) -> &[IntMat] {
        &self.simple_reflections
    }

    /// Order of the Weyl group from the classical formulas.
    pub fn weyl_order(&self) -> u128 {
        let fact = |k: usize| -> u128 { (1..=k as u128).product() };
        match self.family {
            Family::A => fact(self.rank + 1),
            Family::B | Family::C | Family::BC => (1u128 << self.rank) * fact(self.rank),
            Family::D => (1u128 << (self.rank - 1)) * fact(self.rank),
        }
    }

    /// Materialize the full Weyl group as matrices, breadth-first from the
    /// simple reflections. Deterministic order. Errors when the known group
    /// order exceeds `cap` (callers wanting a lazy stream use [`Self::weyl_iter`]).
    pub fn weyl_elements(&self, cap: u64) -> Result<Vec<IntMat>, Error> {
        let order = self.weyl_order();
        if order > cap as u128 {
            return Err(Error::CapExceeded {
                needed: order,
                cap: cap as u128,
            });
        }
        let out: Vec<IntMat> = self.weyl_iter().collect();
        debug_assert_eq!(out.len() as u128, order);
        Ok(out)
    }

    /// Lazy breadth-first enumeration of the Weyl group. Elements appear in
    /// a deterministic order (identity first, then by word length).
    pub fn weyl_iter(&self) -> WeylIter<'_> {
        let id = IntMat::identity(self.ambient);
        let mut seen = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::new();
        queue.push_back(id);
        WeylIter {
            generators: &self.simple_reflections,
            seen,
            queue,
        }
    }

    /// Whether `v` lies in the closed dominant chamber.
    pub fn is_dominant(&self, v: &[Rat]) -> bool {
        self.positive_roots.iter().all(|alpha| {
            let val: Rat = alpha
                .iter()
                .zip(v)
                .map(|(&a, x)| x * rat(a))
                .sum();
            !val.is_negative()
        })
    }

    /// Dominant-chamber representative of the Weyl orbit of `v`.
    pub fn dominant_representative(&self, v: &[Rat]) -> Vec<Rat> {
        self.dominant_representative_with_witness(v).0
    }

    /// Dominant representative together with the Weyl element mapping `v`
    /// onto it.
    pub fn dominant_representative_with_witness(&self, v: &[Rat]) -> (Vec<Rat>, IntMat) {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        let n = self.ambient;
        match self.family {
            Family::A => {
                // Sort coordinates descending by a permutation matrix.
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| v[b].cmp(&v[a]));
                let mut w = IntMat::zero(n);
                for (row, &src) in idx.iter().enumerate() {
                    w.set(row, src, 1);
                }
                (w.apply_rat(v), w)
            }
            Family::B | Family::C | Family::BC => {
                // Flip negatives, then sort absolute values descending.
                let mut w = IntMat::zero(n);
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| v[b].abs().cmp(&v[a].abs()));
                for (row, &src) in idx.iter().enumerate() {
                    w.set(row, src, if v[src].is_negative() { -1 } else { 1 });
                }
                (w.apply_rat(v), w)
            }
            Family::D => {
                // Even number of sign flips: if an odd number of negatives
                // must be flipped, leave the smallest-magnitude coordinate
                // negated.
                let mut idx: Vec<usize> = (0..n).collect();
                idx.sort_by(|&a, &b| v[b].abs().cmp(&v[a].abs()));
                let negatives = v.iter().filter(|x| x.is_negative()).count();
                let mut w = IntMat::zero(n);
                for (row, &src) in idx.iter().enumerate() {
                    let mut sign = if v[src].is_negative() { -1 } else { 1 };
                    if negatives % 2 == 1 && row == n - 1 {
                        sign = -sign;
                    }
                    w.set(row, src, sign);
                }
                (w.apply_rat(v), w)
            }
        }
    }

    /// `rho_h(Y) = sum over positive roots of |alpha(Y)|`, the Weyl-invariant
    /// Haar growth exponent. Equals half the sum over all roots.
    pub fn rho_h(&self, y: &[Rat]) -> Rat {
        assert_eq!(y.len(), self.ambient, "ambient dimension mismatch");
        let mut total = Rat::zero();
        for alpha in &self.positive_roots {
            let val: Rat = alpha.iter().zip(y).map(|(&a, x)| x * rat(a)).sum();
            total += val.abs();
        }
        total
    }

    /// Membership test for Weyl-element candidates: signed permutation
    /// matrices preserving the root set, with the type-specific sign
    /// constraints (no flips for A, even flips for D).
    pub fn is_weyl_element(&self, m: &IntMat) -> bool {
        if m.dim() != self.ambient || !m.is_signed_permutation() {
            return false;
        }
        match self.family {
            Family::A => m.negative_entries() == 0,
            Family::D => m.negative_entries() % 2 == 0,
            _ => true,
        }
    }
}

/// Breadth-first Weyl group stream; see [`RootDatum::weyl_iter`].
pub struct WeylIter<'a> {
    generators: &'a [IntMat],
    seen: HashSet<IntMat>,
    queue: VecDeque<IntMat>,
}

impl Iterator for WeylIter<'_> {
    type Item = IntMat;

    fn next(&mut self) -> Option<IntMat> {
        let current = self.queue.pop_front()?;
        for g in self.generators {
            let next = g.mul(&current);
            if self.seen.insert(next.clone()) {
                self.queue.push_back(next);
            }
        }
        Some(current)
    }
}

// --- JSON form -------------------------------------------------------------

/// Serialized form: integer root coordinates only.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootDatumJson {
    pub family: Family,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<Vec<i64>>>,
}

impl RootDatum {
    pub fn to_json(&self) -> RootDatumJson {
        RootDatumJson {
            family: self.family,
            rank: self.rank,
            roots: Some(self.roots.clone()),
        }
    }

    /// Rebuild from the JSON form; if explicit roots are present they must
    /// match the canonical construction.
    pub fn from_json(j: &RootDatumJson) -> Result<Self, Error> {
        let datum = RootDatum::new(j.family, j.rank)?;
        if let Some(roots) = &j.roots {
            let expected: HashSet<_> = datum.roots.iter().cloned().collect();
            let given: HashSet<_> = roots.iter().cloned().collect();
            if expected != given {
                return Err(Error::InvalidInput(format!(
                    "supplied roots do not match the {}{} system",
                    j.family, j.rank
                )));
            }
        }
        Ok(datum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{in_span, rvec};
    use crate::rng::CounterRng;
    use num_traits::One;
    use proptest::prelude::*;

    const FAMILIES: [Family; 5] = [Family::A, Family::B, Family::C, Family::D, Family::BC];

    fn all_small_data() -> Vec<RootDatum> {
        let mut out = Vec::new();
        for family in FAMILIES {
            for rank in 1..=4 {
                if let Ok(d) = RootDatum::new(family, rank) {
                    out.push(d);
                }
            }
        }
        out
    }

    #[test]
    fn a1_is_the_rank_one_swap() {
        let d = RootDatum::new(Family::A, 1).unwrap();
        assert_eq!(d.roots().len(), 2);
        assert!(d.roots().contains(&vec![1, -1]));
        let w = d.weyl_elements(2).unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.contains(&IntMat::identity(2)));
    }

    #[test]
    fn a2_has_six_roots_and_weyl_order_six() {
        let d = RootDatum::new(Family::A, 2).unwrap();
        assert_eq!(d.roots().len(), 6);
        let w = d.weyl_elements(10).unwrap();
        assert_eq!(w.len(), 6);
        // All elements are permutation matrices of Z^3.
        for m in &w {
            assert!(m.is_signed_permutation());
            assert_eq!(m.negative_entries(), 0);
        }
    }

    #[test]
    fn b2_roots_and_order() {
        let d = RootDatum::new(Family::B, 2).unwrap();
        assert_eq!(d.roots().len(), 8);
        for v in [vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]] {
            assert!(d.roots().contains(&v), "missing {v:?}");
            assert!(d.roots().contains(&neg(&v)));
        }
        assert_eq!(d.weyl_elements(8).unwrap().len(), 8);
    }

    #[test]
    fn b3_enumerates_48_signed_permutations() {
        let d = RootDatum::new(Family::B, 3).unwrap();
        let w = d.weyl_elements(48).unwrap();
        assert_eq!(w.len(), 48);
        for m in &w {
            assert!(m.is_signed_permutation());
        }
    }

    #[test]
    fn weyl_cap_is_enforced() {
        let d = RootDatum::new(Family::B, 3).unwrap();
        match d.weyl_elements(47) {
            Err(Error::CapExceeded { needed: 48, cap: 47 }) => {}
            other => panic!("expected CapExceeded, got {other:?}"),
        }
    }

    #[test]
    fn enumerated_orders_match_formulas() {
        for d in all_small_data() {
            let w = d.weyl_elements(10_000).unwrap();
            assert_eq!(
                w.len() as u128,
                d.weyl_order(),
                "order mismatch for {}{}",
                d.family(),
                d.rank()
            );
            // Closure under product (spot-check: products of the first few
            // elements stay in the set).
            let set: HashSet<_> = w.iter().cloned().collect();
            for a in w.iter().take(6) {
                for b in w.iter().take(6) {
                    assert!(set.contains(&a.mul(b)));
                }
            }
        }
    }

    #[test]
    fn reflections_permute_roots() {
        for d in all_small_data() {
            let roots: HashSet<_> = d.roots().iter().cloned().collect();
            for s in d.simple_reflections() {
                let image: HashSet<_> = d.roots().iter().map(|r| s.apply_i64(r)).collect();
                assert_eq!(roots, image, "{}{}", d.family(), d.rank());
            }
        }
    }

    #[test]
    fn roots_closed_under_negation_and_split() {
        for d in all_small_data() {
            let roots: HashSet<_> = d.roots().iter().cloned().collect();
            assert_eq!(roots.len(), d.roots().len(), "duplicate roots");
            for r in d.roots() {
                assert!(roots.contains(&neg(r)));
            }
            let pos: HashSet<_> = d.positive_roots().iter().cloned().collect();
            let negs: HashSet<_> = d.positive_roots().iter().map(|r| neg(r)).collect();
            assert!(pos.is_disjoint(&negs));
            assert_eq!(pos.len() + negs.len(), roots.len());
        }
    }

    #[test]
    fn roots_are_uniform_sign_combinations_of_simple_roots() {
        for d in all_small_data() {
            let simple: Vec<Vec<Rat>> = d.simple_roots().iter().map(|r| rvec(r)).collect();
            for root in d.roots() {
                let root_q = rvec(root);
                assert!(in_span(&simple, &root_q));
                // Solve for the coefficients and check uniform sign and
                // integrality.
                let mut rows: Vec<Vec<Rat>> = Vec::new();
                for coord in 0..d.ambient_dim() {
                    let mut row: Vec<Rat> =
                        simple.iter().map(|s| s[coord].clone()).collect();
                    row.push(root_q[coord].clone());
                    rows.push(row);
                }
                crate::linalg::rref(&mut rows);
                let k = simple.len();
                let mut coeffs = vec![Rat::zero(); k];
                for row in &rows {
                    if let Some(p) = row[..k].iter().position(|x| x.is_one()) {
                        coeffs[p] = row[k].clone();
                    }
                }
                assert!(
                    coeffs.iter().all(|c| c.denom().is_one()),
                    "non-integral coefficients for {root:?}"
                );
                let all_nonneg = coeffs.iter().all(|c| !c.is_negative());
                let all_nonpos = coeffs.iter().all(|c| !c.is_positive());
                assert!(all_nonneg || all_nonpos, "mixed signs for {root:?}");
            }
        }
    }

    #[test]
    fn dominant_representative_examples() {
        let a2 = RootDatum::new(Family::A, 2).unwrap();
        assert_eq!(
            a2.dominant_representative(&rvec(&[-2, 0, 2])),
            rvec(&[2, 0, -2])
        );
        let b2 = RootDatum::new(Family::B, 2).unwrap();
        assert_eq!(b2.dominant_representative(&rvec(&[-3, 1])), rvec(&[3, 1]));
        for d in all_small_data() {
            let zero = vec![Rat::zero(); d.ambient_dim()];
            assert_eq!(d.dominant_representative(&zero), zero);
        }
    }

    #[test]
    fn dominant_representative_witnessed_and_idempotent() {
        let mut rng = CounterRng::new(11, 0);
        for d in all_small_data() {
            for _ in 0..50 {
                let v: Vec<Rat> = (0..d.ambient_dim())
                    .map(|_| rat(rng.next_i64(-9, 9)))
                    .collect();
                let (dom, w) = d.dominant_representative_with_witness(&v);
                assert!(d.is_dominant(&dom), "{dom:?} not dominant");
                assert!(d.is_weyl_element(&w));
                assert_eq!(w.apply_rat(&v), dom);
                assert_eq!(d.dominant_representative(&dom), dom);
            }
        }
    }

    #[test]
    fn rho_h_examples() {
        // Rank-one model a = {(t, -t)}: the single positive root doubles.
        let a1 = RootDatum::new(Family::A, 1).unwrap();
        assert_eq!(a1.rho_h(&rvec(&[1, -1])), rat(2));
        assert_eq!(a1.rho_h(&rvec(&[0, 0])), rat(0));
        let a2 = RootDatum::new(Family::A, 2).unwrap();
        assert_eq!(a2.rho_h(&rvec(&[1, 0, -1])), rat(4));
    }

    #[test]
    fn rho_h_is_weyl_invariant_on_random_vectors() {
        // 10,000 exact checks spread over the small catalog.
        let data = all_small_data();
        let mut rng = CounterRng::new(23, 0);
        let mut checks = 0usize;
        'outer: loop {
            for d in &data {
                let w = d.weyl_elements(10_000).unwrap();
                let v: Vec<Rat> = (0..d.ambient_dim())
                    .map(|_| Rat::new(rng.next_i64(-20, 20).into(), rng.next_i64(1, 5).into()))
                    .collect();
                let base = d.rho_h(&v);
                for m in &w {
                    assert_eq!(d.rho_h(&m.apply_rat(&v)), base);
                    checks += 1;
                    if checks >= 10_000 {
                        break 'outer;
                    }
                }
            }
        }
    }

    #[test]
    fn json_roundtrip_rejects_wrong_roots() {
        let d = RootDatum::new(Family::B, 2).unwrap();
        let j = d.to_json();
        let back = RootDatum::from_json(&j).unwrap();
        assert_eq!(back.roots(), d.roots());
        let bad = RootDatumJson {
            family: Family::B,
            rank: 2,
            roots: Some(vec![vec![1, 0]]),
        };
        assert!(RootDatum::from_json(&bad).is_err());
    }

    #[test]
    fn d_family_needs_rank_two() {
        assert!(RootDatum::new(Family::D, 1).is_err());
        assert!(RootDatum::new(Family::A, 0).is_err());
        assert!(RootDatum::new(Family::D, 2).is_ok());
    }

    proptest! {
        #[test]
        fn prop_dominant_orbit_membership(
            fam_idx in 0usize..5,
            rank in 1usize..4,
            coords in proptest::collection::vec(-12i64..13, 5),
        ) {
            let family = FAMILIES[fam_idx];
            let Ok(d) = RootDatum::new(family, rank) else {
                return Ok(());
            };
            let v: Vec<Rat> = coords.iter().take(d.ambient_dim()).map(|&k| rat(k)).collect();
            prop_assume!(v.len() == d.ambient_dim());
            let (dom, w) = d.dominant_representative_with_witness(&v);
            prop_assert!(d.is_dominant(&dom));
            prop_assert!(d.is_weyl_element(&w));
            prop_assert_eq!(w.apply_rat(&v), dom.clone());
            prop_assert_eq!(d.rho_h(&v), d.rho_h(&dom));
        }
    }
}
