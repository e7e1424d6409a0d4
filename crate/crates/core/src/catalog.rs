//! Pseudo-Riemannian space-form catalog: the orthogonal-group pairs
//! realizing the curvature-±1 quadrics, existence predicates for
//! discontinuous groups of various types, Radon–Hurwitz numbers with the
//! tangential criterion, and table audits that compare computed rows
//! against the printed ones without reconciling them.

use serde::{Deserialize, Serialize};

use crate::cartan::MatrixGroupSpec;
use crate::error::Error;

/// Sign of the constant sectional curvature of a space form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    Positive,
    Negative,
}

/// Query for the space form of signature `(p, q)` and the given curvature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFormQuery {
    pub p: usize,
    pub q: usize,
    pub curvature: Curvature,
}

impl SpaceFormQuery {
    pub fn validate(&self) -> Result<(), Error> {
        if self.p + self.q == 0 {
            return Err(Error::InvalidInput("signature must be nonzero".into()));
        }
        Ok(())
    }
}

/// The orthogonal pair `(G, H)` acting on the space form of signature
/// `(p,q)`: the curvature-`+1` quadric is `SO(p+1,q)/SO(p,q)`; the
/// curvature-`-1` form is its signature swap, `SO(q+1,p)/SO(q,p)` (the same
/// manifold with the metric sign reversed).
pub fn space_form_pair(query: &SpaceFormQuery) -> Result<(MatrixGroupSpec, MatrixGroupSpec), Error> {
    query.validate()?;
    let (p, q) = (query.p, query.q);
    let pair = match query.curvature {
        Curvature::Positive => (
            MatrixGroupSpec::SO { p: p + 1, q },
            MatrixGroupSpec::SO { p, q },
        ),
        Curvature::Negative => (
            MatrixGroupSpec::SO { p: q + 1, q: p },
            MatrixGroupSpec::SO { p: q, q: p },
        ),
    };
    Ok(pair)
}

/// Infinite discontinuous groups exist on the positive form of signature
/// `(p,q)` iff `p < q`.
pub fn cm_infinite(p: usize, q: usize) -> bool {
    p < q
}

/// A surface group acts properly discontinuously iff `p+1 < q` or
/// `p+1 = q` is even.
pub fn surface_group_admissible(p: usize, q: usize) -> bool {
    p + 1 < q || (p + 1 == q && q % 2 == 0)
}

/// Known necessary condition for a cocompact discontinuous group:
/// `pq = 0`, or `p < q` with `q` even.
pub fn compact_quotient_necessary(p: usize, q: usize) -> bool {
    p * q == 0 || (p < q && q % 2 == 0)
}

/// Membership in the conjectured list of signatures admitting compact
/// space forms: rows `(p, 0)`, `(0, q)`, `(1, 2N)`, `(3, 4N)`, `(7, 8)`.
/// This encodes the list only; no existence claim is made.
pub fn conjecture_g4_member(p: usize, q: usize) -> bool {
    q == 0
        || p == 0
        || (p == 1 && q % 2 == 0)
        || (p == 3 && q % 4 == 0)
        || (p == 7 && q == 8)
}

/// Radon–Hurwitz number: writing `q = 2^{4a+b} · odd` with `0 <= b <= 3`,
/// `rho(q) = 8a + 2^b`. Defined for `q >= 1`.
pub fn radon_hurwitz(q: usize) -> Result<usize, Error> {
    if q == 0 {
        return Err(Error::InvalidInput(
            "Radon-Hurwitz number needs q >= 1".into(),
        ));
    }
    let v = q.trailing_zeros() as usize;
    let (a, b) = (v / 4, v % 4);
    Ok(8 * a + (1 << b))
}

/// Tangential criterion: the flat-limit space of signature `(p,q)` admits a
/// cocompact discontinuous group iff `p < rho(q)` (always, when `q = 0`).
pub fn tangential_admits_compact(p: usize, q: usize) -> Result<bool, Error> {
    if q == 0 {
        return Ok(true);
    }
    Ok(p < radon_hurwitz(q)?)
}

// ---------------------------------------------------------------------------
// Tangential table audit
// ---------------------------------------------------------------------------

/// Printed `q`-column generators of the tangential table for `p = 1..=11`:
/// the row `p` lists the multiples of this generator.
pub const PRINTED_TANGENTIAL_GENERATORS: [usize; 11] = [2, 2, 4, 8, 8, 8, 8, 16, 32, 64, 64];

/// One row of the tangential-table audit.
#[derive(Debug, Clone, Serialize)]
pub struct TangentialAuditRow {
    pub p: usize,
    /// Generator `g` with `{q : p < rho(q)} = g·N`, computed from the
    /// criterion.
    pub computed_generator: usize,
    /// Generator printed in the reference table.
    pub printed_generator: usize,
    pub matches: bool,
}

/// Search bound for the generator-pattern verification.
pub const TANGENTIAL_Q_MAX: usize = 128;

/// Recompute the tangential table rows `p = 1..=p_max` from `p < rho(q)`
/// and compare against the printed generators. Mismatches are flagged, not
/// reconciled. `p_max` is limited to the printed table's extent (11).
pub fn tangential_table_audit(p_max: usize) -> Result<Vec<TangentialAuditRow>, Error> {
    if p_max == 0 || p_max > PRINTED_TANGENTIAL_GENERATORS.len() {
        return Err(Error::InvalidInput(format!(
            "p_max must be in 1..={}",
            PRINTED_TANGENTIAL_GENERATORS.len()
        )));
    }
    let mut rows = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let admitted: Vec<usize> = (1..=TANGENTIAL_Q_MAX)
            .filter(|&q| radon_hurwitz(q).map(|r| p < r).unwrap_or(false))
            .collect();
        let generator = *admitted.first().ok_or_else(|| {
            Error::InvalidInput(format!("no admissible q <= {TANGENTIAL_Q_MAX} for p = {p}"))
        })?;
        // The admitted set must be exactly the multiples of its minimum;
        // anything else would mean the row has no generator pattern.
        let expected: Vec<usize> = (1..=TANGENTIAL_Q_MAX / generator)
            .map(|k| k * generator)
            .collect();
        if admitted != expected {
            return Err(Error::InvalidInput(format!(
                "row p = {p} is not a multiple pattern: {admitted:?}"
            )));
        }
        let printed_generator = PRINTED_TANGENTIAL_GENERATORS[p - 1];
        rows.push(TangentialAuditRow {
            p,
            computed_generator: generator,
            printed_generator,
            matches: generator == printed_generator,
        });
    }
    Ok(rows)
}
