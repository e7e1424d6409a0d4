//! Classical matrix Lie algebras and Cartan decompositions.
//!
//! Lie algebra bases are computed exactly as kernels of the defining linear
//! systems (trace zero, `X^T I + I X = 0`, ...), split into the +1/-1
//! eigenspaces of the Cartan involution `theta(X) = -X^T`. Complex groups
//! (`U`, `SU`) are realified to `2N x 2N` real matrices, and all dimensions
//! are real dimensions.
//!
//! The numeric Cartan projection is provided for `GL`/`SL` only, where it is
//! half the log-spectrum of `g^T g`; other groups are handled abstractly
//! through their split subspace data in [`crate::properness`].

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::linalg::{self, qmat_bracket, qmat_flatten, qmat_zero, QMatrix, Rat};
use crate::numeric::{self, Mat};
use crate::rng::CounterRng;

/// Descriptor of a classical real reductive matrix group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum MatrixGroupSpec {
    #[serde(rename = "SL")]
    SlR { n: usize },
    #[serde(rename = "GL")]
    GlR { n: usize },
    #[serde(rename = "SO")]
    SO { p: usize, q: usize },
    #[serde(rename = "SU")]
    SU { p: usize, q: usize },
    /// `Sp(2n, R)`; the parameter is `n`.
    #[serde(rename = "Sp")]
    SpR { n: usize },
    #[serde(rename = "U")]
    U { p: usize, q: usize },
}

impl std::fmt::Display for MatrixGroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MatrixGroupSpec::SlR { n } => write!(f, "SL({n},R)"),
            MatrixGroupSpec::GlR { n } => write!(f, "GL({n},R)"),
            MatrixGroupSpec::SO { p, q } => write!(f, "SO({p},{q})"),
            MatrixGroupSpec::SU { p, q } => write!(f, "SU({p},{q})"),
            MatrixGroupSpec::SpR { n } => write!(f, "Sp({},R)", 2 * n),
            MatrixGroupSpec::U { p, q } => write!(f, "U({p},{q})"),
        }
    }
}

impl MatrixGroupSpec {
    pub fn validate(&self) -> Result<(), Error> {
        let ok = match *self {
            MatrixGroupSpec::SlR { n } | MatrixGroupSpec::GlR { n } => n >= 1,
            MatrixGroupSpec::SpR { n } => n >= 1,
            MatrixGroupSpec::SO { p, q }
            | MatrixGroupSpec::SU { p, q }
            | MatrixGroupSpec::U { p, q } => p + q >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid parameters for {self}")))
        }
    }

    /// Side length of the real matrices realizing the Lie algebra.
    pub fn ambient_real_dim(&self) -> usize {
        match *self {
            MatrixGroupSpec::SlR { n } | MatrixGroupSpec::GlR { n } => n,
            MatrixGroupSpec::SO { p, q } => p + q,
            MatrixGroupSpec::SpR { n } => 2 * n,
            // Complex entries realified.
            MatrixGroupSpec::SU { p, q } | MatrixGroupSpec::U { p, q } => 2 * (p + q),
        }
    }

    /// Real rank (dimension of a maximal split abelian subspace of the
    /// p-part), by the classical closed forms.
    pub fn real_rank(&self) -> usize {
        match *self {
            MatrixGroupSpec::SlR { n } => n - 1,
            MatrixGroupSpec::GlR { n } => n,
            MatrixGroupSpec::SO { p, q }
            | MatrixGroupSpec::SU { p, q }
            | MatrixGroupSpec::U { p, q } => p.min(q),
            MatrixGroupSpec::SpR { n } => n,
        }
    }
}

/// Basis of a matrix Lie algebra with its Cartan-involution split.
/// Basis order: k-part first, then p-part.
#[derive(Debug, Clone)]
pub struct LieAlgebraBasis {
    pub ambient_dim: usize,
    pub basis: Vec<QMatrix>,
    pub k_part: Vec<usize>,
    pub p_part: Vec<usize>,
}

impl LieAlgebraBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dim_k(&self) -> usize {
        self.k_part.len()
    }

    pub fn dim_p(&self) -> usize {
        self.p_part.len()
    }

    pub fn k_matrices(&self) -> Vec<&QMatrix> {
        self.k_part.iter().map(|&i| &self.basis[i]).collect()
    }

    pub fn p_matrices(&self) -> Vec<&QMatrix> {
        self.p_part.iter().map(|&i| &self.basis[i]).collect()
    }
}

// ---------------------------------------------------------------------------
// Defining linear systems
// ---------------------------------------------------------------------------

/// Signature matrix `diag(+1 x p, -1 x q)` evaluated entrywise.
fn eta(p: usize, i: usize) -> i64 {
    if i < p {
        1
    } else {
        -1
    }
}

/// Constraint rows over `N^2` unknowns (row-major entries of `X`) for the
/// real families; returns (rows, n_unknowns).
fn real_family_constraints(spec: &MatrixGroupSpec) -> (Vec<Vec<Rat>>, usize) {
    let n = spec.ambient_real_dim();
    let unknowns = n * n;
    let idx = |i: usize, j: usize| i * n + j;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    match *spec {
        MatrixGroupSpec::GlR { .. } => {}
        MatrixGroupSpec::SlR { .. } => {
            let mut row = vec![Rat::zero(); unknowns];
            for i in 0..n {
                row[idx(i, i)] = linalg::rat(1);
            }
            rows.push(row);
        }
        MatrixGroupSpec::SO { p, .. } => {
            // (X^T I + I X)_{ij} = eta_j X_ji + eta_i X_ij = 0.
            for i in 0..n {
                for j in i..n {
                    let mut row = vec![Rat::zero(); unknowns];
                    row[idx(j, i)] += linalg::rat(eta(p, j));
                    row[idx(i, j)] += linalg::rat(eta(p, i));
                    rows.push(row);
                }
            }
        }
        MatrixGroupSpec::SpR { n: half } => {
            // J = [[0, I], [-I, 0]]; (X^T J + J X)_{ij} = 0.
            let jmat = |i: usize, j: usize| -> i64 {
                if i < half && j == i + half {
                    1
                } else if i >= half && j == i - half {
                    -1
                } else {
                    0
                }
            };
            for i in 0..n {
                for j in 0..n {
                    let mut row = vec![Rat::zero(); unknowns];
                    for k in 0..n {
                        let jk = jmat(k, j);
                        if jk != 0 {
                            row[idx(k, i)] += linalg::rat(jk);
                        }
                        let ik = jmat(i, k);
                        if ik != 0 {
                            row[idx(k, j)] += linalg::rat(ik);
                        }
                    }
                    rows.push(row);
                }
            }
        }
        _ => unreachable!("complex families handled separately"),
    }
    (rows, unknowns)
}

/// Constraint rows over `2N^2` unknowns `(A | B)` (the complex matrix is
/// `A + iB`) for `u(p,q)` and `su(p,q)`.
fn complex_family_constraints(spec: &MatrixGroupSpec) -> (Vec<Vec<Rat>>, usize) {
    let (p, q, traceless) = match *spec {
        MatrixGroupSpec::U { p, q } => (p, q, false),
        MatrixGroupSpec::SU { p, q } => (p, q, true),
        _ => unreachable!(),
    };
    let n = p + q;
    let unknowns = 2 * n * n;
    let a_idx = |i: usize, j: usize| i * n + j;
    let b_idx = |i: usize, j: usize| n * n + i * n + j;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    // Z* I + I Z = 0 with Z = A + iB splits into:
    //   real: eta_j A_ji + eta_i A_ij = 0
    //   imag: -eta_j B_ji + eta_i B_ij = 0
    for i in 0..n {
        for j in i..n {
            let mut row = vec![Rat::zero(); unknowns];
            row[a_idx(j, i)] += linalg::rat(eta(p, j));
            row[a_idx(i, j)] += linalg::rat(eta(p, i));
            rows.push(row);
            let mut row = vec![Rat::zero(); unknowns];
            row[b_idx(j, i)] -= linalg::rat(eta(p, j));
            row[b_idx(i, j)] += linalg::rat(eta(p, i));
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    if traceless {
        for block in [&a_idx as &dyn Fn(usize, usize) -> usize, &b_idx] {
            let mut row = vec![Rat::zero(); unknowns];
            for i in 0..n {
                row[block(i, i)] = linalg::rat(1);
            }
            rows.push(row);
        }
    }
    (rows, unknowns)
}

/// Map a solution vector of the family's linear system to the realized
/// (possibly realified) square rational matrix.
fn solution_to_matrix(spec: &MatrixGroupSpec, sol: &[Rat]) -> QMatrix {
    match *spec {
        MatrixGroupSpec::SU { p, q } | MatrixGroupSpec::U { p, q } => {
            let n = p + q;
            let mut m = qmat_zero(2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    let a = sol[i * n + j].clone();
                    let b = sol[n * n + i * n + j].clone();
                    m[i][j] = a.clone();
                    m[n + i][n + j] = a;
                    m[i][n + j] = -b.clone();
                    m[n + i][j] = b;
                }
            }
            m
        }
        _ => {
            let n = spec.ambient_real_dim();
            let mut m = qmat_zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[i][j] = sol[i * n + j].clone();
                }
            }
            m
        }
    }
}

/// Extra rows forcing the realized matrix symmetric (`sym = true`) or
/// skew-symmetric, expressed on the family's unknown vector.
fn theta_constraints(spec: &MatrixGroupSpec, sym: bool) -> Vec<Vec<Rat>> {
    let sign = if sym { -1 } else { 1 };
    let mut rows = Vec::new();
    match *spec {
        MatrixGroupSpec::SU { p, q } | MatrixGroupSpec::U { p, q } => {
            // Realified X symmetric <=> A symmetric, B skew; and vice versa.
            let n = p + q;
            let unknowns = 2 * n * n;
            for i in 0..n {
                for j in i..n {
                    let mut row = vec![Rat::zero(); unknowns];
                    row[i * n + j] += linalg::rat(1);
                    row[j * n + i] += linalg::rat(sign);
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                    let mut row = vec![Rat::zero(); unknowns];
                    row[n * n + i * n + j] += linalg::rat(1);
                    row[n * n + j * n + i] -= linalg::rat(sign);
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        _ => {
            let n = spec.ambient_real_dim();
            let unknowns = n * n;
            for i in 0..n {
                for j in i..n {
                    let mut row = vec![Rat::zero(); unknowns];
                    row[i * n + j] += linalg::rat(1);
                    row[j * n + i] += linalg::rat(sign);
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    rows
}

/// Exact basis of the Lie algebra of `spec`, split into k- and p-parts.
pub fn lie_algebra_basis(spec: &MatrixGroupSpec) -> Result<LieAlgebraBasis, Error> {
    spec.validate()?;
    let (constraints, unknowns) = match spec {
        MatrixGroupSpec::SU { .. } | MatrixGroupSpec::U { .. } => {
            complex_family_constraints(spec)
        }
        _ => real_family_constraints(spec),
    };
    let full_dim = linalg::nullspace(&constraints, unknowns).len();

    let mut basis: Vec<QMatrix> = Vec::new();
    let mut k_part = Vec::new();
    let mut p_part = Vec::new();
    for sym in [false, true] {
        let mut rows = constraints.clone();
        rows.extend(theta_constraints(spec, sym));
        for sol in linalg::nullspace(&rows, unknowns) {
            let m = solution_to_matrix(spec, &sol);
            if sym {
                p_part.push(basis.len());
            } else {
                k_part.push(basis.len());
            }
            basis.push(m);
        }
    }
    debug_assert_eq!(
        k_part.len() + p_part.len(),
        full_dim,
        "theta split must exhaust the algebra"
    );
    Ok(LieAlgebraBasis {
        ambient_dim: spec.ambient_real_dim(),
        basis,
        k_part,
        p_part,
    })
}

/// `(dim k, dim p)` for the Cartan decomposition of the algebra.
pub fn cartan_dims(spec: &MatrixGroupSpec) -> Result<(usize, usize), Error> {
    let b = lie_algebra_basis(spec)?;
    Ok((b.dim_k(), b.dim_p()))
}

/// Closed-form `(dim k, dim p)` used as the oracle cross-check.
pub fn cartan_dims_closed_form(spec: &MatrixGroupSpec) -> (usize, usize) {
    match *spec {
        MatrixGroupSpec::SlR { n } => ((n * n - n) / 2, n * (n + 1) / 2 - 1),
        MatrixGroupSpec::GlR { n } => ((n * n - n) / 2, n * (n + 1) / 2),
        MatrixGroupSpec::SO { p, q } => ((p * p - p + q * q - q) / 2, p * q),
        MatrixGroupSpec::SpR { n } => (n * n, n * (n + 1)),
        MatrixGroupSpec::U { p, q } => (p * p + q * q, 2 * p * q),
        MatrixGroupSpec::SU { p, q } => (p * p + q * q - 1, 2 * p * q),
    }
}

/// Signature `(d, e)` of the pair `(G, H)`: codimensions of `h ∩ p` in `p`
/// and of `h ∩ k` in `k`. `h_basis` must consist of matrices inside the span
/// of `g`'s algebra (checked by an exact rank test).
pub fn pair_signature(
    spec_g: &MatrixGroupSpec,
    h_basis: &[QMatrix],
) -> Result<(usize, usize), Error> {
    let g = lie_algebra_basis(spec_g)?;
    let g_span: Vec<Vec<Rat>> = g.basis.iter().map(qmat_flatten).collect();
    let h_span: Vec<Vec<Rat>> = h_basis.iter().map(qmat_flatten).collect();
    for v in &h_span {
        if v.len() != g.ambient_dim * g.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: g.ambient_dim * g.ambient_dim,
                got: v.len(),
            });
        }
        if !linalg::in_span(&g_span, v) {
            return Err(Error::NotASubalgebraOfG);
        }
    }
    let k_span: Vec<Vec<Rat>> = g.k_matrices().iter().map(|m| qmat_flatten(m)).collect();
    let p_span: Vec<Vec<Rat>> = g.p_matrices().iter().map(|m| qmat_flatten(m)).collect();
    let inter_dim = |a: &[Vec<Rat>], b: &[Vec<Rat>]| -> usize {
        let ra = linalg::rank(a);
        let rb = linalg::rank(b);
        let mut stack = a.to_vec();
        stack.extend_from_slice(b);
        ra + rb - linalg::rank(&stack)
    };
    let d = p_span.len() - inter_dim(&h_span, &p_span);
    let e = k_span.len() - inter_dim(&h_span, &k_span);
    Ok((d, e))
}

/// Basis of `so(p-1, q)` embedded in `(p+q) x (p+q)` matrices as the
/// stabilizer of the first positive axis. Requires `p >= 1`.
pub fn embedded_so_stabilizer(p: usize, q: usize) -> Result<Vec<QMatrix>, Error> {
    if p == 0 {
        return Err(Error::InvalidInput(
            "need a positive axis to stabilize (p >= 1)".into(),
        ));
    }
    let inner = lie_algebra_basis(&MatrixGroupSpec::SO { p: p - 1, q })?;
    let n = p + q;
    let embedded = inner
        .basis
        .iter()
        .map(|m| {
            let mut big = qmat_zero(n, n);
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    big[i + 1][j + 1] = m[i][j].clone();
                }
            }
            big
        })
        .collect();
    Ok(embedded)
}

/// Brute-force real rank: the minimum dimension of the centralizer in `p` of
/// random integer elements of `p`. Every centralizer contains a maximal
/// split abelian subspace, so the minimum over generic trials is the rank.
pub fn real_rank_oracle(spec: &MatrixGroupSpec, trials: usize, seed: u64) -> Result<usize, Error> {
    let alg = lie_algebra_basis(spec)?;
    let p_mats = alg.p_matrices();
    if p_mats.is_empty() {
        return Ok(0);
    }
    let mut rng = CounterRng::new(seed, 0);
    let mut best = usize::MAX;
    for _ in 0..trials.max(1) {
        let x = p_mats.iter().fold(
            qmat_zero(alg.ambient_dim, alg.ambient_dim),
            |acc, m| {
                let c = linalg::rat(rng.next_i64(-5, 5));
                let scaled: QMatrix = m
                    .iter()
                    .map(|row| row.iter().map(|v| v * &c).collect())
                    .collect();
                linalg::qmat_add(&acc, &scaled)
            },
        );
        // Solve [x, sum_i c_i P_i] = 0 for the coefficients c.
        let cols = p_mats.len();
        let mut rows = vec![vec![Rat::zero(); cols]; alg.ambient_dim * alg.ambient_dim];
        for (ci, pm) in p_mats.iter().enumerate() {
            let br = qmat_bracket(&x, pm);
            for (entry, val) in qmat_flatten(&br).into_iter().enumerate() {
                rows[entry][ci] = val;
            }
        }
        best = best.min(linalg::nullspace(&rows, cols).len());
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// Numeric Cartan projection for GL/SL
// ---------------------------------------------------------------------------

/// Relative singularity tolerance: inputs with smallest singular value below
/// `tol * ||g||_F` are rejected.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Cartan projection of an invertible real matrix: half the logarithms of
/// the eigenvalues of `g^T g`, sorted descending (the dominant-chamber
/// representative).
pub fn cartan_projection_gl(g: &Mat) -> Result<Vec<f64>, Error> {
    let n = g.len();
    for row in g {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
    }
    let gtg = numeric::mat_mul(&numeric::transpose(g), g);
    let mut eigs = jacobi_eigenvalues(&gtg);
    eigs.sort_by(|a, b| b.total_cmp(a));
    let scale = numeric::frobenius(g);
    let tol = SINGULAR_TOL * scale;
    let min_sv = eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    if min_sv.is_nan() || min_sv <= tol {
        return Err(Error::SingularMatrix { min_sv, tol });
    }
    Ok(eigs.into_iter().map(|l| 0.5 * l.ln()).collect())
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations; stops when
/// the off-diagonal Frobenius norm drops below `1e-12` relative to the
/// input scale.
pub fn jacobi_eigenvalues(a: &Mat) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![a[0][0]];
    }
    let mut m: Mat = a.to_vec();
    let scale = numeric::frobenius(a).max(f64::MIN_POSITIVE);
    let tol = 1e-12 * scale;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * m[i][j] * m[i][j];
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() <= tol / (n * n) as f64 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).collect()
}
