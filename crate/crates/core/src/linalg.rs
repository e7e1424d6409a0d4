//! Exact rational linear algebra and small integer matrices.
//!
//! Everything here is dense and exact. Matrices are `Vec<Vec<Rat>>` in
//! row-major order; sizes stay in the single digits for all in-scope
//! computations, so no effort is spent on sparsity or pivoting heuristics
//! beyond plain Gauss–Jordan.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational scalar used for every certificate-grade computation.
pub type Rat = BigRational;

/// `k` as a rational.
pub fn rat(k: i64) -> Rat {
    Rat::from_integer(BigInt::from(k))
}

/// Integer slice to rational vector.
pub fn rvec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&k| rat(k)).collect()
}

/// Parse `"p/q"` or `"p"` into a rational.
pub fn rat_parse(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, Error> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::InvalidInput(format!("not an integer: {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

/// Render a rational as `"p"` or `"p/q"`.
pub fn rat_display(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Dot product of two rational vectors of equal length.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// In-place Gauss–Jordan reduction to reduced row echelon form.
/// Returns the rank; zero rows are moved to the bottom and truncated away.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let sub = &rows[rank][c] * &factor;
                    rows[r][c] -= sub;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rank
}

/// Rank of a rational matrix given as rows.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut copy = rows.to_vec();
    rref(&mut copy)
}

/// Basis of the right kernel `{x : M x = 0}` of `rows` with `ncols` columns.
/// Returned vectors are the standard free-variable kernel basis.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut reduced = rows.to_vec();
    rref(&mut reduced);
    // Pivot column of each reduced row.
    let mut pivot_cols = Vec::with_capacity(reduced.len());
    for row in &reduced {
        let col = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
        pivot_cols.push(col);
    }
    let is_pivot = |c: usize| pivot_cols.contains(&c);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if is_pivot(free) {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -reduced[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Whether `v` lies in the row span of `span` (which need not be reduced).
pub fn in_span(span: &[Vec<Rat>], v: &[Rat]) -> bool {
    if is_zero_vec(v) {
        return true;
    }
    let mut rows = span.to_vec();
    let base = rref(&mut rows);
    rows.push(v.to_vec());
    rref(&mut rows) == base
}

/// Scale a rational vector to a primitive integer vector (entries coprime,
/// first nonzero entry positive). Zero vectors map to zero.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    if is_zero_vec(v) {
        return vec![BigInt::zero(); v.len()];
    }
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if !gcd.is_zero() {
        for x in ints.iter_mut() {
            *x /= &gcd;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    ints
}

/// `primitive_integer` narrowed to `i64`, for rays with small coordinates.
pub fn primitive_i64(v: &[Rat]) -> Option<Vec<i64>> {
    primitive_integer(v)
        .into_iter()
        .map(|x| i64::try_from(&x).ok())
        .collect()
}

// ---------------------------------------------------------------------------
// Small square integer matrices (Weyl group elements, reflections).
// ---------------------------------------------------------------------------

/// Dense square integer matrix. Weyl elements of the classical families are
/// signed permutation matrices, so `i64` entries are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    n: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn zero(n: usize) -> Self {
        IntMat {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "square matrix required");
            data.extend_from_slice(row);
        }
        IntMat { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMat {
        let n = self.n;
        let mut out = IntMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    /// Matrix–vector product over the integers.
    pub fn apply_i64(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Matrix–vector product over the rationals.
    pub fn apply_rat(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.n {
                    let c = self.get(i, j);
                    if c != 0 {
                        acc += &v[j] * rat(c);
                    }
                }
                acc
            })
            .collect()
    }

    /// True when every row and column holds exactly one `±1` entry.
    pub fn is_signed_permutation(&self) -> bool {
        let n = self.n;
        let mut col_seen = vec![false; n];
        for i in 0..n {
            let mut hits = 0;
            for j in 0..n {
                match self.get(i, j) {
                    0 => {}
                    1 | -1 => {
                        hits += 1;
                        if col_seen[j] {
                            return false;
                        }
                        col_seen[j] = true;
                    }
                    _ => return false,
                }
            }
            if hits != 1 {
                return false;
            }
        }
        true
    }

    /// Number of `-1` entries; for a signed permutation this is the number
    /// of sign flips.
    pub fn negative_entries(&self) -> usize {
        self.data.iter().filter(|&&x| x < 0).count()
    }
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", &self.data[i * self.n..(i + 1) * self.n])?;
        }
        write!(f, "]")
    }
}

// ---------------------------------------------------------------------------
// Rational matrices as plain row vectors (used for Lie algebra bases).
// ---------------------------------------------------------------------------

/// Row-major rational matrix.
pub type QMatrix = Vec<Vec<Rat>>;

pub fn qmat_zero(rows: usize, cols: usize) -> QMatrix {
    vec![vec![Rat::zero(); cols]; rows]
}

pub fn qmat_transpose(m: &QMatrix) -> QMatrix {
    if m.is_empty() {
        return Vec::new();
    }
    let (r, c) = (m.len(), m[0].len());
    let mut out = qmat_zero(c, r);
    for i in 0..r {
        for j in 0..c {
            out[j][i] = m[i][j].clone();
        }
    }
    out
}

pub fn qmat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let (ar, ac) = (a.len(), a[0].len());
    let bc = b[0].len();
    assert_eq!(ac, b.len());
    let mut out = qmat_zero(ar, bc);
    for i in 0..ar {
        for k in 0..ac {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..bc {
                let add = &a[i][k] * &b[k][j];
                out[i][j] += add;
            }
        }
    }
    out
}

pub fn qmat_sub(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn qmat_add(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

/// Lie bracket `[a, b] = ab - ba`.
pub fn qmat_bracket(a: &QMatrix, b: &QMatrix) -> QMatrix {
    qmat_sub(&qmat_mul(a, b), &qmat_mul(b, a))
}

/// Flatten row-major into a single vector (for span/rank computations over
/// matrix spaces).
pub fn qmat_flatten(m: &QMatrix) -> Vec<Rat> {
    m.iter().flat_map(|r| r.iter().cloned()).collect()
}
