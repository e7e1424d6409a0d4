//! Small dense `f64` helpers shared by the numeric paths (Cartan
//! projections, Monte Carlo flows). Exact arithmetic lives in [`crate::linalg`].

use crate::error::Error;
use crate::rng::CounterRng;

pub type Mat = Vec<Vec<f64>>;

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (ar, ac, bc) = (a.len(), a[0].len(), b[0].len());
    assert_eq!(ac, b.len());
    let mut out = vec![vec![0.0; bc]; ar];
    for i in 0..ar {
        for k in 0..ac {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..bc {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let (r, c) = (a.len(), a[0].len());
    let mut out = vec![vec![0.0; r]; c];
    for i in 0..r {
        for j in 0..c {
            out[j][i] = a[i][j];
        }
    }
    out
}

pub fn identity(n: usize) -> Mat {
    let mut m = vec![vec![0.0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn frobenius(a: &Mat) -> f64 {
    a.iter()
        .flat_map(|r| r.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

/// Determinant by LU with partial pivoting.
pub fn det(a: &Mat) -> f64 {
    let n = a.len();
    let mut m: Mat = a.to_vec();
    let mut d = 1.0;
    for col in 0..n {
        let (pivot, &max) = m[col..]
            .iter()
            .map(|row| row[col])
            .enumerate()
            .max_by(|(_, x), (_, y)| x.abs().total_cmp(&y.abs()))
            .map(|(i, _)| (i + col, &m[i + col][col]))
            .unwrap();
        if max == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            d = -d;
        }
        d *= m[col][col];
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    d
}

/// Inverse by Gauss–Jordan with partial pivoting.
pub fn inverse(a: &Mat) -> Result<Mat, Error> {
    let n = a.len();
    let mut m: Mat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot][col].abs() < 1e-300 {
            return Err(Error::SingularMap { det: 0.0 });
        }
        m.swap(pivot, col);
        let inv = 1.0 / m[col][col];
        for x in m[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && m[r][col] != 0.0 {
                let f = m[r][col];
                for c in 0..2 * n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    Ok(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Haar-ish random orthogonal matrix: Gram–Schmidt applied to a Gaussian
/// matrix (sign distribution is irrelevant for our bi-invariance tests).
pub fn random_orthogonal(n: usize, rng: &mut CounterRng) -> Mat {
    loop {
        let mut rows: Mat = (0..n)
            .map(|_| (0..n).map(|_| rng.next_gaussian()).collect())
            .collect();
        let mut ok = true;
        for i in 0..n {
            for k in 0..i {
                let proj: f64 = rows[i].iter().zip(&rows[k]).map(|(a, b)| a * b).sum();
                let prev = rows[k].clone();
                for (x, p) in rows[i].iter_mut().zip(&prev) {
                    *x -= proj * p;
                }
            }
            let norm: f64 = rows[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for x in rows[i].iter_mut() {
                *x /= norm;
            }
        }
        if ok {
            return rows;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse_agree() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        assert!((det(&a) - 5.0).abs() < 1e-12);
        let inv = inverse(&a).unwrap();
        let prod = mat_mul(&a, &inv);
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[i][j] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn random_orthogonal_is_orthogonal() {
        let mut rng = CounterRng::new(3, 0);
        let q = random_orthogonal(5, &mut rng);
        let qtq = mat_mul(&transpose(&q), &q);
        for i in 0..5 {
            for j in 0..5 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((qtq[i][j] - expect).abs() < 1e-10);
            }
        }
    }
}
