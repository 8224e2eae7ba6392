//! Small dense linear algebra: determinants, Cholesky, inverses.
//!
//! Matrices are row-major `Vec`s with an explicit dimension.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::exact::ExactInt;

/// Determinant by Gaussian elimination with partial pivoting.
/// The empty (0 x 0) determinant is 1.
pub fn det(mut m: Vec<f64>, n: usize) -> f64 {
    assert_eq!(m.len(), n * n);
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a * n + col].abs().total_cmp(&m[b * n + col].abs()))
            .unwrap();
        let p = m[pivot * n + col];
        if p == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        det *= p;
        for row in col + 1..n {
            let f = m[row * n + col] / p;
            if f != 0.0 {
                for k in col..n {
                    m[row * n + k] -= f * m[col * n + k];
                }
            }
        }
    }
    det
}

/// Exact determinant over the rationals (fraction-based elimination).
pub fn det_exact<T: ExactInt>(mut m: Vec<Ratio<T>>, n: usize) -> Ratio<T> {
    assert_eq!(m.len(), n * n);
    let mut det = Ratio::<T>::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
            return Ratio::zero();
        };
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let p = m[col * n + col].clone();
        det = det * p.clone();
        for row in col + 1..n {
            if m[row * n + col].is_zero() {
                continue;
            }
            let f = m[row * n + col].clone() / p.clone();
            for k in col..n {
                let sub = f.clone() * m[col * n + k].clone();
                m[row * n + k] = m[row * n + k].clone() - sub;
            }
        }
    }
    det
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(m: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = m[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Solves `L^T x = b` for lower-triangular `L`.
pub fn solve_upper_transposed(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    x
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
pub fn spd_inverse(m: &[f64], n: usize) -> Option<Vec<f64>> {
    let l = cholesky(m, n)?;
    let mut inv = vec![0.0; n * n];
    for col in 0..n {
        // forward solve L z = e_col, then L^T x = z
        let mut z = vec![0.0; n];
        for i in 0..n {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in 0..i {
                s -= l[i * n + k] * z[k];
            }
            z[i] = s / l[i * n + i];
        }
        let x = solve_upper_transposed(&l, n, &z);
        for row in 0..n {
            inv[row * n + col] = x[row];
        }
    }
    Some(inv)
}
