//! Cyclic Jacobi eigensolver for small dense symmetric matrices.
//!
//! Each rotation annihilates one off-diagonal pair; sweeps visit every pair
//! in row order. The method is slower than tridiagonal QR but keeps high
//! relative accuracy on the small eigenvalues, which later enter through
//! their logarithms.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix, unsorted.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    /// Row-major `n × n`; column `j` is the eigenvector of `values[j]`.
    pub vectors: Vec<T>,
    pub sweeps: usize,
}

impl<T: Scalar> SymmetricEigen<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(values) Vᵀ`, row-major.
    pub fn reconstruct(&self) -> Vec<T> {
        let n = self.dim();
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for l in 0..n {
                    acc += self.vectors[i * n + l] * self.values[l] * self.vectors[j * n + l];
                }
                out[i * n + j] = acc;
            }
        }
        out
    }
}

fn off_diagonal_norm<T: Scalar>(a: &[T], n: usize) -> T {
    let mut acc = T::zero();
    for p in 0..n {
        for q in (p + 1)..n {
            acc += a[p * n + q] * a[p * n + q];
        }
    }
    (acc + acc).sqrt()
}

/// Diagonalizes the symmetric row-major `n × n` matrix `a`.
///
/// Only the upper triangle is trusted; the lower one is overwritten. Fails
/// with [`Error::Numerical`] when the off-diagonal norm is still above
/// `1e-12 · n` after [`MAX_SWEEPS`] sweeps.
pub fn jacobi_eigen<T: Scalar>(a: &[T], n: usize) -> Result<SymmetricEigen<T>> {
    if a.len() != n * n {
        return Err(Error::Shape(format!(
            "expected {} entries for a {n}x{n} matrix, got {}",
            n * n,
            a.len()
        )));
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let mut a: Vec<T> = a.to_vec();
    for p in 0..n {
        for q in 0..p {
            a[p * n + q] = a[q * n + p];
        }
    }
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }

    let frob = a.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
    let eps = T::epsilon();
    let converged = eps * frob;
    let half = T::lit(0.5);

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        if off_diagonal_norm(&a, n) <= converged {
            break;
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // negligible relative to both diagonal entries
                if apq.abs() <= eps * half * (app.abs() * aqq.abs()).sqrt() {
                    a[p * n + q] = T::zero();
                    a[q * n + p] = T::zero();
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (apq + apq);
                let t = if theta.is_infinite() {
                    T::zero()
                } else {
                    let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
                    sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let tau = s / (T::one() + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = vrp - s * (vrq + tau * vrp);
                    v[r * n + q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let off = off_diagonal_norm(&a, n);
    let limit = T::tol(1e-12) * T::from_usize_lossy(n.max(1));
    if off > limit {
        return Err(Error::Numerical(format!(
            "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off})"
        )));
    }

    let values = (0..n).map(|i| a[i * n + i]).collect();
    Ok(SymmetricEigen {
        values,
        vectors: v,
        sweeps,
    })
}
