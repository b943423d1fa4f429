use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::scalar::Scalar;
use crate::spectrum::{sample_spectrum, DataMatrix, EigenSpectrum};

use super::{random_orthogonal, Scenario};

/// Draws `Y = U·diag(d)·Z + σ·ε` for the scenario.
///
/// Draw order is fixed: the `n × n` Gaussian behind `U`, then `Z`
/// (`k* × m`, row-major), then `ε` (`n × m`, row-major). No standardization
/// is applied.
pub fn sample_data<T: Scalar, R: Rng + ?Sized>(s: &Scenario, rng: &mut R) -> Result<DataMatrix<T>> {
    let d2 = s.d2()?;
    let (n, m, k) = (s.n, s.m, s.k_star);
    let q = random_orthogonal(n, rng);
    let d: Vec<f64> = d2.iter().map(|x| x.sqrt()).collect();
    // W = U diag(d), n × k
    let w: Vec<f64> = (0..n)
        .flat_map(|i| (0..k).map(move |l| (i, l)))
        .map(|(i, l)| q[i * n + l] * d[l])
        .collect();
    let z: Vec<f64> = (0..k * m).map(|_| rng.sample(StandardNormal)).collect();
    let sigma = s.sigma2.sqrt();
    let mut y = vec![0.0f64; n * m];
    for (i, row) in y.chunks_mut(m).enumerate() {
        for l in 0..k {
            let wil = w[i * k + l];
            for (yj, zj) in row.iter_mut().zip(&z[l * m..(l + 1) * m]) {
                *yj += wil * zj;
            }
        }
    }
    for yij in &mut y {
        let e: f64 = rng.sample(StandardNormal);
        *yij += sigma * e;
    }
    DataMatrix::new(n, m, y.into_iter().map(T::lit).collect())
}

/// `sample_spectrum(sample_data(s, rng))`.
pub fn sample_spectrum_only<T: Scalar, R: Rng + ?Sized>(
    s: &Scenario,
    rng: &mut R,
) -> Result<EigenSpectrum<T>> {
    sample_spectrum(&sample_data::<T, R>(s, rng)?)
}
