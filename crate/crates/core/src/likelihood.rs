//! Profile and penalized profile log-likelihoods of probabilistic PCA.
//!
//! Every quantity depends on the spectrum only; the loading matrix is never
//! formed. `δ̃` is the scaled tuning parameter (`δ = n·δ̃`).

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectrum::EigenSpectrum;

/// Residual-variance path `σ̂²(k)`, the mean of the trailing `n − k`
/// eigenvalues, for `k = 0..n−1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaProfile<T> {
    spectrum: EigenSpectrum<T>,
    sigma2: Vec<T>,
    log_prefix: Vec<T>,
    first_zero: usize,
}

impl<T: Scalar> SigmaProfile<T> {
    pub fn new(spectrum: EigenSpectrum<T>) -> Self {
        let lam = spectrum.eigenvalues();
        let n = lam.len();
        // tail sums accumulate from the small end
        let mut tail = vec![T::zero(); n + 1];
        for i in (0..n).rev() {
            tail[i] = tail[i + 1] + lam[i];
        }
        let sigma2 = (0..n)
            .map(|k| tail[k] / T::from_usize_lossy(n - k))
            .collect();
        let mut log_prefix = vec![T::zero(); n + 1];
        for i in 0..n {
            log_prefix[i + 1] = log_prefix[i] + lam[i].ln();
        }
        let first_zero = lam.iter().position(|&x| x <= T::zero()).map_or(n + 1, |p| p + 1);
        SigmaProfile {
            spectrum,
            sigma2,
            log_prefix,
            first_zero,
        }
    }

    pub fn spectrum(&self) -> &EigenSpectrum<T> {
        &self.spectrum
    }

    pub fn n(&self) -> usize {
        self.spectrum.n()
    }

    /// Feature count carried by the spectrum.
    pub fn m(&self) -> usize {
        self.spectrum.m()
    }

    pub fn m_scalar(&self) -> T {
        T::from_usize_lossy(self.m())
    }

    /// `λ_i`, 1-based.
    pub fn lambda(&self, i: usize) -> T {
        self.spectrum.lambda(i)
    }

    /// `σ̂²(k)` for `k = 1..n−1`.
    pub fn sigma_hat(&self, k: usize) -> Result<T> {
        self.check_k(k)?;
        Ok(self.sigma2[k])
    }

    /// `σ̂²(k)` for `k = 0..n−1`; `σ̂²(0)` is the overall mean eigenvalue.
    pub fn sigma2(&self, k: usize) -> T {
        self.sigma2[k]
    }

    /// `σ̂²(1..n−1)` as a slice.
    pub fn sigma_path(&self) -> &[T] {
        &self.sigma2[1..]
    }

    /// `Σ_{i≤k} log λ_i`; `-inf` once a zero eigenvalue is included.
    pub fn log_prefix(&self, k: usize) -> T {
        self.log_prefix[k]
    }

    /// Largest `k ≤ n − 1` whose profile likelihood is defined.
    pub fn usable_k_max(&self) -> usize {
        let n = self.n();
        (1..n)
            .rev()
            .find(|&k| self.likelihood_defined(k))
            .unwrap_or(0)
    }

    pub fn likelihood_defined(&self, k: usize) -> bool {
        k >= 1 && k < self.n() && k < self.first_zero && self.sigma2[k] > T::zero()
    }

    pub(crate) fn check_k(&self, k: usize) -> Result<()> {
        let n = self.n();
        if k == 0 || k >= n {
            return Err(Error::Range(format!("k = {k} outside 1..{}", n - 1)));
        }
        Ok(())
    }

    fn check_defined(&self, k: usize) -> Result<()> {
        self.check_k(k)?;
        if k >= self.first_zero {
            return Err(Error::Domain(format!("λ_{} is zero", self.first_zero)));
        }
        if !(self.sigma2[k] > T::zero()) {
            return Err(Error::Domain(format!("σ̂²({k}) is zero")));
        }
        Ok(())
    }
}

impl<T: Scalar> From<EigenSpectrum<T>> for SigmaProfile<T> {
    fn from(sp: EigenSpectrum<T>) -> Self {
        SigmaProfile::new(sp)
    }
}

/// Profile log-likelihood evaluated at one `(k, δ̃)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyPoint<T> {
    pub k: usize,
    pub delta_tilde: T,
    pub value: T,
}

impl<T: Scalar> PenaltyPoint<T> {
    pub fn evaluate(sp: &SigmaProfile<T>, m: T, k: usize, delta_tilde: T) -> Result<Self> {
        Ok(PenaltyPoint {
            k,
            delta_tilde,
            value: penalized_profile_loglik(sp, m, k, delta_tilde)?,
        })
    }
}

/// `1/k − 1/n`, the supremum of admissible `δ̃` at `k`.
pub fn admissible_sup<T: Scalar>(n: usize, k: usize) -> T {
    T::one() / T::from_usize_lossy(k) - T::one() / T::from_usize_lossy(n)
}

/// `n − k − n·k·δ̃`, positive exactly when `δ̃` is admissible at `k`.
fn penalized_dof<T: Scalar>(n: usize, k: usize, delta_tilde: T) -> T {
    let nf = T::from_usize_lossy(n);
    let kf = T::from_usize_lossy(k);
    nf - kf - nf * kf * delta_tilde
}

fn check_delta<T: Scalar>(n: usize, k: usize, delta_tilde: T) -> Result<()> {
    if !(delta_tilde >= T::zero()) || !delta_tilde.is_finite() {
        return Err(Error::Range(format!("δ̃ = {delta_tilde} must be finite and non-negative")));
    }
    if !(penalized_dof(n, k, delta_tilde) > T::zero()) {
        return Err(Error::Range(format!(
            "δ̃ = {delta_tilde} is not below 1/k − 1/n = {} at k = {k}",
            admissible_sup::<T>(n, k)
        )));
    }
    Ok(())
}

/// `(1/k − 1/n)(1 − σ̂²(k))`: the stationary point of `δ̃ ↦ l_p(k; δ̃)`.
pub fn stationary_delta<T: Scalar>(sp: &SigmaProfile<T>, k: usize) -> Result<T> {
    sp.check_k(k)?;
    Ok(admissible_sup::<T>(sp.n(), k) * (T::one() - sp.sigma2(k)))
}

/// Upper end of the region on which `k` competes with its neighbours:
/// `(1/(k+1) − 1/n)(1 − σ̂²(k))`, or `(1/(n−1) − 1/n)(1 − σ̂²(n−1))` at
/// `k = n − 1`.
pub fn competition_sup<T: Scalar>(sp: &SigmaProfile<T>, k: usize) -> Result<T> {
    sp.check_k(k)?;
    let n = sp.n();
    let base = if k + 1 < n {
        admissible_sup::<T>(n, k + 1)
    } else {
        admissible_sup::<T>(n, n - 1)
    };
    Ok(base * (T::one() - sp.sigma2(k)))
}

/// `σ̂²(k)` for `k ∈ 1..n−1`.
pub fn sigma_hat<T: Scalar>(sp: &SigmaProfile<T>, k: usize) -> Result<T> {
    sp.sigma_hat(k)
}

/// `l_p(k) = −(m/2)[n log 2π + Σ_{i≤k} log λ_i + (n−k) log σ̂²(k) + n]`.
pub fn profile_loglik<T: Scalar>(sp: &SigmaProfile<T>, m: T, k: usize) -> Result<T> {
    sp.check_defined(k)?;
    let nf = T::from_usize_lossy(sp.n());
    let tail = T::from_usize_lossy(sp.n() - k);
    let inner = nf * T::TAU().ln() + nf + sp.log_prefix(k) + tail * sp.sigma2(k).ln();
    Ok(-(m / T::lit(2.0)) * inner)
}

/// Penalized residual variance `σ̃²(k) = σ̂²(k)(n−k)/(n−k−nkδ̃)`.
pub fn sigma_tilde<T: Scalar>(sp: &SigmaProfile<T>, k: usize, delta_tilde: T) -> Result<T> {
    sp.check_k(k)?;
    check_delta(sp.n(), k, delta_tilde)?;
    let tail = T::from_usize_lossy(sp.n() - k);
    Ok(sp.sigma2(k) * tail / penalized_dof(sp.n(), k, delta_tilde))
}

/// Penalized profile log-likelihood `l_p(k; δ̃)`.
pub fn penalized_profile_loglik<T: Scalar>(
    sp: &SigmaProfile<T>,
    m: T,
    k: usize,
    delta_tilde: T,
) -> Result<T> {
    sp.check_k(k)?;
    check_delta(sp.n(), k, delta_tilde)?;
    sp.check_defined(k)?;
    let nf = T::from_usize_lossy(sp.n());
    let inner = nf * T::TAU().ln() + nf + sp.log_prefix(k) + varying_part(sp, k, delta_tilde);
    Ok(-(m / T::lit(2.0)) * inner)
}

/// Bracketed part of `l_p(k; δ̃)` that varies with `k`, without the log-prefix.
fn varying_part<T: Scalar>(sp: &SigmaProfile<T>, k: usize, delta_tilde: T) -> T {
    let nf = T::from_usize_lossy(sp.n());
    let kf = T::from_usize_lossy(k);
    let tail = nf - kf;
    let dof = penalized_dof(sp.n(), k, delta_tilde);
    let ls = sp.sigma2(k).ln();
    let shrink = -dof * (-(nf * kf * delta_tilde) / tail).ln_1p();
    tail * ls + shrink - delta_tilde * nf * kf * (ls + T::one())
}

/// `l_p(k; δ̃) − l_p(j; δ̃)` for neighbouring `j = k ± 1`.
///
/// The shared constants cancel analytically, so the result keeps full
/// relative accuracy even when both likelihoods are large.
pub fn penalized_difference<T: Scalar>(
    sp: &SigmaProfile<T>,
    m: T,
    k: usize,
    j: usize,
    delta_tilde: T,
) -> Result<T> {
    if j + 1 != k && k + 1 != j {
        return Err(Error::Range(format!("k = {k} and j = {j} are not neighbours")));
    }
    for kk in [k, j] {
        sp.check_defined(kk)?;
        check_delta(sp.n(), kk, delta_tilde)?;
    }
    let prefix = if j == k + 1 { -sp.lambda(j).ln() } else { sp.lambda(k).ln() };
    let inner = prefix + varying_part(sp, k, delta_tilde) - varying_part(sp, j, delta_tilde);
    Ok(-(m / T::lit(2.0)) * inner)
}

/// `∂l_p(k; δ̃)/∂δ̃ = −(mnk/2) log{(n−k−nkδ̃)/((n−k)σ̂²(k))}`.
pub fn penalized_profile_gradient<T: Scalar>(
    sp: &SigmaProfile<T>,
    m: T,
    k: usize,
    delta_tilde: T,
) -> Result<T> {
    sp.check_k(k)?;
    check_delta(sp.n(), k, delta_tilde)?;
    if !(sp.sigma2(k) > T::zero()) {
        return Err(Error::Domain(format!("σ̂²({k}) is zero")));
    }
    let nf = T::from_usize_lossy(sp.n());
    let kf = T::from_usize_lossy(k);
    let tail = nf - kf;
    let ratio = penalized_dof(sp.n(), k, delta_tilde) / (tail * sp.sigma2(k));
    Ok(-(m * nf * kf / T::lit(2.0)) * ratio.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(vals: &[f64], m: usize) -> SigmaProfile<f64> {
        SigmaProfile::new(EigenSpectrum::new(vals.to_vec(), m).unwrap())
    }

    fn scenario_a() -> SigmaProfile<f64> {
        let d2 = [20.0, 15.0, 9.0, 7.0, 6.0, 5.0, 4.0, 2.5, 1.0, 0.5];
        let mut v: Vec<f64> = d2.iter().map(|d| d + 0.3).collect();
        v.resize(100, 0.3);
        profile(&v, 5000)
    }

    #[test]
    fn isotropic_sigma_is_one() {
        let sp = profile(&[1.0; 6], 10);
        for k in 1..6 {
            assert_eq!(sigma_hat(&sp, k).unwrap(), 1.0);
        }
        assert!(sigma_hat(&sp, 0).is_err());
        assert!(sigma_hat(&sp, 6).is_err());
    }

    #[test]
    fn scenario_a_sigma_values() {
        let sp = scenario_a();
        assert!((sigma_hat(&sp, 10).unwrap() - 0.3).abs() < 1e-14);
        assert!((sigma_hat(&sp, 9).unwrap() - 27.8 / 91.0).abs() < 1e-14);
        assert!((sp.sigma2(0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn isotropic_likelihood_is_flat() {
        let sp = profile(&[1.0; 5], 7);
        let want = -(7.0 / 2.0) * 5.0 * ((2.0 * std::f64::consts::PI).ln() + 1.0);
        for k in 1..5 {
            assert!((profile_loglik(&sp, 7.0, k).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn sigma_tilde_examples() {
        let sp = scenario_a();
        assert_eq!(sigma_tilde(&sp, 10, 0.0).unwrap(), sp.sigma2(10));
        let st = sigma_tilde(&sp, 10, 0.005).unwrap();
        assert!((st - 0.3 * 90.0 / 85.0).abs() < 1e-14);
        assert!(matches!(sigma_tilde(&sp, 10, 0.09), Err(Error::Range(_))));
        assert!(matches!(sigma_tilde(&sp, 10, -1e-3), Err(Error::Range(_))));
    }

    #[test]
    fn gradient_vanishes_at_stationary_point() {
        let sp = scenario_a();
        let d = stationary_delta(&sp, 10).unwrap();
        assert!((d - 0.063).abs() < 1e-15);
        let g = penalized_profile_gradient(&sp, 5000.0, 10, d).unwrap();
        assert!(g.abs() < 1e-6, "{g}");
    }

    #[test]
    fn zero_clamped_tail_is_a_domain_error() {
        let sp = profile(&[2.0, 1.0, 1.0, 0.0], 10);
        assert!(profile_loglik(&sp, 10.0, 2).is_ok());
        assert!(matches!(profile_loglik(&sp, 10.0, 3), Err(Error::Domain(_))));
        assert_eq!(sp.usable_k_max(), 2);
    }

    #[test]
    fn zero_penalty_matches_profile() {
        let sp = profile(&[2.0, 1.0, 0.6, 0.4], 10);
        for k in 1..4 {
            assert_eq!(
                penalized_profile_loglik(&sp, 10.0, k, 0.0).unwrap(),
                profile_loglik(&sp, 10.0, k).unwrap()
            );
        }
    }

    #[test]
    fn competition_region_sits_inside_monotone_region() {
        let sp = scenario_a();
        for k in 1..100 {
            let g = competition_sup(&sp, k).unwrap();
            let s = stationary_delta(&sp, k).unwrap();
            assert!(g <= s + 1e-15, "k = {k}");
        }
    }
}
