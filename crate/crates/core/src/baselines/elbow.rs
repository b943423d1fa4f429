use std::str::FromStr;

use crate::error::{Error, Result};
use crate::likelihood::SigmaProfile;
use crate::scalar::Scalar;

use super::{argmax, argmin, EstimateReport, Method};

/// Which block of eigenvalues the Cumlog gap is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CumlogVariant {
    /// `λ₁..λ_k`. Minimized at `k = 1` for any strictly decreasing spectrum.
    #[default]
    Head,
    /// `λ_{k+1}..λ_r` over the positive eigenvalues.
    Tail,
}

impl FromStr for CumlogVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "head" => Ok(CumlogVariant::Head),
            "tail" => Ok(CumlogVariant::Tail),
            other => Err(Error::Config(format!("unknown cumlog variant '{other}'"))),
        }
    }
}

/// `log(mean x) − mean(log x)`, zero exactly when all entries are equal.
fn jensen_gap<T: Scalar>(xs: &[T]) -> T {
    if xs.iter().all(|&x| x == xs[0]) {
        return T::zero();
    }
    let len = T::from_usize_lossy(xs.len());
    let mean = xs.iter().copied().sum::<T>() / len;
    let mean_log = xs.iter().map(|x| x.ln()).sum::<T>() / len;
    mean.ln() - mean_log
}

/// Cumlog elbow: argmin over `k ≥ k_min` of the Jensen gap of a block.
///
/// Zero eigenvalues end the scan; a `k_min` past the positive part of the
/// spectrum is a domain error.
pub fn cumlog_select<T: Scalar>(
    sp: &SigmaProfile<T>,
    k_min: usize,
    variant: CumlogVariant,
) -> Result<EstimateReport<T>> {
    let lam = sp.spectrum().eigenvalues();
    let n = sp.n();
    let rank = sp.spectrum().rank();
    let k_min = k_min.max(1);
    let k_max = match variant {
        CumlogVariant::Head => rank.min(n - 1),
        CumlogVariant::Tail => rank.saturating_sub(2).min(n - 1),
    };
    if k_min > k_max {
        return Err(Error::Domain(format!(
            "no k in {k_min}..{k_max} avoids zero eigenvalues"
        )));
    }
    let ks: Vec<usize> = (k_min..=k_max).collect();
    let crit: Vec<T> = ks
        .iter()
        .map(|&k| match variant {
            CumlogVariant::Head => jensen_gap(&lam[..k]),
            CumlogVariant::Tail => jensen_gap(&lam[k..rank]),
        })
        .collect();
    let best = argmin(&crit).expect("non-empty scan");
    Ok(EstimateReport::new(Method::Cumlog, ks[best], ks).with("criterion", crit))
}

/// VarD elbow: argmax over `k ∈ 1..n−1` of the population variance of
/// `λ₁..λ_k`.
pub fn vard_select<T: Scalar>(sp: &SigmaProfile<T>) -> Result<EstimateReport<T>> {
    let lam = sp.spectrum().eigenvalues();
    let n = sp.n();
    let mut sum = T::zero();
    let mut sum_sq = T::zero();
    let mut crit = Vec::with_capacity(n - 1);
    for (i, &x) in lam.iter().take(n - 1).enumerate() {
        sum += x;
        sum_sq += x * x;
        let k = T::from_usize_lossy(i + 1);
        let mean = sum / k;
        // clamp round-off so the path stays non-negative
        crit.push((sum_sq / k - mean * mean).max(T::zero()));
    }
    let ks: Vec<usize> = (1..n).collect();
    let best = argmax(&crit).expect("n ≥ 3");
    Ok(EstimateReport::new(Method::Vard, ks[best], ks).with("criterion", crit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::EigenSpectrum;

    fn raw(v: &[f64]) -> SigmaProfile<f64> {
        SigmaProfile::new(EigenSpectrum::unnormalized(v.to_vec(), 10).unwrap())
    }

    #[test]
    fn cumlog_flat_spectrum() {
        let sp = raw(&[1.0; 6]);
        for k_min in [1, 3] {
            let r = cumlog_select(&sp, k_min, CumlogVariant::Head).unwrap();
            assert_eq!(r.k_hat, k_min);
            assert!(r.diagnostics["criterion"].iter().all(|&c| c == 0.0));
        }
    }

    #[test]
    fn cumlog_head_examples() {
        let r = cumlog_select(&raw(&[4.0, 2.0, 1.0, 1.0]), 1, CumlogVariant::Head).unwrap();
        assert_eq!(r.k_hat, 1);
        assert_eq!(r.diagnostics["criterion"][0], 0.0);
        let c = &r.diagnostics["criterion"];
        // k = 2: log 3 − (log 4 + log 2)/2
        assert!((c[1] - (3f64.ln() - 0.5 * 8f64.ln())).abs() < 1e-15);
        assert!(c[1..].iter().all(|&x| x > 0.0));
    }

    #[test]
    fn cumlog_tail_finds_the_flat_block() {
        let r = cumlog_select(&raw(&[9.0, 5.0, 3.0, 1.0, 1.0, 1.0, 1.0]), 1, CumlogVariant::Tail)
            .unwrap();
        assert_eq!(r.k_hat, 3);
    }

    #[test]
    fn vard_example() {
        let r = vard_select(&raw(&[4.0, 2.0, 1.0, 1.0])).unwrap();
        let c = &r.diagnostics["criterion"];
        let want = [0.0, 1.0, 14.0 / 9.0];
        for (x, w) in c.iter().zip(want) {
            assert!((x - w).abs() < 1e-14);
        }
        assert_eq!(r.k_hat, 3);
        assert_eq!(vard_select(&raw(&[1.0; 5])).unwrap().k_hat, 1);
    }
}
