use std::str::FromStr;

use crate::error::{Error, Result};
use crate::likelihood::{profile_loglik, SigmaProfile};
use crate::scalar::Scalar;

use super::{argmin, EstimateReport, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InformationCriterion {
    Aic,
    Bic,
}

impl FromStr for InformationCriterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aic" => Ok(InformationCriterion::Aic),
            "bic" => Ok(InformationCriterion::Bic),
            other => Err(Error::Config(format!("unknown criterion '{other}'"))),
        }
    }
}

/// Free parameters of the rank-`k` model: `nk + 1 − k(k−1)/2`.
pub fn free_parameters(n: usize, k: usize) -> usize {
    n * k + 1 - k * k.saturating_sub(1) / 2
}

/// Minimizes `−2 l_p(k) + w·p(k)` with `w = 2` (AIC) or `log m` (BIC).
///
/// The scan stops at the largest `k` with a defined likelihood, so spectra
/// with trailing zeros still get an answer.
pub fn ic_select<T: Scalar>(
    sp: &SigmaProfile<T>,
    m: T,
    kind: InformationCriterion,
) -> Result<EstimateReport<T>> {
    let k_max = sp.usable_k_max();
    if k_max == 0 {
        return Err(Error::Domain("no k has a defined likelihood".into()));
    }
    let weight = match kind {
        InformationCriterion::Aic => T::lit(2.0),
        InformationCriterion::Bic => m.ln(),
    };
    let two = T::lit(2.0);
    let ks: Vec<usize> = (1..=k_max).collect();
    let mut loglik = Vec::with_capacity(k_max);
    let mut penalty = Vec::with_capacity(k_max);
    let mut crit = Vec::with_capacity(k_max);
    for &k in &ks {
        let l = profile_loglik(sp, m, k)?;
        let p = T::from_usize_lossy(free_parameters(sp.n(), k));
        loglik.push(l);
        penalty.push(weight * p);
        crit.push(-two * l + weight * p);
    }
    let best = argmin(&crit).expect("non-empty scan");
    let method = match kind {
        InformationCriterion::Aic => Method::Aic,
        InformationCriterion::Bic => Method::Bic,
    };
    Ok(EstimateReport::new(method, ks[best], ks)
        .with("criterion", crit)
        .with("loglik", loglik)
        .with("penalty", penalty))
}
