use crate::error::{Error, Result};
use crate::likelihood::SigmaProfile;
use crate::scalar::Scalar;

use super::chi2::chi2_sf;
use super::{EstimateReport, Method};

/// Multiplier applied to the log-ratio bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LawleyScale {
    /// `c = p − (2p + 1 + 2/p)/6 + mean² Σ_{i<j} (λ_i − mean)⁻²`.
    #[default]
    Corrected,
    /// The same `c`, but the correction sum runs over `i ≤ j` with `λ_j` in
    /// place of `λ_i`.
    CorrectedLiteral,
    /// The feature count `m`.
    Classical,
}

impl std::str::FromStr for LawleyScale {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "corrected" => Ok(LawleyScale::Corrected),
            "corrected-literal" | "literal" => Ok(LawleyScale::CorrectedLiteral),
            "classical" => Ok(LawleyScale::Classical),
            other => Err(Error::Config(format!("unknown Lawley scale '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawleyOptions {
    pub scale: LawleyScale,
    pub alpha: f64,
}

impl Default for LawleyOptions {
    fn default() -> Self {
        LawleyOptions {
            scale: LawleyScale::Corrected,
            alpha: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawleyStatistic<T> {
    pub statistic: T,
    pub dof: usize,
    pub p_value: f64,
}

/// Test of `λ_j = … = λ_last` on `values[..last]`, `p = last − j + 1` terms.
fn statistic_on<T: Scalar>(
    values: &[T],
    m: T,
    j: usize,
    scale: LawleyScale,
) -> Result<LawleyStatistic<T>> {
    let last = values.len();
    if j == 0 || j + 1 > last {
        return Err(Error::Range(format!("j = {j} leaves fewer than two tail values")));
    }
    let tail = &values[j - 1..];
    if let Some(pos) = tail.iter().position(|&x| !(x > T::zero())) {
        return Err(Error::Domain(format!("λ_{} is not positive", j + pos)));
    }
    let p = tail.len();
    let pf = T::from_usize_lossy(p);
    let dof = p * (p + 1) / 2 - 1;

    let bracket = if tail.iter().all(|&x| x == tail[0]) {
        T::zero()
    } else {
        let mean = tail.iter().copied().sum::<T>() / pf;
        let logs: T = tail.iter().map(|x| x.ln()).sum();
        (pf * mean.ln() - logs).max(T::zero())
    };
    if bracket == T::zero() {
        return Ok(LawleyStatistic {
            statistic: T::zero(),
            dof,
            p_value: 1.0,
        });
    }

    let mean = tail.iter().copied().sum::<T>() / pf;
    let c = match scale {
        LawleyScale::Classical => m,
        LawleyScale::Corrected | LawleyScale::CorrectedLiteral => {
            let base = pf - (T::lit(2.0) * pf + T::one() + T::lit(2.0) / pf) / T::lit(6.0);
            let correction: T = match scale {
                LawleyScale::Corrected => values[..j - 1]
                    .iter()
                    .map(|&l| (l - mean).powi(-2))
                    .sum(),
                _ => T::from_usize_lossy(j) * (values[j - 1] - mean).powi(-2),
            };
            base + mean * mean * correction
        }
    };
    let statistic = c * bracket;
    Ok(LawleyStatistic {
        statistic,
        dof,
        p_value: chi2_sf(statistic.as_f64(), dof as f64),
    })
}

/// Lawley's chi-square statistic for equality of `λ_j..λ_n`.
///
/// Uses `p = n − j + 1` tail values and `p(p+1)/2 − 1` degrees of freedom.
pub fn lawley_statistic<T: Scalar>(
    sp: &SigmaProfile<T>,
    m: T,
    j: usize,
    scale: LawleyScale,
) -> Result<LawleyStatistic<T>> {
    statistic_on(sp.spectrum().eigenvalues(), m, j, scale)
}

/// Sequential test: the first `q` whose tail `λ_{q+1}..` is not rejected.
///
/// A test rejects when its p-value is below `alpha`. Returns `n − 2` when all
/// tests reject. Trailing zero eigenvalues are dropped before testing.
pub fn lawley_select<T: Scalar>(
    sp: &SigmaProfile<T>,
    m: T,
    options: LawleyOptions,
) -> Result<EstimateReport<T>> {
    let alpha = options.alpha;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Range(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let n = sp.n();
    let values = &sp.spectrum().eigenvalues()[..sp.spectrum().rank()];
    if values.len() < 2 {
        return Err(Error::Domain("fewer than two positive eigenvalues".into()));
    }
    let mut qs = Vec::new();
    let mut stats = Vec::new();
    let mut dofs = Vec::new();
    let mut pvals = Vec::new();
    let mut k_hat = n - 2;
    for q in 0..=values.len() - 2 {
        let s = statistic_on(values, m, q + 1, options.scale)?;
        qs.push(q);
        stats.push(s.statistic);
        dofs.push(T::from_usize_lossy(s.dof));
        pvals.push(T::lit(s.p_value));
        if s.p_value >= alpha {
            k_hat = q;
            break;
        }
    }
    Ok(EstimateReport::new(Method::Lawley, k_hat, qs)
        .with("statistic", stats)
        .with("dof", dofs)
        .with("p_value", pvals))
}
