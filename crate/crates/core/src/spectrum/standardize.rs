use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::DataMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Standardization {
    /// Subtract the mean and divide by the sample standard deviation (n − 1).
    #[default]
    ZScore,
    /// Replace values by Blom normal scores of their ranks, then z-score.
    RankNormal,
}

impl FromStr for Standardization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zscore" | "z-score" | "z" => Ok(Standardization::ZScore),
            "rank" | "rank-normal" | "ranknormal" => Ok(Standardization::RankNormal),
            other => Err(Error::Config(format!("unknown standardization '{other}'"))),
        }
    }
}

/// What to do with a feature that is constant across units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ConstantPolicy {
    #[default]
    Error,
    Drop,
}

/// Standardizes each feature column across the `n` units.
///
/// Afterwards every kept column has mean 0 and sample variance 1. Constant
/// columns either raise [`Error::DegenerateFeature`] (0-based index) or are
/// removed together with their label.
pub fn standardize_features<T: Scalar>(
    d: &DataMatrix<T>,
    method: Standardization,
    policy: ConstantPolicy,
) -> Result<DataMatrix<T>> {
    let (n, m) = (d.n(), d.m());
    let mut kept: Vec<Vec<T>> = Vec::with_capacity(m);
    let mut kept_labels = Vec::new();
    for j in 0..m {
        let mut col = d.column(j);
        if method == Standardization::RankNormal && !is_constant(&col) {
            col = normal_scores(&col);
        }
        match zscore(&col) {
            Some(z) => {
                kept.push(z);
                if let Some(l) = &d.feature_labels {
                    kept_labels.push(l[j].clone());
                }
            }
            None if policy == ConstantPolicy::Drop => {}
            None => return Err(Error::DegenerateFeature { index: j }),
        }
    }
    let m2 = kept.len();
    if m2 < 2 {
        return Err(Error::Shape(format!(
            "only {m2} non-constant features remain after standardization"
        )));
    }
    let mut values = Vec::with_capacity(n * m2);
    for i in 0..n {
        for col in &kept {
            values.push(col[i]);
        }
    }
    let labels = d.feature_labels.as_ref().map(|_| kept_labels);
    Ok(DataMatrix::from_parts_unchecked(
        n,
        m2,
        values,
        d.unit_labels.clone(),
        labels,
    ))
}

fn is_constant<T: Scalar>(col: &[T]) -> bool {
    col.iter().all(|&x| x == col[0])
}

fn zscore<T: Scalar>(col: &[T]) -> Option<Vec<T>> {
    let n = T::from_usize_lossy(col.len());
    let mean = col.iter().copied().sum::<T>() / n;
    let ss: T = col.iter().map(|&x| (x - mean) * (x - mean)).sum();
    let sd = (ss / (n - T::one())).sqrt();
    let scale = col.iter().fold(T::zero(), |a, &x| a.max(x.abs()));
    if !(sd > T::tol(1e-13) * scale.max(T::min_positive_value())) {
        return None;
    }
    Some(col.iter().map(|&x| (x - mean) / sd).collect())
}

/// Blom scores `Φ⁻¹((r − 3/8)/(n + 1/4))` with average ranks for ties.
fn normal_scores<T: Scalar>(col: &[T]) -> Vec<T> {
    let n = col.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| col[a].partial_cmp(&col[b]).expect("finite"));
    let mut ranks = vec![0.0f64; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && col[idx[j + 1]] == col[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &p in &idx[i..=j] {
            ranks[p] = avg;
        }
        i = j + 1;
    }
    ranks
        .into_iter()
        .map(|r| T::lit(inverse_normal_cdf((r - 0.375) / (n as f64 + 0.25))))
        .collect()
}

/// Standard normal quantile (Acklam's rational approximation, relative error
/// below 1.2e-9).
pub fn inverse_normal_cdf(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e1,
        2.209460984245205e2,
        -2.759285104469687e2,
        1.383577518672690e2,
        -3.066479806614716e1,
        2.506628277459239,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e1,
        1.615858368580409e2,
        -1.556989798598866e2,
        6.680131188771972e1,
        -1.328068155288572e1,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-3,
        -3.223964580411365e-1,
        -2.400758277161838,
        -2.549732539343734,
        4.374664141464968,
        2.938163982698783,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-3,
        3.224671290700398e-1,
        2.445134137142996,
        3.754408661907416,
    ];
    const P_LOW: f64 = 0.02425;

    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}
