//! Spiked-covariance scenarios, seeded data generation and replicate runs.

mod data;
mod replicate;
mod rng;

pub use data::{sample_data, sample_spectrum_only};
pub use replicate::{run_replicates, summarize, MethodSummary, ReplicateResult};
pub use rng::{random_orthogonal, replicate_rng, replicate_seed, splitmix64, SimRng};

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::spectrum::EigenSpectrum;

/// One simulation setting: `n` units, `m` features, `k*` spikes over noise
/// variance `σ²`, with squared singular values either given or decaying
/// geometrically down to `d2_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub k_star: usize,
    pub sigma2: f64,
    pub d2_min: f64,
    pub explicit_d2: Option<Vec<f64>>,
}

impl Scenario {
    /// Decay-model scenario.
    pub fn decay(n: usize, m: usize, k_star: usize, sigma2: f64, d2_min: f64) -> Self {
        Scenario {
            id: format!("n{n}_m{m}_k{k_star}_s{sigma2}_d{d2_min}"),
            n,
            m,
            k_star,
            sigma2,
            d2_min,
            explicit_d2: None,
        }
    }

    /// Scenario with the squared singular values spelled out.
    pub fn explicit(n: usize, m: usize, sigma2: f64, d2: &[f64]) -> Self {
        Scenario {
            id: format!("n{n}_m{m}_k{}_s{sigma2}_explicit", d2.len()),
            n,
            m,
            k_star: d2.len(),
            sigma2,
            d2_min: d2.last().copied().unwrap_or(0.0),
            explicit_d2: Some(d2.to_vec()),
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InfeasibleScenario(msg));
        if self.n < 3 || self.m < 2 {
            return bad(format!("need n ≥ 3 and m ≥ 2, got n = {}, m = {}", self.n, self.m));
        }
        if !(self.sigma2 > 0.0 && self.sigma2 <= 1.0) {
            return bad(format!("sigma2 = {} must lie in (0, 1]", self.sigma2));
        }
        if self.k_star >= self.n {
            return bad(format!("k_star = {} must be below n = {}", self.k_star, self.n));
        }
        let budget = self.n as f64 * (1.0 - self.sigma2);
        match &self.explicit_d2 {
            Some(d2) => {
                if d2.len() != self.k_star {
                    return bad(format!(
                        "{} explicit values for k_star = {}",
                        d2.len(),
                        self.k_star
                    ));
                }
                if d2.iter().any(|&d| !(d.is_finite() && d > 0.0)) {
                    return bad("explicit d2 values must be positive".into());
                }
                if d2.windows(2).any(|w| w[1] > w[0]) {
                    return bad("explicit d2 values must be non-increasing".into());
                }
                let total: f64 = d2.iter().sum::<f64>() + self.n as f64 * self.sigma2;
                if (total - self.n as f64).abs() > 1e-8 * self.n as f64 {
                    return bad(format!(
                        "sum of d2 plus n·sigma2 is {total}, expected {}",
                        self.n
                    ));
                }
            }
            None => {
                if self.k_star > 0 && !(self.d2_min > 0.0) {
                    return bad("d2_min must be positive".into());
                }
                if self.k_star as f64 * self.d2_min > budget * (1.0 + 1e-12) {
                    return bad(format!(
                        "k_star·d2_min = {} exceeds n(1 − sigma2) = {budget}",
                        self.k_star as f64 * self.d2_min
                    ));
                }
            }
        }
        Ok(())
    }

    /// Squared singular values `d²₁ ≥ … ≥ d²_{k*}`.
    pub fn d2(&self) -> Result<Vec<f64>> {
        self.validate()?;
        match &self.explicit_d2 {
            Some(d2) => Ok(d2.clone()),
            None => decay_profile(self.n, self.k_star, self.sigma2, self.d2_min),
        }
    }

    /// Parses `key = value` lines; `#` starts a comment.
    ///
    /// Keys: `id`, `n`, `m`, `k_star`, `sigma2`, `d2_min`, `explicit_d2`
    /// (comma-separated). With `explicit_d2`, `k_star` defaults to its length.
    pub fn from_config(text: &str) -> Result<Self> {
        let mut id = None;
        let (mut n, mut m, mut k_star) = (None, None, None);
        let (mut sigma2, mut d2_min, mut explicit) = (None, None, None);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let err = |what: &str| Error::Config(format!("line {}: bad {what} '{value}'", lineno + 1));
            match key {
                "id" | "name" => id = Some(value.to_owned()),
                "n" => n = Some(value.parse::<usize>().map_err(|_| err("n"))?),
                "m" => m = Some(value.parse::<usize>().map_err(|_| err("m"))?),
                "k_star" | "k" => k_star = Some(value.parse::<usize>().map_err(|_| err("k_star"))?),
                "sigma2" => sigma2 = Some(value.parse::<f64>().map_err(|_| err("sigma2"))?),
                "d2_min" => d2_min = Some(value.parse::<f64>().map_err(|_| err("d2_min"))?),
                "explicit_d2" | "d2" => {
                    let vals = value
                        .trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
                        .split(',')
                        .map(|v| v.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| err("explicit_d2"))?;
                    explicit = Some(vals);
                }
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        let missing = |k: &str| Error::Config(format!("missing key '{k}'"));
        let n = n.ok_or_else(|| missing("n"))?;
        let m = m.ok_or_else(|| missing("m"))?;
        let sigma2 = sigma2.ok_or_else(|| missing("sigma2"))?;
        let mut s = match explicit {
            Some(d2) => {
                let mut s = Scenario::explicit(n, m, sigma2, &d2);
                if let Some(k) = k_star {
                    s.k_star = k;
                }
                s
            }
            None => Scenario::decay(
                n,
                m,
                k_star.ok_or_else(|| missing("k_star"))?,
                sigma2,
                d2_min.ok_or_else(|| missing("d2_min"))?,
            ),
        };
        if let Some(id) = id {
            s.id = id;
        }
        s.validate()?;
        Ok(s)
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scenario::from_config(s)
    }
}

/// `d²ᵢ = d2_min·ρ^(k−i)` with `ρ ≥ 1` chosen so the values sum to `n(1 − σ²)`.
pub fn decay_profile(n: usize, k: usize, sigma2: f64, d2_min: f64) -> Result<Vec<f64>> {
    let budget = n as f64 * (1.0 - sigma2);
    if k == 0 {
        return Ok(Vec::new());
    }
    if k as f64 * d2_min > budget * (1.0 + 1e-12) {
        return Err(Error::InfeasibleScenario(format!(
            "k·d2_min = {} exceeds n(1 − sigma2) = {budget}",
            k as f64 * d2_min
        )));
    }
    if k == 1 {
        return Ok(vec![budget]);
    }
    let target = budget / d2_min;
    let geometric = |r: f64| (0..k).map(|i| r.powi(i as i32)).sum::<f64>();
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while geometric(hi) < target {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if geometric(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    let rho = 0.5 * (lo + hi);
    Ok((1..=k).map(|i| d2_min * rho.powi((k - i) as i32)).collect())
}

/// Population eigenvalues `d²ᵢ + σ²` for `i ≤ k*`, `σ²` beyond.
pub fn make_population_spectrum<T: Scalar>(s: &Scenario) -> Result<EigenSpectrum<T>> {
    let d2 = s.d2()?;
    let mut vals: Vec<T> = d2.iter().map(|d| T::lit(d + s.sigma2)).collect();
    vals.resize(s.n, T::lit(s.sigma2));
    EigenSpectrum::new(vals, s.m)
}
