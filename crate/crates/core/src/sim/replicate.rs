use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::Method;
use crate::error::{Error, Result};
use crate::estimate::{run_method, EstimatorConfig};
use crate::likelihood::SigmaProfile;

use super::{replicate_rng, replicate_seed, sample_spectrum_only, Scenario};

/// Estimates from one simulated data set.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateResult {
    pub scenario: String,
    pub replicate: usize,
    pub seed: u64,
    pub k_star: usize,
    /// `None` when the method failed on this replicate.
    pub k_hat: BTreeMap<Method, Option<usize>>,
    pub errors: BTreeMap<Method, String>,
    pub seconds: BTreeMap<Method, f64>,
}

fn one_replicate(
    s: &Scenario,
    methods: &[Method],
    r: usize,
    base_seed: u64,
    config: &EstimatorConfig,
) -> ReplicateResult {
    let mut out = ReplicateResult {
        scenario: s.id.clone(),
        replicate: r,
        seed: replicate_seed(base_seed, r),
        k_star: s.k_star,
        k_hat: BTreeMap::new(),
        errors: BTreeMap::new(),
        seconds: BTreeMap::new(),
    };
    let spectrum = sample_spectrum_only::<f64, _>(s, &mut replicate_rng(base_seed, r));
    let sp = match spectrum {
        Ok(sp) => SigmaProfile::new(sp),
        Err(e) => {
            for &m in methods {
                out.k_hat.insert(m, None);
                out.errors.insert(m, e.to_string());
            }
            return out;
        }
    };
    for &m in methods {
        let start = Instant::now();
        let res = run_method(&sp, m, config);
        out.seconds.insert(m, start.elapsed().as_secs_f64());
        match res {
            Ok(o) => {
                out.k_hat.insert(m, Some(o.report.k_hat));
            }
            Err(e) => {
                out.k_hat.insert(m, None);
                out.errors.insert(m, e.to_string());
            }
        }
    }
    out
}

/// Runs `replicates` independent data sets of a scenario.
///
/// Replicate `r` draws from its own generator seeded with
/// `base_seed ⊕ splitmix64(r)`, and results come back in index order, so the
/// output is the same for any thread count. Method failures become missing
/// values.
pub fn run_replicates(
    s: &Scenario,
    methods: &[Method],
    replicates: usize,
    base_seed: u64,
    config: &EstimatorConfig,
) -> Result<Vec<ReplicateResult>> {
    s.validate()?;
    if replicates == 0 {
        return Err(Error::Range("at least one replicate is required".into()));
    }
    Ok((0..replicates)
        .into_par_iter()
        .map(|r| one_replicate(s, methods, r, base_seed, config))
        .collect())
}

/// Aggregate accuracy of one method over replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub replicates: usize,
    pub missing: usize,
    pub mean_k_hat: f64,
    pub median_k_hat: f64,
    pub proportion_correct: f64,
}

/// Mean, median and share of exact hits per method; missing values count as
/// misses.
pub fn summarize(results: &[ReplicateResult], methods: &[Method]) -> Vec<MethodSummary> {
    methods
        .iter()
        .map(|&method| {
            let mut ks: Vec<usize> = Vec::new();
            let mut correct = 0;
            for r in results {
                if let Some(Some(k)) = r.k_hat.get(&method) {
                    ks.push(*k);
                    if *k == r.k_star {
                        correct += 1;
                    }
                }
            }
            ks.sort_unstable();
            let mean = if ks.is_empty() {
                f64::NAN
            } else {
                ks.iter().sum::<usize>() as f64 / ks.len() as f64
            };
            let median = match ks.len() {
                0 => f64::NAN,
                l if l % 2 == 1 => ks[l / 2] as f64,
                l => (ks[l / 2 - 1] + ks[l / 2]) as f64 / 2.0,
            };
            MethodSummary {
                method,
                replicates: results.len(),
                missing: results.len() - ks.len(),
                mean_k_hat: mean,
                median_k_hat: median,
                proportion_correct: if results.is_empty() {
                    f64::NAN
                } else {
                    correct as f64 / results.len() as f64
                },
            }
        })
        .collect()
}
