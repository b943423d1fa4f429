//! Comparison selectors computed from the same spectrum: information
//! criteria, two eigenvalue-elbow heuristics and Lawley's sequential test.

pub mod chi2;
mod elbow;
mod ic;
mod lawley;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

pub use elbow::{cumlog_select, vard_select, CumlogVariant};
pub use ic::{free_parameters, ic_select, InformationCriterion};
pub use lawley::{lawley_select, lawley_statistic, LawleyOptions, LawleyScale, LawleyStatistic};

use crate::error::{Error, Result};

/// Every estimator the crate offers, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Pppca,
    Aic,
    Bic,
    Cumlog,
    Vard,
    Lawley,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Pppca,
        Method::Aic,
        Method::Bic,
        Method::Cumlog,
        Method::Vard,
        Method::Lawley,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Pppca => "pppca",
            Method::Aic => "aic",
            Method::Bic => "bic",
            Method::Cumlog => "cumlog",
            Method::Vard => "vard",
            Method::Lawley => "lawley",
        }
    }

    /// Parses a comma-separated list; `all` expands to every method.
    pub fn parse_list(s: &str) -> Result<Vec<Method>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part.eq_ignore_ascii_case("all") {
                out.extend(Method::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::Config("no methods given".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown method '{s}'")))
    }
}

/// Selected dimension plus the per-`k` values that led to it.
///
/// Every series in `diagnostics` is aligned with `k_range`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport<T> {
    pub method: Method,
    pub k_hat: usize,
    pub k_range: Vec<usize>,
    pub diagnostics: BTreeMap<&'static str, Vec<T>>,
}

impl<T> EstimateReport<T> {
    fn new(method: Method, k_hat: usize, k_range: Vec<usize>) -> Self {
        EstimateReport {
            method,
            k_hat,
            k_range,
            diagnostics: BTreeMap::new(),
        }
    }

    fn with(mut self, name: &'static str, values: Vec<T>) -> Self {
        self.diagnostics.insert(name, values);
        self
    }
}

/// Index of the smallest value, first on ties. NaN never wins.
fn argmin<T: PartialOrd + Copy>(values: &[T]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if best.is_none_or(|b| *v < values[b]) && *v == *v {
            best = Some(i);
        }
    }
    best
}

fn argmax<T: PartialOrd + Copy>(values: &[T]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if best.is_none_or(|b| *v > values[b]) && *v == *v {
            best = Some(i);
        }
    }
    best
}
