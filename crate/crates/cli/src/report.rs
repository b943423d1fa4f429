//! The versioned JSON run report.
//!
//! Every field except `generated_at_unix` is a function of the inputs and
//! flags, so two runs on the same input differ only there.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use pppca::baselines::EstimateReport;
use pppca::select::PppcaEstimate;
use pppca::spectrum::EigenSpectrum;
use pppca::{EstimatorConfig, Method, Scenario};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    /// Wall-clock time of the run in Unix seconds; the only non-reproducible field.
    pub generated_at_unix: u64,
    pub input: InputDescriptor,
    pub seed: Option<u64>,
    pub spectrum: SpectrumSummary,
    pub config: ConfigSummary,
    pub methods: Vec<MethodEntry>,
    pub pppca: Option<PppcaSection>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
    pub core_version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: "pppca".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            core_version: pppca::VERSION.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct InputDescriptor {
    /// `matrix`, `eigenvalues` or `scenario`.
    pub source: String,
    pub path: Option<String>,
    pub format: Option<String>,
    pub orientation: Option<String>,
    /// `zscore`, `rank-normal` or `none`.
    pub standardization: Option<String>,
    pub dropped_features: usize,
    pub scenario: Option<ScenarioSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSummary {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub k_star: usize,
    pub sigma2: f64,
    pub d2: Vec<f64>,
}

impl ScenarioSummary {
    pub fn of(s: &Scenario) -> Self {
        ScenarioSummary {
            id: s.id.clone(),
            n: s.n,
            m: s.m,
            k_star: s.k_star,
            sigma2: s.sigma2,
            d2: s.d2().unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSummary {
    pub n: usize,
    pub m: usize,
    pub rank: usize,
    pub rank_deficient: bool,
    pub trace: f64,
    pub top_eigenvalues: Vec<f64>,
}

/// Eigenvalues listed in the summary.
pub const TOP_EIGENVALUES: usize = 20;

impl SpectrumSummary {
    pub fn of(sp: &EigenSpectrum<f64>) -> Self {
        SpectrumSummary {
            n: sp.n(),
            m: sp.m(),
            rank: sp.rank(),
            rank_deficient: sp.is_rank_deficient(),
            trace: sp.trace(),
            top_eigenvalues: sp.eigenvalues().iter().take(TOP_EIGENVALUES).copied().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSummary {
    pub grid_points: Option<usize>,
    pub alpha: f64,
    pub lawley_scale: String,
    pub cumlog_variant: String,
    pub cumlog_k_min: usize,
}

impl ConfigSummary {
    pub fn of(c: &EstimatorConfig) -> Self {
        ConfigSummary {
            grid_points: c.grid_points,
            alpha: c.lawley.alpha,
            lawley_scale: format!("{:?}", c.lawley.scale),
            cumlog_variant: format!("{:?}", c.cumlog_variant),
            cumlog_k_min: c.cumlog_k_min,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodEntry {
    pub method: String,
    pub k_hat: Option<usize>,
    pub k_range: Vec<usize>,
    /// Per-`k` curves aligned with `k_range`; `null` where undefined.
    pub diagnostics: BTreeMap<String, Vec<Option<f64>>>,
    pub error: Option<ErrorInfo>,
}

impl MethodEntry {
    pub fn ok(r: &EstimateReport<f64>) -> Self {
        MethodEntry {
            method: r.method.name().into(),
            k_hat: Some(r.k_hat),
            k_range: r.k_range.clone(),
            diagnostics: r
                .diagnostics
                .iter()
                .map(|(name, v)| {
                    let v = v.iter().map(|&x| Some(x).filter(|x| x.is_finite())).collect();
                    (name.to_string(), v)
                })
                .collect(),
            error: None,
        }
    }

    pub fn failed(method: Method, e: &pppca::Error) -> Self {
        MethodEntry {
            method: method.name().into(),
            k_hat: None,
            k_range: Vec::new(),
            diagnostics: BTreeMap::new(),
            error: Some(ErrorInfo {
                kind: e.kind().into(),
                message: e.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridInfo {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PppcaSection {
    pub k_hat: usize,
    pub grid: GridInfo,
    /// Votes per `k`; keys are decimal strings in JSON.
    pub votes: BTreeMap<usize, usize>,
    /// Grid indices where no `k` was eligible.
    pub skipped: Vec<usize>,
}

impl PppcaSection {
    pub fn of(est: &PppcaEstimate<f64>) -> Self {
        PppcaSection {
            k_hat: est.k,
            grid: GridInfo {
                lo: est.lo,
                hi: est.hi,
                points: est.tally.grid.len(),
            },
            votes: est.tally.counts.clone(),
            skipped: est.tally.skipped.clone(),
        }
    }
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Parses and checks a report, rejecting unknown fields, other schema
    /// versions and internally inconsistent content.
    pub fn validate_json(text: &str) -> Result<RunReport, String> {
        let r: RunReport = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(format!("schema_version {} is not {SCHEMA_VERSION}", r.schema_version));
        }
        if r.spectrum.top_eigenvalues.len() != r.spectrum.n.min(TOP_EIGENVALUES) {
            return Err("top_eigenvalues has the wrong length".into());
        }
        for m in &r.methods {
            if m.method.parse::<Method>().is_err() {
                return Err(format!("unknown method '{}'", m.method));
            }
            if m.k_hat.is_some() == m.error.is_some() {
                return Err(format!("{}: exactly one of k_hat and error must be set", m.method));
            }
            if let Some((name, _)) = m.diagnostics.iter().find(|(_, v)| v.len() != m.k_range.len()) {
                return Err(format!("{}: diagnostic '{name}' is not aligned with k_range", m.method));
            }
        }
        let wants_pppca = r.methods.iter().any(|m| m.method == "pppca" && m.k_hat.is_some());
        if wants_pppca != r.pppca.is_some() {
            return Err("pppca section must be present exactly when pppca succeeded".into());
        }
        if let Some(p) = &r.pppca {
            if p.votes.values().sum::<usize>() + p.skipped.len() != p.grid.points {
                return Err("votes and skipped do not add up to the grid size".into());
            }
            if !(p.grid.lo > 0.0 && p.grid.lo <= p.grid.hi) {
                return Err("grid bounds are not ordered".into());
            }
        }
        Ok(r)
    }
}

pub fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
