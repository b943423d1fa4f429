//! Runs any [`Method`] on a spectrum with one shared configuration.

use std::collections::BTreeMap;

use crate::baselines::{
    cumlog_select, ic_select, lawley_select, vard_select, CumlogVariant, EstimateReport,
    InformationCriterion, LawleyOptions, Method,
};
use crate::error::Result;
use crate::likelihood::SigmaProfile;
use crate::scalar::Scalar;
use crate::select::{pppca_select, PppcaEstimate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Grid size for the vote; `50·n` when `None`.
    pub grid_points: Option<usize>,
    pub lawley: LawleyOptions,
    pub cumlog_variant: CumlogVariant,
    pub cumlog_k_min: usize,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            grid_points: None,
            lawley: LawleyOptions::default(),
            cumlog_variant: CumlogVariant::Head,
            cumlog_k_min: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutput<T> {
    pub report: EstimateReport<T>,
    /// Grid and tally, for the voting method only.
    pub pppca: Option<PppcaEstimate<T>>,
}

pub fn run_method<T: Scalar>(
    sp: &SigmaProfile<T>,
    method: Method,
    config: &EstimatorConfig,
) -> Result<MethodOutput<T>> {
    let m = sp.m_scalar();
    let report = match method {
        Method::Pppca => {
            let est = pppca_select(sp, m, config.grid_points)?;
            let ks: Vec<usize> = (1..sp.n()).collect();
            let votes = ks
                .iter()
                .map(|k| T::from_usize_lossy(est.tally.counts.get(k).copied().unwrap_or(0)))
                .collect();
            let mut diagnostics = BTreeMap::new();
            diagnostics.insert("votes", votes);
            let report = EstimateReport {
                method,
                k_hat: est.k,
                k_range: ks,
                diagnostics,
            };
            return Ok(MethodOutput {
                report,
                pppca: Some(est),
            });
        }
        Method::Aic => ic_select(sp, m, InformationCriterion::Aic)?,
        Method::Bic => ic_select(sp, m, InformationCriterion::Bic)?,
        Method::Cumlog => cumlog_select(sp, config.cumlog_k_min, config.cumlog_variant)?,
        Method::Vard => vard_select(sp)?,
        Method::Lawley => lawley_select(sp, m, config.lawley)?,
    };
    Ok(MethodOutput {
        report,
        pppca: None,
    })
}
