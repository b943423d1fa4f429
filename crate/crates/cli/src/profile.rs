//! Penalized likelihood curves over `(k, δ̃)` for external plotting.

use std::io::Write;

use pppca::likelihood::SigmaProfile;
use pppca::select::{geometric_grid, grid_range};
use pppca::{bound_u_a, bound_u_b, make_population_spectrum, penalized_difference, penalized_profile_loglik, Scenario};

use crate::args::ProfileArgs;
use crate::format::machine_opt;
use crate::input::load_spectrum;
use crate::{CliError, CliResult};

/// Range used when the spectrum gives no default grid, e.g. a flat one.
pub const FALLBACK_RANGE: (f64, f64) = (1e-6, 1e-1);

pub const COLUMNS: [&str; 7] = ["k", "delta_tilde", "lp", "diff_prev", "diff_next", "u_a", "u_b"];

/// One curve row; `None` marks a value that is undefined at this `(k, δ̃)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub k: usize,
    pub delta_tilde: f64,
    pub lp: Option<f64>,
    /// `l_p(k; δ̃) − l_p(k − 1; δ̃)`.
    pub diff_prev: Option<f64>,
    /// `l_p(k; δ̃) − l_p(k + 1; δ̃)`.
    pub diff_next: Option<f64>,
    pub u_a: Option<f64>,
    pub u_b: Option<f64>,
}

/// Rows for each `k`: `δ̃ = 0` first, then `deltas` in order.
pub fn curve_rows(sp: &SigmaProfile<f64>, ks: &[usize], deltas: &[f64]) -> Vec<CurveRow> {
    let m = sp.m_scalar();
    let n = sp.n();
    let mut rows = Vec::new();
    for &k in ks {
        let u_a = bound_u_a(sp, k).ok();
        let u_b = bound_u_b(sp, k).ok();
        for &d in std::iter::once(&0.0).chain(deltas) {
            rows.push(CurveRow {
                k,
                delta_tilde: d,
                lp: penalized_profile_loglik(sp, m, k, d).ok(),
                diff_prev: (k >= 2).then(|| penalized_difference(sp, m, k, k - 1, d).ok()).flatten(),
                diff_next: (k + 1 < n).then(|| penalized_difference(sp, m, k, k + 1, d).ok()).flatten(),
                u_a,
                u_b,
            });
        }
    }
    rows
}

pub fn curve_csv(rows: &[CurveRow]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.k.to_string(),
            machine_opt(Some(r.delta_tilde)),
            machine_opt(r.lp),
            machine_opt(r.diff_prev),
            machine_opt(r.diff_next),
            machine_opt(r.u_a),
            machine_opt(r.u_b),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn cmd_profile(args: &ProfileArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let spectrum = match &args.scenario {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| pppca::Error::Io(format!("{}: {e}", path.display())))?;
            make_population_spectrum::<f64>(&Scenario::from_config(&text)?)?
        }
        None => load_spectrum(&args.input)?.spectrum,
    };
    let sp = SigmaProfile::new(spectrum);
    let n = sp.n();
    let ks: Vec<usize> = match &args.k {
        Some(ks) => {
            if let Some(bad) = ks.iter().find(|&&k| k == 0 || k >= n) {
                return Err(pppca::Error::Range(format!("k = {bad} is outside 1..{}", n - 1)).into());
            }
            ks.clone()
        }
        None => (1..n).collect(),
    };
    let (lo, hi) = match (args.delta_min, args.delta_max) {
        (Some(lo), Some(hi)) => (lo, hi),
        (lo, hi) => {
            let (dlo, dhi) = grid_range(&sp).unwrap_or_else(|e| {
                let _ = writeln!(err, "warning: {e}; using the fallback range");
                FALLBACK_RANGE
            });
            (lo.unwrap_or(dlo), hi.unwrap_or(dhi))
        }
    };
    let deltas = if args.points == 0 {
        Vec::new()
    } else {
        geometric_grid(lo, hi, args.points)?
    };
    let bytes = curve_csv(&curve_rows(&sp, &ks, &deltas));
    match &args.output {
        Some(path) => {
            std::fs::write(path, &bytes).map_err(|e| CliError::io(path, e))?;
            let _ = writeln!(out, "wrote {} rows to {}", ks.len() * (deltas.len() + 1), path.display());
        }
        None => {
            let _ = out.write_all(&bytes);
        }
    }
    Ok(0)
}
