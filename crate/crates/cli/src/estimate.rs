use std::io::Write;

use pppca::likelihood::SigmaProfile;
use pppca::{run_method, EstimatorConfig, Method};

use crate::args::EstimateArgs;
use crate::format::human;
use crate::input::load_spectrum;
use crate::report::{
    unix_now, ConfigSummary, InputDescriptor, MethodEntry, PppcaSection, RunReport,
    SpectrumSummary, ToolInfo,
};
use crate::{with_threads, CliError, CliResult, EXIT_INPUT, EXIT_INTERNAL};

/// Runs `methods` on a spectrum and assembles the report. The exit code is
/// non-zero when any method failed: 2 if a failure was internal, else 1.
pub fn build_report(
    spectrum: pppca::spectrum::EigenSpectrum<f64>,
    input: InputDescriptor,
    seed: Option<u64>,
    methods: &[Method],
    config: &EstimatorConfig,
) -> (RunReport, i32) {
    let mut warnings = Vec::new();
    if spectrum.is_rank_deficient() {
        warnings.push(format!(
            "rank-deficient spectrum: rank {} with m = {} below n = {}",
            spectrum.rank(),
            spectrum.m(),
            spectrum.n()
        ));
    }
    let summary = SpectrumSummary::of(&spectrum);
    let sp = SigmaProfile::new(spectrum);
    let mut code = 0;
    let mut entries = Vec::new();
    let mut pppca = None;
    for &method in methods {
        match run_method(&sp, method, config) {
            Ok(out) => {
                entries.push(MethodEntry::ok(&out.report));
                if let Some(est) = &out.pppca {
                    pppca = Some(PppcaSection::of(est));
                }
            }
            Err(e) => {
                code = code.max(if e.is_internal() { EXIT_INTERNAL } else { EXIT_INPUT });
                entries.push(MethodEntry::failed(method, &e));
            }
        }
    }
    let report = RunReport {
        schema_version: crate::report::SCHEMA_VERSION,
        tool: ToolInfo::default(),
        generated_at_unix: unix_now(),
        input,
        seed,
        spectrum: summary,
        config: ConfigSummary::of(config),
        methods: entries,
        pppca,
        warnings,
    };
    (report, code)
}

/// One line per method.
pub fn summary_lines(report: &RunReport) -> Vec<String> {
    report
        .methods
        .iter()
        .map(|m| match (&m.k_hat, &m.error) {
            (Some(k), _) if m.method == "pppca" => {
                let p = report.pppca.as_ref();
                let votes = p.and_then(|p| p.votes.get(k)).copied().unwrap_or(0);
                let (total, lo, hi) = p.map_or((0, f64::NAN, f64::NAN), |p| (p.grid.points, p.grid.lo, p.grid.hi));
                format!(
                    "{:<7} k = {k}  ({votes}/{total} votes, grid {}..{})",
                    m.method,
                    human(lo),
                    human(hi)
                )
            }
            (Some(k), _) => format!("{:<7} k = {k}", m.method),
            (None, Some(e)) => format!("{:<7} failed: {}: {}", m.method, e.kind, e.message),
            (None, None) => format!("{:<7} no estimate", m.method),
        })
        .collect()
}

pub fn cmd_estimate(
    args: &EstimateArgs,
    threads: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<i32> {
    let loaded = load_spectrum(&args.input)?;
    let config = args.estimator.config();
    let methods = args.estimator.methods.0.clone();
    let (report, code) = with_threads(threads, move || {
        build_report(loaded.spectrum, loaded.descriptor, None, &methods, &config)
    })?;
    for w in &report.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let json = report.to_json();
    let lines = summary_lines(&report);
    match &args.output {
        Some(path) => {
            std::fs::write(path, json + "\n").map_err(|e| CliError::io(path, e))?;
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
        }
        None => {
            let _ = writeln!(out, "{json}");
            for l in lines {
                let _ = writeln!(err, "{l}");
            }
        }
    }
    Ok(code)
}
