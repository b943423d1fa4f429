use std::io::Write;

use pppca::sim::{summarize, MethodSummary};
use pppca::{run_replicates, EstimatorConfig, Method, ReplicateResult, Scenario};

use crate::args::SimulateArgs;
use crate::format::{human, machine};
use crate::input::build_scenario;
use crate::{with_threads, CliError, CliResult};

/// Replicate CSV header, optionally with the timing column.
pub fn header(timings: bool) -> Vec<&'static str> {
    let mut h = vec!["scenario", "replicate", "seed", "method", "k_hat", "k_star", "correct", "error"];
    if timings {
        h.push("seconds");
    }
    h
}

/// Appends one row per (replicate, method) in replicate-then-method order.
pub fn write_rows<W: Write>(
    w: &mut csv::Writer<W>,
    results: &[ReplicateResult],
    methods: &[Method],
    timings: bool,
) -> csv::Result<()> {
    for r in results {
        for &m in methods {
            let k_hat = r.k_hat.get(&m).copied().flatten();
            let mut row = vec![
                r.scenario.clone(),
                r.replicate.to_string(),
                r.seed.to_string(),
                m.name().to_owned(),
                k_hat.map(|k| k.to_string()).unwrap_or_default(),
                r.k_star.to_string(),
                u8::from(k_hat == Some(r.k_star)).to_string(),
                r.errors.get(&m).cloned().unwrap_or_default(),
            ];
            if timings {
                row.push(r.seconds.get(&m).map(|&s| machine(s)).unwrap_or_default());
            }
            w.write_record(&row)?;
        }
    }
    Ok(())
}

/// Replicate CSV as bytes.
pub fn replicate_csv(results: &[ReplicateResult], methods: &[Method], timings: bool) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(timings)).expect("in-memory write");
    write_rows(&mut w, results, methods, timings).expect("in-memory write");
    w.into_inner().expect("in-memory flush")
}

pub fn summary_block(scenario: &Scenario, summaries: &[MethodSummary]) -> Vec<String> {
    let mut lines = vec![format!(
        "scenario {} (n = {}, m = {}, k* = {}, sigma2 = {})",
        scenario.id,
        scenario.n,
        scenario.m,
        scenario.k_star,
        human(scenario.sigma2)
    )];
    for s in summaries {
        lines.push(format!(
            "{:<7} mean_k_hat = {}  median_k_hat = {}  proportion_correct = {}  missing = {}/{}",
            s.method.name(),
            human(s.mean_k_hat),
            human(s.median_k_hat),
            human(s.proportion_correct),
            s.missing,
            s.replicates
        ));
    }
    lines
}

/// Runs the replicates on `threads` workers and returns the CSV bytes with
/// the per-method summaries.
pub fn simulate_csv(
    scenario: &Scenario,
    methods: &[Method],
    replicates: usize,
    seed: u64,
    config: &EstimatorConfig,
    threads: Option<usize>,
    timings: bool,
) -> CliResult<(Vec<u8>, Vec<MethodSummary>)> {
    let results = with_threads(threads, || run_replicates(scenario, methods, replicates, seed, config))??;
    Ok((replicate_csv(&results, methods, timings), summarize(&results, methods)))
}

pub fn cmd_simulate(
    args: &SimulateArgs,
    threads: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<i32> {
    let scenario = build_scenario(&args.scenario)?;
    let methods = &args.estimator.methods.0;
    let (bytes, summaries) = simulate_csv(
        &scenario,
        methods,
        args.replicates,
        args.seed,
        &args.estimator.config(),
        threads,
        args.timings,
    )?;
    let lines = summary_block(&scenario, &summaries);
    match &args.output {
        Some(path) => {
            std::fs::write(path, &bytes).map_err(|e| CliError::io(path, e))?;
            for l in lines {
                let _ = writeln!(out, "{l}");
            }
        }
        None => {
            let _ = out.write_all(&bytes);
            for l in lines {
                let _ = writeln!(err, "{l}");
            }
        }
    }
    Ok(0)
}
