//! Desk-scale scenario grids behind the simulation figures.

use std::io::Write;
use std::path::Path;

use pppca::sim::{summarize, MethodSummary};
use pppca::{run_replicates, EstimatorConfig, Method, Scenario};

use crate::args::{BenchArgs, Preset};
use crate::format::{human, machine};
use crate::simulate::{header, write_rows};
use crate::{with_threads, CliError, CliResult};

pub const N: usize = 100;

/// A preset's grid: every combination of `k*`, `σ²`, `d²(k*)` and `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetGrid {
    pub k_star: Vec<usize>,
    pub sigma2: Vec<f64>,
    pub d2_min: Vec<f64>,
    pub m: Vec<usize>,
    pub replicates: usize,
    /// Whether the plot data is a series over `m`.
    pub versus_m: bool,
}

impl PresetGrid {
    pub fn of(p: Preset) -> Self {
        let sweep = vec![500, 1000, 2000, 5000, 10000];
        match p {
            Preset::Fig3 | Preset::Fig4 => PresetGrid {
                k_star: vec![5, 10, 20],
                sigma2: vec![0.2, 0.9],
                d2_min: vec![0.2, 0.5],
                m: vec![10000],
                replicates: 20,
                versus_m: false,
            },
            Preset::Fig5 => PresetGrid {
                k_star: vec![20],
                sigma2: vec![0.5, 0.9],
                d2_min: vec![0.2, 0.5],
                m: sweep,
                replicates: 10,
                versus_m: true,
            },
            Preset::Fig6Desk => PresetGrid {
                k_star: vec![10],
                sigma2: vec![0.5, 0.9],
                d2_min: vec![0.2, 0.5],
                m: sweep,
                replicates: 10,
                versus_m: true,
            },
        }
    }

    pub fn scenarios(&self) -> Vec<Scenario> {
        let mut out = Vec::new();
        for &k in &self.k_star {
            for &s2 in &self.sigma2 {
                for &d2 in &self.d2_min {
                    for &m in &self.m {
                        out.push(
                            Scenario::decay(N, m, k, s2, d2)
                                .with_id(format!("k{k}_sigma2-{s2}_d2-{d2}_m{m}")),
                        );
                    }
                }
            }
        }
        out
    }
}

/// Outcome of one scenario: summaries, or the reason it could not run.
pub struct ScenarioOutcome {
    pub scenario: Scenario,
    pub summaries: Result<Vec<MethodSummary>, String>,
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |e| CliError::io(path, e)
}

pub fn cmd_bench(
    args: &BenchArgs,
    threads: Option<usize>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<i32> {
    let mut grid = PresetGrid::of(args.preset);
    if let Some(r) = args.replicates {
        grid.replicates = r;
    }
    if let Some(m) = &args.m_values {
        grid.m = m.clone();
    }
    let methods = args.estimator.methods.0.clone();
    let config: EstimatorConfig = args.estimator.config();
    std::fs::create_dir_all(&args.output_dir).map_err(|e| CliError::io(&args.output_dir, e))?;

    let rep_path = args.output_dir.join("replicates.csv");
    let mut reps = csv::Writer::from_path(&rep_path).map_err(csv_err(&rep_path))?;
    reps.write_record(header(false)).map_err(csv_err(&rep_path))?;

    let mut outcomes = Vec::new();
    for s in grid.scenarios() {
        let run = with_threads(threads, || run_replicates(&s, &methods, grid.replicates, args.seed, &config))?;
        let summaries = match run {
            Ok(results) => {
                write_rows(&mut reps, &results, &methods, false).map_err(csv_err(&rep_path))?;
                Ok(summarize(&results, &methods))
            }
            Err(e) => {
                let _ = writeln!(err, "warning: scenario {} skipped: {e}", s.id);
                Err(e.to_string())
            }
        };
        outcomes.push(ScenarioOutcome { scenario: s, summaries });
    }
    reps.flush().map_err(|e| CliError::io(&rep_path, e))?;

    write_summary(&args.output_dir.join("summary.csv"), &outcomes, &methods)?;
    write_plot_data(&args.output_dir.join("plot_data.csv"), &outcomes, args.preset)?;

    let _ = writeln!(out, "{:<32} {:<7} {:>10} {:>10}", "scenario", "method", "mean_k", "correct");
    for o in &outcomes {
        match &o.summaries {
            Ok(list) => {
                for s in list {
                    let _ = writeln!(
                        out,
                        "{:<32} {:<7} {:>10} {:>10}",
                        o.scenario.id,
                        s.method.name(),
                        human(s.mean_k_hat),
                        human(s.proportion_correct)
                    );
                }
            }
            Err(e) => {
                let _ = writeln!(out, "{:<32} failed: {e}", o.scenario.id);
            }
        }
    }
    let _ = writeln!(out, "wrote {}", args.output_dir.display());
    Ok(0)
}

fn write_summary(path: &Path, outcomes: &[ScenarioOutcome], methods: &[Method]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record([
        "scenario",
        "k_star",
        "sigma2",
        "d2_min",
        "m",
        "method",
        "replicates",
        "missing",
        "mean_k_hat",
        "median_k_hat",
        "proportion_correct",
        "status",
    ])
    .map_err(csv_err(path))?;
    for o in outcomes {
        let s = &o.scenario;
        let lead = [
            s.id.clone(),
            s.k_star.to_string(),
            machine(s.sigma2),
            machine(s.d2_min),
            s.m.to_string(),
        ];
        match &o.summaries {
            Ok(list) => {
                for ms in list {
                    let mut row: Vec<String> = lead.to_vec();
                    row.extend([
                        ms.method.name().to_owned(),
                        ms.replicates.to_string(),
                        ms.missing.to_string(),
                        machine(ms.mean_k_hat),
                        machine(ms.median_k_hat),
                        machine(ms.proportion_correct),
                        "ok".to_owned(),
                    ]);
                    w.write_record(&row).map_err(csv_err(path))?;
                }
            }
            Err(e) => {
                for m in methods {
                    let mut row: Vec<String> = lead.to_vec();
                    row.extend([m.name().to_owned(), "0".into(), String::new(), String::new(), String::new(), String::new(), e.clone()]);
                    w.write_record(&row).map_err(csv_err(path))?;
                }
            }
        }
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `fig3` plots mean estimated `k`, `fig4` the share of exact hits, `fig5`
/// and `fig6-desk` estimated `k` against `m`.
fn write_plot_data(path: &Path, outcomes: &[ScenarioOutcome], preset: Preset) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let value = match preset {
        Preset::Fig4 => "proportion_correct",
        _ => "mean_k_hat",
    };
    let versus_m = PresetGrid::of(preset).versus_m;
    let mut head = vec!["k_star", "sigma2", "d2_min", "method"];
    if versus_m {
        head.extend(["m", "mean_k_hat", "median_k_hat"]);
    } else {
        head.push(value);
    }
    w.write_record(&head).map_err(csv_err(path))?;
    for o in outcomes {
        let Ok(list) = &o.summaries else { continue };
        let s = &o.scenario;
        for ms in list {
            let mut row = vec![
                s.k_star.to_string(),
                machine(s.sigma2),
                machine(s.d2_min),
                ms.method.name().to_owned(),
            ];
            if versus_m {
                row.extend([s.m.to_string(), machine(ms.mean_k_hat), machine(ms.median_k_hat)]);
            } else if preset == Preset::Fig4 {
                row.push(machine(ms.proportion_correct));
            } else {
                row.push(machine(ms.mean_k_hat));
            }
            w.write_record(&row).map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
