use std::path::Path;

use pppca::sim::replicate_rng;
use pppca::{sample_data, DataMatrix, Scenario};
use pppca_cli::report::RunReport;
use pppca_cli::run_from;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_from(std::iter::once("pppca").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_matrix(d: &DataMatrix, path: &Path) {
    let mut w = csv::Writer::from_path(path).unwrap();
    for i in 0..d.n() {
        w.write_record(d.row(i).iter().map(|x| x.to_string())).unwrap();
    }
    w.flush().unwrap();
}

fn error_kind(stderr: &str) -> String {
    let line = stderr.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(line).unwrap();
    v["error"]["kind"].as_str().unwrap().to_owned()
}

#[test]
fn estimate_on_simulated_scenario_a() {
    let dir = tempfile::tempdir().unwrap();
    let s = Scenario::explicit(100, 5000, 0.3, &[20.0, 15.0, 9.0, 7.0, 6.0, 5.0, 4.0, 2.5, 1.0, 0.5]);
    let data: DataMatrix = sample_data(&s, &mut replicate_rng(5, 0)).unwrap();
    let input = dir.path().join("a.csv");
    write_matrix(&data, &input);
    let report = dir.path().join("r.json");
    let (code, out, err) = run(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--methods",
        "pppca,bic",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 2);
    let r = RunReport::validate_json(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let pppca = r.pppca.as_ref().unwrap();
    assert_eq!(r.methods[0].k_hat, Some(10));
    let mode = pppca.votes.iter().max_by_key(|(k, c)| (**c, std::cmp::Reverse(**k))).unwrap().0;
    assert_eq!(*mode, 10);
    assert_eq!(pppca.grid.points, 5000);
    assert_eq!(r.input.standardization.as_deref(), Some("zscore"));
}

#[test]
fn reports_differ_only_in_the_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let ev = dir.path().join("ev.txt");
    std::fs::write(&ev, "5 3 2 1.5 1 0.8 0.6 0.5 0.4 0.3 0.3 0.3").unwrap();
    let args = ["estimate", "--eigenvalues", ev.to_str().unwrap(), "--m", "500"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    let mut a: serde_json::Value = serde_json::from_str(&a).unwrap();
    let mut b: serde_json::Value = serde_json::from_str(&b).unwrap();
    a["generated_at_unix"] = 0.into();
    b["generated_at_unix"] = 0.into();
    assert_eq!(a, b);
    RunReport::validate_json(&a.to_string()).unwrap();
}

#[test]
fn bic_on_isotropic_noise_keeps_its_curve() {
    let dir = tempfile::tempdir().unwrap();
    let s = Scenario::decay(20, 200, 0, 1.0, 0.0);
    let data: DataMatrix = sample_data(&s, &mut replicate_rng(1, 0)).unwrap();
    let input = dir.path().join("noise.csv");
    write_matrix(&data, &input);
    let (code, out, err) = run(&["estimate", "-i", input.to_str().unwrap(), "--methods", "bic"]);
    assert_eq!(code, 0, "{err}");
    let r = RunReport::validate_json(&out).unwrap();
    let bic = &r.methods[0];
    assert_eq!(bic.k_hat, Some(1));
    assert_eq!(bic.diagnostics["criterion"].len(), bic.k_range.len());
    assert!(bic.k_range.len() >= 18);
}

#[test]
fn missing_input_is_a_parse_error() {
    let (code, _, err) = run(&["estimate", "--input", "/nonexistent/data.csv"]);
    assert_eq!(code, 1);
    assert_eq!(error_kind(&err), "ParseError");
}

#[test]
fn constant_feature_is_reported_or_dropped() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("c.csv");
    std::fs::write(&p, "1,5,2,0\n2,5,1,1\n4,5,3,0\n3,5,0,2\n").unwrap();
    let (code, _, err) = run(&["estimate", "-i", p.to_str().unwrap(), "--methods", "vard"]);
    assert_eq!(code, 1);
    assert_eq!(error_kind(&err), "DegenerateFeature");
    let (code, out, _) = run(&["estimate", "-i", p.to_str().unwrap(), "--methods", "vard", "--drop-constant"]);
    assert_eq!(code, 0);
    assert_eq!(RunReport::validate_json(&out).unwrap().input.dropped_features, 1);
}

#[test]
fn simulate_is_reproducible_and_has_one_row_per_method() {
    let args = [
        "simulate", "--n", "30", "--m", "300", "--k-star", "3", "--sigma2", "0.5", "--d2-min", "1",
        "-r", "1", "--seed", "7", "--methods", "all",
    ];
    let (c1, a, summary) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "scenario,replicate,seed,method,k_hat,k_star,correct,error");
    assert_eq!(lines.len(), 7);
    assert!(summary.contains("proportion_correct"));
}

#[test]
fn simulate_reads_a_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    std::fs::write(&cfg, "id = small\nn = 30\nm = 300\nk_star = 3\nsigma2 = 0.5\nd2_min = 1\n").unwrap();
    let csv = dir.path().join("out.csv");
    let (code, out, _) = run(&[
        "simulate", "--scenario", cfg.to_str().unwrap(), "-r", "2", "--methods", "pppca,bic",
        "--timings", "-o", csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("scenario small"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("scenario,replicate,seed,method,k_hat,k_star,correct,error,seconds\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn infeasible_scenario_exits_with_one() {
    let (code, _, err) = run(&[
        "simulate", "--n", "100", "--m", "500", "--k-star", "10", "--sigma2", "0.9", "--d2-min", "2",
    ]);
    assert_eq!(code, 1);
    assert_eq!(error_kind(&err), "InfeasibleScenario");
}

#[test]
fn unknown_preset_lists_the_valid_ones() {
    let (code, _, err) = run(&["bench", "--preset", "fig7"]);
    assert_eq!(code, 1);
    for p in ["fig3", "fig4", "fig5", "fig6-desk"] {
        assert!(err.contains(p), "{err}");
    }
    assert_eq!(error_kind(&err), "UsageError");
}

#[test]
fn bench_writes_summary_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = run(&[
        "bench", "--preset", "fig6-desk", "--output-dir", dir.path().to_str().unwrap(),
        "--replicates", "1", "--m-values", "500,1000", "--methods", "bic,vard",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("k10_sigma2-0.5_d2-0.2_m500"));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    // 2 σ² × 2 d² × 2 m × 2 methods
    assert_eq!(summary.lines().count(), 1 + 16);
    let plot = std::fs::read_to_string(dir.path().join("plot_data.csv")).unwrap();
    assert!(plot.starts_with("k_star,sigma2,d2_min,method,m,mean_k_hat,median_k_hat\n"));
    assert!(dir.path().join("replicates.csv").exists());
}

#[test]
fn bench_records_infeasible_scenarios_and_continues() {
    let dir = tempfile::tempdir().unwrap();
    // k* = 20 with d²(k*) = 0.5 and σ² = 0.9 uses the whole budget; m = 1 is invalid
    let (code, out, _) = run(&[
        "bench", "--preset", "fig5", "--output-dir", dir.path().to_str().unwrap(),
        "--replicates", "1", "--m-values", "1,300", "--methods", "vard",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("failed"));
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.lines().any(|l| l.contains("InfeasibleScenario") || l.contains("infeasible")));
    assert!(summary.lines().any(|l| l.ends_with(",ok")));
}

#[test]
fn profile_zero_row_and_flat_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let ev = dir.path().join("flat.txt");
    std::fs::write(&ev, "1 1 1 1 1 1").unwrap();
    let (code, out, _) = run(&["profile", "--eigenvalues", ev.to_str().unwrap(), "--m", "40", "--points", "4"]);
    assert_eq!(code, 0);
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    let rows: Vec<csv::StringRecord> = rows.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5 * 5);
    let zero: Vec<&csv::StringRecord> = rows.iter().filter(|r| r[1].parse::<f64>().unwrap() == 0.0).collect();
    assert_eq!(zero.len(), 5);
    assert!(zero.iter().all(|r| r[2] == zero[0][2]));
    assert!(rows.iter().all(|r| r[5].is_empty() && r[6].is_empty()));
}

#[test]
fn profile_crossings_fall_inside_the_markers() {
    let dir = tempfile::tempdir().unwrap();
    let s = Scenario::explicit(100, 5000, 0.3, &[20.0, 15.0, 9.0, 7.0, 6.0, 5.0, 4.0, 2.5, 1.0, 0.5]);
    let sp: pppca::EigenSpectrum = pppca::sample_spectrum_only(&s, &mut replicate_rng(11, 0)).unwrap();
    let ev = dir.path().join("ev.txt");
    let text: Vec<String> = sp.eigenvalues().iter().map(|x| x.to_string()).collect();
    std::fs::write(&ev, text.join("\n")).unwrap();
    let (code, out, _) = run(&[
        "profile", "--eigenvalues", ev.to_str().unwrap(), "--m", "5000", "--k", "9,10,11", "--points", "400",
    ]);
    assert_eq!(code, 0);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let mut checked = 0;
    for r in reader.records().map(|r| r.unwrap()) {
        let (Ok(ua), Ok(ub)) = (r[5].parse::<f64>(), r[6].parse::<f64>()) else { continue };
        let d: f64 = r[1].parse().unwrap();
        if d > ua && d < ub {
            let (prev, next): (f64, f64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
            assert!(prev > 0.0 && next > 0.0, "k = {} wins inside its markers", &r[0]);
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn explicit_thread_count_is_accepted() {
    let (code, out, _) = run(&[
        "--threads", "2", "simulate", "--n", "20", "--m", "100", "--k-star", "2", "--sigma2", "0.5",
        "--d2-min", "1", "-r", "2", "--methods", "vard",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
}
