//! Turning command-line inputs into a spectrum or a scenario.

use std::fmt::Write as _;
use std::path::Path;

use pppca::spectrum::{
    load_matrix, sample_spectrum, standardize_features, ConstantPolicy, EigenSpectrum,
    Orientation, TableFormat,
};
use pppca::{Error, Scenario};

use crate::args::{InputArgs, ScenarioArgs};
use crate::report::InputDescriptor;
use crate::{CliError, CliResult};

pub struct LoadedSpectrum {
    pub spectrum: EigenSpectrum<f64>,
    pub descriptor: InputDescriptor,
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())).into())
}

/// Reads a list of eigenvalues separated by whitespace, commas or newlines.
pub fn parse_eigenvalues(text: &str) -> pppca::Result<Vec<f64>> {
    let mut out = Vec::new();
    for (row, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for (col, tok) in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .enumerate()
        {
            let x = tok.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| Error::Parse {
                row: row + 1,
                column: col + 1,
                message: format!("'{tok}' is not a finite number"),
            })?;
            out.push(x);
        }
    }
    Ok(out)
}

pub fn load_spectrum(args: &InputArgs) -> CliResult<LoadedSpectrum> {
    if let Some(path) = &args.eigenvalues {
        let m = args.m.ok_or_else(|| CliError::usage("--eigenvalues needs --m"))?;
        let vals = parse_eigenvalues(&read_text(path)?)?;
        let spectrum = EigenSpectrum::normalized(vals, m)?;
        return Ok(LoadedSpectrum {
            spectrum,
            descriptor: InputDescriptor {
                source: "eigenvalues".into(),
                path: Some(path.display().to_string()),
                ..Default::default()
            },
        });
    }
    let path = args
        .input
        .as_ref()
        .ok_or_else(|| CliError::usage("an input is required: --input or --eigenvalues"))?;
    let format = args.format.unwrap_or_else(|| TableFormat::from_path(path));
    let raw = load_matrix::<f64>(path, format, args.orientation)?;
    let (data, standardization) = if args.no_standardize {
        (raw.clone(), "none".to_owned())
    } else {
        let policy = if args.drop_constant {
            ConstantPolicy::Drop
        } else {
            ConstantPolicy::Error
        };
        let name = match args.standardization {
            pppca::spectrum::Standardization::ZScore => "zscore",
            pppca::spectrum::Standardization::RankNormal => "rank-normal",
        };
        (standardize_features(&raw, args.standardization, policy)?, name.to_owned())
    };
    let spectrum = sample_spectrum(&data)?;
    Ok(LoadedSpectrum {
        spectrum,
        descriptor: InputDescriptor {
            source: "matrix".into(),
            path: Some(path.display().to_string()),
            format: Some(format!("{format:?}").to_lowercase()),
            orientation: Some(
                match args.orientation {
                    Orientation::UnitsAsRows => "units-as-rows",
                    Orientation::UnitsAsColumns => "units-as-columns",
                }
                .into(),
            ),
            standardization: Some(standardization),
            dropped_features: raw.m() - data.m(),
            scenario: None,
        },
    })
}

/// Scenario from a file, with command-line fields taking precedence.
pub fn build_scenario(args: &ScenarioArgs) -> CliResult<Scenario> {
    if !args.given() {
        return Err(CliError::usage(
            "a scenario is required: --scenario FILE or --n, --m, --sigma2 with --k-star/--d2-min or --d2",
        ));
    }
    let mut text = match &args.scenario {
        Some(p) => read_text(p)?,
        None => String::new(),
    };
    text.push('\n');
    // later keys win in the config parser
    if let Some(v) = &args.id {
        let _ = writeln!(text, "id = {v}");
    }
    if let Some(v) = args.n {
        let _ = writeln!(text, "n = {v}");
    }
    if let Some(v) = args.m {
        let _ = writeln!(text, "m = {v}");
    }
    if let Some(v) = args.k_star {
        let _ = writeln!(text, "k_star = {v}");
    }
    if let Some(v) = args.sigma2 {
        let _ = writeln!(text, "sigma2 = {v}");
    }
    if let Some(v) = args.d2_min {
        let _ = writeln!(text, "d2_min = {v}");
    }
    if let Some(v) = &args.d2 {
        let list: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(text, "explicit_d2 = {}", list.join(","));
    }
    Ok(Scenario::from_config(&text)?)
}
