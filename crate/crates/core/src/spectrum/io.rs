use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::DataMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Tsv,
}

impl TableFormat {
    fn delimiter(self) -> u8 {
        match self {
            TableFormat::Csv => b',',
            TableFormat::Tsv => b'\t',
        }
    }

    /// Guesses from the file extension; anything but `.tsv`/`.tab` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("tsv") || e.eq_ignore_ascii_case("tab") => {
                TableFormat::Tsv
            }
            _ => TableFormat::Csv,
        }
    }
}

impl FromStr for TableFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "tsv" => Ok(TableFormat::Tsv),
            other => Err(Error::Config(format!("unknown table format '{other}'"))),
        }
    }
}

/// How units are laid out in the file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    UnitsAsRows,
    UnitsAsColumns,
}

impl FromStr for Orientation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rows" | "units-as-rows" => Ok(Orientation::UnitsAsRows),
            "columns" | "cols" | "units-as-columns" => Ok(Orientation::UnitsAsColumns),
            other => Err(Error::Config(format!("unknown orientation '{other}'"))),
        }
    }
}

const MISSING: &[&str] = &["", "na", "n/a", "nan", "-nan", "+nan", "null", "none", "?"];

fn is_missing(cell: &str) -> bool {
    let c = cell.trim();
    MISSING.iter().any(|t| c.eq_ignore_ascii_case(t))
}

fn parse_number(cell: &str) -> Option<f64> {
    if is_missing(cell) {
        return None;
    }
    cell.trim().parse::<f64>().ok().filter(|x| x.is_finite())
}

fn looks_like_label(cell: &str) -> bool {
    !is_missing(cell) && parse_number(cell).is_none()
}

/// Reads a numeric table from disk. See [`parse_matrix`] for the accepted layout.
pub fn load_matrix<T: Scalar>(
    path: impl AsRef<Path>,
    format: TableFormat,
    orientation: Orientation,
) -> Result<DataMatrix<T>> {
    let path = path.as_ref();
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text, format, orientation)
}

/// Parses a rectangular table with an optional header row and label column.
///
/// The first row is a header when none of its cells past the first is a
/// number; the first column holds labels when no data row starts with a
/// number. Missing-value tokens (`NA`, `NaN`, empty) are rejected with the
/// 1-based file position.
pub fn parse_matrix<T: Scalar>(
    text: &str,
    format: TableFormat,
    orientation: Orientation,
) -> Result<DataMatrix<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(format.delimiter())
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut records: Vec<Vec<String>> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            row: i + 1,
            column: 0,
            message: e.to_string(),
        })?;
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        records.push(rec.iter().map(str::to_owned).collect());
    }
    if records.is_empty() {
        return Err(Error::Shape("table is empty".into()));
    }

    let width = records[0].len();
    for (i, r) in records.iter().enumerate() {
        if r.len() != width {
            return Err(Error::Parse {
                row: i + 1,
                column: r.len().min(width) + 1,
                message: format!("ragged row: {} cells, expected {width}", r.len()),
            });
        }
    }

    let has_header = records[0].iter().skip(1).all(|c| looks_like_label(c))
        && (width > 1 || looks_like_label(&records[0][0]));
    let body_start = usize::from(has_header);
    let has_label_col = records.len() > body_start
        && records[body_start..].iter().all(|r| looks_like_label(&r[0]));
    let col_start = usize::from(has_label_col);

    let rows = records.len() - body_start;
    let cols = width - col_start;
    let mut values = Vec::with_capacity(rows * cols);
    for (i, rec) in records.iter().enumerate().skip(body_start) {
        for (j, cell) in rec.iter().enumerate().skip(col_start) {
            let x = parse_number(cell).ok_or_else(|| Error::Parse {
                row: i + 1,
                column: j + 1,
                message: if is_missing(cell) {
                    format!("missing value '{cell}'")
                } else {
                    format!("non-numeric cell '{cell}'")
                },
            })?;
            let x = T::from_f64(x).filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                row: i + 1,
                column: j + 1,
                message: format!("'{cell}' overflows the scalar type"),
            })?;
            values.push(x);
        }
    }

    let row_labels = has_label_col.then(|| {
        records[body_start..]
            .iter()
            .map(|r| r[0].clone())
            .collect::<Vec<_>>()
    });
    let col_labels = has_header.then(|| records[0][col_start..].to_vec());

    match orientation {
        Orientation::UnitsAsRows => {
            DataMatrix::new(rows, cols, values)?.with_labels(row_labels, col_labels)
        }
        Orientation::UnitsAsColumns => {
            let mut t = Vec::with_capacity(values.len());
            for j in 0..cols {
                for i in 0..rows {
                    t.push(values[i * cols + j]);
                }
            }
            DataMatrix::new(cols, rows, t)?.with_labels(col_labels, row_labels)
        }
    }
}
