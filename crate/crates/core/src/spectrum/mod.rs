//! Data ingestion, feature standardization and the trace-normalized
//! eigen-spectrum of the unit-by-unit sample covariance.

mod io;
mod jacobi;
mod standardize;

pub use io::{load_matrix, parse_matrix, Orientation, TableFormat};
pub use jacobi::{jacobi_eigen, SymmetricEigen, MAX_SWEEPS};
pub use standardize::{inverse_normal_cdf, standardize_features, ConstantPolicy, Standardization};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Eigenvalues below this are treated as exact zeros.
pub const ZERO_CLAMP: f64 = 1e-12;

/// An `n × m` matrix of `n` units measured on `m` features, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix<T> {
    values: Vec<T>,
    n: usize,
    m: usize,
    pub unit_labels: Option<Vec<String>>,
    pub feature_labels: Option<Vec<String>>,
}

impl<T: Scalar> DataMatrix<T> {
    /// Wraps row-major `values`; requires `n ≥ 3`, `m ≥ 2` and finite entries.
    pub fn new(n: usize, m: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != n * m {
            return Err(Error::Shape(format!(
                "{} values do not fill a {n}x{m} matrix",
                values.len()
            )));
        }
        if n < 3 || m < 2 {
            return Err(Error::Shape(format!(
                "need at least 3 units and 2 features, got {n} units and {m} features"
            )));
        }
        if let Some(pos) = values.iter().position(|x| !x.is_finite()) {
            return Err(Error::Parse {
                row: pos / m + 1,
                column: pos % m + 1,
                message: "non-finite value".into(),
            });
        }
        Ok(DataMatrix {
            values,
            n,
            m,
            unit_labels: None,
            feature_labels: None,
        })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != m) {
            return Err(Error::Shape(format!(
                "row {} has {} entries, expected {m}",
                i + 1,
                rows[i].len()
            )));
        }
        Self::new(rows.len(), m, rows.concat())
    }

    pub fn with_labels(
        mut self,
        unit_labels: Option<Vec<String>>,
        feature_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if unit_labels.as_ref().is_some_and(|l| l.len() != self.n) {
            return Err(Error::Shape("unit label count does not match rows".into()));
        }
        if feature_labels.as_ref().is_some_and(|l| l.len() != self.m) {
            return Err(Error::Shape("feature label count does not match columns".into()));
        }
        self.unit_labels = unit_labels;
        self.feature_labels = feature_labels;
        Ok(self)
    }

    /// Number of units.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of features.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.m + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.m..(i + 1) * self.m]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    /// Swaps the roles of units and features, labels included.
    pub fn transposed(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.values.len());
        for j in 0..self.m {
            for i in 0..self.n {
                out.push(self.get(i, j));
            }
        }
        DataMatrix::new(self.m, self.n, out)?
            .with_labels(self.feature_labels.clone(), self.unit_labels.clone())
    }

    pub(crate) fn from_parts_unchecked(
        n: usize,
        m: usize,
        values: Vec<T>,
        unit_labels: Option<Vec<String>>,
        feature_labels: Option<Vec<String>>,
    ) -> Self {
        DataMatrix {
            values,
            n,
            m,
            unit_labels,
            feature_labels,
        }
    }
}

/// Descending eigenvalues `λ₁ ≥ … ≥ λₙ ≥ 0` together with the feature count.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum<T> {
    eigenvalues: Vec<T>,
    m: usize,
}

impl<T: Scalar> EigenSpectrum<T> {
    /// Checks ordering, non-negativity and `Σλ = n`.
    ///
    /// The trace tolerance is relative: 1e-8, or `4n·ε` when the scalar is
    /// too coarse for that.
    pub fn new(eigenvalues: Vec<T>, m: usize) -> Result<Self> {
        let sp = Self::unnormalized(eigenvalues, m)?;
        let n = T::from_usize_lossy(sp.n());
        let rel = T::tol(1e-8).max(T::epsilon() * T::lit(4.0) * n);
        if (sp.trace() - n).abs() > rel * n {
            return Err(Error::DegenerateSpectrum(format!(
                "eigenvalues sum to {} instead of {}",
                sp.trace(),
                sp.n()
            )));
        }
        Ok(sp)
    }

    /// Sorts descending, clamps tiny values to zero and rescales the trace to `n`.
    pub fn normalized(mut eigenvalues: Vec<T>, m: usize) -> Result<Self> {
        if eigenvalues.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical("non-finite eigenvalue".into()));
        }
        eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        let trace: T = eigenvalues.iter().copied().sum();
        if trace <= T::zero() {
            return Err(Error::DegenerateSpectrum("trace is not positive".into()));
        }
        let scale = T::from_usize_lossy(eigenvalues.len()) / trace;
        let clamp = T::tol(ZERO_CLAMP);
        for x in &mut eigenvalues {
            *x *= scale;
            if *x < clamp {
                *x = T::zero();
            }
        }
        Self::unnormalized(eigenvalues, m)
    }

    /// Like [`EigenSpectrum::new`] but without the trace check.
    ///
    /// The likelihood formulas assume `Σλ = n`; raw spectra are only
    /// meaningful for the scale-free elbow heuristics.
    pub fn unnormalized(eigenvalues: Vec<T>, m: usize) -> Result<Self> {
        let n = eigenvalues.len();
        if n < 3 {
            return Err(Error::Shape(format!("spectrum needs at least 3 values, got {n}")));
        }
        if m < 2 {
            return Err(Error::Shape(format!("need at least 2 features, got {m}")));
        }
        for (i, w) in eigenvalues.windows(2).enumerate() {
            if !(w[0] >= w[1]) {
                return Err(Error::DegenerateSpectrum(format!(
                    "eigenvalues not descending at position {}",
                    i + 2
                )));
            }
        }
        if !eigenvalues.iter().all(|x| x.is_finite() && *x >= T::zero()) {
            return Err(Error::DegenerateSpectrum(
                "eigenvalues must be finite and non-negative".into(),
            ));
        }
        Ok(EigenSpectrum { eigenvalues, m })
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// `λ_i` with 1-based `i`.
    pub fn lambda(&self, i: usize) -> T {
        self.eigenvalues[i - 1]
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn trace(&self) -> T {
        self.eigenvalues.iter().copied().sum()
    }

    /// Number of strictly positive eigenvalues.
    pub fn rank(&self) -> usize {
        self.eigenvalues.iter().take_while(|&&x| x > T::zero()).count()
    }

    /// True when some eigenvalue was clamped to zero or `m < n`.
    pub fn is_rank_deficient(&self) -> bool {
        self.rank() < self.n() || self.m < self.n()
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }
}

/// `S = ỸỸᵀ / m` where `Ỹ` has each unit (row) centered.
pub fn unit_covariance<T: Scalar>(d: &DataMatrix<T>) -> Vec<T> {
    let (n, m) = (d.n(), d.m());
    let mf = T::from_usize_lossy(m);
    let centered: Vec<T> = (0..n)
        .flat_map(|i| {
            let row = d.row(i);
            let mean = row.iter().copied().sum::<T>() / mf;
            row.iter().map(move |&x| x - mean)
        })
        .collect();
    let mut s = vec![T::zero(); n * n];
    for i in 0..n {
        let ri = &centered[i * m..(i + 1) * m];
        for j in i..n {
            let rj = &centered[j * m..(j + 1) * m];
            let dot: T = ri.iter().zip(rj).map(|(&a, &b)| a * b).sum();
            s[i * n + j] = dot / mf;
            s[j * n + i] = dot / mf;
        }
    }
    s
}

/// Trace-normalized eigen-spectrum of the unit covariance of `d`.
///
/// Rows are centered but features are used as given; call
/// [`standardize_features`] first for the usual pipeline. When `m < n` the
/// spectrum is rank deficient, see [`EigenSpectrum::is_rank_deficient`].
pub fn sample_spectrum<T: Scalar>(d: &DataMatrix<T>) -> Result<EigenSpectrum<T>> {
    let n = d.n();
    let mut s = unit_covariance(d);
    let trace: T = (0..n).map(|i| s[i * n + i]).sum();
    if !(trace > T::zero()) {
        return Err(Error::DegenerateSpectrum(
            "every unit is constant across features".into(),
        ));
    }
    let scale = T::from_usize_lossy(n) / trace;
    for x in &mut s {
        *x *= scale;
    }
    let eig = jacobi_eigen(&s, n)?;
    EigenSpectrum::normalized(eig.values, d.m())
}
