//! Effective-dimension estimation by penalized probabilistic PCA.
//!
//! The pipeline is: load a matrix, standardize features, take the
//! trace-normalized eigen-spectrum of the unit covariance, then pick `k`
//! by majority vote over a log-spaced grid of penalty weights. Baseline
//! selectors and a seeded simulation bench work from the same spectrum.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix it to `f64`.

pub mod baselines;
pub mod error;
pub mod estimate;
pub mod likelihood;
pub mod scalar;
pub mod select;
pub mod sim;
pub mod spectrum;

pub use baselines::{
    cumlog_select, ic_select, lawley_select, lawley_statistic, vard_select, CumlogVariant,
    InformationCriterion, LawleyOptions, LawleyScale, Method,
};
pub use error::{Error, Result};
pub use likelihood::{
    penalized_difference, penalized_profile_gradient, penalized_profile_loglik, profile_loglik,
    sigma_hat, sigma_tilde, PenaltyPoint,
};
pub use estimate::{run_method, EstimatorConfig, MethodOutput};
pub use scalar::Scalar;
pub use select::{
    admissible_k_max, bound_u_a, bound_u_b, build_grid, exact_delta_interval, pppca_select,
    select_k, vote, DeltaBounds, ExactInterval,
};
pub use sim::{
    make_population_spectrum, random_orthogonal, run_replicates, sample_data,
    sample_spectrum_only, ReplicateResult, Scenario,
};
pub use spectrum::{load_matrix, sample_spectrum, standardize_features};

/// Version of this library.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type DataMatrix = spectrum::DataMatrix<f64>;
pub type EigenSpectrum = spectrum::EigenSpectrum<f64>;
pub type SigmaProfile = likelihood::SigmaProfile<f64>;
pub type VoteTally = select::VoteTally<f64>;
pub type PppcaEstimate = select::PppcaEstimate<f64>;
pub type EstimateReport = baselines::EstimateReport<f64>;
