//! Multivariate hypergeometric series, generalized Bessel functions,
//! differential operators applied numerically, and multivariate Jacobi
//! polynomials.

pub mod bessel;
pub mod jacobi;
pub mod operators;
pub mod series;
pub mod univariate;

pub use bessel::{generalized_bessel, generalized_bessel_d};
pub use jacobi::{
    gauss_hermite, gauss_jacobi_01, gauss_laguerre, jacobi_det2, jacobi_eigenvalue, jack_mean,
    multivariate_jacobi,
    multivariate_jacobi_family, selberg, MultivariateJacobi,
};
pub use operators::{apply_operator, OperatorSpec};
pub use series::{hyperg_multi, hyperg_multi2, SeriesSpec, SeriesValue, Truncation};
pub use univariate::{hyperg_uni, jacobi01_orthonormal, jacobi_poly};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecialFnError {
    #[error("series did not converge ({context}); last shell magnitude {remainder:e}")]
    NotConverged { context: String, remainder: f64 },
    #[error("lower parameter {parameter} produces a zero Pochhammer factor at {at}")]
    PochhammerZero { parameter: f64, at: String },
    #[error("invalid argument: {0}")]
    BadArgument(String),
    #[error("evaluation point within 3h of a domain wall (margin {margin:e}, h {h:e})")]
    TooCloseToWall { margin: f64, h: f64 },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
}
