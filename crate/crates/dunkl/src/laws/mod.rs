//! Closed-form laws: normalization constants, semigroup densities,
//! reflectable-case determinantal densities, hitting-time tails and the
//! beta-Jacobi semigroup kernel.

pub mod constants;
pub mod density;
pub mod jacobi;
pub mod tails;

pub use constants::{
    macdonald_mehta, macdonald_mehta_a, macdonald_mehta_b, macdonald_mehta_d, macdonald_mehta_mc,
    norm_constants, NormConstants,
};
pub use density::{
    grabiner_density_b, grabiner_density_d, laguerre_semigroup_density, semigroup_density,
};
pub use jacobi::{jacobi_semigroup_density_det2, JacobiKernel};
pub use tails::{tail_distribution, TailCase, TailEval, TailSpec};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LawsError {
    #[error(transparent)]
    Special(#[from] crate::special_functions::SpecialFnError),
    #[error("root system error: {0}")]
    RootSystem(#[from] crate::root_systems::RootSystemError),
    #[error("Monte Carlo estimate did not reach the target accuracy: {0}")]
    McAccuracy(String),
    #[error("invalid law parameters: {0}")]
    BadParameters(String),
}
