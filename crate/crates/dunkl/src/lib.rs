//! Radial Dunkl processes on Weyl chambers, beta-Laguerre and beta-Jacobi
//! eigenvalue diffusions, and the special functions (Jack polynomials,
//! multivariate hypergeometric series, generalized Bessel functions) that
//! describe their laws in closed form.
//!
//! The crate is organized around a simulate-vs-formula workflow:
//!
//! * [`root_systems`] — the root systems `A`, `B`, `C`, `D`, `BC` with their
//!   positive/simple systems, reflections, orbits, chambers and alcoves.
//! * [`symmetric_functions`] — partitions, monomial symmetric polynomials and
//!   Jack polynomials in the J-normalization.
//! * [`special_functions`] — univariate and multivariate hypergeometric
//!   series, generalized Bessel functions, classical and multivariate Jacobi
//!   polynomials, and finite-difference application of the associated
//!   differential operators.
//! * [`sde_engine`] — Euler–Maruyama simulation of the singular-drift SDEs
//!   with boundary-safe substepping, hitting-time Monte Carlo and pathwise
//!   coupling checks.
//! * [`laws`] — closed-form semigroup densities, determinantal densities,
//!   hitting-time tail distributions and normalization constants.
//! * [`harness`] — experiment configuration, CSV/SVG reporting and the
//!   orchestrated verification suites behind the `dunkl-lab` CLI.

pub mod harness;
pub mod laws;
pub mod root_systems;
pub mod sde_engine;
pub mod special_functions;
pub mod symmetric_functions;
