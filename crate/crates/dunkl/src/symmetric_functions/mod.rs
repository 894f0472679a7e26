//! Partitions, monomial symmetric polynomials, Jack polynomials and
//! generalized Pochhammer symbols.

pub mod jack;
pub mod monomial;
pub mod oracle;
pub mod partition;
pub mod scalar;

pub use jack::{jack, jack_at_ones, jack_eval, jack_f64, JackError};
pub use monomial::SymmetricPoly;
pub use partition::{partitions_of, Partition};
pub use scalar::Scalar;

/// Generalized Pochhammer symbol
/// `(c)_tau = prod_i (c - k1 (i-1))_{tau_i}` with `(a)_n` the rising
/// factorial.
pub fn gen_pochhammer(c: f64, tau: &Partition, k1: f64) -> f64 {
    let mut out = 1.0;
    for (i, &ti) in tau.parts().iter().enumerate() {
        let base = c - k1 * i as f64;
        for j in 0..ti {
            out *= base + j as f64;
        }
    }
    out
}
