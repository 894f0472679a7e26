//! Semigroup densities of radial Dunkl processes: the hypergeometric form,
//! the reflectable-case determinantal (reflection principle) form, and the
//! beta-Laguerre change of variables.

use nalgebra::DMatrix;

use crate::root_systems::{MultiplicityFunction, RootSystem};
use crate::special_functions::{generalized_bessel, Truncation};

use super::constants::norm_constants;
use super::LawsError;

/// Heat kernel on the line, `N_t(u) = e^{-u^2/2t} / sqrt(2 pi t)`.
fn heat(t: f64, u: f64) -> f64 {
    (-u * u / (2.0 * t)).exp() / (2.0 * std::f64::consts::PI * t).sqrt()
}

/// Transition density of the radial Dunkl process with respect to Lebesgue
/// measure on the chamber:
/// `p_t(x, y) = |W| / (c_k t^{gamma + m/2}) e^{-(|x|^2+|y|^2)/2t}
///   bessel(x/sqrt t, y/sqrt t) prod <alpha, y>^{2 k(alpha)}`.
pub fn semigroup_density(
    rs: &RootSystem,
    k: &MultiplicityFunction,
    t: f64,
    x: &[f64],
    y: &[f64],
    truncation: Truncation,
    seed: u64,
) -> Result<f64, LawsError> {
    if t <= 0.0 {
        return Err(LawsError::BadParameters("need t > 0".into()));
    }
    let m = rs.rank;
    let gamma = k.gamma(rs);
    let c_k = norm_constants(rs, k, seed)?.c_k;
    let rt = t.sqrt();
    let xs: Vec<f64> = x.iter().map(|v| v / rt).collect();
    let ys: Vec<f64> = y.iter().map(|v| v / rt).collect();
    let bessel = generalized_bessel(rs, k, &xs, &ys, truncation)?;
    let norm_sq = |v: &[f64]| v.iter().map(|u| u * u).sum::<f64>();
    let mut weight = 1.0;
    for alpha in rs.positive() {
        let kv = k.value(rs.orbit_of(alpha).expect("positive root"));
        weight *= alpha.dot(y).powf(2.0 * kv);
    }
    let value = rs.weyl_order() as f64 / (c_k * t.powf(gamma + m as f64 / 2.0))
        * (-(norm_sq(x) + norm_sq(y)) / (2.0 * t)).exp()
        * bessel
        * weight;
    Ok(value)
}

/// Vandermonde of the squares, `prod_{i<j} (u_i^2 - u_j^2)`.
fn vandermonde_sq(u: &[f64]) -> f64 {
    let mut v = 1.0;
    for i in 0..u.len() {
        for j in (i + 1)..u.len() {
            v *= u[i] * u[i] - u[j] * u[j];
        }
    }
    v
}

/// Reflectable B-case density at `k0 = k1 = 1`:
/// `p_t(x, y) = (h(y)/h(x)) det[N_t(y_j - x_i) - N_t(y_j + x_i)]` with
/// `h(u) = prod u_i prod_{i<j} (u_i^2 - u_j^2)`.
pub fn grabiner_density_b(t: f64, x: &[f64], y: &[f64]) -> f64 {
    let m = x.len();
    assert_eq!(y.len(), m);
    let h = |u: &[f64]| u.iter().product::<f64>() * vandermonde_sq(u);
    let mat = DMatrix::from_fn(m, m, |i, j| heat(t, y[j] - x[i]) - heat(t, y[j] + x[i]));
    h(y) / h(x) * mat.determinant()
}

/// Reflectable D-case density at `k1 = 1`:
/// `p_t(x, y) = (V(y^2)/V(x^2)) (det[N_t(y_j - x_i) - N_t(y_j + x_i)]
///  + det[N_t(y_j - x_i) + N_t(y_j + x_i)]) / 2`.
pub fn grabiner_density_d(t: f64, x: &[f64], y: &[f64]) -> f64 {
    let m = x.len();
    assert_eq!(y.len(), m);
    let minus = DMatrix::from_fn(m, m, |i, j| heat(t, y[j] - x[i]) - heat(t, y[j] + x[i]));
    let plus = DMatrix::from_fn(m, m, |i, j| heat(t, y[j] - x[i]) + heat(t, y[j] + x[i]));
    vandermonde_sq(y) / vandermonde_sq(x) * (minus.determinant() + plus.determinant()) / 2.0
}

/// beta-Laguerre transition density in `lambda`-coordinates, from the
/// B-type radial Dunkl density of `x = sqrt(lambda)` under
/// `2 k0 = beta (delta - m + 1) - 1`, `2 k1 = beta`.
#[allow(clippy::too_many_arguments)]
pub fn laguerre_semigroup_density(
    m: usize,
    beta: f64,
    delta: f64,
    t: f64,
    lam_x: &[f64],
    lam_y: &[f64],
    truncation: Truncation,
    seed: u64,
) -> Result<f64, LawsError> {
    let k0 = (beta * (delta - m as f64 + 1.0) - 1.0) / 2.0;
    let k1 = beta / 2.0;
    if k0 < 0.0 {
        return Err(LawsError::BadParameters(
            "need beta(delta - m + 1) >= 1".into(),
        ));
    }
    let rs = RootSystem::build(crate::root_systems::Family::B, m)?;
    let k = if m == 1 {
        MultiplicityFunction::constant(&rs, k0)?
    } else {
        MultiplicityFunction::for_b(&rs, k0, k1)?
    };
    let x: Vec<f64> = lam_x.iter().map(|&l| l.sqrt()).collect();
    let y: Vec<f64> = lam_y.iter().map(|&l| l.sqrt()).collect();
    let p = semigroup_density(&rs, &k, t, &x, &y, truncation, seed)?;
    let jac: f64 = y.iter().map(|v| 1.0 / (2.0 * v)).product();
    Ok(p * jac)
}
