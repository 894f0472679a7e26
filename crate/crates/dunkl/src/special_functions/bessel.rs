//! Generalized Bessel functions of Weyl-invariant argument, assembled from
//! multivariate hypergeometric series.
//!
//! `bessel(x, y)` denotes `(1/|W|) D_k^W(x, y)`, the Weyl-averaged Dunkl
//! kernel; it is symmetric, equals 1 when either argument vanishes, and as a
//! function of `y` satisfies the invariant-Dunkl-Laplacian eigen-equation
//! with eigenvalue `|x|^2`.

use crate::root_systems::{Family, MultiplicityFunction, RootSystem};

use super::series::{hyperg_multi2, SeriesSpec, Truncation};
use super::SpecialFnError;

/// Generalized Bessel function for the rational A/B cases and the exceptional
/// D case.
pub fn generalized_bessel(
    rs: &RootSystem,
    k: &MultiplicityFunction,
    x: &[f64],
    y: &[f64],
    truncation: Truncation,
) -> Result<f64, SpecialFnError> {
    let m = x.len();
    assert_eq!(y.len(), m, "argument dimension mismatch");
    match rs.family {
        Family::A => {
            let k1 = k.values()[0];
            if k1 <= 0.0 {
                return Err(SpecialFnError::BadArgument(
                    "A-type Bessel needs k1 > 0".into(),
                ));
            }
            let spec = SeriesSpec::new(vec![], vec![], 1.0 / k1).with_truncation(truncation);
            Ok(hyperg_multi2(&spec, x, y)?.value)
        }
        Family::B => {
            // orbit order in the B build: short roots e_i first, then long
            let short = rs
                .positive_orbits()
                .into_iter()
                .find(|&o| {
                    rs.positive()
                        .iter()
                        .any(|r| r.norm_sq() == 1 && rs.orbit_of(r).unwrap() == o)
                })
                .expect("B system has a short orbit");
            let k0 = k.value(short);
            // m = 1 has no long orbit and the Jack parameter is immaterial
            let k1 = k
                .values()
                .iter()
                .enumerate()
                .find(|&(i, _)| i != short)
                .map(|(_, &v)| v)
                .unwrap_or(1.0);
            if k1 <= 0.0 {
                return Err(SpecialFnError::BadArgument(
                    "B-type Bessel needs k1 > 0".into(),
                ));
            }
            let c = k0 + (m as f64 - 1.0) * k1 + 0.5;
            let spec = SeriesSpec::new(vec![], vec![c], 1.0 / k1).with_truncation(truncation);
            let hx: Vec<f64> = x.iter().map(|v| v * v / 2.0).collect();
            let hy: Vec<f64> = y.iter().map(|v| v * v / 2.0).collect();
            Ok(hyperg_multi2(&spec, &hx, &hy)?.value)
        }
        Family::D => generalized_bessel_d(m, k.values()[0], x, y, truncation),
        other => Err(SpecialFnError::Unsupported(format!(
            "no generalized Bessel assembly for family {}",
            other
        ))),
    }
}

/// D-type generalized Bessel, valid for any `m >= 2` (the formula does not
/// need the root system object):
/// `0F1(q - 1/2; x^2/2, y^2/2)
///  + [prod_{j<m} (1/2 + j k1)]^{-1} prod (x_i y_i / 2)
///    0F1(q + 1/2; x^2/2, y^2/2)`
/// with `q = 1 + (m-1) k1`. The coefficient of the odd part makes the `m = 1`
/// degeneration collapse to `cosh(xy) + sinh(xy)`, reproduces the
/// `A_1 x A_1` factorization at `m = 2`, and matches the reflectable-case
/// determinantal density at `k1 = 1` for `m = 3`.
pub fn generalized_bessel_d(
    m: usize,
    k1: f64,
    x: &[f64],
    y: &[f64],
    truncation: Truncation,
) -> Result<f64, SpecialFnError> {
    assert_eq!(x.len(), m);
    assert_eq!(y.len(), m);
    if m < 2 {
        return Err(SpecialFnError::Unsupported(
            "D-type Bessel needs m >= 2".into(),
        ));
    }
    if k1 <= 0.0 {
        return Err(SpecialFnError::BadArgument(
            "D-type Bessel needs k1 > 0".into(),
        ));
    }
    let q = 1.0 + (m as f64 - 1.0) * k1;
    let hx: Vec<f64> = x.iter().map(|v| v * v / 2.0).collect();
    let hy: Vec<f64> = y.iter().map(|v| v * v / 2.0).collect();
    let alpha = 1.0 / k1;
    let plus = SeriesSpec::new(vec![], vec![q + 0.5], alpha).with_truncation(truncation);
    let minus = SeriesSpec::new(vec![], vec![q - 0.5], alpha).with_truncation(truncation);
    let prod: f64 = x.iter().zip(y).map(|(a, b)| a * b / 2.0).product();
    let odd_coeff = 1.0 / (0..m).map(|j| 0.5 + j as f64 * k1).product::<f64>();
    Ok(hyperg_multi2(&minus, &hx, &hy)?.value
        + odd_coeff * prod * hyperg_multi2(&plus, &hx, &hy)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::{Family, MultiplicityFunction, RootSystem};

    fn trunc() -> Truncation {
        Truncation::new(60, 1e-13)
    }

    #[test]
    fn bessel_at_zero_is_one() {
        let rs = RootSystem::build(Family::B, 2).unwrap();
        let k = MultiplicityFunction::for_b(&rs, 0.8, 0.6).unwrap();
        let v = generalized_bessel(&rs, &k, &[0.0, 0.0], &[1.3, 0.4], trunc()).unwrap();
        assert_eq!(v, 1.0);
        let v = generalized_bessel_d(2, 0.7, &[0.0, 0.0], &[1.3, 0.4], trunc()).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn bessel_symmetry_in_arguments() {
        let rs = RootSystem::build(Family::A, 3).unwrap();
        let k = MultiplicityFunction::constant(&rs, 0.75).unwrap();
        let x = [1.0, 0.3, -0.8];
        let y = [0.5, 0.2, -0.1];
        let a = generalized_bessel(&rs, &k, &x, &y, trunc()).unwrap();
        let b = generalized_bessel(&rs, &k, &y, &x, trunc()).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn bessel_weyl_invariance() {
        // invariance under coordinate permutation and (for B) sign flips
        let rs = RootSystem::build(Family::B, 2).unwrap();
        let k = MultiplicityFunction::for_b(&rs, 0.8, 0.6).unwrap();
        let a = generalized_bessel(&rs, &k, &[1.1, 0.4], &[0.9, 0.2], trunc()).unwrap();
        let b = generalized_bessel(&rs, &k, &[0.4, 1.1], &[0.9, 0.2], trunc()).unwrap();
        let c = generalized_bessel(&rs, &k, &[-1.1, 0.4], &[0.9, 0.2], trunc()).unwrap();
        assert!((a - b).abs() < 1e-12 * a.abs());
        assert!((a - c).abs() < 1e-12 * a.abs());
    }

    #[test]
    fn bessel_b1_reduces_to_modified_bessel() {
        // m = 1, B case: 0F1(k0 + 1/2; x^2/2, y^2/2) against the classical
        // series in the product variable
        let rs = RootSystem::build(Family::B, 1).unwrap();
        let k = MultiplicityFunction::constant(&rs, 0.9).unwrap();
        let (x, y) = (1.2, 0.7);
        let v = generalized_bessel(&rs, &k, &[x], &[y], trunc()).unwrap();
        let w = crate::special_functions::univariate::hyperg_uni(
            0,
            1,
            &[0.9 + 0.5],
            x * x * y * y / 4.0,
        )
        .unwrap();
        assert!((v - w).abs() < 1e-12 * w.abs());
    }
}
