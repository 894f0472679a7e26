//! Macdonald-Mehta normalization constants
//! `c_k = int_{R^m} e^{-|y|^2/2} prod_{alpha > 0} |<alpha, y>|^{2 k(alpha)} dy`.
//!
//! For integer exponents `2k(alpha)` the integrand is polynomial and the
//! constant is evaluated exactly through Gaussian moments; otherwise a seeded
//! Monte Carlo average over standard normal samples is used and must reach a
//! 1% relative standard error.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::root_systems::{MultiplicityFunction, RootSystem};

use super::LawsError;

/// Normalization data for a radial Dunkl semigroup.
#[derive(Debug, Clone)]
pub struct NormConstants {
    /// Macdonald-Mehta integral `c_k`.
    pub c_k: f64,
    /// Relative standard error of the estimate (0 for the exact route).
    pub rel_se: f64,
    pub exact: bool,
}

/// `ln` of the Laguerre Selberg integral
/// `W_m(a, c) = int_{[0,inf)^m} prod lam_i^{a-1} e^{-sum lam}
///  prod_{i<j} |lam_i - lam_j|^{2c} dlam
///  = prod_{j=0}^{m-1} Gamma(a + jc) Gamma(1 + (j+1)c) / Gamma(1 + c)`.
fn ln_laguerre_selberg(m: usize, a: f64, c: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    (0..m)
        .map(|j| {
            let jf = j as f64;
            ln_gamma(a + jf * c) + ln_gamma(1.0 + (jf + 1.0) * c) - ln_gamma(1.0 + c)
        })
        .sum()
}

/// Closed form of `c_k` for `A_{m-1}` in `m` variables (Mehta's integral):
/// `(2 pi)^{m/2} prod_{j=1}^m Gamma(1 + jk) / Gamma(1 + k)`.
pub fn macdonald_mehta_a(m: usize, k: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let ln: f64 = (1..=m)
        .map(|j| ln_gamma(1.0 + j as f64 * k) - ln_gamma(1.0 + k))
        .sum();
    (0.5 * m as f64 * (2.0 * std::f64::consts::PI).ln() + ln).exp()
}

/// Closed form of `c_k` for `B_m`, via the substitution `lam = x^2 / 2` into
/// the Laguerre Selberg integral:
/// `2^{m (k0 + 1/2) + m (m-1) k1} W_m(k0 + 1/2, k1)`.
pub fn macdonald_mehta_b(m: usize, k0: f64, k1: f64) -> f64 {
    let mf = m as f64;
    let ln2 = std::f64::consts::LN_2;
    ((mf * (k0 + 0.5) + mf * (mf - 1.0) * k1) * ln2 + ln_laguerre_selberg(m, k0 + 0.5, k1)).exp()
}

/// Closed form of `c_k` for `D_m`: the `B_m` value at `k0 = 0`.
pub fn macdonald_mehta_d(m: usize, k1: f64) -> f64 {
    macdonald_mehta_b(m, 0.0, k1)
}

/// Exact value when every `2 k(alpha)` is a nonnegative integer.
pub fn macdonald_mehta(rs: &RootSystem, k: &MultiplicityFunction) -> Option<f64> {
    let m = rs.rank;
    let mut exponents: Vec<(usize, &[i64])> = Vec::new();
    for alpha in rs.positive() {
        let kv = k.value(rs.orbit_of(alpha).expect("positive root"));
        let e2 = 2.0 * kv;
        // |<alpha, y>|^{2k} is polynomial only for even integer exponents
        if (e2 - e2.round()).abs() > 1e-9 || e2.round() as i64 % 2 != 0 || kv < 0.0 {
            return None;
        }
        exponents.push((e2.round() as usize, alpha.coords.as_slice()));
    }

    // expand prod <alpha, y>^{2k(alpha)} over monomial exponent vectors
    let mut poly: HashMap<Vec<usize>, f64> = HashMap::new();
    poly.insert(vec![0; m], 1.0);
    for (e2, coords) in exponents {
        for _ in 0..e2 {
            let mut next: HashMap<Vec<usize>, f64> = HashMap::new();
            for (expv, coeff) in &poly {
                for (i, &c) in coords.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    let mut ev = expv.clone();
                    ev[i] += 1;
                    *next.entry(ev).or_insert(0.0) += coeff * c as f64;
                }
            }
            poly = next;
        }
    }

    // termwise Gaussian moments: E[y^e] = (e-1)!! for even e, else 0
    let mut acc = 0.0;
    'terms: for (expv, coeff) in &poly {
        let mut term = *coeff;
        for &e in expv {
            if e % 2 == 1 {
                continue 'terms;
            }
            let mut df = 1.0;
            let mut j = e as i64 - 1;
            while j > 1 {
                df *= j as f64;
                j -= 2;
            }
            term *= df;
        }
        acc += term;
    }
    Some(acc * (2.0 * std::f64::consts::PI).powf(m as f64 / 2.0))
}

/// Seeded Monte Carlo estimate with standard error.
pub fn macdonald_mehta_mc(
    rs: &RootSystem,
    k: &MultiplicityFunction,
    n_samples: usize,
    seed: u64,
) -> (f64, f64) {
    let m = rs.rank;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut y = vec![0.0f64; m];
    for _ in 0..n_samples {
        for v in y.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        let mut w = 1.0f64;
        for alpha in rs.positive() {
            let kv = k.value(rs.orbit_of(alpha).expect("positive root"));
            w *= alpha.dot(&y).abs().powf(2.0 * kv);
        }
        sum += w;
        sum_sq += w * w;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    let scale = (2.0 * std::f64::consts::PI).powf(m as f64 / 2.0);
    (scale * mean, scale * (var / n).sqrt())
}

/// Closed-form `c_k` for the supported families, if the multiplicity is
/// nonnegative.
fn closed_form(rs: &RootSystem, k: &MultiplicityFunction) -> Option<f64> {
    use crate::root_systems::Family;
    if k.min_value() < 0.0 {
        return None;
    }
    let m = rs.rank;
    match rs.family {
        Family::A => Some(macdonald_mehta_a(m, k.values()[0])),
        Family::B => {
            // orbit of the short roots e_i, as in the Bessel assembly
            let short = rs.positive_orbits().into_iter().find(|&o| {
                rs.positive()
                    .iter()
                    .any(|r| r.norm_sq() == 1 && rs.orbit_of(r).unwrap() == o)
            })?;
            let k0 = k.value(short);
            let k1 = k
                .values()
                .iter()
                .enumerate()
                .find(|&(i, _)| i != short)
                .map(|(_, &v)| v)
                .unwrap_or(0.0);
            Some(macdonald_mehta_b(m, k0, k1))
        }
        Family::D => Some(macdonald_mehta_d(m, k.values()[0])),
        _ => None,
    }
}

/// `c_k`, exact when possible, else Monte Carlo at 1% relative accuracy.
pub fn norm_constants(
    rs: &RootSystem,
    k: &MultiplicityFunction,
    seed: u64,
) -> Result<NormConstants, LawsError> {
    if let Some(exact) = closed_form(rs, k).or_else(|| macdonald_mehta(rs, k)) {
        return Ok(NormConstants {
            c_k: exact,
            rel_se: 0.0,
            exact: true,
        });
    }
    let (value, se) = macdonald_mehta_mc(rs, k, 400_000, seed);
    let rel = se / value;
    if rel > 0.01 {
        return Err(LawsError::McAccuracy(format!(
            "c_k relative standard error {:.3}% exceeds 1%",
            100.0 * rel
        )));
    }
    Ok(NormConstants {
        c_k: value,
        rel_se: rel,
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::Family;
    use std::f64::consts::PI;

    #[test]
    fn exact_b2_k_one() {
        // prod <alpha,y>^2 = y1^2 y2^2 (y1^2-y2^2)^2; moments give 12 (2 pi)
        let rs = RootSystem::build(Family::B, 2).unwrap();
        let k = MultiplicityFunction::for_b(&rs, 1.0, 1.0).unwrap();
        let c = macdonald_mehta(&rs, &k).unwrap();
        assert!((c - 24.0 * PI).abs() < 1e-9 * c);
    }

    #[test]
    fn exact_zero_multiplicity_is_gaussian_mass() {
        let rs = RootSystem::build(Family::A, 3).unwrap();
        let k = MultiplicityFunction::constant(&rs, 0.0).unwrap();
        let c = macdonald_mehta(&rs, &k).unwrap();
        assert!((c - (2.0 * PI).powf(1.5)).abs() < 1e-12 * c);
    }

    #[test]
    fn exact_a2_k_one() {
        // A_1 in two variables: int e^{-|y|^2/2} (y1-y2)^2 = 2 (2 pi)
        let rs = RootSystem::build(Family::A, 2).unwrap();
        let k = MultiplicityFunction::constant(&rs, 1.0).unwrap();
        let c = macdonald_mehta(&rs, &k).unwrap();
        assert!((c - 4.0 * PI).abs() < 1e-12 * c);
    }

    #[test]
    fn mc_agrees_with_exact() {
        let rs = RootSystem::build(Family::B, 2).unwrap();
        let k = MultiplicityFunction::for_b(&rs, 1.0, 1.0).unwrap();
        let exact = macdonald_mehta(&rs, &k).unwrap();
        let (mc, se) = macdonald_mehta_mc(&rs, &k, 400_000, 7);
        assert!((mc - exact).abs() < 4.0 * se, "{} vs {} (se {})", mc, exact, se);
    }

    #[test]
    fn closed_form_matches_moment_route() {
        // integer multiplicities: Selberg product vs exact Gaussian moments
        let rs = RootSystem::build(Family::B, 2).unwrap();
        for (k0, k1) in [(1.0, 1.0), (2.0, 1.0), (1.0, 2.0), (2.0, 3.0)] {
            let k = MultiplicityFunction::for_b(&rs, k0, k1).unwrap();
            let closed = macdonald_mehta_b(2, k0, k1);
            let moments = macdonald_mehta(&rs, &k).unwrap();
            assert!(
                (closed - moments).abs() < 1e-10 * moments,
                "k=({},{}): {} vs {}",
                k0,
                k1,
                closed,
                moments
            );
        }
        let rs = RootSystem::build(Family::A, 3).unwrap();
        let k = MultiplicityFunction::constant(&rs, 1.0).unwrap();
        assert!(
            (macdonald_mehta_a(3, 1.0) - macdonald_mehta(&rs, &k).unwrap()).abs()
                < 1e-10 * macdonald_mehta_a(3, 1.0)
        );
    }

    #[test]
    fn closed_form_matches_mc_off_integers() {
        let rs = RootSystem::build(Family::B, 2).unwrap();
        let k = MultiplicityFunction::for_b(&rs, 0.75, 0.6).unwrap();
        let nc = norm_constants(&rs, &k, 1).unwrap();
        assert!(nc.exact);
        let (mc, se) = macdonald_mehta_mc(&rs, &k, 400_000, 11);
        assert!((mc - nc.c_k).abs() < 4.0 * se, "{} vs {} (se {})", mc, nc.c_k, se);
    }
}
