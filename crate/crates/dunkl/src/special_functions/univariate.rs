//! Classical scalar hypergeometric series and Jacobi polynomials.

use super::SpecialFnError;

/// Generalized univariate series `pFq(upper; lower; z)` summed termwise.
///
/// Terminates exactly when an upper parameter is a nonpositive integer;
/// otherwise stops once three consecutive terms fall below `eps` relative to
/// the partial sum. For `2F1` the argument must satisfy `|z| < 1` unless the
/// series terminates.
pub fn hyperg_uni(p: usize, q: usize, params: &[f64], z: f64) -> Result<f64, SpecialFnError> {
    assert_eq!(params.len(), p + q, "expected {} parameters", p + q);
    let (upper, lower) = params.split_at(p);
    let terminating = upper
        .iter()
        .any(|&a| a <= 0.0 && (a - a.round()).abs() < 1e-12);
    if p >= q + 1 && !terminating && z.abs() >= 1.0 {
        return Err(SpecialFnError::BadArgument(format!(
            "2F1-type series diverges at |z| = {}",
            z.abs()
        )));
    }

    let eps = 1e-15;
    let max_terms = 10_000usize;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut small_streak = 0usize;
    for n in 0..max_terms {
        let nf = n as f64;
        let mut factor = z / (nf + 1.0);
        for &a in upper {
            factor *= a + nf;
        }
        for &b in lower {
            let d = b + nf;
            if d == 0.0 {
                return Err(SpecialFnError::PochhammerZero {
                    parameter: b,
                    at: format!("n = {}", n + 1),
                });
            }
            factor /= d;
        }
        term *= factor;
        if term == 0.0 {
            return Ok(sum); // terminated
        }
        sum += term;
        if term.abs() <= eps * sum.abs().max(1e-300) {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(SpecialFnError::NotConverged {
        context: format!("{}F{} at z = {}", p, q, z),
        remainder: term.abs(),
    })
}

/// Jacobi polynomial
/// `P_n^{r,s}(x) = ((r+1)_n / n!) 2F1(-n, n+r+s+1, r+1; (1-x)/2)` on `[-1,1]`.
pub fn jacobi_poly(n: usize, r: f64, s: f64, x: f64) -> f64 {
    // terminating sum, evaluated directly
    let mut lead = 1.0;
    for j in 0..n {
        lead *= (r + 1.0 + j as f64) / (j as f64 + 1.0);
    }
    let u = (1.0 - x) / 2.0;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let nf = n as f64;
    for j in 0..n {
        let jf = j as f64;
        term *= (-nf + jf) * (nf + r + s + 1.0 + jf) / ((r + 1.0 + jf) * (jf + 1.0)) * u;
        sum += term;
    }
    lead * sum
}

/// Squared L2 norm of `P_n^{r,s}` against `(1-x)^r (1+x)^s` on `[-1,1]`.
pub fn jacobi_poly_norm_sq(n: usize, r: f64, s: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    let nf = n as f64;
    let ln = (r + s + 1.0) * std::f64::consts::LN_2 - (2.0 * nf + r + s + 1.0).ln()
        + ln_gamma(nf + r + 1.0)
        + ln_gamma(nf + s + 1.0)
        - ln_gamma(nf + r + s + 1.0)
        - ln_gamma(nf + 1.0);
    ln.exp()
}

/// Orthonormal Jacobi polynomial on `(0,1)` for the probability weight
/// `w(u) = u^r (1-u)^s / B(r+1, s+1)`: satisfies
/// `int_0^1 phi_n phi_k w = delta_{nk}` and the eigen-equation
/// `u(1-u) phi'' + [(r+1) - (r+s+2)u] phi' = -n(n+r+s+1) phi`.
pub fn jacobi01_orthonormal(n: usize, r: f64, s: f64, u: f64) -> f64 {
    use statrs::function::beta::ln_beta;
    // x = 1 - 2u maps (0,1) with weight u^r(1-u)^s to [-1,1] with (1-x)^r(1+x)^s
    let raw = jacobi_poly(n, r, s, 1.0 - 2.0 * u);
    // norm: int_0^1 P_n(1-2u)^2 u^r(1-u)^s du = ||P_n||^2 / 2^{r+s+1}
    let ln_w_total = ln_beta(r + 1.0, s + 1.0);
    let ln_norm_sq =
        jacobi_poly_norm_sq(n, r, s).ln() - (r + s + 1.0) * std::f64::consts::LN_2 - ln_w_total;
    raw * (-0.5 * ln_norm_sq).exp()
}
