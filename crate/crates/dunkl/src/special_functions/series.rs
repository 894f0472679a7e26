//! Multivariate hypergeometric series over Jack polynomials.
//!
//! Series are summed on the `C`-normalization: with `C_tau = alpha^n n! J_tau
//! / j_tau`, the one-argument series is
//! `pFq(a; b; x) = sum_tau [prod (a_i)_tau / prod (b_j)_tau] C_tau(x) / n!`
//! and the two-argument series replaces `C_tau(x)` by
//! `C_tau(x) C_tau(y) / C_tau(1_m)`. Here `j_tau` is the product over cells
//! of `(alpha a + l + 1)(alpha (a+1) + l)` and the generalized Pochhammer
//! uses `k1 = 1/alpha`. With this normalization the `m = 1` series reduce to
//! the classical ones, e.g. `0F0(x, y) = e^{xy}`.

use crate::symmetric_functions::{jack_eval, partitions_of, Partition};

use super::SpecialFnError;

/// Truncation policy for shell-by-shell summation over `|tau| = n`.
#[derive(Debug, Clone, Copy)]
pub struct Truncation {
    /// Largest shell degree attempted.
    pub max_degree: usize,
    /// Relative tolerance: the sum stops after three consecutive shells whose
    /// magnitude stays below `eps * |partial sum|`.
    pub eps: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            max_degree: 30,
            eps: 1e-10,
        }
    }
}

impl Truncation {
    pub fn new(max_degree: usize, eps: f64) -> Self {
        Truncation { max_degree, eps }
    }
}

/// A converged series value together with the magnitude of the last shell,
/// reported as a remainder estimate.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    pub remainder: f64,
    /// Number of shells actually summed (last degree + 1).
    pub shells: usize,
}

/// Parameters of a multivariate hypergeometric series.
#[derive(Debug, Clone)]
pub struct SeriesSpec {
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
    /// Jack parameter `alpha`; Pochhammer symbols use `k1 = 1/alpha`.
    pub alpha: f64,
    pub truncation: Truncation,
}

impl SeriesSpec {
    pub fn new(upper: Vec<f64>, lower: Vec<f64>, alpha: f64) -> Self {
        assert!(alpha > 0.0, "Jack parameter must be positive");
        SeriesSpec {
            upper,
            lower,
            alpha,
            truncation: Truncation::default(),
        }
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }
}

/// `ln j_tau(alpha)` for `j_tau = prod_{cells} (alpha a + l + 1)
/// (alpha (a+1) + l)`; every factor is positive for `alpha > 0`.
fn ln_j_norm(tau: &Partition, alpha: f64) -> f64 {
    let mut out = 0.0;
    for (i, j) in tau.cells() {
        let a = tau.arm(i, j) as f64;
        let l = tau.leg(i, j) as f64;
        out += ((alpha * a + l + 1.0) * (alpha * (a + 1.0) + l)).ln();
    }
    out
}

/// `ln |(c)_tau|` with its sign; `None` marks an exactly zero factor.
fn ln_gen_pochhammer(c: f64, tau: &Partition, k1: f64) -> Option<(f64, f64)> {
    let mut ln = 0.0;
    let mut sign = 1.0;
    for (i, &ti) in tau.parts().iter().enumerate() {
        let base = c - k1 * i as f64;
        for j in 0..ti {
            let f = base + j as f64;
            if f == 0.0 {
                return None;
            }
            ln += f.abs().ln();
            if f < 0.0 {
                sign = -sign;
            }
        }
    }
    Some((ln, sign))
}

/// `ln J_tau(1_m)`; the cell factors `m - (i-1) + alpha (j-1)` are positive
/// whenever `tau` fits into `m` rows.
fn ln_jack_at_ones(tau: &Partition, alpha: f64, m: usize) -> f64 {
    let mut out = 0.0;
    for (i, j) in tau.cells() {
        out += (m as f64 - (i as f64 - 1.0) + alpha * (j as f64 - 1.0)).ln();
    }
    out
}

/// One-argument series `pFq^{(alpha)}(a; b; x)`.
pub fn hyperg_multi(spec: &SeriesSpec, x: &[f64]) -> Result<SeriesValue, SpecialFnError> {
    sum_shells(spec, x, None)
}

/// Two-argument series `pFq^{(alpha)}(a; b; x, y)`.
pub fn hyperg_multi2(
    spec: &SeriesSpec,
    x: &[f64],
    y: &[f64],
) -> Result<SeriesValue, SpecialFnError> {
    assert_eq!(x.len(), y.len(), "argument dimension mismatch");
    sum_shells(spec, x, Some(y))
}

fn sum_shells(
    spec: &SeriesSpec,
    x: &[f64],
    y: Option<&[f64]>,
) -> Result<SeriesValue, SpecialFnError> {
    let m = x.len();
    let alpha = spec.alpha;
    let k1 = 1.0 / alpha;
    let trunc = spec.truncation;

    if crate::symmetric_functions::jack::max_weight() < trunc.max_degree {
        crate::symmetric_functions::jack::set_max_weight(trunc.max_degree);
    }

    // arguments are rescaled into [-1, 1]^m and every term is assembled in
    // log magnitude so that large arguments and high shell degrees do not
    // overflow intermediate factors
    let cx = x.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
    let xs: Vec<f64> = x.iter().map(|v| v / cx).collect();
    let (cy, ys) = match y {
        None => (1.0, Vec::new()),
        Some(y) => {
            let c = y.iter().fold(1.0f64, |a, &v| a.max(v.abs()));
            (c, y.iter().map(|v| v / c).collect())
        }
    };
    let ln_step = alpha.ln() + cx.ln() + cy.ln();

    let mut sum = 1.0f64; // n = 0 shell
    let mut last_shell = 1.0f64;
    let mut small_streak = 0usize;
    for n in 1..=trunc.max_degree {
        let mut shell = 0.0f64;
        'terms: for tau in partitions_of(n, m) {
            let mut ln = n as f64 * ln_step;
            let mut sign = 1.0;
            for &a in &spec.upper {
                match ln_gen_pochhammer(a, &tau, k1) {
                    None => continue 'terms,
                    Some((l, s)) => {
                        ln += l;
                        sign *= s;
                    }
                }
            }
            for &b in &spec.lower {
                match ln_gen_pochhammer(b, &tau, k1) {
                    None => {
                        return Err(SpecialFnError::PochhammerZero {
                            parameter: b,
                            at: format!("tau = {}", tau),
                        })
                    }
                    Some((l, s)) => {
                        ln -= l;
                        sign *= s;
                    }
                }
            }
            ln -= ln_j_norm(&tau, alpha);
            let jx = jack_eval(&tau, alpha, &xs).map_err(|e| SpecialFnError::BadArgument(
                format!("Jack evaluation failed: {}", e),
            ))?;
            if jx == 0.0 {
                continue;
            }
            ln += jx.abs().ln();
            sign *= jx.signum();
            if y.is_some() {
                let jy = jack_eval(&tau, alpha, &ys).map_err(|e| {
                    SpecialFnError::BadArgument(format!("Jack evaluation failed: {}", e))
                })?;
                if jy == 0.0 {
                    continue;
                }
                ln += jy.abs().ln();
                sign *= jy.signum();
                ln -= ln_jack_at_ones(&tau, alpha, m);
            }
            shell += sign * ln.exp();
        }
        sum += shell;
        last_shell = shell.abs();
        if last_shell <= trunc.eps * sum.abs().max(1e-300) {
            small_streak += 1;
            if small_streak >= 3 {
                return Ok(SeriesValue {
                    value: sum,
                    remainder: last_shell,
                    shells: n + 1,
                });
            }
        } else {
            small_streak = 0;
        }
    }
    Err(SpecialFnError::NotConverged {
        context: format!(
            "{}F{}^(alpha={}) in {} variables, degree {} reached",
            spec.upper.len(),
            spec.lower.len(),
            alpha,
            m,
            trunc.max_degree
        ),
        remainder: last_shell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::univariate::hyperg_uni;

    fn trunc(n: usize) -> Truncation {
        Truncation::new(n, 1e-14)
    }

    #[test]
    fn univariate_degeneration_0f0() {
        // m = 1: 0F0(x, y) = e^{xy}
        let spec = SeriesSpec::new(vec![], vec![], 2.0).with_truncation(trunc(60));
        for (x, y) in [(1.0, 1.0), (0.3, -1.2), (2.0, 1.5)] {
            let v = hyperg_multi2(&spec, &[x], &[y]).unwrap().value;
            assert!(
                (v - (x * y).exp()).abs() < 1e-12 * (x * y).exp().abs(),
                "({}, {})",
                x,
                y
            );
        }
    }

    #[test]
    fn univariate_degeneration_0f1() {
        // m = 1: 0F1(c; x, y) = classical 0F1(c; xy)
        let spec = SeriesSpec::new(vec![], vec![1.25], 0.5).with_truncation(trunc(60));
        for (x, y) in [(0.7, 0.9), (2.0, 1.1)] {
            let v = hyperg_multi2(&spec, &[x], &[y]).unwrap().value;
            let w = hyperg_uni(0, 1, &[1.25], x * y).unwrap();
            assert!((v - w).abs() < 1e-12 * w.abs());
        }
    }

    #[test]
    fn univariate_degeneration_one_arg() {
        // m = 1 one-argument series match the scalar ones for any alpha
        for alpha in [0.5, 1.0, 2.0] {
            let spec = SeriesSpec::new(vec![1.3], vec![2.7], alpha).with_truncation(trunc(80));
            let v = hyperg_multi(&spec, &[0.8]).unwrap().value;
            let w = hyperg_uni(1, 1, &[1.3, 2.7], 0.8).unwrap();
            assert!((v - w).abs() < 1e-12 * w.abs(), "alpha = {}", alpha);
        }
    }

    #[test]
    fn pins_criterion_three_grid() {
        // 0F1(3/2, z) = sinh(2 sqrt z)/(2 sqrt z), 0F1(1/2, z) = cosh(2 sqrt z)
        let mut z = 1e-3;
        while z <= 10.0 {
            let spec = SeriesSpec::new(vec![], vec![1.5], 1.0).with_truncation(trunc(80));
            let v = hyperg_multi(&spec, &[z]).unwrap().value;
            let root = 2.0 * z.sqrt();
            assert!((v - root.sinh() / root).abs() <= 1e-12 * v.abs(), "z = {}", z);
            let spec = SeriesSpec::new(vec![], vec![0.5], 1.0).with_truncation(trunc(80));
            let v = hyperg_multi(&spec, &[z]).unwrap().value;
            assert!((v - root.cosh()).abs() <= 1e-12 * v.abs(), "z = {}", z);
            z *= 3.7;
        }
    }

    #[test]
    fn splitting_0f0_two_variables() {
        // 0F0^{(alpha)}(x) = e^{x_1 + ... + x_m} for the one-argument series
        let spec = SeriesSpec::new(vec![], vec![], 0.75).with_truncation(trunc(60));
        let v = hyperg_multi(&spec, &[0.4, 1.1]).unwrap().value;
        assert!((v - 1.5f64.exp()).abs() < 1e-11 * v);
    }

    #[test]
    fn two_arg_0f0_symmetry_and_zero() {
        let spec = SeriesSpec::new(vec![], vec![], 0.5).with_truncation(trunc(60));
        let x = [1.1, 0.4];
        let y = [0.8, 0.3];
        let a = hyperg_multi2(&spec, &x, &y).unwrap().value;
        let b = hyperg_multi2(&spec, &y, &x).unwrap().value;
        assert!((a - b).abs() < 1e-12 * a.abs());
        // y = 0 collapses every positive shell
        let z = hyperg_multi2(&spec, &x, &[0.0, 0.0]).unwrap().value;
        assert_eq!(z, 1.0);
    }

    #[test]
    fn not_converged_and_pochhammer_zero() {
        let spec = SeriesSpec::new(vec![], vec![], 1.0).with_truncation(Truncation::new(5, 1e-14));
        assert!(matches!(
            hyperg_multi(&spec, &[30.0]),
            Err(SpecialFnError::NotConverged { .. })
        ));
        // lower parameter hitting the Pochhammer lattice: with c = 1 and
        // k1 = 2, tau = (2,2) contributes the factor (1 - 2 + 1) = 0
        let spec = SeriesSpec::new(vec![], vec![1.0], 0.5).with_truncation(trunc(30));
        assert!(matches!(
            hyperg_multi(&spec, &[0.4, 0.4]),
            Err(SpecialFnError::PochhammerZero { .. })
        ));
    }
}

