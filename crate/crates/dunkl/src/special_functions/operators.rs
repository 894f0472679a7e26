//! Differential operators applied numerically to black-box functions via
//! central finite differences with Richardson extrapolation.

use crate::root_systems::{MultiplicityFunction, RootSystem};

use super::SpecialFnError;

/// A differential operator, evaluated at a point through second-order central
/// differences at steps `h` and `h/2` combined by Richardson extrapolation.
/// The evaluation point must keep a margin of at least `3h` from every
/// singular wall of the operator.
#[derive(Debug, Clone)]
pub enum OperatorSpec {
    /// `-J_k = Delta_k^W - E_1` acting on Weyl-invariant functions:
    /// `Delta f + sum_alpha 2 k(alpha) <alpha, grad f>/<alpha, x> - <x, grad f>`.
    Jk {
        /// Positive roots together with their multiplicities.
        roots: Vec<(Vec<f64>, f64)>,
        h: f64,
    },
    /// The Weyl-invariant Dunkl Laplacian `Delta_k^W` alone.
    DunklLaplacianWinv {
        roots: Vec<(Vec<f64>, f64)>,
        h: f64,
    },
    /// Gauss hypergeometric operator on `(0,1)^m`:
    /// `sum z_i(1-z_i) d_i^2 + 2 k1 sum_{j != i} [z_i(1-z_i)/(z_i-z_j)] d_i
    ///  + sum [c - k1(m-1) - (e+b+1-k1(m-1)) z_i] d_i`.
    GaussGf {
        k1: f64,
        e: f64,
        b: f64,
        c: f64,
        h: f64,
    },
    /// Generator-type operator of the beta-Jacobi eigenvalue process in
    /// `lambda`-coordinates on the ordered simplex of `(0,1)^m`:
    /// `2 sum l_i(1-l_i) d_i^2 + beta sum [p - (p+q) l_i
    ///  + sum_{j != i} (l_i(1-l_j)+l_j(1-l_i))/(l_i-l_j)] d_i`.
    BetaJacobiGen { beta: f64, p: f64, q: f64, h: f64 },
}

impl OperatorSpec {
    /// `-J_k` for a built root system.
    pub fn jk(rs: &RootSystem, k: &MultiplicityFunction, h: f64) -> Self {
        OperatorSpec::Jk {
            roots: collect_roots(rs, k),
            h,
        }
    }

    /// Invariant Dunkl Laplacian for a built root system.
    pub fn dunkl_laplacian(rs: &RootSystem, k: &MultiplicityFunction, h: f64) -> Self {
        OperatorSpec::DunklLaplacianWinv {
            roots: collect_roots(rs, k),
            h,
        }
    }

    /// Invariant Dunkl Laplacian for the D-type root list `{e_i +- e_j}` with
    /// constant multiplicity `k1`, valid for any `m >= 2`.
    pub fn dunkl_laplacian_d(m: usize, k1: f64, h: f64) -> Self {
        let mut roots = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                for sign in [1.0, -1.0] {
                    let mut r = vec![0.0; m];
                    r[i] = 1.0;
                    r[j] = sign;
                    roots.push((r, k1));
                }
            }
        }
        OperatorSpec::DunklLaplacianWinv { roots, h }
    }

    fn h(&self) -> f64 {
        match self {
            OperatorSpec::Jk { h, .. }
            | OperatorSpec::DunklLaplacianWinv { h, .. }
            | OperatorSpec::GaussGf { h, .. }
            | OperatorSpec::BetaJacobiGen { h, .. } => *h,
        }
    }

    /// Distance from `x` to the nearest singular wall of the operator.
    pub fn margin(&self, x: &[f64]) -> f64 {
        match self {
            OperatorSpec::Jk { roots, .. } | OperatorSpec::DunklLaplacianWinv { roots, .. } => {
                roots
                    .iter()
                    .map(|(a, _)| {
                        let dot: f64 = a.iter().zip(x).map(|(u, v)| u * v).sum();
                        let norm: f64 = a.iter().map(|u| u * u).sum::<f64>().sqrt();
                        dot.abs() / norm
                    })
                    .fold(f64::INFINITY, f64::min)
            }
            OperatorSpec::GaussGf { .. } | OperatorSpec::BetaJacobiGen { .. } => {
                let mut margin = f64::INFINITY;
                for (i, &zi) in x.iter().enumerate() {
                    margin = margin.min(zi).min(1.0 - zi);
                    for &zj in &x[i + 1..] {
                        margin = margin.min((zi - zj).abs());
                    }
                }
                margin
            }
        }
    }
}

fn collect_roots(rs: &RootSystem, k: &MultiplicityFunction) -> Vec<(Vec<f64>, f64)> {
    rs.positive()
        .iter()
        .map(|r| {
            let orbit = rs.orbit_of(r).expect("positive root belongs to its system");
            (r.as_f64(), k.value(orbit))
        })
        .collect()
}

/// Apply `spec` to `f` at `x`. Uses steps `h` and `h/2` with Richardson
/// extrapolation; errors with `TooCloseToWall` if the `3h` interior margin is
/// violated.
pub fn apply_operator<F>(spec: &OperatorSpec, f: F, x: &[f64]) -> Result<f64, SpecialFnError>
where
    F: Fn(&[f64]) -> f64,
{
    let h = spec.h();
    assert!(h > 0.0, "finite-difference step must be positive");
    let margin = spec.margin(x);
    if margin < 3.0 * h {
        return Err(SpecialFnError::TooCloseToWall { margin, h });
    }
    let coarse = apply_at_step(spec, &f, x, h);
    let fine = apply_at_step(spec, &f, x, h / 2.0);
    Ok((4.0 * fine - coarse) / 3.0)
}

fn apply_at_step<F>(spec: &OperatorSpec, f: &F, x: &[f64], h: f64) -> f64
where
    F: Fn(&[f64]) -> f64,
{
    let m = x.len();
    let f0 = f(x);
    let mut grad = vec![0.0; m];
    let mut d2 = vec![0.0; m];
    let mut shifted = x.to_vec();
    for i in 0..m {
        shifted[i] = x[i] + h;
        let fp = f(&shifted);
        shifted[i] = x[i] - h;
        let fm = f(&shifted);
        shifted[i] = x[i];
        grad[i] = (fp - fm) / (2.0 * h);
        d2[i] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    assemble(spec, x, &grad, &d2)
}

fn assemble(spec: &OperatorSpec, x: &[f64], grad: &[f64], d2: &[f64]) -> f64 {
    let m = x.len();
    match spec {
        OperatorSpec::Jk { roots, .. } => {
            let drift: f64 = x.iter().zip(grad).map(|(xi, g)| xi * g).sum();
            assemble_dunkl(roots, x, grad, d2) - drift
        }
        OperatorSpec::DunklLaplacianWinv { roots, .. } => assemble_dunkl(roots, x, grad, d2),
        OperatorSpec::GaussGf { k1, e, b, c, .. } => {
            let mf = m as f64;
            let mut acc = 0.0;
            for i in 0..m {
                let zi = x[i];
                acc += zi * (1.0 - zi) * d2[i];
                let mut first = c - k1 * (mf - 1.0) - (e + b + 1.0 - k1 * (mf - 1.0)) * zi;
                for j in 0..m {
                    if j != i {
                        first += 2.0 * k1 * zi * (1.0 - zi) / (zi - x[j]);
                    }
                }
                acc += first * grad[i];
            }
            acc
        }
        OperatorSpec::BetaJacobiGen { beta, p, q, .. } => {
            let mut acc = 0.0;
            for i in 0..m {
                let li = x[i];
                acc += 2.0 * li * (1.0 - li) * d2[i];
                let mut first = p - (p + q) * li;
                for j in 0..m {
                    if j != i {
                        let lj = x[j];
                        first += (li * (1.0 - lj) + lj * (1.0 - li)) / (li - lj);
                    }
                }
                acc += beta * first * grad[i];
            }
            acc
        }
    }
}

fn assemble_dunkl(roots: &[(Vec<f64>, f64)], x: &[f64], grad: &[f64], d2: &[f64]) -> f64 {
    let mut acc: f64 = d2.iter().sum();
    for (alpha, k) in roots {
        let dot: f64 = alpha.iter().zip(x).map(|(a, v)| a * v).sum();
        let dgrad: f64 = alpha.iter().zip(grad).map(|(a, g)| a * g).sum();
        acc += 2.0 * k * dgrad / dot;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::Family;
    use crate::special_functions::hyperg_uni;
    use crate::special_functions::series::{hyperg_multi, SeriesSpec, Truncation};

    #[test]
    fn jk_on_square_norm_b2() {
        let rs = RootSystem::build(Family::B, 2).unwrap();
        for (k0, k1) in [(0.5, 0.5), (0.75, 1.0), (1.0, 0.6)] {
            let k = MultiplicityFunction::for_b(&rs, k0, k1).unwrap();
            let op = OperatorSpec::jk(&rs, &k, 1e-4);
            let x = [2.0, 1.0];
            let f = |y: &[f64]| y.iter().map(|v| v * v).sum::<f64>();
            let got = apply_operator(&op, f, &x).unwrap();
            let expect = 4.0 + 8.0 * k0 + 8.0 * k1 - 2.0 * (x[0] * x[0] + x[1] * x[1]);
            assert!((got - expect).abs() < 1e-6, "k=({},{}): {}", k0, k1, got);
        }
    }

    #[test]
    fn dunkl_laplacian_on_square_norm() {
        // Delta_k |x|^2 = 2 m + 4 gamma for any reduced system
        let rs = RootSystem::build(Family::B, 3).unwrap();
        let k = MultiplicityFunction::for_b(&rs, 0.8, 0.4).unwrap();
        let gamma = k.gamma(&rs);
        let op = OperatorSpec::dunkl_laplacian(&rs, &k, 1e-4);
        let f = |y: &[f64]| y.iter().map(|v| v * v).sum::<f64>();
        let got = apply_operator(&op, f, &[3.0, 2.0, 1.0]).unwrap();
        assert!((got - (6.0 + 4.0 * gamma)).abs() < 1e-6);
    }

    #[test]
    fn jk_eigenfunction_b1() {
        // u(x) = 1F1(1, k0 + 1/2, x^2/2) satisfies -J_k u = 2 u
        let rs = RootSystem::build(Family::B, 1).unwrap();
        let k0 = 0.9;
        let k = MultiplicityFunction::constant(&rs, k0).unwrap();
        let op = OperatorSpec::jk(&rs, &k, 1e-4);
        let u = |y: &[f64]| hyperg_uni(1, 1, &[1.0, k0 + 0.5], y[0] * y[0] / 2.0).unwrap();
        for x in [0.7, 1.5] {
            let got = apply_operator(&op, &u, &[x]).unwrap();
            let expect = 2.0 * u(&[x]);
            assert!((got - expect).abs() < 1e-6 * expect.abs().max(1.0), "x = {}", x);
        }
    }

    #[test]
    fn gauss_gf_univariate_eigen() {
        let (e, b, c) = (0.6, 1.3, 2.0);
        let op = OperatorSpec::GaussGf {
            k1: 0.7, // immaterial at m = 1
            e,
            b,
            c,
            h: 1e-4,
        };
        let u = |z: &[f64]| hyperg_uni(2, 1, &[e, b, c], z[0]).unwrap();
        for z in [0.2, 0.5] {
            let got = apply_operator(&op, &u, &[z]).unwrap();
            let expect = e * b * u(&[z]);
            assert!((got - expect).abs() < 1e-6 * expect.abs().max(1.0), "z = {}", z);
        }
    }

    #[test]
    fn gauss_gf_multivariate_eigen() {
        let k1 = 0.6;
        let (e, b, c) = (0.8, 1.1, 2.2);
        let op = OperatorSpec::GaussGf { k1, e, b, c, h: 1e-4 };
        let spec =
            SeriesSpec::new(vec![e, b], vec![c], 1.0 / k1).with_truncation(Truncation::new(80, 1e-13));
        let u = |z: &[f64]| hyperg_multi(&spec, z).unwrap().value;
        let z = [0.3, 0.6];
        let got = apply_operator(&op, &u, &z).unwrap();
        let expect = 2.0 * e * b * u(&z);
        assert!(
            (got - expect).abs() < 1e-5 * expect.abs().max(1.0),
            "{} vs {}",
            got,
            expect
        );
    }

    #[test]
    fn beta_jacobi_gen_eigen() {
        // A u = 2 m a b u for u = 2F1^{(2/beta)}(a, b, c; lambda) when
        // 2c = beta p and 2a + 2b + 1 - 2c = beta(q - m + 1) - 1
        let (beta, p, q) = (1.5, 3.2, 2.7);
        let m = 2.0;
        let c = beta * p / 2.0;
        let k1 = beta * (q - m + 1.0) - 1.0;
        let a = 1.0;
        let b = (k1 - 1.0) / 2.0 + c - a;
        let op = OperatorSpec::BetaJacobiGen { beta, p, q, h: 1e-4 };
        let spec =
            SeriesSpec::new(vec![a, b], vec![c], 2.0 / beta).with_truncation(Truncation::new(90, 1e-13));
        let u = |z: &[f64]| hyperg_multi(&spec, z).unwrap().value;
        let z = [0.55, 0.25];
        let got = apply_operator(&op, &u, &z).unwrap();
        let expect = 2.0 * m * a * b * u(&z);
        assert!(
            (got - expect).abs() < 1e-5 * expect.abs().max(1.0),
            "{} vs {}",
            got,
            expect
        );
    }

    #[test]
    fn margin_guard() {
        let rs = RootSystem::build(Family::A, 2).unwrap();
        let k = MultiplicityFunction::constant(&rs, 1.0).unwrap();
        let op = OperatorSpec::jk(&rs, &k, 1e-3);
        let f = |_: &[f64]| 1.0;
        // x with a nearly coincident pair sits too close to a reflecting wall
        let err = apply_operator(&op, f, &[1.0, 1.0 + 1e-4]).unwrap_err();
        assert!(matches!(err, SpecialFnError::TooCloseToWall { .. }));
    }
}
