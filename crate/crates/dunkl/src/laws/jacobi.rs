//! beta-Jacobi semigroup kernel: a spectral expansion in multivariate Jacobi
//! polynomials valid for all beta, and the beta = 2 determinantal
//! (Karlin-McGregor) form used as a cross check.

use nalgebra::DMatrix;
use statrs::function::beta::ln_beta;

use crate::special_functions::{
    jacobi01_orthonormal, multivariate_jacobi_family, selberg, MultivariateJacobi, SpecialFnError,
    Truncation,
};

use super::LawsError;

/// Spectral expansion of the beta-Jacobi transition density on the ordered
/// simplex `1 > lambda_1 > ... > lambda_m > 0`.
///
/// `K_t(theta, lambda) = sum_tau e^{-2 r_tau t} P_tau(theta) P_tau(lambda)
///  W(lambda)` where the `P_tau` are orthonormal under the stationary law
/// `W(lambda) = m! prod lambda^r (1-lambda)^s prod |lambda_i-lambda_j|^beta
///  / S_m(r+1, s+1, beta/2)`.
#[derive(Debug, Clone)]
pub struct JacobiKernel {
    pub m: usize,
    pub r: f64,
    pub s: f64,
    pub beta: f64,
    polys: Vec<MultivariateJacobi>,
    weight_norm: f64,
}

impl JacobiKernel {
    /// Builds the expansion with all eigenpolynomials of degree `<= n_max`.
    /// A degree around `sqrt(ln(1/eps) / (2 t))` resolves the kernel at
    /// time `t` to accuracy `eps`.
    pub fn new(m: usize, r: f64, s: f64, beta: f64, n_max: usize) -> Result<Self, LawsError> {
        let polys = multivariate_jacobi_family(n_max, r, s, beta, m)?;
        let weight_norm =
            (1..=m).map(|i| i as f64).product::<f64>() / selberg(m, r + 1.0, s + 1.0, beta / 2.0);
        Ok(Self {
            m,
            r,
            s,
            beta,
            polys,
            weight_norm,
        })
    }

    /// Stationary density on the ordered simplex.
    pub fn stationary_density(&self, lambda: &[f64]) -> f64 {
        let mut w = self.weight_norm;
        for &l in lambda {
            w *= l.powf(self.r) * (1.0 - l).powf(self.s);
        }
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                w *= (lambda[i] - lambda[j]).abs().powf(self.beta);
            }
        }
        w
    }

    /// Transition density `K_t(theta, lambda)` with respect to Lebesgue
    /// measure in `lambda` on the ordered simplex.
    pub fn eval(&self, t: f64, theta: &[f64], lambda: &[f64]) -> f64 {
        assert_eq!(theta.len(), self.m);
        assert_eq!(lambda.len(), self.m);
        let series: f64 = self
            .polys
            .iter()
            .map(|p| (-2.0 * p.eigenvalue * t).exp() * p.eval(theta) * p.eval(lambda))
            .sum();
        series * self.stationary_density(lambda)
    }

    /// Largest decayed coefficient dropped by the truncation, as an
    /// a-posteriori error scale for `eval` at time `t`.
    pub fn truncation_scale(&self, t: f64) -> f64 {
        let n = 1 + self.polys.iter().map(|p| p.tau.weight()).max().unwrap_or(0);
        let tau = crate::symmetric_functions::Partition::new(vec![n]);
        let next = crate::special_functions::jacobi_eigenvalue(&tau, self.r, self.s, self.beta, self.m);
        (-2.0 * next * t).exp()
    }
}

/// Karlin-McGregor form of the beta = 2 Jacobi transition density on the
/// ordered simplex:
/// `e^{-ct} (V(lambda)/V(theta)) det[ sum_n e^{-2 n (n+r+s+1) t}
///  phi_n(theta_i) phi_n(lambda_j) w(lambda_j) ]`
/// with orthonormal univariate Jacobi functions `phi_n` for the weight
/// `w = lambda^r (1-lambda)^s / B(r+1, s+1)` and
/// `c = -2 sum_{j<m} j (j+r+s+1)`.
pub fn jacobi_semigroup_density_det2(
    m: usize,
    r: f64,
    s: f64,
    t: f64,
    theta: &[f64],
    lambda: &[f64],
    n_max: usize,
) -> Result<f64, LawsError> {
    if t <= 0.0 {
        return Err(LawsError::BadParameters("need t > 0".into()));
    }
    let inv_beta = (-ln_beta(r + 1.0, s + 1.0)).exp();
    let c: f64 = -2.0 * (0..m).map(|j| (j as f64) * (j as f64 + r + s + 1.0)).sum::<f64>();
    let kernel1 = |th: f64, la: f64| -> Result<f64, SpecialFnError> {
        let mut acc = 0.0;
        for n in 0..=n_max {
            let nf = n as f64;
            acc += (-2.0 * nf * (nf + r + s + 1.0) * t).exp()
                * jacobi01_orthonormal(n, r, s, th)
                * jacobi01_orthonormal(n, r, s, la);
        }
        Ok(acc * la.powf(r) * (1.0 - la).powf(s) * inv_beta)
    };
    let mut mat = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            mat[(i, j)] = kernel1(theta[i], lambda[j])?;
        }
    }
    let vdm = |u: &[f64]| -> f64 {
        let mut v = 1.0;
        for i in 0..u.len() {
            for j in (i + 1)..u.len() {
                v *= u[i] - u[j];
            }
        }
        v
    };
    Ok((-c * t).exp() * vdm(lambda) / vdm(theta) * mat.determinant())
}

/// Suggested spectral truncation degree for target accuracy `truncation.eps`
/// at time `t`.
pub fn suggested_degree(t: f64, truncation: Truncation) -> usize {
    let eps = truncation.eps.max(1e-15);
    (((1.0 / eps).ln() / (2.0 * t)).sqrt().ceil() as usize).clamp(2, truncation.max_degree)
}
