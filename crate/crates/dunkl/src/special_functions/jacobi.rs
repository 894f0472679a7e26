//! Multivariate Jacobi polynomials on `[0,1]^m` for the weight
//! `prod lambda_i^r (1-lambda_i)^s prod |lambda_i - lambda_j|^beta`.
//!
//! The general-`beta` construction Gram-Schmidt-orthonormalizes the monomial
//! symmetric basis in the weight's inner product. Inner products are
//! evaluated exactly through Selberg-type moments of Jack polynomials: for
//! the normalized weight, `E[J_sigma] = J_sigma(1_m) (A)_sigma / (D)_sigma`
//! in generalized Pochhammer symbols with parameter `c = beta/2`, where
//! `A = r + 1 + c(m-1)` and `D = r + s + 2 + 2c(m-1)`. At `beta = 2` an
//! independent determinantal construction from univariate orthonormal Jacobi
//! polynomials is available as a cross-check.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

use crate::symmetric_functions::{
    gen_pochhammer, jack_at_ones, jack_f64, partitions_of, Partition, SymmetricPoly,
};

use super::univariate::jacobi01_orthonormal;
use super::SpecialFnError;

/// Selberg integral
/// `S_m(a, b, c) = int_{[0,1]^m} prod t_i^{a-1}(1-t_i)^{b-1} prod |t_i-t_j|^{2c} dt`.
pub fn selberg(m: usize, a: f64, b: f64, c: f64) -> f64 {
    let mut ln = 0.0;
    for j in 0..m {
        let jf = j as f64;
        ln += ln_gamma(a + jf * c) + ln_gamma(b + jf * c) + ln_gamma(1.0 + (jf + 1.0) * c)
            - ln_gamma(a + b + (m as f64 + jf - 1.0) * c)
            - ln_gamma(1.0 + c);
    }
    ln.exp()
}

/// Gauss-Jacobi quadrature on `(0,1)`: returns nodes and weights such that
/// `sum w_i f(t_i) = int_0^1 f(t) t^r (1-t)^s dt` exactly for polynomials of
/// degree `< 2n`.
pub fn gauss_jacobi_01(n: usize, r: f64, s: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    // three-term recurrence of the (1-x)^s (1+x)^r weight on (-1,1)
    let (a, b) = (s, r);
    let mut diag = vec![0.0f64; n];
    let mut off = vec![0.0f64; n.saturating_sub(1)];
    diag[0] = (b - a) / (a + b + 2.0);
    for k in 1..n {
        let kf = k as f64;
        diag[k] = (b * b - a * a) / ((2.0 * kf + a + b) * (2.0 * kf + a + b + 2.0));
        let beta_k = if k == 1 {
            4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0).powi(2) * (a + b + 3.0))
        } else {
            4.0 * kf * (kf + a) * (kf + b) * (kf + a + b)
                / ((2.0 * kf + a + b).powi(2) * (2.0 * kf + a + b + 1.0) * (2.0 * kf + a + b - 1.0))
        };
        off[k - 1] = beta_k.sqrt();
    }
    let mut jac = DMatrix::zeros(n, n);
    for i in 0..n {
        jac[(i, i)] = diag[i];
        if i + 1 < n {
            jac[(i, i + 1)] = off[i];
            jac[(i + 1, i)] = off[i];
        }
    }
    let eig = nalgebra::SymmetricEigen::new(jac);
    let mu0 = ((a + b + 1.0) * std::f64::consts::LN_2 + ln_beta(a + 1.0, b + 1.0)).exp();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = eig.eigenvalues[i];
            let w = mu0 * eig.eigenvectors[(0, i)].powi(2);
            ((1.0 + x) / 2.0, w / (r + s + 1.0).exp2())
        })
        .collect();
    pairs.sort_by(|u, v| u.0.total_cmp(&v.0));
    pairs.into_iter().unzip()
}

/// Gauss-Hermite rule for the weight `e^{-y^2/2}` on the line: returns
/// `(nodes, weights)` with `sum w_i f(y_i) ~ int e^{-y^2/2} f(y) dy`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut jac = DMatrix::zeros(n, n);
    for i in 1..n {
        let off = (i as f64 / 2.0).sqrt();
        jac[(i - 1, i)] = off;
        jac[(i, i - 1)] = off;
    }
    let eig = nalgebra::SymmetricEigen::new(jac);
    let mu0 = std::f64::consts::PI.sqrt();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let s = eig.eigenvalues[i];
            let w = mu0 * eig.eigenvectors[(0, i)].powi(2);
            // rescale from e^{-s^2} to e^{-y^2/2}
            (std::f64::consts::SQRT_2 * s, std::f64::consts::SQRT_2 * w)
        })
        .collect();
    pairs.sort_by(|u, v| u.0.total_cmp(&v.0));
    pairs.into_iter().unzip()
}

/// Nodes and weights of the `n`-point generalized Gauss-Laguerre rule for
/// `int_0^inf f(s) s^alpha e^{-s} ds`, via the Golub-Welsch eigenvalue
/// method.
pub fn gauss_laguerre(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0 && alpha > -1.0);
    let mut jac = DMatrix::zeros(n, n);
    for i in 0..n {
        jac[(i, i)] = 2.0 * i as f64 + alpha + 1.0;
        if i > 0 {
            let off = (i as f64 * (i as f64 + alpha)).sqrt();
            jac[(i - 1, i)] = off;
            jac[(i, i - 1)] = off;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(jac);
    let mu0 = statrs::function::gamma::gamma(alpha + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|u, v| u.0.total_cmp(&v.0));
    pairs.into_iter().unzip()
}

/// Mean of the J-normalized Jack polynomial under the normalized Selberg
/// weight with exponents `(r, s)` and interaction `beta`.
pub fn jack_mean(sigma: &Partition, r: f64, s: f64, beta: f64, m: usize) -> f64 {
    let c = beta / 2.0;
    let alpha = 2.0 / beta;
    let a = r + 1.0 + c * (m as f64 - 1.0);
    let d = r + s + 2.0 + 2.0 * c * (m as f64 - 1.0);
    jack_at_ones(sigma, &alpha, m) * gen_pochhammer(a, sigma, c) / gen_pochhammer(d, sigma, c)
}

/// Means of the monomial symmetric polynomials `m_mu`, `|mu| <= max_deg`,
/// under the normalized Selberg weight; solved degree by degree from the
/// triangular Jack expansions.
fn monomial_means(
    max_deg: usize,
    r: f64,
    s: f64,
    beta: f64,
    m: usize,
) -> HashMap<Partition, f64> {
    let alpha = 2.0 / beta;
    let mut means = HashMap::new();
    means.insert(Partition::empty(), 1.0);
    for d in 1..=max_deg {
        let basis = partitions_of(d, m);
        let nb = basis.len();
        let mut mat = DMatrix::zeros(nb, nb);
        let mut rhs = DVector::zeros(nb);
        for (row, sigma) in basis.iter().enumerate() {
            let jp = jack_f64(sigma, alpha, m).expect("degree within the weight limit");
            for (col, mu) in basis.iter().enumerate() {
                mat[(row, col)] = jp.coeff(mu);
            }
            rhs[row] = jack_mean(sigma, r, s, beta, m);
        }
        let sol = mat
            .lu()
            .solve(&rhs)
            .expect("Jack change of basis is triangular and invertible");
        for (col, mu) in basis.iter().enumerate() {
            means.insert(mu.clone(), sol[col]);
        }
    }
    means
}

/// Spectral value `r^beta_{n,tau} = sum_i tau_i (tau_i - 1 - beta(i-1))
/// + |tau| (r + s + 2 + beta(m-1))`; the semigroup decays as
/// `exp(-2 r^beta t)` and the generator satisfies
/// `A P_tau = -2 r^beta P_tau`.
pub fn jacobi_eigenvalue(tau: &Partition, r: f64, s: f64, beta: f64, m: usize) -> f64 {
    let n = tau.weight() as f64;
    let mut acc = n * (r + s + 2.0 + beta * (m as f64 - 1.0));
    for (i, &ti) in tau.parts().iter().enumerate() {
        acc += ti as f64 * (ti as f64 - 1.0 - beta * i as f64);
    }
    acc
}

/// An orthonormal multivariate Jacobi polynomial, stored on the monomial
/// symmetric basis (inhomogeneous).
#[derive(Debug, Clone)]
pub struct MultivariateJacobi {
    pub tau: Partition,
    pub m: usize,
    pub coeffs: Vec<(Partition, f64)>,
    /// `r^beta_{n,tau}`.
    pub eigenvalue: f64,
}

impl MultivariateJacobi {
    pub fn eval(&self, lambda: &[f64]) -> f64 {
        assert_eq!(lambda.len(), self.m);
        self.coeffs
            .iter()
            .map(|(mu, c)| {
                c * crate::symmetric_functions::monomial::eval_monomial_symmetric(mu, lambda)
            })
            .sum()
    }
}

/// Basis of all partitions of weight `<= n` into `<= m` parts, ordered by
/// (weight, lex) ascending; any such order refines the triangular order of
/// the eigenpolynomials.
fn graded_basis(n: usize, m: usize) -> Vec<Partition> {
    let mut basis = vec![Partition::empty()];
    for d in 1..=n {
        let mut level = partitions_of(d, m);
        level.reverse(); // ascending lex within the degree
        basis.extend(level);
    }
    basis
}

/// The complete orthonormal family `{P_tau : |tau| <= n_max}` by a single
/// Gram-Schmidt sweep in the exact moment inner product; each leading
/// monomial coefficient is positive.
pub fn multivariate_jacobi_family(
    n_max: usize,
    r: f64,
    s: f64,
    beta: f64,
    m: usize,
) -> Result<Vec<MultivariateJacobi>, SpecialFnError> {
    if beta <= 0.0 || r <= -1.0 || s <= -1.0 {
        return Err(SpecialFnError::BadArgument(
            "need beta > 0, r > -1, s > -1".into(),
        ));
    }
    let basis = graded_basis(n_max, m);
    let nb = basis.len();

    let means = monomial_means(2 * n_max, r, s, beta, m);
    // pairwise moments E[m_i m_j]
    let mut pair = DMatrix::zeros(nb, nb);
    for i in 0..nb {
        let pi = SymmetricPoly::monomial(m, basis[i].clone(), 1.0);
        for j in i..nb {
            let pj = SymmetricPoly::monomial(m, basis[j].clone(), 1.0);
            let prod = pi.mul(&pj);
            let mut acc = 0.0;
            for (mu, c) in prod.coeffs() {
                acc += c * means[mu];
            }
            pair[(i, j)] = acc;
            pair[(j, i)] = acc;
        }
    }

    let ip = |u: &DVector<f64>, v: &DVector<f64>| (u.transpose() * &pair * v)[(0, 0)];
    let mut ortho: Vec<DVector<f64>> = Vec::with_capacity(nb);
    for idx in 0..nb {
        let mut v = DVector::zeros(nb);
        v[idx] = 1.0;
        for u in &ortho {
            let coef = ip(&v, u);
            v -= u * coef;
        }
        let norm = ip(&v, &v);
        if !(norm > 0.0) {
            return Err(SpecialFnError::BadArgument(format!(
                "degenerate Gram matrix near basis element {}",
                basis[idx]
            )));
        }
        v /= norm.sqrt();
        ortho.push(v);
    }
    Ok(basis
        .iter()
        .zip(&ortho)
        .map(|(tau, v)| {
            let coeffs = basis
                .iter()
                .zip(v.iter())
                .filter(|(_, &c)| c.abs() > 1e-13)
                .map(|(p, &c)| (p.clone(), c))
                .collect();
            MultivariateJacobi {
                tau: tau.clone(),
                m,
                coeffs,
                eigenvalue: jacobi_eigenvalue(tau, r, s, beta, m),
            }
        })
        .collect())
}

/// Orthonormal multivariate Jacobi polynomial `P_tau`.
pub fn multivariate_jacobi(
    tau: &Partition,
    r: f64,
    s: f64,
    beta: f64,
    m: usize,
) -> Result<MultivariateJacobi, SpecialFnError> {
    if tau.len() > m {
        return Err(SpecialFnError::BadArgument(format!(
            "partition {} has more than {} parts",
            tau, m
        )));
    }
    let family = multivariate_jacobi_family(tau.weight(), r, s, beta, m)?;
    Ok(family
        .into_iter()
        .find(|p| p.tau == *tau)
        .expect("graded basis contains tau"))
}

/// `beta = 2` determinantal evaluation
/// `N det[phi_{tau_i + m - i}(lambda_j)] / V(lambda)` with `phi_n` the
/// orthonormal univariate Jacobi polynomials on `(0,1)` and
/// `N = sqrt(S_m(r+1, s+1, 1) / (m! B(r+1, s+1)^m))`; orthonormal for the
/// same normalized weight, up to an overall sign.
pub fn jacobi_det2(tau: &Partition, r: f64, s: f64, lambda: &[f64]) -> f64 {
    let m = lambda.len();
    assert!(tau.len() <= m);
    let padded = tau.padded(m);
    let mut mat = DMatrix::zeros(m, m);
    for i in 0..m {
        let deg = padded[i] + m - 1 - i;
        for j in 0..m {
            mat[(i, j)] = jacobi01_orthonormal(deg, r, s, lambda[j]);
        }
    }
    let mut vdm = 1.0;
    for i in 0..m {
        for j in (i + 1)..m {
            vdm *= lambda[i] - lambda[j];
        }
    }
    let mut ln_fact = 0.0;
    for i in 2..=m {
        ln_fact += (i as f64).ln();
    }
    let ln_n = 0.5
        * (selberg(m, r + 1.0, s + 1.0, 1.0).ln()
            - ln_fact
            - m as f64 * ln_beta(r + 1.0, s + 1.0));
    ln_n.exp() * mat.determinant() / vdm
}
