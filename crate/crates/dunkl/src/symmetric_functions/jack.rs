//! Jack polynomials `J_tau^(alpha)` in the J-normalization.
//!
//! `P_tau` is computed as the eigenfunction of the Jack Laplace–Beltrami
//! operator
//!
//! ```text
//! D(alpha) = (alpha/2) sum_i x_i^2 d_i^2 + sum_{i != j} x_i^2/(x_i - x_j) d_i
//! ```
//!
//! that is unitriangular over the monomial basis with respect to dominance
//! order; `J_tau = c_tau(alpha) P_tau` with the hook leading coefficient
//! `c_tau(alpha) = prod_{s in tau} (alpha a(s) + l(s) + 1)`, which makes the
//! coefficient of `m_{(1^n)}` equal to `n!` whenever `(1^n)` fits in the
//! variable count.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;
use thiserror::Error;

use super::monomial::{distinct_permutations, SymmetricPoly};
use super::partition::{partitions_of, Partition};
use super::scalar::Scalar;

#[derive(Debug, Error)]
pub enum JackError {
    #[error("partition has {len} parts but only {nvars} variables")]
    TooManyParts { len: usize, nvars: usize },
    #[error("weight {weight} exceeds the configured limit {limit}")]
    WeightLimit { weight: usize, limit: usize },
    #[error("jack parameter must be positive, got {0}")]
    BadParameter(f64),
}

/// Cap on `|tau|`; series evaluation may raise it via [`set_max_weight`].
static MAX_WEIGHT: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_WEIGHT);

pub const DEFAULT_MAX_WEIGHT: usize = 30;

pub fn set_max_weight(limit: usize) {
    MAX_WEIGHT.store(limit, Ordering::Relaxed);
}

pub fn max_weight() -> usize {
    MAX_WEIGHT.load(Ordering::Relaxed)
}

/// Laplace–Beltrami eigenvalue on the dominance-leading monomial:
/// `(alpha/2) sum lambda_i (lambda_i - 1) + sum (m - i) lambda_i`.
pub fn lb_eigenvalue<T: Scalar>(lambda: &Partition, alpha: &T, m: usize) -> T {
    let s1: i64 = lambda
        .parts()
        .iter()
        .map(|&p| (p * (p.saturating_sub(1))) as i64)
        .sum();
    let s2: i64 = lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &p)| ((m - 1 - i) * p) as i64)
        .sum();
    alpha.clone() * T::from_int(s1) / T::from_int(2) + T::from_int(s2)
}

/// `D(alpha)` applied to `m_lambda`, expanded over the monomial basis.
///
/// The pair terms act on the two-variable symmetrization
/// `x^a y^b + x^b y^a` (`a > b`) as
/// `a x^b y^b sum_{s=0}^{a-b} x^s y^{a-b-s}
///  - b x^{b+1} y^{b+1} sum_{s=0}^{a-b-2} x^s y^{a-b-2-s}`,
/// and as `a x^a y^a` when `a = b`; both follow from the telescoping of
/// `(x^{n+1} - y^{n+1})/(x - y)`.
pub fn lb_apply<T: Scalar>(lambda: &Partition, alpha: &T, m: usize) -> SymmetricPoly<T> {
    let n = lambda.weight();
    let mut acc: BTreeMap<Vec<usize>, T> = BTreeMap::new();
    let orbit = distinct_permutations(&lambda.padded(m));
    for v in &orbit {
        for i in 0..m {
            for j in (i + 1)..m {
                let (a, b) = (v[i].max(v[j]), v[i].min(v[j]));
                if v[i] < v[j] {
                    // the swapped vector handles this pair
                    continue;
                }
                if a == b {
                    if a > 0 {
                        add(&mut acc, v.clone(), T::from_int(a as i64));
                    }
                    continue;
                }
                for s in 0..=(a - b) {
                    let mut w = v.clone();
                    w[i] = b + s;
                    w[j] = a - s;
                    add(&mut acc, w, T::from_int(a as i64));
                }
                if b > 0 && a - b >= 2 {
                    for s in 0..=(a - b - 2) {
                        let mut w = v.clone();
                        w[i] = b + 1 + s;
                        w[j] = a - 1 - s;
                        add(&mut acc, w, -T::from_int(b as i64));
                    }
                }
            }
        }
    }

    let mut out = SymmetricPoly::zero(m, n);
    // the result is symmetric, so sorted exponent vectors carry the monomial
    // coefficients
    for (v, c) in acc {
        if v.windows(2).all(|w| w[0] >= w[1]) && !c.is_zero() {
            out.add_term(Partition::from_exponents(v), c);
        }
    }
    let s1: i64 = lambda
        .parts()
        .iter()
        .map(|&p| (p * (p.saturating_sub(1))) as i64)
        .sum();
    let diag = alpha.clone() * T::from_int(s1) / T::from_int(2);
    if !diag.is_zero() {
        out.add_term(lambda.clone(), diag);
    }
    out
}

fn add<T: Scalar>(acc: &mut BTreeMap<Vec<usize>, T>, key: Vec<usize>, c: T) {
    let e = acc.entry(key).or_insert_with(T::zero);
    *e = e.clone() + c;
}

/// Hook leading coefficient `c_tau(alpha) = prod (alpha a(s) + l(s) + 1)`.
pub fn hook_leading_coeff<T: Scalar>(tau: &Partition, alpha: &T) -> T {
    let mut c = T::one();
    for (i, j) in tau.cells() {
        c = c * (alpha.clone() * T::from_int(tau.arm(i, j) as i64)
            + T::from_int(tau.leg(i, j) as i64 + 1));
    }
    c
}

/// `J_tau(1_m) = prod_{(i,j) in tau} (m - (i-1) + alpha (j-1))`.
pub fn jack_at_ones<T: Scalar>(tau: &Partition, alpha: &T, m: usize) -> T {
    let mut v = T::one();
    for (i, j) in tau.cells() {
        v = v * (T::from_int(m as i64 - (i as i64 - 1)) + alpha.clone() * T::from_int(j as i64 - 1));
    }
    v
}

/// J-normalized Jack polynomial over the monomial basis.
pub fn jack<T: Scalar>(tau: &Partition, alpha: &T, m: usize) -> Result<SymmetricPoly<T>, JackError> {
    if tau.len() > m {
        return Err(JackError::TooManyParts {
            len: tau.len(),
            nvars: m,
        });
    }
    let n = tau.weight();
    let limit = max_weight();
    if n > limit {
        return Err(JackError::WeightLimit { weight: n, limit });
    }
    if n == 0 {
        return Ok(SymmetricPoly::monomial(m, Partition::empty(), T::one()));
    }

    // basis: partitions of n dominated by tau, in descending lex order
    // (a linear extension of dominance), tau first
    let basis: Vec<Partition> = partitions_of(n, m)
        .into_iter()
        .filter(|mu| tau.dominates(mu))
        .collect();
    debug_assert_eq!(basis.first(), Some(tau));

    let actions: Vec<SymmetricPoly<T>> =
        basis.iter().map(|nu| lb_apply(nu, alpha, m)).collect();
    let d_tau = lb_eigenvalue(tau, alpha, m);

    let mut coeffs: Vec<T> = Vec::with_capacity(basis.len());
    coeffs.push(T::one());
    for (idx, mu) in basis.iter().enumerate().skip(1) {
        let mut rhs = T::zero();
        for (prev, nu_act) in actions.iter().enumerate().take(idx) {
            rhs = rhs + coeffs[prev].clone() * nu_act.coeff(mu);
        }
        let d_mu = lb_eigenvalue(mu, alpha, m);
        coeffs.push(rhs / (d_tau.clone() - d_mu));
    }

    let scale = hook_leading_coeff(tau, alpha);
    let mut out = SymmetricPoly::zero(m, n);
    for (mu, c) in basis.into_iter().zip(coeffs) {
        let v = c * scale.clone();
        if !v.is_zero() {
            out.add_term(mu, v);
        }
    }
    Ok(out)
}

type CacheKey = (usize, u64, Partition);
static F64_CACHE: Lazy<RwLock<HashMap<CacheKey, Arc<SymmetricPoly<f64>>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// Cached `f64` Jack polynomial.
pub fn jack_f64(tau: &Partition, alpha: f64, m: usize) -> Result<Arc<SymmetricPoly<f64>>, JackError> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(JackError::BadParameter(alpha));
    }
    let key = (m, alpha.to_bits(), tau.clone());
    if let Some(hit) = F64_CACHE.read().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let poly = Arc::new(jack(tau, &alpha, m)?);
    F64_CACHE
        .write()
        .unwrap()
        .entry(key)
        .or_insert_with(|| poly.clone());
    Ok(poly)
}

/// Numeric evaluation of `J_tau^(alpha)` at `x`.
pub fn jack_eval(tau: &Partition, alpha: f64, x: &[f64]) -> Result<f64, JackError> {
    Ok(jack_f64(tau, alpha, x.len())?.eval(x))
}
