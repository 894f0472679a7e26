//! Symmetric polynomials stored on the monomial basis `m_lambda`.

use std::collections::BTreeMap;


use super::partition::Partition;
use super::scalar::Scalar;

/// A homogeneous symmetric polynomial in `nvars` variables, as coefficients
/// over the monomial symmetric basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricPoly<T: Scalar> {
    nvars: usize,
    degree: usize,
    coeffs: BTreeMap<Partition, T>,
}

impl<T: Scalar> SymmetricPoly<T> {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        SymmetricPoly {
            nvars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(nvars: usize, lambda: Partition, coeff: T) -> Self {
        assert!(lambda.len() <= nvars);
        let degree = lambda.weight();
        let mut p = SymmetricPoly::zero(nvars, degree);
        p.add_term(lambda, coeff);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, T> {
        &self.coeffs
    }

    pub fn coeff(&self, lambda: &Partition) -> T {
        self.coeffs.get(lambda).cloned().unwrap_or_else(T::zero)
    }

    pub fn add_term(&mut self, lambda: Partition, coeff: T) {
        debug_assert_eq!(lambda.weight(), self.degree);
        debug_assert!(lambda.len() <= self.nvars);
        let entry = self.coeffs.entry(lambda).or_insert_with(T::zero);
        *entry = entry.clone() + coeff;
        // keep the map sparse so equality comparisons are canonical
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    pub fn scale(&self, c: &T) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(l, v)| (l.clone(), v.clone() * c.clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        SymmetricPoly {
            nvars: self.nvars,
            degree: self.degree,
            coeffs,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (l, c) in &other.coeffs {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    /// Product, expanded through exponent vectors. Exponential in `nvars`;
    /// used only at oracle/test scale.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<Vec<usize>, T> = BTreeMap::new();
        for (la, ca) in &self.coeffs {
            for va in distinct_permutations(&la.padded(self.nvars)) {
                for (lb, cb) in &other.coeffs {
                    for vb in distinct_permutations(&lb.padded(self.nvars)) {
                        let key: Vec<usize> =
                            va.iter().zip(&vb).map(|(a, b)| a + b).collect();
                        let e = acc.entry(key).or_insert_with(T::zero);
                        *e = e.clone() + ca.clone() * cb.clone();
                    }
                }
            }
        }
        let mut out = SymmetricPoly::zero(self.nvars, self.degree + other.degree);
        for (v, c) in acc {
            if v.windows(2).all(|w| w[0] >= w[1]) && !c.is_zero() {
                out.add_term(Partition::from_exponents(v), c);
            }
        }
        out
    }

    pub fn eval(&self, x: &[T]) -> T {
        assert_eq!(x.len(), self.nvars, "dimension mismatch");
        let mut total = T::zero();
        for (lambda, c) in &self.coeffs {
            total = total + c.clone() * eval_monomial_symmetric(lambda, x);
        }
        total
    }
}

/// `m_lambda(x)`: sum over the distinct permutations of the padded exponent
/// vector.
pub fn eval_monomial_symmetric<T: Scalar>(lambda: &Partition, x: &[T]) -> T {
    let padded = lambda.padded(x.len());
    let mut total = T::zero();
    for perm in distinct_permutations(&padded) {
        let mut term = T::one();
        for (xi, &e) in x.iter().zip(&perm) {
            term = term * pow(xi, e);
        }
        total = total + term;
    }
    total
}

fn pow<T: Scalar>(base: &T, mut exp: usize) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        exp >>= 1;
    }
    acc
}

/// Distinct permutations of a multiset, in no particular order.
pub fn distinct_permutations(values: &[usize]) -> Vec<Vec<usize>> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(values.len());
    build(values.len(), &mut counts, &mut current, &mut out);
    out
}

fn build(
    remaining: usize,
    counts: &mut BTreeMap<usize, usize>,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    let keys: Vec<usize> = counts
        .iter()
        .filter(|(_, &c)| c > 0)
        .map(|(&k, _)| k)
        .collect();
    for k in keys {
        *counts.get_mut(&k).unwrap() -= 1;
        current.push(k);
        build(remaining - 1, counts, current, out);
        current.pop();
        *counts.get_mut(&k).unwrap() += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distinct_permutation_counts() {
        assert_eq!(distinct_permutations(&[2, 1, 0]).len(), 6);
        assert_eq!(distinct_permutations(&[1, 1, 0]).len(), 3);
        assert_eq!(distinct_permutations(&[2, 2]).len(), 1);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }

    #[test]
    fn monomial_eval() {
        let m1 = Partition::new(vec![1]);
        assert_eq!(eval_monomial_symmetric(&m1, &[1.0, 1.0]), 2.0);
        let m21 = Partition::new(vec![2, 1]);
        // x^2 y + x y^2 at (2,3) = 12 + 18 = 30
        assert_eq!(eval_monomial_symmetric(&m21, &[2.0, 3.0]), 30.0);
        let m11 = Partition::new(vec![1, 1]);
        assert_eq!(eval_monomial_symmetric(&m11, &[2.0, 3.0, 4.0]), 26.0);
    }

    #[test]
    fn poly_arithmetic() {
        let m = 2;
        let p = SymmetricPoly::monomial(m, Partition::new(vec![1]), 1.0);
        let sq = p.mul(&p);
        // (x+y)^2 = m_(2) + 2 m_(1,1)
        assert_eq!(sq.coeff(&Partition::new(vec![2])), 1.0);
        assert_eq!(sq.coeff(&Partition::new(vec![1, 1])), 2.0);
        assert_eq!(sq.eval(&[1.0, 2.0]), 9.0);
    }
}
