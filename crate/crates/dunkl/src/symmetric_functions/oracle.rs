//! Independent Gram–Schmidt construction of Jack polynomials, used to
//! cross-check the Laplace–Beltrami solver.
//!
//! Works in the Jack inner product `<p_lambda, p_mu> = delta alpha^{l} z_lambda`
//! on power sums, with exact rational arithmetic throughout. The computation
//! runs in `n = |tau|` variables (where degree-`n` symmetric functions embed
//! faithfully), is normalized by the `m_{(1^n)}` coefficient `= n!`, and is
//! then restricted to the requested variable count. Exponential cost: oracle
//! scale only (`|tau| <= ~6`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::monomial::SymmetricPoly;
use super::partition::{partitions_of, Partition};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `z_lambda = prod r^{m_r} m_r!` over part multiplicities.
fn z_factor(lambda: &Partition) -> BigRational {
    let mut mult: BTreeMap<usize, usize> = BTreeMap::new();
    for &p in lambda.parts() {
        *mult.entry(p).or_insert(0) += 1;
    }
    let mut z = BigRational::one();
    for (r, m) in mult {
        for _ in 0..m {
            z *= int(r as i64);
        }
        for i in 1..=m {
            z *= int(i as i64);
        }
    }
    z
}

/// Power sum `p_lambda` expanded over the monomial basis in `nvars` vars.
fn power_sum(lambda: &Partition, nvars: usize) -> SymmetricPoly<BigRational> {
    let mut acc = SymmetricPoly::monomial(nvars, Partition::empty(), BigRational::one());
    for &r in lambda.parts() {
        let pr = SymmetricPoly::monomial(nvars, Partition::new(vec![r]), BigRational::one());
        acc = acc.mul(&pr);
    }
    acc
}

/// Exact solve of `A x = b` by Gaussian elimination.
fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular change-of-basis matrix");
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / inv.clone();
            for c in col..n {
                let t = a[col][c].clone() * f.clone();
                a[r][c] -= t;
            }
            let t = b[col].clone() * f;
            b[r] -= t;
        }
    }
    (0..n)
        .map(|i| b[i].clone() / a[i][i].clone())
        .collect()
}

/// J-normalized Jack polynomial by Gram–Schmidt orthogonalization of the
/// monomial basis in dominance order, restricted to `m` variables.
pub fn jack_via_gram_schmidt(
    tau: &Partition,
    alpha: &BigRational,
    m: usize,
) -> SymmetricPoly<BigRational> {
    assert!(tau.len() <= m);
    let n = tau.weight();
    if n == 0 {
        return SymmetricPoly::monomial(m, Partition::empty(), BigRational::one());
    }
    let nv = n; // enough variables for a faithful degree-n picture

    // descending lex; every linear extension of dominance gives the same
    // orthogonal family
    let basis = partitions_of(n, nv);
    let np = basis.len();

    // p_lambda over monomials: rows lambda, cols mu
    let p_in_m: Vec<SymmetricPoly<BigRational>> =
        basis.iter().map(|l| power_sum(l, nv)).collect();

    // m_mu over power sums, column by column: solve P^T c = e_mu where
    // P[l][u] = coeff of m_u in p_l
    let pt: Vec<Vec<BigRational>> = (0..np)
        .map(|u| (0..np).map(|l| p_in_m[l].coeff(&basis[u])).collect())
        .collect();
    let m_in_p: Vec<Vec<BigRational>> = (0..np)
        .map(|u| {
            let mut e = vec![BigRational::zero(); np];
            e[u] = BigRational::one();
            solve_exact(pt.clone(), e)
        })
        .collect();

    // Gram matrix of the monomial basis in the Jack inner product
    let weights: Vec<BigRational> = basis
        .iter()
        .map(|l| {
            let mut w = z_factor(l);
            for _ in 0..l.len() {
                w *= alpha.clone();
            }
            w
        })
        .collect();
    let inner = |u: usize, v: usize| -> BigRational {
        (0..np)
            .map(|l| m_in_p[u][l].clone() * m_in_p[v][l].clone() * weights[l].clone())
            .fold(BigRational::zero(), |a, b| a + b)
    };
    let gram: Vec<Vec<BigRational>> = (0..np)
        .map(|u| (0..np).map(|v| inner(u, v)).collect())
        .collect();

    // Gram-Schmidt from the lex-smallest partition upward; represent each
    // orthogonal vector by its monomial coordinates
    let mut ortho: Vec<Vec<BigRational>> = Vec::with_capacity(np);
    let ip = |a: &[BigRational], b: &[BigRational]| -> BigRational {
        let mut s = BigRational::zero();
        for u in 0..np {
            if a[u].is_zero() {
                continue;
            }
            for v in 0..np {
                if b[v].is_zero() {
                    continue;
                }
                s += a[u].clone() * b[v].clone() * gram[u][v].clone();
            }
        }
        s
    };
    for idx in (0..np).rev() {
        let mut v = vec![BigRational::zero(); np];
        v[idx] = BigRational::one();
        for prev in &ortho {
            let c = ip(&v, prev) / ip(prev, prev);
            for u in 0..np {
                let t = prev[u].clone() * c.clone();
                v[u] -= t;
            }
        }
        ortho.push(v);
    }
    ortho.reverse(); // back to descending-lex indexing

    let tau_idx = basis.iter().position(|l| l == tau).unwrap();
    let raw = &ortho[tau_idx];

    // J-pin: coefficient of m_{(1^n)} is n!
    let ones_idx = basis
        .iter()
        .position(|l| *l == Partition::new(vec![1; n]))
        .unwrap();
    let fact: i64 = (1..=n as i64).product();
    let scale = int(fact) / raw[ones_idx].clone();

    let mut out = SymmetricPoly::zero(m, n);
    for (u, c) in raw.iter().enumerate() {
        if c.is_zero() || basis[u].len() > m {
            continue;
        }
        out.add_term(basis[u].clone(), c.clone() * scale.clone());
    }
    out
}
