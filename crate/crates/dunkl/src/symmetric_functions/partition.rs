//! Integer partitions: the index set for Jack polynomials and for the
//! degree shells of the multivariate hypergeometric series.

use serde::{Deserialize, Serialize};

/// A weakly decreasing list of positive integers. The derived `Ord` is
/// lexicographic on the parts, which linearly extends dominance order among
/// partitions of equal weight (descending lex refines descending dominance).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Panics unless the parts are positive and weakly decreasing.
    pub fn new(parts: Vec<usize>) -> Self {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p > 0),
            "parts must be positive and weakly decreasing: {:?}",
            parts
        );
        Partition { parts }
    }

    /// Sorts and strips zeros; accepts any exponent multiset.
    pub fn from_exponents(mut exps: Vec<usize>) -> Self {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        exps.retain(|&e| e > 0);
        Partition { parts: exps }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `|tau|`.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `l(tau)`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length `m`. Panics if `l(tau) > m`.
    pub fn padded(&self, m: usize) -> Vec<usize> {
        assert!(self.parts.len() <= m, "partition longer than {} variables", m);
        let mut out = self.parts.clone();
        out.resize(m, 0);
        out
    }

    pub fn conjugate(&self) -> Partition {
        if self.parts.is_empty() {
            return Partition::empty();
        }
        let cols = self.parts[0];
        let parts = (1..=cols)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        Partition { parts }
    }

    /// Arm length of the cell `(i, j)` (1-based row/column).
    pub fn arm(&self, i: usize, j: usize) -> usize {
        self.parts[i - 1] - j
    }

    /// Leg length of the cell `(i, j)`.
    pub fn leg(&self, i: usize, j: usize) -> usize {
        self.parts.iter().skip(i).filter(|&&p| p >= j).count()
    }

    /// Cells `(i, j)` of the Young diagram, 1-based.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (1..=p).map(move |j| (i + 1, j)))
    }

    /// Dominance order among partitions of equal weight; false when weights
    /// differ.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let mut a = 0usize;
        let mut b = 0usize;
        for i in 0..self.parts.len().max(other.parts.len()) {
            a += self.part(i);
            b += other.part(i);
            if a < b {
                return false;
            }
        }
        true
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", p)?;
        }
        write!(f, ")")
    }
}

/// All partitions of weight `n` with at most `max_len` parts, in descending
/// lexicographic order.
pub fn partitions_of(n: usize, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut stack = Vec::new();
    rec(n, n, max_len, &mut stack, &mut out);
    out
}

fn rec(n: usize, max_part: usize, max_len: usize, stack: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if n == 0 {
        out.push(Partition {
            parts: stack.clone(),
        });
        return;
    }
    if max_len == 0 {
        return;
    }
    // first part k must satisfy k*max_len >= n
    let lo = n.div_ceil(max_len);
    for k in (lo..=max_part.min(n)).rev() {
        stack.push(k);
        rec(n - k, k, max_len - 1, stack, out);
        stack.pop();
    }
}
