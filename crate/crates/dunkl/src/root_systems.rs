//! Root systems `A_{m-1}`, `B_m`, `C_m`, `D_m` and the non-reduced `BC_m`,
//! with positive/simple systems, reflections, Weyl-group orbits, chamber
//! margins and (for `BC_m`/`C_m`) the principal Weyl alcove.
//!
//! Roots are stored with exact integer coordinates (entries in
//! `{-2,-1,0,1,2}`), so reflections and set membership are exact. Orbits are
//! computed by closure under all reflections rather than from hard-coded
//! tables.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

/// Root-system family label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    BC,
}

impl Family {
    pub fn is_reduced(self) -> bool {
        !matches!(self, Family::BC)
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::B => write!(f, "B"),
            Family::C => write!(f, "C"),
            Family::D => write!(f, "D"),
            Family::BC => write!(f, "BC"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = RootSystemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "BC" => Ok(Family::BC),
            other => Err(RootSystemError::UnknownFamily(other.to_string())),
        }
    }
}

/// A root with exact integer coordinates in the standard basis `e_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Vec<i64>,
}

impl Root {
    pub fn new(coords: Vec<i64>) -> Self {
        debug_assert!(coords.iter().any(|&c| c != 0), "root must be nonzero");
        Root { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `<alpha, alpha>` as an integer.
    pub fn norm_sq(&self) -> i64 {
        self.coords.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// `<alpha, x>` for a real point `x`.
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.coords
            .iter()
            .zip(x)
            .map(|(&c, &xi)| c as f64 * xi)
            .sum()
    }

    fn dot_int(&self, other: &Root) -> i64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn negated(&self) -> Root {
        Root::new(self.coords.iter().map(|c| -c).collect())
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|&c| c as f64).collect()
    }
}

impl std::fmt::Display for Root {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{}e{}", sign, i + 1)?;
            } else {
                write!(f, "{}{}e{}", sign, mag, i + 1)?;
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum RootSystemError {
    #[error("unknown root-system family `{0}`")]
    UnknownFamily(String),
    #[error("unsupported combination: family {family} with rank {rank}")]
    Unsupported { family: Family, rank: usize },
    #[error("{0} is not a root of this system")]
    NotARoot(String),
    #[error("family {0} has no Weyl alcove support")]
    NoAlcove(Family),
    #[error("multiplicity must be nonnegative, got {0}")]
    NegativeMultiplicity(f64),
    #[error("multiplicity function has {got} orbit values, system has {expected} orbits")]
    OrbitCountMismatch { got: usize, expected: usize },
}

/// Identifier of a Weyl-group conjugacy class of roots.
pub type OrbitId = usize;

/// An immutable root system with positive and simple subsystems, orbit
/// partition and (when defined) the highest root.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub family: Family,
    /// Number of coordinates of the ambient space (`m`; `A` uses `A_{m-1}`
    /// realized in `R^m`).
    pub rank: usize,
    roots: Vec<Root>,
    root_index: HashMap<Root, usize>,
    positive: Vec<Root>,
    simple: Vec<Root>,
    /// orbit id of `roots[i]`.
    orbit_of_root: Vec<OrbitId>,
    n_orbits: usize,
    highest: Option<Root>,
}

impl RootSystem {
    /// Build the root system of the given family and rank from the standard
    /// listings. `A` requires `m >= 2` and `D` requires `m >= 3` (for
    /// `m <= 2` those systems are degenerate or reducible).
    pub fn build(family: Family, m: usize) -> Result<RootSystem, RootSystemError> {
        let bad = |f, r| Err(RootSystemError::Unsupported { family: f, rank: r });
        match family {
            Family::A if m < 2 => return bad(family, m),
            Family::D if m < 3 => return bad(family, m),
            Family::B | Family::C | Family::BC if m < 1 => return bad(family, m),
            _ if m == 0 => return bad(family, m),
            _ => {}
        }

        let e = |i: usize| -> Vec<i64> {
            let mut v = vec![0i64; m];
            v[i] = 1;
            v
        };
        let add = |a: &[i64], b: &[i64], s: i64| -> Vec<i64> {
            a.iter().zip(b).map(|(x, y)| x + s * y).collect()
        };

        let mut positive: Vec<Root> = Vec::new();
        let mut simple: Vec<Root> = Vec::new();
        let mut highest = None;

        match family {
            Family::A => {
                for i in 0..m {
                    for j in (i + 1)..m {
                        positive.push(Root::new(add(&e(i), &e(j), -1)));
                    }
                }
                for i in 0..m - 1 {
                    simple.push(Root::new(add(&e(i), &e(i + 1), -1)));
                }
            }
            Family::B => {
                for i in 0..m {
                    positive.push(Root::new(e(i)));
                }
                for i in 0..m {
                    for j in (i + 1)..m {
                        positive.push(Root::new(add(&e(i), &e(j), -1)));
                        positive.push(Root::new(add(&e(i), &e(j), 1)));
                    }
                }
                for i in 0..m - 1 {
                    simple.push(Root::new(add(&e(i), &e(i + 1), -1)));
                }
                simple.push(Root::new(e(m - 1)));
            }
            Family::C => {
                for i in 0..m {
                    let mut v = e(i);
                    v[i] = 2;
                    positive.push(Root::new(v));
                }
                for i in 0..m {
                    for j in (i + 1)..m {
                        positive.push(Root::new(add(&e(i), &e(j), -1)));
                        positive.push(Root::new(add(&e(i), &e(j), 1)));
                    }
                }
                for i in 0..m - 1 {
                    simple.push(Root::new(add(&e(i), &e(i + 1), -1)));
                }
                let mut long = e(m - 1);
                long[m - 1] = 2;
                simple.push(Root::new(long));
                let mut h = vec![0i64; m];
                h[0] = 2;
                highest = Some(Root::new(h));
            }
            Family::D => {
                for i in 0..m {
                    for j in (i + 1)..m {
                        positive.push(Root::new(add(&e(i), &e(j), -1)));
                        positive.push(Root::new(add(&e(i), &e(j), 1)));
                    }
                }
                for i in 0..m - 1 {
                    simple.push(Root::new(add(&e(i), &e(i + 1), -1)));
                }
                simple.push(Root::new(add(&e(m - 2), &e(m - 1), 1)));
            }
            Family::BC => {
                for i in 0..m {
                    positive.push(Root::new(e(i)));
                    let mut v = e(i);
                    v[i] = 2;
                    positive.push(Root::new(v));
                }
                for i in 0..m {
                    for j in (i + 1)..m {
                        positive.push(Root::new(add(&e(i), &e(j), -1)));
                        positive.push(Root::new(add(&e(i), &e(j), 1)));
                    }
                }
                for i in 0..m - 1 {
                    simple.push(Root::new(add(&e(i), &e(i + 1), -1)));
                }
                simple.push(Root::new(e(m - 1)));
                let mut h = vec![0i64; m];
                h[0] = 2;
                highest = Some(Root::new(h));
            }
        }

        let mut roots: Vec<Root> = Vec::with_capacity(2 * positive.len());
        for r in &positive {
            roots.push(r.clone());
        }
        for r in &positive {
            roots.push(r.negated());
        }
        let root_index: HashMap<Root, usize> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();

        let (orbit_of_root, n_orbits) = compute_orbits(&roots, &root_index);

        Ok(RootSystem {
            family,
            rank: m,
            roots,
            root_index,
            positive,
            simple,
            orbit_of_root,
            n_orbits,
            highest,
        })
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive(&self) -> &[Root] {
        &self.positive
    }

    pub fn simple(&self) -> &[Root] {
        &self.simple
    }

    pub fn n_orbits(&self) -> usize {
        self.n_orbits
    }

    /// Highest positive root; defined for the `C` and `BC` families.
    pub fn highest(&self) -> Option<&Root> {
        self.highest.as_ref()
    }

    pub fn contains(&self, alpha: &Root) -> bool {
        self.root_index.contains_key(alpha)
    }

    /// Label like "B2" or "BC3" used in reports.
    pub fn label(&self) -> String {
        match self.family {
            Family::A => format!("A{}", self.rank - 1),
            f => format!("{}{}", f, self.rank),
        }
    }

    /// Order of the Weyl group.
    pub fn weyl_order(&self) -> u64 {
        let m = self.rank as u64;
        let fact = |n: u64| (1..=n).product::<u64>();
        match self.family {
            Family::A => fact(m),
            Family::B | Family::C | Family::BC => fact(m) << m,
            Family::D => fact(m) << (m - 1),
        }
    }

    /// Reflection `sigma_alpha(x) = x - 2<alpha,x>/<alpha,alpha> alpha`.
    pub fn reflect(&self, alpha: &Root, x: &[f64]) -> Result<Vec<f64>, RootSystemError> {
        if !self.contains(alpha) {
            return Err(RootSystemError::NotARoot(alpha.to_string()));
        }
        Ok(reflect_point(alpha, x))
    }

    /// Exact reflection of a root in this system; always lands in the system.
    pub fn reflect_root(&self, alpha: &Root, beta: &Root) -> Result<Root, RootSystemError> {
        if !self.contains(alpha) || !self.contains(beta) {
            return Err(RootSystemError::NotARoot(alpha.to_string()));
        }
        Ok(reflect_root_exact(alpha, beta))
    }

    /// Signed distance of `x` to the walls of the positive Weyl chamber:
    /// `min over simple alpha of <alpha,x>/|alpha|`. Positive iff `x` lies in
    /// the open chamber, zero on the boundary.
    pub fn chamber_distance(&self, x: &[f64]) -> f64 {
        self.simple
            .iter()
            .map(|a| a.dot(x) / a.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Signed distance of `phi` (radians) to the walls of the principal Weyl
    /// alcove of `BC_m`/`C_m`: simple-root margins together with
    /// `(pi - <highest,phi>)/|highest|`.
    pub fn alcove_distance(&self, phi: &[f64]) -> Result<f64, RootSystemError> {
        let highest = match (self.family, &self.highest) {
            (Family::BC | Family::C, Some(h)) => h,
            _ => return Err(RootSystemError::NoAlcove(self.family)),
        };
        let simple_min = self.chamber_distance(phi);
        let affine = (std::f64::consts::PI - highest.dot(phi)) / highest.norm();
        Ok(simple_min.min(affine))
    }

    /// Orbit (Weyl conjugacy class) of a root.
    pub fn orbit_of(&self, alpha: &Root) -> Result<OrbitId, RootSystemError> {
        self.root_index
            .get(alpha)
            .map(|&i| self.orbit_of_root[i])
            .ok_or_else(|| RootSystemError::NotARoot(alpha.to_string()))
    }

    /// Orbit ids listed in the order of `positive()`.
    pub fn positive_orbits(&self) -> Vec<OrbitId> {
        self.positive
            .iter()
            .map(|r| self.orbit_of_root[self.root_index[r]])
            .collect()
    }
}

fn reflect_point(alpha: &Root, x: &[f64]) -> Vec<f64> {
    let c = 2.0 * alpha.dot(x) / alpha.norm_sq() as f64;
    x.iter()
        .zip(&alpha.coords)
        .map(|(&xi, &ai)| xi - c * ai as f64)
        .collect()
}

fn reflect_root_exact(alpha: &Root, beta: &Root) -> Root {
    // 2<alpha,beta>/<alpha,alpha> is an integer for crystallographic systems.
    let num = 2 * alpha.dot_int(beta);
    let den = alpha.norm_sq();
    debug_assert_eq!(num % den, 0);
    let c = num / den;
    Root::new(
        beta.coords
            .iter()
            .zip(&alpha.coords)
            .map(|(b, a)| b - c * a)
            .collect(),
    )
}

/// BFS closure of the reflection action; returns (orbit id per root, count).
fn compute_orbits(roots: &[Root], index: &HashMap<Root, usize>) -> (Vec<OrbitId>, usize) {
    let mut orbit = vec![usize::MAX; roots.len()];
    let mut next_id = 0;
    for start in 0..roots.len() {
        if orbit[start] != usize::MAX {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        orbit[start] = next_id;
        while let Some(i) = queue.pop_front() {
            for alpha in roots {
                let image = reflect_root_exact(alpha, &roots[i]);
                let j = index[&image];
                if orbit[j] == usize::MAX {
                    orbit[j] = next_id;
                    queue.push_back(j);
                }
            }
        }
        next_id += 1;
    }
    (orbit, next_id)
}

/// W-invariant nonnegative multiplicity function, one value per orbit.
#[derive(Debug, Clone)]
pub struct MultiplicityFunction {
    values: Vec<f64>,
}

impl MultiplicityFunction {
    /// One value per orbit, in orbit-id order.
    pub fn new(rs: &RootSystem, values: Vec<f64>) -> Result<Self, RootSystemError> {
        if values.len() != rs.n_orbits() {
            return Err(RootSystemError::OrbitCountMismatch {
                got: values.len(),
                expected: rs.n_orbits(),
            });
        }
        if let Some(&v) = values.iter().find(|v| **v < 0.0 || !v.is_finite()) {
            return Err(RootSystemError::NegativeMultiplicity(v));
        }
        Ok(MultiplicityFunction { values })
    }

    /// Constant multiplicity on every orbit.
    pub fn constant(rs: &RootSystem, k: f64) -> Result<Self, RootSystemError> {
        Self::new(rs, vec![k; rs.n_orbits()])
    }

    /// `B_m` multiplicities: `k0` on the short roots `e_i`, `k1` on
    /// `e_i ± e_j`.
    pub fn for_b(rs: &RootSystem, k0: f64, k1: f64) -> Result<Self, RootSystemError> {
        debug_assert_eq!(rs.family, Family::B);
        let mut values = vec![0.0; rs.n_orbits()];
        for (root, orbit) in rs.positive().iter().zip(rs.positive_orbits()) {
            values[orbit] = if root.norm_sq() == 1 { k0 } else { k1 };
        }
        Self::new(rs, values)
    }

    /// `BC_m` multiplicities from the beta-Jacobi drift parameters
    /// `(k0, k1, k2)`: `k0` on `e_i`, `k1/2` on `2e_i`, `k2` on `e_i ± e_j`.
    /// `B_1` has one orbit (`{±e_1}`), so `m = 1` is supported with the
    /// `e_i ± e_j` class empty.
    pub fn for_bc(rs: &RootSystem, k0: f64, k1: f64, k2: f64) -> Result<Self, RootSystemError> {
        debug_assert_eq!(rs.family, Family::BC);
        let mut values = vec![0.0; rs.n_orbits()];
        for (root, orbit) in rs.positive().iter().zip(rs.positive_orbits()) {
            values[orbit] = match root.norm_sq() {
                1 => k0,
                4 => k1 / 2.0,
                _ => k2,
            };
        }
        Self::new(rs, values)
    }

    pub fn value(&self, orbit: OrbitId) -> f64 {
        self.values[orbit]
    }

    /// Index `l(alpha) = k(alpha) - 1/2` per orbit.
    pub fn index(&self, orbit: OrbitId) -> f64 {
        self.values[orbit] - 0.5
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `gamma = sum over positive roots of k(alpha)`.
    pub fn gamma(&self, rs: &RootSystem) -> f64 {
        rs.positive_orbits()
            .into_iter()
            .map(|o| self.values[o])
            .sum()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn all_small_systems() -> Vec<RootSystem> {
        let mut out = Vec::new();
        for m in 2..=5 {
            out.push(RootSystem::build(Family::A, m).unwrap());
        }
        for m in 1..=5 {
            out.push(RootSystem::build(Family::B, m).unwrap());
            out.push(RootSystem::build(Family::C, m).unwrap());
            out.push(RootSystem::build(Family::BC, m).unwrap());
        }
        for m in 3..=5 {
            out.push(RootSystem::build(Family::D, m).unwrap());
        }
        out
    }

    #[test]
    fn positive_root_and_orbit_counts() {
        for rs in all_small_systems() {
            let m = rs.rank;
            let (expect_pos, expect_orbits) = match rs.family {
                Family::A => (m * (m - 1) / 2, 1),
                Family::B | Family::C => (m * m, if m == 1 { 1 } else { 2 }),
                Family::D => (m * (m - 1), 1),
                Family::BC => (m * m + m, if m == 1 { 2 } else { 3 }),
            };
            assert_eq!(rs.positive().len(), expect_pos, "{}", rs.label());
            assert_eq!(rs.n_orbits(), expect_orbits, "{}", rs.label());
        }
    }

    #[test]
    fn reflection_closure_axiom() {
        for rs in all_small_systems() {
            for alpha in rs.roots() {
                for beta in rs.roots() {
                    let image = rs.reflect_root(alpha, beta).unwrap();
                    assert!(rs.contains(&image), "{}: sigma_{}({})", rs.label(), alpha, beta);
                }
            }
        }
    }

    #[test]
    fn reduced_systems_have_two_multiples_per_line() {
        for rs in all_small_systems() {
            if !rs.family.is_reduced() {
                continue;
            }
            for alpha in rs.roots() {
                let on_line = rs
                    .roots()
                    .iter()
                    .filter(|beta| {
                        // Cauchy-Schwarz equality <=> beta parallel to alpha.
                        let d = alpha.dot_int(beta);
                        d * d == alpha.norm_sq() * beta.norm_sq()
                    })
                    .count();
                assert_eq!(on_line, 2, "{}: line through {}", rs.label(), alpha);
            }
        }
    }

    #[test]
    fn simple_spans_positive_with_nonnegative_integers() {
        for rs in all_small_systems() {
            let simple: Vec<Vec<f64>> = rs.simple().iter().map(|r| r.as_f64()).collect();
            let m = rs.rank;
            let n = simple.len();
            let basis = nalgebra::DMatrix::from_fn(m, n, |i, j| simple[j][i]);
            let svd = basis.clone().svd(true, true);
            for root in rs.positive() {
                let b = nalgebra::DVector::from_vec(root.as_f64());
                let coeffs = svd.solve(&b, 1e-12).unwrap();
                let recon = &basis * &coeffs;
                assert!((recon - &b).norm() < 1e-9, "{}: {}", rs.label(), root);
                for c in coeffs.iter() {
                    assert!(*c > -1e-9, "{}: {} coeff {}", rs.label(), root, c);
                    assert!((c - c.round()).abs() < 1e-9 || rs.family == Family::BC);
                }
            }
        }
    }

    #[test]
    fn build_examples_from_listings() {
        let b2 = RootSystem::build(Family::B, 2).unwrap();
        let pos: HashSet<Vec<i64>> = b2.positive().iter().map(|r| r.coords.clone()).collect();
        let expected: HashSet<Vec<i64>> =
            [vec![1, 0], vec![0, 1], vec![1, -1], vec![1, 1]].into_iter().collect();
        assert_eq!(pos, expected);
        assert_eq!(b2.n_orbits(), 2);

        let a2 = RootSystem::build(Family::A, 3).unwrap();
        let pos: HashSet<Vec<i64>> = a2.positive().iter().map(|r| r.coords.clone()).collect();
        let expected: HashSet<Vec<i64>> =
            [vec![1, -1, 0], vec![1, 0, -1], vec![0, 1, -1]].into_iter().collect();
        assert_eq!(pos, expected);

        let bc2 = RootSystem::build(Family::BC, 2).unwrap();
        assert_eq!(bc2.highest().unwrap().coords, vec![2, 0]);

        assert!(RootSystem::build(Family::A, 1).is_err());
        assert!(RootSystem::build(Family::D, 2).is_err());
    }

    #[test]
    fn reflect_examples() {
        let b2 = RootSystem::build(Family::B, 2).unwrap();
        let swap = Root::new(vec![1, -1]);
        assert_eq!(b2.reflect(&swap, &[3.0, 5.0]).unwrap(), vec![5.0, 3.0]);
        let e2 = Root::new(vec![0, 1]);
        assert_eq!(b2.reflect(&e2, &[1.0, 4.0]).unwrap(), vec![1.0, -4.0]);
        // fixed hyperplane
        assert_eq!(b2.reflect(&swap, &[2.0, 2.0]).unwrap(), vec![2.0, 2.0]);
        // not a root
        assert!(b2.reflect(&Root::new(vec![3, 0]), &[1.0, 0.0]).is_err());
    }

    #[test]
    fn chamber_distance_examples() {
        let b2 = RootSystem::build(Family::B, 2).unwrap();
        let d = b2.chamber_distance(&[2.0, 1.0]);
        assert!((d - 1.0 / 2f64.sqrt()).abs() < 1e-14);

        let a2 = RootSystem::build(Family::A, 3).unwrap();
        assert!(a2.chamber_distance(&[1.0, 1.0, 0.0]).abs() < 1e-14);
        assert!(a2.chamber_distance(&[0.0, 1.0, 0.0]) < 0.0);
    }

    #[test]
    fn chamber_distance_positive_iff_all_positive_roots_positive() {
        let b3 = RootSystem::build(Family::B, 3).unwrap();
        let pts = [
            [2.0, 1.0, 0.5],
            [1.0, 2.0, 0.5],
            [3.0, -0.1, -1.0],
            [0.2, 0.1, 0.05],
        ];
        for x in pts {
            let inside = b3.chamber_distance(&x) > 0.0;
            let all_pos = b3.positive().iter().all(|a| a.dot(&x) > 0.0);
            assert_eq!(inside, all_pos, "{:?}", x);
        }
    }

    #[test]
    fn alcove_distance_examples() {
        use std::f64::consts::PI;
        let bc2 = RootSystem::build(Family::BC, 2).unwrap();
        assert!(bc2.alcove_distance(&[1.2, 0.6]).unwrap() > 0.0);
        assert!(bc2.alcove_distance(&[PI / 2.0, 0.6]).unwrap().abs() < 1e-14);
        assert!(bc2.alcove_distance(&[PI / 3.0, PI / 6.0]).unwrap() > 0.0);
        let b2 = RootSystem::build(Family::B, 2).unwrap();
        assert!(b2.alcove_distance(&[0.3, 0.1]).is_err());
    }

    #[test]
    fn orbit_examples() {
        let b2 = RootSystem::build(Family::B, 2).unwrap();
        let e1 = Root::new(vec![1, 0]);
        let e2 = Root::new(vec![0, 1]);
        let diff = Root::new(vec![1, -1]);
        assert_eq!(b2.orbit_of(&e1).unwrap(), b2.orbit_of(&e2).unwrap());
        assert_ne!(b2.orbit_of(&e1).unwrap(), b2.orbit_of(&diff).unwrap());

        let a2 = RootSystem::build(Family::A, 3).unwrap();
        let ids: HashSet<_> = a2.roots().iter().map(|r| a2.orbit_of(r).unwrap()).collect();
        assert_eq!(ids.len(), 1);

        let bc2 = RootSystem::build(Family::BC, 2).unwrap();
        let o1 = bc2.orbit_of(&Root::new(vec![1, 0])).unwrap();
        let o2 = bc2.orbit_of(&Root::new(vec![2, 0])).unwrap();
        let o3 = bc2.orbit_of(&Root::new(vec![1, -1])).unwrap();
        assert!(o1 != o2 && o1 != o3 && o2 != o3);
    }

    #[test]
    fn simple_reflection_permutes_other_positive_roots() {
        for rs in all_small_systems() {
            if !rs.family.is_reduced() {
                continue;
            }
            for alpha0 in rs.simple() {
                let others: HashSet<Root> = rs
                    .positive()
                    .iter()
                    .filter(|r| *r != alpha0)
                    .cloned()
                    .collect();
                let image: HashSet<Root> = others
                    .iter()
                    .map(|r| rs.reflect_root(alpha0, r).unwrap())
                    .collect();
                assert_eq!(others, image, "{}: alpha0={}", rs.label(), alpha0);
            }
        }
    }

    #[test]
    fn highest_root_dominance_bc() {
        for m in 1..=5 {
            let rs = RootSystem::build(Family::BC, m).unwrap();
            let highest = rs.highest().unwrap().as_f64();
            let simple: Vec<Vec<f64>> = rs.simple().iter().map(|r| r.as_f64()).collect();
            let basis = nalgebra::DMatrix::from_fn(m, simple.len(), |i, j| simple[j][i]);
            let svd = basis.svd(true, true);
            for alpha in rs.positive() {
                let diff: Vec<f64> = highest
                    .iter()
                    .zip(alpha.as_f64())
                    .map(|(h, a)| h - a)
                    .collect();
                let coeffs = svd
                    .solve(&nalgebra::DVector::from_vec(diff), 1e-12)
                    .unwrap();
                for c in coeffs.iter() {
                    assert!(*c > -1e-9, "BC{}: alpha={}", m, alpha);
                }
            }
        }
    }

    #[test]
    fn multiplicity_functions() {
        let b2 = RootSystem::build(Family::B, 2).unwrap();
        let k = MultiplicityFunction::for_b(&b2, 0.25, 0.75).unwrap();
        let o_short = b2.orbit_of(&Root::new(vec![1, 0])).unwrap();
        let o_long = b2.orbit_of(&Root::new(vec![1, 1])).unwrap();
        assert_eq!(k.value(o_short), 0.25);
        assert_eq!(k.value(o_long), 0.75);
        assert_eq!(k.index(o_short), -0.25);
        assert!((k.gamma(&b2) - (2.0 * 0.25 + 2.0 * 0.75)).abs() < 1e-15);

        assert!(MultiplicityFunction::new(&b2, vec![1.0]).is_err());
        assert!(MultiplicityFunction::new(&b2, vec![1.0, -0.5]).is_err());

        let bc2 = RootSystem::build(Family::BC, 2).unwrap();
        let k = MultiplicityFunction::for_bc(&bc2, 1.0, 2.0, 1.0).unwrap();
        let o_e = bc2.orbit_of(&Root::new(vec![1, 0])).unwrap();
        let o_2e = bc2.orbit_of(&Root::new(vec![2, 0])).unwrap();
        assert_eq!(k.value(o_e), 1.0);
        assert_eq!(k.value(o_2e), 1.0); // k1/2
    }
}
