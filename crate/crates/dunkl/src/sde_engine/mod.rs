//! Euler-Maruyama simulation of radial Dunkl, beta-Laguerre and beta-Jacobi
//! processes with recursive substep halving near the domain walls.
//!
//! Paths are driven by per-path ChaCha streams so that results are
//! reproducible bit for bit for a given seed, independent of how many worker
//! threads run the Monte Carlo loops. Substeps refine the Brownian increment
//! with a Brownian bridge, so a path consumes noise in a deterministic order.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use thiserror::Error;

use crate::root_systems::{MultiplicityFunction, RootSystem};

/// Fraction of the base grid step below which substepping gives up.
const STEP_COLLAPSE_FACTOR: f64 = 1e-6;
/// Hit threshold factor: a wall is hit when its margin falls below
/// `1e-6 sqrt(dt)` while the wall is attainable (`k_eff < 1/2`).
const HIT_EPS_FACTOR: f64 = 1e-6;
/// Skip the Brownian-bridge crossing test when its probability
/// `exp(-2 m0 m1 / h)` is below this; removes the discrete-monitoring bias
/// of hitting times at attainable walls without touching k >= 1/2 walls.
const BRIDGE_PROB_EPS: f64 = 1e-12;
/// Width of the boundary layer, in units of `sqrt(dt)`, inside which the
/// margin of an attainable wall is stepped as an exact Bessel process
/// instead of by Euler.
const LAYER_WIDTH_FACTOR: f64 = 4.0;

#[derive(Debug, Error)]
pub enum SdeError {
    #[error("substep collapsed below {min_dt:e} at t = {time}")]
    StepCollapse { time: f64, min_dt: f64 },
    #[error("invalid process configuration: {0}")]
    BadConfig(String),
}

/// The stochastic processes the engine integrates.
#[derive(Debug, Clone)]
pub enum ProcessKind {
    /// Radial Dunkl process on the Weyl chamber:
    /// `dX = dB + sum_{alpha > 0} k(alpha) alpha / <alpha, X> dt`.
    RadialDunkl {
        rs: Arc<RootSystem>,
        k: MultiplicityFunction,
    },
    /// beta-Laguerre eigenvalue process in `lambda`-coordinates on
    /// `l_1 > ... > l_m > 0`:
    /// `dl_i = 2 sqrt(l_i) dv_i + beta [delta + sum_{j != i} (l_i + l_j)/(l_i - l_j)] dt`.
    BetaLaguerre { m: usize, beta: f64, delta: f64 },
    /// beta-Jacobi process in angular coordinates on the alcove
    /// `0 < phi_m < ... < phi_1 < pi/2`:
    /// `dphi_i = dv_i + [k0 cot phi_i + k1 cot 2phi_i
    ///  + k2 sum_{j != i} (cot(phi_i - phi_j) + cot(phi_i + phi_j))] dt`
    /// with `2k0 = beta(p - q)`, `k1 = beta(q - m + 1) - 1`, `2k2 = beta`.
    BetaJacobi { m: usize, beta: f64, p: f64, q: f64 },
}

/// A reflecting or absorbing wall of the state domain.
#[derive(Debug, Clone)]
pub struct Wall {
    pub label: String,
    /// Effective local Bessel-type multiplicity; the wall is attainable
    /// exactly when `k_eff < 1/2`.
    pub k_eff: f64,
}

impl ProcessKind {
    pub fn dim(&self) -> usize {
        match self {
            ProcessKind::RadialDunkl { rs, .. } => rs.rank,
            ProcessKind::BetaLaguerre { m, .. } | ProcessKind::BetaJacobi { m, .. } => *m,
        }
    }

    /// Drift vector field at `x`.
    pub fn drift(&self, x: &[f64]) -> Vec<f64> {
        let m = self.dim();
        let mut b = vec![0.0; m];
        match self {
            ProcessKind::RadialDunkl { rs, k } => {
                for alpha in rs.positive() {
                    let orbit = rs.orbit_of(alpha).expect("positive root");
                    let kv = k.value(orbit);
                    if kv == 0.0 {
                        continue;
                    }
                    let dot = alpha.dot(x);
                    for (bi, &ai) in b.iter_mut().zip(alpha.coords.iter()) {
                        *bi += kv * ai as f64 / dot;
                    }
                }
            }
            ProcessKind::BetaLaguerre { m, beta, delta } => {
                for i in 0..*m {
                    let mut acc = *delta;
                    for j in 0..*m {
                        if j != i {
                            acc += (x[i] + x[j]) / (x[i] - x[j]);
                        }
                    }
                    b[i] = beta * acc;
                }
            }
            ProcessKind::BetaJacobi { m, beta, p, q } => {
                let k0 = beta * (p - q) / 2.0;
                let k1 = beta * (q - (*m as f64 - 1.0)) - 1.0;
                let k2 = beta / 2.0;
                for i in 0..*m {
                    let mut acc = k0 / x[i].tan() + k1 / (2.0 * x[i]).tan();
                    for j in 0..*m {
                        if j != i {
                            acc += k2 * (1.0 / (x[i] - x[j]).tan() + 1.0 / (x[i] + x[j]).tan());
                        }
                    }
                    b[i] = acc;
                }
            }
        }
        b
    }

    /// Diffusion coefficient per coordinate.
    fn sigma(&self, x: &[f64], out: &mut [f64]) {
        match self {
            ProcessKind::BetaLaguerre { .. } => {
                for (o, &xi) in out.iter_mut().zip(x) {
                    *o = 2.0 * xi.max(0.0).sqrt();
                }
            }
            _ => out.fill(1.0),
        }
    }

    /// Domain walls, in a fixed order matched by `margins`.
    pub fn walls(&self) -> Vec<Wall> {
        match self {
            ProcessKind::RadialDunkl { rs, k } => rs
                .simple()
                .iter()
                .map(|alpha| {
                    let mut k_eff = k.value(rs.orbit_of(alpha).expect("simple root"));
                    let doubled = crate::root_systems::Root::new(
                        alpha.coords.iter().map(|c| 2 * c).collect(),
                    );
                    if rs.contains(&doubled) {
                        k_eff += k.value(rs.orbit_of(&doubled).expect("doubled root"));
                    }
                    Wall {
                        label: format!("alpha={}", alpha),
                        k_eff,
                    }
                })
                .collect(),
            ProcessKind::BetaLaguerre { m, beta, delta } => {
                let mut walls = Vec::new();
                for i in 0..m - 1 {
                    walls.push(Wall {
                        label: format!("gap({},{})", i + 1, i + 2),
                        k_eff: beta / 2.0,
                    });
                }
                walls.push(Wall {
                    label: "zero".into(),
                    k_eff: (beta * (delta - *m as f64 + 1.0) - 1.0) / 2.0,
                });
                walls
            }
            ProcessKind::BetaJacobi { m, beta, p, q } => {
                let mf = *m as f64;
                let mut walls = Vec::new();
                for i in 0..m - 1 {
                    walls.push(Wall {
                        label: format!("gap({},{})", i + 1, i + 2),
                        k_eff: beta / 2.0,
                    });
                }
                walls.push(Wall {
                    label: "zero".into(),
                    k_eff: (beta * (p - mf + 1.0) - 1.0) / 2.0,
                });
                walls.push(Wall {
                    label: "affine".into(),
                    k_eff: (beta * (q - mf + 1.0) - 1.0) / 2.0,
                });
                walls
            }
        }
    }

    /// Signed distances to the walls, in the order of `walls()`.
    fn margins(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        match self {
            ProcessKind::RadialDunkl { rs, .. } => {
                for alpha in rs.simple() {
                    out.push(alpha.dot(x) / alpha.norm());
                }
            }
            ProcessKind::BetaLaguerre { m, .. } => {
                // measured in the x = sqrt(lambda) chamber coordinates
                let sq: Vec<f64> = x.iter().map(|&l| if l > 0.0 { l.sqrt() } else { -1.0 }).collect();
                for i in 0..m - 1 {
                    let gap = if x[i] > x[i + 1] && x[i + 1] > 0.0 {
                        (sq[i] - sq[i + 1]) / std::f64::consts::SQRT_2
                    } else {
                        -1.0
                    };
                    out.push(gap);
                }
                out.push(if x[m - 1] > 0.0 { sq[m - 1] } else { -1.0 });
            }
            ProcessKind::BetaJacobi { m, .. } => {
                for i in 0..m - 1 {
                    out.push((x[i] - x[i + 1]) / std::f64::consts::SQRT_2);
                }
                out.push(x[m - 1]);
                out.push(std::f64::consts::FRAC_PI_2 - x[0]);
            }
        }
    }

    /// Unit inward normal of a wall, in chamber coordinates, matching the
    /// order of `walls()`.
    fn wall_normal(&self, wall: usize, m: usize) -> Vec<f64> {
        let mut n = vec![0.0; m];
        match self {
            ProcessKind::RadialDunkl { rs, .. } => {
                let alpha = &rs.simple()[wall];
                let norm = alpha.norm();
                for (ni, &ai) in n.iter_mut().zip(alpha.coords.iter()) {
                    *ni = ai as f64 / norm;
                }
            }
            ProcessKind::BetaLaguerre { .. } => {
                if wall < m - 1 {
                    n[wall] = std::f64::consts::FRAC_1_SQRT_2;
                    n[wall + 1] = -std::f64::consts::FRAC_1_SQRT_2;
                } else {
                    n[m - 1] = 1.0;
                }
            }
            ProcessKind::BetaJacobi { .. } => {
                if wall < m - 1 {
                    n[wall] = std::f64::consts::FRAC_1_SQRT_2;
                    n[wall + 1] = -std::f64::consts::FRAC_1_SQRT_2;
                } else if wall == m - 1 {
                    n[m - 1] = 1.0;
                } else {
                    n[0] = -1.0;
                }
            }
        }
        n
    }

    /// Coordinates in which every wall margin is a unit-variance process:
    /// identity except for the Laguerre `x = sqrt(lambda)` map.
    fn to_chamber(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ProcessKind::BetaLaguerre { .. } => x.iter().map(|&l| l.max(0.0).sqrt()).collect(),
            _ => x.to_vec(),
        }
    }

    fn from_chamber(&self, u: &[f64]) -> Vec<f64> {
        match self {
            ProcessKind::BetaLaguerre { .. } => u.iter().map(|&s| s * s).collect(),
            _ => u.to_vec(),
        }
    }

    /// Drift of the chamber-coordinate process (Ito-corrected for the
    /// Laguerre square-root map).
    fn chamber_drift(&self, u: &[f64]) -> Vec<f64> {
        match self {
            ProcessKind::BetaLaguerre { .. } => {
                let lambda: Vec<f64> = u.iter().map(|&s| s * s).collect();
                let b = self.drift(&lambda);
                u.iter()
                    .zip(&b)
                    .map(|(&s, &bl)| (bl - 1.0) / (2.0 * s))
                    .collect()
            }
            _ => self.drift(u),
        }
    }

    fn validate_start(&self, x: &[f64]) -> Result<(), SdeError> {
        if x.len() != self.dim() {
            return Err(SdeError::BadConfig(format!(
                "start point has dimension {}, process has dimension {}",
                x.len(),
                self.dim()
            )));
        }
        let mut margins = Vec::new();
        self.margins(x, &mut margins);
        if margins.iter().any(|&v| v <= 0.0) {
            return Err(SdeError::BadConfig(
                "start point lies outside the open domain".into(),
            ));
        }
        Ok(())
    }
}

/// Full simulation request.
#[derive(Debug, Clone)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    pub start: Vec<f64>,
    pub t_horizon: f64,
    pub dt: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hit {
    pub wall: String,
    pub time: f64,
}

/// Grid-sampled path. `states[i]` is the state at `times[i]`; recording stops
/// at the last grid time before absorption.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub hit: Option<Hit>,
}

/// Source of i.i.d. standard normal increments.
pub trait NoiseSource {
    fn fill(&mut self, out: &mut [f64]);
}

pub struct ChaChaNoise {
    rng: ChaCha8Rng,
}

impl ChaChaNoise {
    /// Independent stream for one path of a seeded experiment.
    pub fn for_path(seed: u64, path: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(path);
        ChaChaNoise { rng }
    }
}

impl NoiseSource for ChaChaNoise {
    fn fill(&mut self, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = StandardNormal.sample(&mut self.rng);
        }
    }
}

/// Deterministic-drift test hook: all increments vanish.
pub struct ZeroNoise;

impl NoiseSource for ZeroNoise {
    fn fill(&mut self, out: &mut [f64]) {
        out.fill(0.0);
    }
}

/// Mirror-coupling test hook: reverses the coordinate order and flips signs
/// of the increments drawn from an inner source.
pub struct MirroredNoise<N>(pub N);

impl<N: NoiseSource> NoiseSource for MirroredNoise<N> {
    fn fill(&mut self, out: &mut [f64]) {
        self.0.fill(out);
        out.reverse();
        for v in out.iter_mut() {
            *v = -*v;
        }
    }
}

struct Integrator<'a> {
    kind: &'a ProcessKind,
    walls: Vec<Wall>,
    dt: f64,
    min_dt: f64,
    eps_hit: f64,
    scratch_margin: Vec<f64>,
    scratch_m0: Vec<f64>,
}

enum StepResult {
    Alive,
    Hit(Hit),
}

impl<'a> Integrator<'a> {
    fn new(kind: &'a ProcessKind, dt: f64) -> Self {
        Integrator {
            kind,
            walls: kind.walls(),
            dt,
            min_dt: dt * STEP_COLLAPSE_FACTOR,
            eps_hit: HIT_EPS_FACTOR * dt.sqrt(),
            scratch_margin: Vec::new(),
            scratch_m0: Vec::new(),
        }
    }

    fn in_domain(&mut self, x: &[f64]) -> bool {
        self.kind.margins(x, &mut self.scratch_margin);
        self.scratch_margin.iter().all(|&v| v > 0.0)
    }

    /// Check the hit condition at the current state.
    fn hit_check(&mut self, x: &[f64], t: f64) -> Option<Hit> {
        self.kind.margins(x, &mut self.scratch_margin);
        let mut best: Option<usize> = None;
        for (i, &mg) in self.scratch_margin.iter().enumerate() {
            if mg < self.eps_hit && best.map_or(true, |b| mg < self.scratch_margin[b]) {
                best = Some(i);
            }
        }
        let i = best?;
        if self.walls[i].k_eff < 0.5 {
            Some(Hit {
                wall: self.walls[i].label.clone(),
                time: t,
            })
        } else {
            None
        }
    }

    /// Advance `x` over `[t0, t0 + dt]` given the interval's Brownian
    /// increment `z * sqrt(dt)`; splits recursively when the proposal leaves
    /// the domain.
    fn advance(
        &mut self,
        x: &mut Vec<f64>,
        t0: f64,
        dt: f64,
        z: &[f64],
        noise: &mut dyn NoiseSource,
    ) -> Result<StepResult, SdeError> {
        let m = x.len();
        let drift = self.kind.drift(x);
        let mut sigma = vec![0.0; m];
        self.kind.sigma(x, &mut sigma);
        let sqdt = dt.sqrt();
        let proposal: Vec<f64> = (0..m)
            .map(|i| x[i] + drift[i] * dt + sigma[i] * z[i] * sqdt)
            .collect();
        if proposal.iter().all(|v| v.is_finite()) && self.in_domain(&proposal) {
            // the margins are locally standard Brownian in every supported
            // process, so the conditional crossing probability of an
            // attainable wall over this interval is the Brownian-bridge
            // exit probability exp(-2 m0 m1 / dt)
            self.kind.margins(x, &mut self.scratch_m0);
            let mut bridge_hit = None;
            for i in 0..self.walls.len() {
                if self.walls[i].k_eff >= 0.5 {
                    continue;
                }
                let exponent = 2.0 * self.scratch_m0[i] * self.scratch_margin[i] / dt;
                if (-exponent).exp() < BRIDGE_PROB_EPS {
                    continue;
                }
                let mut zb = [0.0];
                noise.fill(&mut zb);
                if uniform_from_normal(zb[0]) < (-exponent).exp() {
                    bridge_hit = Some(i);
                    break;
                }
            }
            *x = proposal;
            if let Some(i) = bridge_hit {
                return Ok(StepResult::Hit(Hit {
                    wall: self.walls[i].label.clone(),
                    time: t0 + dt / 2.0,
                }));
            }
            return Ok(match self.hit_check(x, t0 + dt) {
                Some(hit) => StepResult::Hit(hit),
                None => StepResult::Alive,
            });
        }
        // the proposal left the domain: either we are at an attainable wall,
        // or the interval must be refined
        if let Some(hit) = self.hit_check(x, t0) {
            return Ok(StepResult::Hit(hit));
        }
        let half = dt / 2.0;
        if half < self.min_dt {
            // the bisection has zoomed onto the crossing time; if the nearest
            // wall is attainable this is the boundary classification, and
            // otherwise the refinement genuinely failed
            self.kind.margins(x, &mut self.scratch_margin);
            let nearest = self
                .scratch_margin
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .expect("at least one wall");
            if self.walls[nearest].k_eff < 0.5 {
                return Ok(StepResult::Hit(Hit {
                    wall: self.walls[nearest].label.clone(),
                    time: t0,
                }));
            }
            return Err(SdeError::StepCollapse {
                time: t0,
                min_dt: self.min_dt,
            });
        }
        // Brownian bridge split: dB = dB_1 + dB_2 with
        // dB_1 = dB/2 + sqrt(dt)/2 eta. In units of z (per sqrt of the
        // respective interval): z_1 = (z + eta)/sqrt(2), z_2 = (z - eta)/sqrt(2).
        let mut eta = vec![0.0; m];
        noise.fill(&mut eta);
        let inv = 1.0 / std::f64::consts::SQRT_2;
        let z1: Vec<f64> = (0..m).map(|i| (z[i] + eta[i]) * inv).collect();
        let z2: Vec<f64> = (0..m).map(|i| (z[i] - eta[i]) * inv).collect();
        match self.advance(x, t0, half, &z1, noise)? {
            StepResult::Hit(h) => Ok(StepResult::Hit(h)),
            StepResult::Alive => self.advance(x, t0 + half, half, &z2, noise),
        }
    }

    /// One base grid step.
    fn grid_step(
        &mut self,
        x: &mut Vec<f64>,
        t0: f64,
        noise: &mut dyn NoiseSource,
    ) -> Result<StepResult, SdeError> {
        let mut z = vec![0.0; x.len()];
        noise.fill(&mut z);
        let dt = self.dt;
        // inside the boundary layer of an attainable wall the Euler drift
        // k_eff / margin is singular and both the step and the bridge test
        // are biased; substitute the exact local Bessel evolution of the
        // wall margin there
        self.kind.margins(x, &mut self.scratch_m0);
        let layer = LAYER_WIDTH_FACTOR * dt.sqrt();
        let mut nearest: Option<usize> = None;
        for (i, &mg) in self.scratch_m0.iter().enumerate() {
            // k_eff = 1/2 (Bessel dimension 2) never hits but still needs the
            // exact local evolution: the Euler bisection has no lower bound on
            // the margin there and would collapse
            if self.walls[i].k_eff <= 0.5
                && mg < layer
                && nearest.map_or(true, |b| mg < self.scratch_m0[b])
            {
                nearest = Some(i);
            }
        }
        if let Some(i) = nearest {
            if let Some(result) = self.layer_step(x, t0, dt, i, &z, noise)? {
                return Ok(result);
            }
        }
        self.advance(x, t0, dt, &z, noise)
    }

    /// Exact one-step evolution of the margin of an attainable wall as a
    /// Bessel process of dimension `2 k_eff + 1`, with the tangential
    /// components advanced by Euler.  Returns `None` when the tangential
    /// proposal leaves the domain, in which case the caller falls back to
    /// the splitting scheme.
    fn layer_step(
        &mut self,
        x: &mut Vec<f64>,
        t0: f64,
        dt: f64,
        wall: usize,
        z: &[f64],
        noise: &mut dyn NoiseSource,
    ) -> Result<Option<StepResult>, SdeError> {
        let m = x.len();
        let n = self.kind.wall_normal(wall, m);
        let u = self.kind.to_chamber(x);
        let b = self.kind.chamber_drift(&u);
        let m0 = self.scratch_m0[wall];
        let mu = 0.5 - self.walls[wall].k_eff;
        // absorb the regular (non-singular) part of the normal drift into
        // the effective starting margin
        let b_n: f64 = n.iter().zip(&b).map(|(ni, bi)| ni * bi).sum();
        let m0_eff = (m0 + (b_n - self.walls[wall].k_eff / m0) * dt).max(m0 * 1e-3);
        let lambda = m0_eff * m0_eff / (2.0 * dt);
        let mut zb = [0.0];
        // mu = 0 is the marginal dimension-2 Bessel: hit probability zero
        if mu > 0.0 {
            noise.fill(&mut zb);
            if uniform_from_normal(zb[0]) < statrs::function::gamma::gamma_ur(mu, lambda) {
                return Ok(Some(StepResult::Hit(Hit {
                    wall: self.walls[wall].label.clone(),
                    time: t0 + dt / 2.0,
                })));
            }
        }
        // surviving endpoint: squared margin ~ Gamma(J + 1, 2 dt) with
        // P(J = j) proportional to lambda^j / Gamma(mu + j + 1)
        let mut weights = Vec::new();
        let mut term = 1.0 / statrs::function::gamma::gamma(mu + 1.0);
        let mut total = 0.0;
        loop {
            weights.push(term);
            total += term;
            let j = weights.len() as f64;
            term *= lambda / (mu + j);
            if term < total * 1e-14 && weights.len() as f64 > lambda {
                break;
            }
        }
        noise.fill(&mut zb);
        let mut pick = uniform_from_normal(zb[0]) * total;
        let mut j = weights.len() - 1;
        for (idx, w) in weights.iter().enumerate() {
            if pick < *w {
                j = idx;
                break;
            }
            pick -= w;
        }
        // Gamma(j + 1) as a sum of j + 1 unit exponentials
        let mut y = 0.0;
        for _ in 0..=j {
            noise.fill(&mut zb);
            y -= uniform_from_normal(zb[0]).max(1e-300).ln();
        }
        let m1 = (2.0 * dt * y).sqrt();
        // tangential Euler step plus the sampled normal displacement
        let zn: f64 = n.iter().zip(z).map(|(ni, zi)| ni * zi).sum();
        let sqdt = dt.sqrt();
        let u_new: Vec<f64> = (0..m)
            .map(|i| {
                u[i] + (b[i] - b_n * n[i]) * dt + (z[i] - zn * n[i]) * sqdt
                    + (m1 - m0) * n[i]
            })
            .collect();
        let x_new = self.kind.from_chamber(&u_new);
        if !x_new.iter().all(|v| v.is_finite()) || !self.in_domain(&x_new) {
            return Ok(None);
        }
        *x = x_new;
        Ok(Some(match self.hit_check(x, t0 + dt) {
            Some(hit) => StepResult::Hit(hit),
            None => StepResult::Alive,
        }))
    }
}

/// Map a standard normal draw to a uniform on (0, 1).
fn uniform_from_normal(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
}

/// Integrate one path with an explicit noise source, recording states on the
/// base grid.
pub fn simulate_with_noise(
    spec: &ProcessSpec,
    noise: &mut dyn NoiseSource,
) -> Result<Trajectory, SdeError> {
    spec.kind.validate_start(&spec.start)?;
    if !(spec.dt > 0.0) || !(spec.t_horizon > 0.0) {
        return Err(SdeError::BadConfig("need dt > 0 and t_horizon > 0".into()));
    }
    let n_steps = (spec.t_horizon / spec.dt).round().max(1.0) as usize;
    let mut integrator = Integrator::new(&spec.kind, spec.dt);
    let mut x = spec.start.clone();
    let mut times = vec![0.0];
    let mut states = vec![x.clone()];
    let mut hit = None;
    for step in 0..n_steps {
        let t0 = step as f64 * spec.dt;
        match integrator.grid_step(&mut x, t0, noise)? {
            StepResult::Alive => {
                times.push(t0 + spec.dt);
                states.push(x.clone());
            }
            StepResult::Hit(h) => {
                hit = Some(h);
                break;
            }
        }
    }
    Ok(Trajectory { times, states, hit })
}

/// Integrate one path of a seeded experiment (path index selects the ChaCha
/// stream).
pub fn simulate_path(spec: &ProcessSpec, path: u64) -> Result<Trajectory, SdeError> {
    let mut noise = ChaChaNoise::for_path(spec.seed, path);
    simulate_with_noise(spec, &mut noise)
}

/// Integrate the path with stream 0.
pub fn simulate(spec: &ProcessSpec) -> Result<Trajectory, SdeError> {
    simulate_path(spec, 0)
}

/// Lean path runner for Monte Carlo: returns only the absorption time.
fn run_hit_time(spec: &ProcessSpec, path: u64) -> Result<Option<f64>, SdeError> {
    let mut noise = ChaChaNoise::for_path(spec.seed, path);
    let n_steps = (spec.t_horizon / spec.dt).round().max(1.0) as usize;
    let mut integrator = Integrator::new(&spec.kind, spec.dt);
    let mut x = spec.start.clone();
    for step in 0..n_steps {
        let t0 = step as f64 * spec.dt;
        match integrator.grid_step(&mut x, t0, &mut noise)? {
            StepResult::Alive => {}
            StepResult::Hit(h) => return Ok(Some(h.time)),
        }
    }
    Ok(None)
}

/// Empirical survival function of the wall-hitting time.
#[derive(Debug, Clone)]
pub struct McTail {
    pub times: Vec<f64>,
    /// `P(T_0 > t)` estimates.
    pub survival: Vec<f64>,
    /// Binomial standard errors.
    pub se: Vec<f64>,
    pub n_paths: usize,
}

/// Monte Carlo estimate of `P_x(T_0 > t)` on the report grid.
pub fn hitting_time_mc(
    spec: &ProcessSpec,
    n_paths: usize,
    report_times: &[f64],
) -> Result<McTail, SdeError> {
    spec.kind.validate_start(&spec.start)?;
    let hits: Result<Vec<Option<f64>>, SdeError> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| run_hit_time(spec, p))
        .collect();
    let hits = hits?;
    let n = n_paths as f64;
    let mut survival = Vec::with_capacity(report_times.len());
    let mut se = Vec::with_capacity(report_times.len());
    for &t in report_times {
        let alive = hits
            .iter()
            .filter(|h| h.map_or(true, |ht| ht > t))
            .count() as f64;
        let p = alive / n;
        survival.push(p);
        se.push((p * (1.0 - p) / n).sqrt());
    }
    Ok(McTail {
        times: report_times.to_vec(),
        survival,
        se,
        n_paths,
    })
}

/// Result of a pathwise-domination check.
#[derive(Debug, Clone)]
pub struct CouplingReport {
    /// Fraction of (path, grid-time) samples where the projected process
    /// exceeded its scalar dominating process.
    pub violation_fraction: f64,
    pub max_violation: f64,
    pub samples: usize,
}

/// The scalar comparison process for one wall direction.
#[derive(Debug, Clone, Copy)]
enum Comparison {
    /// `dZ = |a| dg + k |a|^2 / Z dt` (Bessel-type).
    Bessel { k: f64 },
    /// `dZ = |a| dg + |a|^2 (k0 cot Z + k1 cot 2Z) dt` (Jacobi-type).
    Jacobi { k0: f64, k1: f64 },
}

/// Couple the vector process with the scalar process dominating
/// `<alpha0, X_t>` and count domination violations on the base grid.
/// `alpha0` must be a simple root direction (index into `walls()` order for
/// the first `m - 1` coordinate-difference walls, or the short/`e_m` wall).
pub fn coupling_check(
    spec: &ProcessSpec,
    alpha0: &[f64],
    n_paths: usize,
) -> Result<CouplingReport, SdeError> {
    spec.kind.validate_start(&spec.start)?;
    let norm: f64 = alpha0.iter().map(|v| v * v).sum::<f64>().sqrt();
    let comparison = match &spec.kind {
        ProcessKind::RadialDunkl { rs, k } => {
            let root = crate::root_systems::Root::new(
                alpha0.iter().map(|&v| v.round() as i64).collect(),
            );
            let orbit = rs
                .orbit_of(&root)
                .map_err(|_| SdeError::BadConfig("alpha0 is not a root".into()))?;
            Comparison::Bessel { k: k.value(orbit) }
        }
        ProcessKind::BetaJacobi { m, beta, p, q } => {
            let mf = *m as f64;
            let k0 = beta * (p - q) / 2.0;
            let k1 = beta * (q - mf + 1.0) - 1.0;
            let k2 = beta / 2.0;
            let nonzero: Vec<usize> = (0..*m).filter(|&i| alpha0[i] != 0.0).collect();
            if nonzero.len() == 1 {
                // e_m-type wall: the scalar process is the m = 1 case
                Comparison::Jacobi { k0, k1 }
            } else {
                // difference root: Bessel-like with cot drift at multiplicity k2
                Comparison::Jacobi { k0: k2, k1: 0.0 }
            }
        }
        _ => {
            return Err(SdeError::BadConfig(
                "coupling check supports radial Dunkl and beta-Jacobi".into(),
            ))
        }
    };
    let z0: f64 = alpha0
        .iter()
        .zip(&spec.start)
        .map(|(a, x)| a * x)
        .sum::<f64>();
    let n_steps = (spec.t_horizon / spec.dt).round().max(1.0) as usize;

    let per_path: Vec<(usize, usize, f64)> = (0..n_paths as u64)
        .into_par_iter()
        .map(|path| {
            let mut noise = ChaChaNoise::for_path(spec.seed, path);
            let mut integrator = Integrator::new(&spec.kind, spec.dt);
            let mut x = spec.start.clone();
            let m = x.len();
            let mut z = z0;
            let mut violations = 0usize;
            let mut samples = 0usize;
            let mut worst = 0.0f64;
            'path: for step in 0..n_steps {
                let t0 = step as f64 * spec.dt;
                // joint driver increment for the grid interval
                let mut xi = vec![0.0; m];
                noise.fill(&mut xi);
                // advance X (substepping may draw more noise; the scalar
                // process uses only the interval totals, which keeps the
                // shared-driver coupling on the grid scale)
                let (keep_going, consumed) =
                    match integrator.advance(&mut x, t0, spec.dt, &xi, &mut noise) {
                        Ok(StepResult::Alive) => (true, ()),
                        Ok(StepResult::Hit(_)) => (false, ()),
                        Err(_) => (false, ()),
                    };
                let _ = consumed;
                // advance Z with the shared projected increment, in substeps
                // fine enough for its own drift
                let gamma: f64 = alpha0
                    .iter()
                    .zip(&xi)
                    .map(|(a, v)| a * v)
                    .sum::<f64>()
                    / norm;
                let n_sub = 16;
                let sub = spec.dt / n_sub as f64;
                let dg = gamma * spec.dt.sqrt() / n_sub as f64;
                let mut absorbed = false;
                for _ in 0..n_sub {
                    let drift = match comparison {
                        Comparison::Bessel { k } => k * norm * norm / z,
                        Comparison::Jacobi { k0, k1 } => {
                            norm * norm * (k0 / z.tan() + k1 / (2.0 * z).tan())
                        }
                    };
                    z += norm * dg + drift * sub;
                    if z <= 0.0 {
                        absorbed = true;
                        break;
                    }
                }
                if absorbed || !keep_going {
                    break 'path;
                }
                let proj: f64 = alpha0.iter().zip(&x).map(|(a, v)| a * v).sum();
                samples += 1;
                if proj > z + 1e-12 {
                    violations += 1;
                    worst = worst.max(proj - z);
                }
            }
            (violations, samples, worst)
        })
        .collect();

    let violations: usize = per_path.iter().map(|v| v.0).sum();
    let samples: usize = per_path.iter().map(|v| v.1).sum();
    let max_violation = per_path.iter().map(|v| v.2).fold(0.0, f64::max);
    Ok(CouplingReport {
        violation_fraction: if samples == 0 {
            0.0
        } else {
            violations as f64 / samples as f64
        },
        max_violation,
        samples,
    })
}

/// Kolmogorov-Smirnov comparison between the sorted square roots of a
/// beta-Laguerre state and the matched radial Dunkl state at a common time.
#[derive(Debug, Clone)]
pub struct KsReport {
    /// Per-component KS statistics and p-values, largest component first.
    pub statistics: Vec<f64>,
    pub p_values: Vec<f64>,
    pub n_paths: usize,
}

/// Asymptotic two-sample KS p-value.
fn ks_p_value(d: f64, n1: usize, n2: usize) -> f64 {
    let ne = (n1 as f64 * n2 as f64) / (n1 as f64 + n2 as f64);
    let lambda = ne.sqrt() * d;
    let mut p = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        p += 2.0 * (-1.0f64).powi(j + 1) * (-2.0 * jf * jf * lambda * lambda).exp();
    }
    p.clamp(0.0, 1.0)
}

fn ks_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n1, n2) = (a.len(), b.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < n1 && j < n2 {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    d
}

/// Terminal states of `n_paths` independent paths, as column samples per
/// coordinate.
fn terminal_samples(spec: &ProcessSpec, n_paths: usize) -> Result<Vec<Vec<f64>>, SdeError> {
    let finals: Result<Vec<Vec<f64>>, SdeError> = (0..n_paths as u64)
        .into_par_iter()
        .map(|p| {
            let traj = simulate_path(spec, p)?;
            Ok(traj.states.last().expect("nonempty trajectory").clone())
        })
        .collect();
    let finals = finals?;
    let m = spec.kind.dim();
    let mut cols = vec![Vec::with_capacity(n_paths); m];
    for state in finals {
        for (c, v) in cols.iter_mut().zip(state) {
            c.push(v);
        }
    }
    Ok(cols)
}

/// Two-sample KS check, per sorted component, of the identity between the
/// squared radial Dunkl B-process and the beta-Laguerre eigenvalue process
/// under `2 k0 = beta(delta - m + 1) - 1`, `2 k1 = beta`.
pub fn laguerre_consistency(
    m: usize,
    beta: f64,
    delta: f64,
    start_lambda: &[f64],
    t_horizon: f64,
    dt: f64,
    n_paths: usize,
    seed: u64,
) -> Result<KsReport, SdeError> {
    let k0 = (beta * (delta - m as f64 + 1.0) - 1.0) / 2.0;
    let k1 = beta / 2.0;
    if k0 <= 0.0 {
        return Err(SdeError::BadConfig(
            "need beta(delta - m + 1) > 1 for the matched chamber process".into(),
        ));
    }
    let lag_spec = ProcessSpec {
        kind: ProcessKind::BetaLaguerre { m, beta, delta },
        start: start_lambda.to_vec(),
        t_horizon,
        dt,
        seed,
    };
    let rs = Arc::new(
        RootSystem::build(crate::root_systems::Family::B, m)
            .map_err(|e| SdeError::BadConfig(e.to_string()))?,
    );
    let k = if m == 1 {
        MultiplicityFunction::constant(&rs, k0).map_err(|e| SdeError::BadConfig(e.to_string()))?
    } else {
        MultiplicityFunction::for_b(&rs, k0, k1).map_err(|e| SdeError::BadConfig(e.to_string()))?
    };
    let dunkl_spec = ProcessSpec {
        kind: ProcessKind::RadialDunkl { rs, k },
        start: start_lambda.iter().map(|&l| l.sqrt()).collect(),
        t_horizon,
        dt,
        seed: seed ^ 0x9e37_79b9_7f4a_7c15, // independent driver
    };
    let lag_cols = terminal_samples(&lag_spec, n_paths)?;
    let dunkl_cols = terminal_samples(&dunkl_spec, n_paths)?;
    let mut statistics = Vec::with_capacity(m);
    let mut p_values = Vec::with_capacity(m);
    for i in 0..m {
        let mut a: Vec<f64> = lag_cols[i].iter().map(|&l| l.sqrt()).collect();
        let mut b = dunkl_cols[i].clone();
        let d = ks_statistic(&mut a, &mut b);
        statistics.push(d);
        p_values.push(ks_p_value(d, n_paths, n_paths));
    }
    Ok(KsReport {
        statistics,
        p_values,
        n_paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_systems::Family;

    fn b2_spec(k0: f64, k1: f64, start: Vec<f64>, dt: f64, t: f64, seed: u64) -> ProcessSpec {
        let rs = Arc::new(RootSystem::build(Family::B, 2).unwrap());
        let k = MultiplicityFunction::for_b(&rs, k0, k1).unwrap();
        ProcessSpec {
            kind: ProcessKind::RadialDunkl { rs, k },
            start,
            t_horizon: t,
            dt,
            seed,
        }
    }

    #[test]
    fn drift_pin_b2() {
        let spec = b2_spec(0.7, 1.2, vec![2.0, 1.0], 1e-3, 1.0, 0);
        let b = spec.kind.drift(&[2.0, 1.0]);
        let expect0 = 0.7 / 2.0 + 1.2 * (1.0 / (2.0 - 1.0) + 1.0 / (2.0 + 1.0));
        let expect1 = 0.7 / 1.0 + 1.2 * (1.0 / (1.0 - 2.0) + 1.0 / (1.0 + 2.0));
        assert!((b[0] - expect0).abs() < 1e-14);
        assert!((b[1] - expect1).abs() < 1e-14);
    }

    #[test]
    fn zero_noise_bessel_closed_form() {
        // B_1 with zero noise: x' = k0/x, so x(t) = sqrt(x0^2 + 2 k0 t)
        let rs = Arc::new(RootSystem::build(Family::B, 1).unwrap());
        let k = MultiplicityFunction::constant(&rs, 0.8).unwrap();
        let spec = ProcessSpec {
            kind: ProcessKind::RadialDunkl { rs, k },
            start: vec![0.5],
            t_horizon: 1.0,
            dt: 1e-4,
            seed: 0,
        };
        let traj = simulate_with_noise(&spec, &mut ZeroNoise).unwrap();
        let got = traj.states.last().unwrap()[0];
        let expect = (0.25f64 + 2.0 * 0.8).sqrt();
        assert!((got - expect).abs() < 1e-3, "{} vs {}", got, expect);
        assert!(traj.hit.is_none());
    }

    #[test]
    fn walls_and_keff() {
        let spec = b2_spec(0.3, 0.8, vec![2.0, 1.0], 1e-3, 1.0, 0);
        let walls = spec.kind.walls();
        assert_eq!(walls.len(), 2);
        // simple roots of B_2: e1 - e2 (long, k1) and e2 (short, k0)
        let keffs: Vec<f64> = walls.iter().map(|w| w.k_eff).collect();
        assert!(keffs.contains(&0.8) && keffs.contains(&0.3));

        let jac = ProcessKind::BetaJacobi {
            m: 2,
            beta: 2.0,
            p: 3.0,
            q: 2.5,
        };
        let jw = jac.walls();
        assert_eq!(jw.len(), 3);
        assert!((jw[0].k_eff - 1.0).abs() < 1e-14); // gap: beta/2
        assert!((jw[1].k_eff - (2.0 * (3.0 - 1.0) - 1.0) / 2.0).abs() < 1e-14);
        assert!((jw[2].k_eff - (2.0 * (2.5 - 1.0) - 1.0) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn determinism_and_stream_independence() {
        let spec = b2_spec(0.6, 0.9, vec![2.0, 1.0], 1e-3, 0.2, 42);
        let a = simulate_path(&spec, 3).unwrap();
        let b = simulate_path(&spec, 3).unwrap();
        assert_eq!(a, b);
        let c = simulate_path(&spec, 4).unwrap();
        assert_ne!(a.states.last(), c.states.last());
    }

    #[test]
    fn mc_thread_count_invariance() {
        let spec = b2_spec(0.25, 0.75, vec![1.0, 0.5], 1e-3, 0.2, 7);
        let times = [0.05, 0.1, 0.2];
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let r1 = pool1.install(|| hitting_time_mc(&spec, 400, &times).unwrap());
        let r4 = pool4.install(|| hitting_time_mc(&spec, 400, &times).unwrap());
        assert_eq!(r1.survival, r4.survival);
    }

    #[test]
    fn attainable_wall_is_hit() {
        // B_1 with k0 = 0.1 started near the wall: absorption is near-certain
        let rs = Arc::new(RootSystem::build(Family::B, 1).unwrap());
        let k = MultiplicityFunction::constant(&rs, 0.1).unwrap();
        let spec = ProcessSpec {
            kind: ProcessKind::RadialDunkl { rs, k },
            start: vec![0.05],
            t_horizon: 4.0,
            dt: 1e-3,
            seed: 11,
        };
        let mut hits = 0;
        for p in 0..20 {
            let traj = simulate_path(&spec, p).unwrap();
            if let Some(h) = &traj.hit {
                hits += 1;
                assert_eq!(h.wall, "alpha=e1");
                assert!(h.time > 0.0 && h.time <= 4.0);
            }
        }
        assert!(hits >= 15, "only {} of 20 paths absorbed", hits);
    }

    #[test]
    fn unattainable_wall_never_hit() {
        let spec = b2_spec(0.9, 1.1, vec![0.4, 0.2], 1e-3, 0.5, 5);
        for p in 0..10 {
            let traj = simulate_path(&spec, p).unwrap();
            assert!(traj.hit.is_none(), "path {} absorbed: {:?}", p, traj.hit);
        }
    }

    #[test]
    fn jacobi_mirror_symmetry() {
        // phi -> (pi/2 - phi_m, ..., pi/2 - phi_1) maps the (p, q) process
        // with reversed, negated increments to the (q, p) process
        let m = 3;
        let (beta, p, q) = (2.0, 4.0, 3.0);
        let start = vec![1.1, 0.8, 0.4];
        let mirrored_start: Vec<f64> = start
            .iter()
            .rev()
            .map(|&v| std::f64::consts::FRAC_PI_2 - v)
            .collect();
        let spec = ProcessSpec {
            kind: ProcessKind::BetaJacobi { m, beta, p, q },
            start,
            t_horizon: 0.2,
            dt: 1e-3,
            seed: 9,
        };
        let spec_m = ProcessSpec {
            kind: ProcessKind::BetaJacobi { m, beta, p: q, q: p },
            start: mirrored_start,
            t_horizon: 0.2,
            dt: 1e-3,
            seed: 9,
        };
        let a = simulate_with_noise(&spec, &mut ChaChaNoise::for_path(9, 0)).unwrap();
        let b = simulate_with_noise(
            &spec_m,
            &mut MirroredNoise(ChaChaNoise::for_path(9, 0)),
        )
        .unwrap();
        assert_eq!(a.times.len(), b.times.len());
        for (sa, sb) in a.states.iter().zip(&b.states) {
            for (i, &va) in sa.iter().enumerate() {
                let vb = std::f64::consts::FRAC_PI_2 - sb[m - 1 - i];
                assert!((va - vb).abs() < 1e-9, "{} vs {}", va, vb);
            }
        }
    }

    #[test]
    fn coupling_domination_b2() {
        let spec = b2_spec(0.75, 0.6, vec![1.5, 0.7], 1e-4, 0.3, 21);
        let report = coupling_check(&spec, &[0.0, 1.0], 100).unwrap();
        assert!(report.samples > 0);
        assert!(
            report.violation_fraction <= 2e-3,
            "violation fraction {}",
            report.violation_fraction
        );
    }

    #[test]
    fn laguerre_consistency_quick() {
        let report = laguerre_consistency(
            2,
            2.0,
            3.5,
            &[2.5, 1.0],
            0.3,
            2e-3,
            800,
            2024,
        )
        .unwrap();
        for (i, &p) in report.p_values.iter().enumerate() {
            assert!(p > 1e-4, "component {}: p = {} (D = {})", i, p, report.statistics[i]);
        }
    }

    #[test]
    fn bad_config_errors() {
        let spec = b2_spec(0.6, 0.9, vec![1.0, 2.0], 1e-3, 0.2, 0); // unordered
        assert!(matches!(simulate(&spec), Err(SdeError::BadConfig(_))));
        let spec = b2_spec(0.6, 0.9, vec![2.0], 1e-3, 0.2, 0); // wrong dim
        assert!(matches!(simulate(&spec), Err(SdeError::BadConfig(_))));
    }
}
