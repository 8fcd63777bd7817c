//! Total-degree homotopy continuation for small square systems.
//!
//! The target system is homogenized and tracked in a random affine chart
//! `a . X = 1` of projective space, so paths heading to infinity stay
//! bounded and show up as a vanishing homogenizing coordinate.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::poly::Variable;
use crate::polytope::NewtonPolytope;
use crate::rng::derive;
use crate::system::MinorSystem;
use crate::{Error, Result};

type C = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrackerOptions {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub corrector_iterations: usize,
    pub corrector_tolerance: f64,
    pub residual_tolerance: f64,
    pub dedup_tolerance: f64,
    pub real_tolerance: f64,
    pub torus_tolerance: f64,
    pub divergence: f64,
    pub max_failed_fraction: f64,
    pub max_attempts: usize,
}

impl Default for TrackerOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.05,
            min_step: 1e-7,
            max_step: 0.1,
            corrector_iterations: 3,
            corrector_tolerance: 1e-9,
            residual_tolerance: 1e-10,
            dedup_tolerance: 1e-6,
            real_tolerance: 1e-8,
            torus_tolerance: 1e-8,
            divergence: 1e12,
            max_failed_fraction: 0.05,
            max_attempts: 3,
        }
    }
}

/// Square polynomial system with complex coefficients; each equation is a
/// list of `(coefficient, exponent vector)` terms.
#[derive(Clone, Debug)]
pub struct ComplexSystem {
    nvars: usize,
    equations: Vec<Vec<(C, Vec<u32>)>>,
    degrees: Vec<u32>,
}

impl ComplexSystem {
    pub fn new(nvars: usize, equations: Vec<Vec<(C, Vec<u32>)>>) -> Result<Self> {
        if equations.len() != nvars || nvars == 0 {
            return Err(Error::Precondition(format!(
                "{} equations in {nvars} unknowns is not square",
                equations.len()
            )));
        }
        let mut scaled = Vec::with_capacity(nvars);
        let mut degrees = Vec::with_capacity(nvars);
        for (i, eq) in equations.into_iter().enumerate() {
            let eq: Vec<(C, Vec<u32>)> = eq.into_iter().filter(|(c, _)| c.norm() > 0.0).collect();
            if let Some((_, e)) = eq.iter().find(|(_, e)| e.len() != nvars) {
                return Err(Error::Dimension(format!("exponent {e:?} in equation {i} has wrong length")));
            }
            let d = eq.iter().map(|(_, e)| e.iter().sum::<u32>()).max().unwrap_or(0);
            if d == 0 {
                return Err(Error::Precondition(format!("equation {i} is constant")));
            }
            let big = eq.iter().map(|(c, _)| c.norm()).fold(0.0, f64::max);
            scaled.push(eq.into_iter().map(|(c, e)| (c / big, e)).collect());
            degrees.push(d);
        }
        Ok(Self {
            nvars,
            equations: scaled,
            degrees,
        })
    }

    pub fn from_real(nvars: usize, equations: Vec<Vec<(f64, Vec<u32>)>>) -> Result<Self> {
        Self::new(
            nvars,
            equations
                .into_iter()
                .map(|eq| eq.into_iter().map(|(c, e)| (C::new(c, 0.0), e)).collect())
                .collect(),
        )
    }

    /// Substitutes floating parameter values into a minor system.
    pub fn from_minor_system(sys: &MinorSystem, parameters: &BTreeMap<Variable, f64>) -> Result<Self> {
        let eqs = sys
            .equations
            .iter()
            .map(|c| c.poly.numeric_terms(&sys.system_unknowns, parameters))
            .collect::<Result<Vec<_>>>()?;
        Self::from_real(sys.system_unknowns.len(), eqs)
    }

    /// Random complex coefficients on the given supports (one polytope's
    /// lattice points per equation).
    pub fn random_on_supports(supports: &[NewtonPolytope], rng: &mut impl Rng) -> Result<Self> {
        let eqs = supports
            .iter()
            .map(|p| {
                p.points
                    .iter()
                    .map(|e| {
                        let c = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                        (c, e.iter().map(|&k| k as u32).collect())
                    })
                    .collect()
            })
            .collect();
        Self::new(supports.len(), eqs)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn supports(&self) -> Vec<Vec<Vec<u32>>> {
        self.equations
            .iter()
            .map(|eq| eq.iter().map(|(_, e)| e.clone()).collect())
            .collect()
    }

    pub fn bezout(&self) -> u64 {
        self.degrees.iter().map(|&d| u64::from(d)).product()
    }

    pub fn eval(&self, x: &[C]) -> Vec<C> {
        self.equations
            .iter()
            .map(|eq| eq.iter().map(|(c, e)| c * monomial(x, e)).sum())
            .collect()
    }

    pub fn jacobian(&self, x: &[C]) -> DMatrix<C> {
        let m = self.nvars;
        let mut j = DMatrix::zeros(m, m);
        for (i, eq) in self.equations.iter().enumerate() {
            for (c, e) in eq {
                for k in 0..m {
                    if e[k] == 0 {
                        continue;
                    }
                    let mut d = e.clone();
                    d[k] -= 1;
                    j[(i, k)] += c * f64::from(e[k]) * monomial(x, &d);
                }
            }
        }
        j
    }

    /// Largest per-equation backward error `|f_i(x)| / max(1, sum |c x^e|)`.
    pub fn residual(&self, x: &[C]) -> f64 {
        self.equations
            .iter()
            .map(|eq| {
                let mut val = C::new(0.0, 0.0);
                let mut mag = 0.0;
                for (c, e) in eq {
                    let t = c * monomial(x, e);
                    val += t;
                    mag += t.norm();
                }
                val.norm() / mag.max(1.0)
            })
            .fold(0.0, f64::max)
    }

    // homogeneous value and Jacobian at X = (x0, x1..xm)
    fn eval_homogeneous(&self, x: &[C]) -> (Vec<C>, DMatrix<C>) {
        let m = self.nvars;
        let mut f = vec![C::new(0.0, 0.0); m];
        let mut jac = DMatrix::zeros(m, m + 1);
        for (i, eq) in self.equations.iter().enumerate() {
            let d = self.degrees[i];
            for (c, e) in eq {
                let e0 = d - e.iter().sum::<u32>();
                let mut full = Vec::with_capacity(m + 1);
                full.push(e0);
                full.extend_from_slice(e);
                f[i] += c * monomial(x, &full);
                for k in 0..=m {
                    if full[k] == 0 {
                        continue;
                    }
                    let p = full[k];
                    full[k] -= 1;
                    jac[(i, k)] += c * f64::from(p) * monomial(x, &full);
                    full[k] += 1;
                }
            }
        }
        (f, jac)
    }
}

fn monomial(x: &[C], e: &[u32]) -> C {
    let mut t = C::new(1.0, 0.0);
    for (xi, &k) in x.iter().zip(e) {
        if k > 0 {
            t *= xi.powu(k);
        }
    }
    t
}

fn max_norm(x: &[C]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn serialize_point<S: Serializer>(x: &[C], s: S) -> std::result::Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = x.iter().map(|z| [z.re, z.im]).collect();
    pairs.serialize(s)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum PathEnd {
    Finite(#[serde(serialize_with = "serialize_point")] Vec<C>),
    Diverged,
    Failed,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrackedPath {
    #[serde(serialize_with = "serialize_point")]
    pub start: Vec<C>,
    pub end: PathEnd,
    pub residual: f64,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RootCount {
    pub total_paths: usize,
    pub finite_roots: usize,
    pub distinct_roots: usize,
    pub real_roots: usize,
    pub torus_roots: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Root {
    #[serde(serialize_with = "serialize_point")]
    pub coords: Vec<C>,
    pub residual: f64,
    pub real: bool,
    pub torus: bool,
    pub multiplicity: usize,
    #[serde(skip)]
    nonsingular: bool,
}

impl Root {
    pub fn real_parts(&self) -> Vec<f64> {
        self.coords.iter().map(|z| z.re).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub seed: u64,
    pub attempts: usize,
    pub options: TrackerOptions,
    pub count: RootCount,
    pub failed_paths: usize,
    pub diverged_paths: usize,
    pub unreliable: bool,
    pub path_jumping_suspected: bool,
    pub roots: Vec<Root>,
    #[serde(skip)]
    pub paths: Vec<TrackedPath>,
}

struct Track {
    x: Vec<C>,
    t: f64,
    steps: usize,
    done: bool,
    // (1 - t, |x0| / |X|) after each accepted step
    history: Vec<(f64, f64)>,
}

impl Track {
    // Exponent w in |x0| ~ (1 - t)^w over the last two decades of t; a
    // clearly positive w means the path is running off to infinity.
    fn decay_exponent(&self) -> Option<f64> {
        let &(s_end, r_end) = self.history.last()?;
        let s_end = s_end.max(1.0 - self.t).max(f64::MIN_POSITIVE);
        let &(s_prev, r_prev) = self.history.iter().rev().find(|(s, _)| *s >= 100.0 * s_end)?;
        Some((r_end / r_prev).ln() / (s_end / s_prev).ln())
    }
}

struct Homotopy<'a> {
    target: &'a ComplexSystem,
    gamma: C,
    start_constants: Vec<C>,
    chart: Vec<C>,
}

impl Homotopy<'_> {
    // H(X, t), dH/dX and dH/dt for the m equations plus the chart row
    fn eval(&self, x: &[C], t: f64) -> (DVector<C>, DMatrix<C>, DVector<C>) {
        let m = self.target.nvars;
        let (f, fj) = self.target.eval_homogeneous(x);
        let s = self.gamma * (1.0 - t);
        let mut h = DVector::zeros(m + 1);
        let mut hj = DMatrix::zeros(m + 1, m + 1);
        let mut ht = DVector::zeros(m + 1);
        for i in 0..m {
            let d = self.target.degrees[i];
            let g = x[i + 1].powu(d) - self.start_constants[i] * x[0].powu(d);
            h[i] = s * g + f[i] * t;
            ht[i] = f[i] - self.gamma * g;
            for k in 0..=m {
                hj[(i, k)] = fj[(i, k)] * t;
            }
            let df = f64::from(d);
            hj[(i, i + 1)] += s * df * x[i + 1].powu(d - 1);
            hj[(i, 0)] -= s * self.start_constants[i] * df * x[0].powu(d - 1);
        }
        h[m] = self.chart.iter().zip(x).map(|(a, b)| a * b).sum::<C>() - C::new(1.0, 0.0);
        for k in 0..=m {
            hj[(m, k)] = self.chart[k];
        }
        (h, hj, ht)
    }

    fn velocity(&self, x: &[C], t: f64) -> Option<Vec<C>> {
        let (_, hj, ht) = self.eval(x, t);
        let v = hj.lu().solve(&(-ht))?;
        v.iter().all(|z| z.is_finite()).then(|| v.iter().copied().collect())
    }

    fn predict(&self, x: &[C], t: f64, h: f64) -> Option<Vec<C>> {
        let axpy = |a: &[C], k: &[C], s: f64| -> Vec<C> { a.iter().zip(k).map(|(p, q)| p + q * s).collect() };
        let k1 = self.velocity(x, t)?;
        let k2 = self.velocity(&axpy(x, &k1, h / 2.0), t + h / 2.0)?;
        let k3 = self.velocity(&axpy(x, &k2, h / 2.0), t + h / 2.0)?;
        let k4 = self.velocity(&axpy(x, &k3, h), t + h)?;
        Some(
            (0..x.len())
                .map(|i| x[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0))
                .collect(),
        )
    }

    fn correct(&self, mut x: Vec<C>, t: f64, opts: &TrackerOptions) -> Option<Vec<C>> {
        for _ in 0..opts.corrector_iterations {
            let (h, hj, _) = self.eval(&x, t);
            let dx = hj.lu().solve(&(-h))?;
            let scale = 1.0 + max_norm(&x);
            let step = dx.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if !step.is_finite() || step > 0.1 * scale {
                return None;
            }
            for (xi, d) in x.iter_mut().zip(dx.iter()) {
                *xi += d;
            }
            if step < opts.corrector_tolerance * scale {
                return Some(x);
            }
        }
        None
    }

    fn track(&self, start: Vec<C>, opts: &TrackerOptions, max_step: f64) -> Track {
        let mut x = start;
        let mut t = 0.0;
        let mut h = opts.initial_step.min(max_step);
        let mut streak = 0;
        let mut steps = 0;
        let mut history = Vec::new();
        while t < 1.0 {
            let step = h.min(1.0 - t);
            let next = self
                .predict(&x, t, step)
                .and_then(|p| self.correct(p, t + step, opts));
            steps += 1;
            match next {
                Some(y) => {
                    x = y;
                    history.push((1.0 - t - step, x[0].norm() / max_norm(&x)));
                    t = if step >= 1.0 - t { 1.0 } else { t + step };
                    streak += 1;
                    if streak >= 4 {
                        h = (h * 2.0).min(max_step);
                        streak = 0;
                    }
                }
                None => {
                    h /= 2.0;
                    streak = 0;
                    if h < opts.min_step {
                        return Track {
                            x,
                            t,
                            steps,
                            done: false,
                            history,
                        };
                    }
                }
            }
        }
        Track {
            x,
            t,
            steps,
            done: true,
            history,
        }
    }
}

/// Total-degree homotopy solve of a square system.
pub fn solve_total_degree(sys: &ComplexSystem, seed: u64, opts: &TrackerOptions) -> Result<SolveReport> {
    let mut attempt = 0;
    let mut max_step = opts.max_step;
    loop {
        attempt += 1;
        let report = solve_once(sys, seed, attempt, max_step, opts);
        if !report.path_jumping_suspected || attempt >= opts.max_attempts {
            return Ok(report);
        }
        max_step /= 2.0;
    }
}

fn random_unit(rng: &mut impl Rng) -> C {
    C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn solve_once(sys: &ComplexSystem, seed: u64, attempt: usize, max_step: f64, opts: &TrackerOptions) -> SolveReport {
    let m = sys.nvars;
    let mut rng = derive(seed, attempt as u64);
    let gamma = random_unit(&mut rng);
    let start_constants: Vec<C> = (0..m).map(|_| random_unit(&mut rng)).collect();
    let chart: Vec<C> = (0..=m)
        .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let hom = Homotopy {
        target: sys,
        gamma,
        start_constants,
        chart,
    };

    // start points: x_i = x0 * (root of unity scaled by gamma_i^(1/d_i))
    let mut starts: Vec<Vec<C>> = vec![Vec::new()];
    for i in 0..m {
        let d = sys.degrees[i];
        let base = hom.start_constants[i].powf(1.0 / f64::from(d));
        let roots: Vec<C> = (0..d)
            .map(|k| base * C::from_polar(1.0, std::f64::consts::TAU * f64::from(k) / f64::from(d)))
            .collect();
        starts = starts
            .into_iter()
            .flat_map(|s| {
                roots.iter().map(move |r| {
                    let mut s = s.clone();
                    s.push(*r);
                    s
                })
            })
            .collect();
    }
    let starts: Vec<Vec<C>> = starts
        .into_iter()
        .map(|w| {
            let denom = hom.chart[0] + hom.chart[1..].iter().zip(&w).map(|(a, b)| a * b).sum::<C>();
            let x0 = C::new(1.0, 0.0) / denom;
            std::iter::once(x0).chain(w.iter().map(|z| z * x0)).collect()
        })
        .collect();

    let paths: Vec<(TrackedPath, Option<Root>)> = starts
        .into_par_iter()
        .map(|start| finish_path(&hom, start, max_step, opts))
        .collect();

    let total = paths.len();
    let mut failed = 0;
    let mut diverged = 0;
    let mut finite = 0;
    let mut roots: Vec<Root> = Vec::new();
    let mut jumping = false;
    for (path, root) in &paths {
        match path.end {
            PathEnd::Failed => failed += 1,
            PathEnd::Diverged => diverged += 1,
            PathEnd::Finite(_) => {}
        }
        let Some(root) = root else { continue };
        finite += 1;
        let scale = max_norm(&root.coords).max(1.0);
        let same = roots.iter_mut().find(|r| {
            r.coords
                .iter()
                .zip(&root.coords)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max)
                <= opts.dedup_tolerance * scale
        });
        match same {
            Some(r) => {
                r.multiplicity += 1;
                if r.nonsingular && root.nonsingular {
                    jumping = true;
                }
            }
            None => roots.push(root.clone()),
        }
    }
    let count = RootCount {
        total_paths: total,
        finite_roots: finite,
        distinct_roots: roots.len(),
        real_roots: roots.iter().filter(|r| r.real).count(),
        torus_roots: roots.iter().filter(|r| r.torus).count(),
    };
    SolveReport {
        seed,
        attempts: attempt,
        options: *opts,
        count,
        failed_paths: failed,
        diverged_paths: diverged,
        unreliable: failed as f64 > opts.max_failed_fraction * total as f64,
        path_jumping_suspected: jumping,
        roots,
        paths: paths.into_iter().map(|(p, _)| p).collect(),
    }
}

fn finish_path(hom: &Homotopy, start: Vec<C>, max_step: f64, opts: &TrackerOptions) -> (TrackedPath, Option<Root>) {
    let track = hom.track(start.clone(), opts, max_step);
    let Track { ref x, t, steps, done, .. } = track;
    let rel0 = x[0].norm() / max_norm(x).max(f64::MIN_POSITIVE);
    let mut path = TrackedPath {
        start,
        end: PathEnd::Failed,
        residual: f64::INFINITY,
        steps,
    };
    if !done && t < 0.9 {
        return (path, None);
    }
    if rel0 < 1e-14 {
        path.end = PathEnd::Diverged;
        return (path, None);
    }
    let affine: Vec<C> = x[1..].iter().map(|z| z / x[0]).collect();
    // Newton may wander to an unrelated root from a poor endpoint, so the
    // polished point has to stay near where tracking stopped
    let reach = if done { 1e-4 } else { 1e-1 };
    let polished = polish(hom.target, affine.clone(), opts).filter(|r| {
        let gap = r.coords.iter().zip(&affine).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        gap <= reach * max_norm(&affine).max(1.0)
    });
    match polished {
        Some(root) if max_norm(&root.coords) <= opts.divergence => {
            path.residual = root.residual;
            path.end = PathEnd::Finite(root.coords.clone());
            (path, Some(root))
        }
        _ => {
            // an endpoint that will not polish is a root at infinity when the
            // homogenizing coordinate has collapsed
            let escaping = !done && track.decay_exponent().is_some_and(|w| w > 0.1);
            if rel0 < 1e-3 || escaping || max_norm(&x[1..]) / x[0].norm() > opts.divergence {
                path.end = PathEnd::Diverged;
            }
            (path, None)
        }
    }
}

/// Affine Newton refinement; returns a root only if the residual
/// tolerance is met.
pub fn polish_point(sys: &ComplexSystem, x: Vec<C>, opts: &TrackerOptions) -> Option<Root> {
    polish(sys, x, opts)
}

fn polish(sys: &ComplexSystem, mut x: Vec<C>, opts: &TrackerOptions) -> Option<Root> {
    let mut best = sys.residual(&x);
    for _ in 0..50 {
        if !x.iter().all(|z| z.is_finite()) {
            return None;
        }
        let f = DVector::from_vec(sys.eval(&x));
        let dx = sys.jacobian(&x).lu().solve(&(-f))?;
        let cand: Vec<C> = x.iter().zip(dx.iter()).map(|(a, b)| a + b).collect();
        let r = sys.residual(&cand);
        let step = dx.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if !(r <= best) && best < opts.residual_tolerance {
            break;
        }
        x = cand;
        best = r;
        if step <= 1e-15 * (1.0 + max_norm(&x)) {
            break;
        }
    }
    if !(best < opts.residual_tolerance) || !x.iter().all(|z| z.is_finite()) {
        return None;
    }
    let sv = sys.jacobian(&x).singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    Some(Root {
        real: x.iter().all(|z| z.im.abs() < opts.real_tolerance * z.norm().max(1.0)),
        torus: x.iter().all(|z| z.norm() > opts.torus_tolerance),
        residual: best,
        multiplicity: 1,
        nonsingular: smin > 1e-8 * smax.max(1.0),
        coords: x,
    })
}
