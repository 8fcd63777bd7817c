//! Square systems of 4-point Cayley–Menger minors.

use std::collections::BTreeSet;

use num::{BigRational, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cayley_menger::{minor_poly, CayleyMengerMatrix};
use crate::graph::{edge, Edge};
use crate::mixed_volume::{bezout_bound, mv_mixed_cells};
use crate::poly::{Polynomial, Variable};
use crate::polytope::{newton_polytope, NewtonPolytope};
use crate::rng::{derive, test_rational};
use crate::{Error, Result};

pub const DEFAULT_BUDGET: usize = 100_000;
pub const JACOBIAN_RETRIES: usize = 3;

#[derive(Clone, Debug)]
pub struct MinorCandidate {
    pub indices: [usize; 4],
    pub unknowns: BTreeSet<Variable>,
    pub parameters: BTreeSet<Variable>,
    pub poly: Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SizeClass {
    NMinus3,
    NMinus2,
}

impl SizeClass {
    pub fn equations(self, n: usize) -> usize {
        match self {
            SizeClass::NMinus3 => n.saturating_sub(3),
            SizeClass::NMinus2 => n.saturating_sub(2),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MinorSystem {
    pub equations: Vec<MinorCandidate>,
    pub system_unknowns: Vec<Variable>,
    pub size_class: SizeClass,
}

impl MinorSystem {
    /// Builds a system on `n` points; fails unless it is square with
    /// `n - 3` or `n - 2` equations.
    pub fn new(n: usize, equations: Vec<MinorCandidate>) -> Result<Self> {
        let unknowns: BTreeSet<Variable> = equations.iter().flat_map(|c| c.unknowns.iter().copied()).collect();
        if unknowns.len() != equations.len() {
            return Err(Error::Precondition(format!(
                "{} equations in {} unknowns is not square",
                equations.len(),
                unknowns.len()
            )));
        }
        let size_class = if equations.len() + 3 == n {
            SizeClass::NMinus3
        } else if equations.len() + 2 == n {
            SizeClass::NMinus2
        } else {
            return Err(Error::Precondition(format!(
                "{} equations on {n} points is neither n-3 nor n-2",
                equations.len()
            )));
        };
        Ok(Self {
            equations,
            system_unknowns: unknowns.into_iter().collect(),
            size_class,
        })
    }

    /// System made of the minors on the given 4-point sets.
    pub fn from_index_sets(cm: &CayleyMengerMatrix, sets: &[[usize; 4]]) -> Result<Self> {
        let mut eqs = Vec::with_capacity(sets.len());
        for s in sets {
            let poly = minor_poly(cm, s)?;
            let (unknowns, parameters) = poly.variables_present().into_iter().partition(Variable::is_unknown);
            let mut indices = *s;
            indices.sort_unstable();
            eqs.push(MinorCandidate {
                indices,
                unknowns,
                parameters,
                poly,
            });
        }
        Self::new(cm.n(), eqs)
    }

    pub fn index_sets(&self) -> Vec<[usize; 4]> {
        self.equations.iter().map(|c| c.indices).collect()
    }

    pub fn polynomials(&self) -> Vec<&Polynomial> {
        self.equations.iter().map(|c| &c.poly).collect()
    }

    pub fn newton_polytopes(&self) -> Result<Vec<NewtonPolytope>> {
        self.equations
            .iter()
            .map(|c| newton_polytope(&c.poly, &self.system_unknowns))
            .collect()
    }
}

/// All 4-point minors with their unknown/parameter split.
pub fn enumerate_minors(cm: &CayleyMengerMatrix) -> Result<Vec<MinorCandidate>> {
    let n = cm.n();
    if n < 4 {
        return Err(Error::Precondition(format!("need at least 4 points, got {n}")));
    }
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    let indices = [a, b, c, d];
                    let poly = minor_poly(cm, &indices)?;
                    let (unknowns, parameters) = poly.variables_present().into_iter().partition(Variable::is_unknown);
                    out.push(MinorCandidate {
                        indices,
                        unknowns,
                        parameters,
                        poly,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Maximum number of partial and complete subsets visited.
    pub budget: usize,
    pub seed: u64,
    /// Sort by (mixed volume, Bezout number, index sets).
    pub rank: bool,
    /// Keep only systems whose solved distances pin every vertex by
    /// trilateration (see [`is_completable`]).
    pub require_completable: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            seed: 0,
            rank: false,
            require_completable: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub systems: Vec<MinorSystem>,
    pub visited: usize,
    pub exhausted_budget: bool,
}

/// Square, well-constrained subsets of the 4-point minors with the size
/// demanded by `size_class`, scanned in lexicographic order.
pub fn find_systems(cm: &CayleyMengerMatrix, size_class: SizeClass, options: &SearchOptions) -> Result<SearchOutcome> {
    let n = cm.n();
    if n < 5 {
        return Err(Error::Precondition(format!("need at least 5 points, got {n}")));
    }
    let k = size_class.equations(n);
    let minors = enumerate_minors(cm)?;
    // minors without unknowns can never be part of a square system
    let useful: Vec<usize> = (0..minors.len()).filter(|&i| !minors[i].unknowns.is_empty()).collect();

    let mut state = Scan {
        minors: &minors,
        useful: &useful,
        k,
        budget: options.budget,
        visited: 0,
        chosen: Vec::with_capacity(k),
        found: Vec::new(),
    };
    state.dfs(0, &BTreeSet::new());
    let exhausted_budget = state.visited >= options.budget;
    let visited = state.visited;
    let found = state.found;

    let known = cm.graph().edge_set().clone();
    let mut systems: Vec<MinorSystem> = found
        .into_par_iter()
        .filter_map(|idx| {
            let eqs: Vec<MinorCandidate> = idx.iter().map(|&i| minors[i].clone()).collect();
            let sys = MinorSystem::new(n, eqs).ok()?;
            if options.require_completable && !is_completable(n, &known, &sys.system_unknowns) {
                return None;
            }
            is_well_constrained(&sys, options.seed).then_some(sys)
        })
        .collect();
    if options.rank {
        systems = rank_systems(systems, options.seed)?
            .into_iter()
            .map(|r| r.system)
            .collect();
    }
    Ok(SearchOutcome {
        systems,
        visited,
        exhausted_budget,
    })
}

struct Scan<'a> {
    minors: &'a [MinorCandidate],
    useful: &'a [usize],
    k: usize,
    budget: usize,
    visited: usize,
    chosen: Vec<usize>,
    found: Vec<Vec<usize>>,
}

impl Scan<'_> {
    fn dfs(&mut self, from: usize, union: &BTreeSet<Variable>) {
        if self.chosen.len() == self.k {
            if union.len() == self.k {
                self.found.push(self.chosen.clone());
            }
            return;
        }
        let need = self.k - self.chosen.len();
        for pos in from..self.useful.len() {
            if self.useful.len() - pos < need || self.visited >= self.budget {
                return;
            }
            self.visited += 1;
            let i = self.useful[pos];
            let mut next = union.clone();
            next.extend(self.minors[i].unknowns.iter().copied());
            if next.len() > self.k {
                continue;
            }
            self.chosen.push(i);
            self.dfs(pos + 1, &next);
            self.chosen.pop();
        }
    }
}

/// Full-rank test of the Jacobian at random rational points (parameters and
/// unknowns both drawn), retried before declaring rank deficiency.
pub fn is_well_constrained(sys: &MinorSystem, seed: u64) -> bool {
    let m = sys.equations.len();
    if m == 0 || m != sys.system_unknowns.len() {
        return false;
    }
    let vars = sys.equations[0].poly.vars().clone();
    let jac: Vec<Vec<Polynomial>> = sys
        .equations
        .iter()
        .map(|c| sys.system_unknowns.iter().map(|&u| c.poly.derivative(u)).collect())
        .collect();
    let mut tag = 0u64;
    for ix in sys.index_sets().iter().flatten() {
        tag = tag.wrapping_mul(31).wrapping_add(*ix as u64);
    }
    let mut rng = derive(seed, tag);
    for _ in 0..JACOBIAN_RETRIES {
        let point: Vec<BigRational> = vars.iter().map(|_| test_rational(&mut rng)).collect();
        let matrix: Vec<Vec<BigRational>> = jac
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(&point)).collect())
            .collect();
        if rational_rank(matrix) == m {
            return true;
        }
    }
    false
}

fn rational_rank(mut a: Vec<Vec<BigRational>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[rank][col];
            for c in col..cols {
                let v = &f * &a[rank][c];
                a[r][c] -= v;
            }
        }
        rank += 1;
    }
    rank
}

/// Unknowns of the matrix that the system does not contain.
pub fn leftover_unknowns(sys: &MinorSystem, cm: &CayleyMengerMatrix) -> BTreeSet<Variable> {
    let inside: BTreeSet<Variable> = sys.system_unknowns.iter().copied().collect();
    cm.unknowns().into_iter().filter(|u| !inside.contains(u)).collect()
}

/// Order in which points can be placed in the plane from known distances:
/// a base triangle, then each further point from three already placed
/// anchors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrilaterationPlan {
    pub base: [usize; 3],
    pub steps: Vec<(usize, [usize; 3])>,
}

pub fn trilateration_plan(n: usize, known: &BTreeSet<Edge>) -> Option<TrilaterationPlan> {
    let has = |a: usize, b: usize| known.contains(&edge(a, b));
    for a in 1..=n {
        for b in a + 1..=n {
            if !has(a, b) {
                continue;
            }
            for c in b + 1..=n {
                if !(has(a, c) && has(b, c)) {
                    continue;
                }
                let mut placed = vec![a, b, c];
                let mut steps = Vec::new();
                loop {
                    let next = (1..=n).filter(|v| !placed.contains(v)).find_map(|v| {
                        let anchors: Vec<usize> = placed.iter().copied().filter(|&p| has(p, v)).take(3).collect();
                        (anchors.len() == 3).then(|| (v, [anchors[0], anchors[1], anchors[2]]))
                    });
                    match next {
                        Some(step) => {
                            placed.push(step.0);
                            steps.push(step);
                        }
                        None => break,
                    }
                }
                if placed.len() == n {
                    return Some(TrilaterationPlan { base: [a, b, c], steps });
                }
            }
        }
    }
    None
}

/// Whether the edges together with the system unknowns determine every
/// point by trilateration.
pub fn is_completable(n: usize, edges: &BTreeSet<Edge>, unknowns: &[Variable]) -> bool {
    let mut known = edges.clone();
    known.extend(unknowns.iter().map(|u| {
        let (i, j) = u.pair();
        edge(i, j)
    }));
    trilateration_plan(n, &known).is_some()
}

#[derive(Clone, Debug)]
pub struct RankedSystem {
    pub system: MinorSystem,
    pub mixed_volume: u64,
    pub bezout: u64,
}

/// Sorts by mixed volume, then Bezout number, then index sets.
pub fn rank_systems(systems: Vec<MinorSystem>, seed: u64) -> Result<Vec<RankedSystem>> {
    let mut ranked: Vec<RankedSystem> = systems
        .into_par_iter()
        .map(|system| {
            let mv = mv_mixed_cells(&system.newton_polytopes()?, seed)?.value;
            let bezout = bezout_bound(&system);
            Ok(RankedSystem {
                system,
                mixed_volume: mv,
                bezout,
            })
        })
        .collect::<Result<_>>()?;
    ranked.sort_by(|a, b| {
        (a.mixed_volume, a.bezout, a.system.index_sets()).cmp(&(b.mixed_volume, b.bezout, b.system.index_sets()))
    });
    Ok(ranked)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemSummary {
    pub equations: Vec<[usize; 4]>,
    pub unknowns: Vec<String>,
    pub size_class: SizeClass,
    pub well_constrained: bool,
    pub leftover_unknowns: Vec<String>,
}

pub fn summarize(sys: &MinorSystem, cm: &CayleyMengerMatrix, seed: u64) -> SystemSummary {
    SystemSummary {
        equations: sys.index_sets(),
        unknowns: sys.system_unknowns.iter().map(ToString::to_string).collect(),
        size_class: sys.size_class,
        well_constrained: is_well_constrained(sys, seed),
        leftover_unknowns: leftover_unknowns(sys, cm).iter().map(ToString::to_string).collect(),
    }
}
