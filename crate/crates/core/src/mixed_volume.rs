//! Exact mixed volumes, normalized so that `MV(P, ..., P) = m! vol(P)` and
//! the unit simplex has mixed volume 1.
//!
//! Two independent routes:
//!
//! * [`mv_inclusion_exclusion`] expands the volume polynomial of the
//!   Minkowski sum: `MV = sum_S (-1)^(m-|S|) vol(sum_{i in S} P_i)`, with
//!   every volume computed exactly on lattice hulls.
//! * [`mv_mixed_cells`] lifts each support by random integers and sums
//!   `|det|` over the fine mixed cells of the induced regular mixed
//!   subdivision. Cells are found by a depth-first search with LP pruning;
//!   every candidate cell is then certified in exact integer arithmetic.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::hull::{self, det_i128};
use crate::poly::{Polynomial, Variable};
use crate::polytope::NewtonPolytope;
use crate::rng::seeded;
use crate::system::MinorSystem;
use crate::{Error, Result};

pub const INCLUSION_EXCLUSION_MAX_DIM: usize = 6;
pub const MIXED_CELLS_MAX_DIM: usize = 8;
pub const MAX_LIFT_ATTEMPTS: usize = 10;
const LIFT_RANGE: i64 = 1 << 31;
const LP_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MvMethod {
    InclusionExclusion,
    MixedCells,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedVolumeResult {
    pub value: u64,
    pub method: MvMethod,
    pub polytopes: Vec<NewtonPolytope>,
    /// Number of fine mixed cells (mixed-cell method only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cells: Option<usize>,
    /// Liftings drawn before a generic one was found (mixed-cell method only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lift_attempts: Option<usize>,
}

fn check_input(polys: &[NewtonPolytope], max_dim: usize) -> Result<usize> {
    let m = polys.len();
    if m == 0 {
        return Err(Error::Dimension("need at least one polytope".into()));
    }
    if m > max_dim {
        return Err(Error::Dimension(format!("dimension {m} exceeds the limit {max_dim}")));
    }
    if let Some(p) = polys.iter().find(|p| p.dim != m) {
        return Err(Error::Dimension(format!(
            "{m} polytopes but one lives in dimension {}",
            p.dim
        )));
    }
    if polys.iter().any(NewtonPolytope::is_empty) {
        return Err(Error::Dimension("empty polytope".into()));
    }
    Ok(m)
}

fn factorial(m: usize) -> i128 {
    (1..=m as i128).product()
}

pub fn mv_inclusion_exclusion(polys: &[NewtonPolytope]) -> Result<MixedVolumeResult> {
    let m = check_input(polys, INCLUSION_EXCLUSION_MAX_DIM)?;
    let subsets = 1usize << m;
    // boundary points of each partial Minkowski sum, built up by adding the
    // highest-index summand to the sum of the rest
    let mut sums: Vec<Vec<Vec<i64>>> = vec![Vec::new(); subsets];
    let mut total: i128 = 0;
    for mask in 1..subsets {
        let high = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        let rest = mask ^ (1 << high);
        let points = if rest == 0 {
            polys[high].points.clone()
        } else {
            hull::minkowski_sum(&sums[rest], &polys[high].points)
        };
        let h = hull::hull(&points, m);
        let sign = if (m - mask.count_ones() as usize).is_multiple_of(2) { 1 } else { -1 };
        total += sign * h.normalized_volume;
        sums[mask] = h.boundary;
    }
    let f = factorial(m);
    if total % f != 0 || total < 0 {
        return Err(Error::Dimension(format!(
            "inclusion-exclusion produced a non-integral mixed volume {total}/{f}"
        )));
    }
    Ok(MixedVolumeResult {
        value: (total / f) as u64,
        method: MvMethod::InclusionExclusion,
        polytopes: polys.to_vec(),
        cells: None,
        lift_attempts: None,
    })
}

struct Lifted {
    points: Vec<Vec<i64>>,
    lift: Vec<i64>,
}

enum CellSearch {
    Done { volume: i128, cells: usize },
    Degenerate,
}

pub fn mv_mixed_cells(polys: &[NewtonPolytope], seed: u64) -> Result<MixedVolumeResult> {
    let m = check_input(polys, MIXED_CELLS_MAX_DIM)?;
    let mut rng = seeded(seed);
    for attempt in 1..=MAX_LIFT_ATTEMPTS {
        let lifted: Vec<Lifted> = polys
            .iter()
            .map(|p| Lifted {
                points: p.points.clone(),
                lift: p.points.iter().map(|_| rng.gen_range(0..LIFT_RANGE)).collect(),
            })
            .collect();
        if let CellSearch::Done { volume, cells } = search_cells(&lifted, m) {
            return Ok(MixedVolumeResult {
                value: volume as u64,
                method: MvMethod::MixedCells,
                polytopes: polys.to_vec(),
                cells: Some(cells),
                lift_attempts: Some(attempt),
            });
        }
    }
    Err(Error::DegenerateLifting(MAX_LIFT_ATTEMPTS))
}

fn search_cells(lifted: &[Lifted], m: usize) -> CellSearch {
    // candidate pairs per polytope: lower edges of its own lifted points
    let mut edges: Vec<(usize, Vec<(usize, usize)>)> = Vec::with_capacity(m);
    for (i, lp) in lifted.iter().enumerate() {
        let k = lp.points.len();
        let mut list = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                if lp_feasible(lifted, &[(i, (a, b))], m) {
                    list.push((a, b));
                }
            }
        }
        edges.push((i, list));
    }
    // fewest candidates first prunes earliest
    edges.sort_by_key(|(i, list)| (list.len(), *i));

    let mut chosen: Vec<(usize, (usize, usize))> = Vec::with_capacity(m);
    let mut volume = 0i128;
    let mut cells = 0usize;
    if dfs(lifted, &edges, m, &mut chosen, &mut volume, &mut cells).is_err() {
        return CellSearch::Degenerate;
    }
    CellSearch::Done { volume, cells }
}

struct Degenerate;

fn dfs(
    lifted: &[Lifted],
    edges: &[(usize, Vec<(usize, usize)>)],
    m: usize,
    chosen: &mut Vec<(usize, (usize, usize))>,
    volume: &mut i128,
    cells: &mut usize,
) -> Result<(), Degenerate> {
    let depth = chosen.len();
    if depth == m {
        if let Some(v) = certify_cell(lifted, chosen)? {
            *volume += v;
            *cells += 1;
        }
        return Ok(());
    }
    let (poly, list) = &edges[depth];
    for &pair in list {
        chosen.push((*poly, pair));
        if depth == 0 || lp_feasible(lifted, chosen, m) {
            dfs(lifted, edges, m, chosen, volume, cells)?;
        }
        chosen.pop();
    }
    Ok(())
}

// Relaxed feasibility: is there an inner normal (alpha, 1) whose lower face
// on every chosen polytope contains the chosen pair?
fn lp_feasible(lifted: &[Lifted], chosen: &[(usize, (usize, usize))], m: usize) -> bool {
    let scale = LIFT_RANGE as f64;
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let alpha: Vec<_> = (0..m)
        .map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY)))
        .collect();
    for &(i, (a, b)) in chosen {
        let lp_i = &lifted[i];
        let pa = &lp_i.points[a];
        let wa = lp_i.lift[a] as f64 / scale;
        let row = |q: &[i64]| -> Vec<(minilp::Variable, f64)> {
            alpha
                .iter()
                .zip(q.iter().zip(pa))
                .map(|(&v, (x, y))| (v, (x - y) as f64))
                .filter(|(_, c)| *c != 0.0)
                .collect()
        };
        let pb = &lp_i.points[b];
        let wb = lp_i.lift[b] as f64 / scale;
        lp.add_constraint(row(pb), ComparisonOp::Eq, wa - wb);
        for (c, q) in lp_i.points.iter().enumerate() {
            if c == a || c == b {
                continue;
            }
            let wc = lp_i.lift[c] as f64 / scale;
            lp.add_constraint(row(q), ComparisonOp::Ge, wa - wc - LP_SLACK);
        }
    }
    lp.solve().is_ok()
}

// Exact check of a full candidate cell; returns |det| if it is a mixed cell.
fn certify_cell(lifted: &[Lifted], chosen: &[(usize, (usize, usize))]) -> Result<Option<i128>, Degenerate> {
    let m = chosen.len();
    let rows: Vec<Vec<i128>> = chosen
        .iter()
        .map(|&(i, (a, b))| {
            let p = &lifted[i].points;
            p[b].iter().zip(&p[a]).map(|(x, y)| (x - y) as i128).collect()
        })
        .collect();
    let rhs: Vec<i128> = chosen
        .iter()
        .map(|&(i, (a, b))| (lifted[i].lift[a] - lifted[i].lift[b]) as i128)
        .collect();
    let det = det_i128(rows.clone());
    if det == 0 {
        return Ok(None);
    }
    // alpha = adj(D) rhs / det
    let beta: Vec<i128> = (0..m)
        .map(|j| {
            (0..m)
                .map(|i| {
                    let minor: Vec<Vec<i128>> = rows
                        .iter()
                        .enumerate()
                        .filter(|(r, _)| *r != i)
                        .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                        .collect();
                    let cof = det_i128(minor);
                    let cof = if (i + j) % 2 == 0 { cof } else { -cof };
                    cof * rhs[i]
                })
                .sum()
        })
        .collect();
    let sign = det.signum();
    for &(i, (a, b)) in chosen {
        let lp = &lifted[i];
        let pa = &lp.points[a];
        for (c, q) in lp.points.iter().enumerate() {
            if c == a {
                continue;
            }
            let val: i128 = q.iter().zip(pa).zip(&beta).map(|((x, y), bj)| (x - y) as i128 * bj).sum::<i128>()
                + (lp.lift[c] - lp.lift[a]) as i128 * det;
            let val = val * sign;
            if c == b {
                debug_assert_eq!(val, 0);
                continue;
            }
            if val == 0 {
                return Err(Degenerate);
            }
            if val < 0 {
                return Ok(None);
            }
        }
    }
    Ok(Some(det.abs()))
}

/// Product of the total degrees in `unknowns`.
pub fn bezout_number(polys: &[&Polynomial], unknowns: &[Variable]) -> u64 {
    polys.iter().map(|p| u64::from(p.degree_in(unknowns))).product()
}

pub fn bezout_bound(sys: &MinorSystem) -> u64 {
    bezout_number(&sys.polynomials(), &sys.system_unknowns)
}
