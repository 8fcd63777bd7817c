//! Counting the real roots of a minor system that come from actual planar
//! embeddings of the graph.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::embed::LengthAssignment;
use crate::embeddable::embeddable_check;
use crate::graph::{edge, Edge, Graph};
use crate::homotopy::{solve_total_degree, ComplexSystem, SolveReport, TrackerOptions};
use crate::poly::Variable;
use crate::system::{trilateration_plan, MinorSystem};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct RealRootReport {
    /// Real roots with positive coordinates whose completed distance matrix
    /// is planar.
    pub embedding_roots: usize,
    pub positive_real_roots: usize,
    pub solver: SolveReport,
}

pub fn count_real_embedding_roots(g: &Graph, sys: &MinorSystem, lengths: &LengthAssignment, seed: u64) -> Result<usize> {
    let report = real_root_report(g, sys, lengths, seed)?;
    if report.solver.unreliable {
        return Err(Error::UnreliableSolve {
            failed: report.solver.failed_paths,
            total: report.solver.count.total_paths,
        });
    }
    Ok(report.embedding_roots)
}

/// Same count with the solver details; unreliability is left to the caller.
pub fn real_root_report(g: &Graph, sys: &MinorSystem, lengths: &LengthAssignment, seed: u64) -> Result<RealRootReport> {
    if !lengths.covers(g) {
        return Err(Error::Precondition("lengths do not cover every edge".into()));
    }
    let params: BTreeMap<Variable, f64> = g
        .edges()
        .map(|(u, v)| (Variable::parameter(u, v), lengths.get(u, v).unwrap_or_default()))
        .collect();
    let f = ComplexSystem::from_minor_system(sys, &params)?;
    let solver = solve_total_degree(&f, seed, &TrackerOptions::default())?;

    let mut positive = 0;
    let mut embedding_roots = 0;
    for root in solver.roots.iter().filter(|r| r.real) {
        let values = root.real_parts();
        if values.iter().any(|&x| x <= 0.0) {
            continue;
        }
        positive += 1;
        let mut known: BTreeMap<Edge, f64> = lengths.lengths.clone();
        for (u, x) in sys.system_unknowns.iter().zip(values) {
            let (i, j) = u.pair();
            known.insert(edge(i, j), x);
        }
        if let Some(dist) = complete_distances(g.n(), &known) {
            if embeddable_check(&dist, 2)?.embeddable {
                embedding_roots += 1;
            }
        }
    }
    Ok(RealRootReport {
        embedding_roots,
        positive_real_roots: positive,
        solver,
    })
}

/// Places the points by trilateration from the known squared distances and
/// fills the remaining entries from the placement; known entries are kept
/// as given so inconsistencies surface in the embeddability check.
pub fn complete_distances(n: usize, known: &BTreeMap<Edge, f64>) -> Option<Vec<Vec<f64>>> {
    let keys: BTreeSet<Edge> = known.keys().copied().collect();
    let plan = trilateration_plan(n, &keys)?;
    let d = |u: usize, v: usize| known[&edge(u, v)];
    let [a, b, c] = plan.base;
    let mut pts = vec![[f64::NAN; 2]; n];
    let lab = d(a, b);
    let x = (lab + d(a, c) - d(b, c)) / (2.0 * lab.sqrt());
    let y2 = d(a, c) - x * x;
    if !(lab > 0.0) || y2 < 0.0 {
        return None;
    }
    pts[a - 1] = [0.0, 0.0];
    pts[b - 1] = [lab.sqrt(), 0.0];
    pts[c - 1] = [x, y2.sqrt()];
    for (v, anchors) in &plan.steps {
        let p: Vec<[f64; 2]> = anchors.iter().map(|&k| pts[k - 1]).collect();
        let l: Vec<f64> = anchors.iter().map(|&k| d(k, *v)).collect();
        let norm = |q: [f64; 2]| q[0] * q[0] + q[1] * q[1];
        // |x - p_k|^2 = l_k, differenced against the first anchor
        let rows: Vec<([f64; 2], f64)> = (1..3)
            .map(|k| {
                (
                    [2.0 * (p[k][0] - p[0][0]), 2.0 * (p[k][1] - p[0][1])],
                    l[0] - l[k] + norm(p[k]) - norm(p[0]),
                )
            })
            .collect();
        let det = rows[0].0[0] * rows[1].0[1] - rows[0].0[1] * rows[1].0[0];
        if det.abs() < 1e-12 {
            return None;
        }
        pts[v - 1] = [
            (rows[0].1 * rows[1].0[1] - rows[1].1 * rows[0].0[1]) / det,
            (rows[0].0[0] * rows[1].1 - rows[1].0[0] * rows[0].1) / det,
        ];
    }
    let mut dist = vec![vec![0.0; n]; n];
    for i in 1..=n {
        for j in i + 1..=n {
            let value = known.get(&edge(i, j)).copied().unwrap_or_else(|| {
                let (p, q) = (pts[i - 1], pts[j - 1]);
                (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)
            });
            dist[i - 1][j - 1] = value;
            dist[j - 1][i - 1] = value;
        }
    }
    Some(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley_menger::build_cm;
    use crate::embed::sample_lengths;
    use crate::embeddable::squared_distances;
    use crate::graph::fixtures;

    #[test]
    fn completion_reproduces_a_configuration() {
        let pts = [[0.1, 0.2], [0.9, 0.1], [0.5, 0.8], [0.3, 0.4], [0.7, 0.6]];
        let full = squared_distances(&pts);
        let mut known = BTreeMap::new();
        for (i, j) in [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4), (2, 5), (3, 5), (4, 5)] {
            known.insert((i, j), full[i - 1][j - 1]);
        }
        let dist = complete_distances(5, &known).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((dist[i][j] - full[i][j]).abs() < 1e-12);
            }
        }
        known.remove(&(4, 5));
        known.remove(&(3, 5));
        assert!(complete_distances(5, &known).is_none());
    }

    #[test]
    fn desargues_counts_are_bounded() {
        let g = fixtures::desargues();
        let cm = build_cm(&g);
        let sys = MinorSystem::from_index_sets(&cm, &[[1, 4, 5, 6], [1, 3, 5, 6], [1, 2, 3, 5]]).unwrap();
        for seed in 0..3 {
            let l = sample_lengths(&g, seed).unwrap();
            let count = count_real_embedding_roots(&g, &sys, &l, seed).unwrap();
            assert!((1..=12).contains(&count), "seed {seed}: {count}");
        }
    }

    #[test]
    fn four_vertex_h1_graph() {
        // one equation in the single unknown: both real embeddings appear
        let g = fixtures::h1_four();
        let cm = build_cm(&g);
        let unknown = cm.unknowns()[0];
        let (i, j) = unknown.pair();
        let sys = MinorSystem::from_index_sets(&cm, &[[1, 2, 3, 4]]).unwrap();
        assert_eq!(sys.system_unknowns, vec![Variable::unknown(i, j)]);
        for seed in 0..5 {
            let l = sample_lengths(&g, seed).unwrap();
            assert_eq!(count_real_embedding_roots(&g, &sys, &l, seed).unwrap(), 2);
        }
    }
}
