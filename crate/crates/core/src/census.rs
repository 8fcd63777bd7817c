//! Canonical forms and the census of Laman graphs up to isomorphism.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::graph::{edge, Graph};
use crate::henneberg::{classify, GraphClass};
use crate::{Error, Result};

pub const CENSUS_MAX_N: usize = 8;
const CANON_MAX_N: usize = 11;

/// Canonical code and the graph relabeled to the labeling that attains it.
///
/// The code is the upper-triangular adjacency bitstring, pair (1,2) as the
/// most significant bit, minimized over every labeling that orders vertices
/// by the (degree, sorted neighbor degrees) invariant.
pub fn canonical_form(g: &Graph) -> (u64, Graph) {
    let n = g.n();
    assert!(n <= CANON_MAX_N, "canonical form supports n <= {CANON_MAX_N}");
    let mut adj = vec![vec![false; n + 1]; n + 1];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let degree: Vec<usize> = (0..=n).map(|v| adj[v].iter().filter(|&&b| b).count()).collect();
    let key = |v: usize| {
        let mut nd: Vec<usize> = (1..=n).filter(|&w| adj[v][w]).map(|w| degree[w]).collect();
        nd.sort_unstable();
        (degree[v], nd)
    };
    let mut classes: BTreeMap<_, Vec<usize>> = BTreeMap::new();
    for v in 1..=n {
        classes.entry(key(v)).or_default().push(v);
    }
    // slot_class[k] = index of the class that new label k + 1 is drawn from
    let class_list: Vec<Vec<usize>> = classes.into_values().collect();
    let slot_class: Vec<usize> = class_list
        .iter()
        .enumerate()
        .flat_map(|(c, members)| std::iter::repeat_n(c, members.len()))
        .collect();

    let mut best = (u64::MAX, Vec::new());
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    search(&adj, &class_list, &slot_class, &mut order, &mut used, &mut best);

    let (code, order) = best;
    let mut perm = vec![0; n];
    for (new_minus_one, &old) in order.iter().enumerate() {
        perm[old - 1] = new_minus_one + 1;
    }
    (code, g.relabel(&perm).expect("permutation is valid"))
}

fn search(
    adj: &[Vec<bool>],
    classes: &[Vec<usize>],
    slot_class: &[usize],
    order: &mut Vec<usize>,
    used: &mut [bool],
    best: &mut (u64, Vec<usize>),
) {
    let n = slot_class.len();
    if order.len() == n {
        let mut code = 0u64;
        for a in 0..n {
            for b in a + 1..n {
                code = (code << 1) | adj[order[a]][order[b]] as u64;
            }
        }
        if code < best.0 {
            *best = (code, order.clone());
        }
        return;
    }
    for &v in &classes[slot_class[order.len()]] {
        if used[v] {
            continue;
        }
        used[v] = true;
        order.push(v);
        search(adj, classes, slot_class, order, used, best);
        order.pop();
        used[v] = false;
    }
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n() && a.num_edges() == b.num_edges() && canonical_form(a).0 == canonical_form(b).0
}

/// Every single-step Henneberg extension of `g` onto the new vertex `n + 1`.
pub fn extensions(g: &Graph) -> Vec<(crate::henneberg::StepKind, Graph)> {
    use crate::henneberg::StepKind;
    let n = g.n();
    let v = n + 1;
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            let edges = g.edges().chain([(a, v), (b, v)]);
            out.push((StepKind::H1, Graph::new(v, edges).expect("fresh vertex")));
        }
    }
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for (x, y) in [(a, b), (a, c), (b, c)] {
                    if !g.has_edge(x, y) {
                        continue;
                    }
                    let removed = edge(x, y);
                    let edges = g
                        .edges()
                        .filter(|&e| e != removed)
                        .chain([(a, v), (b, v), (c, v)]);
                    out.push((StepKind::H2, Graph::new(v, edges).expect("fresh vertex")));
                }
            }
        }
    }
    out
}

/// All Laman graphs on `n` vertices up to isomorphism, canonically labeled
/// and sorted by canonical code.
pub fn generate_laman(n: usize) -> Result<Vec<Graph>> {
    if !(3..=CENSUS_MAX_N).contains(&n) {
        return Err(Error::Precondition(format!(
            "census supports 3 <= n <= {CENSUS_MAX_N}, got {n}"
        )));
    }
    let mut level: BTreeMap<u64, Graph> = BTreeMap::new();
    let (code, tri) = canonical_form(&Graph::triangle());
    level.insert(code, tri);
    for _ in 4..=n {
        let parents: Vec<Graph> = level.into_values().collect();
        let children: Vec<(u64, Graph)> = parents
            .par_iter()
            .flat_map_iter(|g| extensions(g).into_iter().map(|(_, child)| canonical_form(&child)))
            .collect();
        level = children.into_iter().collect();
    }
    Ok(level.into_values().collect())
}

/// Census entries paired with their H1/H2 class.
pub fn classified_census(n: usize) -> Result<Vec<(Graph, GraphClass)>> {
    generate_laman(n)?
        .into_par_iter()
        .map(|g| {
            let class = classify(&g)?;
            Ok((g, class))
        })
        .collect()
}
