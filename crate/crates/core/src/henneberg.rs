//! Henneberg constructions: replaying step sequences, recovering a sequence
//! from a Laman graph, and the H1/H2 classification.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::graph::{edge, Edge, Graph};
use crate::laman::{is_laman_on, is_laman_pebble};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StepKind {
    H1,
    H2,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HennebergStep {
    kind: StepKind,
    new_vertex: usize,
    attach: Vec<usize>,
    removed_edge: Option<Edge>,
}

impl HennebergStep {
    pub fn h1(new_vertex: usize, attach: [usize; 2]) -> Result<Self> {
        if attach[0] == attach[1] {
            return Err(Error::Precondition("H1 attach vertices must differ".into()));
        }
        Ok(Self {
            kind: StepKind::H1,
            new_vertex,
            attach: attach.to_vec(),
            removed_edge: None,
        })
    }

    pub fn h2(new_vertex: usize, attach: [usize; 3], removed: Edge) -> Result<Self> {
        let distinct: BTreeSet<_> = attach.iter().collect();
        if distinct.len() != 3 {
            return Err(Error::Precondition("H2 attach vertices must differ".into()));
        }
        let removed = edge(removed.0, removed.1);
        if !attach.contains(&removed.0) || !attach.contains(&removed.1) || removed.0 == removed.1 {
            return Err(Error::Precondition(
                "H2 removed edge must join two attach vertices".into(),
            ));
        }
        Ok(Self {
            kind: StepKind::H2,
            new_vertex,
            attach: attach.to_vec(),
            removed_edge: Some(removed),
        })
    }

    pub fn kind(&self) -> StepKind {
        self.kind
    }

    pub fn new_vertex(&self) -> usize {
        self.new_vertex
    }

    pub fn attach(&self) -> &[usize] {
        &self.attach
    }

    pub fn removed_edge(&self) -> Option<Edge> {
        self.removed_edge
    }
}

/// Steps applied in order to a base triangle (vertices 1, 2, 3 unless a
/// different base is given).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HennebergSequence {
    pub base: [usize; 3],
    pub steps: Vec<HennebergStep>,
}

impl HennebergSequence {
    pub fn new(steps: Vec<HennebergStep>) -> Self {
        Self {
            base: [1, 2, 3],
            steps,
        }
    }

    pub fn with_base(base: [usize; 3], steps: Vec<HennebergStep>) -> Self {
        Self { base, steps }
    }

    pub fn is_all_h1(&self) -> bool {
        self.steps.iter().all(|s| s.kind == StepKind::H1)
    }

    pub fn count(&self, kind: StepKind) -> usize {
        self.steps.iter().filter(|s| s.kind == kind).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphClass {
    H1,
    H2,
}

pub fn replay(seq: &HennebergSequence) -> Result<Graph> {
    let n = 3 + seq.steps.len();
    let mut present: BTreeSet<usize> = seq.base.iter().copied().collect();
    if present.len() != 3 {
        return Err(Error::InvalidStep {
            index: 0,
            msg: "base triangle vertices must differ".into(),
        });
    }
    let [a, b, c] = seq.base;
    let mut edges: BTreeSet<Edge> = [edge(a, b), edge(a, c), edge(b, c)].into();
    for (index, step) in seq.steps.iter().enumerate() {
        let fail = |msg: String| Error::InvalidStep { index, msg };
        let v = step.new_vertex;
        if present.contains(&v) {
            return Err(fail(format!("vertex {v} already exists")));
        }
        if let Some(&w) = step.attach.iter().find(|w| !present.contains(w)) {
            return Err(fail(format!("attach vertex {w} does not exist yet")));
        }
        let expected = match step.kind {
            StepKind::H1 => 2,
            StepKind::H2 => 3,
        };
        if step.attach.len() != expected {
            return Err(fail(format!("expected {expected} attach vertices")));
        }
        if let Some(e) = step.removed_edge {
            if !edges.remove(&e) {
                return Err(fail(format!("removed edge {{{},{}}} is absent", e.0, e.1)));
            }
        }
        for &w in &step.attach {
            edges.insert(edge(v, w));
        }
        present.insert(v);
    }
    if present.iter().copied().ne(1..=n) {
        return Err(Error::InvalidStep {
            index: seq.steps.len(),
            msg: format!("vertex ids are not exactly 1..={n}"),
        });
    }
    Graph::new(n, edges)
}

// Working state for reverse searches: surviving vertices and their edges.
#[derive(Clone)]
struct Reduced {
    alive: BTreeSet<usize>,
    edges: BTreeSet<Edge>,
}

impl Reduced {
    fn from_graph(g: &Graph) -> Self {
        Self {
            alive: (1..=g.n()).collect(),
            edges: g.edge_set().clone(),
        }
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == v, b == v) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    fn without(&self, v: usize) -> Self {
        let mut next = self.clone();
        next.alive.remove(&v);
        next.edges.retain(|&(a, b)| a != v && b != v);
        next
    }

    fn is_laman(&self) -> bool {
        let vs: Vec<usize> = self.alive.iter().copied().collect();
        let es: Vec<Edge> = self.edges.iter().copied().collect();
        is_laman_on(&vs, &es)
    }

    fn base(&self) -> Option<[usize; 3]> {
        let vs: Vec<usize> = self.alive.iter().copied().collect();
        (vs.len() == 3 && self.edges.len() == 3).then(|| [vs[0], vs[1], vs[2]])
    }
}

/// Recovers a Henneberg construction of `g` in `g`'s own labels, so
/// `replay(&henneberg_decompose(g)?)? == *g`.
pub fn henneberg_decompose(g: &Graph) -> Result<HennebergSequence> {
    if !is_laman_pebble(g)? {
        return Err(Error::Precondition("graph is not Laman".into()));
    }
    let mut reversed = Vec::new();
    let base = decompose_rec(&Reduced::from_graph(g), &mut reversed).ok_or_else(|| {
        Error::Precondition("no Henneberg construction found for a Laman graph".into())
    })?;
    reversed.reverse();
    Ok(HennebergSequence::with_base(base, reversed))
}

fn decompose_rec(state: &Reduced, out: &mut Vec<HennebergStep>) -> Option<[usize; 3]> {
    if state.alive.len() == 3 {
        return state.base();
    }
    let by_degree = |d: usize| -> Vec<(usize, Vec<usize>)> {
        state
            .alive
            .iter()
            .map(|&v| (v, state.neighbors(v)))
            .filter(|(_, nb)| nb.len() == d)
            .collect()
    };
    for (v, nb) in by_degree(2) {
        let next = state.without(v);
        out.push(HennebergStep::h1(v, [nb[0], nb[1]]).expect("distinct neighbors"));
        if let Some(base) = decompose_rec(&next, out) {
            return Some(base);
        }
        out.pop();
    }
    for (v, nb) in by_degree(3) {
        let stripped = state.without(v);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let e = edge(nb[i], nb[j]);
            if stripped.edges.contains(&e) {
                continue;
            }
            let mut next = stripped.clone();
            next.edges.insert(e);
            if !next.is_laman() {
                continue;
            }
            out.push(HennebergStep::h2(v, [nb[0], nb[1], nb[2]], e).expect("valid H2 step"));
            if let Some(base) = decompose_rec(&next, out) {
                return Some(base);
            }
            out.pop();
        }
    }
    None
}

/// An all-H1 construction of `g`, if one exists.
pub fn h1_construction(g: &Graph) -> Result<Option<HennebergSequence>> {
    if !is_laman_pebble(g)? {
        return Err(Error::Precondition("graph is not Laman".into()));
    }
    let mut dead = HashSet::new();
    let mut reversed = Vec::new();
    let base = h1_rec(&Reduced::from_graph(g), &mut reversed, &mut dead);
    Ok(base.map(|base| {
        reversed.reverse();
        HennebergSequence::with_base(base, reversed)
    }))
}

fn h1_rec(
    state: &Reduced,
    out: &mut Vec<HennebergStep>,
    dead: &mut HashSet<Vec<usize>>,
) -> Option<[usize; 3]> {
    if state.alive.len() == 3 {
        return state.base();
    }
    let key: Vec<usize> = state.alive.iter().copied().collect();
    if dead.contains(&key) {
        return None;
    }
    for &v in &state.alive {
        let nb = state.neighbors(v);
        if nb.len() != 2 {
            continue;
        }
        out.push(HennebergStep::h1(v, [nb[0], nb[1]]).expect("distinct neighbors"));
        if let Some(base) = h1_rec(&state.without(v), out, dead) {
            return Some(base);
        }
        out.pop();
    }
    dead.insert(key);
    None
}

pub fn classify(g: &Graph) -> Result<GraphClass> {
    Ok(match h1_construction(g)? {
        Some(_) => GraphClass::H1,
        None => GraphClass::H2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures;

    #[test]
    fn empty_sequence_is_triangle() {
        assert_eq!(replay(&HennebergSequence::new(vec![])).unwrap(), Graph::triangle());
        assert!(henneberg_decompose(&Graph::triangle()).unwrap().steps.is_empty());
    }

    #[test]
    fn one_h1_step() {
        let seq = HennebergSequence::new(vec![HennebergStep::h1(4, [1, 2]).unwrap()]);
        let g = replay(&seq).unwrap();
        assert_eq!((g.n(), g.num_edges()), (4, 5));
        assert!(is_laman_pebble(&g).unwrap());
        assert_eq!(g, fixtures::h1_four());
        assert_eq!(classify(&g).unwrap(), GraphClass::H1);
    }

    #[test]
    fn step_invariants() {
        assert!(HennebergStep::h1(4, [1, 1]).is_err());
        assert!(HennebergStep::h2(4, [1, 2, 3], (1, 4)).is_err());
        assert!(HennebergStep::h2(4, [1, 2, 2], (1, 2)).is_err());
        let s = HennebergStep::h2(4, [1, 2, 3], (2, 1)).unwrap();
        assert_eq!(s.removed_edge(), Some((1, 2)));
    }

    #[test]
    fn replay_rejects_invalid_steps() {
        let missing = HennebergSequence::new(vec![HennebergStep::h1(4, [1, 5]).unwrap()]);
        assert!(matches!(replay(&missing), Err(Error::InvalidStep { index: 0, .. })));
        let reused = HennebergSequence::new(vec![HennebergStep::h1(3, [1, 2]).unwrap()]);
        assert!(replay(&reused).is_err());
        let absent = HennebergSequence::new(vec![
            HennebergStep::h1(4, [1, 2]).unwrap(),
            HennebergStep::h2(5, [3, 4, 1], (3, 4)).unwrap(),
        ]);
        assert!(matches!(replay(&absent), Err(Error::InvalidStep { index: 1, .. })));
        let gap = HennebergSequence::new(vec![HennebergStep::h1(5, [1, 2]).unwrap()]);
        assert!(replay(&gap).is_err());
    }

    #[test]
    fn desargues_and_k33_need_h2() {
        for g in [fixtures::desargues(), fixtures::k33()] {
            let seq = henneberg_decompose(&g).unwrap();
            assert!(seq.count(StepKind::H2) >= 1);
            assert_eq!(replay(&seq).unwrap(), g);
            assert_eq!(classify(&g).unwrap(), GraphClass::H2);
        }
        assert_eq!(classify(&fixtures::seven_worst()).unwrap(), GraphClass::H2);
    }

    #[test]
    fn decompose_requires_laman() {
        assert!(henneberg_decompose(&Graph::complete(4)).is_err());
        assert!(classify(&Graph::complete(4)).is_err());
    }
}
