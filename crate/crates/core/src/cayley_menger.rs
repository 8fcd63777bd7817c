//! Symbolic Cayley–Menger matrices and their bordered minors.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::BigRational;

use crate::graph::Graph;
use crate::poly::{Polynomial, Variable};
use crate::{Error, Result};

/// Largest minor (number of points) expanded symbolically.
pub const MAX_MINOR_POINTS: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    Zero,
    One,
    Var(Variable),
}

/// Bordered squared-distance matrix of a graph: row and column 0 are ones
/// (zero corner), the diagonal is zero, and entry `(i, j)` is the parameter
/// `c_i_j` for an edge or the unknown `x_i_j` otherwise.
#[derive(Clone, Debug)]
pub struct CayleyMengerMatrix {
    n: usize,
    graph: Graph,
    vars: Arc<[Variable]>,
}

impl CayleyMengerMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Every pair variable, sorted; the ambient list of all minors.
    pub fn vars(&self) -> &Arc<[Variable]> {
        &self.vars
    }

    pub fn unknowns(&self) -> Vec<Variable> {
        self.vars.iter().copied().filter(Variable::is_unknown).collect()
    }

    pub fn parameters(&self) -> Vec<Variable> {
        self.vars.iter().copied().filter(|v| !v.is_unknown()).collect()
    }

    pub fn pair_variable(&self, i: usize, j: usize) -> Variable {
        if self.graph.has_edge(i, j) {
            Variable::parameter(i, j)
        } else {
            Variable::unknown(i, j)
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Entry {
        match (row, col) {
            (0, 0) => Entry::Zero,
            (0, _) | (_, 0) => Entry::One,
            (r, c) if r == c => Entry::Zero,
            (r, c) => Entry::Var(self.pair_variable(r, c)),
        }
    }
}

pub fn build_cm(g: &Graph) -> CayleyMengerMatrix {
    let n = g.n();
    let mut vars: Vec<Variable> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .map(|(i, j)| {
            if g.has_edge(i, j) {
                Variable::parameter(i, j)
            } else {
                Variable::unknown(i, j)
            }
        })
        .collect();
    vars.sort();
    CayleyMengerMatrix {
        n,
        graph: g.clone(),
        vars: vars.into(),
    }
}

/// Determinant of the bordered submatrix on rows and columns
/// `{0, indices...}`, expanded over the full pair-variable list.
pub fn minor_poly(cm: &CayleyMengerMatrix, indices: &[usize]) -> Result<Polynomial> {
    let k = indices.len();
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if k < 2
        || k > cm.n
        || k > MAX_MINOR_POINTS
        || sorted.len() != k
        || sorted.iter().any(|&i| i == 0 || i > cm.n)
    {
        return Err(Error::InvalidMinor(indices.to_vec()));
    }
    let rows: Vec<usize> = std::iter::once(0).chain(indices.iter().copied()).collect();
    let size = rows.len();
    let entries: Vec<Vec<Entry>> = rows
        .iter()
        .map(|&r| rows.iter().map(|&c| cm.entry(r, c)).collect())
        .collect();
    let slot: BTreeMap<Variable, usize> = cm.vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();

    let mut acc: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    let mut perm: Vec<usize> = Vec::with_capacity(size);
    let mut used = vec![false; size];
    let mut expo = vec![0u32; cm.vars.len()];
    leibniz(&entries, &slot, &mut perm, &mut used, &mut expo, 1, &mut acc);

    Ok(Polynomial::from_terms(
        cm.vars.clone(),
        acc.into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(e, c)| (crate::poly::rational(c), e)),
    ))
}

// Depth-first Leibniz expansion; `sign` tracks the parity of the partial
// permutation via inversions added at each level.
fn leibniz(
    m: &[Vec<Entry>],
    slot: &BTreeMap<Variable, usize>,
    perm: &mut Vec<usize>,
    used: &mut [bool],
    expo: &mut [u32],
    sign: i64,
    acc: &mut BTreeMap<Vec<u32>, i64>,
) {
    let row = perm.len();
    if row == m.len() {
        *acc.entry(expo.to_vec()).or_insert(0) += sign;
        return;
    }
    for col in 0..m.len() {
        if used[col] {
            continue;
        }
        let entry = m[row][col];
        if entry == Entry::Zero {
            continue;
        }
        // columns already used that are larger than `col` form inversions
        let inversions = perm.iter().filter(|&&c| c > col).count();
        let s = if inversions % 2 == 0 { sign } else { -sign };
        used[col] = true;
        perm.push(col);
        if let Entry::Var(v) = entry {
            expo[slot[&v]] += 1;
        }
        leibniz(m, slot, perm, used, expo, s, acc);
        if let Entry::Var(v) = entry {
            expo[slot[&v]] -= 1;
        }
        perm.pop();
        used[col] = false;
    }
}

/// Exact substitution of parameter values.
pub fn specialize(p: &Polynomial, parameter_values: &BTreeMap<Variable, BigRational>) -> Result<Polynomial> {
    p.specialize(parameter_values)
}
