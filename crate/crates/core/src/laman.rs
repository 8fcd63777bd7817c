//! Laman (generic minimal rigidity) tests: the (2,3)-pebble game and a
//! brute-force subset scan used as its oracle.

use crate::graph::{Edge, Graph};
use crate::{Error, Result};

/// Incremental (2,3)-pebble game. Vertices carry two pebbles; an edge is
/// independent iff four pebbles can be gathered on its endpoints.
#[derive(Debug, Clone)]
pub struct PebbleGame {
    pebbles: Vec<u8>,
    // out[v] holds heads of edges oriented away from v.
    out: Vec<Vec<usize>>,
    accepted: usize,
}

impl PebbleGame {
    /// Game on vertex ids `0..capacity`; ids that never receive an edge are
    /// inert.
    pub fn new(capacity: usize) -> Self {
        Self {
            pebbles: vec![2; capacity],
            out: vec![Vec::new(); capacity],
            accepted: 0,
        }
    }

    pub fn accepted(&self) -> usize {
        self.accepted
    }

    /// Tries to insert `{u, v}` as an independent edge.
    pub fn insert(&mut self, u: usize, v: usize) -> bool {
        while self.pebbles[u] < 2 {
            if !self.gather(u, v) {
                break;
            }
        }
        while self.pebbles[v] < 2 {
            if !self.gather(v, u) {
                break;
            }
        }
        if self.pebbles[u] + self.pebbles[v] < 4 {
            return false;
        }
        self.pebbles[u] -= 1;
        self.out[u].push(v);
        self.accepted += 1;
        true
    }

    // Pulls one free pebble to `root` along a directed path that avoids
    // `keep`, reversing the path.
    fn gather(&mut self, root: usize, keep: usize) -> bool {
        let cap = self.pebbles.len();
        let mut parent = vec![usize::MAX; cap];
        let mut seen = vec![false; cap];
        seen[root] = true;
        seen[keep] = true;
        let mut stack = vec![root];
        let mut found = None;
        while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    found = Some(y);
                    break;
                }
                stack.push(y);
            }
            if found.is_some() {
                break;
            }
        }
        let Some(mut w) = found else {
            return false;
        };
        self.pebbles[w] -= 1;
        while w != root {
            let p = parent[w];
            let pos = self.out[p].iter().position(|&h| h == w).expect("path edge");
            self.out[p].swap_remove(pos);
            self.out[w].push(p);
            w = p;
        }
        self.pebbles[root] += 1;
        true
    }
}

/// Runs the pebble game on an arbitrary vertex subset; `true` iff the edges
/// are independent and number `2|V| - 3`.
pub(crate) fn is_laman_on(vertices: &[usize], edges: &[Edge]) -> bool {
    let k = vertices.len();
    if k < 2 || edges.len() + 3 != 2 * k {
        return false;
    }
    let cap = vertices.iter().copied().max().unwrap_or(0) + 1;
    let mut game = PebbleGame::new(cap);
    edges.iter().all(|&(u, v)| game.insert(u, v))
}

pub fn is_laman_pebble(g: &Graph) -> Result<bool> {
    if g.n() < 3 {
        return Err(Error::Precondition(format!("Laman test needs n >= 3, got {}", g.n())));
    }
    let vertices: Vec<usize> = (1..=g.n()).collect();
    let edges: Vec<Edge> = g.edges().collect();
    Ok(is_laman_on(&vertices, &edges))
}

pub const BRUTEFORCE_MAX_N: usize = 9;

/// Direct check of the counting condition over every vertex subset.
pub fn is_laman_bruteforce(g: &Graph) -> Result<bool> {
    let n = g.n();
    if n < 3 {
        return Err(Error::Precondition(format!("Laman test needs n >= 3, got {n}")));
    }
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::Precondition(format!(
            "brute-force Laman test limited to n <= {BRUTEFORCE_MAX_N}, got {n}"
        )));
    }
    if g.num_edges() != 2 * n - 3 {
        return Ok(false);
    }
    let masks: Vec<(u32, u32)> = g
        .edges()
        .map(|(u, v)| (1u32 << (u - 1), 1u32 << (v - 1)))
        .collect();
    for subset in 0u32..(1 << n) {
        let k = subset.count_ones() as usize;
        if k < 3 || k == n {
            continue;
        }
        let inside = masks
            .iter()
            .filter(|&&(a, b)| subset & a != 0 && subset & b != 0)
            .count();
        if inside > 2 * k - 3 {
            return Ok(false);
        }
    }
    Ok(true)
}
