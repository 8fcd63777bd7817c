//! Undirected simple graphs on vertices `1..=n` and the shared edge-list
//! text format.
//!
//! ```text
//! # Desargues framework
//! n 6
//! 1 2
//! 1 3
//! ...
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Unordered vertex pair, stored with `0 < u < v`.
pub type Edge = (usize, usize);

/// Normalizes a pair so the smaller id comes first.
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidGraph(format!(
                    "edge {{{u},{v}}} has an endpoint outside 1..={n}"
                )));
            }
            if !set.insert(edge(u, v)) {
                return Err(Error::InvalidGraph(format!("duplicate edge {{{u},{v}}}")));
            }
        }
        Ok(Self { n, edges: set })
    }

    /// Builds a graph from two-digit edge labels like `"12"`, handy for the
    /// small fixtures where every id is a single digit.
    pub fn from_digit_pairs(n: usize, pairs: &[&str]) -> Result<Self> {
        let mut edges = Vec::with_capacity(pairs.len());
        for p in pairs {
            let digits: Vec<usize> = p
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidGraph(format!("bad edge label {p:?}")))?;
            if digits.len() != 2 {
                return Err(Error::InvalidGraph(format!("bad edge label {p:?}")));
            }
            edges.push((digits[0], digits[1]));
        }
        Self::new(n, edges)
    }

    pub fn triangle() -> Self {
        Self::new(3, [(1, 2), (1, 3), (2, 3)]).expect("triangle is valid")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&edge(u, v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Applies `perm` (`perm[v - 1]` is the new id of `v`).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::InvalidGraph("permutation length differs from n".into()));
        }
        Self::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u - 1], perm[v - 1])))
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_id = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("expected a vertex id, found {s:?}"),
                })
            };
            match (n, fields.as_slice()) {
                (None, ["n", count]) => n = Some(parse_id(count)?),
                (None, _) => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "expected header line \"n <count>\"".into(),
                    })
                }
                (Some(_), [u, v]) => edges.push((parse_id(u)?, parse_id(v)?)),
                (Some(_), _) => {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "expected \"u v\"".into(),
                    })
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "missing header line \"n <count>\"".into(),
        })?;
        Self::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        self.to_string()
    }

    /// Short stable identifier, e.g. `n4:1-2,1-3,1-4,2-3,2-4`.
    pub fn id(&self) -> String {
        let parts: Vec<String> = self.edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        format!("n{}:{}", self.n, parts.join(","))
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_edge_list(s)
    }
}

/// Graphs with known embedding bounds, used as test fixtures.
pub mod fixtures {
    use super::Graph;

    pub fn desargues() -> Graph {
        Graph::from_digit_pairs(6, &["12", "13", "14", "23", "25", "36", "45", "46", "56"]).unwrap()
    }

    pub fn k33() -> Graph {
        Graph::from_digit_pairs(6, &["14", "15", "16", "24", "25", "26", "34", "35", "36"]).unwrap()
    }

    /// The H2 graph on seven vertices with the largest bound (56).
    pub fn seven_worst() -> Graph {
        Graph::from_digit_pairs(
            7,
            &["12", "13", "14", "17", "23", "25", "36", "46", "47", "56", "57"],
        )
        .unwrap()
    }

    /// Triangle plus vertex 4 attached to {1, 2}.
    pub fn h1_four() -> Graph {
        Graph::from_digit_pairs(4, &["12", "13", "23", "14", "24"]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(1, 4)]).is_err());
        assert!(Graph::new(3, [(0, 1)]).is_err());
        assert!(Graph::new(3, [(1, 2), (2, 1)]).is_err());
    }

    #[test]
    fn parses_edge_list_with_comments() {
        let g: Graph = "# a triangle\nn 3\n1 2 # first\n2 3\n\n1 3\n".parse().unwrap();
        assert_eq!(g, Graph::triangle());
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match Graph::parse_edge_list("n 3\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(Graph::parse_edge_list("1 2\n").is_err());
        assert!(Graph::parse_edge_list("").is_err());
        assert!(Graph::parse_edge_list("n 3\n1 2 3\n").is_err());
    }

    #[test]
    fn degrees_and_neighbors() {
        let g = fixtures::desargues();
        assert!((1..=6).all(|v| g.degree(v) == 3));
        assert_eq!(g.neighbors(1), vec![2, 3, 4]);
        assert!(g.has_edge(5, 2));
    }
}
