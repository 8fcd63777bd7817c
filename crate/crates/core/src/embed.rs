//! Edge-length assignments and exact enumeration of embeddings for graphs
//! built by H1 steps alone.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::complex::Complex64;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::graph::{edge, Edge, Graph};
use crate::henneberg::{replay, HennebergSequence};
use crate::laman::is_laman_pebble;
use crate::rng::seeded;
use crate::{Error, Result};

type C = Complex64;

pub const SAMPLE_ATTEMPTS: usize = 10_000;
pub const MIN_TRIANGLE_AREA: f64 = 1e-3;
pub const LENGTH_TOLERANCE: f64 = 1e-9;
const TANGENCY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Sampled,
    External,
}

/// Squared edge lengths.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthAssignment {
    pub n: usize,
    pub lengths: BTreeMap<Edge, f64>,
    pub provenance: Provenance,
    /// The configuration the lengths were measured on, when sampled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<Vec<[f64; 2]>>,
}

impl LengthAssignment {
    pub fn external(n: usize, lengths: BTreeMap<Edge, f64>) -> Result<Self> {
        for (&(u, v), &l) in &lengths {
            if u == v || u == 0 || v > n {
                return Err(Error::InvalidGraph(format!("length given for invalid pair {u} {v}")));
            }
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::Precondition(format!("squared length of {u} {v} must be positive")));
            }
        }
        let lengths = lengths.into_iter().map(|((u, v), l)| (edge(u, v), l)).collect();
        Ok(Self {
            n,
            lengths,
            provenance: Provenance::External,
            source: None,
        })
    }

    pub fn get(&self, u: usize, v: usize) -> Option<f64> {
        self.lengths.get(&edge(u, v)).copied()
    }

    fn require(&self, u: usize, v: usize) -> Result<f64> {
        self.get(u, v)
            .ok_or_else(|| Error::Precondition(format!("no length for edge {u} {v}")))
    }

    pub fn covers(&self, g: &Graph) -> bool {
        g.edges().all(|(u, v)| self.get(u, v).is_some())
    }

    /// `n <count>` header, then one `u v value` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for ((u, v), l) in &self.lengths {
            let _ = writeln!(out, "{u} {v} {l:e}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut lengths = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            let bad = |msg: &str| Error::Parse { line, msg: msg.into() };
            match fields.as_slice() {
                ["n", k] if n.is_none() && lengths.is_empty() => {
                    n = Some(k.parse::<usize>().map_err(|_| bad("bad vertex count"))?);
                }
                [u, v, l] => {
                    let u: usize = u.parse().map_err(|_| bad("bad vertex id"))?;
                    let v: usize = v.parse().map_err(|_| bad("bad vertex id"))?;
                    let l: f64 = l.parse().map_err(|_| bad("bad length"))?;
                    if lengths.insert(edge(u, v), l).is_some() {
                        return Err(bad("duplicate edge"));
                    }
                }
                _ => return Err(bad("expected \"u v value\"")),
            }
        }
        let n = n.unwrap_or_else(|| lengths.keys().map(|&(_, v)| v).max().unwrap_or(0));
        Self::external(n, lengths)
    }
}

fn triangle_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs()
}

/// Random configuration in the unit square, away from collinear triples,
/// and its squared edge lengths.
pub fn sample_lengths(g: &Graph, seed: u64) -> Result<LengthAssignment> {
    if !is_laman_pebble(g)? {
        return Err(Error::Precondition("length sampling needs a Laman graph".into()));
    }
    let n = g.n();
    let mut rng = seeded(seed);
    for _ in 0..SAMPLE_ATTEMPTS {
        let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen(), rng.gen()]).collect();
        let degenerate = (0..n).any(|a| {
            (a + 1..n).any(|b| (b + 1..n).any(|c| triangle_area(pts[a], pts[b], pts[c]) < MIN_TRIANGLE_AREA))
        });
        if degenerate {
            continue;
        }
        let lengths = g
            .edges()
            .map(|(u, v)| {
                let (p, q) = (pts[u - 1], pts[v - 1]);
                ((u, v), (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2))
            })
            .collect();
        return Ok(LengthAssignment {
            n,
            lengths,
            provenance: Provenance::Sampled,
            source: Some(pts),
        });
    }
    Err(Error::SamplingExhausted(SAMPLE_ATTEMPTS))
}

/// True iff every edge's squared length matches within relative tolerance.
pub fn verify_embedding(g: &Graph, coords: &[[f64; 2]], lengths: &LengthAssignment) -> Result<bool> {
    if coords.len() < g.n() {
        return Err(Error::Precondition(format!(
            "coordinates for {} of {} vertices",
            coords.len(),
            g.n()
        )));
    }
    for (u, v) in g.edges() {
        let l = lengths.require(u, v)?;
        let (p, q) = (coords[u - 1], coords[v - 1]);
        let d = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
        if (d - l).abs() > LENGTH_TOLERANCE * l {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Quotient {
    ModRigid,
    ModRigidAndReflection,
}

/// One placement of the vertices; coordinates may be complex when a circle
/// intersection leaves the real plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub points: Vec<[C; 2]>,
    pub real: bool,
}

impl Embedding {
    pub fn real_points(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|[x, y]| [x.re, y.re]).collect()
    }

    /// Edge check with the algebraic squared distance `dx^2 + dy^2`.
    pub fn verify(&self, g: &Graph, lengths: &LengthAssignment) -> Result<bool> {
        if self.points.len() < g.n() {
            return Err(Error::Precondition("embedding misses vertices".into()));
        }
        for (u, v) in g.edges() {
            let l = lengths.require(u, v)?;
            let d = sq_dist(self.points[u - 1], self.points[v - 1]);
            if (d - l).norm() > LENGTH_TOLERANCE * l {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Serialize for Embedding {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            real: bool,
            points: Vec<[[f64; 2]; 2]>,
        }
        Repr {
            real: self.real,
            points: self.points.iter().map(|[x, y]| [[x.re, x.im], [y.re, y.im]]).collect(),
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingSet {
    pub quotient: Quotient,
    pub embeddings: Vec<Embedding>,
}

impl EmbeddingSet {
    pub fn len(&self) -> usize {
        self.embeddings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.embeddings.is_empty()
    }

    pub fn real_count(&self) -> usize {
        self.embeddings.iter().filter(|e| e.real).count()
    }
}

fn sq_dist(p: [C; 2], q: [C; 2]) -> C {
    let dx = p[0] - q[0];
    let dy = p[1] - q[1];
    dx * dx + dy * dy
}

/// All embeddings of an H1-built graph with the base triangle pinned
/// (first base vertex at the origin, second on the positive x-axis, third
/// in the upper half-plane). Each H1 step branches on both intersection
/// points of two circles; intersections are taken over the complex numbers,
/// so the count is always `2^(n-3)` and [`Embedding::real`] marks the ones
/// that lie in the real plane.
pub fn enumerate_h1(g: &Graph, seq: &HennebergSequence, lengths: &LengthAssignment) -> Result<EmbeddingSet> {
    if !seq.is_all_h1() {
        return Err(Error::Precondition("sequence contains an H2 step".into()));
    }
    if replay(seq)? != *g {
        return Err(Error::Precondition("sequence does not build the graph".into()));
    }
    let n = g.n();
    let scale = lengths.lengths.values().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let [a, b, c] = seq.base;
    let lab = lengths.require(a, b)?;
    let lac = lengths.require(a, c)?;
    let lbc = lengths.require(b, c)?;
    let base_x = (lab + lac - lbc) / (2.0 * lab.sqrt());
    let h2 = lac - base_x * base_x;
    if h2 <= TANGENCY_TOLERANCE * scale {
        return Err(Error::NonGeneric(format!("base triangle {a} {b} {c} is degenerate")));
    }
    let zero = C::new(0.0, 0.0);
    let mut partial = vec![[zero, zero]; n];
    partial[a - 1] = [zero, zero];
    partial[b - 1] = [C::new(lab.sqrt(), 0.0), zero];
    partial[c - 1] = [C::new(base_x, 0.0), C::new(h2.sqrt(), 0.0)];

    let mut frontier = vec![partial];
    for (k, step) in seq.steps.iter().enumerate() {
        let w = step.new_vertex();
        let (u, v) = (step.attach()[0], step.attach()[1]);
        let luw = lengths.require(u, w)?;
        let lvw = lengths.require(v, w)?;
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for pts in frontier {
            let (p, q) = (pts[u - 1], pts[v - 1]);
            let d = [q[0] - p[0], q[1] - p[1]];
            let dd = d[0] * d[0] + d[1] * d[1];
            if dd.norm() < TANGENCY_TOLERANCE * scale {
                return Err(Error::NonGeneric(format!("step {k}: attach points {u} and {v} coincide")));
            }
            let along = (luw - lvw + dd) / (dd * 2.0);
            let h = C::new(luw, 0.0) - along * along * dd;
            if h.norm() < TANGENCY_TOLERANCE * scale {
                return Err(Error::NonGeneric(format!("step {k}: circles around {u} and {v} are tangent")));
            }
            let s = (h / dd).sqrt();
            let perp = [-d[1], d[0]];
            for sign in [1.0, -1.0] {
                let mut child = pts.clone();
                child[w - 1] = [
                    p[0] + along * d[0] + perp[0] * s * sign,
                    p[1] + along * d[1] + perp[1] * s * sign,
                ];
                next.push(child);
            }
        }
        frontier = next;
    }

    let tol = 1e-9 * scale.sqrt().max(1.0);
    let mut embeddings: Vec<Embedding> = frontier
        .into_iter()
        .map(|points| Embedding {
            real: points.iter().flatten().all(|z| z.im.abs() <= tol),
            points,
        })
        .collect();
    embeddings.sort_by(|x, y| {
        let key = |e: &Embedding| -> Vec<f64> { e.points.iter().flatten().flat_map(|z| [z.re, z.im]).collect() };
        y.real.cmp(&x.real).then_with(|| {
            key(x)
                .iter()
                .zip(key(y).iter())
                .map(|(p, q)| p.total_cmp(q))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(EmbeddingSet {
        quotient: Quotient::ModRigidAndReflection,
        embeddings,
    })
}

/// Moves a configuration into the pinned frame used by [`enumerate_h1`].
pub fn normalize_to_base(points: &[[f64; 2]], base: [usize; 3]) -> Vec<[f64; 2]> {
    let o = points[base[0] - 1];
    let t = points[base[1] - 1];
    let ang = (t[1] - o[1]).atan2(t[0] - o[0]);
    let (sin, cos) = (-ang).sin_cos();
    let mut out: Vec<[f64; 2]> = points
        .iter()
        .map(|p| {
            let (x, y) = (p[0] - o[0], p[1] - o[1]);
            [cos * x - sin * y, sin * x + cos * y]
        })
        .collect();
    if out[base[2] - 1][1] < 0.0 {
        for p in &mut out {
            p[1] = -p[1];
        }
    }
    out
}
