//! Numeric test of whether a full squared-distance matrix is realizable in
//! `R^d`, via the Cayley–Menger rank and minor-sign conditions.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::{Error, Result};

pub const RANK_TOLERANCE: f64 = 1e-9;
pub const SIGN_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// `(-1)^k D(i_1..i_k) < 0` beyond tolerance.
    Sign,
    /// A `(d+3) x (d+3)` bordered minor does not vanish.
    Vanishing,
    /// Numeric rank of the bordered matrix exceeds `d + 2`.
    Rank,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// 1-based point ids of the offending minor (all points for `Rank`).
    pub indices: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddabilityReport {
    pub embeddable: bool,
    pub numeric_rank: usize,
    pub violation: Option<Violation>,
}

/// Bordered Cayley–Menger determinant of the given (0-based) points.
pub fn cm_determinant(dist: &[Vec<f64>], points: &[usize]) -> f64 {
    let k = points.len();
    let m = DMatrix::from_fn(k + 1, k + 1, |r, c| match (r, c) {
        (0, 0) => 0.0,
        (0, _) | (_, 0) => 1.0,
        (r, c) => dist[points[r - 1]][points[c - 1]],
    });
    m.determinant()
}

fn validate(dist: &[Vec<f64>]) -> Result<f64> {
    let n = dist.len();
    if dist.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidMatrix("matrix is not square".into()));
    }
    let scale = dist
        .iter()
        .flatten()
        .fold(1.0f64, |m, &x| if x.is_finite() { m.max(x.abs()) } else { f64::INFINITY });
    if !scale.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entry".into()));
    }
    for i in 0..n {
        if dist[i][i].abs() > 1e-12 * scale {
            return Err(Error::InvalidMatrix(format!("diagonal entry {} is non-zero", i + 1)));
        }
        for j in 0..n {
            if dist[i][j] < 0.0 {
                return Err(Error::InvalidMatrix(format!(
                    "negative squared distance at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
            if (dist[i][j] - dist[j][i]).abs() > 1e-12 * scale {
                return Err(Error::InvalidMatrix(format!(
                    "not symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(scale)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Checks realizability of `dist` (squared distances) in dimension `d`.
pub fn embeddable_check(dist: &[Vec<f64>], d: usize) -> Result<EmbeddabilityReport> {
    let scale = validate(dist)?;
    let n = dist.len();
    let slack = SIGN_TOLERANCE * scale.powi(3);

    let bordered = DMatrix::from_fn(n + 1, n + 1, |r, c| match (r, c) {
        (0, 0) => 0.0,
        (0, _) | (_, 0) => 1.0,
        (r, c) => dist[r - 1][c - 1],
    });
    let sv = bordered.singular_values();
    let numeric_rank = sv.iter().filter(|&&s| s > RANK_TOLERANCE * scale).count();

    let mut violation = None;
    'signs: for k in 2..=(d + 2).min(n) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for pts in subsets(n, k) {
            let det = cm_determinant(dist, &pts);
            if sign * det < -slack {
                violation = Some(Violation {
                    kind: ViolationKind::Sign,
                    indices: pts.iter().map(|p| p + 1).collect(),
                    value: det,
                });
                break 'signs;
            }
        }
    }
    if violation.is_none() && n >= d + 2 {
        for pts in subsets(n, d + 2) {
            let det = cm_determinant(dist, &pts);
            if det.abs() > slack {
                violation = Some(Violation {
                    kind: ViolationKind::Vanishing,
                    indices: pts.iter().map(|p| p + 1).collect(),
                    value: det,
                });
                break;
            }
        }
    }
    if violation.is_none() && numeric_rank > d + 2 {
        violation = Some(Violation {
            kind: ViolationKind::Rank,
            indices: (1..=n).collect(),
            value: numeric_rank as f64,
        });
    }
    Ok(EmbeddabilityReport {
        embeddable: violation.is_none(),
        numeric_rank,
        violation,
    })
}

/// Squared-distance matrix of a point set.
pub fn squared_distances<const D: usize>(points: &[[f64; D]]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|q| p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum())
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn unit_square_is_planar() {
        let d = squared_distances(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let r = embeddable_check(&d, 2).unwrap();
        assert!(r.embeddable, "{r:?}");
        assert_eq!(r.numeric_rank, 4);
    }

    #[test]
    fn triangle_inequality_violation() {
        let d = vec![vec![0.0, 1.0, 1.0], vec![1.0, 0.0, 9.0], vec![1.0, 9.0, 0.0]];
        let r = embeddable_check(&d, 2).unwrap();
        assert!(!r.embeddable);
        let v = r.violation.unwrap();
        assert_eq!(v.kind, ViolationKind::Sign);
        assert_eq!(v.indices, vec![1, 2, 3]);
    }

    #[test]
    fn spatial_tetrahedron_is_not_planar() {
        let mut rng = seeded(7);
        let pts: Vec<[f64; 3]> = (0..4).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect();
        let d = squared_distances(&pts);
        let r = embeddable_check(&d, 2).unwrap();
        assert!(!r.embeddable);
        // genuinely 3-dimensional: bordered rank is 5
        assert_eq!(r.numeric_rank, 5);
        assert!(embeddable_check(&d, 3).unwrap().embeddable);
    }

    #[test]
    fn cm_determinant_matches_area_formula() {
        // three points of an equilateral triangle with squared side s
        for s in [0.5, 1.0, 3.0, 7.25] {
            let d = vec![vec![0.0, s, s], vec![s, 0.0, s], vec![s, s, 0.0]];
            let area_sq = 3.0 * s * s / 16.0;
            let det = cm_determinant(&d, &[0, 1, 2]);
            assert!((det + 16.0 * area_sq).abs() < 1e-12 * s * s);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(embeddable_check(&[vec![0.0, 1.0], vec![2.0, 0.0]], 2).is_err());
        assert!(embeddable_check(&[vec![0.0, -1.0], vec![-1.0, 0.0]], 2).is_err());
        assert!(embeddable_check(&[vec![1.0, 1.0], vec![1.0, 0.0]], 2).is_err());
        assert!(embeddable_check(&[vec![0.0, 1.0]], 2).is_err());
    }

    #[test]
    fn random_planar_sets_are_embeddable() {
        let mut rng = seeded(11);
        for n in 3..=7 {
            for _ in 0..20 {
                let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen(), rng.gen()]).collect();
                let r = embeddable_check(&squared_distances(&pts), 2).unwrap();
                assert!(r.embeddable, "n={n}: {r:?}");
            }
        }
    }
}
