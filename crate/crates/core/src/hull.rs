//! Exact lattice convex hulls by incremental placing (beneath–beyond) in any
//! dimension. Volumes come out as integers: `m! * vol`, the sum of
//! `|det|` over the simplices of the placing triangulation.

use std::collections::HashMap;

/// Fraction-free (Bareiss) determinant.
pub fn det_i128(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Rank of a set of integer vectors.
pub fn rank_i128(rows: &[Vec<i128>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..cols {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| gcd(g, x));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn diff(a: &[i64], b: &[i64]) -> Vec<i128> {
    a.iter().zip(b).map(|(x, y)| (*x - *y) as i128).collect()
}

/// Dimension of the affine hull.
pub fn affine_dimension(points: &[Vec<i64>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => rank_i128(&rest.iter().map(|p| diff(p, p0)).collect::<Vec<_>>()),
    }
}

struct Facet {
    verts: Vec<usize>,
    normal: Vec<i128>,
    offset: i128,
    alive: bool,
}

/// Result of an exact hull computation.
#[derive(Clone, Debug)]
pub struct Hull {
    /// `m! * vol`, zero when the points are not full-dimensional.
    pub normalized_volume: i128,
    /// Input points on the hull boundary (all vertices, possibly a few
    /// boundary non-vertices). Every point when not full-dimensional.
    pub boundary: Vec<Vec<i64>>,
    pub full_dimensional: bool,
}

// Generalized cross product of the m - 1 edge vectors of a facet.
fn facet_plane(pts: &[Vec<i64>], verts: &[usize]) -> (Vec<i128>, i128) {
    let m = pts[verts[0]].len();
    let base = &pts[verts[0]];
    let rows: Vec<Vec<i128>> = verts[1..].iter().map(|&v| diff(&pts[v], base)).collect();
    let normal: Vec<i128> = (0..m)
        .map(|skip| {
            let minor: Vec<Vec<i128>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != skip).map(|(_, x)| *x).collect())
                .collect();
            let d = det_i128(minor);
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    let offset = dot(&normal, base);
    (normal, offset)
}

fn dot(n: &[i128], p: &[i64]) -> i128 {
    n.iter().zip(p).map(|(a, b)| a * *b as i128).sum()
}

/// Exact hull of lattice points in `dim` dimensions.
pub fn hull(points: &[Vec<i64>], dim: usize) -> Hull {
    let mut pts: Vec<Vec<i64>> = points.to_vec();
    pts.sort();
    pts.dedup();
    debug_assert!(pts.iter().all(|p| p.len() == dim));
    let lower = |pts: Vec<Vec<i64>>| Hull {
        normalized_volume: 0,
        boundary: pts,
        full_dimensional: false,
    };
    if pts.len() <= dim {
        return lower(pts);
    }

    // initial simplex: greedily extend an affinely independent set
    let mut simplex = vec![0usize];
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for i in 1..pts.len() {
        if simplex.len() == dim + 1 {
            break;
        }
        let cand = diff(&pts[i], &pts[0]);
        rows.push(cand);
        if rank_i128(&rows) == rows.len() {
            simplex.push(i);
        } else {
            rows.pop();
        }
    }
    if simplex.len() < dim + 1 {
        return lower(pts);
    }

    let scale = (dim + 1) as i128;
    let interior: Vec<i128> = (0..dim)
        .map(|c| simplex.iter().map(|&v| pts[v][c] as i128).sum())
        .collect();
    let beyond_interior = |normal: &[i128], offset: i128| -> bool {
        normal.iter().zip(&interior).map(|(a, b)| a * b).sum::<i128>() > scale * offset
    };

    let mut facets: Vec<Facet> = Vec::new();
    let mut volume = det_i128(rows.clone()).abs();
    for skip in 0..simplex.len() {
        let mut verts: Vec<usize> = simplex.iter().copied().filter(|&v| v != simplex[skip]).collect();
        verts.sort_unstable();
        let (mut normal, mut offset) = facet_plane(&pts, &verts);
        if beyond_interior(&normal, offset) {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        facets.push(Facet {
            verts,
            normal,
            offset,
            alive: true,
        });
    }

    let in_simplex: Vec<bool> = (0..pts.len()).map(|i| simplex.contains(&i)).collect();
    for p in 0..pts.len() {
        if in_simplex[p] {
            continue;
        }
        let visible: Vec<usize> = (0..facets.len())
            .filter(|&f| facets[f].alive && dot(&facets[f].normal, &pts[p]) > facets[f].offset)
            .collect();
        if visible.is_empty() {
            continue;
        }
        let mut ridges: HashMap<Vec<usize>, usize> = HashMap::new();
        for &f in &visible {
            volume += dot(&facets[f].normal, &pts[p]) - facets[f].offset;
            facets[f].alive = false;
            let verts = &facets[f].verts;
            for skip in 0..verts.len() {
                let ridge: Vec<usize> = verts.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, v)| *v).collect();
                *ridges.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut horizon: Vec<Vec<usize>> = ridges.into_iter().filter(|(_, c)| *c == 1).map(|(r, _)| r).collect();
        horizon.sort();
        for ridge in horizon {
            let mut verts = ridge;
            verts.push(p);
            verts.sort_unstable();
            let (mut normal, mut offset) = facet_plane(&pts, &verts);
            if beyond_interior(&normal, offset) {
                normal.iter_mut().for_each(|x| *x = -*x);
                offset = -offset;
            }
            facets.push(Facet {
                verts,
                normal,
                offset,
                alive: true,
            });
        }
        facets.retain(|f| f.alive);
    }

    let mut on_boundary = vec![false; pts.len()];
    for f in &facets {
        for &v in &f.verts {
            on_boundary[v] = true;
        }
    }
    Hull {
        normalized_volume: volume,
        boundary: pts.into_iter().zip(on_boundary).filter(|(_, b)| *b).map(|(p, _)| p).collect(),
        full_dimensional: true,
    }
}

/// `m! * vol(conv(points))`.
pub fn normalized_volume(points: &[Vec<i64>], dim: usize) -> i128 {
    hull(points, dim).normalized_volume
}

/// Minkowski sum of two point sets (deduplicated, unreduced).
pub fn minkowski_sum(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = a
        .iter()
        .flat_map(|p| b.iter().map(move |q| p.iter().zip(q).map(|(x, y)| x + y).collect()))
        .collect();
    out.sort();
    out.dedup();
    out
}
