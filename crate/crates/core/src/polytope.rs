//! Newton polytopes of polynomial supports.

use serde::{Deserialize, Serialize};

use crate::hull;
use crate::poly::{Polynomial, Variable};
use crate::{Error, Result};

/// Lattice polytope stored by its (deduplicated, sorted) point set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NewtonPolytope {
    pub dim: usize,
    pub points: Vec<Vec<i64>>,
}

impl NewtonPolytope {
    pub fn new(dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Dimension(format!(
                "point {p:?} does not have {dim} coordinates"
            )));
        }
        if points.iter().flatten().any(|&x| x < 0) {
            return Err(Error::Dimension("exponent vectors must be non-negative".into()));
        }
        let mut points = points;
        points.sort();
        points.dedup();
        Ok(Self { dim, points })
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `dim! * vol`.
    pub fn normalized_volume(&self) -> i128 {
        hull::normalized_volume(&self.points, self.dim)
    }

    pub fn translate(&self, shift: &[i64]) -> Result<Self> {
        Self::new(
            self.dim,
            self.points
                .iter()
                .map(|p| p.iter().zip(shift).map(|(a, b)| a + b).collect())
                .collect(),
        )
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension("Minkowski sum of different dimensions".into()));
        }
        let sum = hull::minkowski_sum(&self.points, &other.points);
        let reduced = hull::hull(&sum, self.dim).boundary;
        Self::new(self.dim, reduced)
    }
}

/// Support of `p` projected onto `unknown_order`; parameter exponents are
/// dropped.
pub fn newton_polytope(p: &Polynomial, unknown_order: &[Variable]) -> Result<NewtonPolytope> {
    let vars = p.vars();
    let mut slot = vec![None; vars.len()];
    for (k, v) in vars.iter().enumerate() {
        if v.is_unknown() {
            slot[k] = unknown_order.iter().position(|u| u == v);
        }
    }
    let mut points = Vec::with_capacity(p.num_terms());
    for (e, _) in p.terms() {
        let mut q = vec![0i64; unknown_order.len()];
        for (k, &x) in e.iter().enumerate() {
            if x == 0 || !vars[k].is_unknown() {
                continue;
            }
            let s = slot[k].ok_or_else(|| Error::UnknownNotInOrder(vars[k].to_string()))?;
            q[s] = x as i64;
        }
        points.push(q);
    }
    NewtonPolytope::new(unknown_order.len(), points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarKind;
    use std::sync::Arc;

    #[test]
    fn projects_support_and_drops_parameters() {
        let x = Variable::unknown(1, 2);
        let y = Variable::unknown(1, 3);
        let c = Variable::parameter(2, 3);
        let vars: Arc<[Variable]> = vec![x, y, c].into();
        let p = Polynomial::parse("1 * x_1_2^2 + 1 * x_1_2 * x_1_3 + 3 * x_1_3 * c_2_3", vars).unwrap();
        let np = newton_polytope(&p, &[x, y]).unwrap();
        assert_eq!(np.points, vec![vec![0, 1], vec![1, 1], vec![2, 0]]);
        assert!(matches!(newton_polytope(&p, &[x]), Err(Error::UnknownNotInOrder(_))));
    }

    #[test]
    fn constant_is_origin() {
        let vars: Arc<[Variable]> = vec![Variable::new(VarKind::Unknown, 1, 2)].into();
        let p = Polynomial::constant(vars.clone(), crate::poly::rational(4));
        let np = newton_polytope(&p, &vars).unwrap();
        assert_eq!(np.points, vec![vec![0]]);
    }

    #[test]
    fn validates_points() {
        assert!(NewtonPolytope::new(2, vec![vec![1]]).is_err());
        assert!(NewtonPolytope::new(1, vec![vec![-1]]).is_err());
        let p = NewtonPolytope::new(1, vec![vec![2], vec![0], vec![2]]).unwrap();
        assert_eq!(p.points, vec![vec![0], vec![2]]);
    }
}
