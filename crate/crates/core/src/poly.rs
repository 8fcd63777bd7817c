//! Exact sparse multivariate polynomials over the rationals in squared
//! distance variables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Unknown squared distances (`x_i_j`, non-edges) sort before parameters
/// (`c_i_j`, edges).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarKind {
    Unknown,
    Parameter,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub kind: VarKind,
    pub i: usize,
    pub j: usize,
}

impl Variable {
    pub fn new(kind: VarKind, i: usize, j: usize) -> Self {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        Self { kind, i, j }
    }

    pub fn unknown(i: usize, j: usize) -> Self {
        Self::new(VarKind::Unknown, i, j)
    }

    pub fn parameter(i: usize, j: usize) -> Self {
        Self::new(VarKind::Parameter, i, j)
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn is_unknown(&self) -> bool {
        self.kind == VarKind::Unknown
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.kind {
            VarKind::Unknown => 'x',
            VarKind::Parameter => 'c',
        };
        write!(f, "{prefix}_{}_{}", self.i, self.j)
    }
}

impl std::str::FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            msg: format!("bad variable name {s:?}"),
        };
        let mut parts = s.split('_');
        let kind = match parts.next() {
            Some("x") => VarKind::Unknown,
            Some("c") => VarKind::Parameter,
            _ => return Err(bad()),
        };
        let i: usize = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        let j: usize = parts.next().and_then(|p| p.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() || i == j {
            return Err(bad());
        }
        Ok(Self::new(kind, i, j))
    }
}

pub type Exponents = Vec<u32>;

/// Polynomial over a fixed, sorted ambient variable list. Every exponent
/// vector has one entry per ambient variable and no stored coefficient is
/// zero. Binary operations require identical ambient lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    vars: Arc<[Variable]>,
    terms: BTreeMap<Exponents, BigRational>,
}

impl Polynomial {
    pub fn zero(vars: Arc<[Variable]>) -> Self {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]), "ambient list must be sorted");
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<[Variable]>, c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            let arity = p.vars.len();
            p.terms.insert(vec![0; arity], c);
        }
        p
    }

    pub fn variable(vars: Arc<[Variable]>, v: Variable) -> Result<Self> {
        let idx = vars
            .binary_search(&v)
            .map_err(|_| Error::Dimension(format!("{v} is not in the ambient list")))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(e, BigRational::one());
        Ok(p)
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// repeated exponents.
    pub fn from_terms<I>(vars: Arc<[Variable]>, terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, Exponents)>,
    {
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent arity");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Arc<[Variable]> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Largest total degree of any term restricted to the given variables.
    pub fn degree_in(&self, subset: &[Variable]) -> u32 {
        let idx: Vec<usize> = subset
            .iter()
            .filter_map(|v| self.vars.binary_search(v).ok())
            .collect();
        self.terms
            .keys()
            .map(|e| idx.iter().map(|&i| e[i]).sum())
            .max()
            .unwrap_or(0)
    }

    /// Variables that occur with a positive exponent in some term.
    pub fn variables_present(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        for e in self.terms.keys() {
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    out.insert(self.vars[k]);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn derivative(&self, v: Variable) -> Self {
        let mut out = Self::zero(self.vars.clone());
        let Ok(k) = self.vars.binary_search(&v) else {
            return out;
        };
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[k] -= 1;
            out.add_term(d, c * BigRational::from_integer(BigInt::from(e[k])));
        }
        out
    }

    pub fn evaluate(&self, values: &[BigRational]) -> BigRational {
        assert_eq!(values.len(), self.vars.len(), "one value per ambient variable");
        let mut sum = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in values.iter().zip(e) {
                if k > 0 {
                    t *= num::pow(x.clone(), k as usize);
                }
            }
            sum += t;
        }
        sum
    }

    /// Substitutes every parameter, leaving a polynomial over the unknowns
    /// of the ambient list.
    pub fn specialize(&self, parameter_values: &BTreeMap<Variable, BigRational>) -> Result<Self> {
        let keep: Vec<usize> = (0..self.vars.len()).filter(|&k| self.vars[k].is_unknown()).collect();
        let params: Vec<usize> = (0..self.vars.len()).filter(|&k| !self.vars[k].is_unknown()).collect();
        let used = self.variables_present();
        let mut values = Vec::with_capacity(params.len());
        for &k in &params {
            let v = self.vars[k];
            match parameter_values.get(&v) {
                Some(x) => values.push(Some(x.clone())),
                None if used.contains(&v) => return Err(Error::MissingParameter(v.to_string())),
                None => values.push(None),
            }
        }
        let vars: Arc<[Variable]> = keep.iter().map(|&k| self.vars[k]).collect();
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut coef = c.clone();
            for (slot, &k) in params.iter().enumerate() {
                if e[k] > 0 {
                    let x = values[slot].as_ref().expect("present parameters have values");
                    coef *= num::pow(x.clone(), e[k] as usize);
                }
            }
            out.add_term(keep.iter().map(|&k| e[k]).collect(), coef);
        }
        Ok(out)
    }

    /// Numeric coefficients after substituting floating parameter values,
    /// with exponents projected onto `unknown_order`.
    pub fn numeric_terms(
        &self,
        unknown_order: &[Variable],
        parameter_values: &BTreeMap<Variable, f64>,
    ) -> Result<Vec<(f64, Vec<u32>)>> {
        let mut pos = vec![None; self.vars.len()];
        for (k, v) in self.vars.iter().enumerate() {
            if v.is_unknown() {
                pos[k] = Some(unknown_order.iter().position(|u| u == v));
            }
        }
        let mut acc: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut coef = c.to_f64().unwrap_or(f64::NAN);
            let mut proj = vec![0u32; unknown_order.len()];
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let v = self.vars[k];
                match pos[k] {
                    Some(Some(slot)) => proj[slot] = x,
                    Some(None) => return Err(Error::UnknownNotInOrder(v.to_string())),
                    None => {
                        let val = parameter_values
                            .get(&v)
                            .ok_or_else(|| Error::MissingParameter(v.to_string()))?;
                        coef *= val.powi(x as i32);
                    }
                }
            }
            *acc.entry(proj).or_insert(0.0) += coef;
        }
        Ok(acc.into_iter().map(|(e, c)| (c, e)).filter(|(c, _)| *c != 0.0).collect())
    }

    /// Parses the canonical text form against a given ambient list.
    pub fn parse(text: &str, vars: Arc<[Variable]>) -> Result<Self> {
        let mut p = Self::zero(vars.clone());
        let text = text.trim();
        if text == "0" {
            return Ok(p);
        }
        let bad = |msg: String| Error::Parse { line: 0, msg };
        for term in text.split(" + ") {
            let mut factors = term.split(" * ");
            let coef_str = factors.next().ok_or_else(|| bad("empty term".into()))?;
            let coef = parse_rational(coef_str).ok_or_else(|| bad(format!("bad coefficient {coef_str:?}")))?;
            let mut e = vec![0u32; vars.len()];
            for f in factors {
                let (name, pow) = match f.split_once('^') {
                    Some((n, k)) => (n, k.parse::<u32>().map_err(|_| bad(format!("bad exponent in {f:?}")))?),
                    None => (f, 1),
                };
                let v: Variable = name.parse()?;
                let k = vars
                    .binary_search(&v)
                    .map_err(|_| bad(format!("{v} not in ambient list")))?;
                e[k] += pow;
            }
            p.add_term(e, coef);
        }
        Ok(p)
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        assert_eq!(self.vars, other.vars, "ambient variable lists differ");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let c = if sign < 0 { -c.clone() } else { c.clone() };
            out.add_term(e.clone(), c);
        }
        out
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (k, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => write!(f, " * {}", self.vars[k])?,
                    _ => write!(f, " * {}^{x}", self.vars[k])?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.combine(rhs, 1)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.combine(rhs, -1)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.vars, rhs.vars, "ambient variable lists differ");
        let mut out = Polynomial::zero(self.vars.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Integer-valued rational helper.
pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ambient() -> Arc<[Variable]> {
        let mut v = vec![Variable::unknown(1, 2), Variable::unknown(1, 3), Variable::parameter(2, 3)];
        v.sort();
        v.into()
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-5i64..=5, prop::collection::vec(0u32..3, 3)), 0..5)
            .prop_map(|ts| Polynomial::from_terms(ambient(), ts.into_iter().map(|(c, e)| (rational(c), e))))
    }

    #[test]
    fn variable_order_and_names() {
        assert!(Variable::unknown(5, 6) < Variable::parameter(1, 2));
        assert_eq!(Variable::unknown(3, 1).to_string(), "x_1_3");
        assert_eq!("c_4_5".parse::<Variable>().unwrap(), Variable::parameter(4, 5));
        assert!("y_1_2".parse::<Variable>().is_err());
        assert!("x_2_2".parse::<Variable>().is_err());
    }

    #[test]
    fn specialize_parameter() {
        let vars: Arc<[Variable]> = vec![Variable::parameter(1, 2)].into();
        let p = Polynomial::variable(vars, Variable::parameter(1, 2)).unwrap().scale(&rational(2));
        let vals = BTreeMap::from([(Variable::parameter(1, 2), rational(5))]);
        let s = p.specialize(&vals).unwrap();
        assert_eq!(s.to_string(), "10");
        assert!(s.vars().is_empty());
        assert!(matches!(p.specialize(&BTreeMap::new()), Err(Error::MissingParameter(_))));
    }

    #[test]
    fn specialize_without_parameters_is_identity() {
        let vars: Arc<[Variable]> = vec![Variable::unknown(1, 2), Variable::unknown(1, 3)].into();
        let x = Polynomial::variable(vars.clone(), Variable::unknown(1, 2)).unwrap();
        let y = Polynomial::variable(vars, Variable::unknown(1, 3)).unwrap();
        let p = &(&x * &x) - &y;
        assert_eq!(p.specialize(&BTreeMap::new()).unwrap(), p);
    }

    #[test]
    fn canonical_text() {
        let vars = ambient();
        let x = Polynomial::variable(vars.clone(), Variable::unknown(1, 2)).unwrap();
        let c = Polynomial::variable(vars.clone(), Variable::parameter(2, 3)).unwrap();
        let p = &(&(&x * &x) * &c).scale(&ratio(-3, 2)) + &Polynomial::constant(vars.clone(), rational(7));
        assert_eq!(p.to_string(), "7 + -3/2 * x_1_2^2 * c_2_3");
        assert_eq!(Polynomial::parse(&p.to_string(), vars.clone()).unwrap(), p);
        assert_eq!(Polynomial::zero(vars).to_string(), "0");
    }

    #[test]
    fn derivative_and_degree() {
        let vars = ambient();
        let p = Polynomial::parse("2 * x_1_2^2 * x_1_3 + 1 * c_2_3^3", vars.clone()).unwrap();
        assert_eq!(p.total_degree(), 3);
        assert_eq!(p.degree_in(&[Variable::unknown(1, 2)]), 2);
        let d = p.derivative(Variable::unknown(1, 2));
        assert_eq!(d.to_string(), "4 * x_1_2 * x_1_3");
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a + &(-&a)).is_zero());
        }

        #[test]
        fn text_round_trip(a in arb_poly()) {
            prop_assert_eq!(Polynomial::parse(&a.to_string(), ambient()).unwrap(), a);
        }

        #[test]
        fn evaluation_is_a_homomorphism(a in arb_poly(), b in arb_poly(), vals in prop::collection::vec(-4i64..4, 3)) {
            let v: Vec<BigRational> = vals.into_iter().map(rational).collect();
            prop_assert_eq!((&a * &b).evaluate(&v), a.evaluate(&v) * b.evaluate(&v));
            prop_assert_eq!((&a + &b).evaluate(&v), a.evaluate(&v) + b.evaluate(&v));
        }
    }
}
