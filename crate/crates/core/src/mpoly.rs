//! Sparse multivariate polynomials over any `Ring`, keyed by exponent
//! vectors over a named variable roster.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<R> {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, R>,
}

impl<R: Ring> MPoly<R> {
    pub fn new(vars: Vec<String>) -> Self {
        MPoly { vars, terms: BTreeMap::new() }
    }

    pub fn with_vars(vars: &[&str]) -> Self {
        Self::new(vars.iter().map(|s| s.to_string()).collect())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &R)> {
        self.terms.iter()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn coeff(&self, exp: &[u32]) -> Option<&R> {
        self.terms.get(exp)
    }

    /// Adds `c * x^exp`, dropping the entry if it cancels.
    pub fn add_term(&mut self, exp: Vec<u32>, c: R) {
        assert_eq!(exp.len(), self.vars.len(), "exponent arity");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.vars != o.vars {
            return Err(Error::InvalidInput(format!("variable rosters differ: {:?} vs {:?}", self.vars, o.vars)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        MPoly { vars: self.vars.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut r = Self::new(self.vars.clone());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.mul(c2));
            }
        }
        Ok(r)
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> MPoly<S> {
        let mut r = MPoly::new(self.vars.clone());
        for (e, c) in &self.terms {
            r.add_term(e.clone(), f(c));
        }
        r
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Substitutes every variable; `one` fixes the target ring.
    pub fn eval(&self, points: &[R], one: &R) -> R {
        assert_eq!(points.len(), self.vars.len());
        let mut acc = one.zero_like();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in points.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&x.pow(k as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes the value 1 for the listed variables, collapsing them.
    pub fn set_to_one(&self, vars: &[usize]) -> Self {
        let mut r = Self::new(self.vars.clone());
        for (e, c) in &self.terms {
            let mut e = e.clone();
            for &v in vars {
                e[v] = 0;
            }
            r.add_term(e, c.clone());
        }
        r
    }

    /// Minimum of `val` over the coefficients; None for the zero polynomial.
    pub fn gauss_valuation(&self, val: impl Fn(&R) -> i64) -> Option<i64> {
        self.terms.values().map(val).min()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Field;
    use crate::polyring::APoly;

    #[test]
    fn arithmetic_and_cancellation() {
        let f = Field::prime(3).unwrap();
        let one = APoly::one(&f);
        let mut a: MPoly<APoly> = MPoly::with_vars(&["t1", "z"]);
        a.add_term(vec![1, 0], one.clone());
        a.add_term(vec![0, 1], APoly::theta(&f));
        let b = a.neg();
        assert!(a.add(&b).unwrap().is_zero());
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.coeff(&[1, 1]), Some(&APoly::from_ints(&f, &[0, 2])));
        assert_eq!(sq.degree_in(1), Some(2));
        let v = a.eval(&[one.clone(), one.clone()], &one);
        assert_eq!(v, APoly::from_ints(&f, &[1, 1]));
    }

    #[test]
    fn roster_mismatch_is_an_error() {
        let a: MPoly<APoly> = MPoly::with_vars(&["z"]);
        let b: MPoly<APoly> = MPoly::with_vars(&["t1"]);
        assert!(a.add(&b).is_err());
    }
}
