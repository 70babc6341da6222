//! Sparse multivariate polynomials with exact rational coefficients, keyed by
//! exponent vectors. Just enough algebra for generating functions.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cycle_index::rational_to_f64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl RationalPoly {
    pub fn zero(vars: usize) -> Self {
        RationalPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, BigRational::one())
    }

    /// `c · s_i^e`.
    pub fn monomial(vars: usize, var: usize, exp: u32, c: BigRational) -> Self {
        let mut e = vec![0; vars];
        e[var] = exp;
        let mut p = Self::zero(vars);
        p.add_term(e, c);
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        self.terms
            .get(exps)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        debug_assert_eq!(exps.len(), self.vars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, s: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono = e
                    .iter()
                    .zip(s)
                    .fold(Complex64::one(), |acc, (&k, &x)| acc * x.powu(k));
                mono * rational_to_f64(c)
            })
            .sum()
    }

    pub fn evaluate_exact(&self, s: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono = e.iter().zip(s).fold(BigRational::one(), |acc, (&k, x)| {
                    acc * num_traits::pow(x.clone(), k as usize)
                });
                mono * c
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Substitutes `s_i ↦ t_{map[i]}` into a polynomial in `vars` variables `t`.
    pub fn relabel(&self, map: &[usize], vars: usize) -> Self {
        assert_eq!(map.len(), self.vars, "relabel map length");
        let mut out = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut target = vec![0u32; vars];
            for (i, &k) in e.iter().enumerate() {
                target[map[i]] += k;
            }
            out.add_term(target, c.clone());
        }
        out
    }

    /// Total degree of every term, if homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn coefficient_sum(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, b| a + b)
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn integer_terms(&self) -> Option<BTreeMap<Vec<u32>, BigInt>> {
        self.terms
            .iter()
            .map(|(e, c)| c.is_integer().then(|| (e.clone(), c.to_integer())))
            .collect()
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;

    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        assert_eq!(self.vars, rhs.vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;

    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        assert_eq!(self.vars, rhs.vars);
        let mut terms: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        RationalPoly {
            vars: self.vars,
            terms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    #[test]
    fn binomial_expansion() {
        // (s0 + s1)^3
        let s = &RationalPoly::monomial(2, 0, 1, q(1)) + &RationalPoly::monomial(2, 1, 1, q(1));
        let cube = s.pow(3);
        assert_eq!(cube.coefficient(&[3, 0]), q(1));
        assert_eq!(cube.coefficient(&[2, 1]), q(3));
        assert_eq!(cube.coefficient(&[1, 2]), q(3));
        assert_eq!(cube.coefficient_sum(), q(8));
        assert!(cube.is_integral());
    }

    #[test]
    fn cancellation_prunes() {
        let a = RationalPoly::monomial(1, 0, 2, q(3));
        let b = RationalPoly::monomial(1, 0, 2, q(-3));
        assert!((&a + &b).terms().is_empty());
    }

    #[test]
    fn relabel_merges_variables() {
        // (s0 + s1 + s2)^2 with s1, s2 merged
        let s = &(&RationalPoly::monomial(3, 0, 1, q(1)) + &RationalPoly::monomial(3, 1, 1, q(1)))
            + &RationalPoly::monomial(3, 2, 1, q(1));
        let merged = s.pow(2).relabel(&[0, 1, 1], 2);
        assert_eq!(merged.coefficient(&[1, 1]), q(4));
        assert_eq!(merged.coefficient(&[0, 2]), q(4));
        assert_eq!(merged.homogeneous_degree(), Some(2));
    }

    #[test]
    fn evaluation_routes() {
        let p = &RationalPoly::monomial(2, 0, 2, q(2)) + &RationalPoly::monomial(2, 1, 1, q(-1));
        let v = p.evaluate(&[Complex64::new(3.0, 0.0), Complex64::new(4.0, 0.0)]);
        assert_eq!(v, Complex64::new(14.0, 0.0));
        assert_eq!(p.evaluate_exact(&[q(3), q(4)]), q(14));
    }
}
