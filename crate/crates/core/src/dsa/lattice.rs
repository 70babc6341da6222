//! Weight lattice `Λ_α = α + ℤ^k` and finitely supported vectors over it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::cycle_index::rational_to_f64;
use crate::error::{invalid, Error, Result};

/// Absolute threshold below which complex coefficients are dropped.
pub const PRUNE_TOL: f64 = 1e-15;

/// Scalar field for lattice vectors: floating complex or exact rational.
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
    /// True when the coefficient should not be stored.
    fn is_negligible(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn real_part(&self) -> f64;
    /// Random coefficient of moderate size, for verification trials.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Coefficient for Complex64 {
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn is_negligible(&self) -> bool {
        self.norm() < PRUNE_TOL
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn real_part(&self) -> f64 {
        self.re
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    }
}

impl Coefficient for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn real_part(&self) -> f64 {
        rational_to_f64(self)
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let num: i64 = rng.random_range(-9..=9);
        let den: i64 = rng.random_range(1..=7);
        BigRational::new(num.into(), den.into())
    }
}

/// The anchor `α` of a lattice, with `|α|` cached.
#[derive(Debug, Clone, PartialEq)]
pub struct Anchor<C> {
    base: Vec<C>,
    total: C,
}

impl<C: Coefficient> Anchor<C> {
    pub fn new(base: Vec<C>) -> Result<Arc<Self>> {
        if base.is_empty() {
            return Err(invalid("lattice anchor must be non-empty"));
        }
        let total = base.iter().cloned().fold(C::zero(), |a, b| a + b);
        Ok(Arc::new(Anchor { base, total }))
    }

    pub fn base(&self) -> &[C] {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn total(&self) -> &C {
        &self.total
    }

    /// `α' = α + offset`.
    pub fn effective(&self, offset: &[i64]) -> Vec<C> {
        self.base
            .iter()
            .zip(offset)
            .map(|(a, &o)| a.clone() + C::from_int(o))
            .collect()
    }

    /// `|α'| = |α| + Σ offset`.
    pub fn effective_total(&self, offset: &[i64]) -> C {
        self.total.clone() + C::from_int(offset.iter().sum())
    }
}

/// Point `α + offset` of `Λ_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint<C> {
    pub anchor: Arc<Anchor<C>>,
    pub offset: Vec<i64>,
}

impl<C: Coefficient> LatticePoint<C> {
    pub fn new(anchor: Arc<Anchor<C>>, offset: Vec<i64>) -> Result<Self> {
        if offset.len() != anchor.dim() {
            return Err(Error::LengthMismatch {
                expected: anchor.dim(),
                found: offset.len(),
            });
        }
        Ok(LatticePoint { anchor, offset })
    }

    pub fn effective(&self) -> Vec<C> {
        self.anchor.effective(&self.offset)
    }

    pub fn effective_total(&self) -> C {
        self.anchor.effective_total(&self.offset)
    }
}

/// Finite linear combination `Σ c_{α'} f_{α'}` of basis labels of one lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector<C> {
    anchor: Arc<Anchor<C>>,
    coeffs: BTreeMap<Vec<i64>, C>,
}

impl<C: Coefficient> LatticeVector<C> {
    pub fn zero(anchor: Arc<Anchor<C>>) -> Self {
        LatticeVector {
            anchor,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis vector `f_{α + offset}`.
    pub fn basis(anchor: Arc<Anchor<C>>, offset: Vec<i64>) -> Result<Self> {
        let mut v = Self::zero(anchor);
        v.check_offset(&offset)?;
        v.add_term(offset, C::one());
        Ok(v)
    }

    pub fn from_terms(
        anchor: Arc<Anchor<C>>,
        terms: impl IntoIterator<Item = (Vec<i64>, C)>,
    ) -> Result<Self> {
        let mut v = Self::zero(anchor);
        for (o, c) in terms {
            v.check_offset(&o)?;
            v.add_term(o, c);
        }
        Ok(v)
    }

    fn check_offset(&self, offset: &[i64]) -> Result<()> {
        if offset.len() != self.anchor.dim() {
            return Err(Error::LengthMismatch {
                expected: self.anchor.dim(),
                found: offset.len(),
            });
        }
        Ok(())
    }

    pub fn anchor(&self) -> &Arc<Anchor<C>> {
        &self.anchor
    }

    pub fn dim(&self) -> usize {
        self.anchor.dim()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, C> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, offset: &[i64]) -> C {
        self.coeffs.get(offset).cloned().unwrap_or_else(C::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = LatticePoint<C>> + '_ {
        self.coeffs.keys().map(|o| LatticePoint {
            anchor: self.anchor.clone(),
            offset: o.clone(),
        })
    }

    /// Adds `c f_{α+offset}`, dropping the entry if it becomes negligible.
    pub(crate) fn add_term(&mut self, offset: Vec<i64>, c: C) {
        if c.is_negligible() {
            return;
        }
        let entry = self.coeffs.entry(offset).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_negligible() {
            self.coeffs.retain(|_, v| !v.is_negligible());
        }
    }

    fn same_lattice(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.anchor, &other.anchor) || self.anchor.base == other.anchor.base {
            Ok(())
        } else {
            Err(Error::AnchorMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_lattice(other)?;
        let mut out = self.clone();
        for (o, c) in &other.coeffs {
            out.add_term(o.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-C::one()))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.anchor.clone());
        for (o, v) in &self.coeffs {
            out.add_term(o.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Largest coefficient discrepancy `max |a - b|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .sub(other)?
            .coeffs
            .values()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max))
    }

    pub(crate) fn with_anchor(anchor: Arc<Anchor<C>>, coeffs: BTreeMap<Vec<i64>, C>) -> Self {
        LatticeVector { anchor, coeffs }
    }

    /// Random vector with `terms` entries, offsets drawn from `lo..=hi` per
    /// coordinate and kept only if `keep` accepts the point.
    pub fn random<R: Rng + ?Sized>(
        anchor: Arc<Anchor<C>>,
        rng: &mut R,
        terms: usize,
        lo: i64,
        hi: i64,
        keep: impl Fn(&LatticePoint<C>) -> bool,
    ) -> Self {
        let mut v = Self::zero(anchor.clone());
        let mut attempts = 0;
        while v.coeffs.len() < terms && attempts < 64 * terms.max(1) {
            attempts += 1;
            let offset: Vec<i64> = (0..anchor.dim())
                .map(|_| rng.random_range(lo..=hi))
                .collect();
            let pt = LatticePoint {
                anchor: anchor.clone(),
                offset,
            };
            if keep(&pt) {
                v.add_term(pt.offset, C::random(rng));
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pruning_and_arithmetic() {
        let a = Anchor::new(vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)]).unwrap();
        let v = LatticeVector::basis(a.clone(), vec![0, 1]).unwrap();
        assert!(v.sub(&v).unwrap().is_zero());
        let w = v.scale(&Complex64::new(1e-16, 0.0));
        assert!(w.is_zero());
        assert_eq!(
            v.add(&v).unwrap().coefficient(&[0, 1]),
            Complex64::new(2.0, 0.0)
        );
    }

    #[test]
    fn anchors_must_agree() {
        let a = Anchor::new(vec![Complex64::new(0.5, 0.0)]).unwrap();
        let b = Anchor::new(vec![Complex64::new(0.7, 0.0)]).unwrap();
        let v = LatticeVector::basis(a, vec![0]).unwrap();
        let w = LatticeVector::basis(b, vec![0]).unwrap();
        assert_eq!(v.add(&w), Err(Error::AnchorMismatch));
    }

    #[test]
    fn exact_coefficients() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let a = Anchor::new(vec![q(2, 3), q(1, 3)]).unwrap();
        assert_eq!(*a.total(), q(1, 1));
        assert_eq!(a.effective(&[1, -1]), vec![q(5, 3), q(-2, 3)]);
    }
}
