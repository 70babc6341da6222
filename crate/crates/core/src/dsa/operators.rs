//! Ladder operators and their action on lattice vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::lattice::{Anchor, Coefficient, LatticeVector};
use crate::combinatorics::Permutation;
use crate::dirichlet::{humbert_phi2_power_sums, permute_vec};
use crate::error::{invalid, Error, Result};

/// Basis operators, indices 1-based.
///
/// On `f_{α'}`:
/// `Raise(i)` gives `α'_i f_{α'+e_i}`,
/// `Lower(i)` gives `(1-|α'|) f_{α'-e_i}`,
/// `Mixed(i,j)` gives `α'_i f_{α'+e_i-e_j}`,
/// `Cartan(i)` gives `(|α'|+α'_i-1) f_{α'}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LadderOperator {
    Raise(usize),
    Lower(usize),
    Mixed(usize, usize),
    Cartan(usize),
}

impl LadderOperator {
    /// Operator attached to the matrix unit `(i, j)` of `gl_{k+1}`, indices
    /// `0..=k`: `(i,0)` is `Raise(i)`, `(0,j)` is `Lower(j)`, `(i,j)` is
    /// `Mixed(i,j)` and `(i,i)` is `Cartan(i)`. `(0,0)` has no operator.
    pub fn unit(i: usize, j: usize) -> Option<Self> {
        match (i, j) {
            (0, 0) => None,
            (i, 0) => Some(LadderOperator::Raise(i)),
            (0, j) => Some(LadderOperator::Lower(j)),
            (i, j) if i == j => Some(LadderOperator::Cartan(i)),
            (i, j) => Some(LadderOperator::Mixed(i, j)),
        }
    }

    pub fn validate(self, k: usize) -> Result<()> {
        let ok = |i: usize| (1..=k).contains(&i);
        let valid = match self {
            LadderOperator::Raise(i) | LadderOperator::Lower(i) | LadderOperator::Cartan(i) => {
                ok(i)
            }
            LadderOperator::Mixed(i, j) => ok(i) && ok(j) && i != j,
        };
        if valid {
            Ok(())
        } else {
            Err(invalid(format!("operator {self} not defined for k = {k}")))
        }
    }

    /// Every basis operator for dimension `k`.
    pub fn all(k: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for i in 1..=k {
            out.push(LadderOperator::Raise(i));
            out.push(LadderOperator::Lower(i));
            out.push(LadderOperator::Cartan(i));
            for j in 1..=k {
                if i != j {
                    out.push(LadderOperator::Mixed(i, j));
                }
            }
        }
        out
    }
}

impl fmt::Display for LadderOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderOperator::Raise(i) => write!(f, "E_{i}"),
            LadderOperator::Lower(i) => write!(f, "E_-{i}"),
            LadderOperator::Mixed(i, j) => write!(f, "E_{i},-{j}"),
            LadderOperator::Cartan(i) => write!(f, "J_{i}"),
        }
    }
}

/// `op · v`, extended linearly from the basis action.
pub fn apply<C: Coefficient>(op: LadderOperator, v: &LatticeVector<C>) -> Result<LatticeVector<C>> {
    let k = v.dim();
    op.validate(k)?;
    let anchor = v.anchor().clone();
    let mut out = LatticeVector::zero(anchor.clone());
    for (offset, c) in v.terms() {
        let (shift, factor): (Vec<i64>, C) = match op {
            LadderOperator::Raise(i) => {
                let mut o = offset.clone();
                o[i - 1] += 1;
                (o, anchor.base()[i - 1].clone() + C::from_int(offset[i - 1]))
            }
            LadderOperator::Lower(i) => {
                let mut o = offset.clone();
                o[i - 1] -= 1;
                (o, C::one() - anchor.effective_total(offset))
            }
            LadderOperator::Mixed(i, j) => {
                let mut o = offset.clone();
                o[i - 1] += 1;
                o[j - 1] -= 1;
                (o, anchor.base()[i - 1].clone() + C::from_int(offset[i - 1]))
            }
            LadderOperator::Cartan(i) => (
                offset.clone(),
                anchor.effective_total(offset)
                    + anchor.base()[i - 1].clone()
                    + C::from_int(offset[i - 1])
                    - C::one(),
            ),
        };
        out.add_term(shift, factor * c.clone());
    }
    Ok(out)
}

/// `[a, b] v = a(b v) - b(a v)`.
pub fn commutator<C: Coefficient>(
    a: LadderOperator,
    b: LadderOperator,
    v: &LatticeVector<C>,
) -> Result<LatticeVector<C>> {
    apply(a, &apply(b, v)?)?.sub(&apply(b, &apply(a, v)?)?)
}

/// Applies a word right to left: `ops = [x_1, …, x_r]` gives `x_1 ⋯ x_r v`.
pub fn apply_word<C: Coefficient>(
    ops: &[LadderOperator],
    v: &LatticeVector<C>,
) -> Result<LatticeVector<C>> {
    ops.iter()
        .rev()
        .try_fold(v.clone(), |acc, &op| apply(op, &acc))
}

/// Linear combination of basis operators.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSum<C> {
    pub terms: Vec<(C, LadderOperator)>,
}

impl<C: Coefficient> OperatorSum<C> {
    pub fn zero() -> Self {
        OperatorSum { terms: Vec::new() }
    }

    pub fn single(op: LadderOperator) -> Self {
        OperatorSum {
            terms: vec![(C::one(), op)],
        }
    }

    /// The matrix unit `(i, j)`; `Cartan(0)` is zero.
    pub fn unit(i: usize, j: usize) -> Self {
        LadderOperator::unit(i, j).map_or_else(Self::zero, Self::single)
    }

    /// `J_i - J_j`, with `J_0 = 0`.
    pub fn cartan_difference(i: usize, j: usize) -> Self {
        Self::unit(i, i).plus(&Self::unit(j, j).scaled(&-C::one()))
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        OperatorSum { terms }
    }

    pub fn scaled(&self, c: &C) -> Self {
        OperatorSum {
            terms: self
                .terms
                .iter()
                .map(|(a, op)| (a.clone() * c.clone(), *op))
                .collect(),
        }
    }

    pub fn apply(&self, v: &LatticeVector<C>) -> Result<LatticeVector<C>> {
        let mut out = LatticeVector::zero(v.anchor().clone());
        for (c, op) in &self.terms {
            out = out.add(&apply(*op, v)?.scale(c))?;
        }
        Ok(out)
    }

    /// `[self, other] v`.
    pub fn commutator(&self, other: &Self, v: &LatticeVector<C>) -> Result<LatticeVector<C>> {
        self.apply(&other.apply(v)?)?
            .sub(&other.apply(&self.apply(v)?)?)
    }
}

/// Raising word for the occurrence vector `p`: returns the scalar `(α)_p`
/// and the offset `p` such that `Raise(1)^{p_1} ⋯ Raise(k)^{p_k} f_α = (α)_p f_{α+p}`.
pub fn posterior_operator<C: Coefficient>(alpha: &[C], p: &[usize]) -> Result<(C, Vec<i64>)> {
    if alpha.len() != p.len() {
        return Err(Error::LengthMismatch {
            expected: alpha.len(),
            found: p.len(),
        });
    }
    let mut scalar = C::one();
    for (a, &pi) in alpha.iter().zip(p) {
        for j in 0..pi {
            scalar = scalar * (a.clone() + C::from_int(j as i64));
        }
    }
    Ok((scalar, p.iter().map(|&x| x as i64).collect()))
}

/// The raising word itself, `Raise(1)^{p_1} ⋯ Raise(k)^{p_k}`.
pub fn posterior_word(p: &[usize]) -> Vec<LadderOperator> {
    p.iter()
        .enumerate()
        .flat_map(|(i, &pi)| std::iter::repeat_n(LadderOperator::Raise(i + 1), pi))
        .collect()
}

/// `f_{α'} ↦ f_{α'_π}` with `(x_π)_{π(i)} = x_i`; the result lives on the
/// lattice anchored at `α_π`.
pub fn weyl_permute<C: Coefficient>(
    pi: &Permutation,
    v: &LatticeVector<C>,
) -> Result<LatticeVector<C>> {
    if pi.degree() != v.dim() {
        return Err(Error::LengthMismatch {
            expected: v.dim(),
            found: pi.degree(),
        });
    }
    let anchor = Anchor::new(permute_vec(v.anchor().base(), pi))?;
    let anchor = reuse_anchor(v.anchor(), anchor);
    let coeffs: BTreeMap<Vec<i64>, C> = v
        .terms()
        .iter()
        .map(|(o, c)| (permute_vec(o, pi), c.clone()))
        .collect();
    Ok(LatticeVector::with_anchor(anchor, coeffs))
}

fn reuse_anchor<C: Coefficient>(old: &Arc<Anchor<C>>, new: Arc<Anchor<C>>) -> Arc<Anchor<C>> {
    if old.base() == new.base() {
        old.clone()
    } else {
        new
    }
}

/// Evaluates `Σ c_{α'} ₖΦ₂[α'; |α'|; s]`, tying basis labels to functions
/// of `s`.
pub fn realize(v: &LatticeVector<Complex64>, s: &[Complex64], tol: f64) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (offset, c) in v.terms() {
        let a = v.anchor().effective(offset);
        let total = v.anchor().effective_total(offset);
        sum += c * humbert_phi2_power_sums(&a, total, s, tol)?.value;
    }
    Ok(sum)
}
