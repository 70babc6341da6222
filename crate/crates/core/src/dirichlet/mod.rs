//! Finite-dimensional Dirichlet distribution `Dir(α)` on the simplex
//! `Δ^{k-1}`: moments by three routes, the confluent Lauricella (Humbert
//! `ₖΦ₂`) series and the characteristic functional, limiting regimes, and
//! the constructive mapping theorem for pushforwards along `g: [k] → [k]`.

mod humbert;
mod mapping;
mod moments;
mod sampling;
pub mod series;

pub use humbert::{
    asymptotic_moment, characteristic_functional, confluent_limit, humbert_phi2,
    humbert_phi2_power_sums, Regime,
};
pub use mapping::{
    additive_contraction, all_maps, check_map_pushforward, decompose_map, pushforward_params,
    pushforward_with_labels, star_lambda, MapCheck, MapDecomposition,
};
pub use moments::{
    moment_cycle_index, moment_cycle_index_exact, moment_monte_carlo, moment_multiindex,
    moment_multiindex_exact, moment_polynomial, MomentReport, Route,
};
pub use sampling::{sample_dirichlet, DirichletSampler};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::Permutation;
use crate::error::{invalid, Result};

/// Real parameter vector `α` of a Dirichlet distribution.
///
/// [`DirichletParams::new`] enforces `α > 0`, the probabilistic setting.
/// [`DirichletParams::analytic`] only asks for finite entries; the moment
/// formulas then report a singular denominator if `(|α|)_n` vanishes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletParams {
    alpha: Vec<f64>,
}

impl DirichletParams {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(invalid("alpha must be non-empty"));
        }
        if let Some(a) = alpha.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(invalid(format!(
                "alpha entries must be positive and finite, got {a}"
            )));
        }
        Ok(DirichletParams { alpha })
    }

    pub fn analytic(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(invalid("alpha must be non-empty"));
        }
        if alpha.iter().any(|a| !a.is_finite()) {
            return Err(invalid("alpha entries must be finite"));
        }
        Ok(DirichletParams { alpha })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Total mass `|α|`.
    pub fn total(&self) -> f64 {
        self.alpha.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.alpha.iter().all(|&a| a > 0.0)
    }

    /// `β·α`.
    pub fn scaled(&self, beta: f64) -> Result<Self> {
        let alpha = self.alpha.iter().map(|a| a * beta).collect();
        if self.is_positive() {
            Self::new(alpha)
        } else {
            Self::analytic(alpha)
        }
    }

    /// `α_π` with `(α_π)_{π(i)} = α_i`.
    pub fn permuted(&self, pi: &Permutation) -> Self {
        DirichletParams {
            alpha: permute_vec(&self.alpha, pi),
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.alpha.iter().map(|&a| Complex64::new(a, 0.0)).collect()
    }
}

/// Moves entry `i` to position `π(i)`.
pub fn permute_vec<T: Clone>(v: &[T], pi: &Permutation) -> Vec<T> {
    assert_eq!(v.len(), pi.degree(), "permutation degree mismatch");
    let mut out = v.to_vec();
    for (i, x) in v.iter().enumerate() {
        out[pi.apply(i + 1) - 1] = x.clone();
    }
    out
}

/// Rising factorial `(a)_n = a(a+1)⋯(a+n-1)`, product form.
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::one(), |acc, j| acc * (a + j as f64))
}

pub fn pochhammer_f64(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, j| acc * (a + j as f64))
}

pub fn pochhammer_exact(a: &BigRational, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut x = a.clone();
    for _ in 0..n {
        acc *= &x;
        x += BigRational::one();
    }
    acc
}

/// `(a)_m = Π (a_i)_{m_i}` for multi-indices.
pub fn pochhammer_multi_exact(a: &[BigRational], m: &[usize]) -> BigRational {
    a.iter().zip(m).fold(BigRational::one(), |acc, (ai, &mi)| {
        acc * pochhammer_exact(ai, mi)
    })
}

pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

pub(crate) fn rational_sum(v: &[BigRational]) -> BigRational {
    v.iter().fold(BigRational::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn pochhammer_basics() {
        for a in [0.3, -2.5, 7.0] {
            assert_eq!(pochhammer(Complex64::new(a, 0.0), 0), Complex64::one());
        }
        let mut fact = 1.0;
        for n in 0..10 {
            if n > 0 {
                fact *= n as f64;
            }
            assert_eq!(pochhammer_f64(1.0, n), fact);
        }
        assert_eq!(pochhammer_f64(-2.0, 3), 0.0);
    }

    #[test]
    fn chu_vandermonde_exact() {
        // (a+b)_n = Σ_k C(n,k) (a)_k (b)_{n-k}
        let a = BigRational::new(BigInt::from(3), BigInt::from(7));
        let b = BigRational::new(BigInt::from(-5), BigInt::from(2));
        for n in 0..=10usize {
            let lhs = pochhammer_exact(&(&a + &b), n);
            let mut rhs = BigRational::zero();
            let mut binom = BigInt::one();
            for k in 0..=n {
                rhs += BigRational::from_integer(binom.clone())
                    * pochhammer_exact(&a, k)
                    * pochhammer_exact(&b, n - k);
                binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
            }
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn params_validation() {
        assert!(DirichletParams::new(vec![]).is_err());
        assert!(DirichletParams::new(vec![1.0, 0.0]).is_err());
        assert!(DirichletParams::new(vec![1.0, f64::NAN]).is_err());
        assert!(DirichletParams::analytic(vec![1.0, -0.5]).is_ok());
        let p = DirichletParams::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p.total(), 6.0);
        let pi = Permutation::new(&[2, 3, 1]).unwrap();
        assert_eq!(p.permuted(&pi).as_slice(), &[3.0, 1.0, 2.0]);
    }
}
