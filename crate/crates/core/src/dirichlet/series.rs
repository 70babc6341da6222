//! Truncation control for the confluent series
//! `Σ_n Z_n(p_1, …, p_n) / (c)_n` with power sums `p_j = Σ_a w_a v_a^j`.
//!
//! Every series in the crate (`ₖΦ₂`, the Ferguson characteristic functional,
//! its signed extension) has this shape. The degree-`n` term is dominated by
//! `b_n = ‖v‖^n (W)_n / (n! |(c)_n|)` with `W = Σ|w_a|`, the `₁F₁` majorant.
//! For `m ≥ N` the majorant ratio is at most
//! `ρ_N = ‖v‖ · max(1, (W+N)/(N+1)) / (N + Re c)`, so the tail after `N`
//! terms is below `b_N / (1 - ρ_N)` once `ρ_N < 1`.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::dirichlet::is_nonpositive_integer;
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_TERMS: usize = 4096;

/// Result of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: Complex64,
    /// Number of degrees summed (`0..terms`).
    pub terms: usize,
    /// Rigorous bound on the neglected tail.
    pub tail_bound: f64,
}

/// Finite weighted point set `(w_a, v_a)` whose power sums feed the cycle
/// index: `p_j = Σ_a w_a v_a^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSumData {
    pub weights: Vec<Complex64>,
    pub values: Vec<Complex64>,
}

impl PowerSumData {
    pub fn new(weights: Vec<Complex64>, values: Vec<Complex64>) -> Self {
        assert_eq!(
            weights.len(),
            values.len(),
            "weights/values length mismatch"
        );
        PowerSumData { weights, values }
    }

    pub fn real(weights: &[f64], values: &[Complex64]) -> Self {
        Self::new(
            weights.iter().map(|&w| Complex64::new(w, 0.0)).collect(),
            values.to_vec(),
        )
    }

    /// `Σ |w_a|`.
    pub fn weight_norm(&self) -> f64 {
        self.weights.iter().map(|w| w.norm()).sum()
    }

    /// `Σ w_a`.
    pub fn total_weight(&self) -> Complex64 {
        self.weights.iter().sum()
    }

    /// `max |v_a|`.
    pub fn value_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `p_1, …, p_n`.
    pub fn power_sums(&self, n: usize) -> Vec<Complex64> {
        let mut pw: Vec<Complex64> = self.values.clone();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            if j > 0 {
                for (p, v) in pw.iter_mut().zip(&self.values) {
                    *p *= v;
                }
            }
            out.push(self.weights.iter().zip(&pw).map(|(w, p)| w * p).sum());
        }
        out
    }
}

pub(crate) fn check_pole(c: Complex64) -> Result<()> {
    if c.im == 0.0 && is_nonpositive_integer(c.re) {
        return Err(Error::Pole { c });
    }
    Ok(())
}

/// Smallest `N` with majorant tail below `tol`, together with that bound.
/// `Err((N, bound))` when the budget runs out first.
pub fn truncation_degree(
    value_norm: f64,
    weight_norm: f64,
    c: Complex64,
    tol: f64,
    max_terms: usize,
) -> std::result::Result<(usize, f64), (usize, f64)> {
    let mut b = 1.0f64; // b_N
    let mut last_bound = f64::INFINITY;
    for n in 0..=max_terms {
        if b == 0.0 {
            return Ok((n, 0.0));
        }
        let nf = n as f64;
        if nf + c.re > 0.0 {
            let rho = value_norm * f64::max(1.0, (weight_norm + nf) / (nf + 1.0)) / (nf + c.re);
            if rho < 1.0 {
                let bound = b / (1.0 - rho);
                last_bound = bound;
                if bound < tol {
                    return Ok((n, bound));
                }
            }
        }
        let denom = (nf + 1.0) * (c + nf).norm();
        b *= value_norm * (weight_norm + nf) / denom;
        if !b.is_finite() {
            return Err((n, f64::INFINITY));
        }
    }
    Err((max_terms, last_bound))
}

/// `Σ_{n<N} Z_n(p) / (c)_n`, with `N` from the majorant.
///
/// Uses the scaled recurrence for `u_n = Z_n/(c)_n`:
/// `u_n = (1/n) Σ_{m=1}^{n} p_m u_{n-m} / Π_{j=n-m}^{n-1}(c+j)`, which never
/// forms `(c)_n` or `Z_n` on their own and so does not overflow for large `c`.
pub fn power_sum_series(
    data: &PowerSumData,
    c: Complex64,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesValue> {
    check_pole(c)?;
    let (n_terms, bound, ok) =
        match truncation_degree(data.value_norm(), data.weight_norm(), c, tol, max_terms) {
            Ok((n, b)) => (n, b, true),
            Err((n, b)) => (n, b, false),
        };
    let p = data.power_sums(n_terms);
    let mut u: Vec<Complex64> = Vec::with_capacity(n_terms + 1);
    u.push(Complex64::one());
    let mut sum = Complex64::zero();
    if n_terms > 0 {
        sum += u[0];
    }
    for n in 1..n_terms {
        let mut acc = Complex64::zero();
        let mut factor = Complex64::one();
        for m in 1..=n {
            factor /= c + (n - m) as f64;
            acc += p[m - 1] * u[n - m] * factor;
        }
        let un = acc / n as f64;
        u.push(un);
        sum += un;
    }
    if !ok {
        return Err(Error::Truncation {
            partial: sum,
            bound,
            terms: n_terms,
        });
    }
    Ok(SeriesValue {
        value: sum,
        terms: n_terms,
        tail_bound: bound,
    })
}

/// `₁F₁[a; c; x] = Σ (a)_n x^n / ((c)_n n!)` for real `a, c > 0`, `x ≥ 0`.
/// Evaluates the majorant itself.
pub fn hypergeometric_1f1(a: f64, c: f64, x: f64, tol: f64) -> Result<f64> {
    check_pole(Complex64::new(c, 0.0))?;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..DEFAULT_MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * x / ((c + nf) * (nf + 1.0));
        sum += term;
        let ratio = x * f64::max(1.0, (a + nf + 1.0) / (nf + 2.0)) / (c + nf + 1.0);
        if ratio < 1.0 && term.abs() * ratio / (1.0 - ratio) < tol * sum.abs().max(1.0) {
            return Ok(sum);
        }
    }
    Err(Error::Truncation {
        partial: Complex64::new(sum, 0.0),
        bound: f64::INFINITY,
        terms: DEFAULT_MAX_TERMS,
    })
}
