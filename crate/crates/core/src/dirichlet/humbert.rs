//! The confluent Lauricella series
//! `ₖΦ₂[α; c; s] = Σ_m (α)_m s^m / ((c)_{|m|} m!)` and the characteristic
//! functional of `Dir(α)`.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::series::{check_pole, power_sum_series, truncation_degree, PowerSumData, SeriesValue};
use super::{is_nonpositive_integer, DirichletParams};
use crate::error::{invalid, Error, Result};

/// Direction of the concentration limit `β·α` with `β → 0` or `β → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BetaToZero,
    BetaToInfinity,
}

fn check_lengths(alpha: usize, s: usize) -> Result<()> {
    if alpha != s {
        return Err(Error::LengthMismatch {
            expected: alpha,
            found: s,
        });
    }
    if alpha == 0 {
        return Err(invalid("alpha must be non-empty"));
    }
    Ok(())
}

/// `ₖΦ₂[α; c; s]` summed by total degree over multi-indices.
///
/// The degree-`n` block `Σ_{|m|=n} (α)_m s^m / m!` is the Cauchy product of
/// the one-variable series `Σ_m (α_i)_m s_i^m / m!`, so each block costs
/// `O(k n)` given the previous ones. Every coordinate table is scaled by
/// `max(|c|, 1)^{-m}`, which keeps large parameters (`α ↦ βα`, `β ≫ 1`) in
/// range. Truncation follows the majorant in [`super::series`].
pub fn humbert_phi2(
    alpha: &[Complex64],
    c: Complex64,
    s: &[Complex64],
    tol: f64,
) -> Result<SeriesValue> {
    check_lengths(alpha.len(), s.len())?;
    check_positive_tol(tol)?;
    check_pole(c)?;
    let weight_norm: f64 = alpha.iter().map(|a| a.norm()).sum();
    let value_norm = s.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let (n_terms, bound, ok) = match truncation_degree(
        value_norm,
        weight_norm,
        c,
        tol,
        super::series::DEFAULT_MAX_TERMS,
    ) {
        Ok((n, b)) => (n, b, true),
        Err((n, b)) => (n, b, false),
    };

    let scale = c.norm().max(1.0);
    let k = alpha.len();
    // tables[i][m] = (α_i)_m (s_i/scale)^m / m!
    let mut tables: Vec<Vec<Complex64>> = vec![Vec::with_capacity(n_terms); k];
    for i in 0..k {
        let x = s[i] / scale;
        let mut t = Complex64::one();
        for m in 0..n_terms {
            tables[i].push(t);
            t *= (alpha[i] + m as f64) * x / (m as f64 + 1.0);
        }
    }
    // block[n] accumulates the Cauchy product over the coordinates seen so far
    let mut block: Vec<Complex64> = vec![Complex64::zero(); n_terms];
    if n_terms > 0 {
        block.copy_from_slice(&tables[0]);
    }
    for table in tables.iter().skip(1) {
        let mut next = vec![Complex64::zero(); n_terms];
        for (n, slot) in next.iter_mut().enumerate() {
            let mut acc = Complex64::zero();
            for m in 0..=n {
                acc += block[n - m] * table[m];
            }
            *slot = acc;
        }
        block = next;
    }
    let mut sum = Complex64::zero();
    // ratio = scale^n / (c)_n
    let mut ratio = Complex64::one();
    for (n, b) in block.iter().enumerate() {
        sum += b * ratio;
        ratio *= scale / (c + n as f64);
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

/// `ₖΦ₂[α; c; s]` through the cycle index: the degree-`n` block equals
/// `Z_n(p_1, …, p_n)` with `p_j = Σ_i α_i s_i^j`.
pub fn humbert_phi2_power_sums(
    alpha: &[Complex64],
    c: Complex64,
    s: &[Complex64],
    tol: f64,
) -> Result<SeriesValue> {
    check_lengths(alpha.len(), s.len())?;
    check_positive_tol(tol)?;
    let data = PowerSumData::new(alpha.to_vec(), s.to_vec());
    power_sum_series(&data, c, tol, super::series::DEFAULT_MAX_TERMS)
}

/// `E exp(i s·Y)` for `Y ~ Dir(α)`, i.e. `ₖΦ₂[α; |α|; i s]`.
pub fn characteristic_functional(
    alpha: &DirichletParams,
    s: &[f64],
    tol: f64,
) -> Result<Complex64> {
    if !alpha.is_positive() {
        return Err(invalid("characteristic functional needs alpha > 0"));
    }
    check_lengths(alpha.len(), s.len())?;
    let is: Vec<Complex64> = s.iter().map(|&x| Complex64::new(0.0, x)).collect();
    let c = Complex64::new(alpha.total(), 0.0);
    Ok(humbert_phi2_power_sums(&alpha.to_complex(), c, &is, tol)?.value)
}

/// Closed-form limit of `ₖΦ₂[βα; β|α|; s]`.
///
/// `β → 0`: `Σ_i (α_i/|α|) e^{s_i}`. `β → ∞`: `exp(α·s/|α|)`.
pub fn confluent_limit(
    alpha: &DirichletParams,
    s: &[Complex64],
    regime: Regime,
) -> Result<Complex64> {
    check_lengths(alpha.len(), s.len())?;
    let total = alpha.total();
    if is_nonpositive_integer(total) || !alpha.is_positive() {
        return Err(invalid("confluent limits need alpha > 0"));
    }
    let weights = alpha.as_slice().iter().map(|a| a / total);
    Ok(match regime {
        Regime::BetaToZero => weights.zip(s).map(|(w, x)| x.exp() * w).sum(),
        Regime::BetaToInfinity => weights.zip(s).map(|(w, x)| x * w).sum::<Complex64>().exp(),
    })
}

/// Limit of the `n`-th moment `E (s·Y)^n`, `Y ~ Dir(βα)`.
///
/// `β → 0`: `Σ_i (α_i/|α|) s_i^n`. `β → ∞`: `(α·s/|α|)^n`.
pub fn asymptotic_moment(
    s: &[f64],
    alpha: &DirichletParams,
    n: usize,
    regime: Regime,
) -> Result<f64> {
    check_lengths(alpha.len(), s.len())?;
    if !alpha.is_positive() {
        return Err(invalid("asymptotic moments need alpha > 0"));
    }
    let total = alpha.total();
    let weights = alpha.as_slice().iter().map(|a| a / total);
    Ok(match regime {
        Regime::BetaToZero => weights.zip(s).map(|(w, x)| w * x.powi(n as i32)).sum(),
        Regime::BetaToInfinity => weights
            .zip(s)
            .map(|(w, x)| w * x)
            .sum::<f64>()
            .powi(n as i32),
    })
}

fn check_positive_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle_index::evaluate_sequence;
    use rand::Rng;

    fn cx(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn zero_argument_is_one() {
        let a = cx(&[0.4, 1.3, 2.0]);
        let v = humbert_phi2(&a, Complex64::new(2.2, 0.0), &cx(&[0.0; 3]), 1e-12).unwrap();
        assert!((v.value - 1.0).norm() < 1e-15);
    }

    #[test]
    fn one_variable_exponential() {
        for a in [0.3, 1.0, 7.0] {
            for s in [-5.0, -2.0, 0.5, 5.0] {
                let v = humbert_phi2(&cx(&[a]), Complex64::new(a, 0.0), &cx(&[s]), 1e-12).unwrap();
                assert!((v.value.re - f64::exp(s)).abs() < 1e-10, "a={a} s={s}");
            }
        }
    }

    #[test]
    fn routes_agree_complex() {
        let a = vec![
            Complex64::new(0.7, 0.2),
            Complex64::new(1.1, -0.4),
            Complex64::new(0.3, 0.0),
        ];
        let s = vec![
            Complex64::new(0.5, 1.0),
            Complex64::new(-1.2, 0.3),
            Complex64::new(0.0, -2.0),
        ];
        let c = Complex64::new(1.7, 0.5);
        let x = humbert_phi2(&a, c, &s, 1e-13).unwrap().value;
        let y = humbert_phi2_power_sums(&a, c, &s, 1e-13).unwrap().value;
        assert!((x - y).norm() < 1e-11, "{x} vs {y}");
    }

    #[test]
    fn egf_identity() {
        let a = [0.2, 0.5, 0.3];
        let s = [1.0, -0.5, 2.0];
        for t in [-2.0, -0.7, 0.0, 1.3, 2.0] {
            let ts: Vec<Complex64> = s.iter().map(|x| Complex64::new(t * x, 0.0)).collect();
            let lhs = humbert_phi2(&cx(&a), Complex64::one(), &ts, 1e-13)
                .unwrap()
                .value;
            let p: Vec<Complex64> = (1..=60)
                .map(|j| {
                    Complex64::new(a.iter().zip(&s).map(|(ai, si)| ai * si.powi(j)).sum(), 0.0)
                })
                .collect();
            let z = evaluate_sequence(&p);
            let mut rhs = Complex64::zero();
            let mut tn_over_fact = 1.0;
            for (n, zn) in z.iter().enumerate() {
                if n > 0 {
                    tn_over_fact *= t / n as f64;
                }
                rhs += zn * tn_over_fact;
            }
            assert!((lhs - rhs).norm() < 1e-10, "t={t}");
        }
    }

    #[test]
    fn characteristic_functional_conjugate_symmetry() {
        let alpha = DirichletParams::new(vec![0.5, 1.5, 2.0]).unwrap();
        let s = [1.2, -0.3, 2.5];
        let neg: Vec<f64> = s.iter().map(|x| -x).collect();
        let a = characteristic_functional(&alpha, &s, 1e-14).unwrap();
        let b = characteristic_functional(&alpha, &neg, 1e-14).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
        assert!(a.norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn large_scale_rate_is_inverse_linear() {
        let mut rng = crate::exec::shard_rng(41, 0);
        for _ in 0..5 {
            let alpha =
                DirichletParams::new((0..3).map(|_| 0.2 + rng.random::<f64>()).collect()).unwrap();
            let raw: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            let s: Vec<Complex64> = raw
                .iter()
                .map(|x| Complex64::new(2.0 * x / norm, 0.0))
                .collect();
            let limit = confluent_limit(&alpha, &s, Regime::BetaToInfinity).unwrap();
            let err = |beta: f64| {
                let a = alpha.scaled(beta).unwrap();
                let v = humbert_phi2(&a.to_complex(), Complex64::new(a.total(), 0.0), &s, 1e-14)
                    .unwrap();
                (v.value - limit).norm()
            };
            let ratio = err(1e4) / err(1e5);
            assert!((4.0..=25.0).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn limits_closed_form() {
        let alpha = DirichletParams::new(vec![1.0, 1.0]).unwrap();
        let s = cx(&[0.3, -1.0]);
        let z = confluent_limit(&alpha, &s, Regime::BetaToZero).unwrap();
        assert!((z.re - (0.3f64.exp() + (-1.0f64).exp()) / 2.0).abs() < 1e-15);
        let inf = confluent_limit(&alpha, &s, Regime::BetaToInfinity).unwrap();
        assert!((inf.re - (-0.35f64).exp()).abs() < 1e-15);
        assert_eq!(
            asymptotic_moment(&[1.0, 0.0], &alpha, 2, Regime::BetaToZero).unwrap(),
            0.5
        );
        assert_eq!(
            asymptotic_moment(&[1.0, 0.0], &alpha, 2, Regime::BetaToInfinity).unwrap(),
            0.25
        );
    }
}
