//! Moments `E (s·Y)^n` of `Y ~ Dir(α)`: multi-index sum, cycle index, and
//! Monte Carlo.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::sampling::DirichletSampler;
use super::{pochhammer_exact, pochhammer_f64, rational_sum, DirichletParams};
use crate::combinatorics::{factorial, Compositions};
use crate::cycle_index::{evaluate_sequence, rational_to_f64};
use crate::error::{invalid, Error, Result};
use crate::exec::{shard_lengths, shard_rng, Execution, MeanAccumulator};
use crate::poly::RationalPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    MultiIndex,
    CycleIndex,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub value: f64,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

impl MomentReport {
    /// Report for a deterministic route.
    pub fn exact(value: f64, route: Route) -> Self {
        MomentReport {
            value,
            route,
            stderr: None,
            samples: None,
        }
    }
}

fn check_len(alpha: usize, s: usize) -> Result<()> {
    if alpha != s {
        return Err(Error::LengthMismatch {
            expected: alpha,
            found: s,
        });
    }
    Ok(())
}

/// `n! / (|α|)_n`, rejecting the vanishing denominators.
fn normalizer(total: f64, n: usize) -> Result<f64> {
    let poch = pochhammer_f64(total, n);
    if poch == 0.0 {
        return Err(Error::SingularDenominator { total, degree: n });
    }
    let mut fact = 1.0;
    for j in 1..=n {
        fact *= j as f64;
    }
    Ok(fact / poch)
}

fn normalizer_exact(total: &BigRational, n: usize) -> Result<BigRational> {
    let poch = pochhammer_exact(total, n);
    if poch.is_zero() {
        return Err(Error::SingularDenominator {
            total: rational_to_f64(total),
            degree: n,
        });
    }
    Ok(BigRational::from_integer(BigInt::from(factorial(n))) / poch)
}

/// `(n!/(|α|)_n) Σ_{|m|=n} (α)_m s^m / m!`, enumerating compositions of `n`.
pub fn moment_multiindex(s: &[f64], alpha: &DirichletParams, n: usize) -> Result<f64> {
    check_len(alpha.len(), s.len())?;
    let norm = normalizer(alpha.total(), n)?;
    // tables[i][m] = (α_i)_m s_i^m / m!
    let tables: Vec<Vec<f64>> = alpha
        .as_slice()
        .iter()
        .zip(s)
        .map(|(&a, &x)| {
            let mut t = Vec::with_capacity(n + 1);
            let mut v = 1.0;
            for m in 0..=n {
                t.push(v);
                v *= (a + m as f64) * x / (m as f64 + 1.0);
            }
            t
        })
        .collect();
    let sum: f64 = Compositions::new(n, alpha.len())
        .map(|m| {
            m.iter()
                .enumerate()
                .map(|(i, &mi)| tables[i][mi])
                .product::<f64>()
        })
        .sum();
    Ok(norm * sum)
}

/// `(n!/(|α|)_n) Z_n(p_1, …, p_n)` with `p_j = Σ_i α_i s_i^j`.
pub fn moment_cycle_index(s: &[f64], alpha: &DirichletParams, n: usize) -> Result<f64> {
    check_len(alpha.len(), s.len())?;
    let norm = normalizer(alpha.total(), n)?;
    let p: Vec<Complex64> = (1..=n)
        .map(|j| {
            let v: f64 = alpha
                .as_slice()
                .iter()
                .zip(s)
                .map(|(a, x)| a * x.powi(j as i32))
                .sum();
            Complex64::new(v, 0.0)
        })
        .collect();
    Ok(norm * evaluate_sequence(&p)[n].re)
}

/// Exact multi-index moment for rational `s` and `α`.
pub fn moment_multiindex_exact(
    s: &[BigRational],
    alpha: &[BigRational],
    n: usize,
) -> Result<BigRational> {
    check_len(alpha.len(), s.len())?;
    let norm = normalizer_exact(&rational_sum(alpha), n)?;
    let mut sum = BigRational::zero();
    for m in Compositions::new(n, alpha.len()) {
        let mut term = BigRational::one();
        for ((a, x), &mi) in alpha.iter().zip(s).zip(&m) {
            term *= pochhammer_exact(a, mi) * num_traits::pow(x.clone(), mi)
                / BigRational::from_integer(BigInt::from(factorial(mi)));
        }
        sum += term;
    }
    Ok(norm * sum)
}

/// Exact cycle-index moment for rational `s` and `α`.
pub fn moment_cycle_index_exact(
    s: &[BigRational],
    alpha: &[BigRational],
    n: usize,
) -> Result<BigRational> {
    check_len(alpha.len(), s.len())?;
    let norm = normalizer_exact(&rational_sum(alpha), n)?;
    // n Z_n = Σ_{m=1}^{n} p_m Z_{n-m}
    let p: Vec<BigRational> = (1..=n)
        .map(|j| {
            alpha
                .iter()
                .zip(s)
                .map(|(a, x)| a * num_traits::pow(x.clone(), j))
                .fold(BigRational::zero(), |acc, v| acc + v)
        })
        .collect();
    let mut z = vec![BigRational::one()];
    for deg in 1..=n {
        let mut acc = BigRational::zero();
        for m in 1..=deg {
            acc += &p[m - 1] * &z[deg - m];
        }
        z.push(acc / BigRational::from_integer(BigInt::from(deg)));
    }
    Ok(norm * &z[n])
}

/// The degree-`n` moment as a polynomial in `s_1, …, s_k`:
/// `(n!/(|α|)_n) Σ_{|m|=n} (α)_m / m! · s^m`.
pub fn moment_polynomial(alpha: &[BigRational], n: usize) -> Result<RationalPoly> {
    if alpha.is_empty() {
        return Err(invalid("alpha must be non-empty"));
    }
    let norm = normalizer_exact(&rational_sum(alpha), n)?;
    let mut poly = RationalPoly::zero(alpha.len());
    for m in Compositions::new(n, alpha.len()) {
        let mut c = norm.clone();
        for (a, &mi) in alpha.iter().zip(&m) {
            c *= pochhammer_exact(a, mi) / BigRational::from_integer(BigInt::from(factorial(mi)));
        }
        poly.add_term(m.iter().map(|&x| x as u32).collect(), c);
    }
    Ok(poly)
}

/// Sample mean of `(s·Y)^n` over `samples` draws, with standard error.
///
/// Draws are split into fixed shards with independent streams, so the
/// estimate depends only on `seed`, never on the execution policy.
pub fn moment_monte_carlo(
    s: &[f64],
    alpha: &DirichletParams,
    n: usize,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<MomentReport> {
    check_len(alpha.len(), s.len())?;
    if samples == 0 {
        return Err(invalid("sample count must be at least 1"));
    }
    let sampler = DirichletSampler::new(alpha)?;
    if n == 0 {
        return Ok(MomentReport {
            value: 1.0,
            route: Route::MonteCarlo,
            stderr: Some(0.0),
            samples: Some(samples as u64),
        });
    }
    let shards = shard_lengths(samples);
    let parts = exec.map(shards.len(), |shard| {
        let mut rng = shard_rng(seed, shard as u64);
        let mut acc = MeanAccumulator::default();
        let mut y = vec![0.0; alpha.len()];
        for _ in 0..shards[shard] {
            sampler.sample_into(&mut rng, &mut y);
            let dot: f64 = y.iter().zip(s).map(|(a, b)| a * b).sum();
            acc.push(dot.powi(n as i32));
        }
        acc
    });
    let acc = parts
        .iter()
        .fold(MeanAccumulator::default(), |a, b| a.merge(b));
    Ok(MomentReport {
        value: acc.mean(),
        route: Route::MonteCarlo,
        stderr: Some(acc.stderr()),
        samples: Some(samples as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn low_degrees() {
        let alpha = DirichletParams::new(vec![2.0, 1.0]).unwrap();
        assert_eq!(moment_multiindex(&[0.3, 0.9], &alpha, 0).unwrap(), 1.0);
        let m1 = moment_cycle_index(&[1.0, 0.0], &alpha, 1).unwrap();
        assert!((m1 - 2.0 / 3.0).abs() < 1e-15);
        let one = DirichletParams::new(vec![3.7]).unwrap();
        for n in 0..8 {
            assert!((moment_multiindex(&[1.0], &one, n).unwrap() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn uniform_second_moment() {
        let alpha = DirichletParams::new(vec![1.0, 1.0]).unwrap();
        let v = moment_multiindex(&[1.0, 0.0], &alpha, 2).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn singular_denominator() {
        let alpha = DirichletParams::analytic(vec![1.0, -3.0]).unwrap();
        assert!(matches!(
            moment_multiindex(&[1.0, 1.0], &alpha, 4),
            Err(Error::SingularDenominator { .. })
        ));
        assert!(moment_multiindex(&[1.0, 1.0], &alpha, 2).is_ok());
    }

    #[test]
    fn exact_routes_agree() {
        let alpha = vec![q(1, 2), q(3, 1), q(5, 7)];
        let s = vec![q(-1, 3), q(2, 1), q(1, 5)];
        for n in 0..=7 {
            let a = moment_multiindex_exact(&s, &alpha, n).unwrap();
            let b = moment_cycle_index_exact(&s, &alpha, n).unwrap();
            assert_eq!(a, b, "n={n}");
            let poly = moment_polynomial(&alpha, n).unwrap();
            assert_eq!(poly.evaluate_exact(&s), a);
            assert_eq!(poly.coefficient_sum(), BigRational::one());
        }
    }

    #[test]
    fn monte_carlo_degree_zero() {
        let alpha = DirichletParams::new(vec![1.0, 2.0]).unwrap();
        let r = moment_monte_carlo(&[0.1, 0.2], &alpha, 0, 10, 1, Execution::Sequential).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.stderr, Some(0.0));
    }

    #[test]
    fn monte_carlo_policy_independent() {
        let alpha = DirichletParams::new(vec![0.4, 2.0, 1.1]).unwrap();
        let s = [1.0, -0.5, 0.25];
        let a = moment_monte_carlo(&s, &alpha, 3, 40_000, 9, Execution::Sequential).unwrap();
        let b = moment_monte_carlo(&s, &alpha, 3, 40_000, 9, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let exact = moment_cycle_index(&s, &alpha, 3).unwrap();
        assert!((a.value - exact).abs() < 4.0 * a.stderr.unwrap());
    }
}
