//! Stick-breaking draws from `D_{βσ}` and Monte Carlo estimates built on them.

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::Rng;
use rand_distr::Distribution;
use serde::Serialize;

use super::measure::{BasePartition, DiscreteMeasure, ReferenceMeasure, TestFunction};
use crate::combinatorics::Compositions;
use crate::dirichlet::pochhammer_f64;
use crate::error::{invalid, Result};
use crate::exec::{shard_lengths, shard_rng, Execution, MeanAccumulator};

/// Residual stick mass below which breaking stops.
pub const DEFAULT_EPS: f64 = 1e-10;
/// Hard cap on atoms per draw.
pub const MAX_ATOMS: usize = 1 << 24;

/// Reusable sampler for `D_{βσ}` with `σ` a probability on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct FergusonSampler {
    beta: f64,
    eps: f64,
    sigma: ReferenceMeasure,
    // component 0 is the uniform part, then the atoms of σ
    components: Option<WeightedIndex<f64>>,
}

impl FergusonSampler {
    pub fn new(beta: f64, sigma: &ReferenceMeasure, eps: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(invalid(format!("beta must be positive, got {beta}")));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid(format!("eps must lie in (0, 1), got {eps}")));
        }
        if !sigma.is_probability() {
            return Err(invalid("base measure must be a probability"));
        }
        let components = if sigma.atoms().is_empty() {
            None
        } else {
            let w: Vec<f64> = std::iter::once(sigma.uniform_mass())
                .chain(sigma.atoms().weights().iter().copied())
                .collect();
            Some(WeightedIndex::new(w).map_err(|e| invalid(format!("base weights: {e}")))?)
        };
        Ok(FergusonSampler {
            beta,
            eps,
            sigma: sigma.clone(),
            components,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn base_point<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.components {
            None => rng.random::<f64>(),
            Some(ix) => match ix.sample(rng) {
                0 => rng.random::<f64>(),
                j => self.sigma.atoms().atoms()[j - 1],
            },
        }
    }

    /// Stick weights `w_i = v_i Π_{j<i}(1 - v_j)`, `v ~ Beta(1, β)`, with the
    /// residual below `eps` folded into the last weight.
    pub fn stick_weights<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = Vec::new();
        let mut rest = 1.0;
        let inv_beta = 1.0 / self.beta;
        while rest >= self.eps && out.len() < MAX_ATOMS {
            // 1 - u^{1/β} with u ∈ (0, 1]
            let u = 1.0 - rng.random::<f64>();
            let v = -f64::exp_m1(inv_beta * u.ln());
            let w = rest * v;
            out.push(w);
            rest -= w;
        }
        let folded: f64 = out[..out.len() - 1].iter().sum();
        if let Some(last) = out.last_mut() {
            *last = 1.0 - folded;
        }
        out
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> DiscreteMeasure {
        let weights = self.stick_weights(rng);
        let atoms: Vec<f64> = weights.iter().map(|_| self.base_point(rng)).collect();
        DiscreteMeasure::new(atoms, weights).expect("atoms lie in [0, 1]")
    }
}

/// One draw of `D_{βσ}`.
pub fn sample_ferguson<R: Rng + ?Sized>(
    beta: f64,
    sigma: &ReferenceMeasure,
    eps: f64,
    rng: &mut R,
) -> Result<DiscreteMeasure> {
    Ok(FergusonSampler::new(beta, sigma, eps)?.sample(rng))
}

/// `(ηX_1, …, ηX_m)`.
pub fn marginalize(eta: &DiscreteMeasure, partition: &BasePartition) -> Vec<f64> {
    partition.marginalize(eta)
}

/// Sample mean against its exact value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentComparison {
    /// Exponent vector of the mixed moment; empty for the first stick weight.
    pub exponents: Vec<usize>,
    pub exact: f64,
    pub estimate: f64,
    pub stderr: f64,
}

impl MomentComparison {
    /// `|estimate - exact|` in units of the standard error.
    pub fn z_score(&self) -> f64 {
        let d = (self.estimate - self.exact).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }

    pub fn within(&self, sigmas: f64) -> bool {
        (self.estimate - self.exact).abs() <= sigmas * self.stderr
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples < 2 {
        return Err(invalid("need at least 2 samples"));
    }
    Ok(())
}

/// Runs `draw` over deterministic shards and merges one accumulator per
/// statistic.
fn sharded<F>(
    samples: usize,
    seed: u64,
    stats: usize,
    exec: Execution,
    draw: F,
) -> Vec<MeanAccumulator>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng, &mut [MeanAccumulator]) + Sync + Send,
{
    let shards = shard_lengths(samples);
    let parts = exec.map(shards.len(), |shard| {
        let mut rng = shard_rng(seed, shard as u64);
        let mut acc = vec![MeanAccumulator::default(); stats];
        for _ in 0..shards[shard] {
            draw(&mut rng, &mut acc);
        }
        acc
    });
    let mut out = vec![MeanAccumulator::default(); stats];
    for part in &parts {
        for (o, p) in out.iter_mut().zip(part) {
            *o = o.merge(p);
        }
    }
    out
}

/// Mixed moments `E Π_i (ηX_i)^{m_i}`, `1 ≤ |m| ≤ max_order`, of the
/// partition marginal against those of `Dir(β σ⋄X)`.
pub fn marginal_moments(
    sampler: &FergusonSampler,
    partition: &BasePartition,
    max_order: usize,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<MomentComparison>> {
    check_samples(samples)?;
    let alpha: Vec<f64> = sampler
        .sigma
        .cell_masses(partition)
        .iter()
        .map(|m| m * sampler.beta)
        .collect();
    if alpha.iter().any(|&a| a <= 0.0) {
        return Err(invalid("every cell needs positive base mass"));
    }
    let total: f64 = alpha.iter().sum();
    let k = partition.len();
    let indices: Vec<Vec<usize>> = (1..=max_order)
        .flat_map(|n| Compositions::new(n, k))
        .collect();
    let acc = sharded(samples, seed, indices.len(), exec, |rng, acc| {
        let y = partition.marginalize(&sampler.sample(rng));
        for (a, m) in acc.iter_mut().zip(&indices) {
            a.push(m.iter().zip(&y).map(|(&e, &v)| v.powi(e as i32)).product());
        }
    });
    Ok(indices
        .into_iter()
        .zip(acc)
        .map(|(m, a)| {
            let n: usize = m.iter().sum();
            let num: f64 = m
                .iter()
                .zip(&alpha)
                .map(|(&e, &al)| pochhammer_f64(al, e))
                .product();
            MomentComparison {
                exact: num / pochhammer_f64(total, n),
                estimate: a.mean(),
                stderr: a.stderr(),
                exponents: m,
            }
        })
        .collect())
}

/// Mean of the first stick weight against `1/(1+β)`.
pub fn first_weight_mean(
    sampler: &FergusonSampler,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<MomentComparison> {
    check_samples(samples)?;
    let acc = sharded(samples, seed, 1, exec, |rng, acc| {
        acc[0].push(sampler.stick_weights(rng)[0]);
    });
    Ok(MomentComparison {
        exponents: Vec::new(),
        exact: 1.0 / (1.0 + sampler.beta),
        estimate: acc[0].mean(),
        stderr: acc[0].stderr(),
    })
}

/// Monte Carlo estimate of `E exp(i t ⟨η, f⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfEstimate {
    pub value: Complex64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub samples: usize,
}

impl CfEstimate {
    /// Whether `target` lies within `sigmas` standard errors in both parts.
    pub fn agrees_with(&self, target: Complex64, sigmas: f64) -> bool {
        (self.value.re - target.re).abs() <= sigmas * self.stderr_re
            && (self.value.im - target.im).abs() <= sigmas * self.stderr_im
    }
}

pub fn cf_monte_carlo(
    sampler: &FergusonSampler,
    f: &TestFunction,
    t: f64,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<CfEstimate> {
    Ok(cf_monte_carlo_grid(sampler, f, &[t], samples, seed, exec)?[0])
}

/// [`cf_monte_carlo`] at every `t` in `ts`, sharing one set of draws.
pub fn cf_monte_carlo_grid(
    sampler: &FergusonSampler,
    f: &TestFunction,
    ts: &[f64],
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<Vec<CfEstimate>> {
    check_samples(samples)?;
    if let Some(t) = ts.iter().find(|t| !t.is_finite()) {
        return Err(invalid(format!("t = {t} is not finite")));
    }
    let acc = sharded(samples, seed, 2 * ts.len(), exec, |rng, acc| {
        let pairing = f.pair(&sampler.sample(rng));
        for (j, t) in ts.iter().enumerate() {
            let (sin, cos) = (t * pairing).sin_cos();
            acc[2 * j].push(cos);
            acc[2 * j + 1].push(sin);
        }
    });
    Ok(acc
        .chunks(2)
        .map(|c| CfEstimate {
            value: Complex64::new(c[0].mean(), c[1].mean()),
            stderr_re: c[0].stderr(),
            stderr_im: c[1].stderr(),
            samples,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform() -> ReferenceMeasure {
        ReferenceMeasure::uniform(1.0).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FergusonSampler::new(0.0, &uniform(), 1e-10).is_err());
        assert!(FergusonSampler::new(1.0, &uniform(), 1.0).is_err());
        assert!(FergusonSampler::new(1.0, &ReferenceMeasure::uniform(2.0).unwrap(), 0.1).is_err());
    }

    #[test]
    fn unit_mass() {
        let mut rng = shard_rng(3, 0);
        for beta in [1e-3, 0.5, 5.0, 50.0] {
            for eps in [0.5, 1e-10] {
                let eta = sample_ferguson(beta, &uniform(), eps, &mut rng).unwrap();
                assert!((eta.total_mass() - 1.0).abs() < 1e-12);
                assert!(eta.is_nonnegative());
            }
        }
        let few = sample_ferguson(1e-3, &uniform(), 0.5, &mut rng).unwrap();
        assert!(few.len() <= 3);
    }

    #[test]
    fn discrete_base_atoms() {
        let sigma = ReferenceMeasure::discrete(
            DiscreteMeasure::probability(vec![0.1, 0.9], vec![0.3, 0.7]).unwrap(),
        );
        let s = FergusonSampler::new(2.0, &sigma, 1e-10).unwrap();
        let eta = s.sample(&mut shard_rng(1, 0));
        assert!(eta.len() <= 2);
        assert!(eta.atoms().iter().all(|&x| x == 0.1 || x == 0.9));
    }

    #[test]
    fn first_weight() {
        let s = FergusonSampler::new(1.0, &uniform(), 1e-10).unwrap();
        let c = first_weight_mean(&s, 20_000, 1, Execution::Parallel).unwrap();
        assert!(c.within(4.0), "{c:?}");
    }

    #[test]
    fn zero_frequency_is_one() {
        let s = FergusonSampler::new(1.0, &uniform(), 1e-10).unwrap();
        let f = TestFunction::constant(1.0).unwrap();
        let e = cf_monte_carlo(&s, &f, 0.0, 100, 1, Execution::Sequential).unwrap();
        assert_eq!(e.value, Complex64::new(1.0, 0.0));
    }
}
