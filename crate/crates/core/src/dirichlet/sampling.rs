//! Dirichlet draws as normalized independent Gamma variates.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::DirichletParams;
use crate::error::{invalid, Result};

/// Reusable sampler for `Dir(α)`, `α > 0`.
///
/// Shapes `≥ 1` use the Gamma sampler directly. Shapes below one draw
/// `G_{a+1} U^{1/a}` and stay in log space, since `U^{1/a}` underflows for
/// small `a`; the normalization is then a log-sum-exp.
#[derive(Debug, Clone)]
pub struct DirichletSampler {
    gammas: Vec<Gamma<f64>>,
    shapes: Vec<f64>,
    boosted: bool,
}

impl DirichletSampler {
    pub fn new(alpha: &DirichletParams) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(invalid("sampling requires alpha > 0"));
        }
        let boosted = alpha.as_slice().iter().any(|&a| a < 1.0);
        let gammas = alpha
            .as_slice()
            .iter()
            .map(|&a| {
                let shape = if boosted && a < 1.0 { a + 1.0 } else { a };
                Gamma::new(shape, 1.0).map_err(|e| invalid(format!("gamma shape {shape}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DirichletSampler {
            gammas,
            shapes: alpha.as_slice().to_vec(),
            boosted,
        })
    }

    pub fn dim(&self) -> usize {
        self.shapes.len()
    }

    /// Writes one draw into `out` (length `k`).
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim());
        if self.dim() == 1 {
            out[0] = 1.0;
            return;
        }
        if !self.boosted {
            let mut total = 0.0;
            for (o, g) in out.iter_mut().zip(&self.gammas) {
                *o = g.sample(rng);
                total += *o;
            }
            for o in out.iter_mut() {
                *o /= total;
            }
            return;
        }
        let mut max = f64::NEG_INFINITY;
        for ((o, g), &a) in out.iter_mut().zip(&self.gammas).zip(&self.shapes) {
            let mut lg = g.sample(rng).ln();
            if a < 1.0 {
                let u: f64 = 1.0 - rng.random::<f64>(); // in (0, 1]
                lg += u.ln() / a;
            }
            *o = lg;
            max = max.max(lg);
        }
        let mut total = 0.0;
        for o in out.iter_mut() {
            *o = (*o - max).exp();
            total += *o;
        }
        for o in out.iter_mut() {
            *o /= total;
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.sample_into(rng, &mut out);
        out
    }
}

/// One draw from `Dir(α)`.
pub fn sample_dirichlet<R: Rng + ?Sized>(alpha: &DirichletParams, rng: &mut R) -> Result<Vec<f64>> {
    Ok(DirichletSampler::new(alpha)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::shard_rng;

    #[test]
    fn one_dimensional_is_point_mass() {
        let alpha = DirichletParams::new(vec![0.2]).unwrap();
        let mut rng = shard_rng(1, 0);
        for _ in 0..10 {
            assert_eq!(sample_dirichlet(&alpha, &mut rng).unwrap(), vec![1.0]);
        }
    }

    #[test]
    fn rejects_nonpositive() {
        let alpha = DirichletParams::analytic(vec![1.0, -0.5]).unwrap();
        assert!(sample_dirichlet(&alpha, &mut shard_rng(0, 0)).is_err());
    }

    #[test]
    fn on_the_simplex_with_tiny_shapes() {
        let alpha = DirichletParams::new(vec![1e-3, 0.01, 2.0]).unwrap();
        let sampler = DirichletSampler::new(&alpha).unwrap();
        let mut rng = shard_rng(5, 0);
        for _ in 0..1000 {
            let y = sampler.sample(&mut rng);
            assert!(y.iter().all(|v| *v >= 0.0 && v.is_finite()));
            assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_segment_ks() {
        // Dir(1,1): first coordinate is uniform on [0,1]
        let alpha = DirichletParams::new(vec![1.0, 1.0]).unwrap();
        let sampler = DirichletSampler::new(&alpha).unwrap();
        let mut rng = shard_rng(11, 0);
        let n = 20_000;
        let mut xs: Vec<f64> = (0..n).map(|_| sampler.sample(&mut rng)[0]).collect();
        xs.sort_by(f64::total_cmp);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| f64::max((i as f64 + 1.0) / n as f64 - x, x - i as f64 / n as f64))
            .fold(0.0, f64::max);
        // 1% critical value 1.628/sqrt(n)
        assert!(d < 1.628 / (n as f64).sqrt(), "KS statistic {d}");
    }
}
