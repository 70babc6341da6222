//! Pushforwards of `Dir(α)` along maps `g: [k] → [k]`.
//!
//! Every such `g` factors as `τ ∘ ⋆λ_g ∘ π_g`: a permutation that lines the
//! fibers of `g` up as consecutive blocks (shortest first), the block map
//! `⋆λ_g`, and a relabeling `τ` of the blocks by the value `g` takes on them.

use std::ops::Add;

use serde::Serialize;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::moments::moment_polynomial;
use super::DirichletParams;
use crate::combinatorics::{set_partition_shape, Partition, Permutation, SetPartition};
use crate::error::{invalid, Error, Result};

/// Block map `[k] → [|λ|]`: the first `λ_1` positions are singletons, the
/// next `2λ_2` positions form `λ_2` consecutive pairs, and so on.
/// Returned as 1-based images of `1..=k`.
pub fn star_lambda(lambda: &Partition) -> Vec<usize> {
    let mut out = Vec::with_capacity(lambda.n());
    let mut block = 0;
    for (j, &count) in lambda.freq().iter().enumerate() {
        let size = j + 1;
        for _ in 0..count {
            block += 1;
            out.extend(std::iter::repeat_n(block, size));
        }
    }
    out
}

/// Sums consecutive groups of `y` as laid out by [`star_lambda`].
pub fn additive_contraction<T>(y: &[T], lambda: &Partition) -> Result<Vec<T>>
where
    T: Clone + Add<Output = T>,
{
    if y.len() != lambda.n() {
        return Err(Error::LengthMismatch {
            expected: lambda.n(),
            found: y.len(),
        });
    }
    let mut out: Vec<T> = Vec::with_capacity(lambda.num_parts());
    let mut prev = 0;
    for (pos, b) in star_lambda(lambda).into_iter().enumerate() {
        if b == prev {
            let last = out.pop().expect("block already opened");
            out.push(last + y[pos].clone());
        } else {
            out.push(y[pos].clone());
            prev = b;
        }
    }
    Ok(out)
}

/// Factorization `g = relabel ∘ ⋆lambda ∘ pi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapDecomposition {
    pub lambda: Partition,
    pub pi: Permutation,
    /// `relabel[b-1]` is the value of `g` on block `b`.
    pub relabel: Vec<usize>,
    /// Fibers of `g` in block order.
    pub fibers: SetPartition,
}

impl MapDecomposition {
    /// `⋆λ ∘ π` as 1-based images.
    pub fn block_map(&self) -> Vec<usize> {
        let star = star_lambda(&self.lambda);
        (1..=self.pi.degree())
            .map(|i| star[self.pi.apply(i) - 1])
            .collect()
    }

    /// `relabel ∘ ⋆λ ∘ π` as 1-based images; equals `g`.
    pub fn compose(&self) -> Vec<usize> {
        self.block_map()
            .into_iter()
            .map(|b| self.relabel[b - 1])
            .collect()
    }
}

fn check_map(g: &[usize]) -> Result<()> {
    let k = g.len();
    if k == 0 {
        return Err(invalid("map must have a non-empty domain"));
    }
    if let Some(&bad) = g.iter().find(|&&v| v == 0 || v > k) {
        return Err(invalid(format!("map value {bad} outside [1, {k}]")));
    }
    Ok(())
}

/// Nonempty fibers of `g` (1-based images), as `(value, elements)` in
/// canonical order: by cardinality, then least element.
fn fibers(g: &[usize]) -> Vec<(usize, Vec<usize>)> {
    let k = g.len();
    let mut by_value: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &v) in g.iter().enumerate() {
        by_value[v - 1].push(i + 1);
    }
    let mut out: Vec<(usize, Vec<usize>)> = by_value
        .into_iter()
        .enumerate()
        .filter(|(_, f)| !f.is_empty())
        .map(|(v, f)| (v + 1, f))
        .collect();
    out.sort_by_key(|(_, f)| (f.len(), f[0]));
    out
}

/// Splits `g: [k] → [k]` (1-based images) into shape, permutation, and
/// block relabeling.
pub fn decompose_map(g: &[usize]) -> Result<MapDecomposition> {
    check_map(g)?;
    let k = g.len();
    let fib = fibers(g);
    let mut positions = vec![0usize; k];
    let mut next = 1;
    for (_, elems) in &fib {
        for &e in elems {
            positions[e - 1] = next;
            next += 1;
        }
    }
    let pi = Permutation::new(&positions)?;
    let fibers = SetPartition::new(k, fib.iter().map(|(_, f)| f.clone()).collect())?;
    Ok(MapDecomposition {
        lambda: set_partition_shape(&fibers),
        pi,
        relabel: fib.iter().map(|(v, _)| *v).collect(),
        fibers,
    })
}

/// `g_♯α` restricted to the image of `g`, with the image labels in
/// increasing order.
pub fn pushforward_with_labels(
    g: &[usize],
    alpha: &DirichletParams,
) -> Result<(Vec<usize>, DirichletParams)> {
    check_map(g)?;
    if g.len() != alpha.len() {
        return Err(Error::LengthMismatch {
            expected: g.len(),
            found: alpha.len(),
        });
    }
    let mut mass = vec![0.0; g.len()];
    let mut hit = vec![false; g.len()];
    for (&v, &a) in g.iter().zip(alpha.as_slice()) {
        mass[v - 1] += a;
        hit[v - 1] = true;
    }
    let labels: Vec<usize> = (1..=g.len())
        .filter(|&j| hit[j - 1] && mass[j - 1] != 0.0)
        .collect();
    let values = labels.iter().map(|&j| mass[j - 1]).collect();
    let params = if alpha.is_positive() {
        DirichletParams::new(values)?
    } else {
        DirichletParams::analytic(values)?
    };
    Ok((labels, params))
}

/// `(g_♯α)_j = Σ_{g(i)=j} α_i`, zero-mass coordinates dropped.
pub fn pushforward_params(g: &[usize], alpha: &DirichletParams) -> Result<DirichletParams> {
    Ok(pushforward_with_labels(g, alpha)?.1)
}

/// One map checked against the pushforward identity for moments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapCheck {
    pub map: Vec<usize>,
    pub decomposition: MapDecomposition,
    /// Whether `relabel ∘ ⋆λ ∘ π` reproduces the map.
    pub composes: bool,
    /// Image of the map, increasing.
    pub labels: Vec<usize>,
    /// Degrees where the moment polynomial of `α`, with `s_i` replaced by
    /// `s_{g(i)}`, differs from that of `g_♯α`.
    pub moment_mismatches: Vec<usize>,
}

impl MapCheck {
    pub fn pass(&self) -> bool {
        self.composes && self.moment_mismatches.is_empty()
    }
}

/// Factorizes `g` and compares the degree `0..=max_degree` moment
/// polynomials of `Dir(α)` along `g` with those of `Dir(g_♯α)`, exactly.
pub fn check_map_pushforward(
    g: &[usize],
    alpha: &[BigRational],
    max_degree: usize,
) -> Result<MapCheck> {
    check_map(g)?;
    if g.len() != alpha.len() {
        return Err(Error::LengthMismatch {
            expected: g.len(),
            found: alpha.len(),
        });
    }
    if alpha.iter().any(|a| !a.is_positive()) {
        return Err(invalid("alpha must be positive"));
    }
    let decomposition = decompose_map(g)?;
    let composes = decomposition.compose() == g;
    let mut labels: Vec<usize> = g.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let to_labels: Vec<usize> = g
        .iter()
        .map(|v| labels.binary_search(v).expect("image label"))
        .collect();
    let mut pushed = vec![BigRational::zero(); labels.len()];
    for (a, &j) in alpha.iter().zip(&to_labels) {
        pushed[j] += a;
    }
    let mut moment_mismatches = Vec::new();
    for n in 0..=max_degree {
        let lhs = moment_polynomial(alpha, n)?.relabel(&to_labels, labels.len());
        if lhs != moment_polynomial(&pushed, n)? {
            moment_mismatches.push(n);
        }
    }
    Ok(MapCheck {
        map: g.to_vec(),
        decomposition,
        composes,
        labels,
        moment_mismatches,
    })
}

/// Every map `[k] → [k]` as 1-based images, in lexicographic order.
pub fn all_maps(k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if k == 0 { 0 } else { k.pow(k as u32) };
    (0..total).map(move |mut code| {
        let mut g = vec![0; k];
        for slot in g.iter_mut().rev() {
            *slot = code % k + 1;
            code /= k;
        }
        g
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_maps() {
        assert_eq!(star_lambda(&Partition::from_freq(&[3])), vec![1, 2, 3]);
        assert_eq!(star_lambda(&Partition::from_freq(&[0, 1])), vec![1, 1]);
        assert_eq!(star_lambda(&Partition::from_freq(&[1, 1])), vec![1, 2, 2]);
        assert_eq!(
            star_lambda(&Partition::from_freq(&[1, 0, 2])),
            vec![1, 2, 2, 2, 3, 3, 3]
        );
    }

    #[test]
    fn contraction() {
        let l = Partition::from_freq(&[1, 1]);
        assert_eq!(
            additive_contraction(&[1.0, 2.0, 4.0], &l).unwrap(),
            vec![1.0, 6.0]
        );
        assert_eq!(
            additive_contraction(&[1.0, 2.0], &Partition::from_freq(&[0, 1])).unwrap(),
            vec![3.0]
        );
        assert!(additive_contraction(&[1.0, 2.0], &l).is_err());
    }

    #[test]
    fn identity_and_constant() {
        let d = decompose_map(&[1, 2, 3]).unwrap();
        assert_eq!(d.lambda, Partition::from_freq(&[3]));
        assert!(d.pi.is_identity());
        let d = decompose_map(&[1, 1, 1]).unwrap();
        assert_eq!(d.lambda, Partition::from_freq(&[0, 0, 1]));
        assert_eq!(d.block_map(), vec![1, 1, 1]);
        assert_eq!(d.compose(), vec![1, 1, 1]);
    }

    #[test]
    fn exhaustive_factorization() {
        for k in 1..=4 {
            for g in all_maps(k) {
                let d = decompose_map(&g).unwrap();
                assert_eq!(d.compose(), g);
                // block sizes are the fiber sizes
                let mut sizes: Vec<usize> = d.fibers.blocks().iter().map(|b| b.len()).collect();
                sizes.sort();
                let mut parts = d.lambda.parts();
                parts.sort();
                assert_eq!(sizes, parts);
            }
        }
    }

    #[test]
    fn pushforward() {
        let alpha = DirichletParams::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(pushforward_params(&[1, 2, 3], &alpha).unwrap(), alpha);
        assert_eq!(
            pushforward_params(&[1, 1, 1], &alpha).unwrap().as_slice(),
            &[6.0]
        );
        let (labels, p) = pushforward_with_labels(&[3, 1, 3], &alpha).unwrap();
        assert_eq!(labels, vec![1, 3]);
        assert_eq!(p.as_slice(), &[2.0, 4.0]);
    }

    #[test]
    fn map_enumeration() {
        let maps: Vec<_> = all_maps(2).collect();
        assert_eq!(maps, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        assert_eq!(all_maps(3).count(), 27);
    }

    #[test]
    fn pushforward_identity_small() {
        let alpha = [
            BigRational::new(1.into(), 2.into()),
            BigRational::from_integer(3.into()),
            BigRational::new(5.into(), 7.into()),
        ];
        for g in all_maps(3) {
            assert!(
                check_map_pushforward(&g, &alpha, 3).unwrap().pass(),
                "{g:?}"
            );
        }
    }
}
