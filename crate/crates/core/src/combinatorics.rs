//! Integer partitions in frequency representation, permutations of `[k]`,
//! set partitions, and the class sizes of the symmetric group.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Integer partition of `n`, stored by frequencies: `freq[i]` counts the
/// parts equal to `i + 1`. The vector is dense with length exactly `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    freq: Vec<u32>,
}

impl Partition {
    /// Builds a partition from a frequency vector of any length; the weighted
    /// sum determines `n` and the vector is padded or trimmed to length `n`.
    pub fn from_freq(freq: &[u32]) -> Self {
        let n: usize = freq
            .iter()
            .enumerate()
            .map(|(i, &f)| (i + 1) * f as usize)
            .sum();
        let mut dense = vec![0u32; n];
        for (i, &f) in freq.iter().enumerate() {
            if f > 0 {
                dense[i] = f;
            }
        }
        Partition { freq: dense }
    }

    /// Builds a partition from its list of part sizes (any order, all positive).
    pub fn from_parts(parts: &[usize]) -> Result<Self> {
        let n: usize = parts.iter().sum();
        let mut freq = vec![0u32; n];
        for &p in parts {
            if p == 0 {
                return Err(invalid("partition parts must be positive"));
            }
            freq[p - 1] += 1;
        }
        Ok(Partition { freq })
    }

    pub fn empty() -> Self {
        Partition { freq: Vec::new() }
    }

    /// The integer being partitioned.
    pub fn n(&self) -> usize {
        self.freq.len()
    }

    pub fn freq(&self) -> &[u32] {
        &self.freq
    }

    /// Frequency of parts equal to `size` (1-based part size).
    pub fn count(&self, size: usize) -> u32 {
        if size == 0 {
            return 0;
        }
        self.freq.get(size - 1).copied().unwrap_or(0)
    }

    /// Number of parts, `|λ|`.
    pub fn num_parts(&self) -> usize {
        self.freq.iter().map(|&f| f as usize).sum()
    }

    /// Part sizes in ascending order, each repeated by its frequency.
    pub fn parts(&self) -> Vec<usize> {
        self.freq
            .iter()
            .enumerate()
            .flat_map(|(i, &f)| std::iter::repeat_n(i + 1, f as usize))
            .collect()
    }

    /// Adds one part of the given size, producing a partition of `n + size`.
    pub fn with_part(&self, size: usize) -> Self {
        let mut freq = self.freq.clone();
        freq.resize(self.n() + size, 0);
        freq[size - 1] += 1;
        Partition { freq }
    }

    /// Product `Π t_i^{λ_i}` over the supplied values.
    pub fn monomial<T>(&self, t: &[T]) -> T
    where
        T: Clone + One + std::ops::Mul<Output = T>,
    {
        let mut acc = T::one();
        for (i, &f) in self.freq.iter().enumerate() {
            for _ in 0..f {
                acc = acc * t[i].clone();
            }
        }
        acc
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.freq.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n`, each once, in reverse-lexicographic order of the
/// frequency vectors: `(n,0,…,0)` first, `(0,…,0,1)` last.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut freq = vec![0u32; n];
    fill_frequencies(n, 0, &mut freq, &mut out);
    out
}

// Chooses freq[idx] from the largest feasible count downwards, which emits
// vectors in descending lexicographic order directly.
fn fill_frequencies(remaining: usize, idx: usize, freq: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { freq: freq.clone() });
        return;
    }
    if idx >= freq.len() {
        return;
    }
    let size = idx + 1;
    for count in (0..=remaining / size).rev() {
        freq[idx] = count as u32;
        fill_frequencies(remaining - count * size, idx + 1, freq, out);
    }
    freq[idx] = 0;
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Number of permutations of `[n]` with cycle structure `λ`:
/// `n! / (Π λ_i! · Π i^{λ_i})`.
pub fn multinomial_weight(lambda: &Partition) -> BigUint {
    let mut den = BigUint::one();
    for (i, &f) in lambda.freq().iter().enumerate() {
        den *= factorial(f as usize);
        den *= BigUint::from(i + 1).pow(f);
    }
    factorial(lambda.n()) / den
}

/// Bijection of `[k]`. The public interface is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    // 0-based images
    map: Vec<usize>,
}

impl Permutation {
    /// `images[i - 1] = π(i)`, values in `1..=k`.
    pub fn new(images: &[usize]) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        let mut map = Vec::with_capacity(k);
        for &x in images {
            if x == 0 || x > k || seen[x - 1] {
                return Err(invalid(format!(
                    "{images:?} is not a bijection of [1..{k}]"
                )));
            }
            seen[x - 1] = true;
            map.push(x - 1);
        }
        Ok(Permutation { map })
    }

    pub(crate) fn from_zero_based(map: Vec<usize>) -> Self {
        debug_assert!({
            let set: BTreeSet<_> = map.iter().copied().collect();
            set.len() == map.len() && map.iter().all(|&x| x < map.len())
        });
        Permutation { map }
    }

    pub fn identity(k: usize) -> Self {
        Permutation {
            map: (0..k).collect(),
        }
    }

    /// Permutation of `[k]` given as a product of disjoint cycles (1-based).
    pub fn from_cycles(k: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut map: Vec<usize> = (0..k).collect();
        let mut touched = vec![false; k];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if x == 0 || x > k || touched[x - 1] {
                    return Err(invalid(format!("bad cycle {cycle:?} on [1..{k}]")));
                }
                touched[x - 1] = true;
                let next = cycle[(pos + 1) % cycle.len()];
                map[x - 1] = next - 1;
            }
        }
        Ok(Permutation { map })
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    /// `π(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1] + 1
    }

    pub(crate) fn apply0(&self, i: usize) -> usize {
        self.map[i]
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.map.iter().map(|&x| x + 1).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            map: other.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// Cycle type of `π` as a partition of its degree.
pub fn cycle_structure(pi: &Permutation) -> Partition {
    let k = pi.degree();
    let mut freq = vec![0u32; k];
    let mut seen = vec![false; k];
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = pi.apply0(x);
            len += 1;
        }
        freq[len - 1] += 1;
    }
    Partition { freq }
}

/// Every permutation of `[n]`, in lexicographic order of the image vectors.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation {
        map: current.clone(),
    }];
    // next-permutation in lexicographic order
    while let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) {
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(Permutation {
            map: current.clone(),
        });
    }
    out
}

/// Partition of `[n]` into disjoint non-empty blocks, kept in canonical
/// order: ascending by cardinality, then by least element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(invalid("set partition blocks must be non-empty"));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x > n || seen[x - 1] {
                    return Err(invalid(format!("element {x} repeated or outside [1..{n}]")));
                }
                seen[x - 1] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(invalid(format!("blocks do not cover [1..{n}]")));
        }
        blocks.sort_by_key(|b| (b.len(), b[0]));
        Ok(SetPartition { n, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }
}

/// `λ_i(L) = #{h : #L_h = i}`.
pub fn set_partition_shape(l: &SetPartition) -> Partition {
    let mut freq = vec![0u32; l.n()];
    for block in l.blocks() {
        freq[block.len() - 1] += 1;
    }
    Partition { freq }
}

/// Iterator over the weak compositions of `n` into `k` parts (`m ∈ ℕ₀^k`,
/// `|m| = n`), in reverse-lexicographic order starting at `(n,0,…,0)`.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<usize>>,
}

impl Compositions {
    pub fn new(n: usize, k: usize) -> Self {
        let current = match k {
            0 if n == 0 => Some(Vec::new()),
            0 => None,
            _ => {
                let mut v = vec![0; k];
                v[0] = n;
                Some(v)
            }
        };
        Compositions { current }
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        // move one unit from the last non-zero entry before the tail to its
        // right neighbour, and gather the tail there
        let mut next = out.clone();
        if k > 1 {
            if let Some(i) = (0..k - 1).rev().find(|&i| next[i] > 0) {
                let tail: usize = next[i + 1..].iter().sum();
                next[i] -= 1;
                for x in next[i + 1..].iter_mut() {
                    *x = 0;
                }
                next[i + 1] = tail + 1;
                self.current = Some(next);
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn partition_counts() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        assert_eq!(enumerate_partitions(4).len(), 5);
        assert_eq!(enumerate_partitions(10).len(), 42);
    }

    #[test]
    fn partitions_are_reverse_lex_and_valid() {
        for n in 0..=12 {
            let parts = enumerate_partitions(n);
            for w in parts.windows(2) {
                assert!(w[0].freq() > w[1].freq());
            }
            for p in &parts {
                assert_eq!(p.n(), n);
                let weighted: usize = p
                    .freq()
                    .iter()
                    .enumerate()
                    .map(|(i, &f)| (i + 1) * f as usize)
                    .sum();
                assert_eq!(weighted, n);
            }
        }
        let four = enumerate_partitions(4);
        assert_eq!(four[0].freq(), &[4, 0, 0, 0]);
        assert_eq!(four[4].freq(), &[0, 0, 0, 1]);
    }

    #[test]
    fn weights() {
        assert_eq!(
            multinomial_weight(&Partition::from_freq(&[5])),
            BigUint::one()
        );
        assert_eq!(
            multinomial_weight(&Partition::from_freq(&[0, 0, 1])),
            BigUint::from(2u32)
        );
        let total: BigUint = enumerate_partitions(6).iter().map(multinomial_weight).sum();
        assert_eq!(total, BigUint::from(720u32));
    }

    #[test]
    fn class_sizes_match_weights() {
        for n in 0..=7 {
            let mut tally: BTreeMap<Partition, u64> = BTreeMap::new();
            for pi in all_permutations(n) {
                *tally.entry(cycle_structure(&pi)).or_default() += 1;
            }
            for lambda in enumerate_partitions(n) {
                assert_eq!(
                    BigUint::from(tally.get(&lambda).copied().unwrap_or(0)),
                    multinomial_weight(&lambda),
                    "n={n} λ={lambda}"
                );
            }
        }
    }

    #[test]
    fn cycle_structures() {
        assert_eq!(
            cycle_structure(&Permutation::identity(3)).freq(),
            &[3, 0, 0]
        );
        let swap = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        assert_eq!(cycle_structure(&swap).freq(), &[1, 1, 0]);
        let four = Permutation::new(&[2, 3, 4, 1]).unwrap();
        assert_eq!(cycle_structure(&four).freq(), &[0, 0, 0, 1]);
    }

    #[test]
    fn permutation_validation_and_algebra() {
        assert!(Permutation::new(&[1, 1]).is_err());
        assert!(Permutation::new(&[0, 1]).is_err());
        let p = Permutation::new(&[2, 3, 1]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        let q = Permutation::new(&[1, 3, 2]).unwrap();
        // (p ∘ q)(2) = p(3) = 1
        assert_eq!(p.compose(&q).apply(2), 1);
        assert_eq!(all_permutations(5).len(), 120);
    }

    #[test]
    fn set_partition_shapes() {
        let l = SetPartition::new(3, vec![vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(set_partition_shape(&l).freq(), &[3, 0, 0]);
        let l = SetPartition::new(3, vec![vec![2, 1], vec![3]]).unwrap();
        assert_eq!(set_partition_shape(&l).freq(), &[1, 1, 0]);
        assert_eq!(l.blocks(), &[vec![3], vec![1, 2]]);
        let l = SetPartition::new(5, vec![vec![1, 2, 3], vec![4, 5]]).unwrap();
        assert_eq!(set_partition_shape(&l).freq(), &[0, 1, 1, 0, 0]);
        assert!(SetPartition::new(3, vec![vec![1, 2]]).is_err());
        assert!(SetPartition::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
    }

    #[test]
    fn compositions_enumerate() {
        let all: Vec<_> = Compositions::new(3, 3).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![3, 0, 0]);
        assert_eq!(all[9], vec![0, 0, 3]);
        let set: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 10);
        assert!(all.iter().all(|m| m.iter().sum::<usize>() == 3));
        assert_eq!(Compositions::new(0, 4).count(), 1);
        assert_eq!(Compositions::new(5, 1).collect::<Vec<_>>(), vec![vec![5]]);
        assert_eq!(Compositions::new(0, 0).count(), 1);
        assert_eq!(Compositions::new(2, 0).count(), 0);
    }
}
