//! Cycle index polynomials `Z^G` of explicitly listed permutation groups and
//! `Z_n = Z^{S_n}`, with exact rational coefficients.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinatorics::{
    cycle_structure, enumerate_partitions, factorial, multinomial_weight, Partition, Permutation,
};
use crate::error::{invalid, Error, Result};

/// Largest degree built by default. `p(30) = 5604` monomials.
pub const DEFAULT_MAX_DEGREE: usize = 30;

/// Sparse polynomial in `t_1, …, t_n` whose monomials are indexed by
/// partitions of `n` (`t^λ = Π t_i^{λ_i}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleIndexPolynomial {
    n: usize,
    terms: BTreeMap<Partition, BigRational>,
}

impl CycleIndexPolynomial {
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Partition, BigRational> {
        &self.terms
    }

    /// Terms in reverse-lexicographic order of the frequency vectors, the
    /// same order as [`enumerate_partitions`].
    pub fn terms_reverse_lex(&self) -> impl Iterator<Item = (&Partition, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, lambda: &Partition) -> BigRational {
        self.terms
            .get(lambda)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coefficient_sum(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, c| acc + c)
    }

    /// `Σ_λ coeff(λ) Π point[i]^{λ_i}` in double-precision complex arithmetic.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() < self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: point.len(),
            });
        }
        let mut acc = Complex64::zero();
        for (lambda, c) in &self.terms {
            acc += lambda.monomial(point) * rational_to_f64(c);
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_exact(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() < self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: point.len(),
            });
        }
        let mut acc = BigRational::zero();
        for (lambda, c) in &self.terms {
            acc += lambda.monomial(point) * c;
        }
        Ok(acc)
    }

    fn check_degree(n: usize, cap: usize) -> Result<()> {
        if n > cap {
            return Err(invalid(format!("degree {n} exceeds the cap {cap}")));
        }
        Ok(())
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        // huge numerators/denominators: scale both down first
        _ => {
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
            let a = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let b = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            a / b
        }
    }
}

/// `Z_n(t) = (1/n!) Σ_{λ⊢n} M(λ) t^λ`.
pub fn cycle_index_direct(n: usize) -> Result<CycleIndexPolynomial> {
    cycle_index_direct_capped(n, DEFAULT_MAX_DEGREE)
}

pub fn cycle_index_direct_capped(n: usize, cap: usize) -> Result<CycleIndexPolynomial> {
    CycleIndexPolynomial::check_degree(n, cap)?;
    let nfact = BigInt::from(factorial(n));
    let terms = enumerate_partitions(n)
        .into_iter()
        .map(|lambda| {
            let c = BigRational::new(BigInt::from(multinomial_weight(&lambda)), nfact.clone());
            (lambda, c)
        })
        .collect();
    Ok(CycleIndexPolynomial { n, terms })
}

/// `Z_n = (1/n) Σ_{k=0}^{n-1} Z_k · t_{n-k}` with `Z_0 = 1`.
pub fn cycle_index_recurrence(n: usize) -> Result<CycleIndexPolynomial> {
    cycle_index_recurrence_capped(n, DEFAULT_MAX_DEGREE)
}

pub fn cycle_index_recurrence_capped(n: usize, cap: usize) -> Result<CycleIndexPolynomial> {
    CycleIndexPolynomial::check_degree(n, cap)?;
    let mut all: Vec<BTreeMap<Partition, BigRational>> = Vec::with_capacity(n + 1);
    all.push(BTreeMap::from([(Partition::empty(), BigRational::one())]));
    for m in 1..=n {
        let inv_m = BigRational::new(BigInt::one(), BigInt::from(m));
        let mut next: BTreeMap<Partition, BigRational> = BTreeMap::new();
        for (k, zk) in all.iter().enumerate() {
            for (lambda, c) in zk {
                let key = lambda.with_part(m - k);
                *next.entry(key).or_insert_with(BigRational::zero) += c * &inv_m;
            }
        }
        all.push(next);
    }
    Ok(CycleIndexPolynomial {
        n,
        terms: all.pop().unwrap(),
    })
}

/// `Z^G(t) = (1/#G) Σ_{π∈G} t^{λ(π)}` for a group given by its full list of
/// elements. The list is checked for closure under composition.
pub fn cycle_index_group(elements: &[Permutation]) -> Result<CycleIndexPolynomial> {
    let first = elements
        .first()
        .ok_or_else(|| Error::NotAGroup("empty element list".into()))?;
    let n = first.degree();
    if let Some(bad) = elements.iter().find(|p| p.degree() != n) {
        return Err(Error::NotAGroup(format!(
            "element {:?} acts on [1..{}], expected [1..{n}]",
            bad.images(),
            bad.degree()
        )));
    }
    let set: HashSet<&Permutation> = elements.iter().collect();
    if set.len() != elements.len() {
        return Err(Error::NotAGroup("duplicate elements".into()));
    }
    check_closed(elements, &set)?;
    let inv = BigRational::new(BigInt::one(), BigInt::from(elements.len()));
    let mut terms: BTreeMap<Partition, BigRational> = BTreeMap::new();
    for pi in elements {
        *terms
            .entry(cycle_structure(pi))
            .or_insert_with(BigRational::zero) += &inv;
    }
    Ok(CycleIndexPolynomial { n, terms })
}

/// A finite set is a group iff it equals the subgroup it generates. The
/// subgroup is grown one generator at a time, each new generator at least
/// doubling it, and every product found must already be in `set`.
fn check_closed(elements: &[Permutation], set: &HashSet<&Permutation>) -> Result<()> {
    let n = elements[0].degree();
    let mut generated: HashSet<Permutation> = HashSet::from([Permutation::identity(n)]);
    let mut order = vec![Permutation::identity(n)];
    let mut gens: Vec<&Permutation> = Vec::new();
    for g in elements {
        if generated.contains(g) {
            continue;
        }
        gens.push(g);
        let mut frontier = 0;
        order.push(g.clone());
        generated.insert(g.clone());
        // products of every generated element with every generator
        let mut rescan = order.clone();
        while frontier < rescan.len() {
            let x = rescan[frontier].clone();
            frontier += 1;
            for h in &gens {
                let y = x.compose(h);
                if generated.contains(&y) {
                    continue;
                }
                if !set.contains(&y) {
                    return Err(Error::NotAGroup(format!(
                        "{:?} ∘ {:?} = {:?} is missing",
                        x.images(),
                        h.images(),
                        y.images()
                    )));
                }
                generated.insert(y.clone());
                order.push(y.clone());
                rescan.push(y);
            }
        }
    }
    if !set.iter().any(|p| p.is_identity()) {
        return Err(Error::NotAGroup("identity is missing".into()));
    }
    Ok(())
}

/// Values `Z_0, Z_1, …, Z_N` at the point `(p_1, …, p_N)`, computed with the
/// recurrence `n Z_n = Σ_{m=1}^{n} p_m Z_{n-m}`. This is the O(N²) route used
/// by every series evaluation; the partition sum is never expanded.
pub fn evaluate_sequence(p: &[Complex64]) -> Vec<Complex64> {
    let mut z = Vec::with_capacity(p.len() + 1);
    z.push(Complex64::one());
    extend_sequence(&mut z, p);
    z
}

/// Extends `z = [Z_0, …, Z_{j}]` to cover every power sum in `p`.
pub(crate) fn extend_sequence(z: &mut Vec<Complex64>, p: &[Complex64]) {
    while z.len() <= p.len() {
        let n = z.len();
        let mut acc = Complex64::zero();
        for m in 1..=n {
            acc += p[m - 1] * z[n - m];
        }
        z.push(acc / n as f64);
    }
}

/// Cyclic group `C_n` generated by `i ↦ i + 1 mod n`.
pub fn cyclic_group(n: usize) -> Vec<Permutation> {
    (0..n.max(1))
        .map(|shift| Permutation::from_zero_based((0..n).map(|i| (i + shift) % n.max(1)).collect()))
        .collect()
}

/// Symmetric group `S_n` as an explicit list.
pub fn symmetric_group(n: usize) -> Vec<Permutation> {
    crate::combinatorics::all_permutations(n)
}

/// Trivial group on `[n]`.
pub fn trivial_group(n: usize) -> Vec<Permutation> {
    vec![Permutation::identity(n)]
}

/// Dihedral group of the `n`-gon: rotations and reflections `i ↦ -i + shift`.
pub fn dihedral_group(n: usize) -> Vec<Permutation> {
    if n <= 2 {
        return symmetric_group(n);
    }
    let mut out = cyclic_group(n);
    out.extend(
        (0..n).map(|shift| {
            Permutation::from_zero_based((0..n).map(|i| (n + shift - i) % n).collect())
        }),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn part(freq: &[u32]) -> Partition {
        Partition::from_freq(freq)
    }

    #[test]
    fn small_degrees() {
        let z0 = cycle_index_direct(0).unwrap();
        assert_eq!(z0.terms().len(), 1);
        assert_eq!(z0.coefficient(&Partition::empty()), BigRational::one());
        let z1 = cycle_index_recurrence(1).unwrap();
        assert_eq!(z1.terms().len(), 1);
        assert_eq!(z1.coefficient(&part(&[1])), BigRational::one());
        let z2 = cycle_index_direct(2).unwrap();
        assert_eq!(z2.coefficient(&part(&[2, 0])), q(1, 2));
        assert_eq!(z2.coefficient(&part(&[0, 1])), q(1, 2));
        let z3 = cycle_index_recurrence(3).unwrap();
        assert_eq!(z3.coefficient(&part(&[3, 0, 0])), q(1, 6));
        assert_eq!(z3.coefficient(&part(&[1, 1, 0])), q(1, 2));
        assert_eq!(z3.coefficient(&part(&[0, 0, 1])), q(1, 3));
    }

    #[test]
    fn routes_agree() {
        for n in 0..=12 {
            assert_eq!(
                cycle_index_direct(n).unwrap(),
                cycle_index_recurrence(n).unwrap()
            );
        }
    }

    #[test]
    fn degree_cap() {
        assert!(cycle_index_direct(31).is_err());
        assert!(cycle_index_recurrence_capped(5, 4).is_err());
    }

    #[test]
    fn group_indices() {
        let id = cycle_index_group(&[Permutation::identity(3)]).unwrap();
        assert_eq!(id.terms().len(), 1);
        assert_eq!(id.coefficient(&part(&[3, 0, 0])), BigRational::one());

        let s3 = cycle_index_group(&symmetric_group(3)).unwrap();
        assert_eq!(s3, cycle_index_direct(3).unwrap());

        let c4 = cycle_index_group(&cyclic_group(4)).unwrap();
        assert_eq!(c4.coefficient(&part(&[4, 0, 0, 0])), q(1, 4));
        assert_eq!(c4.coefficient(&part(&[0, 2, 0, 0])), q(1, 4));
        assert_eq!(c4.coefficient(&part(&[0, 0, 0, 1])), q(1, 2));
        assert_eq!(c4.coefficient_sum(), BigRational::one());
    }

    #[test]
    fn dihedral_is_a_group() {
        for n in 1..=7 {
            let g = dihedral_group(n);
            let z = cycle_index_group(&g).unwrap();
            assert_eq!(z.coefficient_sum(), BigRational::one());
            assert_eq!(g.len(), if n <= 2 { n.max(1) } else { 2 * n });
        }
    }

    #[test]
    fn rejects_non_groups() {
        let swap = Permutation::new(&[2, 1, 3]).unwrap();
        let cyc = Permutation::new(&[2, 3, 1]).unwrap();
        let err = cycle_index_group(&[Permutation::identity(3), swap, cyc]).unwrap_err();
        assert!(matches!(err, Error::NotAGroup(_)));
        assert!(cycle_index_group(&[]).is_err());
        let mixed = [Permutation::identity(2), Permutation::identity(3)];
        assert!(cycle_index_group(&mixed).is_err());
    }

    #[test]
    fn evaluation() {
        let ones = vec![Complex64::one(); 10];
        for n in 0..=10 {
            let v = cycle_index_direct(n).unwrap().evaluate(&ones).unwrap();
            assert!((v - 1.0).norm() < 1e-14);
        }
        let z3 = cycle_index_direct(3).unwrap();
        assert!(z3.evaluate(&ones[..2]).is_err());
    }

    #[test]
    fn sequence_matches_polynomials() {
        let p: Vec<Complex64> = (1..=9)
            .map(|i| Complex64::new(0.3 * i as f64 - 1.0, 0.1 * (i as f64).sin()))
            .collect();
        let seq = evaluate_sequence(&p);
        for (n, value) in seq.iter().enumerate() {
            let direct = cycle_index_direct(n).unwrap().evaluate(&p).unwrap();
            assert!(
                (value - direct).norm() < 1e-12 * (1.0 + direct.norm()),
                "n={n}"
            );
        }
    }

    #[test]
    fn exact_evaluation_matches_float() {
        let z4 = cycle_index_direct(4).unwrap();
        let pt: Vec<BigRational> = (1..=4).map(|i| q(i, 3)).collect();
        let exact = z4.evaluate_exact(&pt).unwrap();
        let fl: Vec<Complex64> = (1..=4)
            .map(|i| Complex64::new(i as f64 / 3.0, 0.0))
            .collect();
        let approx = z4.evaluate(&fl).unwrap();
        assert!((rational_to_f64(&exact) - approx.re).abs() < 1e-14);
    }
}
