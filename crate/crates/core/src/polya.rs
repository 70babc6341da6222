//! Pólya enumeration of colorings and shadings of `[n]` up to a permutation
//! group, and the bridge from shading counts to Dirichlet moments.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{factorial, Permutation};
use crate::cycle_index::{cycle_index_group, cycle_index_recurrence, CycleIndexPolynomial};
use crate::dirichlet::pochhammer_exact;
use crate::error::{invalid, Error, Result};
use crate::poly::RationalPoly;

/// Limits for exhaustive orbit enumeration.
pub const BRUTE_FORCE_MAX_N: usize = 8;
pub const BRUTE_FORCE_MAX_COLORINGS: u64 = 10_000_000;

/// Number of shades available for each color.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    shades: Vec<u32>,
}

impl Palette {
    pub fn new(shades: Vec<u32>) -> Result<Self> {
        if shades.is_empty() {
            return Err(invalid("palette must have at least one color"));
        }
        if shades.contains(&0) {
            return Err(invalid("every color needs at least one shade"));
        }
        Ok(Palette { shades })
    }

    /// One shade per color.
    pub fn plain(colors: usize) -> Result<Self> {
        Self::new(vec![1; colors])
    }

    pub fn shades(&self) -> &[u32] {
        &self.shades
    }

    pub fn colors(&self) -> usize {
        self.shades.len()
    }

    pub fn total_shades(&self) -> u32 {
        self.shades.iter().sum()
    }

    /// Color of each shade, shades numbered color by color.
    pub fn shade_colors(&self) -> Vec<usize> {
        self.shades
            .iter()
            .enumerate()
            .flat_map(|(c, &m)| std::iter::repeat_n(c, m as usize))
            .collect()
    }

    pub fn as_rationals(&self) -> Vec<BigRational> {
        self.shades
            .iter()
            .map(|&a| BigRational::from_integer(BigInt::from(a)))
            .collect()
    }
}

/// Generating function `Σ_h a_h s^h` of inequivalent colorings by color
/// occupancy `h` (`|h| = n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringGF {
    n: usize,
    poly: RationalPoly,
}

impl ColoringGF {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> usize {
        self.poly.vars()
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.poly
    }

    pub fn coefficient(&self, h: &[u32]) -> BigRational {
        self.poly.coefficient(h)
    }

    /// Total number of inequivalent colorings.
    pub fn total(&self) -> BigRational {
        self.poly.coefficient_sum()
    }

    /// Terms as integer counts, keyed by occupancy vector.
    pub fn counts(&self) -> BTreeMap<Vec<u32>, BigInt> {
        self.poly
            .integer_terms()
            .expect("counting generating functions are integral")
    }
}

/// `Z(p_1, …, p_n)` with `p_j = Σ_i w_i s_i^j` as a polynomial in `s`.
fn substitute_power_sums(z: &CycleIndexPolynomial, weights: &[BigRational]) -> RationalPoly {
    let vars = weights.len();
    let n = z.degree();
    let p: Vec<RationalPoly> = (1..=n)
        .map(|j| {
            weights
                .iter()
                .enumerate()
                .fold(RationalPoly::zero(vars), |acc, (i, w)| {
                    &acc + &RationalPoly::monomial(vars, i, j as u32, w.clone())
                })
        })
        .collect();
    let mut out = RationalPoly::zero(vars);
    for (lambda, c) in z.terms() {
        let mut term = RationalPoly::constant(vars, c.clone());
        for (j, &m) in lambda.freq().iter().enumerate() {
            if m > 0 {
                term = &term * &p[j].pow(m);
            }
        }
        out = &out + &term;
    }
    out
}

fn counting_gf(z: &CycleIndexPolynomial, weights: &[BigRational]) -> Result<ColoringGF> {
    let poly = substitute_power_sums(z, weights);
    if !poly.is_integral() {
        return Err(Error::Consistency(
            "non-integer orbit count after substitution; input is not a group cycle index".into(),
        ));
    }
    if poly.terms().values().any(|c| *c < BigRational::zero()) {
        return Err(Error::Consistency("negative orbit count".into()));
    }
    Ok(ColoringGF {
        n: z.degree(),
        poly,
    })
}

/// Inequivalent `k`-colorings by occupancy: `Z^G(p_1, …, p_n)` with
/// `p_j = Σ_i s_i^j`.
pub fn coloring_gf(z: &CycleIndexPolynomial, colors: usize) -> Result<ColoringGF> {
    counting_gf(z, &Palette::plain(colors)?.as_rationals())
}

/// Inequivalent shadings by color occupancy: `Z^G(p_1, …, p_n)` with
/// `p_j = Σ_i α_i s_i^j`.
pub fn shading_gf(z: &CycleIndexPolynomial, palette: &Palette) -> Result<ColoringGF> {
    counting_gf(z, &palette.as_rationals())
}

/// Probability generating function of the color occupancy of a uniformly
/// drawn `S_n`-class of shadings, weighted by class size:
/// `n!/(|α|)_n · Z_n(α·s, α·s^2, …)`. This is the degree-`n` moment
/// polynomial of `Dir(α)`.
pub fn shading_probability_gf(n: usize, palette: &Palette) -> Result<RationalPoly> {
    let z = cycle_index_recurrence(n)?;
    let gf = shading_gf(&z, palette)?;
    let total = BigRational::from_integer(BigInt::from(palette.total_shades()));
    let norm = BigRational::from_integer(BigInt::from(factorial(n))) / pochhammer_exact(&total, n);
    Ok(gf.poly.scale(&norm))
}

/// Number of multisets of size `n` over `r` shades, `(r)_n / n!`.
pub fn multiset_count(r: u32, n: usize) -> BigRational {
    pochhammer_exact(&BigRational::from_integer(BigInt::from(r)), n)
        / BigRational::from_integer(BigInt::from(factorial(n)))
}

/// Exhaustive orbit enumeration of all shadings of `[n]` under `group`,
/// tallied by color occupancy.
///
/// Shadings are indexed in base `r = Σα_i` with position 1 most significant,
/// so the first unvisited index is the lexicographically least member of its
/// orbit. Group elements act by `(f∘π)(x) = f(π(x))`.
pub fn brute_force_orbit_count(group: &[Permutation], palette: &Palette) -> Result<ColoringGF> {
    let n = group
        .first()
        .map(Permutation::degree)
        .ok_or_else(|| invalid("group must be non-empty"))?;
    let r = palette.total_shades() as u64;
    let count = r
        .checked_pow(n as u32)
        .filter(|&c| c <= BRUTE_FORCE_MAX_COLORINGS);
    let total = match count {
        Some(c) if n <= BRUTE_FORCE_MAX_N => c as usize,
        _ => {
            return Err(Error::SizeGuard(format!(
                "need n <= {BRUTE_FORCE_MAX_N} and (shades)^n <= {BRUTE_FORCE_MAX_COLORINGS}, got n = {n}, shades = {r}"
            )))
        }
    };
    // closure and degree checks
    cycle_index_group(group)?;
    let colors = palette.colors();
    let shade_color = palette.shade_colors();
    let images: Vec<Vec<usize>> = group
        .iter()
        .map(|g| (0..n).map(|x| g.apply0(x)).collect())
        .collect();
    let mut visited = vec![false; total];
    let mut tally: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    let mut digits = vec![0usize; n];
    let mut moved = vec![0usize; n];
    for idx in 0..total {
        if visited[idx] {
            continue;
        }
        decode(idx, r as usize, &mut digits);
        for img in &images {
            for x in 0..n {
                moved[x] = digits[img[x]];
            }
            visited[encode(&moved, r as usize)] = true;
        }
        let mut occ = vec![0u32; colors];
        for &d in &digits {
            occ[shade_color[d]] += 1;
        }
        *tally.entry(occ).or_insert(0) += 1;
    }
    let mut poly = RationalPoly::zero(colors);
    for (occ, c) in tally {
        poly.add_term(occ, BigRational::from_integer(BigInt::from(c)));
    }
    Ok(ColoringGF { n, poly })
}

fn decode(mut idx: usize, r: usize, digits: &mut [usize]) {
    for d in digits.iter_mut().rev() {
        *d = idx % r;
        idx /= r;
    }
}

fn encode(digits: &[usize], r: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * r + d)
}

/// Sums coefficients of `gf` after merging every shade variable into its
/// color: the colorings GF over `Σα_i` colors, collapsed to `k` colors.
pub fn merge_shades(gf: &ColoringGF, palette: &Palette) -> Result<RationalPoly> {
    if gf.colors() != palette.total_shades() as usize {
        return Err(Error::LengthMismatch {
            expected: palette.total_shades() as usize,
            found: gf.colors(),
        });
    }
    Ok(gf.poly.relabel(&palette.shade_colors(), palette.colors()))
}

/// Convenience: the occupancy GF with all coefficients one, used as a
/// reference for `S_n` colorings.
pub fn is_all_ones(gf: &ColoringGF) -> bool {
    gf.poly.terms().values().all(|c| c.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle_index::{cyclic_group, symmetric_group, trivial_group};
    use crate::dirichlet::moment_polynomial;

    fn z_of(g: &[Permutation]) -> CycleIndexPolynomial {
        cycle_index_group(g).unwrap()
    }

    #[test]
    fn symmetric_two_colors() {
        for n in 1..=6 {
            let gf = coloring_gf(&cycle_index_recurrence(n).unwrap(), 2).unwrap();
            assert!(is_all_ones(&gf));
            assert_eq!(gf.total(), BigRational::from_integer((n as i64 + 1).into()));
        }
    }

    #[test]
    fn trivial_group_binomials() {
        let gf = coloring_gf(&z_of(&trivial_group(2)), 2).unwrap();
        assert_eq!(gf.coefficient(&[2, 0]), BigRational::one());
        assert_eq!(gf.coefficient(&[1, 1]), BigRational::from_integer(2.into()));
    }

    #[test]
    fn necklaces() {
        let gf = coloring_gf(&z_of(&cyclic_group(4)), 2).unwrap();
        assert_eq!(gf.total(), BigRational::from_integer(6.into()));
        let brute = brute_force_orbit_count(&cyclic_group(4), &Palette::plain(2).unwrap()).unwrap();
        assert_eq!(brute, gf);
    }

    #[test]
    fn shadings_match_brute_force() {
        let palette = Palette::new(vec![2, 1]).unwrap();
        let g = symmetric_group(2);
        assert_eq!(
            shading_gf(&z_of(&g), &palette).unwrap(),
            brute_force_orbit_count(&g, &palette).unwrap()
        );
        let g = symmetric_group(3);
        let brute = brute_force_orbit_count(&g, &Palette::plain(2).unwrap()).unwrap();
        assert_eq!(brute.total(), BigRational::from_integer(4.into()));
    }

    #[test]
    fn shades_merge_from_colorings() {
        let palette = Palette::new(vec![2, 3]).unwrap();
        let z = cycle_index_recurrence(4).unwrap();
        let wide = coloring_gf(&z, 5).unwrap();
        assert_eq!(
            merge_shades(&wide, &palette).unwrap(),
            shading_gf(&z, &palette).unwrap().poly().clone()
        );
        assert_eq!(
            shading_gf(&z, &palette).unwrap().total(),
            multiset_count(5, 4)
        );
    }

    #[test]
    fn probability_gf_is_moment_polynomial() {
        let palette = Palette::new(vec![2, 1]).unwrap();
        let p1 = shading_probability_gf(1, &palette).unwrap();
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(p1.coefficient(&[1, 0]), q(2, 3));
        assert_eq!(p1.coefficient(&[0, 1]), q(1, 3));
        for n in 0..=5 {
            let p = shading_probability_gf(n, &palette).unwrap();
            assert_eq!(p, moment_polynomial(&palette.as_rationals(), n).unwrap());
            assert_eq!(p.coefficient_sum(), BigRational::one());
        }
    }

    #[test]
    fn size_guard() {
        let palette = Palette::new(vec![3, 3, 3, 3]).unwrap();
        assert!(matches!(
            brute_force_orbit_count(&symmetric_group(8), &palette),
            Err(Error::SizeGuard(_))
        ));
    }

    #[test]
    fn non_group_rejected() {
        let bad = vec![
            Permutation::new(&[2, 3, 1]).unwrap(),
            Permutation::identity(3),
        ];
        assert!(brute_force_orbit_count(&bad, &Palette::plain(2).unwrap()).is_err());
    }
}
