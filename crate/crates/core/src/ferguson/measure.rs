//! Measures, partitions, regions, and test functions on the base space `[0, 1]`.

use std::collections::HashMap;
use std::fmt;
use std::num::NonZeroUsize;
use std::sync::{Arc, OnceLock};

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;

use crate::dirichlet::series::PowerSumData;
use crate::error::{invalid, Error, Result};

/// Composite Gauss-Legendre rule used for integrals against the uniform part.
pub const QUAD_PANELS: usize = 64;
pub const QUAD_ORDER: usize = 16;

/// Tolerance on the total mass of a probability measure.
pub const PROBABILITY_TOL: f64 = 1e-12;

fn check_point(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("point {x} outside [0, 1]")));
    }
    Ok(())
}

/// Finitely supported signed measure `Σ w_i δ_{x_i}` on `[0, 1]`.
///
/// Atoms are distinct and kept in first-insertion order; repeated atoms are
/// merged.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct DiscreteMeasure {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if atoms.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: atoms.len(),
                found: weights.len(),
            });
        }
        for (&x, &w) in atoms.iter().zip(&weights) {
            check_point(x)?;
            if !w.is_finite() {
                return Err(invalid(format!("weight {w} is not finite")));
            }
        }
        let mut out = DiscreteMeasure::default();
        let mut index: HashMap<u64, usize> = HashMap::new();
        for (x, w) in atoms.into_iter().zip(weights) {
            // +0.0 and -0.0 are the same point
            let key = (x + 0.0).to_bits();
            match index.get(&key) {
                Some(&i) => out.weights[i] += w,
                None => {
                    index.insert(key, out.atoms.len());
                    out.atoms.push(x);
                    out.weights.push(w);
                }
            }
        }
        Ok(out)
    }

    /// Non-negative weights summing to one.
    pub fn probability(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let m = Self::new(atoms, weights)?;
        if !m.is_nonnegative() {
            return Err(invalid("probability weights must be non-negative"));
        }
        if (m.total_mass() - 1.0).abs() > PROBABILITY_TOL {
            return Err(invalid(format!("total mass {} is not 1", m.total_mass())));
        }
        Ok(m)
    }

    pub fn point_mass(x: f64) -> Result<Self> {
        Self::new(vec![x], vec![1.0])
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.atoms.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0.0)
    }

    /// `∫ f dη`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// `η + w δ_y`.
    pub fn plus_atom(&self, y: f64, w: f64) -> Result<Self> {
        let mut atoms = self.atoms.clone();
        let mut weights = self.weights.clone();
        atoms.push(y);
        weights.push(w);
        Self::new(atoms, weights)
    }

    pub fn scaled(&self, c: f64) -> Self {
        DiscreteMeasure {
            atoms: self.atoms.clone(),
            weights: self.weights.iter().map(|w| w * c).collect(),
        }
    }

    /// Image measure `m_♯η`.
    pub fn pushforward(&self, m: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.atoms.iter().map(|&x| m(x)).collect(),
            self.weights.clone(),
        )
    }
}

/// Partition of `[0, 1]` into cells `[c_{i-1}, c_i)`; the last cell is closed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasePartition {
    cuts: Vec<f64>,
}

impl BasePartition {
    /// From the interior cut points `0 < c_1 < … < c_{m-1} < 1`.
    pub fn new(interior: &[f64]) -> Result<Self> {
        let mut cuts = Vec::with_capacity(interior.len() + 2);
        cuts.push(0.0);
        cuts.extend_from_slice(interior);
        cuts.push(1.0);
        if cuts.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid(format!(
                "cut points {interior:?} must increase strictly inside (0, 1)"
            )));
        }
        Ok(BasePartition { cuts })
    }

    pub fn whole() -> Self {
        BasePartition {
            cuts: vec![0.0, 1.0],
        }
    }

    /// `2^depth` cells of equal length.
    pub fn dyadic(depth: u32) -> Result<Self> {
        if depth > 30 {
            return Err(invalid(format!("dyadic depth {depth} exceeds 30")));
        }
        let m = 1usize << depth;
        Ok(BasePartition {
            cuts: (0..=m).map(|i| i as f64 / m as f64).collect(),
        })
    }

    /// Cut points including the endpoints 0 and 1.
    pub fn cuts(&self) -> &[f64] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.cuts[i], self.cuts[i + 1])
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.cuts.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Index of the cell containing `x ∈ [0, 1]`.
    pub fn cell_of(&self, x: f64) -> usize {
        let i = self.cuts.partition_point(|&c| c <= x);
        i.clamp(1, self.len()) - 1
    }

    /// Whether `x` is an interior cut point.
    pub fn is_cut(&self, x: f64) -> bool {
        self.cuts[1..self.cuts.len() - 1].contains(&x)
    }

    /// `(ηX_1, …, ηX_m)`.
    pub fn marginalize(&self, eta: &DiscreteMeasure) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        for (x, w) in eta.iter() {
            out[self.cell_of(x)] += w;
        }
        out
    }
}

/// Finite union of intervals `[a, b)` in `[0, 1]`; an interval ending at 1
/// contains 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    intervals: Vec<(f64, f64)>,
}

impl Region {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            check_point(a)?;
            check_point(b)?;
            if a > b {
                return Err(invalid(format!("interval [{a}, {b}) is reversed")));
            }
        }
        intervals.retain(|(a, b)| a < b);
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        Ok(Region { intervals: merged })
    }

    pub fn empty() -> Self {
        Region {
            intervals: Vec::new(),
        }
    }

    pub fn whole() -> Self {
        Region {
            intervals: vec![(0.0, 1.0)],
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals
            .iter()
            .any(|&(a, b)| a <= x && (x < b || (b == 1.0 && x == 1.0)))
    }

    /// Whether `[a, b)` lies inside the region.
    pub fn covers(&self, a: f64, b: f64) -> bool {
        self.intervals.iter().any(|&(lo, hi)| lo <= a && b <= hi)
    }

    /// Whether `[a, b)` misses the region.
    pub fn misses(&self, a: f64, b: f64) -> bool {
        self.intervals.iter().all(|&(lo, hi)| hi <= a || b <= lo)
    }

    /// Cells of `partition` inside the region. Fails if a cell straddles
    /// its boundary.
    pub fn cells_within(&self, partition: &BasePartition) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for i in 0..partition.len() {
            let (a, b) = partition.cell(i);
            if self.covers(a, b) {
                out.push(i);
            } else if !self.misses(a, b) {
                return Err(invalid(format!(
                    "cell [{a}, {b}) straddles the region boundary"
                )));
            }
        }
        Ok(out)
    }
}

type Func = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Bounded real test function on `[0, 1]`.
#[derive(Clone)]
pub enum TestFunction {
    /// Value `values[i]` on cell `i` of `partition`.
    Piecewise {
        partition: BasePartition,
        values: Vec<f64>,
    },
    Continuous {
        label: String,
        func: Func,
        sup_norm: f64,
    },
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Piecewise { partition, values } => f
                .debug_struct("Piecewise")
                .field("cuts", &partition.cuts())
                .field("values", values)
                .finish(),
            TestFunction::Continuous {
                label, sup_norm, ..
            } => f
                .debug_struct("Continuous")
                .field("label", label)
                .field("sup_norm", sup_norm)
                .finish(),
        }
    }
}

/// Grid used to estimate the sup norm of a continuous function.
const SUP_GRID: usize = 1 << 14;

impl TestFunction {
    pub fn piecewise(partition: BasePartition, values: Vec<f64>) -> Result<Self> {
        if values.len() != partition.len() {
            return Err(Error::LengthMismatch {
                expected: partition.len(),
                found: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(invalid(format!("test function value {v} is not finite")));
        }
        Ok(TestFunction::Piecewise { partition, values })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::piecewise(BasePartition::whole(), vec![c])
    }

    /// Continuous function with its sup norm estimated on a fine grid.
    pub fn continuous(
        label: impl Into<String>,
        func: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let sup = (0..=SUP_GRID)
            .map(|i| func(i as f64 / SUP_GRID as f64).abs())
            .fold(0.0, f64::max);
        Self::continuous_with_sup(label, func, sup)
    }

    /// Continuous function with a known bound `sup |f| ≤ sup_norm`.
    pub fn continuous_with_sup(
        label: impl Into<String>,
        func: impl Fn(f64) -> f64 + Send + Sync + 'static,
        sup_norm: f64,
    ) -> Result<Self> {
        if !(sup_norm.is_finite() && sup_norm >= 0.0) {
            return Err(invalid(format!(
                "sup norm {sup_norm} must be finite and non-negative"
            )));
        }
        Ok(TestFunction::Continuous {
            label: label.into(),
            func: Arc::new(func),
            sup_norm,
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Piecewise { partition, values } => values[partition.cell_of(x)],
            TestFunction::Continuous { func, .. } => func(x),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            TestFunction::Piecewise { values, .. } => {
                values.iter().map(|v| v.abs()).fold(0.0, f64::max)
            }
            TestFunction::Continuous { sup_norm, .. } => *sup_norm,
        }
    }

    /// `∫_a^b f(y) dy`.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        match self {
            TestFunction::Piecewise { partition, values } => (0..partition.len())
                .map(|i| {
                    let (lo, hi) = partition.cell(i);
                    values[i] * (hi.min(b) - lo.max(a)).max(0.0)
                })
                .sum(),
            TestFunction::Continuous { func, .. } => {
                quadrature_nodes(a, b).map(|(x, w)| w * func(x)).sum()
            }
        }
    }

    /// `⟨η, f⟩`.
    pub fn pair(&self, eta: &DiscreteMeasure) -> f64 {
        eta.integrate(|x| self.eval(x))
    }
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(QUAD_ORDER).expect("nonzero order")))
}

/// Composite Gauss-Legendre nodes and weights on `[a, b]`.
fn quadrature_nodes(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let h = (b - a) / QUAD_PANELS as f64;
    let rule = rule();
    (0..QUAD_PANELS).flat_map(move |p| {
        let mid = a + h * (p as f64 + 0.5);
        rule.nodes()
            .zip(rule.weights())
            .map(move |(&x, &w)| (mid + 0.5 * h * x, 0.5 * h * w))
    })
}

/// `c·Leb|_{[0,1]} + η`: a uniform part plus finitely many atoms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceMeasure {
    uniform: f64,
    atoms: DiscreteMeasure,
}

impl ReferenceMeasure {
    pub fn uniform(mass: f64) -> Result<Self> {
        if !mass.is_finite() {
            return Err(invalid(format!("mass {mass} is not finite")));
        }
        Ok(ReferenceMeasure {
            uniform: mass,
            atoms: DiscreteMeasure::default(),
        })
    }

    pub fn discrete(atoms: DiscreteMeasure) -> Self {
        ReferenceMeasure {
            uniform: 0.0,
            atoms,
        }
    }

    pub fn uniform_mass(&self) -> f64 {
        self.uniform
    }

    pub fn atoms(&self) -> &DiscreteMeasure {
        &self.atoms
    }

    pub fn total_mass(&self) -> f64 {
        self.uniform + self.atoms.total_mass()
    }

    pub fn total_variation(&self) -> f64 {
        self.uniform.abs() + self.atoms.total_variation()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.uniform >= 0.0 && self.atoms.is_nonnegative()
    }

    pub fn is_probability(&self) -> bool {
        self.is_nonnegative() && (self.total_mass() - 1.0).abs() <= PROBABILITY_TOL
    }

    pub fn scaled(&self, c: f64) -> Self {
        ReferenceMeasure {
            uniform: self.uniform * c,
            atoms: self.atoms.scaled(c),
        }
    }

    pub fn plus_atom(&self, y: f64, w: f64) -> Result<Self> {
        Ok(ReferenceMeasure {
            uniform: self.uniform,
            atoms: self.atoms.plus_atom(y, w)?,
        })
    }

    /// `ν[a, b)`, with the last cell closed at 1.
    fn mass_of(&self, partition: &BasePartition, i: usize) -> f64 {
        let (a, b) = partition.cell(i);
        self.uniform * (b - a)
            + self
                .atoms
                .iter()
                .filter(|(x, _)| partition.cell_of(*x) == i)
                .map(|(_, w)| w)
                .sum::<f64>()
    }

    /// `ν⋄X = (νX_1, …, νX_m)`.
    pub fn cell_masses(&self, partition: &BasePartition) -> Vec<f64> {
        let mut out: Vec<f64> = partition
            .lengths()
            .iter()
            .map(|l| self.uniform * l)
            .collect();
        for (x, w) in self.atoms.iter() {
            out[partition.cell_of(x)] += w;
        }
        out
    }

    /// Cell averages `ν(f 1_{X_i}) / νX_i`; zero on null cells.
    pub fn cell_averages(&self, partition: &BasePartition, f: &TestFunction) -> Vec<f64> {
        (0..partition.len())
            .map(|i| {
                let (a, b) = partition.cell(i);
                let mass = self.mass_of(partition, i);
                if mass == 0.0 {
                    return 0.0;
                }
                let atoms: f64 = self
                    .atoms
                    .iter()
                    .filter(|(x, _)| partition.cell_of(*x) == i)
                    .map(|(x, w)| w * f.eval(x))
                    .sum();
                (self.uniform * f.integrate(a, b) + atoms) / mass
            })
            .collect()
    }

    /// Weighted point set with `ν(f^j) = Σ_a w_a v_a^j`, values multiplied
    /// by `factor`.
    pub fn power_sum_data(&self, f: &TestFunction, factor: Complex64) -> PowerSumData {
        let mut weights = Vec::new();
        let mut values = Vec::new();
        if self.uniform != 0.0 {
            match f {
                TestFunction::Piecewise {
                    partition,
                    values: s,
                } => {
                    for (l, v) in partition.lengths().iter().zip(s) {
                        weights.push(Complex64::new(self.uniform * l, 0.0));
                        values.push(factor * v);
                    }
                }
                TestFunction::Continuous { func, .. } => {
                    for (x, w) in quadrature_nodes(0.0, 1.0) {
                        weights.push(Complex64::new(self.uniform * w, 0.0));
                        values.push(factor * func(x));
                    }
                }
            }
        }
        for (x, w) in self.atoms.iter() {
            weights.push(Complex64::new(w, 0.0));
            values.push(factor * f.eval(x));
        }
        PowerSumData::new(weights, values)
    }
}

impl From<DiscreteMeasure> for ReferenceMeasure {
    fn from(m: DiscreteMeasure) -> Self {
        ReferenceMeasure::discrete(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_merge() {
        let m = DiscreteMeasure::new(vec![0.5, 0.2, 0.5], vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m.atoms(), &[0.5, 0.2]);
        assert_eq!(m.weights(), &[4.0, 2.0]);
        assert!(DiscreteMeasure::new(vec![1.5], vec![1.0]).is_err());
        assert!(DiscreteMeasure::probability(vec![0.1, 0.2], vec![0.5, 0.6]).is_err());
    }

    #[test]
    fn partition_cells() {
        let p = BasePartition::new(&[0.25, 0.5]).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.cell_of(0.0), 0);
        assert_eq!(p.cell_of(0.25), 1);
        assert_eq!(p.cell_of(0.49), 1);
        assert_eq!(p.cell_of(1.0), 2);
        assert!(BasePartition::new(&[0.5, 0.25]).is_err());
        assert!(BasePartition::new(&[0.0]).is_err());
        let eta = DiscreteMeasure::point_mass(0.3).unwrap();
        assert_eq!(p.marginalize(&eta), vec![0.0, 1.0, 0.0]);
        assert_eq!(BasePartition::whole().marginalize(&eta), vec![1.0]);
    }

    #[test]
    fn regions() {
        let r = Region::new(vec![(0.5, 1.0), (0.0, 0.25), (0.2, 0.3)]).unwrap();
        assert_eq!(r.intervals(), &[(0.0, 0.3), (0.5, 1.0)]);
        assert!(r.contains(1.0) && r.contains(0.0) && !r.contains(0.3));
        let p = BasePartition::new(&[0.3, 0.5]).unwrap();
        assert_eq!(r.cells_within(&p).unwrap(), vec![0, 2]);
        assert!(r
            .cells_within(&BasePartition::new(&[0.6]).unwrap())
            .is_err());
    }

    #[test]
    fn quadrature_is_accurate() {
        let f =
            TestFunction::continuous("cos", |y| (2.0 * std::f64::consts::PI * y).cos()).unwrap();
        assert!(f.integrate(0.0, 1.0).abs() < 1e-15);
        assert!((f.integrate(0.0, 0.25) - 1.0 / (2.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert!((f.sup_norm() - 1.0).abs() < 1e-15);
        // ∫ cos² = 1/2
        let data = ReferenceMeasure::uniform(1.0)
            .unwrap()
            .power_sum_data(&f, Complex64::new(1.0, 0.0));
        assert!((data.power_sums(2)[1].re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn cell_statistics() {
        let nu = ReferenceMeasure::uniform(2.0)
            .unwrap()
            .plus_atom(0.75, 1.0)
            .unwrap();
        let p = BasePartition::new(&[0.5]).unwrap();
        assert_eq!(nu.cell_masses(&p), vec![1.0, 2.0]);
        let f =
            TestFunction::piecewise(BasePartition::new(&[0.5]).unwrap(), vec![3.0, -1.0]).unwrap();
        assert_eq!(nu.cell_averages(&p, &f), vec![3.0, -1.0]);
        assert_eq!(nu.total_mass(), 3.0);
    }
}
