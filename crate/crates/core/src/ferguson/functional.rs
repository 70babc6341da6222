//! The characteristic functional of `D_ν` as a cycle-index series, its
//! extension to signed `ν`, the region operators, and the limiting
//! posterior actions.

use num_complex::Complex64;
use serde::Serialize;

use super::measure::{BasePartition, DiscreteMeasure, ReferenceMeasure, Region, TestFunction};
use crate::dirichlet::series::{
    hypergeometric_1f1, power_sum_series, SeriesValue, DEFAULT_MAX_TERMS,
};
use crate::dsa::{apply, realize, Anchor, LadderOperator, LatticeVector, OperatorSum};
use crate::error::{invalid, Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn series(
    nu: &ReferenceMeasure,
    f: &TestFunction,
    factor: Complex64,
    tol: f64,
) -> Result<SeriesValue> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(invalid(format!("tolerance must be positive, got {tol}")));
    }
    let total = nu.total_mass();
    if !(total > 0.0) {
        return Err(invalid(format!("total mass must be positive, got {total}")));
    }
    let data = nu.power_sum_data(f, factor);
    power_sum_series(&data, Complex64::new(total, 0.0), tol, DEFAULT_MAX_TERMS)
}

/// `E exp(i t ⟨η, f⟩)` for `η ~ D_ν`, `ν ≥ 0` of total mass `β`:
/// `Σ_n (it)^n Z_n(νf, …, νf^n) / (β)_n`.
pub fn cf_series(nu: &ReferenceMeasure, f: &TestFunction, t: f64, tol: f64) -> Result<Complex64> {
    if !nu.is_nonnegative() {
        return Err(invalid(
            "characteristic functional needs a non-negative measure",
        ));
    }
    if !t.is_finite() {
        return Err(invalid(format!("t = {t} is not finite")));
    }
    Ok(series(nu, f, I * t, tol)?.value)
}

/// `Φ[ν, f] = Σ_n Z_n(ν(if), …, ν(if)^n) / (νX)_n` for signed `ν` with
/// `νX > 0`. Checks `|Φ| ≤ ₁F₁[‖ν‖; νX; ‖f‖]`.
pub fn phi_extension(nu: &ReferenceMeasure, f: &TestFunction, tol: f64) -> Result<Complex64> {
    let v = series(nu, f, I, tol)?;
    let sup = f
        .sup_norm()
        .max(nu.power_sum_data(f, Complex64::new(1.0, 0.0)).value_norm());
    let bound = hypergeometric_1f1(nu.total_variation(), nu.total_mass(), sup, 1e-14)?;
    if v.value.norm() > bound * (1.0 + 1e-12) + v.tail_bound + tol {
        return Err(Error::Consistency(format!(
            "|Phi| = {} exceeds the 1F1 majorant {bound}",
            v.value.norm()
        )));
    }
    Ok(v.value)
}

/// `E_A Φ[ν, f] = ∫_A dν(y) Φ[ν + δ_y, f]` for finitely supported `ν`.
pub fn raise_region(
    nu: &DiscreteMeasure,
    f: &TestFunction,
    a: &Region,
    tol: f64,
) -> Result<Complex64> {
    if !(nu.total_mass() > 0.0) {
        return Err(invalid(format!(
            "total mass must be positive, got {}",
            nu.total_mass()
        )));
    }
    let base = ReferenceMeasure::discrete(nu.clone());
    let mut sum = Complex64::new(0.0, 0.0);
    for (y, w) in nu.iter().filter(|(y, _)| a.contains(*y)) {
        sum += w * phi_extension(&base.plus_atom(y, 1.0)?, f, tol)?;
    }
    Ok(sum)
}

/// `E_{A,-B} Φ[ν, f] = ∫_{A∖B} dν(y) Φ[ν + δ_y, f] + ∫_{B∖A} dν(y) Φ[ν - δ_y, f]`,
/// defined for `νX > 1`.
pub fn raise_lower_region(
    nu: &DiscreteMeasure,
    f: &TestFunction,
    a: &Region,
    b: &Region,
    tol: f64,
) -> Result<Complex64> {
    if !(nu.total_mass() > 1.0) {
        return Err(invalid(format!(
            "raising and lowering needs total mass > 1, got {}",
            nu.total_mass()
        )));
    }
    let base = ReferenceMeasure::discrete(nu.clone());
    let mut sum = Complex64::new(0.0, 0.0);
    for (y, w) in nu.iter() {
        let (in_a, in_b) = (a.contains(y), b.contains(y));
        if in_a && !in_b {
            sum += w * phi_extension(&base.plus_atom(y, 1.0)?, f, tol)?;
        } else if in_b && !in_a {
            sum += w * phi_extension(&base.plus_atom(y, -1.0)?, f, tol)?;
        }
    }
    Ok(sum)
}

fn lattice_basis(alpha: &[f64]) -> Result<LatticeVector<Complex64>> {
    let anchor = Anchor::new(alpha.iter().map(|&a| Complex64::new(a, 0.0)).collect())?;
    LatticeVector::basis(anchor, vec![0; alpha.len()])
}

fn imaginary(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&v| I * v).collect()
}

/// `E_A` on the partition level: `(Σ_{X_i ⊆ A} E_{α_i}) ₖΦ₂[α; i s]` with
/// `α = ν⋄X`, evaluated through the ladder-operator action.
pub fn raise_region_on_cells(
    alpha: &[f64],
    values: &[f64],
    cells: &[usize],
    tol: f64,
) -> Result<Complex64> {
    if alpha.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: alpha.len(),
            found: values.len(),
        });
    }
    let op = cells.iter().try_fold(OperatorSum::zero(), |acc, &i| {
        if i >= alpha.len() {
            return Err(invalid(format!("cell {i} out of range")));
        }
        Ok(acc.plus(&OperatorSum::single(LadderOperator::Raise(i + 1))))
    })?;
    let v = op.apply(&lattice_basis(alpha)?)?;
    realize(&v, &imaginary(values), tol)
}

/// `E_A Φ[ν, f]` computed over atoms and over partition cells.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionCheck {
    pub atoms: Complex64,
    pub cells: Complex64,
    pub delta: f64,
}

/// Cross-checks [`raise_region`] against [`raise_region_on_cells`] for `f`
/// piecewise constant and `A` a union of its cells.
pub fn raise_region_check(
    nu: &DiscreteMeasure,
    f: &TestFunction,
    a: &Region,
    tol: f64,
) -> Result<RegionCheck> {
    let TestFunction::Piecewise { partition, values } = f else {
        return Err(invalid(
            "the cell-level check needs a piecewise-constant test function",
        ));
    };
    let alpha = ReferenceMeasure::discrete(nu.clone()).cell_masses(partition);
    let cells = a.cells_within(partition)?;
    let atoms = raise_region(nu, f, a, tol)?;
    let on_cells = raise_region_on_cells(&alpha, values, &cells, tol)?;
    Ok(RegionCheck {
        atoms,
        cells: on_cells,
        delta: (atoms - on_cells).norm(),
    })
}

/// `E_{A,-B}` on the partition level:
/// `Σ_{i ∈ raise} α_i ₖΦ₂[α + e_i; i s] + Σ_{j ∈ lower} α_j ₖΦ₂[α - e_j; i s]`.
pub fn raise_lower_on_cells(
    alpha: &[f64],
    values: &[f64],
    raise: &[usize],
    lower: &[usize],
    tol: f64,
) -> Result<Complex64> {
    if alpha.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: alpha.len(),
            found: values.len(),
        });
    }
    let k = alpha.len();
    let shifted = |i: usize, step: i64| -> Result<(Vec<i64>, Complex64)> {
        if i >= k {
            return Err(invalid(format!("cell {i} out of range")));
        }
        let mut offset = vec![0; k];
        offset[i] = step;
        Ok((offset, Complex64::new(alpha[i], 0.0)))
    };
    let terms = raise
        .iter()
        .map(|&i| shifted(i, 1))
        .chain(lower.iter().map(|&j| shifted(j, -1)))
        .collect::<Result<Vec<_>>>()?;
    let anchor = Anchor::new(alpha.iter().map(|&a| Complex64::new(a, 0.0)).collect())?;
    realize(
        &LatticeVector::from_terms(anchor, terms)?,
        &imaginary(values),
        tol,
    )
}

/// Cross-checks [`raise_lower_region`] against [`raise_lower_on_cells`] for
/// `f` piecewise constant and `A`, `B` unions of its cells.
pub fn raise_lower_region_check(
    nu: &DiscreteMeasure,
    f: &TestFunction,
    a: &Region,
    b: &Region,
    tol: f64,
) -> Result<RegionCheck> {
    let TestFunction::Piecewise { partition, values } = f else {
        return Err(invalid(
            "the cell-level check needs a piecewise-constant test function",
        ));
    };
    let alpha = ReferenceMeasure::discrete(nu.clone()).cell_masses(partition);
    let in_a = a.cells_within(partition)?;
    let in_b = b.cells_within(partition)?;
    let raise: Vec<usize> = in_a.iter().copied().filter(|i| !in_b.contains(i)).collect();
    let lower: Vec<usize> = in_b.iter().copied().filter(|i| !in_a.contains(i)).collect();
    let atoms = raise_lower_region(nu, f, a, b, tol)?;
    let on_cells = raise_lower_on_cells(&alpha, values, &raise, &lower, tol)?;
    Ok(RegionCheck {
        atoms,
        cells: on_cells,
        delta: (atoms - on_cells).norm(),
    })
}

/// Rescaled ladder actions at one dyadic depth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorLevel {
    pub depth: u32,
    /// Cell containing the base point.
    pub cell: usize,
    /// `α_i^{-1} E_{α_i} ₖΦ₂[α; i s]`.
    pub raise: Complex64,
    pub raise_error: f64,
    /// `α_i^{-1} J_{α_i} ₖΦ₂[α; i s]`.
    pub cartan: Complex64,
    pub cartan_error: f64,
    /// `α_i^{-1} E_{-α_i} ₖΦ₂[α; i s]`.
    pub lower: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorLimit {
    pub x: f64,
    /// Original point when it sat on a dyadic cut and was moved.
    pub nudged_from: Option<f64>,
    /// `Φ[σ + δ_x, f]`, the limit of the raising action.
    pub posterior: Complex64,
    /// `Φ[σ, f]`, the limit of the Cartan action.
    pub prior: Complex64,
    pub levels: Vec<PosteriorLevel>,
}

/// Rescaled raising, Cartan and lowering actions at the cell of `x`, on the
/// dyadic partitions of the given depths, with `f` replaced by its cell
/// averages under `sigma`.
pub fn limiting_posterior_action(
    sigma: &ReferenceMeasure,
    f: &TestFunction,
    x: f64,
    depths: &[u32],
    tol: f64,
) -> Result<PosteriorLimit> {
    if !sigma.is_probability() {
        return Err(invalid("base measure must be a probability"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("point {x} outside [0, 1]")));
    }
    if depths.is_empty() || depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("depths must be non-empty and strictly increasing"));
    }
    let finest = BasePartition::dyadic(*depths.last().expect("non-empty"))?;
    let (x, nudged_from) = if finest.is_cut(x) {
        (x + f64::EPSILON, Some(x))
    } else {
        (x, None)
    };
    let posterior = phi_extension(&sigma.plus_atom(x, 1.0)?, f, tol)?;
    let prior = phi_extension(sigma, f, tol)?;
    let mut levels = Vec::with_capacity(depths.len());
    for &depth in depths {
        let partition = BasePartition::dyadic(depth)?;
        let alpha = sigma.cell_masses(&partition);
        let s = imaginary(&sigma.cell_averages(&partition, f));
        let cell = partition.cell_of(x);
        let weight = alpha[cell];
        if !(weight > 0.0) {
            return Err(invalid(format!(
                "cell {cell} at depth {depth} has no base mass"
            )));
        }
        let basis = lattice_basis(&alpha)?;
        let act = |op: LadderOperator| -> Result<Complex64> {
            Ok(realize(&apply(op, &basis)?, &s, tol)? / weight)
        };
        let raise = act(LadderOperator::Raise(cell + 1))?;
        let cartan = act(LadderOperator::Cartan(cell + 1))?;
        let lower = act(LadderOperator::Lower(cell + 1))?;
        levels.push(PosteriorLevel {
            depth,
            cell,
            raise,
            raise_error: (raise - posterior).norm(),
            cartan,
            cartan_error: (cartan - prior).norm(),
            lower,
        });
    }
    Ok(PosteriorLimit {
        x,
        nudged_from,
        posterior,
        prior,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::{characteristic_functional, DirichletParams};

    fn step() -> TestFunction {
        TestFunction::piecewise(
            BasePartition::new(&[0.25, 0.5, 0.75]).unwrap(),
            vec![1.0, -0.5, 0.3, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn zero_frequency() {
        let nu = ReferenceMeasure::uniform(2.0).unwrap();
        assert_eq!(
            cf_series(&nu, &step(), 0.0, 1e-12).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let zero = TestFunction::constant(0.0).unwrap();
        assert_eq!(
            phi_extension(&nu, &zero, 1e-12).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn matches_finite_dimensional_route() {
        for beta in [0.5, 1.0, 5.0] {
            let nu = ReferenceMeasure::uniform(beta).unwrap();
            for t in [-3.0, 0.7, 2.0] {
                let v = cf_series(&nu, &step(), t, 1e-14).unwrap();
                let alpha = DirichletParams::new(vec![beta / 4.0; 4]).unwrap();
                let s = [t, -0.5 * t, 0.3 * t, 0.0];
                let w = characteristic_functional(&alpha, &s, 1e-14).unwrap();
                assert!((v - w).norm() < 1e-12, "beta={beta} t={t}");
            }
        }
    }

    #[test]
    fn phi_is_cf_on_probabilities() {
        let sigma = ReferenceMeasure::uniform(1.0).unwrap();
        let a = phi_extension(&sigma, &step(), 1e-13).unwrap();
        let b = cf_series(&sigma, &step(), 1.0, 1e-13).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn signed_measure_within_majorant() {
        let nu = DiscreteMeasure::new(vec![0.1, 0.4, 0.8], vec![1.5, -1.2, 0.2]).unwrap();
        let f = TestFunction::continuous("sin", |y: f64| 0.3 * (5.0 * y).sin()).unwrap();
        let v = phi_extension(&nu.into(), &f, 1e-12).unwrap();
        assert!(v.is_finite());
        assert!(phi_extension(&ReferenceMeasure::uniform(-1.0).unwrap(), &f, 1e-12).is_err());
    }

    #[test]
    fn region_operators() {
        let nu =
            DiscreteMeasure::new(vec![0.1, 0.3, 0.6, 0.9], vec![0.5, 0.25, 0.75, 0.5]).unwrap();
        let f = step();
        assert_eq!(
            raise_region(&nu, &f, &Region::empty(), 1e-12).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let a = Region::new(vec![(0.0, 0.5)]).unwrap();
        let check = raise_region_check(&nu, &f, &a, 1e-14).unwrap();
        assert!(check.delta < 1e-12, "{check:?}");
        let b = Region::new(vec![(0.5, 1.0)]).unwrap();
        assert_eq!(
            raise_lower_region(&nu, &f, &a, &a, 1e-12).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let r = raise_region(&nu, &f, &a, 1e-13).unwrap();
        let rl = raise_lower_region(&nu, &f, &a, &Region::empty(), 1e-13).unwrap();
        assert!((r - rl).norm() < 1e-15);
        let small = nu.scaled(0.4);
        assert!(raise_lower_region(&small, &f, &a, &b, 1e-12).is_err());
        let two = nu.scaled(2.0 / nu.total_mass());
        let check = raise_lower_region_check(&two, &f, &a, &b, 1e-14).unwrap();
        assert!(check.delta < 1e-12, "{check:?}");
    }

    #[test]
    fn posterior_limits() {
        let sigma = ReferenceMeasure::uniform(1.0).unwrap();
        let f = TestFunction::continuous("cos", |y: f64| (2.0 * std::f64::consts::PI * y).cos())
            .unwrap();
        let lim = limiting_posterior_action(&sigma, &f, 0.3, &[3, 5, 7], 1e-13).unwrap();
        assert!(lim.nudged_from.is_none());
        for w in lim.levels.windows(2) {
            assert!(w[1].raise_error < w[0].raise_error);
        }
        for l in &lim.levels {
            assert_eq!(l.lower, Complex64::new(0.0, 0.0));
        }
        let nudged = limiting_posterior_action(&sigma, &f, 0.5, &[2, 4], 1e-12).unwrap();
        assert_eq!(nudged.nudged_from, Some(0.5));
        assert!(nudged.x > 0.5);
    }
}
