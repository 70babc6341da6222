//! Distinguished subsets of the lattice: `Λ⁺` (`|α'| > 0`), `H`
//! (`α' > 0` inside `Λ⁺`) and the isopleths `M_ℓ` (`|α'| = ℓ`).

use serde::{Deserialize, Serialize};

use super::lattice::{Coefficient, LatticePoint, LatticeVector};

/// Offsets are integers, so `|α'| = ℓ` reduces to an integer comparison once
/// `ℓ - |α|` is known to be integral within this slack.
const ISOPLETH_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionPredicate {
    LambdaPlus,
    H,
    IsoplethM(f64),
}

pub fn region_membership<C: Coefficient>(pt: &LatticePoint<C>, pred: RegionPredicate) -> bool {
    let total = pt.effective_total().real_part();
    match pred {
        RegionPredicate::LambdaPlus => total > 0.0,
        RegionPredicate::H => total > 0.0 && pt.effective().iter().all(|a| a.real_part() > 0.0),
        RegionPredicate::IsoplethM(level) => {
            if !(level > 0.0) {
                return false;
            }
            let shift = level - pt.anchor.total().real_part();
            let steps = shift.round();
            (shift - steps).abs() <= ISOPLETH_SLACK && pt.offset.iter().sum::<i64>() == steps as i64
        }
    }
}

/// True when every support point of `v` satisfies `pred`.
pub fn support_within<C: Coefficient>(v: &LatticeVector<C>, pred: RegionPredicate) -> bool {
    v.support().all(|pt| region_membership(&pt, pred))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsa::lattice::Anchor;
    use num_complex::Complex64;

    fn anchor(v: &[f64]) -> std::sync::Arc<Anchor<Complex64>> {
        Anchor::new(v.iter().map(|&x| Complex64::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn simplex_anchor() {
        let a = anchor(&[0.4, 0.6]);
        let origin = LatticePoint::new(a.clone(), vec![0, 0]).unwrap();
        assert!(region_membership(&origin, RegionPredicate::H));
        assert!(region_membership(&origin, RegionPredicate::IsoplethM(1.0)));
        assert!(!region_membership(&origin, RegionPredicate::IsoplethM(2.0)));
        let down = LatticePoint::new(a.clone(), vec![-1, 0]).unwrap();
        assert!(!region_membership(&down, RegionPredicate::H));
        assert!(!region_membership(&down, RegionPredicate::LambdaPlus));
        let shifted = LatticePoint::new(a, vec![-1, 2]).unwrap();
        assert!(region_membership(&shifted, RegionPredicate::LambdaPlus));
        assert!(!region_membership(&shifted, RegionPredicate::H));
        assert!(region_membership(&shifted, RegionPredicate::IsoplethM(2.0)));
    }

    #[test]
    fn non_integral_level_is_empty() {
        let a = anchor(&[0.4, 0.6]);
        let pt = LatticePoint::new(a, vec![0, 0]).unwrap();
        assert!(!region_membership(&pt, RegionPredicate::IsoplethM(1.5)));
    }
}
