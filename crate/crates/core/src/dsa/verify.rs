//! Randomized verification of the commutation table, the type-A Serre
//! relations, subspace preservation, and the Weyl conjugation law.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::lattice::{Anchor, Coefficient, LatticeVector};
use super::operators::{apply, weyl_permute, LadderOperator, OperatorSum};
use super::region::{support_within, RegionPredicate};
use crate::combinatorics::Permutation;
use crate::error::{invalid, Result};
use crate::exec::{shard_rng, Execution};

/// Discrepancy allowed in every algebraic identity.
pub const RELATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub cases: usize,
    pub failures: usize,
    pub max_error: f64,
    pub pass: bool,
}

impl RelationCheck {
    fn new(relation: &str) -> Self {
        RelationCheck {
            relation: relation.to_string(),
            cases: 0,
            failures: 0,
            max_error: 0.0,
            pass: true,
        }
    }

    fn record(&mut self, err: f64) {
        self.cases += 1;
        if !(err <= RELATION_TOL) {
            self.failures += 1;
        }
        if err > self.max_error || err.is_nan() {
            self.max_error = err;
        }
    }

    fn record_bool(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn merge(&mut self, other: &RelationCheck) {
        self.cases += other.cases;
        self.failures += other.failures;
        if other.max_error > self.max_error || other.max_error.is_nan() {
            self.max_error = other.max_error;
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.failures == 0;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tolerance: f64,
    pub checks: Vec<RelationCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Check with the largest discrepancy.
    pub fn worst(&self) -> Option<&RelationCheck> {
        self.checks
            .iter()
            .max_by(|a, b| a.max_error.total_cmp(&b.max_error))
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }
}

fn delta(a: usize, b: usize) -> i64 {
    i64::from(a == b)
}

/// Accumulates per-trial checks into one report, keyed by relation name.
fn collect(names: &[&str], per_trial: Vec<Vec<RelationCheck>>) -> VerificationReport {
    let mut checks: Vec<RelationCheck> = names.iter().map(|n| RelationCheck::new(n)).collect();
    for trial in per_trial {
        for (acc, c) in checks.iter_mut().zip(&trial) {
            acc.merge(c);
        }
    }
    VerificationReport {
        tolerance: RELATION_TOL,
        checks: checks.into_iter().map(RelationCheck::finish).collect(),
    }
}

fn random_vector<C: Coefficient, R: Rng + ?Sized>(
    anchor: &Arc<Anchor<C>>,
    rng: &mut R,
) -> LatticeVector<C> {
    let terms = rng.random_range(1..=4);
    LatticeVector::random(anchor.clone(), rng, terms, -2, 2, |_| true)
}

fn check_anchor<C: Coefficient>(base: &[C]) -> Result<Arc<Anchor<C>>> {
    if base.len() < 2 {
        return Err(invalid("verification needs k >= 2"));
    }
    Anchor::new(base.to_vec())
}

const TABLE_RELATIONS: [&str; 5] = [
    "[J_i - J_j, E_p,-q] = (d_ip - d_iq - d_jp + d_jq) E_p,-q",
    "[E_i,-j, E_p,-q] = J_i - J_j | -E_p,-j | E_i,-q | 0",
    "[E_i, E_-p] = J_i if i = p, E_i,-p otherwise",
    "[J_i, E_+-p] = +-(1 + d_ip) E_+-p",
    "[J_i - J_j, J_p] = [E_i, E_p] = [E_-i, E_-p] = 0",
];

/// Checks every family of the commutation table on `trials` random sparse
/// vectors. Indices run over `0..=k` with `E_i,-0 = E_i`, `E_0,-j = E_-j`
/// and `J_0 = 0`.
pub fn verify_commutation_table<C: Coefficient>(
    base: &[C],
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<VerificationReport> {
    let anchor = check_anchor(base)?;
    let k = base.len();
    let per_trial = exec.map(trials, |t| -> Result<Vec<RelationCheck>> {
        let mut rng = shard_rng(seed, t as u64);
        let v = random_vector(&anchor, &mut rng);
        let mut checks: Vec<RelationCheck> = TABLE_RELATIONS
            .iter()
            .map(|n| RelationCheck::new(n))
            .collect();
        let unit = OperatorSum::<C>::unit;
        let cd = OperatorSum::<C>::cartan_difference;
        for i in 0..=k {
            for j in 0..=k {
                if i == j {
                    continue;
                }
                for p in 0..=k {
                    for q in 0..=k {
                        if p == q {
                            continue;
                        }
                        let lhs = cd(i, j).commutator(&unit(p, q), &v)?;
                        let c = delta(i, p) - delta(i, q) - delta(j, p) + delta(j, q);
                        let rhs = unit(p, q).scaled(&C::from_int(c)).apply(&v)?;
                        checks[0].record(lhs.max_abs_diff(&rhs)?);

                        let lhs = unit(i, j).commutator(&unit(p, q), &v)?;
                        let rhs = if i == q && j == p {
                            cd(i, j)
                        } else if i == q {
                            unit(p, j).scaled(&-C::one())
                        } else if j == p {
                            unit(i, q)
                        } else {
                            OperatorSum::zero()
                        };
                        checks[1].record(lhs.max_abs_diff(&rhs.apply(&v)?)?);
                    }
                }
                for p in 1..=k {
                    let lhs = cd(i, j).commutator(&unit(p, p), &v)?;
                    checks[4].record(lhs.max_abs_diff(&LatticeVector::zero(anchor.clone()))?);
                }
            }
        }
        for i in 1..=k {
            for p in 1..=k {
                let lhs = unit(i, 0).commutator(&unit(0, p), &v)?;
                let rhs = if i == p { unit(i, i) } else { unit(i, p) };
                checks[2].record(lhs.max_abs_diff(&rhs.apply(&v)?)?);

                let c = C::from_int(1 + delta(i, p));
                let lhs = unit(i, i).commutator(&unit(p, 0), &v)?;
                checks[3].record(lhs.max_abs_diff(&unit(p, 0).scaled(&c).apply(&v)?)?);
                let lhs = unit(i, i).commutator(&unit(0, p), &v)?;
                checks[3].record(lhs.max_abs_diff(&unit(0, p).scaled(&-c).apply(&v)?)?);

                let zero = LatticeVector::zero(anchor.clone());
                checks[4].record(
                    unit(i, 0)
                        .commutator(&unit(p, 0), &v)?
                        .max_abs_diff(&zero)?,
                );
                checks[4].record(
                    unit(0, i)
                        .commutator(&unit(0, p), &v)?
                        .max_abs_diff(&zero)?,
                );
            }
        }
        Ok(checks)
    });
    let per_trial = per_trial.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(collect(&TABLE_RELATIONS, per_trial))
}

/// Cartan matrix of type `A_k`.
/// Normalized random anchor of dimension `k`, entries in `(0, 1)` drawn from
/// `seed`.
pub fn generic_anchor(k: usize, seed: u64) -> Result<Vec<f64>> {
    if k < 2 {
        return Err(invalid("verification needs k >= 2"));
    }
    let mut rng = shard_rng(seed ^ 0xa9c4, 0);
    let raw: Vec<f64> = (0..k).map(|_| 0.5 + rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|x| x / total).collect())
}

pub fn cartan_matrix_a(k: usize) -> Vec<Vec<i64>> {
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

/// Chevalley generators for the simple root `j ∈ 1..=k`:
/// `e_j = E_j,-(j-1)`, `f_j = E_(j-1),-j`, `h_j = J_j - J_(j-1)`,
/// so that `e_1 = E_1` raises and `f_1 = E_-1` lowers.
pub fn chevalley<C: Coefficient>(j: usize) -> (OperatorSum<C>, OperatorSum<C>, OperatorSum<C>) {
    (
        OperatorSum::unit(j, j - 1),
        OperatorSum::unit(j - 1, j),
        OperatorSum::cartan_difference(j, j - 1),
    )
}

/// `ad(x)^n (y) v = Σ_m C(n,m) (-1)^m x^{n-m} y x^m v`.
fn ad_power<C: Coefficient>(
    x: &OperatorSum<C>,
    n: usize,
    y: &OperatorSum<C>,
    v: &LatticeVector<C>,
) -> Result<LatticeVector<C>> {
    let mut out = LatticeVector::zero(v.anchor().clone());
    let mut binom: i64 = 1;
    for m in 0..=n {
        let mut w = v.clone();
        for _ in 0..m {
            w = x.apply(&w)?;
        }
        w = y.apply(&w)?;
        for _ in 0..n - m {
            w = x.apply(&w)?;
        }
        let sign = if m % 2 == 0 { binom } else { -binom };
        out = out.add(&w.scale(&C::from_int(sign)))?;
        binom = binom * (n - m) as i64 / (m as i64 + 1);
    }
    Ok(out)
}

const SERRE_RELATIONS: [&str; 8] = [
    "[h_i, h_j] = 0",
    "[e_i, f_j] = d_ij h_i",
    "[h_i, e_j] = a_ij e_j",
    "[h_i, f_j] = -a_ij f_j",
    "ad(e_i)^(1 - a_ij) e_j = 0",
    "ad(f_i)^(1 - a_ij) f_j = 0",
    "adjacent simple roots do not commute",
    "basis operators act distinctly",
];

/// Type-A Serre relations for the simple-root generators, checked on
/// `trials` random vectors, plus the adjacency pattern of the Dynkin diagram
/// and a faithfulness spot check at a point with `Re α' > 1`.
pub fn verify_serre<C: Coefficient>(
    base: &[C],
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<VerificationReport> {
    let anchor = check_anchor(base)?;
    let k = base.len();
    let a = cartan_matrix_a(k);
    let gens: Vec<_> = (1..=k).map(chevalley::<C>).collect();
    let per_trial = exec.map(trials, |t| -> Result<(Vec<RelationCheck>, Vec<f64>)> {
        let mut rng = shard_rng(seed ^ 0x5e77e, t as u64);
        let v = random_vector(&anchor, &mut rng);
        let zero = LatticeVector::zero(anchor.clone());
        let mut checks: Vec<RelationCheck> = SERRE_RELATIONS
            .iter()
            .map(|n| RelationCheck::new(n))
            .collect();
        // largest ‖[e_i, e_j] v‖ seen for each adjacent pair
        let mut adjacent = Vec::new();
        for i in 0..k {
            let (ei, fi, hi) = &gens[i];
            for j in 0..k {
                let (ej, fj, hj) = &gens[j];
                checks[0].record(hi.commutator(hj, &v)?.max_abs_diff(&zero)?);
                let rhs = if i == j { hi.apply(&v)? } else { zero.clone() };
                checks[1].record(ei.commutator(fj, &v)?.max_abs_diff(&rhs)?);
                let aij = C::from_int(a[i][j]);
                checks[2].record(
                    hi.commutator(ej, &v)?
                        .max_abs_diff(&ej.scaled(&aij).apply(&v)?)?,
                );
                checks[3].record(
                    hi.commutator(fj, &v)?
                        .max_abs_diff(&fj.scaled(&-aij).apply(&v)?)?,
                );
                if i != j {
                    let n = (1 - a[i][j]) as usize;
                    checks[4].record(ad_power(ei, n, ej, &v)?.max_abs_diff(&zero)?);
                    checks[5].record(ad_power(fi, n, fj, &v)?.max_abs_diff(&zero)?);
                    if a[i][j] == -1 {
                        adjacent.push(ei.commutator(ej, &v)?.max_abs_diff(&zero)?);
                    }
                }
            }
        }
        Ok((checks, adjacent))
    });
    let per_trial = per_trial.into_iter().collect::<Result<Vec<_>>>()?;
    let n_pairs = per_trial.first().map_or(0, |(_, adj)| adj.len());
    let mut best = vec![0.0f64; n_pairs];
    for (_, adj) in &per_trial {
        for (b, x) in best.iter_mut().zip(adj) {
            *b = b.max(*x);
        }
    }
    let mut report = collect(
        &SERRE_RELATIONS,
        per_trial.into_iter().map(|(c, _)| c).collect(),
    );
    let adj = &mut report.checks[6];
    for b in best {
        adj.record_bool(b > RELATION_TOL);
    }
    *adj = adj.clone().finish();
    let faithful = &mut report.checks[7];
    for ok in faithfulness(&anchor)? {
        faithful.record_bool(ok);
    }
    *faithful = faithful.clone().finish();
    Ok(report)
}

/// Pairwise distinctness of all basis operators on one `f_{α'}` with
/// `Re α'_i ∈ [2 + i, 3 + i)`, so every `Re α'_i > 1` and no two coincide.
fn faithfulness<C: Coefficient>(anchor: &Arc<Anchor<C>>) -> Result<Vec<bool>> {
    let offset: Vec<i64> = anchor
        .base()
        .iter()
        .enumerate()
        .map(|(i, a)| (1.0 - a.real_part()).ceil() as i64 + 1 + i as i64)
        .collect();
    let f = LatticeVector::basis(anchor.clone(), offset)?;
    let ops = LadderOperator::all(anchor.dim());
    let images = ops
        .iter()
        .map(|&op| apply(op, &f))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for x in 0..images.len() {
        for y in x + 1..images.len() {
            out.push(images[x].max_abs_diff(&images[y])? > RELATION_TOL);
        }
    }
    Ok(out)
}

const PRESERVATION_RELATIONS: [&str; 4] = [
    "Cartan and Raise preserve H",
    "all operators preserve Lambda+",
    "Mixed preserves each isopleth M_l",
    "Lower annihilates the |a'| = 1 stratum",
];

/// Random single-operator applications checking the invariant subsets.
/// `Λ⁺`-closure of the lowering operators needs `|α|` to be an integer, the
/// case of anchors on the simplex.
pub fn check_subspace_preservation<C: Coefficient>(
    base: &[C],
    applications: usize,
    seed: u64,
    exec: Execution,
) -> Result<VerificationReport> {
    let anchor = check_anchor(base)?;
    let k = base.len();
    let total = anchor.total().real_part();
    let integral = (total - total.round()).abs() < 1e-12;
    let per_trial = exec.map(applications, |t| -> Result<Vec<RelationCheck>> {
        let mut rng = shard_rng(seed ^ 0xa11ce, t as u64);
        let mut checks: Vec<RelationCheck> = PRESERVATION_RELATIONS
            .iter()
            .map(|n| RelationCheck::new(n))
            .collect();
        let terms = rng.random_range(1..=4);
        let i = rng.random_range(1..=k);
        let mut j = rng.random_range(1..k);
        if j >= i {
            j += 1;
        }

        let h = LatticeVector::random(anchor.clone(), &mut rng, terms, 0, 3, |p| {
            super::region::region_membership(p, RegionPredicate::H)
        });
        let op = if rng.random_bool(0.5) {
            LadderOperator::Cartan(i)
        } else {
            LadderOperator::Raise(i)
        };
        checks[0].record_bool(support_within(&apply(op, &h)?, RegionPredicate::H));

        if integral {
            let lp = LatticeVector::random(anchor.clone(), &mut rng, terms, -2, 3, |p| {
                super::region::region_membership(p, RegionPredicate::LambdaPlus)
            });
            let ops = LadderOperator::all(k);
            let op = ops[rng.random_range(0..ops.len())];
            checks[1].record_bool(support_within(
                &apply(op, &lp)?,
                RegionPredicate::LambdaPlus,
            ));
        }

        let level = total + rng.random_range(0..3) as f64;
        if level > 0.0 {
            let m = LatticeVector::random(anchor.clone(), &mut rng, terms, -2, 2, |p| {
                super::region::region_membership(p, RegionPredicate::IsoplethM(level))
            });
            let out = apply(LadderOperator::Mixed(i, j), &m)?;
            checks[2].record_bool(support_within(&out, RegionPredicate::IsoplethM(level)));
        }

        if integral && total <= 1.0 + 1e-12 {
            let unit = LatticeVector::random(anchor.clone(), &mut rng, terms, -2, 2, |p| {
                super::region::region_membership(p, RegionPredicate::IsoplethM(1.0))
            });
            checks[3].record_bool(apply(LadderOperator::Lower(i), &unit)?.is_zero());
        }
        Ok(checks)
    });
    let per_trial = per_trial.into_iter().collect::<Result<Vec<_>>>()?;
    let mut report = collect(&PRESERVATION_RELATIONS, per_trial);
    // a family with no applicable cases is not reported
    report.checks.retain(|c| c.cases > 0);
    Ok(report)
}

/// `W(π) ∘ X ∘ W(π⁻¹) = X^π` for every basis operator `X`, where the indices
/// of `X^π` are mapped through `π`.
pub fn check_weyl_conjugation<C: Coefficient>(
    base: &[C],
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<VerificationReport> {
    let anchor = check_anchor(base)?;
    let k = base.len();
    let name = "W(pi) X W(pi^-1) = X^pi";
    let per_trial = exec.map(trials, |t| -> Result<Vec<RelationCheck>> {
        let mut rng = shard_rng(seed ^ 0x3e71, t as u64);
        let mut images: Vec<usize> = (1..=k).collect();
        images.shuffle(&mut rng);
        let pi = Permutation::new(&images)?;
        let v = random_vector(&anchor, &mut rng);
        let mut check = RelationCheck::new(name);
        for op in LadderOperator::all(k) {
            let conj = weyl_permute(&pi, &apply(op, &weyl_permute(&pi.inverse(), &v)?)?)?;
            let moved = match op {
                LadderOperator::Raise(i) => LadderOperator::Raise(pi.apply(i)),
                LadderOperator::Lower(i) => LadderOperator::Lower(pi.apply(i)),
                LadderOperator::Cartan(i) => LadderOperator::Cartan(pi.apply(i)),
                LadderOperator::Mixed(i, j) => LadderOperator::Mixed(pi.apply(i), pi.apply(j)),
            };
            check.record(conj.max_abs_diff(&apply(moved, &v)?)?);
        }
        Ok(vec![check])
    });
    let per_trial = per_trial.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(collect(&[name], per_trial))
}
