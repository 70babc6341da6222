//! End-to-end checks of the library's numerical claims, grouped into ten
//! criteria. Used by the command-line `verify` subcommand.

use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::cycle_index::{
    cycle_index_direct, cycle_index_group, cycle_index_recurrence, cyclic_group, dihedral_group,
    evaluate_sequence, symmetric_group,
};
use crate::dirichlet::{
    all_maps, check_map_pushforward, confluent_limit, humbert_phi2, moment_cycle_index,
    moment_monte_carlo, moment_multiindex, moment_polynomial, pochhammer_multi_exact,
    DirichletParams, Regime,
};
use crate::dsa::{
    apply_word, check_subspace_preservation, check_weyl_conjugation, posterior_operator,
    posterior_word, verify_commutation_table, verify_serre, Anchor, LatticeVector,
};
use crate::error::Result;
use crate::exec::{shard_rng, Execution};
use crate::ferguson::{
    cf_monte_carlo, cf_series, first_weight_mean, limiting_posterior_action, marginal_moments,
    phi_extension, raise_lower_region, raise_lower_region_check, raise_region, raise_region_check,
    BasePartition, DiscreteMeasure, FergusonSampler, ReferenceMeasure, Region, TestFunction,
    DEFAULT_EPS,
};
use crate::polya::{brute_force_orbit_count, shading_gf, shading_probability_gf, Palette};

pub const CRITERIA: usize = 10;

/// One measured quantity against its limit; passes when `value <= limit`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        }
    }

    /// A count of failing cases that must be zero.
    pub fn failures(name: impl Into<String>, count: usize) -> Self {
        Self::at_most(name, count as f64, 0.0)
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::failures(name, usize::from(!ok))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub title: String,
    pub pass: bool,
    pub seconds: f64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CriterionReport {
    pub fn summary_line(&self) -> String {
        let status = if self.pass { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {:>2} {status} {} ({:.2} s)",
            self.id, self.title, self.seconds
        );
        if let Some(e) = &self.error {
            line.push_str(&format!(": error: {e}"));
        } else if let Some(bad) = self.checks.iter().find(|c| !c.pass) {
            line.push_str(&format!(
                ": {} = {:e} > {:e}",
                bad.name, bad.value, bad.limit
            ));
        }
        line
    }

    /// Failing checks only.
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub pass: bool,
    pub criteria: Vec<CriterionReport>,
}

pub fn title(id: usize) -> &'static str {
    match id {
        1 => "cycle index: recurrence, direct sum, and group tally agree",
        2 => "moments: multi-index, cycle-index, and Monte Carlo routes agree",
        3 => "Humbert series: exponential case and generating-function identity",
        4 => "concentration limits of the Humbert series and the Ferguson functional",
        5 => "mapping theorem: factorization and pushforward moments",
        6 => "ladder operators: commutation table, Serre relations, invariant sets",
        7 => "shadings: generating functions against orbit enumeration",
        8 => "Ferguson marginals are Dirichlet",
        9 => "Ferguson characteristic functional: series against Monte Carlo",
        10 => "region operators and limiting posterior actions",
        _ => "unknown criterion",
    }
}

/// Runs criterion `id` (1 to 10).
pub fn run_criterion(id: usize, seed: u64, exec: Execution) -> CriterionReport {
    let start = Instant::now();
    let outcome = match id {
        1 => criterion_cycle_index(),
        2 => criterion_moments(seed, exec),
        3 => criterion_humbert(),
        4 => criterion_limits(),
        5 => criterion_mapping(),
        6 => criterion_dsa(seed, exec),
        7 => criterion_polya(),
        8 => criterion_marginals(seed, exec),
        9 => criterion_cf(seed, exec),
        10 => criterion_regions(),
        _ => Err(crate::error::invalid(format!(
            "criterion must be in 1..={CRITERIA}, got {id}"
        ))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut checks, error) = match outcome {
        Ok(c) => (c, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let budget = match id {
        1 => Some(5.0),
        2 => Some(60.0),
        5 => Some(10.0),
        _ => None,
    };
    if let (Some(b), None) = (budget, &error) {
        checks.push(Check::at_most("runtime seconds", seconds, b));
    }
    CriterionReport {
        id,
        title: title(id).to_string(),
        pass: error.is_none() && checks.iter().all(|c| c.pass),
        seconds,
        checks,
        error,
    }
}

pub fn run_all(seed: u64, exec: Execution) -> SuiteReport {
    let criteria: Vec<CriterionReport> = (1..=CRITERIA)
        .map(|id| run_criterion(id, seed, exec))
        .collect();
    SuiteReport {
        seed,
        pass: criteria.iter().all(|c| c.pass),
        criteria,
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn cx(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

fn criterion_cycle_index() -> Result<Vec<Check>> {
    let mut mismatched = 0;
    for n in 0..=12 {
        if cycle_index_recurrence(n)? != cycle_index_direct(n)? {
            mismatched += 1;
        }
    }
    let mut tally = 0;
    for n in 1..=8 {
        if cycle_index_group(&symmetric_group(n))? != cycle_index_recurrence(n)? {
            tally += 1;
        }
    }
    Ok(vec![
        Check::failures("recurrence != direct, n <= 12", mismatched),
        Check::failures("S_n tally != recurrence, n <= 8", tally),
    ])
}

fn criterion_moments(seed: u64, exec: Execution) -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    for i in 0..200u64 {
        let mut rng = shard_rng(seed ^ 0x2002, i);
        let k = rng.random_range(1..=4);
        let n = rng.random_range(0..=8);
        let alpha: Vec<f64> = (0..k).map(|_| 5.0 * (1.0 - rng.random::<f64>())).collect();
        let s: Vec<f64> = (0..k).map(|_| rng.random_range(-2.0..=2.0)).collect();
        let alpha = DirichletParams::new(alpha)?;
        let a = moment_multiindex(&s, &alpha, n)?;
        let b = moment_cycle_index(&s, &alpha, n)?;
        worst = worst.max((a - b).abs() / (1.0 + a.abs()));
    }
    let mut worst_z = 0.0f64;
    let mut worst_point = 0.0f64;
    for i in 0..20u64 {
        let mut rng = shard_rng(seed ^ 0x2020, i);
        let k = rng.random_range(1..=4);
        let n = rng.random_range(1..=8);
        let alpha: Vec<f64> = (0..k).map(|_| 5.0 * (1.0 - rng.random::<f64>())).collect();
        let s: Vec<f64> = (0..k).map(|_| rng.random_range(-2.0..=2.0)).collect();
        let alpha = DirichletParams::new(alpha)?;
        let exact = moment_cycle_index(&s, &alpha, n)?;
        let mc = moment_monte_carlo(&s, &alpha, n, 1_000_000, seed.wrapping_add(i), exec)?;
        let d = (mc.value - exact).abs();
        match mc.stderr {
            // a point mass (k = 1): every draw equals the exact value
            Some(0.0) => worst_point = worst_point.max(d / (1.0 + exact.abs())),
            Some(se) => worst_z = worst_z.max(d / se),
            None => worst_z = f64::INFINITY,
        }
    }
    Ok(vec![
        Check::at_most("relative route discrepancy", worst, 1e-12),
        Check::at_most("Monte Carlo |z|", worst_z, 4.0),
        Check::at_most(
            "zero-variance Monte Carlo relative discrepancy",
            worst_point,
            1e-12,
        ),
    ])
}

fn criterion_humbert() -> Result<Vec<Check>> {
    let mut exp_err = 0.0f64;
    for a in [0.3, 1.0, 7.0] {
        for j in 0..=40 {
            let s = -5.0 + 0.25 * j as f64;
            let v = humbert_phi2(&cx(&[a]), Complex64::new(a, 0.0), &cx(&[s]), 1e-13)?.value;
            exp_err = exp_err.max((v - s.exp()).norm());
        }
    }
    let mut egf_err = 0.0f64;
    let cases: [(&[f64], &[f64]); 3] = [
        (&[0.2, 0.5, 0.3], &[1.0, -0.5, 2.0]),
        (&[0.6, 0.4], &[-1.5, 0.75]),
        (&[1.5, 0.25, 2.0, 0.8], &[0.3, -1.0, 0.9, -0.2]),
    ];
    for (alpha, s) in cases {
        let total: f64 = alpha.iter().sum();
        for j in 0..=16 {
            let t = -2.0 + 0.25 * j as f64;
            let ts: Vec<Complex64> = s.iter().map(|x| Complex64::new(t * x, 0.0)).collect();
            let p: Vec<Complex64> = (1..=80)
                .map(|m| Complex64::new(alpha.iter().zip(s).map(|(a, x)| a * x.powi(m)).sum(), 0.0))
                .collect();
            let z = evaluate_sequence(&p);
            // Σ t^n/n! Z_n and Σ t^n/(|α|)_n Z_n
            let (mut at_one, mut at_total) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            let (mut w1, mut wt) = (1.0, 1.0);
            for (n, zn) in z.iter().enumerate() {
                if n > 0 {
                    w1 *= t / n as f64;
                    wt *= t / (total + n as f64 - 1.0);
                }
                at_one += zn * w1;
                at_total += zn * wt;
            }
            let lhs_one = humbert_phi2(&cx(alpha), Complex64::new(1.0, 0.0), &ts, 1e-13)?.value;
            let lhs_total = humbert_phi2(&cx(alpha), Complex64::new(total, 0.0), &ts, 1e-13)?.value;
            egf_err = egf_err
                .max((lhs_one - at_one).norm())
                .max((lhs_total - at_total).norm());
        }
    }
    Ok(vec![
        Check::at_most("|1Phi2[a;a;s] - e^s|", exp_err, 1e-10),
        Check::at_most("generating-function identity", egf_err, 1e-10),
    ])
}

/// Checks strictly decreasing errors with the last one below `limit`.
fn decreasing(name: &str, errors: &[f64], limit: f64) -> Vec<Check> {
    let ascents = errors.windows(2).filter(|w| !(w[1] < w[0])).count();
    vec![
        Check::failures(format!("{name}: non-decreasing steps"), ascents),
        Check::at_most(
            format!("{name}: final error"),
            *errors.last().unwrap_or(&f64::NAN),
            limit,
        ),
    ]
}

pub const LARGE_BETAS: [f64; 4] = [1e1, 1e2, 1e3, 1e4];
pub const SMALL_BETAS: [f64; 4] = [1e-1, 1e-2, 1e-3, 1e-4];

fn criterion_limits() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let cases: [(&[f64], &[f64]); 3] = [
        (&[1.0, 2.0], &[2.0, -1.0]),
        (&[0.3, 0.5, 0.2], &[-2.0, 0.5, 1.5]),
        (&[2.0, 1.0, 1.0, 4.0], &[0.0, 2.0, -2.0, 1.0]),
    ];
    for (ci, (alpha, s)) in cases.iter().enumerate() {
        let params = DirichletParams::new(alpha.to_vec())?;
        for (s, label) in [
            (cx(s), "real"),
            (
                s.iter().map(|&x| Complex64::new(0.0, x)).collect(),
                "imaginary",
            ),
        ] {
            for (betas, regime) in [
                (LARGE_BETAS, Regime::BetaToInfinity),
                (SMALL_BETAS, Regime::BetaToZero),
            ] {
                let limit = confluent_limit(&params, &s, regime)?;
                let errors = betas
                    .iter()
                    .map(|&b| {
                        let scaled = params.scaled(b)?;
                        let v = humbert_phi2(
                            &scaled.to_complex(),
                            Complex64::new(scaled.total(), 0.0),
                            &s,
                            1e-13,
                        )?;
                        Ok((v.value - limit).norm())
                    })
                    .collect::<Result<Vec<f64>>>()?;
                checks.extend(decreasing(
                    &format!("Humbert case {ci} {label} {regime:?}"),
                    &errors,
                    1e-2,
                ));
            }
        }
    }
    let f = TestFunction::piecewise(
        BasePartition::new(&[0.25, 0.5, 0.75])?,
        vec![1.0, -0.5, 0.3, 0.0],
    )?;
    let lengths = [0.25; 4];
    let values = [1.0, -0.5, 0.3, 0.0];
    for t in [-2.0, 1.0, 2.0] {
        let mean: f64 = lengths.iter().zip(&values).map(|(l, v)| l * v).sum();
        let to_inf = Complex64::new(0.0, t * mean).exp();
        let to_zero: Complex64 = lengths
            .iter()
            .zip(&values)
            .map(|(l, v)| Complex64::new(0.0, t * v).exp() * l)
            .sum();
        for (betas, target, label) in [
            (LARGE_BETAS, to_inf, "infinity"),
            (SMALL_BETAS, to_zero, "zero"),
        ] {
            let errors = betas
                .iter()
                .map(|&b| {
                    Ok((cf_series(&ReferenceMeasure::uniform(b)?, &f, t, 1e-13)? - target).norm())
                })
                .collect::<Result<Vec<f64>>>()?;
            checks.extend(decreasing(
                &format!("Ferguson t={t} beta to {label}"),
                &errors,
                1e-2,
            ));
        }
    }
    Ok(checks)
}

fn criterion_mapping() -> Result<Vec<Check>> {
    let base = [q(1, 2), q(3, 1), q(5, 7), q(2, 1)];
    let mut factor_fail = 0;
    let mut moment_fail = 0;
    let mut maps = 0;
    for k in 2..=4 {
        for g in all_maps(k) {
            maps += 1;
            let check = check_map_pushforward(&g, &base[..k], 4)?;
            factor_fail += usize::from(!check.composes);
            moment_fail += check.moment_mismatches.len();
        }
    }
    Ok(vec![
        Check::holds("all maps enumerated", maps == 4 + 27 + 256),
        Check::failures("factorization mismatches", factor_fail),
        Check::failures("pushforward moment mismatches", moment_fail),
    ])
}

fn criterion_dsa(seed: u64, exec: Execution) -> Result<Vec<Check>> {
    let anchors: [&[f64]; 3] = [&[0.25, 0.75], &[0.2, 0.3, 0.5], &[0.125, 0.25, 0.375, 0.25]];
    let mut checks = Vec::new();
    for base in anchors {
        let k = base.len();
        let c = cx(base);
        let mut report = verify_commutation_table(&c, 200, seed, exec)?;
        report.extend(verify_serre(&c, 200, seed, exec)?);
        for rc in &report.checks {
            checks.push(Check::at_most(
                format!("k={k} {}", rc.relation),
                rc.max_error,
                1e-10,
            ));
            checks.push(Check::failures(
                format!("k={k} {} failures", rc.relation),
                rc.failures,
            ));
        }
        let pres = check_subspace_preservation(&c, 1000, seed, exec)?;
        for rc in &pres.checks {
            checks.push(Check::failures(
                format!("k={k} {}", rc.relation),
                rc.failures,
            ));
        }
        checks.push(Check::holds(
            format!("k={k} all invariant sets exercised"),
            pres.checks.len() == 4,
        ));
        let weyl = check_weyl_conjugation(&c, 200, seed, exec)?;
        let worst = weyl.checks.iter().map(|r| r.max_error).fold(0.0, f64::max);
        checks.push(Check::at_most(
            format!("k={k} Weyl conjugation"),
            worst,
            1e-12,
        ));

        let exact: Vec<BigRational> = base
            .iter()
            .map(|&a| BigRational::from_float(a).expect("finite"))
            .collect();
        let anchor = Anchor::new(exact.clone())?;
        let basis = LatticeVector::basis(anchor.clone(), vec![0; k])?;
        let mut bad = 0;
        for t in 0..50u64 {
            let mut rng = shard_rng(seed ^ 0x9057, t);
            let p: Vec<usize> = (0..k).map(|_| rng.random_range(0..=3)).collect();
            let (scalar, shift) = posterior_operator(&exact, &p)?;
            let word = apply_word(&posterior_word(&p), &basis)?;
            let expect =
                LatticeVector::from_terms(anchor.clone(), [(shift.clone(), scalar.clone())])?;
            if scalar != pochhammer_multi_exact(&exact, &p) || word != expect {
                bad += 1;
            }
        }
        checks.push(Check::failures(
            format!("k={k} posterior operator scalar"),
            bad,
        ));
    }
    Ok(checks)
}

fn criterion_polya() -> Result<Vec<Check>> {
    let mut orbit_fail = 0;
    let mut moment_fail = 0;
    let mut cases = 0;
    for k in 1..=3usize {
        for code in 0..3usize.pow(k as u32) {
            let shades: Vec<u32> = (0..k)
                .map(|i| (code / 3usize.pow(i as u32) % 3) as u32 + 1)
                .collect();
            let palette = Palette::new(shades)?;
            for n in 1..=6 {
                for group in [symmetric_group(n), cyclic_group(n), dihedral_group(n)] {
                    cases += 1;
                    let z = cycle_index_group(&group)?;
                    if shading_gf(&z, &palette)? != brute_force_orbit_count(&group, &palette)? {
                        orbit_fail += 1;
                    }
                }
                if shading_probability_gf(n, &palette)?
                    != moment_polynomial(&palette.as_rationals(), n)?
                {
                    moment_fail += 1;
                }
            }
        }
    }
    Ok(vec![
        Check::holds("grid covered", cases == 39 * 6 * 3),
        Check::failures("shading GF != orbit enumeration", orbit_fail),
        Check::failures("probability GF != moment polynomial", moment_fail),
    ])
}

fn criterion_marginals(seed: u64, exec: Execution) -> Result<Vec<Check>> {
    let sigma = ReferenceMeasure::uniform(1.0)?;
    let partitions = [
        BasePartition::new(&[0.5])?,
        BasePartition::new(&[0.1, 0.35, 0.7])?,
    ];
    let mut checks = Vec::new();
    for (bi, beta) in [0.5, 1.0, 5.0].into_iter().enumerate() {
        let sampler = FergusonSampler::new(beta, &sigma, DEFAULT_EPS)?;
        for (pi, partition) in partitions.iter().enumerate() {
            let cmp = marginal_moments(
                &sampler,
                partition,
                3,
                100_000,
                seed ^ ((bi * 2 + pi) as u64 + 0x8000),
                exec,
            )?;
            let worst = cmp.iter().map(|c| c.z_score()).fold(0.0, f64::max);
            checks.push(Check::at_most(
                format!("beta={beta} cells={} moment |z|", partition.len()),
                worst,
                4.0,
            ));
        }
        let w1 = first_weight_mean(&sampler, 100_000, seed ^ (bi as u64 + 0x8100), exec)?;
        checks.push(Check::at_most(
            format!("beta={beta} first weight |z|"),
            w1.z_score(),
            4.0,
        ));
    }
    Ok(checks)
}

/// Parameters of the characteristic-functional grid.
pub fn cf_grid() -> Result<Vec<(f64, f64, TestFunction)>> {
    let f = TestFunction::piecewise(
        BasePartition::new(&[0.25, 0.5, 0.75])?,
        vec![1.0, -0.5, 0.3, 0.0],
    )?;
    let g = TestFunction::piecewise(BasePartition::new(&[0.4])?, vec![-1.0, 2.0])?;
    let mut out = Vec::new();
    for beta in [0.5, 1.0, 2.0, 5.0] {
        for (j, t) in [-2.0, -0.5, 1.0, 3.0, 5.0].into_iter().enumerate() {
            out.push((beta, t, if j % 2 == 0 { f.clone() } else { g.clone() }));
        }
    }
    Ok(out)
}

fn criterion_cf(seed: u64, exec: Execution) -> Result<Vec<Check>> {
    let sigma = ReferenceMeasure::uniform(1.0)?;
    let mut worst_z = 0.0f64;
    let mut worst_route = 0.0f64;
    for (i, (beta, t, f)) in cf_grid()?.into_iter().enumerate() {
        let series = cf_series(&sigma.scaled(beta), &f, t, 1e-14)?;
        let sampler = FergusonSampler::new(beta, &sigma, DEFAULT_EPS)?;
        let mc = cf_monte_carlo(&sampler, &f, t, 100_000, seed ^ (i as u64 + 0x9000), exec)?;
        for (d, se) in [
            (mc.value.re - series.re, mc.stderr_re),
            (mc.value.im - series.im, mc.stderr_im),
        ] {
            if d != 0.0 {
                worst_z = worst_z.max(d.abs() / se);
            }
        }
        let TestFunction::Piecewise { partition, values } = &f else {
            unreachable!()
        };
        let alpha = DirichletParams::new(partition.lengths().iter().map(|l| beta * l).collect())?;
        let ts: Vec<f64> = values.iter().map(|v| t * v).collect();
        let route = crate::dirichlet::characteristic_functional(&alpha, &ts, 1e-14)?;
        worst_route = worst_route.max((route - series).norm());
    }
    Ok(vec![
        Check::at_most("series vs Monte Carlo |z|", worst_z, 4.0),
        Check::at_most("series vs finite-dimensional route", worst_route, 1e-12),
    ])
}

/// Windowed cosine used for the posterior limits.
pub fn windowed_cosine() -> Result<TestFunction> {
    TestFunction::continuous("windowed-cosine", |y: f64| {
        (2.0 * std::f64::consts::PI * y).cos() * (std::f64::consts::PI * y).sin().powi(2)
    })
}

fn criterion_regions() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let f = TestFunction::piecewise(
        BasePartition::new(&[0.25, 0.5, 0.75])?,
        vec![1.0, -0.5, 0.3, 0.0],
    )?;
    let nu = DiscreteMeasure::new(
        vec![0.1, 0.2, 0.3, 0.6, 0.9, 0.95],
        vec![0.25, 0.125, 0.25, 0.125, 0.0625, 0.1875],
    )?;
    let mut worst = 0.0f64;
    for region in [
        Region::new(vec![(0.0, 0.5)])?,
        Region::new(vec![(0.25, 0.5), (0.75, 1.0)])?,
        Region::whole(),
    ] {
        for scale in [1.0, 2.0, 3.5] {
            worst = worst.max(raise_region_check(&nu.scaled(scale), &f, &region, 1e-15)?.delta);
        }
    }
    checks.push(Check::at_most("atom sum vs operator sum", worst, 1e-12));

    let a = Region::new(vec![(0.0, 0.5)])?;
    let b = Region::new(vec![(0.5, 1.0)])?;
    let rejected = [1.0, 0.5]
        .iter()
        .all(|&m| raise_lower_region(&nu.scaled(m), &f, &a, &b, 1e-12).is_err());
    checks.push(Check::holds("mass <= 1 rejected", rejected));
    let two = nu.scaled(2.0);
    let lhs = raise_lower_region(&two, &f, &a, &b, 1e-14)?;
    let base = ReferenceMeasure::discrete(two.clone());
    let mut rhs = Complex64::new(0.0, 0.0);
    for (y, w) in two.iter() {
        let sign = if y < 0.5 { 1.0 } else { -1.0 };
        rhs += w * phi_extension(&base.plus_atom(y, sign)?, &f, 1e-14)?;
    }
    checks.push(Check::at_most(
        "raise-lower two paths",
        (lhs - rhs).norm(),
        1e-12,
    ));
    let cells = raise_lower_region_check(&two, &f, &a, &b, 1e-14)?;
    checks.push(Check::at_most(
        "raise-lower atoms vs operator sum",
        cells.delta,
        1e-12,
    ));
    let raise_only = raise_region(&two, &f, &a, 1e-14)?;
    let no_b = raise_lower_region(&two, &f, &a, &Region::empty(), 1e-14)?;
    checks.push(Check::at_most(
        "empty lowering region",
        (raise_only - no_b).norm(),
        1e-12,
    ));

    let sigma = ReferenceMeasure::uniform(1.0)?;
    let lim = limiting_posterior_action(&sigma, &windowed_cosine()?, 0.3, &[3, 5, 7], 1e-14)?;
    let raise: Vec<f64> = lim.levels.iter().map(|l| l.raise_error).collect();
    let cartan: Vec<f64> = lim.levels.iter().map(|l| l.cartan_error).collect();
    checks.extend(decreasing("rescaled raising", &raise, 1e-2));
    checks.extend(decreasing("rescaled Cartan", &cartan, 1e-3));
    let lower = lim
        .levels
        .iter()
        .map(|l| l.lower.norm())
        .fold(0.0, f64::max);
    checks.push(Check::at_most("rescaled lowering", lower, 0.0));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        for id in [1, 3, 5, 7, 10] {
            let r = run_criterion(id, 0, Execution::Parallel);
            assert!(r.pass, "{}", r.summary_line());
        }
    }

    #[test]
    fn unknown_criterion_fails() {
        let r = run_criterion(11, 0, Execution::Sequential);
        assert!(!r.pass && r.error.is_some());
    }
}
