//! Subcommand arguments and handlers.

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Map, Number, Value};

use dirichlet_cf::cycle_index::{
    cycle_index_direct, cycle_index_group, cycle_index_recurrence, CycleIndexPolynomial,
    DEFAULT_MAX_DEGREE,
};
use dirichlet_cf::dirichlet::{
    all_maps, check_map_pushforward, humbert_phi2, humbert_phi2_power_sums, moment_cycle_index,
    moment_monte_carlo, moment_multiindex, DirichletParams, MapCheck,
};
use dirichlet_cf::dsa::{
    check_subspace_preservation, check_weyl_conjugation, generic_anchor, verify_commutation_table,
    verify_serre, VerificationReport,
};
use dirichlet_cf::ferguson::{
    cf_monte_carlo_grid, cf_series, first_weight_mean, marginal_moments, raise_lower_region,
    raise_lower_region_check, raise_region, raise_region_check, BasePartition, DiscreteMeasure,
    FergusonSampler, MomentComparison, ReferenceMeasure, Region, TestFunction, MAX_ATOMS,
};
use dirichlet_cf::polya::{
    brute_force_orbit_count, coloring_gf, shading_gf, shading_probability_gf, ColoringGF, Palette,
};
use dirichlet_cf::verify::{run_criterion, CriterionReport, CRITERIA};

use crate::output::{complex, num, nums, Format, Report, Table};
use crate::parse;
use crate::{CliError, Command, Context};

const MAX_SAMPLES: usize = 100_000_000;
const MAX_TRIALS: usize = 1_000_000;

type Outcome = Result<Report, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

fn check_range<T: PartialOrd + std::fmt::Display>(
    flag: &str,
    v: T,
    lo: T,
    hi: T,
) -> Result<(), CliError> {
    if v < lo || v > hi {
        return Err(invalid(format!("{flag} must lie in [{lo}, {hi}], got {v}")));
    }
    Ok(())
}

fn check_positive(flag: &str, v: f64) -> Result<(), CliError> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(invalid(format!(
            "{flag} must be positive and finite, got {v}"
        )));
    }
    Ok(())
}

fn big(v: impl ToString) -> Value {
    Value::Number(v.to_string().parse::<Number>().expect("integer literal"))
}

/// Runs the subcommand; also returns its default output format.
pub fn dispatch(command: &Command, ctx: &Context) -> (Outcome, Format) {
    match command {
        Command::CycleIndex(a) => (cycle_index(a), Format::Json),
        Command::Moments(a) => (moments(a, ctx), Format::Json),
        Command::Phi2(a) => (phi2(a, ctx), Format::Csv),
        Command::MapCheck(a) => (map_check(a), Format::Json),
        Command::DsaCheck(a) => (dsa_check(a, ctx), Format::Json),
        Command::Polya(a) => (polya(a), Format::Json),
        Command::FergusonSim(a) => (ferguson_sim(a, ctx), Format::Json),
        Command::Cf(a) => (cf(a, ctx), Format::Csv),
        Command::Operators(a) => (operators(a, ctx), Format::Json),
        Command::Verify(a) => (verify(a, ctx), Format::Pretty),
    }
}

/// Output format requested through a subcommand's own flag.
pub fn emit_override(command: &Command) -> Option<Format> {
    match command {
        Command::FergusonSim(a) => a.emit,
        _ => None,
    }
}

// cycle-index

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CycleMethod {
    Recurrence,
    Direct,
}

#[derive(Debug, Args)]
pub struct CycleIndexArgs {
    /// Degree of the symmetric-group cycle index.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "recurrence")]
    pub method: CycleMethod,
    /// Permutation group: sym:N, cyc:N, dih:N, trivial:N, or file:PATH.
    #[arg(long, conflicts_with = "group_file")]
    pub group: Option<String>,
    /// File with one permutation per line (1-based images).
    #[arg(long)]
    pub group_file: Option<String>,
}

fn cycle_index_json(z: &CycleIndexPolynomial) -> (Value, Table) {
    let n = z.degree();
    let mut table = Table::new(&["lambda", "coefficient"]);
    let terms: Vec<Value> = z
        .terms_reverse_lex()
        .map(|(lambda, c)| {
            let mut freq: Vec<u32> = lambda.freq().to_vec();
            freq.resize(n.max(freq.len()), 0);
            let label = format!(
                "({})",
                freq.iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            );
            table.push(vec![Value::String(label), Value::String(c.to_string())]);
            json!({"lambda": freq, "num": big(c.numer()), "den": big(c.denom())})
        })
        .collect();
    (json!({"n": n, "terms": terms}), table)
}

fn cycle_index(a: &CycleIndexArgs) -> Outcome {
    let group = match (&a.group, &a.group_file) {
        (Some(spec), _) => Some(parse::group(spec)?),
        (None, Some(path)) => Some(parse::group_file(path)?),
        (None, None) => None,
    };
    let z = match group {
        Some(elements) => {
            let z = cycle_index_group(&elements)?;
            if let Some(n) = a.n.filter(|&n| n != z.degree()) {
                return Err(invalid(format!(
                    "--n {n} does not match the group degree {}",
                    z.degree()
                )));
            }
            z
        }
        None => {
            let n = a.n.ok_or_else(|| invalid("give --n or a group"))?;
            check_range("--n", n, 0, DEFAULT_MAX_DEGREE)?;
            match a.method {
                CycleMethod::Recurrence => cycle_index_recurrence(n)?,
                CycleMethod::Direct => cycle_index_direct(n)?,
            }
        }
    };
    let (json, table) = cycle_index_json(&z);
    Ok(Report::with_table(json, table))
}

// moments

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentRoute {
    MultiIndex,
    CycleIndex,
    MonteCarlo,
    All,
}

#[derive(Debug, Args)]
pub struct MomentsArgs {
    /// Dirichlet parameters, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Direction vector s, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Moment order.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub route: MomentRoute,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000)]
    pub mc_samples: usize,
}

fn moments(a: &MomentsArgs, ctx: &Context) -> Outcome {
    let alpha = parse::reals("--alpha", &a.alpha)?;
    let s = parse::reals("--s", &a.s)?;
    check_range("--n", a.n, 0, DEFAULT_MAX_DEGREE)?;
    check_range("--mc-samples", a.mc_samples, 1, MAX_SAMPLES)?;
    if alpha.is_empty() {
        return Err(invalid("--alpha must be non-empty"));
    }
    if alpha.len() != s.len() {
        return Err(invalid(format!(
            "--alpha has {} entries but --s has {}",
            alpha.len(),
            s.len()
        )));
    }
    let positive = alpha.iter().all(|&x| x > 0.0);
    if a.route == MomentRoute::MonteCarlo && !positive {
        return Err(invalid("the Monte Carlo route needs alpha > 0"));
    }
    let params = DirichletParams::analytic(alpha.clone())?;
    let mut routes = Vec::new();
    let mut table = Table::new(&["route", "value", "stderr", "samples"]);
    let mut exact = Vec::new();
    let wants = |r: MomentRoute| a.route == r || a.route == MomentRoute::All;
    if wants(MomentRoute::MultiIndex) {
        let v = moment_multiindex(&s, &params, a.n)?;
        exact.push(v);
        routes.push(json!({"route": "multi-index", "value": num(v)}));
        table.push(vec!["multi-index".into(), num(v), Value::Null, Value::Null]);
    }
    if wants(MomentRoute::CycleIndex) {
        let v = moment_cycle_index(&s, &params, a.n)?;
        exact.push(v);
        routes.push(json!({"route": "cycle-index", "value": num(v)}));
        table.push(vec!["cycle-index".into(), num(v), Value::Null, Value::Null]);
    }
    if wants(MomentRoute::MonteCarlo) && positive {
        let r = moment_monte_carlo(&s, &params, a.n, a.mc_samples, ctx.seed, ctx.exec)?;
        let se = r.stderr.unwrap_or(0.0);
        routes.push(json!({"route": "monte-carlo", "value": num(r.value), "stderr": num(se), "samples": a.mc_samples}));
        table.push(vec![
            "monte-carlo".into(),
            num(r.value),
            num(se),
            a.mc_samples.into(),
        ]);
    }
    let mut out = json!({
        "alpha": nums(&alpha),
        "s": nums(&s),
        "n": a.n,
        "value": routes.first().map(|r| r["value"].clone()).unwrap_or(Value::Null),
        "routes": routes,
    });
    if exact.len() == 2 {
        out["route_discrepancy"] = num((exact[0] - exact[1]).abs());
    }
    Ok(Report::with_table(out, table))
}

// phi2

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesRoute {
    /// Sum over multi-indices by total degree.
    MultiIndex,
    /// Cycle index of power sums.
    PowerSums,
}

#[derive(Debug, Args)]
pub struct Phi2Args {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Lower parameter; defaults to the sum of alpha.
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Scalings t as start:stop:step; the series is evaluated at t·s.
    #[arg(long = "t", allow_hyphen_values = true, default_value = "1:1:1")]
    pub t_grid: String,
    /// Evaluate at i·t·s, the characteristic functional when c = |alpha|.
    #[arg(long)]
    pub imaginary: bool,
    #[arg(long, value_enum, default_value = "multi-index")]
    pub route: SeriesRoute,
}

fn phi2(a: &Phi2Args, ctx: &Context) -> Outcome {
    let alpha = parse::reals("--alpha", &a.alpha)?;
    let s = parse::reals("--s", &a.s)?;
    let ts = parse::grid("--t", &a.t_grid)?;
    if alpha.is_empty() || alpha.len() != s.len() {
        return Err(invalid(
            "--alpha and --s must be non-empty and of equal length",
        ));
    }
    let c = a.c.unwrap_or_else(|| alpha.iter().sum());
    if !c.is_finite() {
        return Err(invalid(format!("--c must be finite, got {c}")));
    }
    let alpha_c: Vec<Complex64> = alpha.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let unit = if a.imaginary {
        Complex64::i()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut table = Table::new(&["t", "re", "im"]);
    let mut points = Vec::with_capacity(ts.len());
    for &t in &ts {
        let arg: Vec<Complex64> = s.iter().map(|&x| unit * (t * x)).collect();
        let c = Complex64::new(c, 0.0);
        let v = match a.route {
            SeriesRoute::MultiIndex => humbert_phi2(&alpha_c, c, &arg, ctx.tol)?,
            SeriesRoute::PowerSums => humbert_phi2_power_sums(&alpha_c, c, &arg, ctx.tol)?,
        };
        table.push(vec![num(t), num(v.value.re), num(v.value.im)]);
        points.push(json!({"t": num(t), "value": complex(v.value), "terms": v.terms}));
    }
    let json = json!({
        "alpha": nums(&alpha),
        "c": num(c),
        "s": nums(&s),
        "imaginary": a.imaginary,
        "points": points,
    });
    Ok(Report::with_table(json, table))
}

// map-check

#[derive(Debug, Args)]
pub struct MapCheckArgs {
    /// Check every map [k] -> [k].
    #[arg(long, conflicts_with = "map")]
    pub k: Option<usize>,
    /// Check one map, given by its 1-based images.
    #[arg(long)]
    pub map: Option<String>,
    /// Dirichlet parameters; default 1/2, 3/2, 5/2, ...
    #[arg(long)]
    pub alpha: Option<String>,
    /// Largest moment degree compared.
    #[arg(long, default_value_t = 4)]
    pub max_degree: usize,
}

fn map_row(c: &MapCheck) -> Value {
    json!({
        "map": c.map,
        "lambda": c.decomposition.lambda.parts(),
        "pass": c.pass(),
    })
}

fn map_check(a: &MapCheckArgs) -> Outcome {
    let maps: Vec<Vec<usize>> = match (&a.map, a.k) {
        (Some(m), _) => vec![parse::naturals("--map", m)?],
        (None, Some(k)) => {
            check_range("--k", k, 1, 5)?;
            all_maps(k).collect()
        }
        (None, None) => return Err(invalid("give --k or --map")),
    };
    let k = maps[0].len();
    check_range("map length", k, 1, 8)?;
    check_range("--max-degree", a.max_degree, 0, 8)?;
    let alpha_f = match &a.alpha {
        Some(s) => parse::reals("--alpha", s)?,
        None => (0..k).map(|i| i as f64 + 0.5).collect(),
    };
    if alpha_f.len() != k || alpha_f.iter().any(|&x| !(x > 0.0)) {
        return Err(invalid(format!("--alpha needs {k} positive entries")));
    }
    let alpha: Vec<_> = alpha_f
        .iter()
        .map(|&x| exact(x))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(maps.len());
    let mut failures = Vec::new();
    let mut table = Table::new(&["map", "lambda", "pi", "relabel", "pass"]);
    for g in &maps {
        let c = check_map_pushforward(g, &alpha, a.max_degree)?;
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        table.push(vec![
            join(&c.map).into(),
            join(&c.decomposition.lambda.parts()).into(),
            join(&c.decomposition.pi.images()).into(),
            join(&c.decomposition.relabel).into(),
            c.pass().into(),
        ]);
        rows.push(map_row(&c));
        if !c.pass() {
            failures.push(serde_json::to_value(&c).expect("serializable"));
        }
    }
    let pass = failures.is_empty();
    let report = json!({
        "k": k,
        "alpha": nums(&alpha_f),
        "max_degree": a.max_degree,
        "maps": maps.len(),
        "pass": pass,
        "results": rows,
        "counterexamples": failures,
    });
    if !pass {
        return Err(CliError::Failed(report));
    }
    Ok(Report::with_table(report, table))
}

fn exact(x: f64) -> Result<BigRational, CliError> {
    BigRational::from_float(x).ok_or_else(|| invalid(format!("{x} is not a finite number")))
}

// dsa-check

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    Table,
    Serre,
    Invariant,
    Weyl,
    All,
}

#[derive(Debug, Args)]
pub struct DsaCheckArgs {
    /// Lattice dimension; inferred from --alpha when given.
    #[arg(long)]
    pub k: Option<usize>,
    /// Anchor of the lattice; default is a normalized random vector.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Random vectors per relation.
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub relation: Relation,
}

fn dsa_check(a: &DsaCheckArgs, ctx: &Context) -> Outcome {
    check_range("--trials", a.trials, 1, MAX_TRIALS)?;
    let alpha = match &a.alpha {
        Some(s) => {
            let v = parse::reals("--alpha", s)?;
            if let Some(k) = a.k.filter(|&k| k != v.len()) {
                return Err(invalid(format!(
                    "--k {k} does not match the {} entries of --alpha",
                    v.len()
                )));
            }
            v
        }
        None => {
            let k = a.k.ok_or_else(|| invalid("give --k or --alpha"))?;
            check_range("--k", k, 2, 12)?;
            generic_anchor(k, ctx.seed)?
        }
    };
    check_range("alpha length", alpha.len(), 2, 12)?;
    let base: Vec<Complex64> = alpha.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let wants = |r: Relation| a.relation == r || a.relation == Relation::All;
    let mut report = VerificationReport {
        tolerance: dirichlet_cf::dsa::RELATION_TOL,
        checks: Vec::new(),
    };
    if wants(Relation::Table) {
        report.extend(verify_commutation_table(
            &base, a.trials, ctx.seed, ctx.exec,
        )?);
    }
    if wants(Relation::Serre) {
        report.extend(verify_serre(&base, a.trials, ctx.seed, ctx.exec)?);
    }
    if wants(Relation::Invariant) {
        report.extend(check_subspace_preservation(
            &base, a.trials, ctx.seed, ctx.exec,
        )?);
    }
    if wants(Relation::Weyl) {
        report.extend(check_weyl_conjugation(&base, a.trials, ctx.seed, ctx.exec)?);
    }
    let mut table = Table::new(&["relation", "cases", "failures", "max_error", "pass"]);
    let relations: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            table.push(vec![
                c.relation.clone().into(),
                c.cases.into(),
                c.failures.into(),
                num(c.max_error),
                c.pass.into(),
            ]);
            json!({
                "relation": c.relation,
                "cases": c.cases,
                "failures": c.failures,
                "max_error": num(c.max_error),
                "pass": c.pass,
            })
        })
        .collect();
    let max_error = report
        .checks
        .iter()
        .map(|c| c.max_error)
        .fold(0.0, f64::max);
    let json = json!({
        "alpha": nums(&alpha),
        "trials": a.trials,
        "tolerance": num(report.tolerance),
        "relations": relations,
        "max_error": num(max_error),
        "pass": report.passed(),
    });
    if !report.passed() {
        return Err(CliError::Failed(json));
    }
    Ok(Report::with_table(json, table))
}

// polya

#[derive(Debug, Args)]
pub struct PolyaArgs {
    /// Permutation group: sym:N, cyc:N, dih:N, trivial:N, or file:PATH.
    #[arg(long)]
    pub group: String,
    /// Number of plain colors.
    #[arg(long, conflicts_with = "palette")]
    pub colors: Option<usize>,
    /// Shades per color, comma-separated.
    #[arg(long)]
    pub palette: Option<String>,
    /// Also enumerate orbits exhaustively and compare.
    #[arg(long)]
    pub brute_force: bool,
    /// Also print the occupancy probability polynomial (symmetric groups only).
    #[arg(long)]
    pub probability: bool,
}

fn gf_terms(gf: &ColoringGF, table: &mut Table) -> Vec<Value> {
    gf.counts()
        .into_iter()
        .rev()
        .map(|(occ, count)| {
            let label = occ.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            table.push(vec![label.into(), big(&count)]);
            json!({"occupancy": occ, "count": big(&count)})
        })
        .collect()
}

fn polya(a: &PolyaArgs) -> Outcome {
    let palette = match (&a.palette, a.colors) {
        (Some(p), _) => Palette::new(parse::shades("--palette", p)?)?,
        (None, Some(k)) => {
            check_range("--colors", k, 1, 16)?;
            Palette::plain(k)?
        }
        (None, None) => return Err(invalid("give --colors or --palette")),
    };
    check_range("palette colors", palette.colors(), 1, 16)?;
    check_range("total shades", palette.total_shades(), 1, 64)?;
    let group = parse::group(&a.group)?;
    let z = cycle_index_group(&group)?;
    if a.probability && group.len() != (1..=z.degree()).product::<usize>() {
        return Err(invalid("--probability needs the full symmetric group"));
    }
    let gf = if a.palette.is_some() {
        shading_gf(&z, &palette)?
    } else {
        coloring_gf(&z, palette.colors())?
    };
    let mut table = Table::new(&["occupancy", "count"]);
    let terms = gf_terms(&gf, &mut table);
    let mut out = Map::new();
    out.insert("n".into(), gf.n().into());
    out.insert("group".into(), a.group.clone().into());
    out.insert("group_order".into(), group.len().into());
    out.insert("palette".into(), palette.shades().to_vec().into());
    out.insert("terms".into(), terms.into());
    out.insert("total".into(), big(gf.total()));
    if a.brute_force {
        let brute = brute_force_orbit_count(&group, &palette)?;
        let agree = brute == gf;
        out.insert(
            "brute_force".into(),
            json!({"total": big(brute.total()), "agrees": agree}),
        );
        if !agree {
            return Err(CliError::Failed(Value::Object(out)));
        }
    }
    if a.probability {
        let poly = shading_probability_gf(gf.n(), &palette)?;
        let terms: Vec<Value> = poly
            .terms()
            .iter()
            .rev()
            .map(|(e, c)| json!({"occupancy": e, "num": big(c.numer()), "den": big(c.denom())}))
            .collect();
        out.insert("probability".into(), terms.into());
    }
    Ok(Report::with_table(Value::Object(out), table))
}

// ferguson-sim

#[derive(Debug, Args)]
pub struct FergusonSimArgs {
    /// Concentration of the Dirichlet-Ferguson measure over uniform [0, 1].
    #[arg(long)]
    pub beta: f64,
    /// Interior cut points of the partition of [0, 1].
    #[arg(long, default_value = "0.25,0.5,0.75")]
    pub cells: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Largest total order of the mixed moments compared.
    #[arg(long, default_value_t = 3)]
    pub max_order: usize,
    /// Residual stick mass at which breaking stops.
    #[arg(long, default_value_t = dirichlet_cf::ferguson::DEFAULT_EPS)]
    pub eps: f64,
    /// Output format for this table; overrides --output.
    #[arg(long, value_enum)]
    pub emit: Option<Format>,
}

fn sampler(beta: f64, eps: f64) -> Result<FergusonSampler, CliError> {
    check_positive("--beta", beta)?;
    check_range("--beta", beta, 1e-6, 1e6)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("--eps must lie in (0, 1), got {eps}")));
    }
    // expected atom count is about beta * ln(1/eps)
    if beta * (1.0 / eps).ln() > MAX_ATOMS as f64 / 4.0 {
        return Err(invalid("--beta and --eps need too many atoms per draw"));
    }
    Ok(FergusonSampler::new(
        beta,
        &ReferenceMeasure::uniform(1.0)?,
        eps,
    )?)
}

fn comparison_row(c: &MomentComparison) -> (Value, Vec<Value>) {
    let label = c
        .exponents
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    let z = c.z_score();
    (
        json!({
            "exponents": c.exponents,
            "exact": num(c.exact),
            "estimate": num(c.estimate),
            "stderr": num(c.stderr),
            "z": num(z),
        }),
        vec![
            label.into(),
            num(c.exact),
            num(c.estimate),
            num(c.stderr),
            num(z),
        ],
    )
}

fn ferguson_sim(a: &FergusonSimArgs, ctx: &Context) -> Outcome {
    let sampler = sampler(a.beta, a.eps)?;
    let cuts = parse::reals("--cells", &a.cells)?;
    let partition = BasePartition::new(&cuts)?;
    check_range("--samples", a.samples, 2, MAX_SAMPLES)?;
    check_range("--max-order", a.max_order, 1, 6)?;
    let moments = marginal_moments(
        &sampler,
        &partition,
        a.max_order,
        a.samples,
        ctx.seed,
        ctx.exec,
    )?;
    let first = first_weight_mean(&sampler, a.samples, ctx.seed ^ 0x57, ctx.exec)?;
    let mut table = Table::new(&["exponents", "exact", "estimate", "stderr", "z"]);
    let mut rows = Vec::with_capacity(moments.len());
    for c in &moments {
        let (j, r) = comparison_row(c);
        rows.push(j);
        table.push(r);
    }
    let (first_json, mut first_row) = comparison_row(&first);
    first_row[0] = "first weight".into();
    table.push(first_row);
    let max_z = moments
        .iter()
        .chain(std::iter::once(&first))
        .map(MomentComparison::z_score)
        .fold(0.0, f64::max);
    let json = json!({
        "beta": num(a.beta),
        "cells": nums(partition.cuts()),
        "samples": a.samples,
        "eps": num(a.eps),
        "moments": rows,
        "first_weight": first_json,
        "max_z": num(max_z),
    });
    Ok(Report::with_table(json, table))
}

// cf

#[derive(Debug, Args)]
pub struct CfArgs {
    #[arg(long)]
    pub beta: f64,
    /// Test function: piecewise:CUTS:VALUES, constant:C, cos2pi, or windowed-cosine.
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, allow_hyphen_values = true, default_value = "-5:5:0.1")]
    pub t_grid: String,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = dirichlet_cf::ferguson::DEFAULT_EPS)]
    pub eps: f64,
}

fn cf(a: &CfArgs, ctx: &Context) -> Outcome {
    let sampler = sampler(a.beta, a.eps)?;
    let f = parse::test_function(&a.f)?;
    let ts = parse::grid("--t-grid", &a.t_grid)?;
    check_range("--samples", a.samples, 2, MAX_SAMPLES)?;
    check_range("t-grid points", ts.len(), 1, 10_000)?;
    let nu = ReferenceMeasure::uniform(a.beta)?;
    let series = ts
        .iter()
        .map(|&t| cf_series(&nu, &f, t, ctx.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let mc = cf_monte_carlo_grid(&sampler, &f, &ts, a.samples, ctx.seed, ctx.exec)?;
    let mut table = Table::new(&["t", "re_series", "im_series", "re_mc", "im_mc", "stderr"]);
    let mut points = Vec::with_capacity(ts.len());
    for ((&t, s), m) in ts.iter().zip(&series).zip(&mc) {
        let stderr = m.stderr_re.hypot(m.stderr_im);
        table.push(vec![
            num(t),
            num(s.re),
            num(s.im),
            num(m.value.re),
            num(m.value.im),
            num(stderr),
        ]);
        points.push(json!({
            "t": num(t),
            "series": complex(*s),
            "monte_carlo": complex(m.value),
            "stderr_re": num(m.stderr_re),
            "stderr_im": num(m.stderr_im),
        }));
    }
    let json = json!({
        "beta": num(a.beta),
        "f": a.f,
        "samples": a.samples,
        "points": points,
    });
    Ok(Report::with_table(json, table))
}

// operators

#[derive(Debug, Args)]
pub struct OperatorsArgs {
    /// Raising region A as a:b[,c:d...].
    #[arg(long)]
    pub region: String,
    /// Lowering region B; enables E_{A,-B}.
    #[arg(long)]
    pub lower_region: Option<String>,
    /// Atom locations of the finitely supported measure.
    #[arg(long, default_value = "0.1,0.3,0.6,0.85")]
    pub atoms: String,
    #[arg(long, default_value = "0.5,0.75,1.0,0.25")]
    pub weights: String,
    #[arg(
        long,
        allow_hyphen_values = true,
        default_value = "piecewise:0.25,0.5,0.75:1.0,-0.5,0.3,0.0"
    )]
    pub f: String,
}

fn region_json(r: &Region) -> Value {
    Value::Array(
        r.intervals()
            .iter()
            .map(|&(a, b)| json!([num(a), num(b)]))
            .collect(),
    )
}

fn operators(a: &OperatorsArgs, ctx: &Context) -> Outcome {
    let atoms = parse::reals("--atoms", &a.atoms)?;
    let weights = parse::reals("--weights", &a.weights)?;
    let nu = DiscreteMeasure::new(atoms.clone(), weights.clone())?;
    if !(nu.total_mass() > 0.0) {
        return Err(invalid("--weights must have positive total mass"));
    }
    let f = parse::test_function(&a.f)?;
    let raise_set = parse::region("--region", &a.region)?;
    let lower_set = a
        .lower_region
        .as_deref()
        .map(|r| parse::region("--lower-region", r))
        .transpose()?;
    if lower_set.is_some() && !(nu.total_mass() > 1.0) {
        return Err(invalid(format!(
            "--lower-region needs total mass > 1, got {}",
            nu.total_mass()
        )));
    }
    let piecewise = matches!(f, TestFunction::Piecewise { .. });
    let mut out = Map::new();
    out.insert("atoms".into(), nums(nu.atoms()));
    out.insert("weights".into(), nums(nu.weights()));
    out.insert("f".into(), a.f.clone().into());
    out.insert("region".into(), region_json(&raise_set));
    let raise = if piecewise {
        let c = raise_region_check(&nu, &f, &raise_set, ctx.tol)?;
        json!({"value": complex(c.atoms), "cells": complex(c.cells), "delta": num(c.delta)})
    } else {
        json!({"value": complex(raise_region(&nu, &f, &raise_set, ctx.tol)?)})
    };
    out.insert("raise".into(), raise);
    if let Some(lower_set) = lower_set {
        out.insert("lower_region".into(), region_json(&lower_set));
        let v = if piecewise {
            let c = raise_lower_region_check(&nu, &f, &raise_set, &lower_set, ctx.tol)?;
            json!({"value": complex(c.atoms), "cells": complex(c.cells), "delta": num(c.delta)})
        } else {
            json!({"value": complex(raise_lower_region(&nu, &f, &raise_set, &lower_set, ctx.tol)?)})
        };
        out.insert("raise_lower".into(), v);
    }
    Ok(Report::json(Value::Object(out)))
}

// verify

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run every criterion.
    #[arg(long, conflicts_with = "criterion")]
    pub all: bool,
    /// Run one criterion.
    #[arg(long)]
    pub criterion: Option<usize>,
    /// Include wall-clock seconds in the report.
    #[arg(long)]
    pub timings: bool,
}

fn criterion_json(r: &CriterionReport, timings: bool) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .filter(|c| timings || c.name != "runtime seconds")
        .map(|c| json!({"name": c.name, "value": num(c.value), "limit": num(c.limit), "pass": c.pass}))
        .collect();
    let mut m = Map::new();
    m.insert("id".into(), r.id.into());
    m.insert("title".into(), r.title.clone().into());
    m.insert("pass".into(), r.pass.into());
    if timings {
        m.insert("seconds".into(), num(r.seconds));
    }
    m.insert("checks".into(), checks.into());
    if let Some(e) = &r.error {
        m.insert("error".into(), e.clone().into());
    }
    Value::Object(m)
}

fn verify(a: &VerifyArgs, ctx: &Context) -> Outcome {
    let ids: Vec<usize> = match (a.all, a.criterion) {
        (_, Some(id)) => {
            check_range("--criterion", id, 1, CRITERIA)?;
            vec![id]
        }
        (true, None) => (1..=CRITERIA).collect(),
        (false, None) => return Err(invalid("give --all or --criterion N")),
    };
    let reports: Vec<CriterionReport> = ids
        .iter()
        .map(|&id| {
            let r = run_criterion(id, ctx.seed, ctx.exec);
            eprintln!("{}", r.summary_line());
            r
        })
        .collect();
    let pass = reports.iter().all(|r| r.pass);
    let mut table = Table::new(&["criterion", "status", "title"]);
    for r in &reports {
        table.push(vec![
            r.id.into(),
            (if r.pass { "PASS" } else { "FAIL" }).into(),
            r.title.clone().into(),
        ]);
    }
    let criteria: Vec<Value> = reports
        .iter()
        .map(|r| criterion_json(r, a.timings))
        .collect();
    if !pass {
        let failed: Vec<Value> = reports
            .iter()
            .filter(|r| !r.pass)
            .map(|r| criterion_json(r, a.timings))
            .collect();
        return Err(CliError::Failed(
            json!({"seed": ctx.seed, "pass": false, "failures": failed}),
        ));
    }
    Ok(Report::with_table(
        json!({"seed": ctx.seed, "pass": true, "criteria": criteria}),
        table,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_index_terms() {
        let (j, t) = cycle_index_json(&cycle_index_recurrence(2).unwrap());
        assert_eq!(j["n"], 2);
        assert_eq!(j["terms"][0]["lambda"], json!([2, 0]));
        assert_eq!(j["terms"][0]["num"], 1);
        assert_eq!(j["terms"][0]["den"], 2);
        assert_eq!(j["terms"][1]["lambda"], json!([0, 1]));
        assert_eq!(t.rows[0][0], Value::String("(2,0)".into()));
        assert_eq!(t.rows[1][1], Value::String("1/2".into()));
    }
}
