//! The work behind each subcommand. Every command yields a list of JSON
//! results in a fixed order plus an overall pass flag.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};
use thetacert_core::anomaly::{
    self, standard_cases, verify_agw, verify_corollary, verify_decomposition_identity, verify_main_identity,
    verify_route_equivalence, AGW_DIMENSIONS, COROLLARY_DIMENSIONS,
};
use thetacert_core::modforms::{decompose_theta2, delta_epsilon, theta_nullwert, theta_nullwert_fourth};
use thetacert_core::thetanum::{check_transformation, parse_complex, sample_points, Complex64, ComplexPoint};
use thetacert_core::{
    DecompositionCase, DeltaEps, FormKind, HalfExp, LVariant, NumericLaw, RootProfile, ThetaBundleKind, ThetaKind,
    ThetaSource,
};

use crate::config::RunConfig;

pub struct Outcome {
    pub params: Value,
    pub results: Vec<Value>,
    pub ok: bool,
}

impl Outcome {
    fn informational(params: Value, results: Vec<Value>) -> Self {
        Outcome { params, results, ok: true }
    }
}

const DEFAULT_EXPAND_ORDER: u32 = 6;
const DEFAULT_ROUTE_ORDER: u32 = 6;

pub fn expand_nullwert(cfg: &RunConfig, i: u32, power: u32) -> Result<Outcome> {
    let kind = ThetaKind::from_index(i)?;
    let q = cfg.q_order.unwrap_or(DEFAULT_EXPAND_ORDER);
    let series = match (kind, power) {
        (_, 4) => theta_nullwert_fourth(kind, q),
        (ThetaKind::Theta1, _) => bail!("the first theta nullwert carries q^(1/8); use --power 4"),
        (_, p) if p >= 1 => theta_nullwert(kind, q)?.pow(p),
        _ => bail!("power must be positive"),
    };
    let params = json!({ "command": "expand", "target": "theta-nullwert", "i": i, "power": power });
    let result = json!({
        "target": "theta-nullwert",
        "theta": kind.as_str(),
        "power": power,
        "series": series.to_json(),
        "order": series.order2(),
        "display": series.to_string(),
    });
    Ok(Outcome::informational(params, vec![result]))
}

pub fn expand_delta_eps(cfg: &RunConfig, which: &str) -> Result<Outcome> {
    let which: DeltaEps = which.parse()?;
    let q = cfg.q_order.unwrap_or(DEFAULT_EXPAND_ORDER);
    let form = delta_epsilon(which, q);
    let params = json!({ "command": "expand", "target": "delta-eps", "which": which.as_str() });
    let result = json!({
        "target": "delta-eps",
        "which": which.as_str(),
        "weight": form.weight,
        "group": form.group.map(|g| g.to_string()),
        "series": form.series.to_json(),
        "order": form.series.order2(),
        "display": form.series.to_string(),
    });
    Ok(Outcome::informational(params, vec![result]))
}

pub fn expand_theta_bundle(cfg: &RunConfig, kind: &str, dim: u32, source: &dyn ThetaSource) -> Result<Outcome> {
    let kind: ThetaBundleKind = kind.parse()?;
    let q = cfg.q_order.unwrap_or(DEFAULT_EXPAND_ORDER);
    let profile = RootProfile::new(dim, cfg.max_form_degree)?;
    let theta = source.theta_bundle(kind, profile, q)?;
    let mut results = Vec::new();
    for e in 0..q {
        let c = theta.extract_fourier(HalfExp(e))?;
        results.push(json!({
            "target": "theta-bundle",
            "kind": kind.as_str(),
            "exp2": e,
            "label": c.label(),
            "element": c.to_json(),
            "display": format!("{} = {}", c.label().unwrap_or("?"), c.describe()),
        }));
    }
    let params = json!({ "command": "expand", "target": "theta-bundle", "kind": kind.as_str(), "dim": dim });
    Ok(Outcome::informational(params, results))
}

pub fn decompose(cfg: &RunConfig, m: u32, dim: u32, source: &dyn ThetaSource) -> Result<Outcome> {
    let case = DecompositionCase::classify(m, dim)?;
    let profile = RootProfile::new(dim, case.form_degree(m).max(cfg.max_form_degree))?;
    let dec = decompose_theta2(m, profile, source)?;
    let results = dec
        .elements
        .iter()
        .zip(&dec.combination)
        .enumerate()
        .map(|(r, (b, row))| {
            json!({
                "r": r,
                "label": b.label(),
                "element": b.to_json(),
                "combination": row.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "display": format!("{} = {}", b.label().unwrap_or("?"), b.describe()),
            })
        })
        .collect();
    let params = json!({ "command": "decompose", "m": m, "dim": dim, "case": case.letter().to_string() });
    Ok(Outcome::informational(params, results))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Main,
    Decomposition,
    Agw,
    Corollaries,
    Routes,
    Numeric,
    All,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Main => "main",
            Suite::Decomposition => "decomposition",
            Suite::Agw => "agw",
            Suite::Corollaries => "corollaries",
            Suite::Routes => "routes",
            Suite::Numeric => "numeric",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyArgs {
    pub m: Option<u32>,
    pub dim: Option<u32>,
    pub form: Option<String>,
    pub law: Option<String>,
    pub v: Option<String>,
    pub tau: Option<String>,
    pub samples: Option<usize>,
}

impl VerifyArgs {
    fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "dim": self.dim,
            "form": self.form,
            "law": self.law,
            "v": self.v,
            "tau": self.tau,
            "samples": self.samples,
        })
    }
}

enum Task {
    Main { m: u32, dim: u32, variant: LVariant },
    Decomposition { m: u32, dim: u32, q_order: u32 },
    Agw { dim: u32, variant: LVariant },
    Corollary { dim: u32 },
    Route { kind: FormKind, m: u32, dim: u32, q_order: u32, variant: LVariant },
    Numeric { law: NumericLaw, points: Vec<ComplexPoint> },
}

/// Cases matching the optional `--m`/`--dim` filters.
fn cases(args: &VerifyArgs, max_m: u32) -> Result<Vec<(u32, u32)>> {
    match (args.m, args.dim) {
        (Some(m), Some(d)) => {
            DecompositionCase::classify(m, d)?;
            Ok(vec![(m, d)])
        }
        (m, Some(d)) => {
            let found: Vec<_> = DecompositionCase::for_dimension(d)
                .into_iter()
                .map(|(mm, _)| (mm, d))
                .filter(|(mm, _)| m.is_none_or(|m| m == *mm))
                .collect();
            if found.is_empty() {
                bail!("fiber dimension {d} is in neither dimension class");
            }
            Ok(found)
        }
        (m, None) => Ok(standard_cases().into_iter().filter(|(mm, _)| m.map_or(*mm <= max_m, |m| m == *mm)).collect()),
    }
}

fn dims(args: &VerifyArgs, all: &[u32]) -> Result<Vec<u32>> {
    match args.dim {
        Some(d) if all.contains(&d) => Ok(vec![d]),
        Some(d) => bail!("no formula for dimension {d}; available: {all:?}"),
        None => Ok(all.to_vec()),
    }
}

fn numeric_points(cfg: &RunConfig, args: &VerifyArgs, law: NumericLaw) -> Result<Vec<ComplexPoint>> {
    if let Some(tau) = &args.tau {
        let tau = parse_complex(tau)?;
        let v = match &args.v {
            Some(v) => parse_complex(v)?,
            None => Complex64::new(0.0, 0.0),
        };
        return Ok(vec![ComplexPoint::new(v, tau)?]);
    }
    if args.v.is_some() {
        bail!("--v needs --tau");
    }
    let default = if NumericLaw::THETA_LAWS.contains(&law) { 20 } else { 10 };
    Ok(sample_points(args.samples.unwrap_or(default), cfg.seed))
}

fn plan(cfg: &RunConfig, suite: Suite, args: &VerifyArgs) -> Result<Vec<Task>> {
    let mut tasks = Vec::new();
    let want = |s: Suite| suite == s || suite == Suite::All;
    if want(Suite::Main) {
        for (m, dim) in cases(args, 2)? {
            tasks.push(Task::Main { m, dim, variant: cfg.l_variant });
        }
    }
    if want(Suite::Decomposition) {
        for (m, dim) in cases(args, 2)? {
            let q_order = cfg.q_order.unwrap_or(m + 3);
            if q_order < m + 3 {
                bail!("decomposition runs need q order at least m + 3 = {} (got {q_order})", m + 3);
            }
            tasks.push(Task::Decomposition { m, dim, q_order });
        }
    }
    if want(Suite::Agw) && (suite == Suite::Agw || args.dim.is_none_or(|d| AGW_DIMENSIONS.contains(&d))) {
        for dim in dims(args, &AGW_DIMENSIONS)? {
            tasks.push(Task::Agw { dim, variant: cfg.l_variant });
        }
    }
    if want(Suite::Corollaries)
        && (suite == Suite::Corollaries || args.dim.is_none_or(|d| COROLLARY_DIMENSIONS.contains(&d)))
    {
        for dim in dims(args, &COROLLARY_DIMENSIONS)? {
            tasks.push(Task::Corollary { dim });
        }
    }
    if want(Suite::Routes) {
        let q_order = cfg.q_order.unwrap_or(DEFAULT_ROUTE_ORDER);
        let explicit: Option<FormKind> = args.form.as_deref().map(str::parse).transpose()?;
        for (m, dim) in cases(args, 1)? {
            let case = DecompositionCase::classify(m, dim)?;
            match explicit {
                Some(kind) if kind.case() != case => continue,
                Some(kind) => tasks.push(Task::Route { kind, m, dim, q_order, variant: cfg.l_variant }),
                None => {
                    // first forms only match the k-theory route with half-angle L
                    tasks.push(Task::Route {
                        kind: FormKind::second_of(case),
                        m,
                        dim,
                        q_order,
                        variant: cfg.l_variant,
                    });
                    tasks.push(Task::Route {
                        kind: FormKind::first_of(case),
                        m,
                        dim,
                        q_order,
                        variant: LVariant::HalfAngle,
                    });
                }
            }
        }
    }
    if want(Suite::Numeric) {
        let laws: Vec<NumericLaw> = match &args.law {
            Some(l) => vec![l.parse()?],
            None => NumericLaw::ALL.to_vec(),
        };
        for law in laws {
            tasks.push(Task::Numeric { law, points: numeric_points(cfg, args, law)? });
        }
    }
    Ok(tasks)
}

fn run_task(cfg: &RunConfig, task: &Task, source: &dyn ThetaSource) -> Result<(Value, bool)> {
    let identity = |r: anomaly::IdentityReport| {
        let ok = r.status.is_ok(cfg.allow_degenerate);
        (r.to_json(), ok)
    };
    Ok(match task {
        Task::Main { m, dim, variant } => identity(verify_main_identity(*m, *dim, *variant, source)?),
        Task::Decomposition { m, dim, q_order } => identity(verify_decomposition_identity(*m, *dim, *q_order, source)?),
        Task::Agw { dim, variant } => identity(verify_agw(*dim, *variant)?),
        Task::Corollary { dim } => identity(verify_corollary(*dim, source)?),
        Task::Route { kind, m, dim, q_order, variant } => {
            identity(verify_route_equivalence(*kind, *m, *dim, *q_order, *variant, source)?)
        }
        Task::Numeric { law, points } => {
            let r = check_transformation(*law, points, cfg.tolerance, None)?;
            (r.to_json(), r.pass)
        }
    })
}

pub fn verify(cfg: &RunConfig, suite: Suite, args: &VerifyArgs, source: &dyn ThetaSource) -> Result<Outcome> {
    let tasks = plan(cfg, suite, args)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().context("starting worker pool")?;
    let done: Vec<Result<(Value, bool)>> =
        pool.install(|| tasks.par_iter().map(|t| run_task(cfg, t, source)).collect());
    let mut results = Vec::with_capacity(done.len());
    let mut ok = true;
    for r in done {
        let (v, pass) = r?;
        ok &= pass;
        results.push(v);
    }
    let mut params = args.to_json();
    params["command"] = json!("verify");
    params["suite"] = json!(suite.as_str());
    Ok(Outcome { params, results, ok })
}

/// Pass flag of a stored report: every result with a status must pass.
pub fn stored_ok(results: &[Value], allow_degenerate: bool) -> bool {
    results.iter().all(|r| match r.get("status").and_then(Value::as_str) {
        None | Some("pass") => true,
        Some("degenerate-zero") => allow_degenerate,
        Some(_) => false,
    })
}
