//! Exit gate: one line per acceptance criterion, nonzero exit if any fails.
//!
//! Run alone with `cargo test -p thetacert --test acceptance`.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use thetacert_core::anomaly::{
    is_power_of_two, reference_constant, standard_cases, verify_agw, verify_corollary, verify_decomposition_identity,
    verify_main_identity, verify_route_equivalence, FormKind, AGW_DIMENSIONS, COROLLARY_DIMENSIONS,
};
use thetacert_core::chroot::product_over_pairs;
use thetacert_core::modforms::{decompose_theta2, delta_epsilon};
use thetacert_core::rational::{int, rat};
use thetacert_core::thetanum::{check_transformation, required_terms, sample_points, JetSetup, TRUNCATION_BOUND};
use thetacert_core::witten::{lambda_t_character, s_t_character, TMonomial};
use thetacert_core::{
    CharacterElement, DecompositionCase, DeltaEps, DirectBuild, GradedClass, HalfExp, HalfQSeries, LVariant,
    NumericLaw, Rational, RootProfile, RootSeries, Status,
};

/// Numeric tolerance for the transformation laws.
const NUMERIC_TOL: f64 = 1e-9;
/// Seed for the numeric sample points.
const SEED: u64 = 20;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

type Check = fn() -> Outcome;

fn c1_modular_forms() -> Outcome {
    let printed: [(DeltaEps, &[(u32, Rational)]); 4] = [
        (DeltaEps::Delta1, &[(0, rat(1, 4)), (2, int(6)), (4, int(6))]),
        (DeltaEps::Eps1, &[(0, rat(1, 16)), (2, int(-1)), (4, int(7))]),
        (DeltaEps::Delta2, &[(0, rat(-1, 8)), (1, int(-3)), (2, int(-3))]),
        (DeltaEps::Eps2, &[(0, int(0)), (1, int(1)), (2, int(8))]),
    ];
    for (which, coeffs) in printed {
        // through q^10 inclusive
        let s = delta_epsilon(which, 21).series;
        for (e, c) in coeffs {
            if &s.coefficient(HalfExp(*e)).unwrap() != c {
                return outcome(false, format!("{} at exp2 {e}", which.as_str()));
            }
        }
        if let Some((e, _)) = s.terms().find(|(e, c)| e.twice_value() >= 3 && !c.is_integer()) {
            return outcome(false, format!("{} has a non-integer coefficient at {e}", which.as_str()));
        }
        if s.terms()
            .any(|(e, c)| which != DeltaEps::Delta2 && which != DeltaEps::Eps2 && !e.is_integral() && c != &int(0))
        {
            return outcome(false, format!("{} has half-integer powers", which.as_str()));
        }
    }
    outcome(true, "printed terms exact, integral through q^10")
}

fn c2_closed_forms() -> Outcome {
    let cases = standard_cases();
    for &(m, d) in &cases {
        let case = DecompositionCase::classify(m, d).unwrap();
        let profile = RootProfile::new(d, case.form_degree(m)).unwrap();
        let dec = decompose_theta2(m, profile, &DirectBuild).unwrap();
        let t = CharacterElement::tangent(profile);
        let c = |n: i64| CharacterElement::trivial(profile, n);
        let (di, mi) = (i64::from(d), i64::from(m));
        let expected = match case {
            DecompositionCase::B => [c(-1), t.add(&c(24 * (2 * mi + 1) - di)).unwrap()],
            DecompositionCase::Z => [c(1), t.scale(-1).sub(&c(48 * mi - di)).unwrap()],
        };
        for (r, e) in expected.iter().enumerate().take(dec.elements.len()) {
            let got = &dec.elements[r];
            if got.rank() != e.rank() || got.form_part() != e.form_part() {
                return outcome(false, format!("m={m} dim={d} r={r}: got {}", got.describe()));
            }
        }
    }
    outcome(true, format!("{} cases", cases.len()))
}

fn c3_main_identity() -> Outcome {
    let mut degenerate = Vec::new();
    let mut half_ratios = Vec::new();
    for (m, d) in standard_cases() {
        let case = DecompositionCase::classify(m, d).unwrap();
        let full = verify_main_identity(m, d, LVariant::FullAngle, &DirectBuild).unwrap();
        match full.status {
            Status::DegenerateZero => degenerate.push(d),
            Status::Pass if full.lambda == Some(reference_constant(case, m)) => {}
            _ => return outcome(false, format!("full-angle m={m} dim={d}: lambda {:?}", full.lambda)),
        }
        let half = verify_main_identity(m, d, LVariant::HalfAngle, &DirectBuild).unwrap();
        match (half.status, &half.paper_ratio) {
            (Status::DegenerateZero, _) => {}
            (Status::Pass, Some(r)) if is_power_of_two(r) => half_ratios.push(format!("{d}:{}", r)),
            _ => return outcome(false, format!("half-angle m={m} dim={d}: {:?}", half.paper_ratio)),
        }
    }
    outcome(
        true,
        format!(
            "full-angle constants exact; degenerate dims {degenerate:?}; half-angle ratios {}",
            half_ratios.join(" ")
        ),
    )
}

fn c4_agw() -> Outcome {
    let bases: [(u32, &[&[u32]]); 3] =
        [(2, &[&[1]]), (6, &[&[2, 0, 0], &[0, 1, 0]]), (10, &[&[3, 0, 0, 0, 0], &[1, 1, 0, 0, 0], &[0, 0, 1, 0, 0]])];
    for d in AGW_DIMENSIONS {
        let r = verify_agw(d, LVariant::FullAngle).unwrap();
        if r.status != Status::Pass {
            return outcome(false, format!("dim {d}: {} residual terms", r.residuals.len()));
        }
        let allowed = bases.iter().find(|(dd, _)| *dd == d).unwrap().1;
        for part in ["i_half", "i_three_half", "i_a"] {
            for term in r.lhs[part].as_array().unwrap() {
                let mono: Vec<u32> = serde_json::from_value(term["monomial"].clone()).unwrap();
                if !allowed.contains(&mono.as_slice()) {
                    return outcome(false, format!("dim {d}: {part} has monomial {mono:?}"));
                }
            }
        }
    }
    outcome(true, "dims 2, 6, 10 cancel exactly")
}

fn c5_corollaries() -> Outcome {
    for d in COROLLARY_DIMENSIONS {
        let r = verify_corollary(d, &DirectBuild).unwrap();
        if r.status != Status::Pass {
            return outcome(false, format!("dim {d}: {}", r.lhs));
        }
    }
    outcome(true, format!("dims {COROLLARY_DIMENSIONS:?}"))
}

fn c6_series_modularity() -> Outcome {
    let mut n = 0;
    for (m, d) in standard_cases() {
        // matched window m+1 plus two guard coefficients
        let r = verify_decomposition_identity(m, d, m + 3, &DirectBuild).unwrap();
        if !r.status.is_ok(true) {
            return outcome(false, format!("m={m} dim={d}: {} residual terms", r.residuals.len()));
        }
        n += 1;
    }
    outcome(true, format!("{n} cases through q_order m+3"))
}

fn c7_routes() -> Outcome {
    let mut n = 0;
    for (m, d) in standard_cases().into_iter().filter(|&(m, _)| m <= 1) {
        let kind = FormKind::second_of(DecompositionCase::classify(m, d).unwrap());
        // exp2 ≤ 5, i.e. through q^{5/2}
        let r = verify_route_equivalence(kind, m, d, 6, LVariant::FullAngle, &DirectBuild).unwrap();
        if !r.status.is_ok(true) {
            return outcome(false, format!("{} m={m} dim={d}", kind.as_str()));
        }
        n += 1;
    }
    outcome(true, format!("{n} P2/Q2 cases through q^(5/2)"))
}

fn c8_numeric() -> Outcome {
    let theta_points = sample_points(20, SEED);
    let other_points = sample_points(10, SEED);
    for p in theta_points.iter().chain(&other_points) {
        let n = required_terms(p) as i32;
        let q_abs = (-2.0 * std::f64::consts::PI * p.tau().im).exp();
        let z_abs = (2.0 * std::f64::consts::PI * p.v().im).exp();
        if q_abs.powi(n - 1) * z_abs.max(1.0 / z_abs) >= TRUNCATION_BOUND {
            return outcome(false, format!("truncation bound at tau={}", p.tau()));
        }
    }
    let mut worst: f64 = 0.0;
    let runs: Vec<(NumericLaw, &[_], Option<JetSetup>)> = NumericLaw::THETA_LAWS
        .iter()
        .map(|&l| (l, theta_points.as_slice(), None))
        .chain([
            (NumericLaw::DeltaS, other_points.as_slice(), None),
            (NumericLaw::EpsS, other_points.as_slice(), None),
            (NumericLaw::PModular, other_points.as_slice(), Some(JetSetup::default_p())),
        ])
        .collect();
    for (law, points, jet) in runs {
        let r = check_transformation(law, points, NUMERIC_TOL, jet.as_ref()).unwrap();
        worst = worst.max(r.max_residual());
        if !r.pass {
            return outcome(false, format!("{law}: max residual {:.3e}", r.max_residual()));
        }
    }
    outcome(true, format!("max residual {worst:.2e} < {NUMERIC_TOL:.0e}"))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn property_suites() -> Result<(), String> {
    const ORDER: u32 = 7;
    let series =
        || prop::collection::vec(small_rational(), ORDER as usize).prop_map(|c| HalfQSeries::from_dense(&c, ORDER));
    let mut runner = TestRunner::new(Config { cases: 64, failure_persistence: None, ..Config::default() });
    runner
        .run(&(series(), series(), series()), |(a, b, c)| {
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            Ok(())
        })
        .map_err(|e| format!("ring axioms: {e}"))?;

    let profile = RootProfile::new(6, 8).unwrap();
    let character = (-4i64..=4, prop::collection::vec(small_rational(), 3)).prop_map(move |(rank, cs)| {
        let mut form = GradedClass::scalar(profile, int(rank));
        for (i, c) in cs.iter().enumerate() {
            form = form.add(&GradedClass::p(profile, i + 1).scale(c)).unwrap();
        }
        CharacterElement::from_character(&form).unwrap()
    });
    runner
        .run(&(character, 1u32..=3), |(e, exp2)| {
            let s = s_t_character(&e, TMonomial::q(exp2).unwrap(), ORDER);
            let l = lambda_t_character(&e, TMonomial::minus_q(exp2).unwrap(), ORDER);
            prop_assert_eq!(s.mul(&l).unwrap(), HalfQSeries::one(profile, ORDER));
            Ok(())
        })
        .map_err(|e| format!("lambda/S duality: {e}"))?;

    let mut newton = TestRunner::new(Config { cases: 50, failure_persistence: None, ..Config::default() });
    let vectors = (1usize..=4, prop::collection::vec(small_rational(), 4), prop::collection::vec(small_rational(), 4));
    newton
        .run(&vectors, |(n, roots, fc)| {
            let profile = RootProfile::new(2 * n as u32, 16).unwrap();
            let mut coeffs = vec![int(0); 9];
            coeffs[0] = int(1);
            for k in 1..=4 {
                coeffs[2 * k] = fc[k - 1].clone();
            }
            let f = RootSeries::new(coeffs);
            let roots = &roots[..n];
            let via = product_over_pairs(&f, profile).unwrap().eval_at_roots(roots).unwrap();
            // Π f(s·r_j) truncated at s^8, then s = 1
            let mut acc = vec![int(0); 9];
            acc[0] = int(1);
            for r in roots {
                let mut next = vec![int(0); 9];
                for (i, a) in acc.iter().enumerate() {
                    for j in 0..=8 - i {
                        next[i + j] += a * f.coeff(j) * num_pow(r, j);
                    }
                }
                acc = next;
            }
            prop_assert_eq!(via, acc.into_iter().sum::<Rational>());
            Ok(())
        })
        .map_err(|e| format!("Newton roundtrip: {e}"))?;
    Ok(())
}

fn num_pow(r: &Rational, k: usize) -> Rational {
    (0..k).fold(int(1), |acc, _| acc * r)
}

fn run_cli(args: &[&str], out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_thetacert"))
        .args(args)
        .arg("--out")
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    if status.code() != Some(0) {
        return Err(format!("{args:?} exited with {status}"));
    }
    std::fs::read(out).map_err(|e| e.to_string())
}

fn determinism_and_cache() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let base = ["verify", "all", "--allow-degenerate", "--cache-dir", cache];
    let cold = run_cli(&[&base[..], &["--jobs", "4"]].concat(), &dir.path().join("cold.json"))?;
    let warm = run_cli(&[&base[..], &["--jobs", "1"]].concat(), &dir.path().join("warm.json"))?;
    let uncached = run_cli(&["verify", "all", "--allow-degenerate"], &dir.path().join("none.json"))?;
    if cold != warm {
        return Err("warm-cache report differs from cold-cache report".into());
    }
    if cold != uncached {
        return Err("cached report differs from uncached report".into());
    }
    Ok(())
}

fn c9_properties() -> Outcome {
    if let Err(e) = property_suites() {
        return outcome(false, e);
    }
    match determinism_and_cache() {
        Ok(()) => outcome(true, "ring axioms, lambda/S duality, 50 Newton roundtrips, byte-identical reports"),
        Err(e) => outcome(false, e),
    }
}

fn main() {
    let criteria: [(u32, &str, Duration, Check); 9] = [
        (1, "modular-form expansions", Duration::from_secs(1), c1_modular_forms),
        (2, "decomposition closed forms", Duration::from_secs(10), c2_closed_forms),
        (3, "main identity", Duration::from_secs(60), c3_main_identity),
        (4, "low-dimensional cancellation", Duration::from_secs(1), c4_agw),
        (5, "corollary coefficient vectors", Duration::from_secs(5), c5_corollaries),
        (6, "modularity in series form", Duration::from_secs(60), c6_series_modularity),
        (7, "route equivalence", Duration::from_secs(60), c7_routes),
        (8, "numeric transformation laws", Duration::from_secs(5), c8_numeric),
        (9, "property suites", Duration::from_secs(300), c9_properties),
    ];
    let mut failed = 0;
    for (n, name, budget, check) in criteria {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {n} {name}: {} ({:.2} s of {} s) {}{}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            o.detail,
            if in_time { "" } else { " [over time budget]" },
        );
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
