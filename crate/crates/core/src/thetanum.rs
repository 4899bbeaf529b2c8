//! Double-precision evaluation of the Jacobi theta functions and numeric checks
//! of their modular transformation laws.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

pub use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::modforms::ThetaKind;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Target size of the first neglected product factor.
pub const TRUNCATION_BOUND: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    v: Complex64,
    tau: Complex64,
}

impl ComplexPoint {
    pub fn new(v: Complex64, tau: Complex64) -> Result<Self> {
        if tau.im.is_nan() || tau.im <= 0.0 || !v.is_finite() || !tau.is_finite() {
            return Err(Error::InvalidPoint(format!("tau = {tau} must lie in the upper half plane")));
        }
        Ok(ComplexPoint { v, tau })
    }

    pub fn v(&self) -> Complex64 {
        self.v
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }
}

/// Parses `a+bi`, `a-bi`, `bi`, `a`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a complex number: {s:?}"));
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not the leading one or part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            x => x.parse::<f64>().map_err(|_| bad())?,
        };
        Ok(Complex64::new(re.parse::<f64>().map_err(|_| bad())?, im))
    } else {
        Ok(Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
    }
}

/// Smallest `N` with `|q|^N · max(|z|, 1/|z|) < 1e-16`, `z = e^{2πiv}`.
pub fn required_terms(p: &ComplexPoint) -> usize {
    let log_q = -2.0 * PI * p.tau.im;
    let log_z = (2.0 * PI * p.v.im).abs();
    let n = (TRUNCATION_BOUND.ln() - log_z) / log_q;
    n.ceil().max(1.0) as usize + 1
}

fn q_pow(tau: Complex64, x: f64) -> Complex64 {
    (2.0 * PI * I * tau * x).exp()
}

/// Truncated product formula with `n_terms` factors.
pub fn theta_eval(kind: ThetaKind, p: &ComplexPoint, n_terms: usize) -> Complex64 {
    let z = (2.0 * PI * I * p.v).exp();
    let zi = z.inv();
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 1..=n_terms {
        let jf = j as f64;
        let qj = q_pow(p.tau, jf);
        let qh = q_pow(p.tau, jf - 0.5);
        let one = Complex64::new(1.0, 0.0);
        prod *= (one - qj)
            * match kind {
                ThetaKind::Theta => (one - z * qj) * (one - zi * qj),
                ThetaKind::Theta1 => (one + z * qj) * (one + zi * qj),
                ThetaKind::Theta2 => (one - z * qh) * (one - zi * qh),
                ThetaKind::Theta3 => (one + z * qh) * (one + zi * qh),
            };
    }
    let pre = 2.0 * q_pow(p.tau, 0.125);
    match kind {
        ThetaKind::Theta => pre * (PI * p.v).sin() * prod,
        ThetaKind::Theta1 => pre * (PI * p.v).cos() * prod,
        ThetaKind::Theta2 | ThetaKind::Theta3 => prod,
    }
}

/// [`theta_eval`] with the adaptive term count.
pub fn theta(kind: ThetaKind, v: Complex64, tau: Complex64) -> Result<Complex64> {
    let p = ComplexPoint::new(v, tau)?;
    Ok(theta_eval(kind, &p, required_terms(&p)))
}

/// `θ'(0,τ) = 2π q^{1/8} Π (1-q^j)^3`.
pub fn theta_prime_zero(tau: Complex64) -> Result<Complex64> {
    let p = ComplexPoint::new(Complex64::new(0.0, 0.0), tau)?;
    let one = Complex64::new(1.0, 0.0);
    let prod: Complex64 = (1..=required_terms(&p)).map(|j| (one - q_pow(tau, j as f64)).powu(3)).product();
    Ok(2.0 * PI * q_pow(tau, 0.125) * prod)
}

/// The four level-2 forms evaluated through theta nullwerte.
pub fn delta_epsilon_eval(which: crate::modforms::DeltaEps, tau: Complex64) -> Result<Complex64> {
    use crate::modforms::DeltaEps::*;
    let zero = Complex64::new(0.0, 0.0);
    let t3 = theta(ThetaKind::Theta3, zero, tau)?.powu(4);
    Ok(match which {
        Delta1 => (theta(ThetaKind::Theta2, zero, tau)?.powu(4) + t3) / 8.0,
        Eps1 => theta(ThetaKind::Theta2, zero, tau)?.powu(4) * t3 / 16.0,
        Delta2 => -(theta(ThetaKind::Theta1, zero, tau)?.powu(4) + t3) / 8.0,
        Eps2 => theta(ThetaKind::Theta1, zero, tau)?.powu(4) * t3 / 16.0,
    })
}

/// Which `Θ` the per-root theta quotient carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientKind {
    /// `v θ'(0)/θ(v) · θ₁(v)/θ₁(0)`.
    First,
    /// `v θ'(0)/θ(v) · θ₂(v)/θ₂(0)`.
    Second,
}

/// Per-root factor `v θ'(0,τ)/θ(v,τ) · θ_i(v,τ)/θ_i(0,τ)` (value 1 at `v = 0`).
pub fn theta_quotient(kind: QuotientKind, v: Complex64, tau: Complex64) -> Result<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let ti = match kind {
        QuotientKind::First => ThetaKind::Theta1,
        QuotientKind::Second => ThetaKind::Theta2,
    };
    let ratio = theta(ti, v, tau)? / theta(ti, zero, tau)?;
    if v.norm() < 1e-300 {
        return Ok(ratio);
    }
    Ok(v * theta_prime_zero(tau)? / theta(ThetaKind::Theta, v, tau)? * ratio)
}

const JET_SAMPLES: usize = 64;

/// Coefficient of `t^n` in `Π_j F(t · x_j)`, by a discrete Fourier transform on
/// the unit circle; this is the degree-`2n` form evaluated at the roots.
pub fn jet_coefficient(n: usize, f: impl Fn(Complex64) -> Result<Complex64>) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..JET_SAMPLES {
        let t = (2.0 * PI * I * (k as f64) / JET_SAMPLES as f64).exp();
        acc += f(t)? * t.powi(-(n as i32));
    }
    Ok(acc / JET_SAMPLES as f64)
}

/// `P₁`/`Q₁` (first) or `P₂`/`Q₂` (second) at numeric roots: the `x^{2·weight}`
/// part of `Π_j F(σ x_j / (2πi))`, with `σ = 2` for the first form and 1 for the second.
pub fn modular_form_at_roots(kind: QuotientKind, weight: u32, roots: &[f64], tau: Complex64) -> Result<Complex64> {
    let sigma = match kind {
        QuotientKind::First => 2.0,
        QuotientKind::Second => 1.0,
    };
    jet_coefficient(weight as usize, |t| {
        roots.iter().try_fold(Complex64::new(1.0, 0.0), |acc, x| {
            Ok(acc * theta_quotient(kind, sigma * t * *x / (2.0 * PI * I), tau)?)
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NumericLaw {
    #[serde(rename = "theta-t")]
    ThetaT,
    #[serde(rename = "theta-s")]
    ThetaS,
    #[serde(rename = "theta1-t")]
    Theta1T,
    #[serde(rename = "theta1-s")]
    Theta1S,
    #[serde(rename = "theta2-t")]
    Theta2T,
    #[serde(rename = "theta2-s")]
    Theta2S,
    #[serde(rename = "theta3-t")]
    Theta3T,
    #[serde(rename = "theta3-s")]
    Theta3S,
    #[serde(rename = "delta-s")]
    DeltaS,
    #[serde(rename = "eps-s")]
    EpsS,
    #[serde(rename = "p-modular")]
    PModular,
    #[serde(rename = "q-modular")]
    QModular,
}

impl NumericLaw {
    pub const THETA_LAWS: [NumericLaw; 8] = [
        NumericLaw::ThetaT,
        NumericLaw::ThetaS,
        NumericLaw::Theta1T,
        NumericLaw::Theta1S,
        NumericLaw::Theta2T,
        NumericLaw::Theta2S,
        NumericLaw::Theta3T,
        NumericLaw::Theta3S,
    ];

    pub const ALL: [NumericLaw; 12] = [
        NumericLaw::ThetaT,
        NumericLaw::ThetaS,
        NumericLaw::Theta1T,
        NumericLaw::Theta1S,
        NumericLaw::Theta2T,
        NumericLaw::Theta2S,
        NumericLaw::Theta3T,
        NumericLaw::Theta3S,
        NumericLaw::DeltaS,
        NumericLaw::EpsS,
        NumericLaw::PModular,
        NumericLaw::QModular,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NumericLaw::ThetaT => "theta-t",
            NumericLaw::ThetaS => "theta-s",
            NumericLaw::Theta1T => "theta1-t",
            NumericLaw::Theta1S => "theta1-s",
            NumericLaw::Theta2T => "theta2-t",
            NumericLaw::Theta2S => "theta2-s",
            NumericLaw::Theta3T => "theta3-t",
            NumericLaw::Theta3S => "theta3-s",
            NumericLaw::DeltaS => "delta-s",
            NumericLaw::EpsS => "eps-s",
            NumericLaw::PModular => "p-modular",
            NumericLaw::QModular => "q-modular",
        }
    }

    /// Whether the law depends on `v` (the others only read `τ`).
    pub fn uses_v(self) -> bool {
        Self::THETA_LAWS.contains(&self)
    }
}

impl fmt::Display for NumericLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NumericLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.iter().copied().find(|l| l.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|l| l.as_str()).collect();
            Error::Parse(format!("unknown law {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

/// Root data for the `P`/`Q` modularity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct JetSetup {
    pub m: u32,
    /// One value per root pair, `|x| ≤ 0.2`.
    pub roots: Vec<f64>,
}

impl JetSetup {
    /// `m = 0`, fiber dimension 2, root 0.1.
    pub fn default_p() -> Self {
        JetSetup { m: 0, roots: vec![0.1] }
    }

    /// `m = 1`, fiber dimension 6.
    pub fn default_q() -> Self {
        JetSetup { m: 1, roots: vec![0.1, -0.15, 0.2] }
    }
}

/// `|lhs - rhs| / max(1, |lhs|, |rhs|)`: absolute near zero, relative otherwise.
pub fn residual(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / 1f64.max(lhs.norm()).max(rhs.norm())
}

fn sqrt_tau_over_i(tau: Complex64) -> Complex64 {
    (tau / I).sqrt()
}

/// Both sides of a law at one sample point.
pub fn law_sides(law: NumericLaw, p: &ComplexPoint, jet: Option<&JetSetup>) -> Result<(Complex64, Complex64)> {
    let (v, tau) = (p.v, p.tau);
    let s_tau = -tau.inv();
    let t_tau = tau + 1.0;
    let e8 = (PI * I / 4.0).exp();
    let gauss = sqrt_tau_over_i(tau) * (PI * I * tau * v * v).exp();
    let th = |k: ThetaKind, v: Complex64, t: Complex64| theta(k, v, t);
    use ThetaKind::*;
    Ok(match law {
        NumericLaw::ThetaT => (th(Theta, v, t_tau)?, e8 * th(Theta, v, tau)?),
        NumericLaw::ThetaS => (th(Theta, v, s_tau)?, gauss / I * th(Theta, tau * v, tau)?),
        NumericLaw::Theta1T => (th(Theta1, v, t_tau)?, e8 * th(Theta1, v, tau)?),
        NumericLaw::Theta1S => (th(Theta1, v, s_tau)?, gauss * th(Theta2, tau * v, tau)?),
        NumericLaw::Theta2T => (th(Theta2, v, t_tau)?, th(Theta3, v, tau)?),
        NumericLaw::Theta2S => (th(Theta2, v, s_tau)?, gauss * th(Theta1, tau * v, tau)?),
        NumericLaw::Theta3T => (th(Theta3, v, t_tau)?, th(Theta2, v, tau)?),
        NumericLaw::Theta3S => (th(Theta3, v, s_tau)?, gauss * th(Theta3, tau * v, tau)?),
        NumericLaw::DeltaS => {
            use crate::modforms::DeltaEps;
            (delta_epsilon_eval(DeltaEps::Delta2, s_tau)?, tau.powu(2) * delta_epsilon_eval(DeltaEps::Delta1, tau)?)
        }
        NumericLaw::EpsS => {
            use crate::modforms::DeltaEps;
            (delta_epsilon_eval(DeltaEps::Eps2, s_tau)?, tau.powu(4) * delta_epsilon_eval(DeltaEps::Eps1, tau)?)
        }
        NumericLaw::PModular | NumericLaw::QModular => {
            let default;
            let jet = match jet {
                Some(j) => j,
                None => {
                    default = if law == NumericLaw::PModular { JetSetup::default_p() } else { JetSetup::default_q() };
                    &default
                }
            };
            let weight = if law == NumericLaw::PModular { 4 * jet.m + 2 } else { 4 * jet.m };
            let lhs = modular_form_at_roots(QuotientKind::First, weight, &jet.roots, s_tau)?;
            let rhs = modular_form_at_roots(QuotientKind::Second, weight, &jet.roots, tau)?;
            (lhs, (2.0 * tau).powu(weight) * rhs)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleResidual {
    pub v: [f64; 2],
    pub tau: [f64; 2],
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericCheckReport {
    pub law: NumericLaw,
    pub samples: Vec<SampleResidual>,
    pub tolerance: f64,
    pub pass: bool,
}

impl NumericCheckReport {
    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.residual).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "law": self.law.as_str(),
            "tolerance": self.tolerance,
            "max_residual": self.max_residual(),
            "samples": self.samples,
            "status": if self.pass { "pass" } else { "fail" },
        })
    }
}

pub fn check_transformation(
    law: NumericLaw,
    samples: &[ComplexPoint],
    tol: f64,
    jet: Option<&JetSetup>,
) -> Result<NumericCheckReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut out = Vec::with_capacity(samples.len());
    for p in samples {
        let (lhs, rhs) = law_sides(law, p, jet)?;
        let r = residual(lhs, rhs);
        out.push(SampleResidual { v: [p.v.re, p.v.im], tau: [p.tau.re, p.tau.im], residual: r });
    }
    let pass = out.iter().all(|s| s.residual < tol);
    Ok(NumericCheckReport { law, samples: out, tolerance: tol, pass })
}

/// Deterministic points with `|Re v| ≤ 0.5`, `0 ≤ Im v ≤ 0.5`, `|Re τ| ≤ 0.5`,
/// `0.5 ≤ Im τ ≤ 2`.
pub fn sample_points(count: usize, seed: u64) -> Vec<ComplexPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let v = Complex64::new(rng.gen_range(-0.5..=0.5), rng.gen_range(0.0..=0.5));
            let tau = Complex64::new(rng.gen_range(-0.5..=0.5), rng.gen_range(0.5..=2.0));
            ComplexPoint::new(v, tau).expect("upper half plane")
        })
        .collect()
}
