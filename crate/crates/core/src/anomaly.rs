//! Builds the forms `P₁, P₂, Q₁, Q₂` and certifies the identities they satisfy:
//! the series-level decomposition, the constant-term identity between the
//! L-class and the twisted Â-classes, the low-dimensional cancellation
//! formulas, and the coefficient vectors that follow from them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chroot::{from_power_sums, GradedClass, RootProfile, RootSeries};
use crate::error::{Error, Result};
use crate::genera::{a_hat, a_hat_series, l_class, root_series_len, LVariant};
use crate::modforms::{decompose_theta2_series, modular_basis, DecompositionCase, Theta2Decomposition};
use crate::qseries::HalfQSeries;
use crate::rational::{format_rational, int, log2_exact, pow2, rat, Rational};
use crate::witten::{CharacterElement, ThetaBundleKind, ThetaSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormKind {
    P1,
    P2,
    Q1,
    Q2,
}

impl FormKind {
    pub fn case(self) -> DecompositionCase {
        match self {
            FormKind::P1 | FormKind::P2 => DecompositionCase::B,
            FormKind::Q1 | FormKind::Q2 => DecompositionCase::Z,
        }
    }

    /// `P₁`/`Q₁` pair the L-class with `Θ₁`; `P₂`/`Q₂` pair Â with `Θ₂`.
    pub fn is_first(self) -> bool {
        matches!(self, FormKind::P1 | FormKind::Q1)
    }

    pub fn theta_kind(self) -> ThetaBundleKind {
        if self.is_first() {
            ThetaBundleKind::Theta1
        } else {
            ThetaBundleKind::Theta2
        }
    }

    pub fn second_of(case: DecompositionCase) -> Self {
        match case {
            DecompositionCase::B => FormKind::P2,
            DecompositionCase::Z => FormKind::Q2,
        }
    }

    pub fn first_of(case: DecompositionCase) -> Self {
        match case {
            DecompositionCase::B => FormKind::P1,
            DecompositionCase::Z => FormKind::Q1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FormKind::P1 => "P1",
            FormKind::P2 => "P2",
            FormKind::Q1 => "Q1",
            FormKind::Q2 => "Q2",
        }
    }
}

impl FromStr for FormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P1" => Ok(FormKind::P1),
            "P2" => Ok(FormKind::P2),
            "Q1" => Ok(FormKind::Q1),
            "Q2" => Ok(FormKind::Q2),
            _ => Err(Error::Parse(format!("unknown form {s:?} (P1, P2, Q1, Q2)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Characteristic class times the Chern character of `Θ`.
    Ktheory,
    /// Product over roots of theta-function quotients.
    ThetaProduct,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Ktheory => "ktheory",
            Route::ThetaProduct => "theta_product",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "degenerate-zero")]
    DegenerateZero,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::DegenerateZero => "degenerate-zero",
        }
    }

    pub fn is_ok(self, allow_degenerate: bool) -> bool {
        match self {
            Status::Pass => true,
            Status::Fail => false,
            Status::DegenerateZero => allow_degenerate,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A nonzero leftover coefficient, optionally at a `q^{exp2/2}` position.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub exp2: Option<u32>,
    pub monomial: Vec<u32>,
    pub coef: Rational,
}

impl Residual {
    pub fn to_json(&self) -> Value {
        let mut v = json!({ "monomial": self.monomial, "coef": format_rational(&self.coef) });
        if let Some(e) = self.exp2 {
            v["exp2"] = json!(e);
        }
        v
    }
}

fn class_residuals(g: &GradedClass, exp2: Option<u32>) -> Vec<Residual> {
    g.terms().map(|(m, c)| Residual { exp2, monomial: m.exponents().to_vec(), coef: c.clone() }).collect()
}

fn series_residuals(s: &HalfQSeries<GradedClass>) -> Vec<Residual> {
    s.terms().flat_map(|(e, g)| class_residuals(g, Some(e.twice_value()))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity: String,
    pub fiber_dim: u32,
    pub m: u32,
    pub l_variant: Option<LVariant>,
    pub route: Option<Route>,
    pub lhs: Value,
    pub rhs: Value,
    pub lambda: Option<Rational>,
    pub paper_ratio: Option<Rational>,
    pub residuals: Vec<Residual>,
    pub status: Status,
}

impl IdentityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "identity": self.identity,
            "fiber_dim": self.fiber_dim,
            "m": self.m,
            "l_variant": self.l_variant.map(LVariant::as_str),
            "route": self.route.map(Route::as_str),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "lambda": self.lambda.as_ref().map(format_rational),
            "paper_ratio": self.paper_ratio.as_ref().map(format_rational),
            "residuals": self.residuals.iter().map(Residual::to_json).collect::<Vec<_>>(),
            "status": self.status.as_str(),
        })
    }
}

fn status_from(residuals: &[Residual], degenerate: bool) -> Status {
    if !residuals.is_empty() {
        Status::Fail
    } else if degenerate {
        Status::DegenerateZero
    } else {
        Status::Pass
    }
}

/// Series order used for the `P`/`Q` forms when none is given: through `q^{m+2}`.
pub fn default_q_order(m: u32) -> u32 {
    2 * m + 5
}

/// Profile truncated at the form degree of `kind`, after checking the dimension class.
pub fn form_profile(kind: FormKind, m: u32, fiber_dim: u32) -> Result<RootProfile> {
    let case = DecompositionCase::classify(m, fiber_dim)?;
    if case != kind.case() {
        return Err(Error::FiberDimMismatch {
            fiber_dim,
            m,
            reason: format!("{} needs the {} dimension class", kind.as_str(), kind.case().letter()),
        });
    }
    RootProfile::new(fiber_dim, case.form_degree(m))
}

fn degree_of(profile: RootProfile) -> u32 {
    profile.max_form_degree()
}

/// `{L · ch Θ₁}^{(D)}` or `{Â · ch Θ₂}^{(D)}` coefficientwise.
fn ktheory_form(
    kind: FormKind,
    profile: RootProfile,
    l_variant: LVariant,
    q_order: u32,
    source: &dyn ThetaSource,
) -> Result<HalfQSeries<GradedClass>> {
    let genus = if kind.is_first() { l_class(profile, l_variant) } else { a_hat(profile) };
    let theta = source.theta_bundle(kind.theta_kind(), profile, q_order)?;
    let d = degree_of(profile);
    Ok(theta.series().map(|c| genus.mul(c).expect("same profile").degree_component(d).expect("within truncation")))
}

/// Per-root factor `G(x)` of the theta-product formula as a q-series with
/// root-series coefficients, before any rescaling of `x`.
fn theta_quotient_series(first: bool, len: usize, q_order: u32) -> Result<HalfQSeries<RootSeries>> {
    let one = RootSeries::one(len);
    let e_plus = RootSeries::exp_scaled(&int(1), len);
    let e_minus = RootSeries::exp_scaled(&int(-1), len);
    let mut lead = a_hat_series(len);
    if first {
        lead = lead.mul(&RootSeries::cosh_scaled(&rat(1, 2), len));
    }
    let mut f = HalfQSeries::constant(len, lead, q_order);
    // 1 + sign·(root factor)·q^{exp2/2}
    let binomial = |exp2: u32, c: &RootSeries, negative: bool| {
        let c = if negative { c.scale(&int(-1)) } else { c.clone() };
        HalfQSeries::from_terms(len, q_order, [(0, one.clone()), (exp2, c)])
    };
    let mut j = 1;
    while 2 * j < q_order {
        let e = 2 * j;
        let num = binomial(e, &one, true).pow(2);
        let den = binomial(e, &e_plus, true).mul(&binomial(e, &e_minus, true))?;
        f = f.mul(&num)?.mul(&den.inv()?)?;
        if first {
            let num = binomial(e, &e_plus, false).mul(&binomial(e, &e_minus, false))?;
            let den = binomial(e, &one, false).pow(2);
            f = f.mul(&num)?.mul(&den.inv()?)?;
        }
        j += 1;
    }
    if !first {
        let mut j = 1;
        while 2 * j - 1 < q_order {
            let e = 2 * j - 1;
            let num = binomial(e, &e_plus, true).mul(&binomial(e, &e_minus, true))?;
            let den = binomial(e, &one, true).pow(2);
            f = f.mul(&num)?.mul(&den.inv()?)?;
            j += 1;
        }
    }
    Ok(f)
}

/// `{Π_j G(σ x_j)}^{(D)}` with `σ = 2` for `P₁`/`Q₁` and `σ = 1` for `P₂`/`Q₂`,
/// before calibration.
pub fn theta_product_form(kind: FormKind, profile: RootProfile, q_order: u32) -> Result<HalfQSeries<GradedClass>> {
    let len = root_series_len(profile);
    let sigma = if kind.is_first() { int(2) } else { int(1) };
    let per_root = theta_quotient_series(kind.is_first(), len, q_order)?.map(|c| c.rescale_argument(&sigma));
    let log = per_root.log()?;
    let mut acc: BTreeMap<u32, GradedClass> = BTreeMap::new();
    for (e, l) in log.terms() {
        if let Some(degree) = l.first_odd_term() {
            return Err(Error::NotEven { degree });
        }
        let coeffs: Vec<Rational> = (0..=profile.max_weight()).map(|k| l.coeff(2 * k)).collect();
        let pairs = int(profile.n_pairs() as i64);
        let g = from_power_sums(profile, &coeffs).add(&GradedClass::scalar(profile, &coeffs[0] * pairs))?;
        acc.insert(e.twice_value(), g);
    }
    let d = degree_of(profile);
    Ok(HalfQSeries::from_terms(profile, q_order, acc).exp()?.map(|c| c.degree_component(d).expect("within truncation")))
}

/// Rational `κ` with `target = κ · raw` on every monomial, if one exists.
/// Both zero gives `κ = 1`.
pub fn proportionality(target: &GradedClass, raw: &GradedClass) -> Option<Rational> {
    let lead = raw.terms().next();
    let kappa = match lead {
        Some((m, c)) => target.coefficient(m) / c,
        None => return target.is_zero().then(Rational::one),
    };
    (target.sub(&raw.scale(&kappa)).ok()?.is_zero()).then_some(kappa)
}

/// A form along with the calibration constant applied to it (1 for the k-theory route).
#[derive(Debug, Clone, PartialEq)]
pub struct FormSeries {
    pub series: HalfQSeries<GradedClass>,
    pub calibration: Rational,
}

/// `P₁, P₂, Q₁` or `Q₂` along the chosen route. The theta-product route is
/// scaled by the constant that makes its `q⁰` term equal to the k-theory route's.
pub fn p_form(
    kind: FormKind,
    m: u32,
    fiber_dim: u32,
    route: Route,
    l_variant: LVariant,
    q_order: u32,
    source: &dyn ThetaSource,
) -> Result<FormSeries> {
    let profile = form_profile(kind, m, fiber_dim)?;
    match route {
        Route::Ktheory => Ok(FormSeries {
            series: ktheory_form(kind, profile, l_variant, q_order, source)?,
            calibration: Rational::one(),
        }),
        Route::ThetaProduct => {
            let raw = theta_product_form(kind, profile, q_order)?;
            let reference = ktheory_form(kind, profile, l_variant, 1, source)?;
            let zero = GradedClass::zero(profile);
            let target = reference.terms().next().map(|(_, c)| c.clone()).unwrap_or(zero.clone());
            let raw0 = raw.terms().find(|(e, _)| e.twice_value() == 0).map(|(_, c)| c.clone()).unwrap_or(zero);
            let kappa = proportionality(&target, &raw0).ok_or_else(|| {
                Error::InvalidArgument("constant terms of the two routes are not proportional".into())
            })?;
            Ok(FormSeries { series: raw.scale(&kappa), calibration: kappa })
        }
    }
}

/// `h_r = {Â · ch(b_r)}^{(D)}` (or with `z_r`).
pub fn twisted_a_hat(profile: RootProfile, dec: &Theta2Decomposition) -> Vec<GradedClass> {
    let a = a_hat(profile);
    let d = degree_of(profile);
    dec.elements
        .iter()
        .map(|b| a.mul(&b.character()).expect("same profile").degree_component(d).expect("within truncation"))
        .collect()
}

fn decomposition(m: u32, profile: RootProfile, q_order: u32, source: &dyn ThetaSource) -> Result<Theta2Decomposition> {
    let theta2 = source.theta_bundle(ThetaBundleKind::Theta2, profile, q_order.max(m + 1))?;
    decompose_theta2_series(m, &theta2)
}

/// `P₂ = Σ_r h_r (8δ₂)^{2m+1-2r} ε₂^r` (or `Q₂` with `z_r`) over the whole
/// computed truncation, not only the window that defines `b_r`.
pub fn verify_decomposition_identity(
    m: u32,
    fiber_dim: u32,
    q_order: u32,
    source: &dyn ThetaSource,
) -> Result<IdentityReport> {
    let case = DecompositionCase::classify(m, fiber_dim)?;
    let kind = FormKind::second_of(case);
    let profile = form_profile(kind, m, fiber_dim)?;
    let p2 = ktheory_form(kind, profile, LVariant::FullAngle, q_order, source)?;
    let dec = decomposition(m, profile, q_order, source)?;
    let h = twisted_a_hat(profile, &dec);
    let basis = modular_basis(case.weight(m), q_order)?;
    let mut recon = HalfQSeries::zero(profile, q_order);
    for (g, hr) in basis.iter().zip(&h) {
        recon = recon.add(&g.lift(&profile).scale_by(hr)?)?;
    }
    let residuals = series_residuals(&p2.sub(&recon)?);
    let degenerate = p2.is_zero() && recon.is_zero();
    Ok(IdentityReport {
        identity: "decomposition".into(),
        fiber_dim,
        m,
        l_variant: None,
        route: Some(Route::Ktheory),
        lhs: p2.to_json(),
        rhs: recon.to_json(),
        lambda: None,
        paper_ratio: None,
        status: status_from(&residuals, degenerate),
        residuals,
    })
}

/// Normalization of the stated identity: `8·2^{6m}` for the `b` case, `2^{6m}` for `z`.
pub fn reference_constant(case: DecompositionCase, m: u32) -> Rational {
    let base = pow2(6 * i64::from(m));
    match case {
        DecompositionCase::B => base * int(8),
        DecompositionCase::Z => base,
    }
}

/// `{L}^{(D)} = λ Σ_r 2^{-6r} h_r`: measures `λ` and checks that one scalar fits
/// every monomial.
pub fn verify_main_identity(
    m: u32,
    fiber_dim: u32,
    l_variant: LVariant,
    source: &dyn ThetaSource,
) -> Result<IdentityReport> {
    let case = DecompositionCase::classify(m, fiber_dim)?;
    let profile = RootProfile::new(fiber_dim, case.form_degree(m))?;
    let lhs = l_class(profile, l_variant).degree_component(case.form_degree(m))?;
    let dec = decomposition(m, profile, m + 1, source)?;
    let mut rhs = GradedClass::zero(profile);
    for (r, hr) in twisted_a_hat(profile, &dec).iter().enumerate() {
        rhs = rhs.add(&hr.scale(&pow2(-6 * r as i64)))?;
    }
    let (lambda, residuals, degenerate) = match rhs.terms().next() {
        Some((mono, c)) => {
            let lambda = lhs.coefficient(mono) / c;
            let res = lhs.sub(&rhs.scale(&lambda))?;
            (Some(lambda), class_residuals(&res, None), false)
        }
        None => (None, class_residuals(&lhs, None), lhs.is_zero()),
    };
    let paper_ratio = lambda.as_ref().map(|l| l / reference_constant(case, m));
    Ok(IdentityReport {
        identity: "main".into(),
        fiber_dim,
        m,
        l_variant: Some(l_variant),
        route: Some(Route::Ktheory),
        lhs: lhs.to_json_value(),
        rhs: rhs.to_json_value(),
        lambda,
        paper_ratio,
        status: status_from(&residuals, degenerate),
        residuals,
    })
}

/// Predicted `λ(half) / λ(full)` for a degree-`D` identity: `2^{n_pairs + z - D/2}`
/// with `z = 1` for an odd fiber.
pub fn variant_ratio(profile: RootProfile, degree: u32) -> Rational {
    let z = i64::from(profile.has_zero_root());
    pow2(profile.n_pairs() as i64 + z - i64::from(degree / 2))
}

/// Dimensions with a low-dimensional cancellation formula.
pub const AGW_DIMENSIONS: [u32; 3] = [2, 6, 10];

/// The cancellation formulas in dimensions 2, 6, 10 with
/// `I_{1/2} = {Â}^{(d+2)}`, `I_{3/2} = {Â(ch T_C Z - 1)}^{(d+2)}`,
/// `I_A = -{L}^{(d+2)}/8`.
pub fn verify_agw(dim: u32, l_variant: LVariant) -> Result<IdentityReport> {
    let (c_half, c_three_half, c_a) = match dim {
        2 => (-1, 0, 1),
        6 => (21, -1, 8),
        10 => (-1, 1, 1),
        other => return Err(Error::UnsupportedDimension(other)),
    };
    let profile = RootProfile::new(dim, dim + 2)?;
    let d = dim + 2;
    let a = a_hat(profile);
    let i_half = a.degree_component(d)?;
    let twist = CharacterElement::tangent(profile).character().sub(&GradedClass::one(profile))?;
    let i_three_half = a.mul(&twist)?.degree_component(d)?;
    let i_a = l_class(profile, l_variant).degree_component(d)?.scale(&rat(-1, 8));
    let combo = i_half.scale(&int(c_half)).add(&i_three_half.scale(&int(c_three_half)))?.add(&i_a.scale(&int(c_a)))?;
    let residuals = class_residuals(&combo, None);
    let m = DecompositionCase::for_dimension(dim).first().map(|(m, _)| *m).unwrap_or(0);
    Ok(IdentityReport {
        identity: "agw".into(),
        fiber_dim: dim,
        m,
        l_variant: Some(l_variant),
        route: None,
        lhs: json!({
            "i_half": i_half.to_json_value(),
            "i_three_half": i_three_half.to_json_value(),
            "i_a": i_a.to_json_value(),
            "coefficients": [c_half, c_three_half, c_a],
        }),
        rhs: json!([]),
        lambda: None,
        paper_ratio: None,
        status: status_from(&residuals, false),
        residuals,
    })
}

/// Signature-operator coefficient, `T_C Z`-twist coefficient and trivial-twist
/// coefficient of a cancellation formula.
#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryVector {
    pub fiber_dim: u32,
    pub m: u32,
    pub case: DecompositionCase,
    pub coefficients: [Rational; 3],
}

impl CorollaryVector {
    pub fn to_json(&self) -> Value {
        json!({
            "fiber_dim": self.fiber_dim,
            "m": self.m,
            "case": self.case.letter().to_string(),
            "coefficients": self.coefficients.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

/// Fiber dimensions with a published coefficient vector.
pub const COROLLARY_DIMENSIONS: [u32; 9] = [1, 2, 3, 5, 6, 7, 9, 10, 11];

/// Expected `(signature, T_C Z, trivial)` coefficients.
pub fn expected_corollary(fiber_dim: u32) -> Option<[i64; 3]> {
    Some(match fiber_dim {
        1..=3 => [1, 0, 8],
        5 => [1, 1, -21],
        6 => [1, 1, -22],
        7 => [1, 1, -23],
        9 => [1, -8, 8],
        10 => [1, -8, 16],
        11 => [1, -8, 24],
        _ => return None,
    })
}

/// Writes `c · Σ_r 2^{-6r} ch(b_r)` as `α ch(T_C Z) + β` and returns `(1, -α, -β)`.
pub fn corollary_coefficients(fiber_dim: u32, source: &dyn ThetaSource) -> Result<CorollaryVector> {
    if !COROLLARY_DIMENSIONS.contains(&fiber_dim) {
        return Err(Error::UnsupportedDimension(fiber_dim));
    }
    let (m, case) = DecompositionCase::for_dimension(fiber_dim)[0];
    let profile = RootProfile::new(fiber_dim, case.form_degree(m).max(4))?;
    let dec = decomposition(m, profile, m + 1, source)?;
    let constant = reference_constant(case, m);
    let mut combo = CharacterElement::trivial(profile, 0);
    for (r, b) in dec.elements.iter().enumerate() {
        let c = &constant * pow2(-6 * r as i64);
        if !c.is_integer() {
            return Err(Error::InvalidArgument(format!("non-integral weight {c} for r = {r}")));
        }
        let n: i64 = c.to_integer().try_into().map_err(|_| Error::InvalidArgument("weight overflow".into()))?;
        combo = combo.add(&b.scale(n))?;
    }
    let (alpha, beta) = combo
        .in_tangent_basis()
        .ok_or_else(|| Error::InvalidArgument("combination is not of the form a·T_C Z + b".into()))?;
    Ok(CorollaryVector { fiber_dim, m, case, coefficients: [Rational::one(), -alpha, -beta] })
}

/// Compares [`corollary_coefficients`] with the expected integer vector.
pub fn verify_corollary(fiber_dim: u32, source: &dyn ThetaSource) -> Result<IdentityReport> {
    let got = corollary_coefficients(fiber_dim, source)?;
    let expected = expected_corollary(fiber_dim).ok_or(Error::UnsupportedDimension(fiber_dim))?;
    let residuals: Vec<Residual> = got
        .coefficients
        .iter()
        .zip(expected)
        .enumerate()
        .filter(|(_, (g, e))| **g != int(*e))
        .map(|(i, (g, e))| {
            let mut monomial = vec![0; 3];
            monomial[i] = 1;
            Residual { exp2: None, monomial, coef: g - int(e) }
        })
        .collect();
    Ok(IdentityReport {
        identity: "corollary".into(),
        fiber_dim,
        m: got.m,
        l_variant: None,
        route: None,
        lhs: got.to_json(),
        rhs: json!(expected),
        lambda: None,
        paper_ratio: None,
        status: status_from(&residuals, false),
        residuals,
    })
}

/// k-theory route against the calibrated theta-product route, as series.
pub fn verify_route_equivalence(
    kind: FormKind,
    m: u32,
    fiber_dim: u32,
    q_order: u32,
    l_variant: LVariant,
    source: &dyn ThetaSource,
) -> Result<IdentityReport> {
    let kt = p_form(kind, m, fiber_dim, Route::Ktheory, l_variant, q_order, source)?.series;
    let profile = form_profile(kind, m, fiber_dim)?;
    let raw = theta_product_form(kind, profile, q_order)?;
    let zero = GradedClass::zero(profile);
    let kt0 = kt.terms().find(|(e, _)| e.twice_value() == 0).map(|(_, c)| c.clone()).unwrap_or(zero.clone());
    let raw0 = raw.terms().find(|(e, _)| e.twice_value() == 0).map(|(_, c)| c.clone()).unwrap_or(zero);
    let (lambda, residuals) = match proportionality(&kt0, &raw0) {
        Some(kappa) => {
            let diff = kt.sub(&raw.scale(&kappa))?;
            (Some(kappa), series_residuals(&diff))
        }
        None => (None, series_residuals(&kt.sub(&raw)?)),
    };
    let degenerate = kt.is_zero() && raw.is_zero();
    let identity = format!("route-{}", kind.as_str().to_ascii_lowercase());
    Ok(IdentityReport {
        identity,
        fiber_dim,
        m,
        l_variant: kind.is_first().then_some(l_variant),
        route: Some(Route::ThetaProduct),
        lhs: kt.to_json(),
        rhs: raw.to_json(),
        lambda,
        paper_ratio: None,
        status: status_from(&residuals, degenerate),
        residuals,
    })
}

/// `(m, fiber_dim)` for `m ≤ 2` in the `b` classes and `m ∈ {1, 2}` in the `z` classes.
pub fn standard_cases() -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for m in 0..=2 {
        for d in 8 * m + 1..=8 * m + 3 {
            out.push((m, d));
        }
    }
    for m in 1..=2 {
        for d in 8 * m - 3..=8 * m - 1 {
            out.push((m, d));
        }
    }
    out.sort_by_key(|&(m, d)| (d, m));
    out
}

/// Whether a measured ratio is a (signed-exponent) power of two.
pub fn is_power_of_two(r: &Rational) -> bool {
    log2_exact(r).is_some()
}
