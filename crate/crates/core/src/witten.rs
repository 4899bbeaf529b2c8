//! Chern characters of virtual bundles and the q-series bundles `Θ₁`, `Θ₂`
//! built from symmetric and exterior powers of the reduced complexified
//! vertical tangent bundle.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::chroot::{sum_over_roots, GradedClass, RootProfile, RootSeries};
use crate::error::{Error, Result};
use crate::genera::root_series_len;
use crate::qseries::{HalfExp, HalfQSeries};
use crate::rational::{display_rational, int, signed_sum, Rational};

/// A virtual bundle through its Chern character: integer rank plus a form part
/// with vanishing degree-0 component.
#[derive(Clone, PartialEq)]
pub struct CharacterElement {
    rank: i64,
    form: GradedClass,
    label: Option<String>,
}

impl fmt::Debug for CharacterElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.label {
            write!(f, "{l}: ")?;
        }
        write!(f, "rank {} + [{}]", self.rank, self.form)
    }
}

impl CharacterElement {
    /// Splits a full character into rank and form part.
    pub fn from_character(ch: &GradedClass) -> Result<Self> {
        let c0 = ch.constant_term();
        if !c0.is_integer() {
            return Err(Error::NonIntegralRank(display_rational(&c0)));
        }
        let rank = c0.to_integer().to_i64().ok_or_else(|| Error::NonIntegralRank(display_rational(&c0)))?;
        let form = ch.sub(&GradedClass::scalar(ch.profile(), c0)).expect("same ring");
        Ok(CharacterElement { rank, form, label: None })
    }

    /// `C^n`.
    pub fn trivial(profile: RootProfile, n: i64) -> Self {
        CharacterElement { rank: n, form: GradedClass::zero(profile), label: Some("C".into()) }
    }

    /// `T_C Z`.
    pub fn tangent(profile: RootProfile) -> Self {
        let len = root_series_len(profile);
        let ch = sum_over_roots(&RootSeries::exp_scaled(&int(1), len), profile).expect("long enough");
        let mut e = Self::from_character(&ch).expect("integral rank");
        e.label = Some("T_C Z".into());
        e
    }

    /// `T_C Z - dim Z`.
    pub fn reduced_tangent(profile: RootProfile) -> Self {
        let mut e = Self::tangent(profile);
        e.rank = 0;
        e.label = Some("~T_C Z".into());
        e
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn form_part(&self) -> &GradedClass {
        &self.form
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn profile(&self) -> RootProfile {
        self.form.profile()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// The full character `rank + form`.
    pub fn character(&self) -> GradedClass {
        self.form.add(&GradedClass::scalar(self.profile(), int(self.rank))).expect("same ring")
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(CharacterElement { rank: self.rank + other.rank, form: self.form.add(&other.form)?, label: None })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, n: i64) -> Self {
        CharacterElement { rank: self.rank * n, form: self.form.scale(&int(n)), label: None }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::from_character(&self.character().mul(&other.character())?)
    }

    /// `ψ^k`.
    pub fn adams(&self, k: u32) -> Self {
        CharacterElement { rank: self.rank, form: self.form.adams(k), label: None }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.form.is_zero()
    }

    /// `(α, β)` with `ch(self) = α·ch(T_C Z) + β`, if the form part is a
    /// multiple of the tangent's. A one-dimensional fiber gives `α = 0`.
    pub fn in_tangent_basis(&self) -> Option<(Rational, Rational)> {
        let profile = self.profile();
        let tangent = CharacterElement::tangent(profile);
        let alpha = match tangent.form.terms().next() {
            None => Rational::zero(),
            Some((mono, c)) => self.form.coefficient(mono) / c,
        };
        if !self.form.sub(&tangent.form.scale(&alpha)).ok()?.is_zero() {
            return None;
        }
        let beta = int(self.rank) - &alpha * int(i64::from(profile.fiber_dim()));
        Some((alpha, beta))
    }

    /// `T_C Z + 62·C` style rendering when possible, otherwise rank and form.
    pub fn describe(&self) -> String {
        let Some((alpha, beta)) = self.in_tangent_basis() else {
            return self.to_string();
        };
        signed_sum([(&alpha, "T_C Z".to_string()), (&beta, "C".to_string())], "·")
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("rank".into(), json!(self.rank));
        if let Some(l) = &self.label {
            m.insert("label".into(), json!(l));
        }
        m.insert("form".into(), self.form.to_json_value());
        Value::Object(m)
    }

    pub fn from_json(profile: RootProfile, value: &Value) -> Result<Self> {
        let rank = value
            .get("rank")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Parse("character element without integer rank".into()))?;
        let form = GradedClass::from_json_value(
            profile,
            value.get("form").ok_or_else(|| Error::Parse("character element without form".into()))?,
        )?;
        if !form.constant_term().is_zero() {
            return Err(Error::Parse("form part has a degree-0 component".into()));
        }
        let label = value.get("label").and_then(Value::as_str).map(str::to_owned);
        Ok(CharacterElement { rank, form, label })
    }
}

impl fmt::Display for CharacterElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rank = int(self.rank);
        let terms = std::iter::once((&rank, "C".to_string())).chain(self.form.terms().map(|(m, c)| (c, m.to_string())));
        f.write_str(&signed_sum(terms, "·"))
    }
}

/// The formal parameter `t = ±q^{exp2/2}` of `Λ_t` and `S_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TMonomial {
    negative: bool,
    exp2: u32,
}

impl TMonomial {
    pub fn new(negative: bool, exp2: u32) -> Result<Self> {
        if exp2 == 0 {
            return Err(Error::InvalidArgument("t must carry a positive power of q".into()));
        }
        Ok(TMonomial { negative, exp2 })
    }

    /// `q^{exp2/2}`.
    pub fn q(exp2: u32) -> Result<Self> {
        Self::new(false, exp2)
    }

    /// `-q^{exp2/2}`.
    pub fn minus_q(exp2: u32) -> Result<Self> {
        Self::new(true, exp2)
    }

    pub fn negated(self) -> Self {
        TMonomial { negative: !self.negative, exp2: self.exp2 }
    }

    fn sign_pow(self, k: u32) -> i64 {
        if self.negative && k % 2 == 1 {
            -1
        } else {
            1
        }
    }
}

/// Accumulates `Σ_k c_k t^k ψ^k(ch E)` into a log-series.
fn add_adams_log(
    acc: &mut BTreeMap<u32, GradedClass>,
    e: &CharacterElement,
    t: TMonomial,
    q_order: u32,
    coef: impl Fn(u32) -> Rational,
) {
    let mut k = 1;
    while k * t.exp2 < q_order {
        let c = coef(k) * int(t.sign_pow(k));
        let term = e.adams(k).character().scale(&c);
        let slot = acc.entry(k * t.exp2).or_insert_with(|| GradedClass::zero(e.profile()));
        *slot = slot.add(&term).expect("same ring");
        k += 1;
    }
}

fn exp_of_log(profile: RootProfile, q_order: u32, acc: BTreeMap<u32, GradedClass>) -> HalfQSeries<GradedClass> {
    HalfQSeries::from_terms(profile, q_order, acc).exp().expect("log-series has no constant term")
}

fn inv_k(k: u32) -> Rational {
    Rational::new(1.into(), BigInt::from(k))
}

/// `ch Λ_t(E) = Π (1 + t e^ω)`, through `log = Σ (-1)^{k+1} t^k ψ^k(ch E) / k`.
/// Virtual and reduced bundles are handled by the same formula.
pub fn lambda_t_character(e: &CharacterElement, t: TMonomial, q_order: u32) -> HalfQSeries<GradedClass> {
    let mut acc = BTreeMap::new();
    add_adams_log(&mut acc, e, t, q_order, |k| if k % 2 == 1 { inv_k(k) } else { -inv_k(k) });
    exp_of_log(e.profile(), q_order, acc)
}

/// `ch S_t(E) = Π 1/(1 - t e^ω)`, through `log = Σ t^k ψ^k(ch E) / k`.
pub fn s_t_character(e: &CharacterElement, t: TMonomial, q_order: u32) -> HalfQSeries<GradedClass> {
    let mut acc = BTreeMap::new();
    add_adams_log(&mut acc, e, t, q_order, inv_k);
    exp_of_log(e.profile(), q_order, acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaBundleKind {
    Theta1,
    Theta2,
}

impl ThetaBundleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ThetaBundleKind::Theta1 => "theta1",
            ThetaBundleKind::Theta2 => "theta2",
        }
    }

    fn coefficient_letter(self) -> char {
        match self {
            ThetaBundleKind::Theta1 => 'A',
            ThetaBundleKind::Theta2 => 'B',
        }
    }
}

impl FromStr for ThetaBundleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta1" | "1" => Ok(ThetaBundleKind::Theta1),
            "theta2" | "2" => Ok(ThetaBundleKind::Theta2),
            other => Err(Error::Parse(format!("unknown theta bundle {other:?}"))),
        }
    }
}

/// `ch Θ₁` or `ch Θ₂` as a series with full-character coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaBundleSeries {
    kind: ThetaBundleKind,
    series: HalfQSeries<GradedClass>,
}

impl ThetaBundleSeries {
    pub fn kind(&self) -> ThetaBundleKind {
        self.kind
    }

    pub fn profile(&self) -> RootProfile {
        *self.series.ring_id()
    }

    pub fn series(&self) -> &HalfQSeries<GradedClass> {
        &self.series
    }

    pub fn order2(&self) -> u32 {
        self.series.order2()
    }

    pub fn truncate(&self, q_order: u32) -> Self {
        ThetaBundleSeries { kind: self.kind, series: self.series.truncate(q_order) }
    }

    /// `A_j` or `B_j`, the coefficient of `q^{j/2}`.
    pub fn extract_fourier(&self, j: HalfExp) -> Result<CharacterElement> {
        let ch = self.series.coefficient(j)?;
        Ok(CharacterElement::from_character(&ch)?.with_label(format!(
            "{}_{}",
            self.kind.coefficient_letter(),
            j.twice_value()
        )))
    }

    pub fn to_json(&self) -> Value {
        let p = self.profile();
        json!({
            "kind": self.kind.as_str(),
            "fiber_dim": p.fiber_dim(),
            "max_form_degree": p.max_form_degree(),
            "order": self.order2(),
            "terms": self.series.to_json(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let field = |k: &str| value.get(k).ok_or_else(|| Error::Parse(format!("theta bundle record without {k:?}")));
        let kind: ThetaBundleKind =
            field("kind")?.as_str().ok_or_else(|| Error::Parse("kind must be a string".into()))?.parse()?;
        let as_u32 = |k: &str| -> Result<u32> {
            field(k)?
                .as_u64()
                .map(|v| v as u32)
                .ok_or_else(|| Error::Parse(format!("{k} must be a non-negative integer")))
        };
        let profile = RootProfile::new(as_u32("fiber_dim")?, as_u32("max_form_degree")?)?;
        let series = HalfQSeries::from_json(profile, as_u32("order")?, field("terms")?)?;
        Ok(ThetaBundleSeries { kind, series })
    }
}

/// `Θ₁ = ⊗ S_{q^n}(T̃) ⊗ Λ_{q^n}(T̃)`, `Θ₂ = ⊗ S_{q^n}(T̃) ⊗ Λ_{-q^{n-1/2}}(T̃)`,
/// with `T̃ = T_C Z - dim Z`, truncated below `q^{q_order/2}`.
pub fn build_theta_bundle(kind: ThetaBundleKind, profile: RootProfile, q_order: u32) -> ThetaBundleSeries {
    let reduced = CharacterElement::reduced_tangent(profile);
    let mut acc = BTreeMap::new();
    let mut n = 1;
    while 2 * n < q_order {
        let t = TMonomial::q(2 * n).expect("positive");
        add_adams_log(&mut acc, &reduced, t, q_order, inv_k);
        if kind == ThetaBundleKind::Theta1 {
            add_adams_log(&mut acc, &reduced, t, q_order, |k| if k % 2 == 1 { inv_k(k) } else { -inv_k(k) });
        }
        n += 1;
    }
    if kind == ThetaBundleKind::Theta2 {
        let mut n = 1;
        while 2 * n - 1 < q_order {
            let t = TMonomial::minus_q(2 * n - 1).expect("positive");
            add_adams_log(&mut acc, &reduced, t, q_order, |k| if k % 2 == 1 { inv_k(k) } else { -inv_k(k) });
            n += 1;
        }
    }
    ThetaBundleSeries { kind, series: exp_of_log(profile, q_order, acc) }
}

/// Provider of `Θ` expansions, so callers can substitute a cache.
pub trait ThetaSource: Sync {
    fn theta_bundle(&self, kind: ThetaBundleKind, profile: RootProfile, q_order: u32) -> Result<ThetaBundleSeries>;
}

/// Computes every expansion from scratch.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectBuild;

impl ThetaSource for DirectBuild {
    fn theta_bundle(&self, kind: ThetaBundleKind, profile: RootProfile, q_order: u32) -> Result<ThetaBundleSeries> {
        Ok(build_theta_bundle(kind, profile, q_order))
    }
}
