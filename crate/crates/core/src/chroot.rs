//! Truncated graded ring of characteristic forms of the vertical tangent bundle.
//!
//! Classes are modeled on formal Chern roots `±x_1, …, ±x_n` (plus a zero root for
//! odd fiber dimension) and exposed in the Pontryagin basis `p_i = e_i(x_1², …, x_n²)`.
//! Products and sums over roots are computed through even power sums and Newton's
//! identities, never by expanding monomials in the roots.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qseries::{Coefficient, DisplayCoefficient};
use crate::rational::{display_rational, factorial, format_rational, int, parse_rational, signed_sum, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootProfile {
    fiber_dim: u32,
    max_form_degree: u32,
}

impl RootProfile {
    pub fn new(fiber_dim: u32, max_form_degree: u32) -> Result<Self> {
        if fiber_dim == 0 {
            return Err(Error::InvalidProfile("fiber dimension must be positive".into()));
        }
        if !max_form_degree.is_multiple_of(2) {
            return Err(Error::OddDegree(max_form_degree));
        }
        Ok(RootProfile { fiber_dim, max_form_degree })
    }

    pub fn fiber_dim(&self) -> u32 {
        self.fiber_dim
    }

    pub fn n_pairs(&self) -> usize {
        (self.fiber_dim / 2) as usize
    }

    pub fn has_zero_root(&self) -> bool {
        self.fiber_dim % 2 == 1
    }

    pub fn max_form_degree(&self) -> u32 {
        self.max_form_degree
    }

    /// Largest Pontryagin weight `Σ i·a_i` kept, i.e. `max_form_degree / 4`.
    pub fn max_weight(&self) -> usize {
        (self.max_form_degree / 4) as usize
    }

    /// Number of complex roots counted by products over all roots.
    fn root_count(&self, include_zero: bool) -> usize {
        self.n_pairs() + usize::from(include_zero && self.has_zero_root())
    }

    pub fn with_max_form_degree(&self, max_form_degree: u32) -> Result<Self> {
        Self::new(self.fiber_dim, max_form_degree)
    }
}

impl fmt::Display for RootProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dim {} (deg ≤ {})", self.fiber_dim, self.max_form_degree)
    }
}

/// `p_1^{a_1} ⋯ p_n^{a_n}`, ordered by form degree then lexicographically
/// with higher powers of earlier classes first (`p_1² < p_2`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n_pairs: usize) -> Self {
        Monomial(vec![0; n_pairs])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    /// `p_i` (1-based).
    pub fn p(n_pairs: usize, i: usize) -> Self {
        let mut e = vec![0; n_pairs];
        e[i - 1] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().enumerate().map(|(i, a)| (i + 1) * *a as usize).sum()
    }

    pub fn form_degree(&self) -> u32 {
        4 * self.weight() as u32
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.0.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "p{}", i + 1)?;
            if *a > 1 {
                write!(f, "^{a}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// An element of the truncated Pontryagin ring of a [`RootProfile`].
#[derive(Clone, PartialEq)]
pub struct GradedClass {
    profile: RootProfile,
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedClass[{}]({})", self.profile, self)
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(m, c)| (c, if m.weight() == 0 { String::new() } else { m.to_string() }));
        f.write_str(&signed_sum(terms, "·"))
    }
}

impl GradedClass {
    pub fn zero(profile: RootProfile) -> Self {
        GradedClass { profile, terms: BTreeMap::new() }
    }

    pub fn scalar(profile: RootProfile, r: Rational) -> Self {
        let mut g = Self::zero(profile);
        g.add_term(Monomial::one(profile.n_pairs()), r);
        g
    }

    pub fn one(profile: RootProfile) -> Self {
        Self::scalar(profile, Rational::one())
    }

    /// `c · p_1^{a_1} ⋯`; dropped if beyond the truncation.
    pub fn monomial(profile: RootProfile, exps: &[u32], c: Rational) -> Result<Self> {
        if exps.len() != profile.n_pairs() {
            return Err(Error::LengthMismatch { expected: profile.n_pairs(), got: exps.len() });
        }
        let mut g = Self::zero(profile);
        g.add_term(Monomial(exps.to_vec()), c);
        Ok(g)
    }

    /// `p_i` (1-based); zero when `i > n_pairs` or beyond the truncation.
    pub fn p(profile: RootProfile, i: usize) -> Self {
        if i == 0 || i > profile.n_pairs() {
            return Self::zero(profile);
        }
        let mut g = Self::zero(profile);
        g.add_term(Monomial::p(profile.n_pairs(), i), Rational::one());
        g
    }

    pub fn profile(&self) -> RootProfile {
        self.profile
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one(self.profile.n_pairs()))
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.weight() > self.profile.max_weight() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.profile == other.profile {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: self.profile.to_string(), right: other.profile.to_string() })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&int(-1)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let w = self.profile.max_weight();
        let mut out = Self::zero(self.profile);
        for (ma, ca) in &self.terms {
            let wa = ma.weight();
            for (mb, cb) in &other.terms {
                if wa + mb.weight() <= w {
                    out.add_term(ma.mul(mb), ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(self.profile);
        }
        GradedClass { profile: self.profile, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * r)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.profile), |acc, _| acc.mul(self).expect("same ring"))
    }

    /// Homogeneous part of form degree `degree`.
    pub fn degree_component(&self, degree: u32) -> Result<Self> {
        if !degree.is_multiple_of(2) {
            return Err(Error::OddDegree(degree));
        }
        if degree > self.profile.max_form_degree {
            return Err(Error::DegreeExceedsTruncation { degree, max: self.profile.max_form_degree });
        }
        Ok(GradedClass {
            profile: self.profile,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.form_degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// Adams operation on a character: the weight-`w` part is scaled by `k^{2w}`
    /// (each root `x` becomes `k x`).
    pub fn adams(&self, k: u32) -> Self {
        let k2 = int(i64::from(k) * i64::from(k));
        GradedClass {
            profile: self.profile,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * num_traits::pow(k2.clone(), m.weight()))).collect(),
        }
    }

    /// Same class viewed in a profile with a lower truncation degree.
    pub fn truncate_to(&self, max_form_degree: u32) -> Result<Self> {
        let profile = self.profile.with_max_form_degree(max_form_degree.min(self.profile.max_form_degree))?;
        let mut out = Self::zero(profile);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// `exp(N)` for `N` without constant term; the series terminates by weight.
    fn exp_nilpotent(&self) -> Self {
        let w = self.profile.max_weight();
        let mut out = Self::one(self.profile);
        let mut power = Self::one(self.profile);
        for k in 1..=w {
            power = power.mul(self).expect("same ring");
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&factorial(k).recip())).expect("same ring");
        }
        out
    }

    /// `log(1 + N)` for `N` without constant term.
    fn log_unipotent(&self) -> Self {
        let n = self.sub(&Self::one(self.profile)).expect("same ring");
        let w = self.profile.max_weight();
        let mut out = Self::zero(self.profile);
        let mut power = Self::one(self.profile);
        for k in 1..=w {
            power = power.mul(&n).expect("same ring");
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&Rational::new(sign.into(), (k as i64).into()))).expect("same ring");
        }
        out
    }

    /// Substitutes `p_i = e_i(r_1², …, r_n²)` and evaluates.
    pub fn eval_at_roots(&self, roots: &[Rational]) -> Result<Rational> {
        let n = self.profile.n_pairs();
        if roots.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: roots.len() });
        }
        // coefficients of Π (1 + r_j² t)
        let mut e = vec![Rational::zero(); n + 1];
        e[0] = Rational::one();
        for r in roots {
            let y = r * r;
            for i in (1..=n).rev() {
                let prev = e[i - 1].clone();
                e[i] += prev * &y;
            }
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .enumerate()
                    .fold(c.clone(), |acc, (i, a)| acc * num_traits::pow(e[i + 1].clone(), *a as usize))
            })
            .sum())
    }

    /// Graded-lex ordered `[{"monomial": [a_1, …], "coef": "num/den"}, …]`.
    pub fn to_json_value(&self) -> Value {
        Value::Array(self.terms.iter().map(|(m, c)| json!({ "monomial": m.0, "coef": format_rational(c) })).collect())
    }

    pub fn from_json_value(profile: RootProfile, value: &Value) -> Result<Self> {
        let items = value.as_array().ok_or_else(|| Error::Parse("graded class must be a list".into()))?;
        let mut out = Self::zero(profile);
        for item in items {
            let exps: Vec<u32> = item
                .get("monomial")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing monomial in {item}")))?
                .iter()
                .map(|v| v.as_u64().map(|a| a as u32))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Parse(format!("bad monomial in {item}")))?;
            if exps.len() != profile.n_pairs() {
                return Err(Error::LengthMismatch { expected: profile.n_pairs(), got: exps.len() });
            }
            let coef = item
                .get("coef")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse(format!("missing coef in {item}")))?;
            out.add_term(Monomial(exps), parse_rational(coef)?);
        }
        Ok(out)
    }
}

impl Coefficient for GradedClass {
    type Ring = RootProfile;

    fn ring(&self) -> RootProfile {
        self.profile
    }
    fn zero_in(ring: &RootProfile) -> Self {
        GradedClass::zero(*ring)
    }
    fn from_rational_in(ring: &RootProfile, r: &Rational) -> Self {
        GradedClass::scalar(*ring, r.clone())
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other).expect("series layer checks rings")
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other).expect("series layer checks rings")
    }
    fn scaled(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn try_inverse(&self) -> Option<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return None;
        }
        // (c(1 + N))^{-1} = c^{-1} Σ (-N)^k
        let c_inv = c.recip();
        let n = self.scale(&c_inv).sub(&Self::one(self.profile)).ok()?;
        let neg_n = n.scale(&int(-1));
        let mut out = Self::one(self.profile);
        let mut power = Self::one(self.profile);
        for _ in 0..self.profile.max_weight() {
            power = power.mul(&neg_n).ok()?;
            if power.is_zero() {
                break;
            }
            out = out.add(&power).ok()?;
        }
        Some(out.scale(&c_inv))
    }
    fn try_exp(&self) -> Option<Self> {
        self.constant_term().is_zero().then(|| self.exp_nilpotent())
    }
    fn try_log(&self) -> Option<Self> {
        self.constant_term().is_one().then(|| self.log_unipotent())
    }
    fn to_json(&self) -> Value {
        self.to_json_value()
    }
    fn from_json(ring: &RootProfile, value: &Value) -> Result<Self> {
        GradedClass::from_json_value(*ring, value)
    }
}

impl DisplayCoefficient for GradedClass {
    fn display(&self) -> String {
        self.to_string()
    }
}

/// Truncated univariate series in a single formal root `x`, dense from `x^0`.
#[derive(Clone, PartialEq, Eq)]
pub struct RootSeries {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for RootSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.coeffs.iter().map(display_rational).collect();
        write!(f, "RootSeries[{}]", shown.join(", "))
    }
}

impl RootSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        RootSeries { coeffs }
    }

    /// Number of stored coefficients (`x^0 … x^{len-1}`).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant(c: Rational, len: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); len];
        if len > 0 {
            coeffs[0] = c;
        }
        RootSeries { coeffs }
    }

    pub fn one(len: usize) -> Self {
        Self::constant(Rational::one(), len)
    }

    /// `x` itself.
    pub fn x(len: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); len];
        if len > 1 {
            coeffs[1] = Rational::one();
        }
        RootSeries { coeffs }
    }

    /// `e^{a x}`.
    pub fn exp_scaled(a: &Rational, len: usize) -> Self {
        let mut coeffs = Vec::with_capacity(len);
        let mut term = Rational::one();
        for k in 0..len {
            coeffs.push(term.clone());
            term = term * a / int(k as i64 + 1);
        }
        RootSeries { coeffs }
    }

    /// `cosh(a x)`.
    pub fn cosh_scaled(a: &Rational, len: usize) -> Self {
        Self::exp_scaled(a, len).even_part()
    }

    /// `sinh(a x)`.
    pub fn sinh_scaled(a: &Rational, len: usize) -> Self {
        Self::exp_scaled(a, len).odd_part()
    }

    /// `sinh(a x) / (a x)`, well defined at zero.
    pub fn sinhc_scaled(a: &Rational, len: usize) -> Self {
        let s = Self::sinh_scaled(a, len + 1);
        let coeffs = (0..len).map(|k| s.coeff(k + 1) / a).collect();
        RootSeries { coeffs }
    }

    fn even_part(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.clone() } else { Rational::zero() })
            .collect();
        RootSeries { coeffs }
    }

    fn odd_part(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { c.clone() } else { Rational::zero() })
            .collect();
        RootSeries { coeffs }
    }

    /// First odd-degree position with a nonzero coefficient.
    pub fn first_odd_term(&self) -> Option<usize> {
        self.coeffs.iter().enumerate().find(|(k, c)| k % 2 == 1 && !c.is_zero()).map(|(k, _)| k)
    }

    /// `f(σ x)`.
    pub fn rescale_argument(&self, sigma: &Rational) -> Self {
        let mut factor = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c * &factor);
            factor *= sigma;
        }
        RootSeries { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().min(other.len());
        RootSeries { coeffs: (0..len).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let len = self.len().min(other.len());
        let mut coeffs = vec![Rational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] += a * b;
            }
        }
        RootSeries { coeffs }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        RootSeries { coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::NonInvertible);
        }
        let c0_inv = c0.recip();
        let n = self.len();
        let mut b: Vec<Rational> = Vec::with_capacity(n);
        b.push(c0_inv.clone());
        for k in 1..n {
            let acc: Rational = (1..=k).map(|i| &self.coeffs[i] * &b[k - i]).sum();
            b.push(-acc * &c0_inv);
        }
        Ok(RootSeries { coeffs: b })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// `log f` for `f(0) = 1`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeff(0).is_one() {
            return Err(Error::NonInvertible);
        }
        let n = self.len();
        let mut l = vec![Rational::zero(); n];
        for k in 1..n {
            let mut acc = &self.coeffs[k] * int(k as i64);
            for (j, lj) in l.iter().enumerate().take(k).skip(1) {
                acc -= lj * &self.coeffs[k - j] * int(j as i64);
            }
            l[k] = acc / int(k as i64);
        }
        Ok(RootSeries { coeffs: l })
    }

    /// `exp f` for `f(0) = 0`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::NonInvertible);
        }
        let n = self.len();
        let mut b = vec![Rational::zero(); n];
        if n > 0 {
            b[0] = Rational::one();
        }
        for k in 1..n {
            let acc: Rational = (1..=k).map(|i| &self.coeffs[i] * &b[k - i] * int(i as i64)).sum();
            b[k] = acc / int(k as i64);
        }
        Ok(RootSeries { coeffs: b })
    }

    pub fn truncate(&self, len: usize) -> Self {
        RootSeries { coeffs: self.coeffs.iter().take(len).cloned().collect() }
    }

    /// Evaluates the truncated polynomial at a rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

impl Coefficient for RootSeries {
    type Ring = usize;

    fn ring(&self) -> usize {
        self.len()
    }
    fn zero_in(len: &usize) -> Self {
        RootSeries::constant(Rational::zero(), *len)
    }
    fn from_rational_in(len: &usize, r: &Rational) -> Self {
        RootSeries::constant(r.clone(), *len)
    }
    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scaled(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn try_exp(&self) -> Option<Self> {
        self.exp().ok()
    }
    fn try_log(&self) -> Option<Self> {
        self.log().ok()
    }
    fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| Value::String(format_rational(c))).collect())
    }
    fn from_json(len: &usize, value: &Value) -> Result<Self> {
        let items = value.as_array().ok_or_else(|| Error::Parse("root series must be a list".into()))?;
        let mut coeffs = items.iter().map(|v| Rational::from_json(&(), v)).collect::<Result<Vec<_>>>()?;
        coeffs.resize(*len, Rational::zero());
        Ok(RootSeries { coeffs })
    }
}

/// Even power sums `P_k = Σ_j x_j^{2k}` expressed in the Pontryagin basis,
/// for `k = 0..=max_weight` (index 0 holds `n_pairs`).
///
/// Newton: `P_k = Σ_{i=1}^{k-1} (-1)^{i-1} e_i P_{k-i} + (-1)^{k-1} k e_k`,
/// with `e_i = p_i` and `e_i = 0` for `i > n_pairs`.
pub fn power_sums(profile: RootProfile) -> Vec<GradedClass> {
    let w = profile.max_weight();
    let mut sums: Vec<GradedClass> = vec![GradedClass::scalar(profile, int(profile.n_pairs() as i64))];
    for k in 1..=w {
        let mut pk = GradedClass::p(profile, k).scale(&int(if k % 2 == 1 { k as i64 } else { -(k as i64) }));
        for i in 1..k {
            let sign = if i % 2 == 1 { int(1) } else { int(-1) };
            let term = GradedClass::p(profile, i).mul(&sums[k - i]).expect("same ring").scale(&sign);
            pk = pk.add(&term).expect("same ring");
        }
        sums.push(pk);
    }
    sums
}

/// `Σ_{k≥1} c_k P_k` for the given coefficients (index 0 ignored).
pub fn from_power_sums(profile: RootProfile, coeffs: &[Rational]) -> GradedClass {
    let sums = power_sums(profile);
    let mut out = GradedClass::zero(profile);
    for (k, c) in coeffs.iter().enumerate().skip(1).take(profile.max_weight()) {
        if !c.is_zero() {
            out = out.add(&sums[k].scale(c)).expect("same ring");
        }
    }
    out
}

fn require_len(f: &RootSeries, profile: RootProfile) -> Result<()> {
    let need = 2 * profile.max_weight();
    if f.len() <= need {
        return Err(Error::InsufficientTruncation { have: f.len().saturating_sub(1), need });
    }
    Ok(())
}

fn product_with(f: &RootSeries, profile: RootProfile, include_zero: bool) -> Result<GradedClass> {
    if let Some(degree) = f.first_odd_term() {
        return Err(Error::NotEven { degree });
    }
    require_len(f, profile)?;
    let c0 = f.coeff(0);
    if c0.is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let w = profile.max_weight();
    let log = f.truncate(2 * w + 1).scale(&c0.recip()).log()?;
    let ell: Vec<Rational> = (0..=w).map(|k| log.coeff(2 * k)).collect();
    let scalar = num_traits::pow(c0, profile.root_count(include_zero));
    let exponent = from_power_sums(profile, &ell);
    Ok(exponent.exp_nilpotent().scale(&scalar))
}

/// `Π f(root)` over all complex roots, one factor per `±x_j` pair plus `f(0)`
/// for the zero root of an odd-dimensional fiber.
pub fn product_over_roots(f: &RootSeries, profile: RootProfile) -> Result<GradedClass> {
    product_with(f, profile, true)
}

/// `Π_j f(x_j)` over root pairs only; a zero root contributes nothing.
pub fn product_over_pairs(f: &RootSeries, profile: RootProfile) -> Result<GradedClass> {
    product_with(f, profile, false)
}

/// `Σ g(root)` over all complex roots: `Σ_j (g(x_j) + g(-x_j))`, plus `g(0)`
/// for the zero root.
pub fn sum_over_roots(g: &RootSeries, profile: RootProfile) -> Result<GradedClass> {
    require_len(g, profile)?;
    let w = profile.max_weight();
    let mut coeffs: Vec<Rational> = (0..=w).map(|k| g.coeff(2 * k) * int(2)).collect();
    coeffs[0] = Rational::zero();
    let rank = g.coeff(0) * int(profile.fiber_dim() as i64);
    Ok(from_power_sums(profile, &coeffs).add(&GradedClass::scalar(profile, rank)).expect("same ring"))
}
