//! Truncated formal power series in `q^{1/2}` over a pluggable coefficient ring.
//!
//! Exponents are stored doubled (`q^{3/2}` has `twice_value` 3) so indexing never
//! needs fractions. Series are sparse and canonical: zero coefficients are never
//! stored, and nothing at or beyond the truncation order is kept.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// A commutative Q-algebra usable as a series coefficient.
///
/// `Ring` identifies the concrete ring an element lives in (for example the
/// root profile of a graded class); operations between different rings are
/// rejected by the series layer.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    type Ring: Clone + PartialEq + fmt::Debug;

    fn ring(&self) -> Self::Ring;
    fn zero_in(ring: &Self::Ring) -> Self;
    fn from_rational_in(ring: &Self::Ring, r: &Rational) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scaled(&self, r: &Rational) -> Self;
    fn try_inverse(&self) -> Option<Self>;
    /// `exp` when it stays inside the ring (e.g. nilpotent elements).
    fn try_exp(&self) -> Option<Self>;
    /// `log` when it stays inside the ring (e.g. unipotent elements).
    fn try_log(&self) -> Option<Self>;
    fn to_json(&self) -> Value;
    fn from_json(ring: &Self::Ring, value: &Value) -> Result<Self>;

    fn one_in(ring: &Self::Ring) -> Self {
        Self::from_rational_in(ring, &Rational::one())
    }
    fn negated(&self) -> Self {
        self.scaled(&int(-1))
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negated())
    }
}

impl Coefficient for Rational {
    type Ring = ();

    fn ring(&self) {}
    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn from_rational_in(_: &(), r: &Rational) -> Self {
        r.clone()
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scaled(&self, r: &Rational) -> Self {
        self * r
    }
    fn try_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
    fn try_exp(&self) -> Option<Self> {
        self.is_zero().then(Rational::one)
    }
    fn try_log(&self) -> Option<Self> {
        self.is_one().then(Rational::zero)
    }
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
    fn from_json(_: &(), value: &Value) -> Result<Self> {
        value
            .as_str()
            .ok_or_else(|| Error::Parse(format!("expected rational string, got {value}")))
            .and_then(parse_rational)
    }
}

/// An exponent of `q`, measured in units of `q^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfExp(pub u32);

impl HalfExp {
    pub fn twice_value(self) -> u32 {
        self.0
    }

    /// `q^n` for integral `n`.
    pub fn integral(n: u32) -> Self {
        HalfExp(2 * n)
    }

    pub fn is_integral(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl fmt::Display for HalfExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 2 {
            write!(f, "q")
        } else if self.is_integral() {
            write!(f, "q^{}", self.0 / 2)
        } else {
            write!(f, "q^{{{}/2}}", self.0)
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct HalfQSeries<C: Coefficient> {
    ring: C::Ring,
    terms: BTreeMap<u32, C>,
    order: u32,
}

impl<C: Coefficient> fmt::Debug for HalfQSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HalfQSeries").field("order", &self.order).field("terms", &self.terms).finish()
    }
}

impl<C: Coefficient> HalfQSeries<C> {
    pub fn zero(ring: C::Ring, order: u32) -> Self {
        HalfQSeries { ring, terms: BTreeMap::new(), order }
    }

    pub fn one(ring: C::Ring, order: u32) -> Self {
        let one = C::one_in(&ring);
        Self::monomial(ring, 0, one, order)
    }

    pub fn constant(ring: C::Ring, c: C, order: u32) -> Self {
        Self::monomial(ring, 0, c, order)
    }

    pub fn monomial(ring: C::Ring, exp2: u32, c: C, order: u32) -> Self {
        Self::from_terms(ring, order, [(exp2, c)])
    }

    /// Builds a series from `(exp2, coefficient)` pairs, summing duplicates and
    /// dropping anything beyond `order`.
    pub fn from_terms(ring: C::Ring, order: u32, terms: impl IntoIterator<Item = (u32, C)>) -> Self {
        let mut s = Self::zero(ring, order);
        for (e, c) in terms {
            s.add_term(e, &c);
        }
        s
    }

    pub fn ring_id(&self) -> &C::Ring {
        &self.ring
    }

    pub fn order(&self) -> HalfExp {
        HalfExp(self.order)
    }

    pub fn order2(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent carrying a nonzero coefficient (the order if none).
    pub fn valuation(&self) -> u32 {
        self.terms.keys().next().copied().unwrap_or(self.order)
    }

    pub fn terms(&self) -> impl Iterator<Item = (HalfExp, &C)> {
        self.terms.iter().map(|(e, c)| (HalfExp(*e), c))
    }

    pub fn coefficient(&self, e: HalfExp) -> Result<C> {
        if e.0 >= self.order {
            return Err(Error::BeyondTruncation { exp2: e.0, order: self.order });
        }
        Ok(self.coeff2(e.0))
    }

    /// Coefficient at `q^{exp2/2}`, zero when absent. Caller guarantees `exp2 < order`.
    pub(crate) fn coeff2(&self, exp2: u32) -> C {
        self.terms.get(&exp2).cloned().unwrap_or_else(|| C::zero_in(&self.ring))
    }

    fn add_term(&mut self, exp2: u32, c: &C) {
        if exp2 >= self.order || c.vanishes() {
            return;
        }
        let zero = C::zero_in(&self.ring);
        let next = self.terms.get(&exp2).unwrap_or(&zero).plus(c);
        if next.vanishes() {
            self.terms.remove(&exp2);
        } else {
            self.terms.insert(exp2, next);
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: format!("{:?}", self.ring), right: format!("{:?}", other.ring) })
        }
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        HalfQSeries {
            ring: self.ring.clone(),
            terms: self.terms.range(..order).map(|(e, c)| (*e, c.clone())).collect(),
            order,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.truncate(self.order.min(other.order));
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.negated())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map(|c| c.scaled(r))
    }

    /// Multiplies every coefficient by a ring element.
    pub fn scale_by(&self, c: &C) -> Result<Self> {
        if c.ring() != self.ring {
            return Err(Error::RingMismatch { left: format!("{:?}", self.ring), right: format!("{:?}", c.ring()) });
        }
        Ok(self.map(|x| x.times(c)))
    }

    /// Coefficientwise map within the same ring.
    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Self::zero(self.ring.clone(), self.order);
        for (e, c) in &self.terms {
            out.add_term(*e, &f(c));
        }
        out
    }

    /// Coefficientwise map into another coefficient ring.
    pub fn map_into<D: Coefficient>(&self, ring: D::Ring, f: impl Fn(&C) -> D) -> HalfQSeries<D> {
        let mut out = HalfQSeries::<D>::zero(ring, self.order);
        for (e, c) in &self.terms {
            out.add_term(*e, &f(c));
        }
        out
    }

    /// Cauchy product. The result order is the largest bound below which every
    /// output coefficient is exactly determined by the operands.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let order = (self.order + other.valuation()).min(other.order + self.valuation());
        let mut out = Self::zero(self.ring.clone(), order);
        for (ea, a) in &self.terms {
            if *ea >= order {
                break;
            }
            for (eb, b) in other.terms.range(..order - ea) {
                out.add_term(ea + eb, &a.times(b));
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeff2(0);
        let c0_inv = c0.try_inverse().ok_or(Error::NonInvertible)?;
        let n = self.order as usize;
        let mut b: Vec<C> = Vec::with_capacity(n);
        b.push(c0_inv.clone());
        for k in 1..n {
            let mut acc = C::zero_in(&self.ring);
            for (e, a) in self.terms.range(1..=k as u32) {
                acc = acc.plus(&a.times(&b[k - *e as usize]));
            }
            b.push(acc.times(&c0_inv).negated());
        }
        Ok(Self::from_terms(self.ring.clone(), self.order, b.into_iter().enumerate().map(|(e, c)| (e as u32, c))))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Self::one(self.ring.clone(), self.order);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("same ring");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        result
    }

    /// Exponential. The constant term must have an in-ring exponential.
    pub fn exp(&self) -> Result<Self> {
        let c0 = self.coeff2(0);
        let e0 = c0.try_exp().ok_or(Error::NonInvertible)?;
        let n = self.order as usize;
        // n b_n = sum_{k=1}^{n} k a_k b_{n-k}
        let mut b: Vec<C> = Vec::with_capacity(n);
        b.push(C::one_in(&self.ring));
        for k in 1..n {
            let mut acc = C::zero_in(&self.ring);
            for (e, a) in self.terms.range(1..=k as u32) {
                acc = acc.plus(&a.times(&b[k - *e as usize]).scaled(&int(*e as i64)));
            }
            b.push(acc.scaled(&Rational::new(1.into(), (k as i64).into())));
        }
        let unit =
            Self::from_terms(self.ring.clone(), self.order, b.into_iter().enumerate().map(|(e, c)| (e as u32, c)));
        unit.scale_by(&e0)
    }

    /// Logarithm. The constant term must have an in-ring logarithm.
    pub fn log(&self) -> Result<Self> {
        let c0 = self.coeff2(0);
        let c0_inv = c0.try_inverse().ok_or(Error::NonInvertible)?;
        let l0 = c0.try_log().ok_or(Error::NonInvertible)?;
        let unit = self.scale_by(&c0_inv)?;
        let n = self.order as usize;
        // n l_n = n u_n - sum_{k=1}^{n-1} k l_k u_{n-k}
        let mut l: Vec<C> = Vec::with_capacity(n);
        l.push(l0);
        for k in 1..n {
            let mut acc = unit.coeff2(k as u32).scaled(&int(k as i64));
            for (j, lj) in l.iter().enumerate().skip(1) {
                let u = unit.coeff2((k - j) as u32);
                if !u.vanishes() {
                    acc = acc.minus(&lj.times(&u).scaled(&int(j as i64)));
                }
            }
            l.push(acc.scaled(&Rational::new(1.into(), (k as i64).into())));
        }
        Ok(Self::from_terms(self.ring.clone(), self.order, l.into_iter().enumerate().map(|(e, c)| (e as u32, c))))
    }

    /// Ordered `[{"exp2": .., "coef": ..}, ..]` list.
    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(e, c)| json!({ "exp2": e, "coef": c.to_json() })).collect())
    }

    pub fn from_json(ring: C::Ring, order: u32, value: &Value) -> Result<Self> {
        let items = value.as_array().ok_or_else(|| Error::Parse("series must be a list of terms".into()))?;
        let mut out = Self::zero(ring, order);
        for item in items {
            let exp2 = item
                .get("exp2")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("term without exp2: {item}")))?;
            let coef = item.get("coef").ok_or_else(|| Error::Parse(format!("term without coef: {item}")))?;
            let c = C::from_json(&out.ring, coef)?;
            out.add_term(exp2 as u32, &c);
        }
        Ok(out)
    }
}

impl HalfQSeries<Rational> {
    /// Rational series from a dense coefficient list starting at `q^0`.
    pub fn from_dense(coeffs: &[Rational], order: u32) -> Self {
        Self::from_terms((), order, coeffs.iter().cloned().enumerate().map(|(e, c)| (e as u32, c)))
    }

    /// Lifts a rational series into another coefficient ring.
    pub fn lift<C: Coefficient>(&self, ring: &C::Ring) -> HalfQSeries<C> {
        self.map_into(ring.clone(), |r| C::from_rational_in(ring, r))
    }

    /// Evaluates the truncated series at a complex `q^{1/2}`.
    pub fn eval_complex(&self, sqrt_q: num_complex::Complex64) -> num_complex::Complex64 {
        self.terms.iter().map(|(e, c)| sqrt_q.powu(*e) * crate::rational::to_f64(c)).sum()
    }
}

impl<C: Coefficient> fmt::Display for HalfQSeries<C>
where
    C: DisplayCoefficient,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = HalfExp(self.order);
        if self.terms.values().all(|c| c.as_scalar().is_some()) {
            let terms = self.terms.iter().map(|(e, c)| {
                let name = if *e == 0 { String::new() } else { HalfExp(*e).to_string() };
                (c.as_scalar().expect("checked"), name)
            });
            let body = crate::rational::signed_sum(terms, "");
            return write!(f, "{body} + O({order})");
        }
        for (e, c) in &self.terms {
            if *e == 0 {
                write!(f, "{} + ", c.display())?;
            } else {
                write!(f, "({}) {} + ", c.display(), HalfExp(*e))?;
            }
        }
        write!(f, "O({order})")
    }
}

pub trait DisplayCoefficient {
    fn display(&self) -> String;

    fn as_scalar(&self) -> Option<&Rational> {
        None
    }
}

impl DisplayCoefficient for Rational {
    fn display(&self) -> String {
        crate::rational::display_rational(self)
    }

    fn as_scalar(&self) -> Option<&Rational> {
        Some(self)
    }
}
