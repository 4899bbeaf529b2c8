//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^k` for signed `k`.
pub fn pow2(k: i64) -> Rational {
    let base = if k >= 0 { int(2) } else { rat(1, 2) };
    num_traits::pow(base, k.unsigned_abs() as usize)
}

pub fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * int(k as i64))
}

/// Canonical `"num/den"` form; the denominator is always written.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `c₁{sep}b₁ ± c₂{sep}b₂ …` with unit coefficients dropped; an empty basis
/// name marks a constant term.
pub fn signed_sum<'a>(terms: impl IntoIterator<Item = (&'a Rational, String)>, sep: &str) -> String {
    let mut out = String::new();
    for (c, name) in terms {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        out.push_str(match (out.is_empty(), c.is_negative()) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        });
        if name.is_empty() {
            out.push_str(&display_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&name);
        } else {
            out.push_str(&format!("{}{sep}{name}", display_rational(&mag)));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Human-oriented form used by tables: integers lose their `/1`.
pub fn display_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format_rational(r)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("not a rational: {s:?}")));
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact base-2 logarithm when `r` is a (signed) power of two.
pub fn log2_exact(r: &Rational) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let two = BigInt::from(2);
    let is_pow2 = |n: &BigInt| {
        let mut n = n.clone();
        let mut k = 0i64;
        while (&n % &two).is_zero() {
            n /= &two;
            k += 1;
        }
        n.is_one().then_some(k)
    };
    Some(is_pow2(r.numer())? - is_pow2(r.denom())?)
}
