//! Â, the L-class in its two angle conventions, and spinor characters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::chroot::{product_over_pairs, product_over_roots, GradedClass, RootProfile, RootSeries};
use crate::error::{Error, Result};
use crate::rational::{int, rat};

/// Angle convention for the L-class.
///
/// `FullAngle` is `Π x/tanh(x)` over root pairs; `HalfAngle` is
/// `Π x/tanh(x/2)` over all roots, a zero root contributing its limit 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LVariant {
    FullAngle,
    HalfAngle,
}

impl LVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            LVariant::FullAngle => "full_angle",
            LVariant::HalfAngle => "half_angle",
        }
    }
}

impl fmt::Display for LVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" | "full_angle" | "full-angle" => Ok(LVariant::FullAngle),
            "half" | "half_angle" | "half-angle" => Ok(LVariant::HalfAngle),
            other => Err(Error::Parse(format!("unknown L variant {other:?} (expected full or half)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinorKind {
    EvenFull,
    OddFull,
}

/// Number of x-coefficients needed to reach the profile's truncation.
pub fn root_series_len(profile: RootProfile) -> usize {
    2 * profile.max_weight() + 1
}

/// `(x/2) / sinh(x/2)`.
pub fn a_hat_series(len: usize) -> RootSeries {
    RootSeries::sinhc_scaled(&rat(1, 2), len).inv().expect("sinhc has unit constant term")
}

/// `x / tanh(x)`.
pub fn l_full_series(len: usize) -> RootSeries {
    RootSeries::cosh_scaled(&int(1), len)
        .div(&RootSeries::sinhc_scaled(&int(1), len))
        .expect("sinhc has unit constant term")
}

/// `x / tanh(x/2)`.
pub fn l_half_series(len: usize) -> RootSeries {
    RootSeries::cosh_scaled(&rat(1, 2), len)
        .div(&RootSeries::sinhc_scaled(&rat(1, 2), len))
        .expect("sinhc has unit constant term")
        .scale(&int(2))
}

/// `2 cosh(x/2)`.
pub fn spinor_series(len: usize) -> RootSeries {
    RootSeries::cosh_scaled(&rat(1, 2), len).scale(&int(2))
}

pub fn a_hat(profile: RootProfile) -> GradedClass {
    product_over_roots(&a_hat_series(root_series_len(profile)), profile).expect("even unit series")
}

pub fn l_class(profile: RootProfile, variant: LVariant) -> GradedClass {
    let len = root_series_len(profile);
    match variant {
        LVariant::FullAngle => product_over_pairs(&l_full_series(len), profile),
        LVariant::HalfAngle => product_over_roots(&l_half_series(len), profile),
    }
    .expect("even series with nonzero constant term")
}

/// Character of the full spinor bundle, `Π 2cosh(x_j/2)` over root pairs.
/// Both kinds share the root formula; its rank is `2^{n_pairs}`.
pub fn spinor_character(profile: RootProfile, _kind: SpinorKind) -> GradedClass {
    product_over_pairs(&spinor_series(root_series_len(profile)), profile).expect("even series")
}
