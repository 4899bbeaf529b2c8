//! Fixtures shared by the benchmarks.

use thetacert_core::rational::rat;
use thetacert_core::{DecompositionCase, HalfQSeries, Rational, RootProfile};

/// Profile at the form degree of the `(m, fiber_dim)` identity.
pub fn identity_profile(m: u32, fiber_dim: u32) -> RootProfile {
    let case = DecompositionCase::classify(m, fiber_dim).expect("admissible case");
    RootProfile::new(fiber_dim, case.form_degree(m)).expect("valid profile")
}

/// A dense unit series with small, varied coefficients.
pub fn dense_unit_series(order: u32) -> HalfQSeries<Rational> {
    let coeffs: Vec<Rational> =
        (0..order as i64).map(|k| rat((k * 7) % 11 - 5 + 6 * i64::from(k == 0), 1 + k % 4)).collect();
    HalfQSeries::from_dense(&coeffs, order)
}
