use num_traits::One;
use proptest::prelude::*;
use thetacert_core::anomaly::variant_ratio;
use thetacert_core::chroot::{product_over_pairs, product_over_roots};
use thetacert_core::genera::{l_class, LVariant};
use thetacert_core::rational::{int, rat};
use thetacert_core::witten::{
    build_theta_bundle, lambda_t_character, s_t_character, CharacterElement, TMonomial, ThetaBundleKind,
};
use thetacert_core::{GradedClass, HalfExp, HalfQSeries, Rational, RootProfile, RootSeries};

const ORDER: u32 = 8;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn series() -> impl Strategy<Value = HalfQSeries<Rational>> {
    prop::collection::vec(small_rational(), ORDER as usize).prop_map(|c| HalfQSeries::from_dense(&c, ORDER))
}

fn unit_series() -> impl Strategy<Value = HalfQSeries<Rational>> {
    (prop::collection::vec(small_rational(), ORDER as usize), 1i64..=5, prop::bool::ANY).prop_map(|(mut c, n, neg)| {
        c[0] = int(if neg { -n } else { n });
        HalfQSeries::from_dense(&c, ORDER)
    })
}

fn even_root_series(len: usize) -> impl Strategy<Value = RootSeries> {
    prop::collection::vec(small_rational(), len).prop_map(move |mut c| {
        c[0] = Rational::one();
        for (k, x) in c.iter_mut().enumerate() {
            if k % 2 == 1 {
                *x = int(0);
            }
        }
        RootSeries::new(c)
    })
}

/// A character `r + Σ c_i p_i` on a fixed profile.
fn character(profile: RootProfile) -> impl Strategy<Value = CharacterElement> {
    (-4i64..=4, prop::collection::vec(small_rational(), profile.n_pairs())).prop_map(move |(rank, cs)| {
        let mut form = GradedClass::scalar(profile, int(rank));
        for (i, c) in cs.iter().enumerate() {
            form = form.add(&GradedClass::p(profile, i + 1).scale(c)).unwrap();
        }
        CharacterElement::from_character(&form).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(a.mul(&HalfQSeries::one((), ORDER)).unwrap(), a.clone());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn inverse_roundtrip(a in unit_series()) {
        let inv = a.inv().unwrap();
        prop_assert_eq!(a.mul(&inv).unwrap(), HalfQSeries::one((), ORDER));
        prop_assert_eq!(inv.inv().unwrap(), a);
    }

    #[test]
    fn truncation_commutes_with_products(a in series(), b in series(), k in 1u32..ORDER) {
        let lhs = a.mul(&b).unwrap().truncate(k);
        let rhs = a.truncate(k).mul(&b.truncate(k)).unwrap().truncate(k);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_log_roundtrip(a in series()) {
        let tail = a.sub(&HalfQSeries::constant((), a.coefficient(HalfExp(0)).unwrap(), ORDER)).unwrap();
        prop_assert_eq!(tail.exp().unwrap().log().unwrap(), tail);
    }

    #[test]
    fn root_products_are_multiplicative(f in even_root_series(7), g in even_root_series(7), n in 1u32..=4) {
        let profile = RootProfile::new(2 * n, 12).unwrap();
        let fg = product_over_pairs(&f.mul(&g), profile).unwrap();
        let split = product_over_pairs(&f, profile).unwrap().mul(&product_over_pairs(&g, profile).unwrap()).unwrap();
        prop_assert_eq!(fg, split);
    }

    #[test]
    fn zero_root_is_neutral_for_unit_constant(f in even_root_series(7), n in 1u32..=4) {
        let even = product_over_roots(&f, RootProfile::new(2 * n, 12).unwrap()).unwrap();
        let odd = product_over_roots(&f, RootProfile::new(2 * n + 1, 12).unwrap()).unwrap();
        prop_assert_eq!(even.to_json_value(), odd.to_json_value());
    }

    #[test]
    fn lambda_and_symmetric_powers_are_dual(e in character(RootProfile::new(4, 8).unwrap()), exp2 in 1u32..=3) {
        let s = s_t_character(&e, TMonomial::q(exp2).unwrap(), ORDER);
        let l = lambda_t_character(&e, TMonomial::minus_q(exp2).unwrap(), ORDER);
        prop_assert_eq!(s.mul(&l).unwrap(), HalfQSeries::one(e.profile(), ORDER));
    }

    #[test]
    fn lambda_is_exponential(a in character(RootProfile::new(4, 8).unwrap()), b in character(RootProfile::new(4, 8).unwrap())) {
        let t = TMonomial::q(1).unwrap();
        let sum = lambda_t_character(&a.add(&b).unwrap(), t, ORDER);
        let prod = lambda_t_character(&a, t, ORDER).mul(&lambda_t_character(&b, t, ORDER)).unwrap();
        prop_assert_eq!(sum, prod);
    }

    #[test]
    fn l_variants_differ_by_power_of_two(dim in 1u32..=9, w in 1u32..=3) {
        let profile = RootProfile::new(dim, 4 * w).unwrap();
        let full = l_class(profile, LVariant::FullAngle).degree_component(4 * w).unwrap();
        let half = l_class(profile, LVariant::HalfAngle).degree_component(4 * w).unwrap();
        prop_assert_eq!(half, full.scale(&variant_ratio(profile, 4 * w)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn theta_bundles_are_stable_under_truncation(dim in 1u32..=6, lo in 1u32..=5, extra in 1u32..=3) {
        let profile = RootProfile::new(dim, 8).unwrap();
        for kind in [ThetaBundleKind::Theta1, ThetaBundleKind::Theta2] {
            let long = build_theta_bundle(kind, profile, lo + extra);
            let short = build_theta_bundle(kind, profile, lo);
            prop_assert_eq!(long.truncate(lo), short);
        }
    }
}
