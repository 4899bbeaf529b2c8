//! Independent recomputations of quantities the library derives by other means.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thetacert_core::anomaly::standard_cases;
use thetacert_core::chroot::{from_power_sums, product_over_pairs, product_over_roots};
use thetacert_core::modforms::{decompose_theta2, delta_epsilon, DecompositionCase, DeltaEps};
use thetacert_core::rational::{factorial, int, rat};
use thetacert_core::witten::{build_theta_bundle, CharacterElement, DirectBuild, ThetaBundleKind};
use thetacert_core::{GradedClass, HalfExp, Monomial, Rational, RootProfile, RootSeries};

fn random_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    rat(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// `Π_j f(s r_j)` as a polynomial in `s`, truncated after `s^{max}`.
fn graded_product(f: &RootSeries, roots: &[Rational], max: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); max + 1];
    acc[0] = Rational::one();
    for r in roots {
        let factor: Vec<Rational> = (0..=max).map(|k| f.coeff(k) * num_traits::pow(r.clone(), k)).collect();
        let mut next = vec![Rational::zero(); max + 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in factor.iter().enumerate().take(max + 1 - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

#[test]
fn newton_conversion_matches_direct_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..50 {
        let n = rng.gen_range(1..=4usize);
        let w = rng.gen_range(1..=4usize);
        let profile = RootProfile::new(2 * n as u32, 4 * w as u32).unwrap();
        let len = 2 * w + 1;
        let mut coeffs = vec![Rational::zero(); len];
        coeffs[0] = Rational::one();
        for k in 1..=w {
            coeffs[2 * k] = random_rational(&mut rng, 9, 7);
        }
        let f = RootSeries::new(coeffs.clone());
        let roots: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, 5, 4)).collect();

        let via_classes = product_over_pairs(&f, profile).unwrap().eval_at_roots(&roots).unwrap();
        let direct: Rational = graded_product(&f, &roots, 2 * w).into_iter().sum();
        assert_eq!(via_classes, direct, "product, trial {trial}");

        let sums: Vec<Rational> = (0..=w).map(|k| coeffs[2 * k].clone()).collect();
        let via_classes = from_power_sums(profile, &sums).eval_at_roots(&roots).unwrap();
        let direct: Rational =
            (1..=w).map(|k| roots.iter().map(|r| num_traits::pow(r.clone(), 2 * k)).sum::<Rational>() * &sums[k]).sum();
        assert_eq!(via_classes, direct, "power sums, trial {trial}");
    }
}

#[test]
fn zero_root_contributes_its_constant() {
    let profile_even = RootProfile::new(4, 8).unwrap();
    let profile_odd = RootProfile::new(5, 8).unwrap();
    let f = RootSeries::new((0..5).map(|k| if k % 2 == 0 { rat(3, 1 + k as i64) } else { int(0) }).collect());
    let even = product_over_roots(&f, profile_even).unwrap();
    let odd = product_over_roots(&f, profile_odd).unwrap();
    let roots = [rat(1, 2), rat(-2, 3)];
    assert_eq!(odd.eval_at_roots(&roots).unwrap(), even.eval_at_roots(&roots).unwrap() * int(3));
}

/// Dense polynomial in `(q^{1/2}, x)`, indexed `[exp2][x-degree]`.
#[derive(Clone)]
struct Dense {
    c: Vec<Vec<Rational>>,
}

impl Dense {
    fn zero(q: usize, x: usize) -> Self {
        Dense { c: vec![vec![Rational::zero(); x]; q] }
    }

    fn one(q: usize, x: usize) -> Self {
        let mut d = Self::zero(q, x);
        d.c[0][0] = Rational::one();
        d
    }

    fn mul(&self, o: &Dense) -> Dense {
        let (nq, nx) = (self.c.len(), self.c[0].len());
        let mut out = Dense::zero(nq, nx);
        for a in 0..nq {
            for b in 0..nq - a {
                for i in 0..nx {
                    if self.c[a][i].is_zero() {
                        continue;
                    }
                    for j in 0..nx - i {
                        out.c[a + b][i + j] += &self.c[a][i] * &o.c[b][j];
                    }
                }
            }
        }
        out
    }

    /// `Σ_k (sign·q^{e/2} e^{s x})^k` or its reciprocal.
    fn geometric(nq: usize, nx: usize, exp2: usize, s: i64, sign: i64) -> Dense {
        let mut out = Dense::zero(nq, nx);
        let mut k = 0;
        while k * exp2 < nq {
            for d in 0..nx {
                let term = num_traits::pow(int(s * k as i64), d) / factorial(d) * int(sign.pow(k as u32));
                out.c[k * exp2][d] += term;
            }
            k += 1;
        }
        out
    }

    /// `1 + sign·q^{e/2} e^{s x}`.
    fn binomial(nq: usize, nx: usize, exp2: usize, s: i64, sign: i64) -> Dense {
        let mut out = Dense::one(nq, nx);
        if exp2 < nq {
            for d in 0..nx {
                out.c[exp2][d] += num_traits::pow(int(s), d) / factorial(d) * int(sign);
            }
        }
        out
    }
}

/// `ch Θ` for a fiber with a single root pair `±x`, directly from its product form.
fn dense_theta(kind: ThetaBundleKind, nq: usize, nx: usize) -> Dense {
    let mut out = Dense::one(nq, nx);
    for n in 1..nq {
        let e = 2 * n;
        if e >= nq {
            break;
        }
        // S_{q^n}(T - rank): Π_ω (1 - q^n)/(1 - e^ω q^n)
        for s in [1, -1] {
            out = out.mul(&Dense::geometric(nq, nx, e, s, 1)).mul(&Dense::binomial(nq, nx, e, 0, -1));
        }
        if kind == ThetaBundleKind::Theta1 {
            for s in [1, -1] {
                out = out.mul(&Dense::binomial(nq, nx, e, s, 1)).mul(&Dense::geometric(nq, nx, e, 0, -1));
            }
        }
    }
    if kind == ThetaBundleKind::Theta2 {
        for n in 1..=nq {
            let e = 2 * n - 1;
            if e >= nq {
                break;
            }
            for s in [1, -1] {
                out = out.mul(&Dense::binomial(nq, nx, e, s, -1)).mul(&Dense::geometric(nq, nx, e, 0, 1));
            }
        }
    }
    out
}

#[test]
fn theta_bundles_match_direct_product_for_one_pair() {
    let q_order = 7;
    for kind in [ThetaBundleKind::Theta1, ThetaBundleKind::Theta2] {
        let dense = dense_theta(kind, q_order as usize, 9);
        for dim in [2, 3] {
            let profile = RootProfile::new(dim, 8).unwrap();
            let theta = build_theta_bundle(kind, profile, q_order);
            for e in 0..q_order {
                let c = theta.series().coefficient(HalfExp(e)).unwrap();
                for k in 0..=2u32 {
                    let got = c.coefficient(&Monomial::from_exponents(vec![k]));
                    assert_eq!(got, dense.c[e as usize][2 * k as usize], "{kind:?} dim {dim} q^{e}/2 x^{}", 2 * k);
                    assert!(dense.c[e as usize][2 * k as usize + 1].is_zero());
                }
            }
        }
    }
}

#[test]
fn printed_modular_expansions() {
    let expect: [(DeltaEps, &[(u32, Rational)]); 4] = [
        (DeltaEps::Delta1, &[(0, rat(1, 4)), (2, int(6)), (4, int(6))]),
        (DeltaEps::Eps1, &[(0, rat(1, 16)), (2, int(-1)), (4, int(7))]),
        (DeltaEps::Delta2, &[(0, rat(-1, 8)), (1, int(-3)), (2, int(-3))]),
        (DeltaEps::Eps2, &[(1, int(1)), (2, int(8))]),
    ];
    for (which, printed) in expect {
        let s = delta_epsilon(which, 21).series;
        for (e, c) in printed {
            assert_eq!(&s.coefficient(HalfExp(*e)).unwrap(), c, "{which:?} at q^{e}/2");
        }
        for (e, c) in s.terms() {
            if e.twice_value() >= 3 {
                assert!(c.is_integer(), "{which:?} at q^{e}");
            }
        }
    }
}

fn same_character(a: &CharacterElement, b: &CharacterElement) -> bool {
    a.rank() == b.rank() && a.form_part() == b.form_part()
}

#[test]
fn first_two_decomposition_bundles_in_closed_form() {
    for (m, d) in standard_cases() {
        let case = DecompositionCase::classify(m, d).unwrap();
        let profile = RootProfile::new(d, case.form_degree(m)).unwrap();
        let dec = decompose_theta2(m, profile, &DirectBuild).unwrap();
        let t = CharacterElement::tangent(profile);
        let c = |n: i64| CharacterElement::trivial(profile, n);
        let d = i64::from(d);
        let m = i64::from(m);
        let (e0, e1) = match case {
            DecompositionCase::B => (c(-1), t.add(&c(24 * (2 * m + 1) - d)).unwrap()),
            DecompositionCase::Z => (c(1), t.scale(-1).sub(&c(48 * m - d)).unwrap()),
        };
        assert!(same_character(&dec.elements[0], &e0), "m={m} dim={d} r=0: {}", dec.elements[0]);
        assert_eq!(dec.elements.len() as i64, m + 1);
        if m > 0 {
            assert!(same_character(&dec.elements[1], &e1), "m={m} dim={d} r=1: {}", dec.elements[1]);
        }
    }
}

#[test]
fn tangent_character_from_roots() {
    let profile = RootProfile::new(4, 8).unwrap();
    let t = CharacterElement::tangent(profile).character();
    let roots = [rat(1, 3), rat(2, 5)];
    // Σ (e^r + e^{-r}) = Σ 2cosh r through degree 4 in the roots
    let direct: Rational =
        roots.iter().map(|r| int(2) * (int(1) + r * r / int(2) + num_traits::pow(r.clone(), 4) / int(24))).sum();
    assert_eq!(t.eval_at_roots(&roots).unwrap(), direct);
    assert_eq!(GradedClass::p(profile, 2).eval_at_roots(&roots).unwrap(), rat(1, 9) * rat(4, 25));
}
