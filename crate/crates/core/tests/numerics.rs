use std::f64::consts::PI;

use num_complex::Complex64;
use thetacert_core::modforms::{delta_epsilon, theta_nullwert_fourth, DeltaEps, ThetaKind};
use thetacert_core::thetanum::{
    check_transformation, delta_epsilon_eval, required_terms, sample_points, theta, theta_eval, theta_prime_zero,
    ComplexPoint, NumericLaw,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Bilateral sum forms, summed over `|n| ≤ 40`.
fn theta_sum(kind: ThetaKind, v: Complex64, tau: Complex64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for n in -40i32..=40 {
        let nf = f64::from(n);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        s += match kind {
            ThetaKind::Theta => sign * (PI * I * tau * (nf + 0.5).powi(2) + PI * I * (2.0 * nf + 1.0) * v).exp(),
            ThetaKind::Theta1 => (PI * I * tau * (nf + 0.5).powi(2) + PI * I * (2.0 * nf + 1.0) * v).exp(),
            ThetaKind::Theta2 => sign * (PI * I * tau * nf * nf + 2.0 * PI * I * nf * v).exp(),
            ThetaKind::Theta3 => (PI * I * tau * nf * nf + 2.0 * PI * I * nf * v).exp(),
        };
    }
    if kind == ThetaKind::Theta {
        -I * s
    } else {
        s
    }
}

const KINDS: [ThetaKind; 4] = [ThetaKind::Theta, ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3];

#[test]
fn product_and_sum_forms_agree() {
    let tau = Complex64::new(0.0, 1.3);
    for p in sample_points(8, 3) {
        for tau in [tau, p.tau()] {
            for kind in KINDS {
                let a = theta(kind, p.v(), tau).unwrap();
                let b = theta_sum(kind, p.v(), tau);
                assert!((a - b).norm() < 1e-12 * b.norm().max(1.0), "{kind:?} v={} tau={tau}", p.v());
            }
        }
    }
}

#[test]
fn parity_in_v() {
    for p in sample_points(10, 11) {
        for kind in KINDS {
            let a = theta(kind, p.v(), p.tau()).unwrap();
            let b = theta(kind, -p.v(), p.tau()).unwrap();
            let expected = if kind == ThetaKind::Theta { -b } else { b };
            assert!((a - expected).norm() < 1e-13 * a.norm().max(1.0), "{kind:?}");
        }
    }
}

#[test]
fn adaptive_truncation_is_stable() {
    for p in sample_points(10, 5) {
        let n = required_terms(&p);
        for kind in KINDS {
            let a = theta_eval(kind, &p, n);
            let b = theta_eval(kind, &p, n + 25);
            assert!((a - b).norm() < 1e-14 * b.norm().max(1.0), "{kind:?}");
        }
    }
}

#[test]
fn exact_series_evaluate_to_the_products() {
    let tau = Complex64::new(0.0, 1.3);
    let sqrt_q = (PI * I * tau).exp();
    let zero = Complex64::new(0.0, 0.0);
    for kind in [ThetaKind::Theta1, ThetaKind::Theta2, ThetaKind::Theta3] {
        let exact = theta_nullwert_fourth(kind, 40).eval_complex(sqrt_q);
        let numeric = theta(kind, zero, tau).unwrap().powu(4);
        assert!((exact - numeric).norm() < 1e-12, "{kind:?}");
    }
    for which in DeltaEps::ALL {
        let exact = delta_epsilon(which, 40).series.eval_complex(sqrt_q);
        let numeric = delta_epsilon_eval(which, tau).unwrap();
        assert!((exact - numeric).norm() < 1e-12, "{which:?}");
    }
}

#[test]
fn derivative_at_zero() {
    let tau = Complex64::new(0.2, 0.9);
    let h = 1e-5;
    let fd = (theta(ThetaKind::Theta, Complex64::new(h, 0.0), tau).unwrap()
        - theta(ThetaKind::Theta, Complex64::new(-h, 0.0), tau).unwrap())
        / (2.0 * h);
    assert!((fd - theta_prime_zero(tau).unwrap()).norm() < 1e-8);
}

#[test]
fn every_law_holds_at_sample_points() {
    let points = sample_points(6, 2024);
    for law in NumericLaw::ALL {
        let report = check_transformation(law, &points, 1e-9, None).unwrap();
        assert!(report.pass, "{law}: {}", report.max_residual());
    }
}

#[test]
fn laws_detect_a_wrong_point_value() {
    let p = ComplexPoint::new(Complex64::new(0.1, 0.2), Complex64::new(0.1, 1.0)).unwrap();
    let wrong = theta(ThetaKind::Theta2, p.v(), p.tau() + 1.0).unwrap();
    let right = theta(ThetaKind::Theta3, p.v(), p.tau()).unwrap();
    assert!((wrong - right).norm() < 1e-12);
    let off = theta(ThetaKind::Theta2, p.v(), p.tau()).unwrap();
    assert!((off - right).norm() > 1e-3);
}
