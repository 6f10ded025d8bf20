use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use logsurf::gamma::{g_tilde, gamma, phase_a, phase_a_g};
use logsurf::genseries::{crossing_probe, eval_series, series_norm, unit_norm_radius, MixedSeries, Term};
use logsurf::stirling::{phi, phi_asymptotic, phi_binet, Truncation, BINET_TOLERANCE};
use logsurf::surface::{
    chart_e, chart_l, in_sector, lift_pi0, log_power, project_pi, LogPoint, LogVector, SectorClass, SectorSpec,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point() -> impl Strategy<Value = LogPoint> {
    (1e-3..10.0f64, -20.0..20.0f64).prop_map(|(m, a)| LogPoint::new(m, a).unwrap())
}

fn real_series(m: usize, n: usize) -> impl Strategy<Value = MixedSeries> {
    prop::collection::vec(
        (prop::collection::vec(0.0..3.0f64, m), prop::collection::vec(0u32..4, n), -2.0..2.0f64),
        1..6,
    )
    .prop_map(move |raw| {
        let terms = raw.into_iter().map(|(alpha, beta, a)| Term { alpha, beta, coeff: c(a, 0.0) }).collect();
        MixedSeries::new(m, n, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chart_round_trip(z in point()) {
        let back = chart_e(chart_l(&z).unwrap());
        prop_assert!((back.modulus() - z.modulus()).abs() <= 1e-14 * z.modulus());
        prop_assert!((back.argument() - z.argument()).abs() <= 1e-14 * z.argument().abs().max(1.0));
    }

    #[test]
    fn projection_round_trip(re in -10.0..10.0f64, im in -10.0..10.0f64) {
        prop_assume!(!(im == 0.0 && re <= 0.0));
        let w = c(re, im);
        let back = project_pi(&lift_pi0(w).unwrap());
        prop_assert!((back - w).norm() <= 1e-14 * w.norm().max(1.0));
    }

    #[test]
    fn log_power_is_a_homomorphism(z in prop::collection::vec(point(), 2), k in prop::collection::vec(0.0..3.0f64, 2), l in prop::collection::vec(0.0..3.0f64, 2)) {
        let z = LogVector::new(z).unwrap();
        let a = log_power(&z, &k).unwrap().mul(&log_power(&z, &l).unwrap());
        let sum: Vec<f64> = k.iter().zip(&l).map(|(x, y)| x + y).collect();
        let b = log_power(&z, &sum).unwrap();
        prop_assert!((a.modulus() - b.modulus()).abs() <= 1e-12 * b.modulus());
        prop_assert!((a.argument() - b.argument()).abs() <= 1e-12 * b.argument().abs().max(1.0));
    }

    #[test]
    fn disk_branch_is_downward_closed(m in 1e-3..1.0f64, a in -10.0..10.0f64, shrink in 0.0..1.0f64) {
        let spec = SectorSpec::new(vec![vec![1.0]], vec![1.0], PI / 2.0, 2.0, 3).unwrap();
        let z = LogVector::new(vec![LogPoint::new(m, a).unwrap()]).unwrap();
        if in_sector(&z, &spec).unwrap() == SectorClass::InDp {
            let smaller = LogVector::new(vec![LogPoint::new(m * shrink, a).unwrap()]).unwrap();
            prop_assert!(in_sector(&smaller, &spec).unwrap().in_sp());
        }
    }

    #[test]
    fn series_conjugation(f in real_series(2, 1), x in prop::collection::vec(point(), 2), y in (-2.0..2.0f64, -2.0..2.0f64)) {
        let y = c(y.0, y.1);
        let v = eval_series(&f, &x, &[y]).unwrap().value;
        let xc: Vec<LogPoint> = x.iter().map(|p| p.conj()).collect();
        let w = eval_series(&f, &xc, &[y.conj()]).unwrap().value;
        prop_assert!((w - v.conj()).norm() <= 1e-13 * v.norm().max(1.0) * 1e3);
    }

    #[test]
    fn value_bounded_by_norm(f in real_series(2, 1), x in prop::collection::vec(point(), 2), y in (-2.0..2.0f64, -2.0..2.0f64)) {
        let y = c(y.0, y.1);
        let v = eval_series(&f, &x, &[y]).unwrap().value;
        let r: Vec<f64> = x.iter().map(|p| p.modulus()).collect();
        let n = series_norm(&f, &r, &[y.norm()]).unwrap();
        prop_assert!(v.norm() <= n * (1.0 + 1e-12));
    }

    #[test]
    fn unit_radius_shrinks_when_terms_are_added(a in 0.1..3.0f64, alpha in 0.2..3.0f64, b in 0.01..3.0f64, beta in 0.2..3.0f64) {
        prop_assume!((alpha - beta).abs() > 1e-6);
        let g = MixedSeries::univariate(&[(alpha, a)]).unwrap();
        let h = MixedSeries::univariate(&[(alpha, a), (beta, b)]).unwrap();
        prop_assert!(unit_norm_radius(&h).unwrap() <= unit_norm_radius(&g).unwrap() * (1.0 + 1e-9));
    }

    #[test]
    fn crossings_grow_with_the_window(alpha0 in 0.3..2.0f64, a in -0.3..0.3f64, t in 20.0..60.0f64) {
        let f = MixedSeries::univariate(&[(alpha0, 1.0), (alpha0 + 1.0, a)]).unwrap();
        let one = crossing_probe(&f, 1.0, t, 4000).unwrap().crossings;
        let two = crossing_probe(&f, 1.0, 2.0 * t, 8000).unwrap().crossings;
        prop_assert!(two >= one);
        let expected = (alpha0 * t / (2.0 * PI)).floor() as usize;
        prop_assert!(two - one + 1 >= expected);
    }

    #[test]
    fn schwarz_reflection(re in -20.0..20.0f64, im in 0.01..20.0f64) {
        let z = c(re, im);
        prop_assert_eq!(phi(z.conj()).unwrap(), phi(z).unwrap().conj());
        prop_assert_eq!(gamma(z.conj()).unwrap(), gamma(z).unwrap().conj());
        prop_assert_eq!(phase_a(z.conj()).unwrap(), -phase_a(z).unwrap());
    }

    #[test]
    fn laplace_direction_independence(r in 1.0..30.0f64, arg in -1.2..1.2f64, d1 in -0.35..0.35f64, d2 in -0.35..0.35f64) {
        let z = Complex64::from_polar(r, arg);
        let a = phi_binet(z, (-arg + d1).clamp(-1.4, 1.4)).unwrap();
        let b = phi_binet(z, (-arg + d2).clamp(-1.4, 1.4)).unwrap();
        prop_assert!((a - b).norm() <= 10.0 * BINET_TOLERANCE);
    }

    #[test]
    fn asymptotic_series_is_real_on_the_axis(x in 1.0..100.0f64, order in 1usize..40) {
        prop_assert_eq!(phi_asymptotic(c(x, 0.0), Truncation::Order(order)).unwrap().value.im, 0.0);
    }

    #[test]
    fn functional_equation(re in -10.0..10.0f64, im in -10.0..10.0f64) {
        prop_assume!(im.abs() > 1e-3 || re > 0.0);
        let z = c(re, im);
        let a = gamma(z + 1.0).unwrap();
        let b = z * gamma(z).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm());
    }

    #[test]
    fn g_recurrence(re in -6.0..6.0f64, im in -5.0..5.0f64) {
        prop_assume!(im.abs() > 1e-3);
        let z = c(re, im);
        let a = g_tilde(z + 1.0).unwrap();
        let b = z * g_tilde(z).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
    }

    #[test]
    fn g_phase_close_to_gamma_phase_high_up(re in -30.0..30.0f64, im in 2.0..30.0f64) {
        let z = c(re, im);
        let d = (phase_a_g(z).unwrap() - phase_a(z).unwrap()).abs();
        prop_assert!(d <= 2.0 * (-4.0 * PI).exp());
    }
}
