use proptest::prelude::*;

use slicereg::boundary::{boundary_schwarz_quantity, hopf_bound};
use slicereg::geometry::sample_ball;
use slicereg::quaternion::{same_sphere, slice_decompose};
use slicereg::series::{pointwise_star, quotient_eval, t_map};
use slicereg::verify::{
    blaschke_product, bounded_coefficient_map, check_schwarz_pick_ball, estimate_boundary_data,
    lindelof_margins, ReportBuilder, SampleConfig,
};
use slicereg::{lie_bracket, Quaternion, RegularSeries, SliceFunction};

fn quat(r: f64) -> impl Strategy<Value = Quaternion> {
    [-r..r, -r..r, -r..r, -r..r].prop_map(|[a, b, c, d]| Quaternion::new(a, b, c, d))
}

fn ball_point() -> impl Strategy<Value = Quaternion> {
    quat(0.5).prop_filter("inside the ball", |q| q.norm() < 0.99)
}

/// Moebius parameters whose 128-term truncation is exact on the closed ball.
fn moebius_parameter() -> impl Strategy<Value = Quaternion> {
    quat(0.5).prop_filter("|u| <= 3/4", |q| q.norm() <= 0.75)
}

fn poly(max_degree: usize) -> impl Strategy<Value = RegularSeries> {
    prop::collection::vec(quat(1.0), 1..=max_degree + 1)
        .prop_map(|c| RegularSeries::new(c).unwrap())
}

fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hamilton_product_is_associative(p in quat(10.0), q in quat(10.0), r in quat(10.0)) {
        let scale = p.norm() * q.norm() * r.norm();
        prop_assert!(close((p * q) * r, p * (q * r), 1e-13 * scale.max(1e-300)));
    }

    #[test]
    fn norm_is_multiplicative(p in quat(10.0), q in quat(10.0)) {
        let scale = p.norm() * q.norm();
        prop_assert!(((p * q).norm() - scale).abs() <= 1e-13 * scale.max(1e-300));
        prop_assert!(close((p * q).conj(), q.conj() * p.conj(), 1e-13 * scale.max(1e-300)));
    }

    #[test]
    fn conjugation_stays_on_sphere(p in quat(3.0), q in quat(3.0)) {
        prop_assume!(p.norm() > 1e-3 && q.im_norm() > 1e-3);
        let moved = p * q * p.inverse().unwrap();
        prop_assert!(same_sphere(moved, q));
    }

    #[test]
    fn bracket_is_imaginary(p in quat(10.0), q in quat(10.0)) {
        prop_assert!(lie_bracket(p, q).re().abs() <= 1e-13 * (p.norm() * q.norm()).max(1e-300));
    }

    #[test]
    fn slice_coordinates_round_trip(q in quat(10.0)) {
        let s = slice_decompose(q);
        let back = Quaternion::on_slice(s.x, s.y, s.unit);
        prop_assert!(close(back, q, 1e-14 * q.norm().max(1e-300)));
    }

    #[test]
    fn star_product_is_associative(f in poly(8), g in poly(8), h in poly(8)) {
        let lhs = f.star(&g).star(&h);
        let rhs = f.star(&g.star(&h));
        let scale = f.coeff_scale() * g.coeff_scale() * h.coeff_scale();
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!(close(*a, *b, 1e-12 * scale.max(1.0)));
        }
    }

    #[test]
    fn series_product_matches_pointwise_product(f in poly(8), g in poly(8), q in quat(1.0)) {
        let series = f.star(&g).eval(q);
        let pointwise = pointwise_star(&f, &g, q);
        let scale = f.eval(q).norm() * g.l1_norm() * q.norm().max(1.0).powi(8) + 1e-300;
        prop_assert!(close(series, pointwise, 1e-9 * scale.max(series.norm())));
    }

    #[test]
    fn product_modulus_factorizes(f in poly(6), g in poly(6), q in quat(1.0)) {
        let fq = f.eval(q);
        prop_assume!(fq.norm() > 1e-6);
        let moved = q.conjugate_by(fq).unwrap();
        let lhs = f.star(&g).eval(q).norm();
        let rhs = fq.norm() * g.eval(moved).norm();
        prop_assert!((lhs - rhs).abs() <= 1e-9 * lhs.max(rhs).max(1.0));
    }

    #[test]
    fn t_map_round_trips(f in poly(6), q in quat(1.0)) {
        let sym = f.symmetrize().eval(q);
        prop_assume!(sym.norm() > 1e-3 * f.coeff_scale().powi(2) && f.eval_conj(q).norm() > 1e-3);
        let t = t_map(&f, q).unwrap();
        prop_assert!(same_sphere(t, q));
        let back = t_map(&f.conj_regular(), t).unwrap();
        prop_assert!(close(back, q, 1e-10 * q.norm().max(1.0)));
    }

    #[test]
    fn symmetrization_has_real_coefficients(f in poly(8)) {
        let s = f.symmetrize();
        let scale = f.coeff_scale().powi(2);
        for c in s.coeffs() {
            prop_assert!(c.im_norm() <= 1e-14 * scale.max(1.0));
        }
    }

    #[test]
    fn reciprocal_inverts_up_to_half_order(a0 in quat(1.0), rest in prop::collection::vec(quat(0.3), 1..=4)) {
        prop_assume!(a0.norm() > 0.8);
        let mut coeffs = vec![a0];
        coeffs.extend(rest);
        let f = RegularSeries::new(coeffs).unwrap();
        let product = f.reciprocal().unwrap().star(&f);
        let scale = f.coeff_scale();
        for (n, c) in product.coeffs().iter().enumerate().take(64) {
            let target = if n == 0 { Quaternion::ONE } else { Quaternion::ZERO };
            prop_assert!(close(*c, target, 1e-10 * scale.max(1.0)), "n = {} c = {}", n, c);
        }
    }

    #[test]
    fn derivative_matches_finite_differences(f in poly(8), q in quat(0.8)) {
        let h = 1e-5;
        let fd = (f.eval(q + h) - f.eval(q - h)) / (2.0 * h);
        prop_assert!(close(fd, f.eval_derivative(q), 1e-6 * f.l1_norm().max(1.0) * 64.0));
    }

    #[test]
    fn linear_division_reconstructs(f in poly(8), q0 in quat(1.0)) {
        let quotient = f.divide_linear(q0).unwrap();
        // f(q) - f(q0) = (q - q0) * quotient, checked on coefficients
        let rebuilt = RegularSeries::linear(q0).star(&quotient).add(&RegularSeries::constant(f.eval(q0)));
        let scale = f.coeff_scale() * q0.norm().max(1.0).powi(8);
        for (a, b) in rebuilt.coeffs().iter().zip(f.coeffs()) {
            prop_assert!(close(*a, *b, 1e-9 * scale.max(1.0)));
        }
    }

    #[test]
    fn moebius_maps_ball_into_ball(u in moebius_parameter(), q in quat(0.55)) {
        prop_assume!(q.norm() < 1.0);
        let m = RegularSeries::moebius(u).unwrap();
        let den = RegularSeries::new(vec![Quaternion::ONE, -u.conj()]).unwrap();
        let value = quotient_eval(&den, &RegularSeries::linear(u), q).unwrap();
        prop_assert!(value.norm() < 1.0);
        prop_assert!(close(value, m.eval(q), 1e-12));
    }

    #[test]
    fn coefficient_json_round_trips(f in poly(8)) {
        let text = f.to_json();
        let back = RegularSeries::from_json(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_json(), text);
    }

    #[test]
    fn schwarz_quantity_below_derivative_modulus(u in moebius_parameter(), m in 0usize..3, xi in quat(1.0)) {
        prop_assume!(xi.norm() > 1e-3);
        let xi = xi / xi.norm();
        prop_assume!(xi.im_norm() > 1e-2);
        let f = RegularSeries::power(m).star(&RegularSeries::moebius(u).unwrap());
        let lambda = boundary_schwarz_quantity(&f, xi).unwrap();
        prop_assert!(f.eval_derivative(xi).norm() >= lambda - 1e-8);
        prop_assert!(lambda >= hopf_bound(&f, m).unwrap() - 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blaschke_products_are_self_maps(seed in any::<u64>(), index in 0usize..1000) {
        let f = blaschke_product(seed, index, 128);
        for q in sample_ball(seed ^ 1, 200).unwrap() {
            prop_assert!(f.eval(q).norm() < 1.0);
        }
    }

    #[test]
    fn schwarz_pick_contracts(seed in any::<u64>(), q0 in ball_point(), q in ball_point()) {
        let f = blaschke_product(seed, 0, 128);
        prop_assert!(check_schwarz_pick_ball(&f, q0, q).unwrap() >= -1e-9);
    }

    #[test]
    fn lindelof_estimates_hold(seed in any::<u64>(), q in ball_point()) {
        let m = lindelof_margins(&bounded_coefficient_map(seed, 0), q);
        for v in [m.centered, m.modulus_lower, m.modulus_upper, m.increment] {
            prop_assert!(v >= -1e-9);
        }
        if let Some(r) = m.refined {
            prop_assert!(r >= -1e-9);
        }
    }

    #[test]
    fn angular_derivative_above_julia_floor(seed in any::<u64>()) {
        let f = blaschke_product(seed, 0, 128);
        let bd = estimate_boundary_data(&f, &SampleConfig::default());
        let a0 = f.coeff(0).norm();
        prop_assert!(!bd.divergent);
        prop_assert!(bd.alpha >= (1.0 - a0) / (1.0 + a0) - 1e-4);
        prop_assert!(bd.angular_consistent());
    }

    #[test]
    fn report_passes_iff_no_violations(margins in prop::collection::vec(-1.0f64..1.0, 1..50)) {
        let cfg = SampleConfig::default();
        let mut b = ReportBuilder::new("margins", &cfg);
        for m in &margins {
            b.inequality("m", None, *m, None);
        }
        let r = b.finish();
        prop_assert_eq!(r.pass, r.violations == 0);
        prop_assert_eq!(r.violations, margins.iter().filter(|m| **m < cfg.tol_strict).count());
    }
}

#[test]
fn slice_function_trait_objects_agree_with_series() {
    let f = RegularSeries::moebius(Quaternion::new(0.1, 0.2, 0.0, -0.3)).unwrap();
    let boxed: Box<dyn SliceFunction> = Box::new(f.clone());
    let q = Quaternion::new(0.2, 0.1, 0.3, -0.1);
    assert_eq!(boxed.eval(q), f.eval(q));
    assert_eq!(boxed.eval_conj(q), f.eval_conj(q));
}
