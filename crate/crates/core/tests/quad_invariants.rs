use carleman_core::quad::{
    bump_eval, carleman_integrals, check_support, integrate_box, verify_carleman, weighted_integrals, BumpFunction,
    CompactSupport, GridSpec, Rule,
};
use carleman_core::weights::cone_contains;
use carleman_core::{Error, WeightParams};

fn params() -> WeightParams {
    WeightParams::new(2.46, 1.999, 0.8092, 0.60).unwrap()
}

fn bump() -> BumpFunction {
    BumpFunction::new(1.0, vec![4.0, 0.0, 0.5], vec![0.8, 0.8, 0.3]).unwrap()
}

fn grid(n: usize) -> GridSpec {
    GridSpec::uniform(2, n, Rule::Simpson).unwrap()
}

#[test]
fn unit_weight_integral_converges() {
    let u = bump();
    let bx = u.support_box();
    let u2 = |x: &[f64], t: f64| bump_eval(&u, x, t).value.powi(2);
    let coarse = integrate_box(&bx, &grid(81), u2).unwrap();
    let fine = integrate_box(&bx, &grid(161), u2).unwrap();
    assert!(coarse > 0.0);
    assert!((coarse - fine).abs() <= 1e-3 * fine, "{coarse} vs {fine}");

    let sums = weighted_integrals(&u, &grid(81), |_, _| Ok(0.0)).unwrap();
    assert_eq!(sums.log_normalizer, 0.0);
    assert!(sums.lhs > coarse);
}

#[test]
fn ratio_invariant_under_amplitude() {
    let u = bump();
    let base = carleman_integrals(&u, &params(), 1.0, 0.5, &grid(41)).unwrap();
    for lam in [0.5, 3.0, 4.0] {
        let r = carleman_integrals(&u.scaled(lam), &params(), 1.0, 0.5, &grid(41)).unwrap();
        assert!((r.ratio - base.ratio).abs() <= 1e-12 * base.ratio, "lambda {lam}");
        assert!((r.lhs - lam * lam * base.lhs).abs() <= 1e-12 * r.lhs);
    }
}

#[test]
fn zero_function_passes_trivially() {
    let zero = bump().scaled(0.0);
    let r = carleman_integrals(&zero, &params(), 1.0, 0.5, &grid(41)).unwrap();
    assert_eq!((r.lhs, r.rhs, r.ratio), (0.0, 0.0, 0.0));
    assert!(r.pass);
}

#[test]
fn mild_time_factor_passes_and_translates() {
    let u = bump();
    let here = verify_carleman(&u, &params(), &[0.1, 1.0, 10.0], 0.5, 240.0, &grid(41)).unwrap();
    let deeper = verify_carleman(
        &u.shifted(&[2.0, 0.0]),
        &params(),
        &[0.1, 1.0, 10.0],
        0.5,
        240.0,
        &grid(41),
    )
    .unwrap();
    for (a, b) in here.iter().zip(&deeper) {
        assert!(a.pass && b.pass, "{a:?} {b:?}");
        assert_eq!(a.k, b.k);
    }
}

#[test]
fn large_time_factor_is_stable_or_reported() {
    let u = bump();
    for k in [2.0, 60.0] {
        match carleman_integrals(&u, &params(), 10.0, k, &grid(41)) {
            Ok(r) => {
                assert!(r.lhs.is_finite() && r.rhs.is_finite());
                assert!(r.log_normalizer.is_finite());
            }
            Err(Error::DegenerateWeight { active, total }) => assert!(active < total / 100),
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    let plain = weighted_integrals(&u, &grid(41), |_, _| Ok(0.0)).unwrap();
    let shifted = weighted_integrals(&u, &grid(41), |x, _| Ok(1e6 + 1e-3 * x[0])).unwrap();
    assert!(shifted.max_abs_log_weight > 1e6);
    assert!(shifted.lhs.is_finite() && shifted.rhs.is_finite());
    let back = shifted.lhs * (shifted.log_normalizer - 1e6).exp();
    assert!((back - plain.lhs).abs() <= 1e-2 * plain.lhs, "{back} vs {}", plain.lhs);
}

#[test]
fn empty_a_list_and_support_checks() {
    assert!(verify_carleman(&bump(), &params(), &[], 60.0, 240.0, &grid(41))
        .unwrap()
        .is_empty());
    let outside = BumpFunction::new(1.0, vec![1.2, 0.0, 0.5], vec![0.8, 0.8, 0.3]).unwrap();
    assert!(check_support(&outside.support_box(), 0.6).is_err());
    let late = BumpFunction::new(1.0, vec![4.0, 0.0, 0.9], vec![0.8, 0.8, 0.3]).unwrap();
    assert!(carleman_integrals(&late, &params(), 1.0, 0.5, &grid(41)).is_err());
}

#[test]
fn boundary_example_is_excluded() {
    let eps: f64 = 0.6495;
    let x = [eps, (1.0 - eps * eps).sqrt()];
    assert!(!cone_contains(&x, eps));
    assert!(cone_contains(&[1.0, 0.0], eps));
}
