use std::time::Instant;

use propagators::kernels::{radial_h0_kernel, radial_sho_kernel};
use propagators::oracle::{
    eigenfunction_residual, eigenfunction_residual_beyond, hankel_kernel_oracle, hankel_sho_oracle,
    hankel_spec, standard_suite, GridSpec, SUITE_ORDERS,
};
use propagators::{BesselOrder, KernelPoint, PhysParams, QuadratureSpec};

#[test]
fn spectral_oracle_matches_closed_form() {
    let base = QuadratureSpec::default();
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for &n in &SUITE_ORDERS {
        let order = BesselOrder::new(n).unwrap();
        let p = PhysParams::new(1.0, 1.0, 0.0, order).unwrap();
        for pt in standard_suite() {
            let closed = radial_h0_kernel(&pt, &p).unwrap().value;
            let oracle =
                hankel_kernel_oracle(&pt, order, &p, &hankel_spec(&pt, &p, &base)).unwrap();
            let err = oracle.relative_error(closed);
            worst = worst.max(err);
            assert!(
                err < 1e-6,
                "n = {n}, {pt:?}: {err:e} (estimate {:e})",
                oracle.error_estimate
            );
        }
    }
    println!("worst {worst:e} in {:?}", start.elapsed());
}

#[test]
fn spectral_oracle_examples() {
    let base = QuadratureSpec::default();
    let half = PhysParams::new(1.0, 1.0, 0.0, BesselOrder::HALF).unwrap();
    let pt = KernelPoint::new(1.0, 2.0, 0.5);
    let image = propagators::kernels::image_kernel(&pt, &half)
        .unwrap()
        .value;
    let v = hankel_kernel_oracle(
        &pt,
        BesselOrder::HALF,
        &half,
        &hankel_spec(&pt, &half, &base),
    )
    .unwrap();
    assert!(v.relative_error(image) < 1e-6);

    let zero = PhysParams::new(1.0, 1.0, 0.0, BesselOrder::ZERO).unwrap();
    let pt = KernelPoint::new(1.0, 1.0, 1.0);
    // (1/i) I₀(−i) e^{i}, I₀(−i) = J₀(1)
    let want = num_complex::Complex64::new(0.0, -0.7651976865579666)
        * num_complex::Complex64::from_polar(1.0, 1.0);
    let v = hankel_kernel_oracle(
        &pt,
        BesselOrder::ZERO,
        &zero,
        &hankel_spec(&pt, &zero, &base),
    )
    .unwrap();
    assert!(v.relative_error(want) < 1e-6);
}

#[test]
fn oscillator_mode_matches_closed_form() {
    let base = QuadratureSpec::default();
    for &n in &[0.0, 1.5] {
        let order = BesselOrder::new(n).unwrap();
        let p = PhysParams::new(1.0, 1.0, 1.0, order).unwrap();
        for &(x1, x2, t) in &[(0.8, 1.3, 0.7), (1.5, 0.6, 2.2)] {
            let pt = KernelPoint::new(x1, x2, t);
            let inner = KernelPoint::new(x1, x2, t.sin());
            let closed = radial_sho_kernel(&pt, &p).unwrap().value;
            let v = hankel_sho_oracle(&pt, order, &p, &hankel_spec(&inner, &p, &base)).unwrap();
            assert!(v.relative_error(closed) < 1e-6, "n = {n}, t = {t}");
        }
    }
}

#[test]
fn unextrapolated_oracle_is_worse() {
    let p = PhysParams::new(1.0, 1.0, 0.0, BesselOrder::new(1.0).unwrap()).unwrap();
    let pt = KernelPoint::new(0.9, 1.4, 0.8);
    let closed = radial_h0_kernel(&pt, &p).unwrap().value;
    let single = QuadratureSpec {
        extrapolation_levels: 1,
        ..Default::default()
    };
    let v = hankel_kernel_oracle(&pt, p.order(), &p, &hankel_spec(&pt, &p, &single)).unwrap();
    assert!(v.relative_error(closed) > 1e-4);
}

#[test]
fn eigenfunction_residuals_converge_at_second_order() {
    let p = PhysParams::default();
    for &n in &[0.5, 1.5, 2.5] {
        let order = BesselOrder::new(n).unwrap();
        let coarse = GridSpec::half_line(20.0, 2000, 1e-3).unwrap();
        let fine = GridSpec::half_line(20.0, 4000, 1e-3).unwrap();
        let a = eigenfunction_residual(2.0, order, &p, &coarse).unwrap();
        let b = eigenfunction_residual(2.0, order, &p, &fine).unwrap();
        assert!(a < 1e-3, "n = {n}: {a:e}");
        assert!((a / b - 4.0).abs() < 0.5, "n = {n}: ratio {}", a / b);
    }
}

#[test]
fn order_zero_residual_away_from_origin() {
    let p = PhysParams::default();
    let grid = GridSpec::half_line(20.0, 2000, 1e-3).unwrap();
    let fine = GridSpec::half_line(20.0, 4000, 1e-3).unwrap();
    let a = eigenfunction_residual_beyond(2.0, BesselOrder::ZERO, &p, &grid, 0.25).unwrap();
    let b = eigenfunction_residual_beyond(2.0, BesselOrder::ZERO, &p, &fine, 0.25).unwrap();
    assert!(a < 1e-3, "{a:e}");
    assert!((a / b - 4.0).abs() < 0.5, "ratio {}", a / b);
    // three excluded nodes are not enough: the √x behaviour near 0 dominates
    let naive = eigenfunction_residual(2.0, BesselOrder::ZERO, &p, &grid).unwrap();
    assert!(naive > a);
}
