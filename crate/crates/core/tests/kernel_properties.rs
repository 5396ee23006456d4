use num_complex::Complex64;
use propagators::kernels::{
    free_kernel, kernel_via_route, radial_sho_kernel, semigroup_check, semigroup_spec,
    short_time_asymptote, Domain,
};
use propagators::{BesselOrder, KernelPoint, KernelSelector, PhysParams, RouteId};
use proptest::prelude::*;

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn params(n: f64, omega: f64) -> PhysParams {
    PhysParams::new(1.0, 1.0, omega, BesselOrder::new(n).unwrap()).unwrap()
}

const POSITIONS: [f64; 5] = [0.3, 0.7, 1.2, 1.9, 2.8];
const OMEGA_T: [f64; 7] = [-1.2, -0.8, -0.4, 0.2, 0.6, 1.0, 1.4];

#[test]
fn routes_match_closed_forms_on_grid() {
    for &n in &[0.0, 0.5, 1.0, 1.5, 2.5] {
        let p = params(n, 1.3);
        let mut worst = 0.0_f64;
        for &x1 in &POSITIONS {
            for &x2 in &POSITIONS {
                for &wt in &OMEGA_T {
                    let pt = KernelPoint::new(x1, x2, wt / p.omega());
                    let direct = kernel_via_route(RouteId::Direct, &pt, &p).unwrap().value;
                    for route in &RouteId::ALL[1..] {
                        let v = kernel_via_route(*route, &pt, &p).unwrap().value;
                        worst = worst.max(rel(v, direct));
                    }
                }
            }
        }
        assert!(worst < 1e-10, "n = {n}: worst {worst:e}");
    }
}

#[test]
fn line_routes_with_general_units() {
    let p = PhysParams::new(0.4, 2.3, 0.7, BesselOrder::HALF).unwrap();
    assert_eq!(Domain::for_params(&p), Domain::Line);
    for &x1 in &[-1.5, 0.2, 2.0] {
        for &x2 in &[-0.4, 1.1] {
            let pt = KernelPoint::new(x1, x2, 0.9);
            let direct = kernel_via_route(RouteId::Direct, &pt, &p).unwrap().value;
            for route in &RouteId::ALL[1..] {
                let v = kernel_via_route(*route, &pt, &p).unwrap().value;
                assert!(rel(v, direct) < 1e-10, "{route} at {pt:?}");
            }
        }
    }
}

#[test]
fn semigroup_for_each_kernel() {
    let cases = [
        (KernelSelector::Free, 0.5, 0.0, 0.8, -0.3),
        (KernelSelector::Sho, 0.5, 1.0, -0.6, 1.1),
        (KernelSelector::RadialH0, 1.0, 0.0, 0.8, 1.3),
        (KernelSelector::RadialSho, 1.5, 1.0, 0.8, 1.3),
    ];
    for (kernel, n, omega, x1, x2) in cases {
        let p = params(n, omega);
        let (t1, t2) = (0.4, 0.7);
        let spec = semigroup_spec(x1, x2, t1, t2, &p);
        let check = semigroup_check(kernel, x1, x2, t1, t2, &p, &spec).unwrap();
        assert!(check.relative_error() < 1e-6, "{kernel}: {check:?}");
    }
}

/// Least-squares slope of `ln err` against `ln t`.
fn loglog_slope(ts: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn short_time_approach_is_first_order() {
    // The O(t) correction carries a factor |sin χ| with χ the Bessel phase, so
    // single halving ratios wobble; the slope and err/t stay controlled.
    for &n in &[0.0, 1.0, 2.5] {
        let p = params(n, 0.8);
        let ts: Vec<f64> = (0..5).map(|k| 0.02 / f64::powi(2.0, k)).collect();
        let errors: Vec<f64> = ts
            .iter()
            .map(|&t| {
                let pt = KernelPoint::new(0.9, 1.4, t);
                let kernel = radial_sho_kernel(&pt, &p).unwrap().value;
                let lead = short_time_asymptote(&pt, &p).unwrap().value;
                (kernel - lead).norm() / free_kernel(&pt, &p).unwrap().value.norm()
            })
            .collect();
        let slope = loglog_slope(&ts, &errors);
        assert!(slope > 0.8, "n = {n}: slope {slope}, {errors:?}");
        let first = errors[0] / ts[0];
        for (e, t) in errors.iter().zip(&ts) {
            assert!(e / t <= 2.0 * first, "n = {n}: {errors:?}");
        }
    }
}

proptest! {
    #[test]
    fn symmetric_in_positions(
        x1 in 0.05..5.0f64,
        x2 in 0.05..5.0f64,
        wt in 0.05..3.0f64,
        n in 0.0..4.0f64,
    ) {
        let p = params(n, 1.0);
        for kernel in KernelSelector::ALL {
            let pt = KernelPoint::new(x1, x2, wt);
            let a = kernel.evaluate(&pt, &p).unwrap().value;
            let b = kernel.evaluate(&pt.swapped(), &p).unwrap().value;
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn time_reversal_conjugates(
        x1 in 0.05..5.0f64,
        x2 in 0.05..5.0f64,
        wt in 0.05..3.0f64,
        n in 0.0..4.0f64,
    ) {
        let p = params(n, 1.0);
        for kernel in KernelSelector::ALL {
            let a = kernel.evaluate(&KernelPoint::new(x1, x2, wt), &p).unwrap().value;
            let b = kernel.evaluate(&KernelPoint::new(x1, x2, -wt), &p).unwrap().value;
            prop_assert!((b - a.conj()).norm() <= 1e-13 * a.norm());
        }
    }
}
