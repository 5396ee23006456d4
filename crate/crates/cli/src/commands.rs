use std::f64::consts::PI;

use anyhow::{bail, ensure, Result};
use num_complex::Complex64;
use propagators::evolve::{
    cross_oracle, delta_limit_check, dilation_apply, propagate, schrodinger_residual, TestFunction,
};
use propagators::kernels::{
    check_caustic, effective_time, image_kernel, kernel_via_route, radial_h0_kernel,
    radial_sho_kernel, BranchNote, Domain,
};
use propagators::oracle::{
    eigenfunction_residual, hankel_sho_oracle, hankel_spec, standard_suite, GridSpec,
    GridWavefunction, EDGE_THRESHOLD, SUITE_ORDERS,
};
use propagators::sl2rep::identity_residual;
use propagators::{
    BesselOrder, Error, IdentityId, KernelPoint, KernelSelector, PhysParams, QuadratureSpec,
    RouteId,
};

use crate::config::{
    reject_image, EvolveArgs, IdentitiesArgs, KernelArgs, OracleArgs, SelftestArgs,
};
use crate::output::{num, Table};

/// A rendered table and the number of tolerance violations in it.
pub struct Outcome {
    pub table: Table,
    pub violations: usize,
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn identities(args: &IdentitiesArgs) -> Result<Outcome> {
    let p = args.phys.params(0.5)?;
    let tol = args.output.tolerance(1e-12)?;
    let range = args.time_range(&p)?;
    let mut table = Table::new("identities", Some(&p), &["identity", "t", "residual"]);
    table.note(format!("tolerance = {}", num(tol)));
    let mut violations = 0;
    let mut worst = 0.0_f64;
    for id in IdentityId::ALL {
        let mut clipped = 0;
        for t in range.values() {
            if !id.is_valid_at(p.omega() * t) {
                clipped += 1;
                continue;
            }
            match identity_residual(id, t, &p) {
                Ok(r) => {
                    if r.is_nan() || r > tol {
                        violations += 1;
                    }
                    worst = worst.max(r);
                    table.row([id.name().to_string(), num(t), num(r)]);
                }
                Err(Error::IdentityWindow { .. }) => clipped += 1,
                Err(e) => return Err(e.into()),
            }
        }
        if clipped > 0 {
            let notice = format!(
                "notice: {id}: {clipped} of {} t-points outside the validity window, skipped",
                range.steps
            );
            eprintln!("{notice}");
            table.note(notice);
        }
    }
    table.summary(format!(
        "max residual = {}, violations = {violations}: {}",
        num(worst),
        pass(violations == 0)
    ));
    Ok(Outcome { table, violations })
}

pub fn kernel(args: &KernelArgs) -> Result<Outcome> {
    let p = args.phys.params(0.5)?;
    let selector = args.kernel.selector(&p);
    let half_line = selector.is_none_or(|k| k.domain() == Domain::HalfLine);
    let xs = args.space.range((0.5, 2.0, 4))?;
    let ts = args.time.range((0.25, 1.0, 4))?;
    if half_line {
        ensure!(
            xs.min > 0.0,
            "half-line kernels need --x-min > 0, got {}",
            xs.min
        );
    }
    let mut table = Table::new("kernel", Some(&p), &["x1", "x2", "t", "re", "im", "abs"]);
    table.note(format!(
        "kernel = {}",
        selector.map_or("image", |k| k.name())
    ));
    let xs = xs.values();
    let mut evaluated = 0;
    for t in ts.values() {
        if t == 0.0 {
            table.comment(format!("skip t = {}: zero time", num(t)));
            continue;
        }
        let Some(sin_abs) = caustic_distance(t, p.omega())? else {
            table.comment(format!("skip t = {}: caustic", num(t)));
            continue;
        };
        if BranchNote::for_sin(sin_abs) == BranchNote::NearCaustic {
            table.comment(format!(
                "t = {}: near caustic, |sin ωt| = {}",
                num(t),
                num(sin_abs)
            ));
        }
        let prepared = selector.map(|k| k.prepare(t, &p)).transpose()?;
        for &x1 in &xs {
            for &x2 in &xs {
                let k = match &prepared {
                    Some(pk) => pk.value(x1, x2)?,
                    None => image_kernel(&KernelPoint::new(x1, x2, t), &p)?.value,
                };
                table.row([
                    num(x1),
                    num(x2),
                    num(t),
                    num(k.re),
                    num(k.im),
                    num(k.norm()),
                ]);
            }
        }
        evaluated += 1;
    }
    if evaluated == 0 {
        bail!("every t in the range is zero or a caustic");
    }
    Ok(Outcome {
        table,
        violations: 0,
    })
}

/// `|sin ωt|` for `t ≠ 0`, `None` at a caustic; without the oscillator there
/// is none, and the distance is reported as 1.
fn caustic_distance(t: f64, omega: f64) -> Result<Option<f64>> {
    if omega == 0.0 {
        return Ok(Some(1.0));
    }
    match check_caustic(t, omega) {
        Ok(s) => Ok(Some(s)),
        Err(Error::CausticSingularity { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn oracle_points(args: &OracleArgs) -> Result<Vec<KernelPoint>> {
    if !(args.time.given() || args.space.given()) {
        return Ok(standard_suite());
    }
    let xs = args.space.range((0.5, 2.0, 4))?;
    ensure!(
        xs.min > 0.0,
        "the Hankel oracle needs --x-min > 0, got {}",
        xs.min
    );
    let ts = args.time.range((0.5, 2.0, 4))?;
    let xs = xs.values();
    Ok(ts
        .values()
        .into_iter()
        .flat_map(|t| {
            let xs = xs.clone();
            xs.clone().into_iter().flat_map(move |x1| {
                xs.clone()
                    .into_iter()
                    .map(move |x2| KernelPoint::new(x1, x2, t))
            })
        })
        .collect())
}

pub fn oracle_compare(args: &OracleArgs) -> Result<Outcome> {
    let base_params = args.phys.params(0.5)?;
    let tol = args.output.tolerance(1e-6)?;
    let base = args.quadrature.spec()?;
    let orders: Vec<f64> = if args.phys.order_given() {
        vec![base_params.n()]
    } else {
        SUITE_ORDERS.to_vec()
    };
    let points = oracle_points(args)?;
    let omega = base_params.omega();
    let mut table = Table::new(
        "oracle-compare",
        Some(&base_params),
        &[
            "x1",
            "x2",
            "t",
            "n",
            "closed_re",
            "closed_im",
            "oracle_re",
            "oracle_im",
            "rel_err",
            "oracle_err_estimate",
            "status",
        ],
    );
    table.note(format!(
        "tolerance = {}, epsilon schedule = [{}]",
        num(tol),
        base.epsilons()
            .iter()
            .map(|&e| num(e))
            .collect::<Vec<_>>()
            .join(" ")
    ));
    if args.phys.order_given() {
        table.note("orders from --order-n/--lambda");
    } else {
        table.note("rows cover n = 0, 1/2, 1, 5/2 with lambda = hbar^2 (n^2 - 1/4)");
    }
    let mut violations = 0;
    let mut worst = 0.0_f64;
    for n in orders {
        let order = BesselOrder::new(n)?;
        let p = base_params.with_order(order)?;
        for pt in &points {
            if pt.t == 0.0 {
                table.comment(format!("skip t = {}: zero time", num(pt.t)));
                continue;
            }
            let principal = caustic_distance(pt.t, omega)?
                .is_some_and(|s| BranchNote::for_sin(s) == BranchNote::Principal);
            if !principal {
                table.comment(format!("skip t = {}: at or near a caustic", num(pt.t)));
                continue;
            }
            let closed = if omega > 0.0 {
                radial_sho_kernel(pt, &p)?.value
            } else {
                radial_h0_kernel(pt, &p)?.value
            };
            let inner = KernelPoint::new(pt.x1, pt.x2, effective_time(pt.t, omega));
            let spec = hankel_spec(&inner, &p, &base);
            let lead = [
                num(pt.x1),
                num(pt.x2),
                num(pt.t),
                num(n),
                num(closed.re),
                num(closed.im),
            ];
            match hankel_sho_oracle(pt, order, &p, &spec) {
                Ok(v) => {
                    let rel = v.relative_error(closed);
                    let ok = v.agrees_with(closed, tol);
                    if !ok {
                        violations += 1;
                    }
                    worst = worst.max(rel);
                    let tail = [
                        num(v.value().re),
                        num(v.value().im),
                        num(rel),
                        num(v.error_estimate),
                        (if ok { "ok" } else { "exceeds" }).to_string(),
                    ];
                    table.row(lead.iter().chain(tail.iter()));
                }
                Err(Error::NonConvergence { estimate, .. }) => {
                    violations += 1;
                    let nan = num(f64::NAN);
                    let tail = [
                        nan.clone(),
                        nan.clone(),
                        nan,
                        num(estimate),
                        "nonconvergent".to_string(),
                    ];
                    table.row(lead.iter().chain(tail.iter()));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    table.summary(format!(
        "max rel_err = {}, violations = {violations}: {}",
        num(worst),
        pass(violations == 0)
    ));
    Ok(Outcome { table, violations })
}

pub fn evolve(args: &EvolveArgs) -> Result<Outcome> {
    let p = args.phys.params(0.5)?;
    reject_image(args.kernel)?;
    let kernel = args.kernel.selector(&p).expect("image rejected above");
    let tol = args.output.tolerance(1e-6)?;
    ensure!(
        args.oracle_tolerance > 0.0 && args.oracle_tolerance.is_finite(),
        "--oracle-tolerance must be finite and > 0"
    );
    let grid = match kernel.domain() {
        Domain::HalfLine => {
            ensure!(
                args.x_min == 0.0,
                "{kernel} evolves on the half line: --x-min must be 0"
            );
            GridSpec::half_line(args.x_max, args.grid_points, args.dt)?
        }
        Domain::Line => {
            ensure!(
                args.x_min < 0.0,
                "{kernel} evolves on the line: --x-min must be < 0"
            );
            GridSpec::line(args.x_min, args.x_max, args.grid_points, args.dt)?
        }
    };
    let f = TestFunction::gaussian(args.center, args.width, args.momentum)?
        .with_amplitude(args.amplitude);
    if kernel.domain() == Domain::HalfLine {
        f.check_half_line()?;
    }
    let times = args.time.range((0.0, 1.0, 5))?.values();
    let t_final = *times.last().expect("ranges are non-empty");

    let mut table = Table::new("evolve", Some(&p), &["t", "x", "re", "im", "abs2"]);
    table.note(format!(
        "kernel = {kernel}, grid = [{}, {}] with {} intervals, packet center = {}, width = {}, momentum = {}, amplitude = {}",
        num(grid.x_min()),
        num(grid.x_max()),
        grid.points(),
        num(f.center),
        num(f.width),
        num(f.momentum),
        num(f.amplitude)
    ));

    let psi0 = f.sample(grid, &p)?;
    let oracle_available = kernel.domain() == Domain::Line || p.n() >= 0.5;
    let mut violations = 0;
    let mut worst_drift = 0.0_f64;
    let mut final_frame: Option<GridWavefunction> = None;
    let mut summary = Vec::new();
    for &t in &times {
        let is_final = t == t_final;
        let outcome = if is_final && t != 0.0 && oracle_available {
            cross_oracle(&f, grid, t, kernel, &p).map(|c| {
                let ok = c.l2_distance < args.oracle_tolerance;
                summary.push(format!(
                    "cross-oracle L2 distance at t = {} = {} (tolerance {}): {}",
                    num(t),
                    num(c.l2_distance),
                    num(args.oracle_tolerance),
                    pass(ok)
                ));
                if !ok {
                    violations += 1;
                }
                if let Some(e) = c.grid.contamination() {
                    summary.push(format!("grid oracle: {e}: FAIL"));
                    violations += 1;
                }
                c.kernel
            })
        } else {
            propagate(&psi0, t, kernel, &p)
        };
        let out = match outcome {
            Ok(out) => out,
            Err(Error::CausticSingularity { .. }) => {
                table.comment(format!("skip t = {}: caustic", num(t)));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        worst_drift = worst_drift.max(out.norm_drift());
        for (x, z) in grid.nodes().zip(out.psi.samples()) {
            table.row([num(t), num(x), num(z.re), num(z.im), num(z.norm_sqr())]);
        }
        if is_final {
            final_frame = Some(out.psi);
        }
    }
    let Some(last) = final_frame else {
        bail!("no frame could be evaluated");
    };

    let drift_ok = worst_drift < tol;
    if !drift_ok {
        violations += 1;
    }
    table.summary(format!(
        "max norm drift = {} (tolerance {}): {}",
        num(worst_drift),
        num(tol),
        pass(drift_ok)
    ));
    let edge = last.edge_ratio();
    let edge_ok = edge <= EDGE_THRESHOLD;
    if !edge_ok {
        violations += 1;
    }
    table.summary(format!(
        "boundary ratio at t = {} = {} (threshold {}): {}",
        num(t_final),
        num(edge),
        num(EDGE_THRESHOLD),
        pass(edge_ok)
    ));
    if !oracle_available {
        table.summary("cross-oracle not available: the grid wall needs n >= 1/2");
    }
    for s in summary {
        table.summary(s);
    }
    let free_motion = p.omega() == 0.0 || !kernel.uses_omega();
    if free_motion && p.n() == 0.5 || free_motion && kernel.domain() == Domain::Line {
        let exact = GridWavefunction::from_fn(grid, |x| match kernel.domain() {
            Domain::HalfLine => f.image_evolved(x, t_final, &p),
            Domain::Line => f.free_evolved(x, t_final, &p),
        })?;
        let d = last.l2_distance(&exact)?;
        let ok = d < args.oracle_tolerance;
        if !ok {
            violations += 1;
        }
        table.summary(format!(
            "analytic L2 distance at t = {} = {} (tolerance {}): {}",
            num(t_final),
            num(d),
            num(args.oracle_tolerance),
            pass(ok)
        ));
    }
    Ok(Outcome { table, violations })
}

/// One line per reduced-size check.
pub fn selftest(_args: &SelftestArgs) -> Result<Outcome> {
    let mut table = Table::new("selftest", None, &["check", "value", "threshold", "status"]);
    let mut violations = 0;
    let mut record = |table: &mut Table, name: &str, value: f64, threshold: f64, ok: bool| {
        if !ok {
            violations += 1;
        }
        table.row([
            name.to_string(),
            num(value),
            num(threshold),
            pass(ok).to_string(),
        ]);
    };

    let p = PhysParams::scaled(1.5)?;
    let mut worst = 0.0_f64;
    for id in IdentityId::ALL {
        for j in 0..25 {
            let t = -0.45 * PI + 0.9 * PI * j as f64 / 24.0;
            worst = worst.max(identity_residual(id, t, &p)?);
        }
    }
    record(&mut table, "identities", worst, 1e-12, worst < 1e-12);

    let half = PhysParams::scaled(0.5)?;
    let mut worst = 0.0_f64;
    for j in 0..10 {
        let pt = KernelPoint::new(
            0.3 + 0.2 * j as f64,
            1.7 - 0.1 * j as f64,
            0.2 + 0.1 * j as f64,
        );
        let a = radial_sho_kernel(&pt, &half)?.value;
        let b = image_kernel(&pt, &half)?.value;
        worst = worst.max(relative(a, b));
    }
    record(&mut table, "image-method", worst, 1e-12, worst < 1e-12);

    let osc = PhysParams::new(1.0, 1.0, 1.3, BesselOrder::new(1.5)?)?;
    let mut worst = 0.0_f64;
    for &(x1, x2, t) in &[(0.7, 1.2, 0.4), (1.9, 0.3, -0.8), (1.2, 1.2, 1.0)] {
        let pt = KernelPoint::new(x1, x2, t);
        let direct = kernel_via_route(RouteId::Direct, &pt, &osc)?.value;
        for route in &RouteId::ALL[1..] {
            worst = worst.max(relative(kernel_via_route(*route, &pt, &osc)?.value, direct));
        }
    }
    record(&mut table, "routes", worst, 1e-10, worst < 1e-10);

    let free_radial = PhysParams::new(1.0, 1.0, 0.0, BesselOrder::new(1.0)?)?;
    let mut worst = 0.0_f64;
    for pt in standard_suite().iter().take(2) {
        let closed = radial_h0_kernel(pt, &free_radial)?.value;
        let spec = hankel_spec(pt, &free_radial, &QuadratureSpec::default());
        let v = hankel_sho_oracle(pt, free_radial.order(), &free_radial, &spec)?;
        worst = worst.max(v.relative_error(closed));
    }
    record(&mut table, "hankel-oracle", worst, 1e-6, worst < 1e-6);

    let pt = KernelPoint::new(1.0, 1.0, 0.7);
    let coarse = schrodinger_residual(KernelSelector::RadialSho, &pt, &p, 2e-3, 2e-3)?;
    let fine = schrodinger_residual(KernelSelector::RadialSho, &pt, &p, 1e-3, 1e-3)?;
    let ratio = coarse / fine;
    record(
        &mut table,
        "schrodinger-ratio",
        ratio,
        0.5,
        (ratio - 4.0).abs() < 0.5,
    );

    let grid = GridSpec::half_line(20.0, 2000, 1e-3)?;
    let r = eigenfunction_residual(1.0, BesselOrder::HALF, &p, &grid)?;
    record(&mut table, "eigenfunction", r, 1e-4, r < 1e-4);

    let f = TestFunction::gaussian(5.0, 0.5, 1.0)?;
    let errs = delta_limit_check(&f, 5.0, &[0.02, 0.01], KernelSelector::Free, &p)?;
    let ratio = errs[0] / errs[1];
    record(
        &mut table,
        "delta-limit-ratio",
        ratio,
        0.5,
        (ratio - 2.0).abs() < 0.5,
    );

    let psi = f.sample(grid, &p)?;
    let u = dilation_apply(&psi, 0.3, &p)?;
    let drift = (u.psi.norm() - psi.norm()).abs();
    let bound = 1e-10 + u.interpolation_error;
    record(&mut table, "dilation-norm", drift, bound, drift < bound);

    let small = GridSpec::half_line(10.0, 1000, 1e-3)?;
    let out = propagate(&f.sample(small, &p)?, 0.5, KernelSelector::RadialSho, &p)?;
    record(
        &mut table,
        "unitarity",
        out.norm_drift(),
        1e-6,
        out.norm_drift() < 1e-6,
    );

    table.summary(format!(
        "violations = {violations}: {}",
        pass(violations == 0)
    ));
    Ok(Outcome { table, violations })
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}
