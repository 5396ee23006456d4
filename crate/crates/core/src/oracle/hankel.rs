//! Spectral representation of the half-line kernel and checks of the Bessel
//! eigenfunctions it is built from.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::kernels::{check_caustic, effective_time, BranchNote, KernelPoint, KernelValue};
use crate::numerics::{
    bessel_j, integrate_panels, integrate_regularized, BesselOrder, QuadratureSpec,
};
use crate::oracle::GridSpec;
use crate::params::PhysParams;
use crate::sl2rep::{factor_coeffs, IdentityId};

/// Regularized integrand decays below `e^{−36}` at the cut-off.
const DECAY_EXPONENT: f64 = 36.0;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleValue {
    pub kernel: KernelValue,
    pub error_estimate: f64,
    /// `(ε, integral)` per regularization level.
    pub levels: Vec<(f64, Complex64)>,
}

impl OracleValue {
    pub fn value(&self) -> Complex64 {
        self.kernel.value
    }

    /// Relative distance to a reference value.
    pub fn relative_error(&self, reference: Complex64) -> f64 {
        (self.value() - reference).norm() / reference.norm().max(self.value().norm())
    }

    /// Agreement within `max(tolerance, 10 × own estimate)`, relative to `reference`.
    pub fn agrees_with(&self, reference: Complex64, tolerance: f64) -> bool {
        let own = 10.0 * self.error_estimate / reference.norm();
        self.relative_error(reference) <= tolerance.max(own)
    }
}

/// Sizes `base` for the k-integral at `pt`: the cut-off where the most
/// weakly damped level has decayed by `e^{−36}`, and panels spanning at most
/// one oscillation of the integrand.
pub fn hankel_spec(pt: &KernelPoint, params: &PhysParams, base: &QuadratureSpec) -> QuadratureSpec {
    let eps_min = base
        .epsilons()
        .into_iter()
        .filter(|&e| e > 0.0)
        .fold(f64::INFINITY, f64::min);
    let hbar_over_m = params.hbar() / params.mass();
    let t = pt.t.abs();
    let k_max = if eps_min.is_finite() {
        (2.0 * DECAY_EXPONENT / (eps_min * t * hbar_over_m)).sqrt()
    } else {
        base.k_max
    };
    let wavenumber = hbar_over_m * k_max * t + pt.x1.abs() + pt.x2.abs();
    let panels = (k_max * wavenumber / (2.0 * PI)).ceil() as usize;
    QuadratureSpec {
        k_max,
        panel_count: panels.max(base.panel_count),
        ..base.clone()
    }
}

/// `∫₀^∞ √(kx₁)J_n(kx₁) e^{−iħk²t/2m} √(kx₂)J_n(kx₂) dk` with `t → t − iε|t|`,
/// extrapolated to `ε = 0`.
pub fn hankel_kernel_oracle(
    pt: &KernelPoint,
    order: BesselOrder,
    params: &PhysParams,
    spec: &QuadratureSpec,
) -> Result<OracleValue> {
    if !(pt.x1 > 0.0 && pt.x2 > 0.0) {
        return Err(domain(format!(
            "oracle needs x1, x2 > 0, got ({}, {})",
            pt.x1, pt.x2
        )));
    }
    if pt.t == 0.0 || !pt.t.is_finite() {
        return Err(domain(format!("oracle needs finite t ≠ 0, got {}", pt.t)));
    }
    let rate = params.hbar() / (2.0 * params.mass());
    let failure = Cell::new(None);
    let integrand = |k: f64, eps: &[f64], out: &mut [Complex64]| {
        let radial = bessel_j(order, k * pt.x1)
            .and_then(|a| Ok(a * bessel_j(order, k * pt.x2)?))
            .unwrap_or_else(|e| {
                failure.set(Some(e));
                0.0
            });
        let weight = k * (pt.x1 * pt.x2).sqrt() * radial;
        let phase = Complex64::from_polar(weight, -rate * k * k * pt.t);
        for (slot, &e) in out.iter_mut().zip(eps) {
            *slot = phase * (-rate * k * k * e * pt.t.abs()).exp();
        }
    };
    let result = integrate_regularized(integrand, spec)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(OracleValue {
        kernel: KernelValue {
            value: result.value,
            branch_note: BranchNote::Principal,
        },
        error_estimate: result.error_estimate,
        levels: result.levels,
    })
}

/// The oscillator kernel from the spectral `H₀` kernel at the effective time
/// `sin(ωt)/ω`, between the phases `e^{−iαx²}` with `α = (mω/2ħ)tan(ωt/2)`.
pub fn hankel_sho_oracle(
    pt: &KernelPoint,
    order: BesselOrder,
    params: &PhysParams,
    spec: &QuadratureSpec,
) -> Result<OracleValue> {
    let w = params.omega();
    if w == 0.0 {
        return hankel_kernel_oracle(pt, order, params, spec);
    }
    let sin_abs = check_caustic(pt.t, w)?;
    let alpha = factor_coeffs(IdentityId::Main, pt.t, params)?.alpha;
    let inner_pt = KernelPoint::new(pt.x1, pt.x2, effective_time(pt.t, w));
    let inner = hankel_kernel_oracle(&inner_pt, order, params, spec)?;
    let phase = Complex64::from_polar(1.0, -alpha * (pt.x1 * pt.x1 + pt.x2 * pt.x2));
    Ok(OracleValue {
        kernel: KernelValue {
            value: inner.value() * phase,
            branch_note: BranchNote::for_sin(sin_abs),
        },
        error_estimate: inner.error_estimate,
        levels: inner.levels,
    })
}

/// Orders covered by the standard comparison.
pub const SUITE_ORDERS: [f64; 4] = [0.0, 0.5, 1.0, 2.5];

/// Twenty deterministic points with `x₁, x₂ ∈ [0.5, 2]` and
/// `|t| ∈ [0.5, 2]`, every fourth at negative time.
pub fn standard_suite() -> Vec<KernelPoint> {
    let frac = |v: f64| v - v.floor();
    (0..20)
        .map(|i| {
            let i = i as f64;
            let x1 = 0.5 + 1.5 * frac(0.618_033_988_7 * i + 0.11);
            let x2 = 0.5 + 1.5 * frac(0.414_213_562_4 * i + 0.37);
            let t = 0.5 + 1.5 * frac(0.732_050_807_6 * i + 0.05);
            let sign = if (i as usize) % 4 == 3 { -1.0 } else { 1.0 };
            KernelPoint::new(x1, x2, sign * t)
        })
        .collect()
}

/// `√(kx) J_n(kx)`.
pub fn radial_eigenfunction(order: BesselOrder, k: f64, x: f64) -> Result<f64> {
    Ok((k * x).sqrt() * bessel_j(order, k * x)?)
}

/// `∫₀^{x_max} √(k₁x)J_n(k₁x) √(k₂x)J_n(k₂x) dx`.
pub fn orthogonality_check(k1: f64, k2: f64, order: BesselOrder, x_max: f64) -> Result<Complex64> {
    if !(k1 > 0.0 && k2 > 0.0) {
        return Err(domain(format!("wavenumbers must be > 0, got {k1}, {k2}")));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(domain(format!("x_max must be finite and > 0, got {x_max}")));
    }
    let panels = ((k1 + k2) * x_max / PI).ceil() as usize + 8;
    let failure = Cell::new(None);
    let (value, _) = integrate_panels(
        |x| {
            let product = radial_eigenfunction(order, k1, x)
                .and_then(|a| Ok(a * radial_eigenfunction(order, k2, x)?));
            Complex64::new(
                product.unwrap_or_else(|e| {
                    failure.set(Some(e));
                    0.0
                }),
                0.0,
            )
        },
        0.0,
        x_max,
        panels,
    );
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Completeness with a Gaussian test function `g(k) = exp(−(k−k₀)²/2σ²)`:
/// `∫₀^{x_max} dx φ_{k₀}(x) ∫ dk g(k) φ_k(x)`, which tends to `g(k₀) = 1`
/// as `x_max` grows.
pub fn smeared_delta(k0: f64, sigma: f64, order: BesselOrder, x_max: f64) -> Result<f64> {
    if !(k0 > 0.0 && sigma > 0.0 && k0 - 8.0 * sigma > 0.0) {
        return Err(domain(format!(
            "need k0 − 8σ > 0 with σ > 0, got k0 = {k0}, σ = {sigma}"
        )));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(domain(format!("x_max must be finite and > 0, got {x_max}")));
    }
    let (k_lo, k_hi) = (k0 - 8.0 * sigma, k0 + 8.0 * sigma);
    let failure = Cell::new(None);
    let record = |r: Result<f64>| {
        r.unwrap_or_else(|e| {
            failure.set(Some(e));
            0.0
        })
    };
    let smeared = |x: f64| {
        let inner_panels = ((k_hi - k_lo) * x / PI).ceil() as usize + 4;
        integrate_panels(
            |k| {
                let g = (-(k - k0).powi(2) / (2.0 * sigma * sigma)).exp();
                Complex64::new(g * record(radial_eigenfunction(order, k, x)), 0.0)
            },
            k_lo,
            k_hi,
            inner_panels,
        )
        .0
    };
    let panels = (2.0 * k_hi * x_max / PI).ceil() as usize + 8;
    let (value, _) = integrate_panels(
        |x| smeared(x) * record(radial_eigenfunction(order, k0, x)),
        0.0,
        x_max,
        panels,
    );
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(value.re),
    }
}

/// Max over interior nodes with `x >= 3 dx` of the discretized
/// `H₀u − (ħ²k²/2m)u` for `u = √(kx)J_n(kx)`, divided by the max of
/// `(ħ²k²/2m)|u|`.
pub fn eigenfunction_residual(
    k: f64,
    order: BesselOrder,
    params: &PhysParams,
    grid: &GridSpec,
) -> Result<f64> {
    eigenfunction_residual_beyond(k, order, params, grid, 3.0 * grid.dx())
}

/// [`eigenfunction_residual`] restricted to nodes with `x >= x_from`.
pub fn eigenfunction_residual_beyond(
    k: f64,
    order: BesselOrder,
    params: &PhysParams,
    grid: &GridSpec,
    x_from: f64,
) -> Result<f64> {
    if !(k > 0.0) {
        return Err(domain(format!("k must be > 0, got {k}")));
    }
    if grid.x_min() != 0.0 {
        return Err(domain("eigenfunction residual needs a half-line grid"));
    }
    let dx = grid.dx();
    let n = order.value();
    let kinetic = params.hbar() * params.hbar() / (2.0 * params.mass());
    let energy = kinetic * k * k;
    let u: Vec<f64> = (0..=grid.points())
        .map(|j| radial_eigenfunction(order, k, grid.x(j)))
        .collect::<Result<_>>()?;
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for j in 1..grid.points() {
        let x = grid.x(j);
        scale = scale.max(energy * u[j].abs());
        if x < x_from {
            continue;
        }
        let laplacian = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (dx * dx);
        let h_u = kinetic * (-laplacian + (n * n - 0.25) / (x * x) * u[j]);
        worst = worst.max((h_u - energy * u[j]).abs());
    }
    if scale == 0.0 {
        return Err(Error::Domain("eigenfunction vanishes on the grid".into()));
    }
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(n: f64) -> BesselOrder {
        BesselOrder::new(n).unwrap()
    }

    #[test]
    fn damped_level_is_smooth() {
        // a single level with fixed ε: absolutely convergent, no extrapolation
        let p = PhysParams::scaled(0.0).unwrap();
        let pt = KernelPoint::new(1.0, 1.0, 1.0);
        let base = QuadratureSpec {
            extrapolation_levels: 1,
            ..Default::default()
        };
        let spec = hankel_spec(&pt, &p, &base);
        let single = hankel_kernel_oracle(&pt, order(0.0), &p, &spec).unwrap();
        assert_eq!(single.levels.len(), 1);
        let finer = QuadratureSpec {
            panel_count: spec.panel_count * 2,
            ..spec.clone()
        };
        let again = hankel_kernel_oracle(&pt, order(0.0), &p, &finer).unwrap();
        assert!((single.value() - again.value()).norm() < 1e-12);
        assert!(single.value().norm() > 0.1);
    }

    #[test]
    fn half_order_orthogonality_is_sine_orthogonality() {
        let (k1, k2, x_max) = (1.0, 3.0, 17.3);
        let got = orthogonality_check(k1, k2, order(0.5), x_max).unwrap();
        let want =
            (((k1 - k2) * x_max).sin() / (k1 - k2) - ((k1 + k2) * x_max).sin() / (k1 + k2)) / PI;
        assert!((got.re - want).abs() < 1e-12);
        assert_eq!(got.im, 0.0);
    }

    #[test]
    fn distinct_wavenumbers_average_out() {
        // mean over one period (π here) of the x_max oscillation
        let mean = |x_max: f64| {
            (0..16)
                .map(|j| {
                    let x = x_max + PI * j as f64 / 16.0;
                    orthogonality_check(1.0, 3.0, order(0.0), x).unwrap().re
                })
                .sum::<f64>()
                / 16.0
        };
        let near = mean(10.0).abs();
        let far = mean(200.0).abs();
        assert!(far < near, "{near} {far}");
        assert!(far < 1e-2);
    }

    #[test]
    fn coincident_wavenumbers_grow_linearly() {
        let a = orthogonality_check(2.0, 2.0, order(1.0), 50.0).unwrap().re;
        let b = orthogonality_check(2.0, 2.0, order(1.0), 100.0).unwrap().re;
        assert!(((b - a) / 50.0 - 1.0 / PI).abs() < 0.01);
    }

    #[test]
    fn smeared_delta_recovers_test_function() {
        let coarse = smeared_delta(2.0, 0.05, order(1.0), 40.0).unwrap();
        let fine = smeared_delta(2.0, 0.05, order(1.0), 200.0).unwrap();
        assert!((fine - 1.0).abs() < 0.02, "{fine}");
        assert!((fine - 1.0).abs() < (coarse - 1.0).abs());
    }

    #[test]
    fn sine_eigenfunction_residual() {
        let p = PhysParams::default();
        let grid = GridSpec::half_line(20.0, 2000, 1e-3).unwrap();
        let coarse = eigenfunction_residual(1.0, order(0.5), &p, &grid).unwrap();
        assert!(coarse < 1e-4);
        let fine_grid = GridSpec::half_line(20.0, 4000, 1e-3).unwrap();
        let fine = eigenfunction_residual(1.0, order(0.5), &p, &fine_grid).unwrap();
        assert!((coarse / fine - 4.0).abs() < 0.5);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = PhysParams::default();
        let spec = QuadratureSpec::default();
        let pt = KernelPoint::new(0.0, 1.0, 1.0);
        assert!(hankel_kernel_oracle(&pt, order(1.0), &p, &spec).is_err());
        assert!(orthogonality_check(0.0, 1.0, order(1.0), 5.0).is_err());
        assert!(smeared_delta(0.1, 0.05, order(1.0), 5.0).is_err());
    }
}
