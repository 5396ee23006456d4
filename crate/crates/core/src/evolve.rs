//! Wavepacket propagation by kernel quadrature, and the checks that tie the
//! kernels back to the Schrödinger equation: PDE residual, delta limit and
//! dilation.

use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::kernels::{Domain, KernelPoint, KernelSelector};
use crate::numerics::{integrate_panels, BesselOrder};
use crate::oracle::{grid_evolve, GridEvolution, GridSpec, GridWavefunction};
use crate::params::PhysParams;

/// Input samples below this fraction of the peak are skipped by [`propagate`].
const NEGLIGIBLE: f64 = 1e-17;

/// Input samples above this fraction of the peak define the support
/// checked by [`dilation_apply`].
const SUPPORT_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketKind {
    Gaussian,
}

/// `A (πw²)^{−1/4} exp(−(x−c)²/2w² + ip₀x/ħ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub kind: PacketKind,
    pub center: f64,
    pub width: f64,
    pub momentum: f64,
    pub amplitude: f64,
}

impl TestFunction {
    pub fn gaussian(center: f64, width: f64, momentum: f64) -> Result<Self> {
        if !(center > 0.0 && center.is_finite()) {
            return Err(domain(format!(
                "center must be finite and > 0, got {center}"
            )));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(domain(format!("width must be finite and > 0, got {width}")));
        }
        if !momentum.is_finite() {
            return Err(domain(format!("momentum must be finite, got {momentum}")));
        }
        Ok(TestFunction {
            kind: PacketKind::Gaussian,
            center,
            width,
            momentum,
            amplitude: 1.0,
        })
    }

    pub fn with_amplitude(self, amplitude: f64) -> Self {
        TestFunction { amplitude, ..self }
    }

    /// Fails unless `center − 4·width > 0`.
    pub fn check_half_line(&self) -> Result<()> {
        if self.center - 4.0 * self.width > 0.0 {
            Ok(())
        } else {
            Err(Error::SupportOverflow(format!(
                "packet at {} with width {} reaches the wall",
                self.center, self.width
            )))
        }
    }

    /// The L² norm, `|A|`.
    pub fn norm(&self) -> f64 {
        self.amplitude.abs()
    }

    fn normalization(&self) -> f64 {
        self.amplitude * (PI * self.width * self.width).powf(-0.25)
    }

    pub fn value(&self, x: f64, params: &PhysParams) -> Complex64 {
        let d = (x - self.center) / self.width;
        Complex64::from_polar(
            self.normalization() * (-0.5 * d * d).exp(),
            self.momentum * x / params.hbar(),
        )
    }

    pub fn sample(&self, grid: GridSpec, params: &PhysParams) -> Result<GridWavefunction> {
        GridWavefunction::from_fn(grid, |x| self.value(x, params))
    }

    /// Exact free-particle evolution on the full line.
    pub fn free_evolved(&self, x: f64, t: f64, params: &PhysParams) -> Complex64 {
        gaussian_free(
            self.normalization(),
            self.center,
            self.width,
            self.momentum,
            x,
            t,
            params,
        )
    }

    /// Exact evolution on the half line with a Dirichlet wall, by the image
    /// method; exact up to the packet's own tail at `x < 0`.
    pub fn image_evolved(&self, x: f64, t: f64, params: &PhysParams) -> Complex64 {
        let a = self.normalization();
        gaussian_free(a, self.center, self.width, self.momentum, x, t, params)
            - gaussian_free(a, -self.center, self.width, -self.momentum, x, t, params)
    }

    /// Integration window outside which the packet is below `e^{−72}`.
    fn window(&self) -> (f64, f64) {
        (
            self.center - 12.0 * self.width,
            self.center + 12.0 * self.width,
        )
    }
}

/// `A (1+iτ)^{−1/2} exp(−(x−c−vt)²/(2w²(1+iτ)) + ik₀x − iħk₀²t/2m)` with
/// `τ = ħt/mw²`, `k₀ = p₀/ħ`, `v = p₀/m`.
fn gaussian_free(
    a: f64,
    c: f64,
    w: f64,
    p0: f64,
    x: f64,
    t: f64,
    params: &PhysParams,
) -> Complex64 {
    let hbar = params.hbar();
    let m = params.mass();
    let k0 = p0 / hbar;
    let spread = Complex64::new(1.0, hbar * t / (m * w * w));
    let shift = x - c - p0 * t / m;
    let exponent = -shift * shift / (2.0 * w * w * spread)
        + Complex64::new(0.0, k0 * x - hbar * k0 * k0 * t / (2.0 * m));
    a * exponent.exp() / spread.sqrt()
}

/// Output of [`propagate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Propagation {
    pub psi: GridWavefunction,
    pub norm_in: f64,
    pub norm_out: f64,
}

impl Propagation {
    /// `|‖ψ(t)‖ − ‖ψ(0)‖| / ‖ψ(0)‖`; zero for the zero state.
    pub fn norm_drift(&self) -> f64 {
        if self.norm_in == 0.0 {
            self.norm_out
        } else {
            (self.norm_out - self.norm_in).abs() / self.norm_in
        }
    }
}

fn check_grid_domain(kernel: KernelSelector, grid: &GridSpec) -> Result<()> {
    match (kernel.domain(), grid.is_half_line()) {
        (Domain::HalfLine, true) | (Domain::Line, false) => Ok(()),
        (Domain::HalfLine, false) => Err(domain(format!("{kernel} needs a half-line grid"))),
        (Domain::Line, true) => Err(domain(format!("{kernel} needs a grid extending to x < 0"))),
    }
}

/// `ψ(x₁, t) = ∫ K(x₁, x₂; t) ψ(x₂) dx₂` by the trapezoid rule on the grid
/// of `psi0`, which is also the output grid.
pub fn propagate(
    psi0: &GridWavefunction,
    t: f64,
    kernel: KernelSelector,
    params: &PhysParams,
) -> Result<Propagation> {
    let grid = *psi0.grid();
    check_grid_domain(kernel, &grid)?;
    let norm_in = psi0.norm();
    if t == 0.0 {
        return Ok(Propagation {
            psi: psi0.clone(),
            norm_in,
            norm_out: norm_in,
        });
    }
    let prepared = kernel.prepare(t, params)?;
    let peak = psi0.max_abs();
    let weights = grid.weights();
    let sources: Vec<(f64, Complex64)> = psi0
        .samples()
        .iter()
        .enumerate()
        .filter(|(j, z)| {
            let x = grid.x(*j);
            z.norm() > NEGLIGIBLE * peak && !(grid.is_half_line() && x == 0.0)
        })
        .map(|(j, z)| (grid.x(j), z * weights[j]))
        .collect();
    let half_line = grid.is_half_line();
    let samples = (0..=grid.points())
        .into_par_iter()
        .map(|i| {
            let x1 = grid.x(i);
            if half_line && x1 == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            sources
                .iter()
                .try_fold(Complex64::new(0.0, 0.0), |acc, &(x2, weighted)| {
                    Ok(acc + prepared.value(x1, x2)? * weighted)
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = GridWavefunction::new(samples, grid)?;
    let norm_out = psi.norm();
    Ok(Propagation {
        psi,
        norm_in,
        norm_out,
    })
}

/// [`propagate`] applied to a sampled test function.
pub fn propagate_packet(
    f: &TestFunction,
    grid: GridSpec,
    t: f64,
    kernel: KernelSelector,
    params: &PhysParams,
) -> Result<Propagation> {
    if kernel.domain() == Domain::HalfLine {
        f.check_half_line()?;
    }
    propagate(&f.sample(grid, params)?, t, kernel, params)
}

/// `|LHS − RHS|/|RHS|` for `(ħ²/2m)(−∂²ₓ₁ + (n²−¼)/x₁² + m²ω²x₁²/ħ²)K = iħ∂ₜK`,
/// with central differences of step `dx` in `x₁` and `dt` in `t`.
///
/// Line kernels have no inverse-square term; the free kernels have no
/// oscillator term.
pub fn schrodinger_residual(
    kernel: KernelSelector,
    pt: &KernelPoint,
    params: &PhysParams,
    dx: f64,
    dt: f64,
) -> Result<f64> {
    if !(dx > 0.0 && dt > 0.0) {
        return Err(domain(format!(
            "steps must be > 0, got dx = {dx}, dt = {dt}"
        )));
    }
    if kernel.domain() == Domain::HalfLine && pt.x1 - dx <= 0.0 {
        return Err(domain(format!(
            "stencil at x1 = {} crosses the wall",
            pt.x1
        )));
    }
    let hbar = params.hbar();
    let m = params.mass();
    let w = if kernel.uses_omega() {
        params.omega()
    } else {
        0.0
    };
    let coupling = match kernel.domain() {
        Domain::Line => 0.0,
        Domain::HalfLine => params.n() * params.n() - 0.25,
    };
    let now = kernel.prepare(pt.t, params)?;
    let later = kernel.prepare(pt.t + dt, params)?;
    let earlier = kernel.prepare(pt.t - dt, params)?;
    let (x1, x2) = (pt.x1, pt.x2);
    let centre = now.value(x1, x2)?;
    let laplacian = (now.value(x1 + dx, x2)? - 2.0 * centre + now.value(x1 - dx, x2)?) / (dx * dx);
    let potential = coupling / (x1 * x1) + (m * w * x1 / hbar).powi(2);
    let lhs = hbar * hbar / (2.0 * m) * (-laplacian + potential * centre);
    let rhs =
        Complex64::new(0.0, hbar) * (later.value(x1, x2)? - earlier.value(x1, x2)?) / (2.0 * dt);
    Ok((lhs - rhs).norm() / rhs.norm())
}

/// `|∫K(x₁, x₂; t) f(x₂) dx₂ − f(x₁)|` for each `t`, by Gauss–Kronrod
/// panels fine enough for the kernel's chirp.
pub fn delta_limit_check(
    f: &TestFunction,
    x1: f64,
    t_sequence: &[f64],
    kernel: KernelSelector,
    params: &PhysParams,
) -> Result<Vec<f64>> {
    for pair in t_sequence.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(domain("t_sequence must be strictly decreasing"));
        }
    }
    if t_sequence.iter().any(|&t| !(t > 0.0)) {
        return Err(domain("t_sequence must be positive"));
    }
    let target = f.value(x1, params);
    t_sequence
        .iter()
        .map(|&t| Ok((smear(f, x1, t, kernel, params)? - target).norm()))
        .collect()
}

/// `∫K(x₁, x₂; t) f(x₂) dx₂` over the window holding the packet.
pub fn smear(
    f: &TestFunction,
    x1: f64,
    t: f64,
    kernel: KernelSelector,
    params: &PhysParams,
) -> Result<Complex64> {
    if f.amplitude == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (mut lo, hi) = f.window();
    if kernel.domain() == Domain::HalfLine {
        f.check_half_line()?;
        lo = lo.max(0.0);
    }
    let prepared = kernel.prepare(t, params)?;
    let time = if kernel.uses_omega() && params.omega() > 0.0 {
        ((params.omega() * t).sin() / params.omega()).abs()
    } else {
        t.abs()
    };
    let reach = (x1 - lo).abs().max((x1 - hi).abs()) + x1.abs() + hi.abs();
    let wavenumber = params.mass() * reach / (params.hbar() * time)
        + f.momentum.abs() / params.hbar()
        + 1.0 / f.width;
    let panels = ((hi - lo) * wavenumber / PI).ceil() as usize + 16;
    let failure = Cell::new(None);
    let (value, _) = integrate_panels(
        |x2| match prepared.value(x1, x2) {
            Ok(k) => k * f.value(x2, params),
            Err(e) => {
                failure.set(Some(e));
                Complex64::new(0.0, 0.0)
            }
        },
        lo,
        hi,
        panels,
    );
    match failure.take() {
        Some(e) => Err(e),
        None => Ok(value),
    }
}

/// Output of [`dilation_apply`].
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    pub psi: GridWavefunction,
    /// L² norm of the difference between cubic and quintic interpolation.
    pub interpolation_error: f64,
}

/// `(e^{−iγ(xp+px)}ψ)(y) = e^{−ħγ} ψ(y e^{−2ħγ})`, by cubic Lagrange
/// interpolation on the same grid.
pub fn dilation_apply(psi: &GridWavefunction, gamma: f64, params: &PhysParams) -> Result<Dilation> {
    if !gamma.is_finite() {
        return Err(domain(format!("γ must be finite, got {gamma}")));
    }
    let grid = *psi.grid();
    if gamma == 0.0 {
        return Ok(Dilation {
            psi: psi.clone(),
            interpolation_error: 0.0,
        });
    }
    let hbar = params.hbar();
    let stretch = (2.0 * hbar * gamma).exp();
    let peak = psi.max_abs();
    for (j, z) in psi.samples().iter().enumerate() {
        let image = grid.x(j) * stretch;
        if z.norm() > SUPPORT_THRESHOLD * peak && !(grid.x_min()..=grid.x_max()).contains(&image) {
            return Err(Error::SupportOverflow(format!(
                "sample at x = {} maps to {image}, outside [{}, {}]",
                grid.x(j),
                grid.x_min(),
                grid.x_max()
            )));
        }
    }
    let amp = (-hbar * gamma).exp();
    let samples = psi.samples();
    let (cubic, quintic): (Vec<Complex64>, Vec<Complex64>) = grid
        .nodes()
        .map(|y| {
            let source = y / stretch;
            (
                amp * interpolate(samples, &grid, source, 4),
                amp * interpolate(samples, &grid, source, 6),
            )
        })
        .unzip();
    let cubic = GridWavefunction::new(cubic, grid)?;
    let quintic = GridWavefunction::new(quintic, grid)?;
    let interpolation_error = cubic.l2_distance(&quintic)?;
    Ok(Dilation {
        psi: cubic,
        interpolation_error,
    })
}

/// Lagrange interpolation through `stencil` nodes around `x`, shifted to stay
/// inside the grid.
fn interpolate(samples: &[Complex64], grid: &GridSpec, x: f64, stencil: usize) -> Complex64 {
    let dx = grid.dx();
    let u = (x - grid.x_min()) / dx;
    let last = grid.points();
    let start = (u.floor() as i64 - (stencil as i64 / 2 - 1)).clamp(0, (last + 1 - stencil) as i64)
        as usize;
    (start..start + stencil)
        .map(|j| {
            let weight: f64 = (start..start + stencil)
                .filter(|&k| k != j)
                .map(|k| (u - k as f64) / (j as f64 - k as f64))
                .product();
            samples[j] * weight
        })
        .sum()
}

/// Kernel propagation against Crank–Nicolson on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossOracle {
    pub kernel: Propagation,
    pub grid: GridEvolution,
    pub l2_distance: f64,
}

/// Evolves `f` by `t` with `kernel` and with [`grid_evolve`] under the same
/// Hamiltonian: without the oscillator for the free kernels, and with
/// `n = 1/2` for the line kernels.
pub fn cross_oracle(
    f: &TestFunction,
    grid: GridSpec,
    t: f64,
    kernel: KernelSelector,
    params: &PhysParams,
) -> Result<CrossOracle> {
    let mut oracle_params = *params;
    if !kernel.uses_omega() {
        oracle_params = oracle_params.with_omega(0.0)?;
    }
    if kernel.domain() == Domain::Line {
        oracle_params = oracle_params.with_order(BesselOrder::HALF)?;
    } else {
        f.check_half_line()?;
    }
    let psi0 = f.sample(grid, params)?;
    let kernel = propagate(&psi0, t, kernel, params)?;
    let evolved = grid_evolve(&psi0, t, &oracle_params)?;
    let l2_distance = kernel.psi.l2_distance(&evolved.psi)?;
    Ok(CrossOracle {
        kernel,
        grid: evolved,
        l2_distance,
    })
}
