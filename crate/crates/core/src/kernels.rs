//! Closed-form propagators `⟨x₁|exp(−iHt/ħ)|x₂⟩` and their reconstruction
//! from the disentangled factor products.
//!
//! Branch conventions: every `√(1/(it))` is the principal root, so the free
//! kernel carries `e^{−iπ/4·sgn t}`; `I_n` on the imaginary axis is
//! `I_n(∓iy) = e^{∓inπ/2} J_n(y)` for `y > 0`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::numerics::{
    bessel_i_complex_scaled, integrate_oscillatory, quarter_turn, QuadratureSpec,
};
use crate::params::PhysParams;
use crate::sl2rep::{factor_coeffs, FactorCoeffs, GeneratorId, IdentityId};

pub use crate::sl2rep::effective_time;

/// Smallest `|sin ωt|` at which oscillator kernels are evaluated.
pub const CAUSTIC_TOLERANCE: f64 = 1e-8;

/// Below this `|sin ωt|` a value is tagged [`BranchNote::NearCaustic`].
pub const NEAR_CAUSTIC: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    pub x1: f64,
    pub x2: f64,
    pub t: f64,
}

impl KernelPoint {
    pub fn new(x1: f64, x2: f64, t: f64) -> Self {
        KernelPoint { x1, x2, t }
    }

    pub fn swapped(&self) -> Self {
        KernelPoint::new(self.x2, self.x1, self.t)
    }

    fn check_finite(&self) -> Result<()> {
        if self.x1.is_finite() && self.x2.is_finite() && self.t.is_finite() {
            Ok(())
        } else {
            Err(domain(format!("non-finite kernel point {self:?}")))
        }
    }

    fn check_half_line(&self) -> Result<()> {
        self.check_finite()?;
        if self.x1 > 0.0 && self.x2 > 0.0 {
            Ok(())
        } else {
            Err(domain(format!(
                "half-line kernels need x1, x2 > 0, got ({}, {})",
                self.x1, self.x2
            )))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchNote {
    Principal,
    NearCaustic,
}

impl BranchNote {
    /// [`BranchNote::NearCaustic`] when `|sin ωt| <` [`NEAR_CAUSTIC`].
    pub fn for_sin(sin_abs: f64) -> Self {
        if sin_abs < NEAR_CAUSTIC {
            BranchNote::NearCaustic
        } else {
            BranchNote::Principal
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub branch_note: BranchNote,
}

impl KernelValue {
    fn principal(value: Complex64) -> Self {
        KernelValue {
            value,
            branch_note: BranchNote::Principal,
        }
    }

    fn tagged(value: Complex64, sin_abs: f64) -> Self {
        KernelValue {
            value,
            branch_note: BranchNote::for_sin(sin_abs),
        }
    }
}

/// Full line (`λ = 0`) or half line with the inverse-square term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Line,
    HalfLine,
}

impl Domain {
    /// The line for `n = 1/2`, where the coupling vanishes; the half line otherwise.
    pub fn for_params(params: &PhysParams) -> Domain {
        if params.n() == 0.5 {
            Domain::Line
        } else {
            Domain::HalfLine
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelSelector {
    Free,
    Sho,
    RadialH0,
    RadialSho,
}

impl KernelSelector {
    pub const ALL: [KernelSelector; 4] = [
        KernelSelector::Free,
        KernelSelector::Sho,
        KernelSelector::RadialH0,
        KernelSelector::RadialSho,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelSelector::Free => "free",
            KernelSelector::Sho => "sho",
            KernelSelector::RadialH0 => "radial-h0",
            KernelSelector::RadialSho => "radial-sho",
        }
    }

    pub fn domain(self) -> Domain {
        match self {
            KernelSelector::Free | KernelSelector::Sho => Domain::Line,
            KernelSelector::RadialH0 | KernelSelector::RadialSho => Domain::HalfLine,
        }
    }

    /// Whether the kernel includes the oscillator potential.
    pub fn uses_omega(self) -> bool {
        matches!(self, KernelSelector::Sho | KernelSelector::RadialSho)
    }

    pub fn evaluate(self, pt: &KernelPoint, params: &PhysParams) -> Result<KernelValue> {
        match self {
            KernelSelector::Free => free_kernel(pt, params),
            KernelSelector::Sho => sho_kernel(pt, params),
            KernelSelector::RadialH0 => radial_h0_kernel(pt, params),
            KernelSelector::RadialSho => radial_sho_kernel(pt, params),
        }
    }

    /// The kernel at complex time `τ` with `Im τ <= 0`, where it decays.
    pub fn evaluate_complex(
        self,
        x1: f64,
        x2: f64,
        tau: Complex64,
        params: &PhysParams,
    ) -> Result<Complex64> {
        if tau.im > 0.0 || tau.norm() == 0.0 {
            return Err(domain(format!(
                "complex time needs Im τ <= 0 and τ ≠ 0, got {tau}"
            )));
        }
        let m = params.mass();
        let hbar = params.hbar();
        let w = params.omega();
        let i = Complex64::i();
        match self {
            KernelSelector::Free => Ok(free_complex(x1 - x2, tau, m, hbar)),
            KernelSelector::Sho if w == 0.0 => Ok(free_complex(x1 - x2, tau, m, hbar)),
            KernelSelector::Sho => {
                let (s, c) = ((w * tau).sin(), (w * tau).cos());
                let amp = (m * w / (2.0 * PI * hbar * i * s)).sqrt();
                let phase =
                    i * (m * w / (2.0 * hbar)) * ((x1 * x1 + x2 * x2) * c / s - 2.0 * x1 * x2 / s);
                Ok(amp * phase.exp())
            }
            KernelSelector::RadialH0 => radial_complex(x1, x2, tau, tau, params),
            KernelSelector::RadialSho if w == 0.0 => radial_complex(x1, x2, tau, tau, params),
            KernelSelector::RadialSho => {
                let s = (w * tau).sin() / w;
                let cot_time = (w * tau).tan() / w;
                radial_complex(x1, x2, s, cot_time, params)
            }
        }
    }
}

impl fmt::Display for KernelSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelSelector::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| domain(format!("unknown kernel '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RouteId {
    /// The closed form itself.
    Direct,
    /// Quadratic phases around the `H₀` kernel at the effective time.
    Element,
    A1a,
    A2a,
    A3a,
}

impl RouteId {
    pub const ALL: [RouteId; 5] = [
        RouteId::Direct,
        RouteId::Element,
        RouteId::A1a,
        RouteId::A2a,
        RouteId::A3a,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RouteId::Direct => "DIRECT",
            RouteId::Element => "ELEMENT",
            RouteId::A1a => "A1a",
            RouteId::A2a => "A2a",
            RouteId::A3a => "A3a",
        }
    }

    pub fn identity(self) -> Option<IdentityId> {
        match self {
            RouteId::Direct => None,
            RouteId::Element => Some(IdentityId::Main),
            RouteId::A1a => Some(IdentityId::A1a),
            RouteId::A2a => Some(IdentityId::A2a),
            RouteId::A3a => Some(IdentityId::A3a),
        }
    }
}

impl fmt::Display for RouteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RouteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RouteId::ALL
            .iter()
            .copied()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| domain(format!("unknown route '{s}'")))
    }
}

/// Rejects `|sin ωt| <= CAUSTIC_TOLERANCE` and returns `|sin ωt|`.
pub fn check_caustic(t: f64, omega: f64) -> Result<f64> {
    let sin_abs = (omega * t).sin().abs();
    if sin_abs <= CAUSTIC_TOLERANCE {
        let nearest = if omega == 0.0 {
            0.0
        } else {
            (omega * t / PI).round() * PI / omega
        };
        return Err(Error::CausticSingularity {
            t,
            sin_abs,
            nearest,
        });
    }
    Ok(sin_abs)
}

fn nonzero_time(t: f64) -> Result<()> {
    if t == 0.0 {
        Err(domain(
            "t = 0: the kernel is a delta function there; use the delta-limit checks",
        ))
    } else {
        Ok(())
    }
}

/// `√(m/(2πiħt)) exp(im d²/(2ħt))` for real `t ≠ 0`.
fn free_value(d: f64, t: f64, m: f64, hbar: f64) -> Complex64 {
    let amp = (m / (2.0 * PI * hbar * t.abs())).sqrt();
    quarter_turn(t.signum()) * Complex64::from_polar(amp, m * d * d / (2.0 * hbar * t))
}

fn free_complex(d: f64, tau: Complex64, m: f64, hbar: f64) -> Complex64 {
    let i = Complex64::i();
    (m / (2.0 * PI * hbar * i * tau)).sqrt() * (i * (m * d * d / (2.0 * hbar)) / tau).exp()
}

/// `(m√(x₁x₂)/(iħs)) I_n(mx₁x₂/(iħs)) exp(im(x₁²+x₂²)/(2ħc))` for real `s, c`.
fn radial_value(x1: f64, x2: f64, s: f64, c: f64, params: &PhysParams) -> Result<Complex64> {
    let m = params.mass();
    let hbar = params.hbar();
    let y = m * x1 * x2 / (hbar * s);
    let bessel = bessel_i_complex_scaled(params.order(), Complex64::new(0.0, -y))?;
    let prefactor = Complex64::new(0.0, -m * (x1 * x2).sqrt() / (hbar * s));
    let phase = Complex64::from_polar(1.0, m * (x1 * x1 + x2 * x2) / (2.0 * hbar * c));
    Ok(prefactor * bessel * phase)
}

/// Complex-time version of [`radial_value`], with the growth of `I_n` folded
/// into the Gaussian phase factor.
fn radial_complex(
    x1: f64,
    x2: f64,
    s: Complex64,
    c: Complex64,
    params: &PhysParams,
) -> Result<Complex64> {
    let m = params.mass();
    let hbar = params.hbar();
    let i = Complex64::i();
    let z = m * x1 * x2 / (i * hbar * s);
    let scaled = bessel_i_complex_scaled(params.order(), z)?;
    let prefactor = m * (x1 * x2).sqrt() / (i * hbar * s);
    let exponent = i * (m * (x1 * x1 + x2 * x2) / (2.0 * hbar)) / c + z.re.abs();
    Ok(prefactor * scaled * exponent.exp())
}

/// A kernel with its time-dependent constants evaluated once, for repeated
/// evaluation at one `t`.
#[derive(Debug, Clone, Copy)]
pub struct PreparedKernel {
    form: Form,
    params: PhysParams,
    branch_note: BranchNote,
}

#[derive(Debug, Clone, Copy)]
enum Form {
    Free {
        t: f64,
    },
    Oscillator {
        amp: Complex64,
        coeff: f64,
        cos: f64,
        sin: f64,
    },
    Radial {
        s: f64,
        c: f64,
    },
}

impl KernelSelector {
    /// Checks `t` (nonzero, away from caustics) and precomputes constants.
    pub fn prepare(self, t: f64, params: &PhysParams) -> Result<PreparedKernel> {
        if !t.is_finite() {
            return Err(domain(format!("time must be finite, got {t}")));
        }
        let w = if self.uses_omega() {
            params.omega()
        } else {
            0.0
        };
        let (form, sin_abs) = if w == 0.0 {
            nonzero_time(t)?;
            let form = match self.domain() {
                Domain::Line => Form::Free { t },
                Domain::HalfLine => Form::Radial { s: t, c: t },
            };
            (form, 1.0)
        } else {
            let sin_abs = check_caustic(t, w)?;
            let form = match self.domain() {
                Domain::Line => {
                    let m = params.mass();
                    let hbar = params.hbar();
                    let (sin, cos) = (w * t).sin_cos();
                    let amp = (m * w / (2.0 * PI * hbar * sin.abs())).sqrt();
                    Form::Oscillator {
                        amp: quarter_turn(sin.signum()) * amp,
                        coeff: m * w / (2.0 * hbar),
                        cos,
                        sin,
                    }
                }
                Domain::HalfLine => Form::Radial {
                    s: effective_time(t, w),
                    c: (w * t).tan() / w,
                },
            };
            (form, sin_abs)
        };
        Ok(PreparedKernel {
            form,
            params: *params,
            branch_note: BranchNote::for_sin(sin_abs),
        })
    }
}

impl PreparedKernel {
    pub fn domain(&self) -> Domain {
        match self.form {
            Form::Radial { .. } => Domain::HalfLine,
            _ => Domain::Line,
        }
    }

    pub fn branch_note(&self) -> BranchNote {
        self.branch_note
    }

    /// `K(x₁, x₂)`; half-line forms need `x₁, x₂ > 0`.
    pub fn value(&self, x1: f64, x2: f64) -> Result<Complex64> {
        match self.form {
            Form::Free { t } => Ok(free_value(
                x1 - x2,
                t,
                self.params.mass(),
                self.params.hbar(),
            )),
            Form::Oscillator {
                amp,
                coeff,
                cos,
                sin,
            } => {
                let phase = coeff * ((x1 * x1 + x2 * x2) * cos - 2.0 * x1 * x2) / sin;
                Ok(amp * Complex64::from_polar(1.0, phase))
            }
            Form::Radial { s, c } => {
                if !(x1 > 0.0 && x2 > 0.0) {
                    return Err(domain(format!(
                        "half-line kernels need x1, x2 > 0, got ({x1}, {x2})"
                    )));
                }
                radial_value(x1, x2, s, c, &self.params)
            }
        }
    }

    pub fn evaluate(&self, x1: f64, x2: f64) -> Result<KernelValue> {
        Ok(KernelValue {
            value: self.value(x1, x2)?,
            branch_note: self.branch_note,
        })
    }
}

fn evaluate_point(
    kernel: KernelSelector,
    pt: &KernelPoint,
    params: &PhysParams,
) -> Result<KernelValue> {
    match kernel.domain() {
        Domain::Line => pt.check_finite()?,
        Domain::HalfLine => pt.check_half_line()?,
    }
    kernel.prepare(pt.t, params)?.evaluate(pt.x1, pt.x2)
}

/// Free-particle kernel on the line.
pub fn free_kernel(pt: &KernelPoint, params: &PhysParams) -> Result<KernelValue> {
    evaluate_point(KernelSelector::Free, pt, params)
}

/// Oscillator kernel on the line; reduces to [`free_kernel`] at `ω = 0`.
pub fn sho_kernel(pt: &KernelPoint, params: &PhysParams) -> Result<KernelValue> {
    evaluate_point(KernelSelector::Sho, pt, params)
}

/// Half-line kernel of `p²/2m + λ/(2mx²)`.
pub fn radial_h0_kernel(pt: &KernelPoint, params: &PhysParams) -> Result<KernelValue> {
    evaluate_point(KernelSelector::RadialH0, pt, params)
}

/// Half-line kernel of the full Hamiltonian; reduces to [`radial_h0_kernel`]
/// at `ω = 0`.
pub fn radial_sho_kernel(pt: &KernelPoint, params: &PhysParams) -> Result<KernelValue> {
    evaluate_point(KernelSelector::RadialSho, pt, params)
}

/// `K(x₁ − x₂) − K(x₁ + x₂)` built from the line kernel (free or oscillator).
pub fn image_kernel(pt: &KernelPoint, params: &PhysParams) -> Result<KernelValue> {
    pt.check_half_line()?;
    let direct = sho_kernel(pt, params)?;
    let mirrored = sho_kernel(&KernelPoint::new(pt.x1, -pt.x2, pt.t), params)?;
    Ok(KernelValue {
        value: direct.value - mirrored.value,
        branch_note: direct.branch_note,
    })
}

/// The line kernel for `Domain::Line`, the half-line kernel otherwise.
pub fn direct_kernel(domain: Domain, pt: &KernelPoint, params: &PhysParams) -> Result<KernelValue> {
    match domain {
        Domain::Line => sho_kernel(pt, params),
        Domain::HalfLine => radial_sho_kernel(pt, params),
    }
}

/// Reassembles the kernel from a disentangled factor product. The domain is
/// the line when `n = 1/2` and the half line otherwise.
pub fn kernel_via_route(
    route: RouteId,
    pt: &KernelPoint,
    params: &PhysParams,
) -> Result<KernelValue> {
    kernel_via_route_on(Domain::for_params(params), route, pt, params)
}

pub fn kernel_via_route_on(
    domain: Domain,
    route: RouteId,
    pt: &KernelPoint,
    params: &PhysParams,
) -> Result<KernelValue> {
    match domain {
        Domain::Line => pt.check_finite()?,
        Domain::HalfLine => pt.check_half_line()?,
    }
    let Some(identity) = route.identity() else {
        return direct_kernel(domain, pt, params);
    };
    nonzero_time(pt.t)?;
    let w = params.omega();
    let sin_abs = if w == 0.0 {
        1.0
    } else if identity == IdentityId::Main {
        check_caustic(pt.t, w)?
    } else {
        (w * pt.t).sin().abs()
    };
    let coeffs = factor_coeffs(identity, pt.t, params)?;
    let value = assemble(&coeffs, pt, domain, params)?;
    Ok(KernelValue::tagged(value, sin_abs))
}

/// `⟨x₁|F₁F₂F₃|x₂⟩` where exactly one factor is `exp(−iβ(p²+λ/x²))`.
///
/// Factors left of it act on the bra, factors right of it on the ket:
/// `e^{−iαx²}` multiplies by its value at the current position and
/// `e^{−iγ(xp+px)}` sends `⟨x|` to `e^{−ħγ}⟨x e^{−2ħγ}|` and `|x⟩` to
/// `e^{ħγ}|x e^{2ħγ}⟩`. The middle factor is the `H₀` kernel at time `2mħβ`.
fn assemble(
    coeffs: &FactorCoeffs,
    pt: &KernelPoint,
    domain: Domain,
    params: &PhysParams,
) -> Result<Complex64> {
    let hbar = params.hbar();
    let order = coeffs.identity.factor_order();
    let mid = order
        .iter()
        .position(|&g| g == GeneratorId::P2L)
        .expect("every factorization has one P2L factor");
    let mut amp = Complex64::new(1.0, 0.0);

    let mut xl = pt.x1;
    for g in &order[..mid] {
        match g {
            GeneratorId::X2 => amp *= Complex64::from_polar(1.0, -coeffs.alpha * xl * xl),
            GeneratorId::D => {
                amp *= (-hbar * coeffs.gamma).exp();
                xl *= (-2.0 * hbar * coeffs.gamma).exp();
            }
            GeneratorId::P2L => unreachable!(),
        }
    }
    let mut xr = pt.x2;
    for g in order[mid + 1..].iter().rev() {
        match g {
            GeneratorId::X2 => amp *= Complex64::from_polar(1.0, -coeffs.alpha * xr * xr),
            GeneratorId::D => {
                amp *= (hbar * coeffs.gamma).exp();
                xr *= (2.0 * hbar * coeffs.gamma).exp();
            }
            GeneratorId::P2L => unreachable!(),
        }
    }

    let tau = 2.0 * params.mass() * hbar * coeffs.beta;
    nonzero_time(tau)?;
    let inner = match domain {
        Domain::Line => free_value(xl - xr, tau, params.mass(), hbar),
        Domain::HalfLine => radial_value(xl, xr, tau, tau, params)?,
    };
    Ok(amp * inner)
}

/// Leading short-time form of the half-line `H₀` kernel:
/// `K_free(x₁ − x₂) + e^{−iπ(n+1/2) sgn t} K_free(x₁ + x₂)`.
///
/// The reflected term has the same modulus as the direct one, so the kernel
/// tends to this two-term sum (relative error `O(t)`), not to the free
/// kernel alone.
pub fn short_time_asymptote(pt: &KernelPoint, params: &PhysParams) -> Result<KernelValue> {
    pt.check_half_line()?;
    nonzero_time(pt.t)?;
    let m = params.mass();
    let hbar = params.hbar();
    let direct = free_value(pt.x1 - pt.x2, pt.t, m, hbar);
    let reflected = free_value(pt.x1 + pt.x2, pt.t, m, hbar);
    let turn = Complex64::from_polar(1.0, -(params.n() + 0.5) * PI * pt.t.signum());
    Ok(KernelValue::principal(direct + turn * reflected))
}

/// Outcome of composing two kernels by quadrature over the intermediate point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemigroupCheck {
    pub composed: Complex64,
    pub direct: Complex64,
    pub error_estimate: f64,
}

impl SemigroupCheck {
    pub fn relative_error(&self) -> f64 {
        (self.composed - self.direct).norm() / self.direct.norm().max(self.composed.norm())
    }
}

/// Quadrature settings sized so that the regularized product of kernels at
/// `t₁` and `t₂` has decayed below `e^{−30}` at the upper limit and every
/// panel spans at most one oscillation.
pub fn semigroup_spec(x1: f64, x2: f64, t1: f64, t2: f64, params: &PhysParams) -> QuadratureSpec {
    let base = QuadratureSpec::default();
    let eps_min = base.epsilons().into_iter().fold(f64::INFINITY, f64::min);
    let rate = 1.0 / t1.abs() + 1.0 / t2.abs();
    let m_over_hbar = params.mass() / params.hbar();
    let y_max = (60.0 / (m_over_hbar * eps_min * rate)).sqrt() + x1.abs() + x2.abs();
    let max_wavenumber = m_over_hbar * y_max * rate + m_over_hbar * (x1.abs() + x2.abs()) * rate;
    let panels = (y_max * max_wavenumber / (2.0 * PI)).ceil() as usize;
    QuadratureSpec {
        k_max: y_max,
        panel_count: panels.max(64),
        ..base
    }
}

/// `∫ K(x₁, y; t₁) K(y, x₂; t₂) dy` against `K(x₁, x₂; t₁ + t₂)`. The
/// integral runs over the kernel's domain with times regularized to
/// `t − iε|t|` and extrapolated to `ε = 0`.
pub fn semigroup_check(
    kernel: KernelSelector,
    x1: f64,
    x2: f64,
    t1: f64,
    t2: f64,
    params: &PhysParams,
    spec: &QuadratureSpec,
) -> Result<SemigroupCheck> {
    let w = if kernel.uses_omega() {
        params.omega()
    } else {
        0.0
    };
    for t in [t1, t2, t1 + t2] {
        nonzero_time(t)?;
        if w != 0.0 {
            check_caustic(t, w)?;
        }
    }
    let direct = kernel
        .evaluate(&KernelPoint::new(x1, x2, t1 + t2), params)?
        .value;
    let tau = |t: f64, eps: f64| Complex64::new(t, -eps * t.abs());
    let product = |y: f64, eps: f64| -> Result<Complex64> {
        let a = kernel.evaluate_complex(x1, y, tau(t1, eps), params)?;
        let b = kernel.evaluate_complex(y, x2, tau(t2, eps), params)?;
        Ok(a * b)
    };
    let failure = std::cell::Cell::new(None);
    let integrand = |y: f64, eps: f64| {
        let value = match kernel.domain() {
            Domain::Line => product(y, eps).and_then(|a| Ok(a + product(-y, eps)?)),
            Domain::HalfLine => product(y, eps),
        };
        value.unwrap_or_else(|e| {
            failure.set(Some(e));
            Complex64::new(0.0, 0.0)
        })
    };
    let result = integrate_oscillatory(integrand, spec)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(SemigroupCheck {
        composed: result.value,
        direct,
        error_estimate: result.error_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BesselOrder;
    use std::f64::consts::FRAC_PI_2;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm())
    }

    fn params(n: f64, omega: f64) -> PhysParams {
        PhysParams::new(1.0, 1.0, omega, BesselOrder::new(n).unwrap()).unwrap()
    }

    #[test]
    fn free_kernel_at_coincident_points() {
        let k = free_kernel(&KernelPoint::new(0.7, 0.7, 1.0), &params(0.5, 0.0)).unwrap();
        let v = 0.28209479177387814;
        assert!((k.value - Complex64::new(v, -v)).norm() < 1e-15);
    }

    #[test]
    fn free_kernel_modulus_and_reversal() {
        let p = PhysParams::new(0.6, 1.7, 0.0, BesselOrder::HALF).unwrap();
        let modulus = (1.7 / (2.0 * PI * 0.6 * 0.4_f64)).sqrt();
        for &(x1, x2) in &[(0.0, 0.0), (1.0, -2.0), (3.0, 0.5)] {
            let k = free_kernel(&KernelPoint::new(x1, x2, 0.4), &p)
                .unwrap()
                .value;
            assert!((k.norm() - modulus).abs() < 1e-14);
            let back = free_kernel(&KernelPoint::new(x2, x1, -0.4), &p)
                .unwrap()
                .value;
            assert!((back - k.conj()).norm() < 1e-15);
        }
        assert!(free_kernel(&KernelPoint::new(1.0, 1.0, 0.0), &p).is_err());
    }

    #[test]
    fn sho_quarter_period() {
        let k = sho_kernel(&KernelPoint::new(1.0, 1.0, FRAC_PI_2), &params(0.5, 1.0))
            .unwrap()
            .value;
        assert!((k.norm() - 0.3989422804014327).abs() < 1e-15);
        let want = -PI / 4.0 - 1.0;
        assert!((k.arg() - want).abs() < 1e-14);
    }

    #[test]
    fn sho_small_omega_limit() {
        let pt = KernelPoint::new(0.3, 0.5, 1.0);
        let free = free_kernel(&pt, &params(0.5, 0.0)).unwrap().value;
        let sho = sho_kernel(&pt, &params(0.5, 1e-4)).unwrap().value;
        assert!(rel(sho, free) < 1e-8);
        let radial = radial_sho_kernel(&pt, &params(1.3, 1e-4)).unwrap().value;
        let h0 = radial_h0_kernel(&pt, &params(1.3, 0.0)).unwrap().value;
        assert!(rel(radial, h0) < 1e-8);
    }

    #[test]
    fn caustics_are_refused() {
        let p = params(0.5, 1.0);
        let err = sho_kernel(&KernelPoint::new(1.0, 1.0, PI - 1e-12), &p).unwrap_err();
        match err {
            Error::CausticSingularity { nearest, .. } => assert!((nearest - PI).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        assert!(
            radial_sho_kernel(&KernelPoint::new(1.0, 1.0, 2.0 * PI), &params(1.0, 1.0)).is_err()
        );
        let near = sho_kernel(&KernelPoint::new(1.0, 1.0, PI - 1e-6), &p).unwrap();
        assert_eq!(near.branch_note, BranchNote::NearCaustic);
    }

    #[test]
    fn half_order_is_image_formula() {
        let p0 = params(0.5, 0.0);
        let p1 = params(0.5, 1.0);
        for &(x1, x2, t) in &[(1.0, 2.0, 0.5), (0.3, 0.9, 1.7), (2.5, 2.4, -0.8)] {
            let pt = KernelPoint::new(x1, x2, t);
            let radial = radial_h0_kernel(&pt, &p0).unwrap().value;
            assert!(rel(radial, image_kernel(&pt, &p0).unwrap().value) < 1e-12);
            let pt = KernelPoint::new(x1, x2, PI / 4.0);
            let radial = radial_sho_kernel(&pt, &p1).unwrap().value;
            assert!(rel(radial, image_kernel(&pt, &p1).unwrap().value) < 1e-12);
        }
    }

    #[test]
    fn order_zero_value() {
        // (1/i) I₀(−i) e^{i} with I₀(−i) = J₀(1) = 0.7651976865579666
        let k = radial_h0_kernel(&KernelPoint::new(1.0, 1.0, 1.0), &params(0.0, 0.0))
            .unwrap()
            .value;
        let want = Complex64::new(0.0, -0.7651976865579666) * Complex64::from_polar(1.0, 1.0);
        assert!(rel(k, want) < 1e-14);
    }

    #[test]
    fn symmetry_and_time_reversal() {
        let p = params(1.7, 0.9);
        for kernel in KernelSelector::ALL {
            let pt = KernelPoint::new(0.6, 1.45, 0.83);
            let a = kernel.evaluate(&pt, &p).unwrap().value;
            let b = kernel.evaluate(&pt.swapped(), &p).unwrap().value;
            assert_eq!(a, b, "{kernel}");
            let back = kernel
                .evaluate(&KernelPoint::new(pt.x1, pt.x2, -pt.t), &p)
                .unwrap()
                .value;
            assert!((back - a.conj()).norm() < 1e-14 * a.norm(), "{kernel}");
        }
    }

    #[test]
    fn half_line_requires_positive_positions() {
        let p = params(1.0, 1.0);
        assert!(radial_h0_kernel(&KernelPoint::new(0.0, 1.0, 1.0), &p).is_err());
        assert!(radial_sho_kernel(&KernelPoint::new(1.0, -1.0, 1.0), &p).is_err());
    }

    #[test]
    fn element_route_matches_oscillator() {
        let p = params(0.5, 1.0);
        for &wt in &[0.3, 1.2, 2.5, -0.7] {
            let pt = KernelPoint::new(0.4, -1.1, wt);
            let route = kernel_via_route(RouteId::Element, &pt, &p).unwrap().value;
            let direct = sho_kernel(&pt, &p).unwrap().value;
            assert!(rel(route, direct) < 1e-12, "ωt = {wt}");
        }
    }

    #[test]
    fn a_routes_on_line_and_half_line() {
        let line = params(0.5, 1.0);
        let pt = KernelPoint::new(0.9, 1.6, 0.4);
        let direct = sho_kernel(&pt, &line).unwrap().value;
        let a1a = kernel_via_route(RouteId::A1a, &pt, &line).unwrap().value;
        assert!(rel(a1a, direct) < 1e-12);

        let half = params(1.5, 1.0);
        let pt = KernelPoint::new(0.9, 1.6, 0.6);
        let direct = radial_sho_kernel(&pt, &half).unwrap().value;
        for route in [RouteId::Element, RouteId::A1a, RouteId::A2a, RouteId::A3a] {
            let v = kernel_via_route(route, &pt, &half).unwrap().value;
            assert!(rel(v, direct) < 1e-10, "{route}");
        }
    }

    #[test]
    fn a_routes_refuse_outside_window() {
        let p = params(1.0, 1.0);
        let pt = KernelPoint::new(1.0, 1.0, 2.0);
        assert!(matches!(
            kernel_via_route(RouteId::A2a, &pt, &p),
            Err(Error::IdentityWindow { .. })
        ));
        assert!(kernel_via_route(RouteId::Element, &pt, &p).is_ok());
    }

    #[test]
    fn cot_recombination() {
        for theta in [0.1_f64, 0.4, 0.7, 1.2] {
            let lhs = 1.0 / (2.0 * theta).tan();
            let rhs = -theta.tan() + 1.0 / (2.0 * theta).sin();
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn complex_time_matches_real_time() {
        let p = params(1.5, 0.8);
        for kernel in KernelSelector::ALL {
            let pt = KernelPoint::new(0.7, 1.3, 0.9);
            let real = kernel.evaluate(&pt, &p).unwrap().value;
            let complex = kernel
                .evaluate_complex(pt.x1, pt.x2, Complex64::new(pt.t, -1e-300), &p)
                .unwrap();
            assert!(rel(real, complex) < 1e-12, "{kernel}");
        }
    }

    #[test]
    fn short_time_two_branch_limit() {
        let p = params(1.0, 1.0);
        let errors: Vec<f64> = [0.02, 0.00125]
            .iter()
            .map(|&t| {
                let pt = KernelPoint::new(1.0, 1.3, t);
                let kernel = radial_sho_kernel(&pt, &p).unwrap().value;
                let lead = short_time_asymptote(&pt, &p).unwrap().value;
                (kernel - lead).norm() / free_kernel(&pt, &p).unwrap().value.norm()
            })
            .collect();
        assert!(errors[0] < 0.05);
        assert!(errors[1] < errors[0] / 8.0, "{errors:?}");
    }
}
