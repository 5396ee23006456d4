//! The two-dimensional representation of the algebra spanned by `x²`,
//! `p² + λ/x²` and `xp + px`, and residual checks for the disentangling
//! identities that factor `exp(−iHt/ħ)` into single-generator exponentials.
//!
//! In this representation
//!
//! ```text
//! x²          -> [[0, 2ħ], [0, 0]]
//! p² + λ/x²   -> [[0, 0], [2ħ, 0]]
//! xp + px     -> [[−2iħ, 0], [0, 2iħ]]
//! ```
//!
//! and the coupling λ drops out entirely.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::params::PhysParams;

/// Tolerance used to reject trace and validity-window edge cases.
pub const TRACE_TOLERANCE: f64 = 1e-14;

/// Distance from a divergence of tan or from cos ωt = 0 below which a
/// factorization is refused.
pub const WINDOW_TOLERANCE: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// A 2×2 complex matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Matrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Sl2Matrix {
    pub const IDENTITY: Sl2Matrix = Sl2Matrix {
        a: ONE,
        b: ZERO,
        c: ZERO,
        d: ONE,
    };
    pub const ZERO: Sl2Matrix = Sl2Matrix {
        a: ZERO,
        b: ZERO,
        c: ZERO,
        d: ZERO,
    };

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Sl2Matrix { a, b, c, d }
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Sl2Matrix::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn commutator(&self, other: &Sl2Matrix) -> Self {
        *self * *other - *other * *self
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Spectral (operator 2-) norm.
    pub fn operator_norm(&self) -> f64 {
        let frob_sq: f64 = self.entries().iter().map(|z| z.norm_sqr()).sum();
        let det = self.det().norm();
        let disc = (frob_sq * frob_sq - 4.0 * det * det).max(0.0).sqrt();
        (0.5 * (frob_sq + disc)).sqrt()
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_finite(&self) -> bool {
        self.entries()
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Mul for Sl2Matrix {
    type Output = Sl2Matrix;

    fn mul(self, r: Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix::new(
            self.a * r.a + self.b * r.c,
            self.a * r.b + self.b * r.d,
            self.c * r.a + self.d * r.c,
            self.c * r.b + self.d * r.d,
        )
    }
}

impl Add for Sl2Matrix {
    type Output = Sl2Matrix;

    fn add(self, r: Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix::new(self.a + r.a, self.b + r.b, self.c + r.c, self.d + r.d)
    }
}

impl Sub for Sl2Matrix {
    type Output = Sl2Matrix;

    fn sub(self, r: Sl2Matrix) -> Sl2Matrix {
        Sl2Matrix::new(self.a - r.a, self.b - r.b, self.c - r.c, self.d - r.d)
    }
}

impl Neg for Sl2Matrix {
    type Output = Sl2Matrix;

    fn neg(self) -> Sl2Matrix {
        Sl2Matrix::new(-self.a, -self.b, -self.c, -self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneratorId {
    /// `x²`
    X2,
    /// `p² + λ/x²`
    P2L,
    /// `xp + px`
    D,
}

pub fn generator_matrix(id: GeneratorId, params: &PhysParams) -> Sl2Matrix {
    let two_hbar = Complex64::new(2.0 * params.hbar(), 0.0);
    match id {
        GeneratorId::X2 => Sl2Matrix::new(ZERO, two_hbar, ZERO, ZERO),
        GeneratorId::P2L => Sl2Matrix::new(ZERO, ZERO, two_hbar, ZERO),
        GeneratorId::D => Sl2Matrix::new(-I * two_hbar, ZERO, ZERO, I * two_hbar),
    }
}

/// `−(it/ħ)(P2L/2m + mω²X2/2)`, the algebra element whose exponential is the
/// evolution operator.
pub fn hamiltonian_matrix(t: f64, params: &PhysParams) -> Sl2Matrix {
    let m = params.mass();
    let w = params.omega();
    let kinetic = generator_matrix(GeneratorId::P2L, params).scale((0.5 / m).into());
    let potential = generator_matrix(GeneratorId::X2, params).scale((0.5 * m * w * w).into());
    (kinetic + potential).scale(-I * (t / params.hbar()))
}

/// `exp(M)` for traceless `M`: `cosh(s) I + (sinh(s)/s) M` with `s² = −det M`.
pub fn exp_traceless(m: &Sl2Matrix) -> Result<Sl2Matrix> {
    let trace = m.trace().norm();
    if trace > TRACE_TOLERANCE * m.max_abs().max(1.0) {
        return Err(Error::NonTraceless(trace));
    }
    let s_sq = -m.det();
    let (cosh, sinhc) = if s_sq.norm() < 1e-8 {
        // cosh s and sinh(s)/s as power series in s²
        let s4 = s_sq * s_sq;
        (ONE + s_sq / 2.0 + s4 / 24.0, ONE + s_sq / 6.0 + s4 / 120.0)
    } else {
        let s = s_sq.sqrt();
        (s.cosh(), s.sinh() / s)
    };
    Ok(Sl2Matrix::new(
        cosh + sinhc * m.a,
        sinhc * m.b,
        sinhc * m.c,
        cosh + sinhc * m.d,
    ))
}

/// One of the seven factorizations of `exp(−iHt/ħ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityId {
    /// `e^{−iαx²} e^{−iβ(p²+λ/x²)} e^{−iαx²}`
    Main,
    A1a,
    A1b,
    A2a,
    A2b,
    A3a,
    A3b,
}

impl IdentityId {
    pub const ALL: [IdentityId; 7] = [
        IdentityId::Main,
        IdentityId::A1a,
        IdentityId::A1b,
        IdentityId::A2a,
        IdentityId::A2b,
        IdentityId::A3a,
        IdentityId::A3b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Main => "MAIN",
            IdentityId::A1a => "A1a",
            IdentityId::A1b => "A1b",
            IdentityId::A2a => "A2a",
            IdentityId::A2b => "A2b",
            IdentityId::A3a => "A3a",
            IdentityId::A3b => "A3b",
        }
    }

    /// Generators in left-to-right product order.
    pub fn factor_order(self) -> [GeneratorId; 3] {
        use GeneratorId::*;
        match self {
            IdentityId::Main => [X2, P2L, X2],
            IdentityId::A1a => [X2, D, P2L],
            IdentityId::A1b => [P2L, D, X2],
            IdentityId::A2a => [D, X2, P2L],
            IdentityId::A2b => [P2L, X2, D],
            IdentityId::A3a => [X2, P2L, D],
            IdentityId::A3b => [D, P2L, X2],
        }
    }

    /// Whether `ωt` lies where the coefficients are finite and real.
    pub fn is_valid_at(self, omega_t: f64) -> bool {
        match self {
            IdentityId::Main => (0.5 * omega_t).cos().abs() > WINDOW_TOLERANCE,
            _ => omega_t.cos() > WINDOW_TOLERANCE,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| domain(format!("unknown identity '{s}'")))
    }
}

/// Coefficients of `e^{−iαx²}`, `e^{−iβ(p²+λ/x²)}` and `e^{−iγ(xp+px)}` in
/// one factorization at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorCoeffs {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub identity: IdentityId,
}

impl FactorCoeffs {
    pub fn coefficient(&self, generator: GeneratorId) -> f64 {
        match generator {
            GeneratorId::X2 => self.alpha,
            GeneratorId::P2L => self.beta,
            GeneratorId::D => self.gamma,
        }
    }
}

/// `sin(ωt)/ω`, the time at which the `H₀` kernel is evaluated after the
/// quadratic phases are split off; equals `t` when `ω = 0`.
pub fn effective_time(t: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        t
    } else {
        (omega * t).sin() / omega
    }
}

/// `tan(ωt)/ω`, with the `ω → 0` limit `t`.
fn tan_time(t: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        t
    } else {
        (omega * t).tan() / omega
    }
}

pub fn factor_coeffs(identity: IdentityId, t: f64, params: &PhysParams) -> Result<FactorCoeffs> {
    let hbar = params.hbar();
    let m = params.mass();
    let w = params.omega();
    let wt = w * t;
    if !t.is_finite() {
        return Err(domain(format!("time must be finite, got {t}")));
    }
    if !identity.is_valid_at(wt) {
        let reason = match identity {
            IdentityId::Main => "alpha diverges (tan(ωt/2) is infinite)",
            _ => "gamma is not real (cos ωt <= 0) and alpha/beta diverge with tan ωt",
        };
        return Err(Error::IdentityWindow {
            identity: identity.name(),
            omega_t: wt,
            reason,
        });
    }
    let (alpha, beta, gamma) = match identity {
        IdentityId::Main => {
            let alpha = 0.5 * m * w / hbar * (0.5 * wt).tan();
            let beta = effective_time(t, w) / (2.0 * m * hbar);
            (alpha, beta, 0.0)
        }
        _ => {
            let log_cos = wt.cos().ln() / (2.0 * hbar);
            let gamma = match identity {
                IdentityId::A1a | IdentityId::A2a | IdentityId::A3a => log_cos,
                _ => -log_cos,
            };
            let (s, c) = wt.sin_cos();
            let tan_alpha = 0.5 * m * w * w / hbar * tan_time(t, w);
            let tan_beta = tan_time(t, w) / (2.0 * hbar * m);
            match identity {
                IdentityId::A1a | IdentityId::A1b => (tan_alpha, tan_beta, gamma),
                IdentityId::A2a | IdentityId::A2b => (0.5 * m * w / hbar * s * c, tan_beta, gamma),
                _ => (
                    tan_alpha,
                    effective_time(t, w) * c / (2.0 * hbar * m),
                    gamma,
                ),
            }
        }
    };
    Ok(FactorCoeffs {
        alpha,
        beta,
        gamma,
        identity,
    })
}

/// The ordered product of the three factor exponentials.
pub fn identity_product(identity: IdentityId, t: f64, params: &PhysParams) -> Result<Sl2Matrix> {
    let coeffs = factor_coeffs(identity, t, params)?;
    identity
        .factor_order()
        .iter()
        .try_fold(Sl2Matrix::IDENTITY, |acc, &g| {
            let element = generator_matrix(g, params).scale(-I * coeffs.coefficient(g));
            Ok(acc * exp_traceless(&element)?)
        })
}

/// Max-entry residual between the factor product and `exp(−iHt/ħ)`, both
/// divided by the operator norm of the latter.
pub fn identity_residual(identity: IdentityId, t: f64, params: &PhysParams) -> Result<f64> {
    let product = identity_product(identity, t, params)?;
    let target = exp_traceless(&hamiltonian_matrix(t, params))?;
    Ok((product - target).max_abs() / target.operator_norm())
}

/// `|e^G O e^{−G} − Σ_{k ≤ terms} ad_G^k(O)/k!|` as a max-entry norm.
pub fn adjoint_series_check(g: &Sl2Matrix, o: &Sl2Matrix, terms: usize) -> Result<f64> {
    if terms == 0 {
        return Err(domain("adjoint series needs at least one term"));
    }
    for m in [g, o] {
        let trace = m.trace().norm();
        if trace > TRACE_TOLERANCE * m.max_abs().max(1.0) {
            return Err(Error::NonTraceless(trace));
        }
    }
    let conjugated = exp_traceless(g)? * *o * exp_traceless(&-*g)?;
    let mut nested = *o;
    let mut series = *o;
    let mut factorial = 1.0;
    for k in 1..=terms {
        nested = g.commutator(&nested);
        factorial *= k as f64;
        series = series + nested.scale((1.0 / factorial).into());
    }
    Ok((conjugated - series).max_abs())
}
