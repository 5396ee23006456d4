//! Bessel functions of the first kind `J_n(x)` and modified Bessel functions
//! `I_n(z)` for real order `n >= 0`.
//!
//! Both are evaluated by the ascending power series for arguments up to
//! [`SERIES_CROSSOVER`] and by the Hankel large-argument expansion beyond it.
//! Orders above 2 reach the asymptotic region through upward recurrence from
//! the fractional base order, which is stable while `n < x`.
//!
//! `I_n` on the imaginary axis is routed through `J_n` using
//! `I_n(±iy) = e^{±inπ/2} J_n(y)`, which is the case the propagator needs.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::gamma::{gamma_real, ln_gamma};
use crate::error::{domain, Error, Result};

/// Complex value used throughout the crate for phases, kernel values and
/// Bessel arguments.
pub type ComplexVal = Complex64;

/// Argument magnitude separating the power series from the asymptotic expansion.
pub const SERIES_CROSSOVER: f64 = 12.0;

/// Number of series terms used inside the crossover.
pub const SERIES_TERMS: usize = 30;

/// Terms allowed when the series is the fallback outside the crossover
/// (order comparable to or larger than the argument).
const EXTENDED_SERIES_TERMS: usize = 300;

/// Orders below this use the asymptotic expansion directly.
const DIRECT_ASYMPTOTIC_ORDER: f64 = 2.0;

/// Order `n >= 0` of a Bessel function. Related to the inverse-square
/// coupling by `λ = ħ²(n² − 1/4)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub const ZERO: BesselOrder = BesselOrder(0.0);
    pub const HALF: BesselOrder = BesselOrder(0.5);
    pub const THREE_HALVES: BesselOrder = BesselOrder(1.5);

    pub fn new(n: f64) -> Result<Self> {
        if n >= 0.0 && n.is_finite() {
            Ok(BesselOrder(n))
        } else {
            Err(domain(format!(
                "Bessel order must be finite and >= 0, got {n}"
            )))
        }
    }

    /// Order belonging to the coupling `λ = ħ²(n² − 1/4)`; requires `λ >= −ħ²/4`.
    pub fn from_lambda(lambda: f64, hbar: f64) -> Result<Self> {
        let n_sq = lambda / (hbar * hbar) + 0.25;
        if n_sq < 0.0 {
            return Err(domain(format!(
                "λ = {lambda} is below −ħ²/4; the potential is too attractive"
            )));
        }
        Self::new(n_sq.max(0.0).sqrt())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `J_n(x)` for `x >= 0`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(domain(format!("bessel_j requires finite x >= 0, got {x}")));
    }
    Ok(j_nonneg(order.0, x))
}

fn j_nonneg(n: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0.0 { 1.0 } else { 0.0 };
    }
    if n == 0.5 {
        return j_half(x);
    }
    if n == 1.5 && x >= 0.5 {
        return j_three_halves(x);
    }
    if x <= SERIES_CROSSOVER {
        j_series(n, x, SERIES_TERMS)
    } else {
        j_large(n, x)
    }
}

/// `J_{1/2}(x) = √(2/(πx)) sin x`.
pub fn j_half(x: f64) -> f64 {
    (2.0 / (PI * x)).sqrt() * x.sin()
}

/// `J_{3/2}(x) = √(2/(πx)) (sin x / x − cos x)`; loses digits for small `x`.
pub fn j_three_halves(x: f64) -> f64 {
    (2.0 / (PI * x)).sqrt() * (x.sin() / x - x.cos())
}

/// `(x/2)^n / Γ(n + 1)`.
fn series_prefactor(n: f64, x: f64) -> f64 {
    if n == 0.0 {
        return 1.0;
    }
    let half = 0.5 * x;
    if n < 170.0 {
        let p = half.powf(n);
        if p.is_normal() {
            // n + 1 > 0 so gamma_real cannot fail
            return p / gamma_real(n + 1.0).unwrap_or(f64::INFINITY);
        }
    }
    (n * half.ln() - ln_gamma(n + 1.0).unwrap_or(f64::INFINITY)).exp()
}

/// Ascending series `Σ (−x²/4)^k / (k! Γ(n+k+1))` scaled by `(x/2)^n`.
pub(crate) fn j_series(n: f64, x: f64, max_terms: usize) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..max_terms {
        let kf = k as f64;
        term *= q / (kf * (n + kf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    series_prefactor(n, x) * sum
}

/// Hankel expansion coefficients `a_k(n)/x^k`, summed into `(P, Q)` with
/// truncation at the smallest term.
fn hankel_pq(n: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * n * n;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= prev.min(term.abs()) && k > 2 {
            break;
        }
        prev = term.abs();
        term = next;
        // P collects even k with sign (−1)^{k/2}; Q collects odd k with sign (−1)^{(k−1)/2}.
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (p, q)
}

/// Large-argument expansion `√(2/(πx)) (P cos χ − Q sin χ)`, `χ = x − (n/2 + 1/4)π`.
pub(crate) fn j_asymptotic(n: f64, x: f64) -> f64 {
    let (p, q) = hankel_pq(n, x);
    let chi = x - (0.5 * n + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

fn j_large(n: f64, x: f64) -> f64 {
    if n < DIRECT_ASYMPTOTIC_ORDER {
        return j_asymptotic(n, x);
    }
    if n >= x {
        return j_series(n, x, EXTENDED_SERIES_TERMS);
    }
    let base = n.fract();
    let steps = (n - base).round() as usize;
    let mut lower = j_asymptotic(base, x);
    let mut upper = j_asymptotic(base + 1.0, x);
    for j in 1..steps {
        let nu = base + j as f64;
        let next = 2.0 * nu / x * upper - lower;
        lower = upper;
        upper = next;
    }
    upper
}

/// `I_n(z)` for complex `z`. Fails with [`Error::Overflow`] when the value
/// exceeds the `f64` range; use [`bessel_i_complex_scaled`] there.
pub fn bessel_i_complex(order: BesselOrder, z: ComplexVal) -> Result<ComplexVal> {
    let scaled = bessel_i_complex_scaled(order, z)?;
    let factor = z.re.abs().exp();
    let value = scaled * factor;
    if factor.is_finite() && value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow("I_n(z)"))
    }
}

/// `e^{−|Re z|} I_n(z)`, finite for every finite `z`.
pub fn bessel_i_complex_scaled(order: BesselOrder, z: ComplexVal) -> Result<ComplexVal> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(domain(format!(
            "bessel_i_complex requires finite z, got {z}"
        )));
    }
    let n = order.0;
    if z.re == 0.0 {
        return Ok(i_imaginary_axis(n, z.im));
    }
    if z.re < 0.0 {
        // I_n(z e^{±iπ}) = e^{±inπ} I_n(z), with the sign keeping −z on the principal sheet.
        let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
        let rotated = i_scaled_right_half(n, -z);
        return Ok(rotated * Complex64::from_polar(1.0, sign * n * PI));
    }
    Ok(i_scaled_right_half(n, z))
}

/// `I_n(iy) = e^{inπ/2} J_n(y)` and `I_n(−iy) = e^{−inπ/2} J_n(y)` for `y > 0`.
fn i_imaginary_axis(n: f64, y: f64) -> ComplexVal {
    let sign = if y >= 0.0 { 1.0 } else { -1.0 };
    let j = j_nonneg(n, y.abs());
    Complex64::from_polar(1.0, sign * n * FRAC_PI_2) * j
}

/// Scaled `I_n(z)` for `Re z > 0`.
fn i_scaled_right_half(n: f64, z: ComplexVal) -> ComplexVal {
    let modulus = z.norm();
    if n == 0.5 {
        return i_half_scaled(z);
    }
    if n == 1.5 && modulus >= 0.5 {
        return i_three_halves_scaled(z);
    }
    if modulus <= SERIES_CROSSOVER {
        return i_series(n, z, SERIES_TERMS) * (-z.re).exp();
    }
    if n < 4.0 {
        return i_asymptotic_scaled(n, z);
    }
    i_series(n, z, EXTENDED_SERIES_TERMS) * (-z.re).exp()
}

/// Scaled `√(2/(πz)) sinh z`, `Re z >= 0`.
fn i_half_scaled(z: ComplexVal) -> ComplexVal {
    let sinh_scaled = (Complex64::from_polar(1.0, z.im)
        - Complex64::from_polar((-2.0 * z.re).exp(), -z.im))
        * 0.5;
    (2.0 / (PI * z)).sqrt() * sinh_scaled
}

/// Scaled `√(2/(πz)) (cosh z − sinh z / z)`, `Re z >= 0`.
fn i_three_halves_scaled(z: ComplexVal) -> ComplexVal {
    let plus = Complex64::from_polar(1.0, z.im);
    let minus = Complex64::from_polar((-2.0 * z.re).exp(), -z.im);
    let cosh_scaled = (plus + minus) * 0.5;
    let sinh_scaled = (plus - minus) * 0.5;
    (2.0 / (PI * z)).sqrt() * (cosh_scaled - sinh_scaled / z)
}

/// Unscaled ascending series `(z/2)^n Σ (z²/4)^k / (k! Γ(n+k+1))`.
pub(crate) fn i_series(n: f64, z: ComplexVal, max_terms: usize) -> ComplexVal {
    let q = 0.25 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..max_terms {
        let kf = k as f64;
        term *= q / (kf * (n + kf));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    let prefactor = if n == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        let log_half = (0.5 * z).ln();
        (log_half * n - ln_gamma(n + 1.0).unwrap_or(f64::INFINITY)).exp()
    };
    prefactor * sum
}

/// Scaled large-argument expansion for `Re z >= 0`:
/// `I_n(z) ~ e^z/√(2πz) Σ (−1)^k a_k/z^k ± i e^{±inπ} e^{−z}/√(2πz) Σ a_k/z^k`,
/// upper signs for `Im z >= 0`.
pub(crate) fn i_asymptotic_scaled(n: f64, z: ComplexVal) -> ComplexVal {
    let mu = 4.0 * n * n;
    let inv = 1.0 / z;
    let mut growing = Complex64::new(1.0, 0.0);
    let mut decaying = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = term * inv * ((mu - odd * odd) / (k as f64 * 8.0));
        if next.norm() >= prev.min(term.norm()) && k > 2 {
            break;
        }
        prev = term.norm();
        term = next;
        decaying += term;
        if k % 2 == 1 {
            growing -= term;
        } else {
            growing += term;
        }
        if term.norm() < 1e-17 {
            break;
        }
    }
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let root = (2.0 * PI * z).sqrt();
    let lead = Complex64::from_polar(1.0, z.im);
    let reflected = Complex64::new(0.0, sign)
        * Complex64::from_polar((-2.0 * z.re).exp(), sign * n * PI - z.im);
    (lead * growing + reflected * decaying) / root
}

/// Phase helper shared by the kernels: `e^{−iπ/4 · sign}`.
pub(crate) fn quarter_turn(sign: f64) -> ComplexVal {
    Complex64::from_polar(1.0, -FRAC_PI_4 * sign)
}
