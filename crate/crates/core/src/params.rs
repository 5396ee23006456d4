use std::fmt;

use crate::error::{domain, Result};
use crate::numerics::BesselOrder;

/// Physical constants of `H = (p² + λ/x²)/2m + mω²x²/2`.
///
/// The coupling is stored as the Bessel order `n`; `λ = ħ²(n² − 1/4)` is
/// derived from it and cannot be set on its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    hbar: f64,
    mass: f64,
    omega: f64,
    order: BesselOrder,
    lambda: f64,
}

impl PhysParams {
    pub fn new(hbar: f64, mass: f64, omega: f64, order: BesselOrder) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(domain(format!("ħ must be finite and > 0, got {hbar}")));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(domain(format!("m must be finite and > 0, got {mass}")));
        }
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(domain(format!("ω must be finite and >= 0, got {omega}")));
        }
        let n = order.value();
        Ok(PhysParams {
            hbar,
            mass,
            omega,
            order,
            lambda: hbar * hbar * (n * n - 0.25),
        })
    }

    /// Parameters from the coupling `λ >= −ħ²/4` instead of the order.
    pub fn with_lambda(hbar: f64, mass: f64, omega: f64, lambda: f64) -> Result<Self> {
        let order = BesselOrder::from_lambda(lambda, hbar)?;
        Self::new(hbar, mass, omega, order)
    }

    /// ħ = m = ω = 1 with the given order.
    pub fn scaled(n: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, BesselOrder::new(n)?)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn order(&self) -> BesselOrder {
        self.order
    }

    pub fn n(&self) -> f64 {
        self.order.value()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, omega, self.order)
    }

    pub fn with_order(&self, order: BesselOrder) -> Result<Self> {
        Self::new(self.hbar, self.mass, self.omega, order)
    }
}

impl Default for PhysParams {
    /// ħ = m = ω = 1 and n = 1/2 (no inverse-square term).
    fn default() -> Self {
        PhysParams {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            order: BesselOrder::HALF,
            lambda: 0.0,
        }
    }
}

impl fmt::Display for PhysParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hbar={:.17e} mass={:.17e} omega={:.17e} n={:.17e} lambda={:.17e}",
            self.hbar,
            self.mass,
            self.omega,
            self.n(),
            self.lambda
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_follows_order() {
        let p = PhysParams::new(2.0, 1.0, 1.0, BesselOrder::new(1.5).unwrap()).unwrap();
        assert_eq!(p.lambda(), 4.0 * (2.25 - 0.25));
        let q = PhysParams::with_lambda(2.0, 1.0, 1.0, p.lambda()).unwrap();
        assert!((q.n() - 1.5).abs() < 1e-15);
        assert_eq!(PhysParams::default().lambda(), 0.0);
    }

    #[test]
    fn boundary_coupling_is_allowed() {
        let p = PhysParams::with_lambda(1.0, 1.0, 0.0, -0.25).unwrap();
        assert_eq!(p.n(), 0.0);
        assert!(PhysParams::with_lambda(1.0, 1.0, 0.0, -0.26).is_err());
    }

    #[test]
    fn rejects_unphysical_constants() {
        let n = BesselOrder::HALF;
        assert!(PhysParams::new(0.0, 1.0, 1.0, n).is_err());
        assert!(PhysParams::new(1.0, -1.0, 1.0, n).is_err());
        assert!(PhysParams::new(1.0, 1.0, -0.1, n).is_err());
    }
}
