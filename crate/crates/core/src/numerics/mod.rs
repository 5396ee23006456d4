//! Special functions and quadrature shared by every other module.

mod bessel;
mod gamma;
mod quadrature;

pub(crate) use bessel::quarter_turn;
pub use bessel::{
    bessel_i_complex, bessel_i_complex_scaled, bessel_j, j_half, j_three_halves, BesselOrder,
    ComplexVal, SERIES_CROSSOVER, SERIES_TERMS,
};
pub use gamma::{gamma_real, ln_gamma};
pub use quadrature::{
    integrate_oscillatory, integrate_panels, integrate_regularized, neville_weights,
    QuadratureResult, QuadratureRule, QuadratureSpec, DEFAULT_EPSILON,
    DEFAULT_EXTRAPOLATION_LEVELS,
};
