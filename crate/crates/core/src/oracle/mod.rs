//! Independent numerical checks of the closed-form kernels: the spectral
//! k-integral and a finite-difference evolver.

mod grid;
mod hankel;

pub use grid::{
    grid_evolve, GridEvolution, GridSpec, GridWavefunction, EDGE_FRACTION, EDGE_THRESHOLD,
};
pub use hankel::{
    eigenfunction_residual, eigenfunction_residual_beyond, hankel_kernel_oracle, hankel_sho_oracle,
    hankel_spec, orthogonality_check, radial_eigenfunction, smeared_delta, standard_suite,
    OracleValue, SUITE_ORDERS,
};
