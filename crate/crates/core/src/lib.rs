// Negated comparisons are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolve;
pub mod kernels;
pub mod numerics;
pub mod oracle;
pub mod params;
pub mod sl2rep;

pub use error::{Error, Result};
pub use kernels::{KernelPoint, KernelSelector, KernelValue, RouteId};
pub use numerics::{BesselOrder, ComplexVal, QuadratureSpec};
pub use params::PhysParams;
pub use sl2rep::{IdentityId, Sl2Matrix};
