//! Exact solutions of nonrelativistic perfect-fluid equations with
//! ℓ-conformal Galilei and Lifshitz symmetry.
//!
//! The crate is `no_std` (it needs `alloc`). It contains:
//!
//! * [`algebra`]: vector-field generators with exact polynomial
//!   coefficients, Lie brackets and structure-relation checks.
//! * [`material`]: nested material derivatives, both exact (affine and
//!   radial velocity fields) and by finite differences.
//! * [`catalog`]: every closed-form solution family as a [`FluidSolution`].
//! * [`residual`]: continuity and Euler residuals on sampled grids.
//! * [`transform`]: finite symmetry transformations acting on solutions.
//! * [`kinematics`]: particle orbits, vorticity/shear/expansion and mass
//!   quadrature.
//!
//! IO, the command line and file formats live in the `cfl` crate.
//!
//! Float math goes through `num_traits::Float` (backed by libm). When std is
//! linked anywhere in the build, its inherent methods take precedence and
//! those imports become unused, hence the `allow` on each of them.

#![no_std]
#![deny(unsafe_code)]
// Negated comparisons are deliberate: NaN must fail range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod catalog;
pub mod domain;
pub mod eos;
pub mod error;
pub mod field;
pub mod kinematics;
pub mod material;
pub mod params;
pub mod rational;
pub mod residual;
pub mod roots;
pub mod transform;

mod fd;

pub use crate::domain::{Exclusion, GridAxis, GridSpec, Interval, SpacetimeDomain};
pub use crate::eos::EquationOfState;
pub use crate::error::{Error, Result};
pub use crate::field::{Family, FlowField, FluidSolution, Symmetry, Viscosity};
pub use crate::params::{DynamicalExponent, EllParameter, MAX_DOUBLED_ELL};
pub use crate::rational::Rational;

/// Largest spatial dimension accepted by the solution constructors.
///
/// Field evaluation uses fixed-size scratch buffers of this length.
pub const MAX_DIM: usize = 8;
