//! Material derivatives 𝒟 = ∂_t + v·∇ applied repeatedly to the velocity.

mod affine;
mod fd;
mod laurent;

pub use affine::{
    acceleration_velocity, material_derivative_affine, material_derivative_affine_chain, material_derivative_radial,
    radial_multiplier, AffineVelocity1d,
};
pub use fd::{
    fd_tolerance, material_derivative_fd, material_derivative_fd_of, FnField, StencilConfig, StencilKind,
    VectorSource, RICHARDSON_MAX_DEPTH,
};
pub use laurent::Laurent;
