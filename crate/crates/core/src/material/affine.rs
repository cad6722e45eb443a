//! Exact material derivatives for velocity fields affine in x and for the
//! radial scaling flow.

use super::laurent::Laurent;
use crate::error::{Error, Result};
use crate::params::{falling_product, EllParameter, MAX_DOUBLED_ELL};
use crate::rational::{int, Rational};

/// v(t, x) = A(t)·x + B(t) in one spatial dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineVelocity1d {
    pub a: Laurent,
    pub b: Laurent,
}

impl AffineVelocity1d {
    pub fn new(a: Laurent, b: Laurent) -> Self {
        Self { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn eval(&self, t: f64, x: f64) -> f64 {
        self.a.eval(t) * x + self.b.eval(t)
    }

    /// One application of 𝒟 = ∂_t + v∂_x to `self`, advected by `flow`:
    /// 𝒟(A_k x + B_k) = (A_k' + A·A_k)x + (B_k' + B·A_k).
    pub fn advect(&self, flow: &AffineVelocity1d) -> Self {
        Self { a: &self.a.derivative() + &(&flow.a * &self.a), b: &self.b.derivative() + &(&flow.b * &self.a) }
    }
}

/// 𝒟^k v with 𝒟 built from v itself. k = 0 returns v.
pub fn material_derivative_affine(v: &AffineVelocity1d, k: usize) -> AffineVelocity1d {
    let mut cur = v.clone();
    for _ in 0..k {
        cur = cur.advect(v);
    }
    cur
}

/// All of 𝒟^0 v, ..., 𝒟^k v.
pub fn material_derivative_affine_chain(v: &AffineVelocity1d, k: usize) -> alloc::vec::Vec<AffineVelocity1d> {
    let mut out = alloc::vec::Vec::with_capacity(k + 1);
    out.push(v.clone());
    for i in 0..k {
        let next = out[i].advect(v);
        out.push(next);
    }
    out
}

/// m_k with 𝒟^k(s·x/t) = m_k·x/t^{k+1}, namely s(s−1)···(s−k).
pub fn radial_multiplier(s: Rational, k: usize) -> Rational {
    falling_product(s, k)
}

/// m_k for the scaling flow v_i = ℓx_i/t, 0 ≤ k ≤ 2ℓ. The multiplier does not
/// depend on the dimension; `d` is validated only.
pub fn material_derivative_radial(ell: EllParameter, k: usize, d: usize) -> Result<Rational> {
    if d == 0 {
        return Err(Error::InvalidParameter("spatial dimension must be positive".into()));
    }
    if k > ell.doubled() as usize {
        return Err(Error::DepthExceeded { depth: k, max: ell.doubled() as usize });
    }
    Ok(radial_multiplier(ell.value(), k))
}

/// v = (n·x + c_{-1} + c_0·t)/t.
pub fn acceleration_velocity(n: u32, c_minus1: Rational, c_0: Rational) -> AffineVelocity1d {
    AffineVelocity1d::new(
        Laurent::monomial(int(n as i128), -1),
        Laurent::from_terms(&[(-1, c_minus1), (0, c_0)]),
    )
}

/// Depth guard shared by the exact and finite-difference paths.
pub(crate) fn check_depth(k: usize) -> Result<()> {
    if k > MAX_DOUBLED_ELL as usize {
        return Err(Error::DepthExceeded { depth: k, max: MAX_DOUBLED_ELL as usize });
    }
    Ok(())
}
