//! Nested material derivatives by finite differences.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::affine::check_depth;
use crate::error::{Error, Result};
use crate::fd::richardson3;
use crate::field::FluidSolution;
use crate::params::MAX_DOUBLED_ELL;
use crate::MAX_DIM;

/// Anything that can be sampled as a vector at (t, x).
pub trait VectorSource {
    fn dim(&self) -> usize;

    /// Length of the sampled vector.
    fn components(&self) -> usize {
        self.dim()
    }

    fn sample(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()>;
}

/// Leaving the solution's domain during a stencil evaluation is reported as
/// [`Error::DomainExceeded`].
impl VectorSource for FluidSolution {
    fn dim(&self) -> usize {
        FluidSolution::dim(self)
    }

    fn sample(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.velocity(t, x, out).map_err(|e| match e {
            Error::OutsideDomain { t } | Error::NonPositiveDensity { t } => Error::DomainExceeded { t },
            other => other,
        })
    }
}

/// A closure `(t, x, out)` viewed as a vector field on d dimensions.
pub struct FnField<F> {
    pub dim: usize,
    pub f: F,
}

impl<F> FnField<F>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> VectorSource for FnField<F>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        (self.f)(t, x, out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StencilKind {
    /// [G(t+h, x+h·v) − G(t−h, x−h·v)]/2h with v taken at the centre:
    /// two evaluations per level.
    Directional,
    /// Central differences in t and in every x_i: 2 + 2d evaluations per level.
    Partial,
}

/// Deepest nest that is Richardson-extrapolated. Beyond it the h/4 nest
/// loses more to roundoff than extrapolation gains.
pub const RICHARDSON_MAX_DEPTH: usize = 9;

/// Steps for the nested second-order central stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilConfig {
    pub kind: StencilKind,
    /// Fixed temporal step. `None` uses the depth schedule.
    pub h_t: Option<f64>,
    /// Fixed spatial step for [`StencilKind::Partial`]. `None` uses the
    /// depth schedule scaled by max(1, |x|).
    pub h_x: Option<f64>,
    /// Base of the depth schedule.
    pub h_base: f64,
    /// Extrapolate the whole nest over h, h/2, h/4 (depths up to
    /// [`RICHARDSON_MAX_DEPTH`]).
    pub richardson: bool,
    /// Largest accepted nesting depth.
    pub max_depth: usize,
}

impl Default for StencilConfig {
    fn default() -> Self {
        Self {
            kind: StencilKind::Directional,
            h_t: None,
            h_x: None,
            h_base: 1e-3,
            richardson: true,
            max_depth: MAX_DOUBLED_ELL as usize,
        }
    }
}

impl StencilConfig {
    pub fn fixed(h: f64) -> Self {
        Self { h_t: Some(h), h_x: Some(h), richardson: false, ..Self::default() }
    }

    pub fn with_kind(mut self, kind: StencilKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |h: Option<f64>| h.map_or(true, |h| h > 0.0 && h.is_finite());
        if !(positive(self.h_t) && positive(self.h_x) && self.h_base > 0.0 && self.h_base < 1.0) {
            return Err(Error::InvalidParameter("stencil steps must be positive (and h_base < 1)".into()));
        }
        if self.max_depth > MAX_DOUBLED_ELL as usize {
            return Err(Error::DepthExceeded { depth: self.max_depth, max: MAX_DOUBLED_ELL as usize });
        }
        Ok(())
    }

    /// Temporal step at depth k and time t: t·min(h_base^{1/(1+k/4)}, k/150, 1/(2k)).
    /// The k/150 cap bounds the h⁶ remainder of the extrapolated nest and the
    /// 1/(2k) cap keeps the footprint inside [t/2, 3t/2]. Nests deeper than
    /// [`RICHARDSON_MAX_DEPTH`] are roundoff-bound and use t·0.35/k.
    pub fn time_step(&self, k: usize, t: f64) -> f64 {
        if let Some(h) = self.h_t {
            return h;
        }
        let kf = k.max(1) as f64;
        let rel = if k > RICHARDSON_MAX_DEPTH {
            0.35 / kf
        } else {
            self.h_base.powf(1.0 / (1.0 + kf / 4.0)).min(kf / 150.0).min(0.5 / kf)
        };
        rel * t.abs()
    }

    /// Whether a nest of depth k is extrapolated.
    pub fn extrapolates(&self, k: usize) -> bool {
        self.richardson && k > 0 && k <= RICHARDSON_MAX_DEPTH
    }

    pub fn space_step(&self, k: usize, t: f64, x: &[f64]) -> f64 {
        if let Some(h) = self.h_x {
            return h;
        }
        let norm = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        self.time_step(k, t) / t.abs() * norm
    }
}

/// Accepted relative error of the nested stencil at depth k:
/// 1e−8 · 100^{max(0, k−2)/2}.
pub fn fd_tolerance(k: usize) -> f64 {
    let e = k.saturating_sub(2) as f64 / 2.0;
    1e-8 * 100f64.powf(e)
}

/// 𝒟^k v at (t, x), with 𝒟 = ∂_t + v·∇ built from `flow` itself.
pub fn material_derivative_fd<V: VectorSource + ?Sized>(
    flow: &V,
    t: f64,
    x: &[f64],
    k: usize,
    cfg: &StencilConfig,
) -> Result<Vec<f64>> {
    material_derivative_fd_of(flow, flow, t, x, k, cfg)
}

/// 𝒟^k applied to `quantity`, advected by `flow`.
pub fn material_derivative_fd_of<V, Q>(
    flow: &V,
    quantity: &Q,
    t: f64,
    x: &[f64],
    k: usize,
    cfg: &StencilConfig,
) -> Result<Vec<f64>>
where
    V: VectorSource + ?Sized,
    Q: VectorSource + ?Sized,
{
    cfg.validate()?;
    check_depth(k)?;
    if k > cfg.max_depth {
        return Err(Error::DepthExceeded { depth: k, max: cfg.max_depth });
    }
    let d = flow.dim();
    if x.len() != d || quantity.dim() != d || d > MAX_DIM || quantity.components() > MAX_DIM {
        return Err(Error::DimensionMismatch { expected: alloc::format!("{d}"), got: x.len() });
    }
    let m = quantity.components();
    let h_t = cfg.time_step(k, t);
    let h_x = cfg.space_step(k, t, x);
    let run = |scale: f64| -> Result<[f64; MAX_DIM]> {
        let mut out = [0.0; MAX_DIM];
        let nest = Nest { flow, quantity, kind: cfg.kind, h_t: h_t * scale, h_x: h_x * scale, d, m };
        nest.eval(k, t, x, &mut out[..m])?;
        Ok(out)
    };
    let coarse = run(1.0)?;
    let out = if cfg.extrapolates(k) {
        let mid = run(0.5)?;
        let fine = run(0.25)?;
        (0..m).map(|i| richardson3(coarse[i], mid[i], fine[i])).collect()
    } else {
        coarse[..m].to_vec()
    };
    Ok(out)
}

struct Nest<'a, V: ?Sized, Q: ?Sized> {
    flow: &'a V,
    quantity: &'a Q,
    kind: StencilKind,
    h_t: f64,
    h_x: f64,
    d: usize,
    m: usize,
}

impl<V: VectorSource + ?Sized, Q: VectorSource + ?Sized> Nest<'_, V, Q> {
    fn eval(&self, k: usize, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        if k == 0 {
            return self.quantity.sample(t, x, out);
        }
        let (d, m) = (self.d, self.m);
        let mut v = [0.0; MAX_DIM];
        self.flow.sample(t, x, &mut v[..d])?;
        let mut xs = [0.0; MAX_DIM];
        let mut plus = [0.0; MAX_DIM];
        let mut minus = [0.0; MAX_DIM];
        match self.kind {
            StencilKind::Directional => {
                let h = self.h_t;
                for i in 0..d {
                    xs[i] = x[i] + h * v[i];
                }
                self.eval(k - 1, t + h, &xs[..d], &mut plus[..m])?;
                for i in 0..d {
                    xs[i] = x[i] - h * v[i];
                }
                self.eval(k - 1, t - h, &xs[..d], &mut minus[..m])?;
                for j in 0..m {
                    out[j] = (plus[j] - minus[j]) / (2.0 * h);
                }
            }
            StencilKind::Partial => {
                let h = self.h_t;
                self.eval(k - 1, t + h, x, &mut plus[..m])?;
                self.eval(k - 1, t - h, x, &mut minus[..m])?;
                for j in 0..m {
                    out[j] = (plus[j] - minus[j]) / (2.0 * h);
                }
                let h = self.h_x;
                xs[..d].copy_from_slice(x);
                for i in 0..d {
                    xs[i] = x[i] + h;
                    self.eval(k - 1, t, &xs[..d], &mut plus[..m])?;
                    xs[i] = x[i] - h;
                    self.eval(k - 1, t, &xs[..d], &mut minus[..m])?;
                    xs[i] = x[i];
                    for j in 0..m {
                        out[j] += v[i] * (plus[j] - minus[j]) / (2.0 * h);
                    }
                }
            }
        }
        Ok(())
    }
}
