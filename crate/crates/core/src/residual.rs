//! Residuals of the continuity and Euler equations on sampled grids.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::catalog::QuarticProfile;
use crate::domain::GridSpec;
use crate::error::{Error, Result};
use crate::fd;
use crate::field::{FluidSolution, Symmetry};
use crate::material::{material_derivative_fd, StencilConfig};
use crate::rational;
use crate::MAX_DIM;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Equation {
    Continuity,
    EulerGalilei,
    EulerLifshitz,
    EulerViscous,
}

impl Equation {
    pub fn name(self) -> &'static str {
        match self {
            Equation::Continuity => "continuity",
            Equation::EulerGalilei => "euler-galilei",
            Equation::EulerLifshitz => "euler-lifshitz",
            Equation::EulerViscous => "euler-viscous",
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How 𝒟^k v was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativePath {
    /// Only first derivatives by finite differences (continuity).
    FirstOrder,
    /// Closed-form material derivative.
    Analytic,
    /// Nested finite differences.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainPolicy {
    /// Return [`Error::DomainExceeded`] when a stencil leaves the domain.
    Fail,
    /// Drop the point and count it.
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualConfig {
    pub stencil: StencilConfig,
    /// First-derivative step relative to the local length or time scale.
    pub rel_step: f64,
    /// Use nested finite differences even when a closed form exists.
    pub force_fd: bool,
    /// Upper bound on points that also get the finite-difference path when
    /// the analytic one is used.
    pub cross_check_points: usize,
    pub on_domain_exceeded: DomainPolicy,
}

impl Default for ResidualConfig {
    fn default() -> Self {
        Self {
            stencil: StencilConfig::default(),
            rel_step: 5e-3,
            force_fd: false,
            cross_check_points: 64,
            on_domain_exceeded: DomainPolicy::Fail,
        }
    }
}

/// Residual at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResidual {
    pub t: f64,
    pub x: Vec<f64>,
    /// One component for continuity, d for Euler.
    pub residual: Vec<f64>,
    /// Largest term magnitude (or reference magnitude) at the point.
    pub scale: f64,
    /// Residual from nested finite differences, when cross-checked.
    pub fd_residual: Option<Vec<f64>>,
}

impl PointResidual {
    pub fn max_abs(&self) -> f64 {
        self.residual.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn relative(&self) -> f64 {
        self.max_abs() / self.scale.max(1e-300)
    }

    fn fd_relative(&self) -> Option<f64> {
        self.fd_residual.as_ref().map(|r| r.iter().fold(0.0f64, |m, v| m.max(v.abs())) / self.scale.max(1e-300))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Norms {
    pub max_abs: f64,
    pub rms: f64,
    pub max_rel: f64,
    pub count: usize,
}

impl Norms {
    /// Reduces in the order given, so equal inputs give bit-identical norms.
    pub fn from_points<'a>(points: impl IntoIterator<Item = (&'a [f64], f64)>) -> Self {
        let mut n = Norms::default();
        let mut sum_sq = 0.0;
        let mut comps = 0usize;
        for (r, scale) in points {
            let m = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            n.max_abs = n.max_abs.max(m);
            n.max_rel = n.max_rel.max(m / scale.max(1e-300));
            sum_sq += r.iter().map(|v| v * v).sum::<f64>();
            comps += r.len();
            n.count += 1;
        }
        n.rms = if comps == 0 { 0.0 } else { (sum_sq / comps as f64).sqrt() };
        n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub solution_id: String,
    pub equation: Equation,
    pub grid: String,
    pub path: DerivativePath,
    pub points: Vec<PointResidual>,
    pub norms: Norms,
    /// Norms of the finite-difference path over the cross-checked points.
    pub fd_norms: Option<Norms>,
    /// Grid points outside the solution domain.
    pub outside: usize,
    /// Points dropped because a stencil left the domain.
    pub stencil_skipped: usize,
    pub config: ResidualConfig,
}

impl ResidualReport {
    #[allow(clippy::too_many_arguments)]
    pub fn from_points(
        solution_id: String,
        equation: Equation,
        grid: String,
        path: DerivativePath,
        points: Vec<PointResidual>,
        outside: usize,
        stencil_skipped: usize,
        config: ResidualConfig,
    ) -> Self {
        let norms = Norms::from_points(points.iter().map(|p| (p.residual.as_slice(), p.scale)));
        let fd: Vec<&PointResidual> = points.iter().filter(|p| p.fd_residual.is_some()).collect();
        let fd_norms = (!fd.is_empty())
            .then(|| Norms::from_points(fd.iter().map(|p| (p.fd_residual.as_deref().unwrap_or(&[]), p.scale))));
        Self { solution_id, equation, grid, path, points, norms, fd_norms, outside, stencil_skipped, config }
    }

    /// max |r| / max(term magnitude, 1e−300).
    pub fn relative(&self) -> f64 {
        self.norms.max_rel
    }

    pub fn fd_relative(&self) -> Option<f64> {
        self.points.iter().filter_map(PointResidual::fd_relative).reduce(f64::max)
    }
}

fn domain_error(e: Error) -> Error {
    match e {
        Error::OutsideDomain { t } | Error::NonPositiveDensity { t } => Error::DomainExceeded { t },
        other => other,
    }
}

/// Length scale at a point: |x|_∞, floored at 1e−3·t^s with s the velocity
/// exponent so that the origin still gets a usable step. The similarity
/// length t^s itself can exceed the width of the density profile by orders
/// of magnitude, so it only serves as the floor.
fn length_scale(sol: &FluidSolution, t: f64, x: &[f64]) -> f64 {
    let s = match sol.symmetry {
        Symmetry::Galilei(ell) => ell.as_f64(),
        Symmetry::Lifshitz(z) => rational::to_f64(&z.velocity_slope()),
    };
    x.iter().fold(1e-3 * t.powf(s), |m, v| m.max(v.abs()))
}

/// Caps a step so that ρ changes by at most a fraction `rel` across it,
/// using |∂ ln ρ| from a central difference at a hundredth of the step.
fn rate_limited(h: f64, rel: f64, mut rho: impl FnMut(f64) -> Result<f64>, x0: f64) -> f64 {
    let probe = 1e-2 * h;
    let rate = match (rho(x0 + probe), rho(x0 - probe)) {
        (Ok(a), Ok(b)) if a > 0.0 && b > 0.0 => ((a.ln() - b.ln()) / (2.0 * probe)).abs(),
        _ => 0.0,
    };
    if rate * h > rel {
        rel / rate
    } else {
        h
    }
}

fn with_coord<R>(x: &[f64], i: usize, s: f64, f: impl FnOnce(&[f64]) -> R) -> R {
    let mut buf = [0.0; MAX_DIM];
    buf[..x.len()].copy_from_slice(x);
    buf[i] = s;
    f(&buf[..x.len()])
}

/// ∂_t ρ + Σ_i ∂_i(ρ v_i) at one point.
pub fn continuity_at(sol: &FluidSolution, t: f64, x: &[f64], cfg: &ResidualConfig) -> Result<PointResidual> {
    let d = sol.dim();
    let rho = sol.density(t, x)?;
    let ht = rate_limited(cfg.rel_step * t, cfg.rel_step, |s| sol.density(s, x), t);
    let drho_dt = fd::derivative(|s| sol.density(s, x).map_err(domain_error), t, ht)?;
    let l = length_scale(sol, t, x);
    let mut flux = 0.0;
    let mut flux_mag = 0.0f64;
    for i in 0..d {
        let hx = rate_limited(
            cfg.rel_step * x[i].abs().max(l),
            cfg.rel_step,
            |s| with_coord(x, i, s, |xs| sol.density(t, xs)),
            x[i],
        );
        let g = fd::derivative(
            |s| {
                with_coord(x, i, s, |xs| {
                    let mut v = [0.0; MAX_DIM];
                    sol.velocity(t, xs, &mut v[..d])?;
                    Ok(sol.density(t, xs)? * v[i])
                })
                .map_err(domain_error)
            },
            x[i],
            hx,
        )?;
        flux += g;
        flux_mag = flux_mag.max(g.abs());
    }
    let scale = drho_dt.abs().max(flux_mag).max(rho / t);
    Ok(PointResidual { t, x: x.to_vec(), residual: alloc::vec![drho_dt + flux], scale, fd_residual: None })
}

/// Divergence ∂_j σ_ji of the rate-of-strain tensor, with η and ξ taken from
/// the solution. Zero when the solution carries no viscosity.
fn strain_divergence(sol: &FluidSolution, t: f64, x: &[f64], cfg: &ResidualConfig, out: &mut [f64]) -> Result<()> {
    let d = sol.dim();
    out[..d].iter_mut().for_each(|o| *o = 0.0);
    let Some(visc) = sol.viscosity(t, x)? else { return Ok(()) };
    let _ = visc;
    let l = length_scale(sol, t, x);
    let h_of = |xi: f64| cfg.rel_step * xi.abs().max(l);
    // σ_ji at a point, by first differences of v.
    let sigma = |xs: &[f64], j: usize, i: usize| -> Result<f64> {
        let Some(v) = sol.viscosity(t, xs)? else { return Ok(0.0) };
        let grad = |a: usize, b: usize| -> Result<f64> {
            // ∂_b v_a
            fd::derivative(
                |s| {
                    with_coord(xs, b, s, |ys| {
                        let mut w = [0.0; MAX_DIM];
                        sol.velocity(t, ys, &mut w[..d])?;
                        Ok(w[a])
                    })
                },
                xs[b],
                h_of(xs[b]),
            )
        };
        let mut div = 0.0;
        for k in 0..d {
            div += grad(k, k)?;
        }
        let mut s = v.shear * (grad(j, i)? + grad(i, j)?);
        if i == j {
            s += (v.bulk - 2.0 * v.shear / d as f64) * div;
        }
        Ok(s)
    };
    for (i, o) in out.iter_mut().enumerate().take(d) {
        let mut acc = 0.0;
        for j in 0..d {
            acc += fd::derivative(|s| with_coord(x, j, s, |xs| sigma(xs, j, i)), x[j], h_of(x[j]))?;
        }
        *o = acc;
    }
    Ok(())
}

fn euler_point(
    sol: &FluidSolution,
    t: f64,
    x: &[f64],
    cfg: &ResidualConfig,
    viscous: bool,
    cross_check: bool,
) -> Result<(PointResidual, DerivativePath)> {
    let d = sol.dim();
    let k = sol.symmetry.euler_order();
    let rho = sol.density(t, x)?;
    let l = length_scale(sol, t, x);

    let mut md = [0.0; MAX_DIM];
    let exact = if cfg.force_fd { None } else { sol.material_derivative_exact(k, t, x, &mut md[..d]) };
    let path = match exact {
        Some(r) => {
            r?;
            DerivativePath::Analytic
        }
        None => {
            let v = material_derivative_fd(sol, t, x, k, &cfg.stencil)?;
            md[..d].copy_from_slice(&v);
            DerivativePath::FiniteDifference
        }
    };

    let mut grad_p = [0.0; MAX_DIM];
    for i in 0..d {
        let hx = rate_limited(
            cfg.rel_step * x[i].abs().max(l),
            cfg.rel_step,
            |s| with_coord(x, i, s, |xs| sol.density(t, xs)),
            x[i],
        );
        grad_p[i] = fd::derivative(
            |s| with_coord(x, i, s, |xs| sol.density(t, xs).map(|r| sol.eos.pressure(r))).map_err(domain_error),
            x[i],
            hx,
        )?;
    }

    let mut div_sigma = [0.0; MAX_DIM];
    if viscous {
        strain_divergence(sol, t, x, cfg, &mut div_sigma).map_err(domain_error)?;
    }

    let p = sol.eos.pressure(rho);
    let reference = (rho * l / t.powi(k as i32 + 1)).max(p / l);
    let mut scale = reference;
    let mut residual = alloc::vec![0.0; d];
    for i in 0..d {
        let inertia = rho * md[i];
        residual[i] = inertia + grad_p[i] - div_sigma[i];
        scale = scale.max(inertia.abs()).max(grad_p[i].abs()).max(div_sigma[i].abs());
    }

    let fd_residual = if cross_check && path == DerivativePath::Analytic {
        let v = material_derivative_fd(sol, t, x, k, &cfg.stencil)?;
        Some((0..d).map(|i| rho * v[i] + grad_p[i] - div_sigma[i]).collect())
    } else {
        None
    };
    Ok((PointResidual { t, x: x.to_vec(), residual, scale, fd_residual }, path))
}

/// ρ·𝒟^{2ℓ}v_i + ∂_i p (Galilei) or ρ·𝒟v_i + ∂_i p (Lifshitz) at one point,
/// minus ∂_jσ_ji when `viscous`.
pub fn euler_at(
    sol: &FluidSolution,
    t: f64,
    x: &[f64],
    cfg: &ResidualConfig,
    viscous: bool,
    cross_check: bool,
) -> Result<(PointResidual, DerivativePath)> {
    euler_point(sol, t, x, cfg, viscous, cross_check)
}

/// The points of one residual run, in grid order, each flagged for the
/// finite-difference cross-check or not. Points can be evaluated in any order
/// or concurrently; [`ResidualPlan::finish`] assembles them in grid order, so
/// the report does not depend on how the work was split.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualPlan {
    pub equation: Equation,
    pub points: Vec<PlannedPoint>,
    /// Grid points outside the solution domain.
    pub outside: usize,
    grid: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannedPoint {
    pub t: f64,
    pub x: Vec<f64>,
    pub cross_check: bool,
}

impl ResidualPlan {
    pub fn new(sol: &FluidSolution, equation: Equation, grid: &GridSpec, cfg: &ResidualConfig) -> Result<Self> {
        match equation {
            Equation::Continuity => {}
            Equation::EulerGalilei | Equation::EulerViscous => {
                sol.symmetry.ell()?;
            }
            Equation::EulerLifshitz => {
                sol.symmetry.z()?;
            }
        }
        if grid.x.len() != sol.dim() {
            return Err(Error::DimensionMismatch { expected: alloc::format!("{}", sol.dim()), got: grid.x.len() });
        }
        let mut pts: Vec<(f64, Vec<f64>)> = Vec::new();
        let mut outside = 0;
        grid.for_each_point(|t, x| {
            if sol.domain.contains(t, x) {
                pts.push((t, x.to_vec()));
            } else {
                outside += 1;
            }
        });
        let stride =
            if cfg.cross_check_points == 0 { usize::MAX } else { pts.len().div_ceil(cfg.cross_check_points).max(1) };
        let points = pts
            .into_iter()
            .enumerate()
            .map(|(n, (t, x))| PlannedPoint { t, x, cross_check: n % stride == 0 })
            .collect();
        Ok(Self { equation, points, outside, grid: grid.describe() })
    }

    /// Residual at the i-th planned point.
    pub fn evaluate(&self, sol: &FluidSolution, i: usize, cfg: &ResidualConfig) -> Result<(PointResidual, DerivativePath)> {
        let p = &self.points[i];
        residual_at(sol, self.equation, p.t, &p.x, cfg, p.cross_check)
    }

    /// Builds the report from one result per planned point, in plan order.
    /// The first error not excused by the domain policy is returned.
    pub fn finish(
        self,
        sol: &FluidSolution,
        results: impl IntoIterator<Item = Result<(PointResidual, DerivativePath)>>,
        cfg: &ResidualConfig,
    ) -> Result<ResidualReport> {
        let mut points = Vec::with_capacity(self.points.len());
        let mut skipped = 0;
        let mut path =
            if self.equation == Equation::Continuity { DerivativePath::FirstOrder } else { DerivativePath::Analytic };
        for r in results {
            match r {
                Ok((p, used)) => {
                    if used == DerivativePath::FiniteDifference {
                        path = used;
                    }
                    points.push(p);
                }
                Err(Error::DomainExceeded { .. }) if cfg.on_domain_exceeded == DomainPolicy::Skip => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        Ok(ResidualReport::from_points(sol.id.clone(), self.equation, self.grid, path, points, self.outside, skipped, *cfg))
    }
}

/// Residual of `equation` at one point.
pub fn residual_at(
    sol: &FluidSolution,
    equation: Equation,
    t: f64,
    x: &[f64],
    cfg: &ResidualConfig,
    cross_check: bool,
) -> Result<(PointResidual, DerivativePath)> {
    match equation {
        Equation::Continuity => continuity_at(sol, t, x, cfg).map(|p| (p, DerivativePath::FirstOrder)),
        Equation::EulerGalilei | Equation::EulerLifshitz => euler_point(sol, t, x, cfg, false, cross_check),
        Equation::EulerViscous => euler_point(sol, t, x, cfg, true, cross_check),
    }
}

fn run(sol: &FluidSolution, grid: &GridSpec, cfg: &ResidualConfig, equation: Equation) -> Result<ResidualReport> {
    let plan = ResidualPlan::new(sol, equation, grid, cfg)?;
    let results: Vec<_> = (0..plan.points.len()).map(|i| plan.evaluate(sol, i, cfg)).collect();
    plan.finish(sol, results, cfg)
}

pub fn continuity_residual(sol: &FluidSolution, grid: &GridSpec, cfg: &ResidualConfig) -> Result<ResidualReport> {
    run(sol, grid, cfg, Equation::Continuity)
}

pub fn euler_residual_galilei(sol: &FluidSolution, grid: &GridSpec, cfg: &ResidualConfig) -> Result<ResidualReport> {
    run(sol, grid, cfg, Equation::EulerGalilei)
}

pub fn euler_residual_lifshitz(sol: &FluidSolution, grid: &GridSpec, cfg: &ResidualConfig) -> Result<ResidualReport> {
    run(sol, grid, cfg, Equation::EulerLifshitz)
}

pub fn euler_residual_viscous(sol: &FluidSolution, grid: &GridSpec, cfg: &ResidualConfig) -> Result<ResidualReport> {
    run(sol, grid, cfg, Equation::EulerViscous)
}

/// The Euler equation that governs the solution.
pub fn euler_equation_for(sol: &FluidSolution) -> Equation {
    match sol.symmetry {
        Symmetry::Lifshitz(_) => Equation::EulerLifshitz,
        Symmetry::Galilei(_) if sol.field().viscosity(1.0, &[0.0; MAX_DIM][..sol.dim()]).ok().flatten().is_some() => {
            Equation::EulerViscous
        }
        Symmetry::Galilei(_) => Equation::EulerGalilei,
    }
}

pub fn residual(sol: &FluidSolution, equation: Equation, grid: &GridSpec, cfg: &ResidualConfig) -> Result<ResidualReport> {
    match equation {
        Equation::Continuity => continuity_residual(sol, grid, cfg),
        Equation::EulerGalilei => euler_residual_galilei(sol, grid, cfg),
        Equation::EulerLifshitz => euler_residual_lifshitz(sol, grid, cfg),
        Equation::EulerViscous => euler_residual_viscous(sol, grid, cfg),
    }
}

/// Continuity plus the governing Euler equation.
pub fn residual_suite(sol: &FluidSolution, grid: &GridSpec, cfg: &ResidualConfig) -> Result<Vec<ResidualReport>> {
    Ok(alloc::vec![continuity_residual(sol, grid, cfg)?, residual(sol, euler_equation_for(sol), grid, cfg)?])
}

/// Spread of the two first integrals (u − y/2)w/y and (u² + 3aw²)/y − u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstIntegralReport {
    pub points: usize,
    pub mean: [f64; 2],
    /// Largest |I(y) − mean| for each integral.
    pub deviation: [f64; 2],
    /// Mean magnitude of the terms that make up each integral.
    pub scale: [f64; 2],
}

impl FirstIntegralReport {
    /// Deviation over max(|mean|, term scale), so that an integral that
    /// vanishes by cancellation is not divided by zero.
    pub fn relative(&self) -> [f64; 2] {
        [0, 1].map(|i| self.deviation[i] / self.mean[i].abs().max(self.scale[i]).max(1e-300))
    }
}

/// One sample of both integrals with their term magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstIntegralSample {
    pub values: [f64; 2],
    pub scales: [f64; 2],
}

impl FirstIntegralSample {
    /// From u, w at y.
    pub fn from_profile(u: f64, w: f64, a: f64, y: f64) -> Self {
        let (p, q) = (u * w / y, 0.5 * w);
        let (r, s) = ((u * u + 3.0 * a * w * w) / y, u);
        Self { values: [p - q, r - s], scales: [p.abs().max(q.abs()), r.abs().max(s.abs())] }
    }
}

pub fn ode_first_integral_check(profile: &QuarticProfile, y_grid: &[f64]) -> Result<FirstIntegralReport> {
    let samples: Vec<FirstIntegralSample> = y_grid
        .iter()
        .map(|&y| {
            let (i1, i2) = profile.first_integrals(y).ok_or(Error::DomainExceeded { t: f64::NAN })?;
            let (u, w) = (profile.u(y).unwrap_or(0.0), profile.w(y).unwrap_or(0.0));
            let mut s = FirstIntegralSample::from_profile(u, w, profile.a(), y);
            // The profile evaluates I1 without cancellation.
            s.values = [i1, i2];
            Ok(s)
        })
        .collect::<Result<_>>()?;
    first_integral_spread(&samples)
}

/// Same check on arbitrary samples, e.g. from a perturbed profile.
pub fn first_integral_spread(samples: &[FirstIntegralSample]) -> Result<FirstIntegralReport> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("empty y grid".into()));
    }
    let n = samples.len() as f64;
    let avg = |f: &dyn Fn(&FirstIntegralSample) -> f64| samples.iter().map(f).sum::<f64>() / n;
    let mean = [avg(&|s| s.values[0]), avg(&|s| s.values[1])];
    let scale = [avg(&|s| s.scales[0]), avg(&|s| s.scales[1])];
    let dev = |i: usize| samples.iter().fold(0.0f64, |m, s| m.max((s.values[i] - mean[i]).abs()));
    Ok(FirstIntegralReport { points: samples.len(), mean, deviation: [dev(0), dev(1)], scale })
}
