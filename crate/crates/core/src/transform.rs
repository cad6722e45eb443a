//! Finite symmetry transformations acting on solutions.
//!
//! Images are lazy: each transformed solution evaluates the original one at
//! mapped points, so transformations compose without resampling.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::domain::{Exclusion, GridSpec, Interval, PointMap, SpacetimeDomain};
use crate::error::{Error, Result};
use crate::field::{FlowField, FluidSolution, Symmetry, Viscosity};
use crate::params::EllParameter;
use crate::residual::{residual_suite, ResidualConfig, ResidualReport};
use crate::MAX_DIM;

/// Element of SL(2,R) acting on time by t′ = (αt + β)/(γt + δ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2Element {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl Sl2Element {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let det = alpha * delta - beta * gamma;
        if !(det - 1.0).abs().le(&1e-14) {
            return Err(Error::NotUnimodular(det));
        }
        Ok(Self { alpha, beta, gamma, delta })
    }

    pub const fn identity() -> Self {
        Self { alpha: 1.0, beta: 0.0, gamma: 0.0, delta: 1.0 }
    }

    /// t′ = t + β.
    pub const fn time_translation(beta: f64) -> Self {
        Self { alpha: 1.0, beta, gamma: 0.0, delta: 1.0 }
    }

    /// t′ = e^λ t.
    pub fn dilatation(lambda: f64) -> Self {
        Self { alpha: (lambda / 2.0).exp(), beta: 0.0, gamma: 0.0, delta: (-lambda / 2.0).exp() }
    }

    /// t′ = t/(1 + γt). Its image of the scaling solution carries the factor
    /// T = t(1 + γt).
    pub const fn special_conformal(gamma: f64) -> Self {
        Self { alpha: 1.0, beta: 0.0, gamma, delta: 1.0 }
    }

    /// Matrix product self · other.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            alpha: self.alpha * other.alpha + self.beta * other.gamma,
            beta: self.alpha * other.beta + self.beta * other.delta,
            gamma: self.gamma * other.alpha + self.delta * other.gamma,
            delta: self.gamma * other.beta + self.delta * other.delta,
        }
    }

    /// The single element equivalent to applying `self` and then `next`:
    /// `apply_sl2(next, apply_sl2(self, s)) == apply_sl2(self.then(next), s)`.
    pub fn then(&self, next: &Self) -> Self {
        self.compose(next)
    }

    pub fn inverse(&self) -> Self {
        Self { alpha: self.delta, beta: -self.beta, gamma: -self.gamma, delta: self.alpha }
    }

    /// t = −δ/γ, where t′ is singular.
    pub fn pole(&self) -> Option<f64> {
        (self.gamma != 0.0).then(|| -self.delta / self.gamma)
    }

    pub fn map_time(&self, t: f64) -> f64 {
        (self.alpha * t + self.beta) / (self.gamma * t + self.delta)
    }

    /// ∂t′/∂t = 1/(γt + δ)².
    pub fn jacobian(&self, t: f64) -> f64 {
        let q = self.gamma * t + self.delta;
        1.0 / (q * q)
    }
}

impl fmt::Display for Sl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sl2(α={}, β={}, γ={}, δ={})", self.alpha, self.beta, self.gamma, self.delta)
    }
}

#[derive(Clone, Copy)]
struct Sl2Map {
    g: Sl2Element,
    ell: f64,
}

impl Sl2Map {
    /// (t′, J, factor with x′ = factor·x).
    fn eval(&self, t: f64) -> (f64, f64, f64) {
        let j = self.g.jacobian(t);
        (self.g.map_time(t), j, j.powf(self.ell))
    }
}

impl PointMap for Sl2Map {
    fn map_point(&self, t: f64, x: &[f64], out: &mut [f64]) -> Option<f64> {
        let q = self.g.gamma * t + self.g.delta;
        if q == 0.0 {
            return None;
        }
        let (tp, _, s) = self.eval(t);
        out.iter_mut().zip(x).for_each(|(o, v)| *o = s * v);
        Some(tp)
    }

    fn describe(&self) -> String {
        alloc::format!("{}", self.g)
    }
}

struct Sl2Image {
    base: FluidSolution,
    map: Sl2Map,
    ell_d: f64,
}

impl Sl2Image {
    fn mapped(&self, t: f64, x: &[f64]) -> (f64, f64, [f64; MAX_DIM]) {
        let mut xp = [0.0; MAX_DIM];
        let (tp, j, s) = self.map.eval(t);
        xp[..x.len()].iter_mut().zip(x).for_each(|(o, v)| *o = s * v);
        (tp, j, xp)
    }
}

impl FlowField for Sl2Image {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn density(&self, t: f64, x: &[f64]) -> Result<f64> {
        let (tp, j, xp) = self.mapped(t, x);
        Ok(j.powf(self.ell_d) * self.base.density(tp, &xp[..x.len()])?)
    }

    fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        let (tp, j, xp) = self.mapped(t, x);
        self.base.velocity(tp, &xp[..x.len()], out)?;
        let ell = self.map.ell;
        let g = self.map.g;
        let scale = j.powf(1.0 - ell);
        let drift = 2.0 * ell * g.gamma / (g.gamma * t + g.delta);
        out.iter_mut().zip(x).for_each(|(o, xi)| *o = scale * *o + drift * xi);
        Ok(())
    }

    fn viscosity(&self, t: f64, x: &[f64]) -> Result<Option<Viscosity>> {
        let (tp, j, xp) = self.mapped(t, x);
        let f = j.powf(self.ell_d);
        Ok(self.base.viscosity(tp, &xp[..x.len()])?.map(|v| Viscosity { shear: f * v.shear, bulk: f * v.bulk }))
    }
}

/// Pulls `sol` back along `g` on the time window `window`:
/// ρ(t, x) = J^{ℓd} ρ′(t′, x′), v(t, x) = J^{1−ℓ} v′(t′, x′) + 2ℓγx/(γt + δ),
/// with J = ∂t′/∂t and x′ = J^ℓ x.
pub fn apply_sl2(g: &Sl2Element, sol: &FluidSolution, window: Interval) -> Result<FluidSolution> {
    let ell = sol.symmetry.ell()?;
    if !(window.min > 0.0 && window.max > window.min) {
        return Err(Error::InvalidParameter(alloc::format!("time window [{}, {}]", window.min, window.max)));
    }
    if let Some(p) = g.pole() {
        if p >= window.min && p <= window.max {
            return Err(Error::PoleInDomain(p));
        }
    }
    // t′ is increasing between poles, so the endpoints bound the image.
    let lo = g.map_time(window.min);
    let hi = if window.max.is_finite() {
        g.map_time(window.max)
    } else if g.gamma != 0.0 {
        g.alpha / g.gamma
    } else {
        f64::INFINITY
    };
    if !(lo >= sol.domain.t_range.min && hi <= sol.domain.t_range.max && lo <= hi) {
        let t = if lo < sol.domain.t_range.min { window.min } else { window.max };
        return Err(Error::DomainExceeded { t });
    }
    let map = Sl2Map { g: *g, ell: ell.as_f64() };
    let mut domain = SpacetimeDomain::with_time(sol.dim(), window);
    if !sol.domain.exclusions.is_empty() || sol.domain.x_ranges.iter().any(|r| r.min.is_finite() || r.max.is_finite()) {
        domain = domain.exclude(Exclusion::Preimage { map: Arc::new(map), base: Box::new(sol.domain.clone()) });
    }
    let ell_d = ell.as_f64() * sol.dim() as f64;
    let field = Sl2Image { base: sol.clone(), map, ell_d };
    sol.derive(Arc::new(field), domain, alloc::format!("{g}"))
}

/// The 2ℓ+1 constant vectors a^(0)..a^(2ℓ) of an acceleration transformation
/// x → x + Σ a^(n) tⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct AccelerationElement {
    pub ell: EllParameter,
    pub d: usize,
    pub vectors: Vec<Vec<f64>>,
}

impl AccelerationElement {
    pub fn new(ell: EllParameter, d: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        let n = ell.acceleration_count();
        if vectors.len() != n {
            return Err(Error::DimensionMismatch { expected: alloc::format!("{n} acceleration vectors"), got: vectors.len() });
        }
        for v in &vectors {
            if v.len() != d {
                return Err(Error::DimensionMismatch { expected: alloc::format!("vectors of length {d}"), got: v.len() });
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter("acceleration vectors must be finite".into()));
            }
        }
        Ok(Self { ell, d, vectors })
    }

    pub fn zero(ell: EllParameter, d: usize) -> Self {
        Self { ell, d, vectors: alloc::vec![alloc::vec![0.0; d]; ell.acceleration_count()] }
    }

    /// Only a^(n) set.
    pub fn single(ell: EllParameter, n: usize, vector: Vec<f64>) -> Result<Self> {
        let mut g = Self::zero(ell, vector.len());
        if n >= g.vectors.len() {
            return Err(Error::OutOfRangeAccelerationIndex { n: n as u32, max: ell.doubled() });
        }
        g.vectors[n] = vector;
        Ok(g)
    }

    /// Vectors added component-wise. Accelerations commute, so this is the
    /// group product.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.ell != other.ell || self.d != other.d {
            return Err(Error::ParameterMismatch("acceleration elements of different shape".into()));
        }
        let vectors =
            self.vectors.iter().zip(&other.vectors).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        Ok(Self { ell: self.ell, d: self.d, vectors })
    }
}

/// s(t) = Σ a^(n) tⁿ with coefficients stored per component.
#[derive(Debug, Clone, PartialEq)]
struct Shift {
    coeffs: Vec<Vec<f64>>,
}

impl Shift {
    fn new(vectors: &[Vec<f64>]) -> Self {
        Self { coeffs: vectors.to_vec() }
    }

    /// The j-th time derivative of s at t, written to `out`.
    fn derivative(&self, j: usize, t: f64, out: &mut [f64]) {
        out.iter_mut().for_each(|o| *o = 0.0);
        for (n, a) in self.coeffs.iter().enumerate().skip(j) {
            let mut f = 1.0;
            for m in 0..j {
                f *= (n - m) as f64;
            }
            let w = f * t.powi((n - j) as i32);
            out.iter_mut().zip(a).for_each(|(o, ai)| *o += w * ai);
        }
    }
}

struct ShiftMap(Shift);

impl PointMap for ShiftMap {
    fn map_point(&self, t: f64, x: &[f64], out: &mut [f64]) -> Option<f64> {
        self.0.derivative(0, t, out);
        out.iter_mut().zip(x).for_each(|(o, xi)| *o = xi - *o);
        Some(t)
    }

    fn describe(&self) -> String {
        alloc::format!("x → x − s(t), s coefficients {:?}", self.0.coeffs)
    }
}

struct ShiftImage {
    base: FluidSolution,
    shift: Shift,
}

impl ShiftImage {
    fn back(&self, t: f64, x: &[f64]) -> [f64; MAX_DIM] {
        let mut y = [0.0; MAX_DIM];
        self.shift.derivative(0, t, &mut y[..x.len()]);
        y[..x.len()].iter_mut().zip(x).for_each(|(o, xi)| *o = xi - *o);
        y
    }
}

impl FlowField for ShiftImage {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn density(&self, t: f64, x: &[f64]) -> Result<f64> {
        self.base.density(t, &self.back(t, x)[..x.len()])
    }

    fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.base.velocity(t, &self.back(t, x)[..x.len()], out)?;
        let mut ds = [0.0; MAX_DIM];
        self.shift.derivative(1, t, &mut ds[..x.len()]);
        out.iter_mut().zip(&ds).for_each(|(o, s)| *o += s);
        Ok(())
    }

    fn viscosity(&self, t: f64, x: &[f64]) -> Result<Option<Viscosity>> {
        self.base.viscosity(t, &self.back(t, x)[..x.len()])
    }

    fn material_derivative_exact(&self, k: usize, t: f64, x: &[f64], out: &mut [f64]) -> Option<Result<()>> {
        let r = self.base.material_derivative_exact(k, t, &self.back(t, x)[..x.len()], out)?;
        if r.is_ok() {
            let mut ds = [0.0; MAX_DIM];
            self.shift.derivative(k + 1, t, &mut ds[..x.len()]);
            out.iter_mut().zip(&ds).for_each(|(o, s)| *o += s);
        }
        Some(r)
    }
}

fn apply_shift(sol: &FluidSolution, vectors: &[Vec<f64>], step: String) -> Result<FluidSolution> {
    let shift = Shift::new(vectors);
    let mut domain = sol.domain.clone();
    domain.x_ranges = alloc::vec![Interval::unbounded(); sol.dim()];
    domain.exclusions =
        alloc::vec![Exclusion::Preimage { map: Arc::new(ShiftMap(shift.clone())), base: Box::new(sol.domain.clone()) }];
    let field = ShiftImage { base: sol.clone(), shift };
    sol.derive(Arc::new(field), domain, step)
}

/// ρ′(t, x) = ρ(t, x − s(t)), v′(t, x) = v(t, x − s(t)) + s′(t),
/// s(t) = Σ a^(n) tⁿ.
pub fn apply_acceleration(g: &AccelerationElement, sol: &FluidSolution) -> Result<FluidSolution> {
    let ell = sol.symmetry.ell()?;
    if ell != g.ell {
        return Err(Error::ParameterMismatch(alloc::format!("element has ℓ = {}, solution ℓ = {}", g.ell, ell)));
    }
    if g.d != sol.dim() {
        return Err(Error::DimensionMismatch { expected: alloc::format!("{}", sol.dim()), got: g.d });
    }
    apply_shift(sol, &g.vectors, alloc::format!("accel{:?}", g.vectors))
}

/// One Lifshitz group element.
#[derive(Debug, Clone, PartialEq)]
pub enum LifshitzElement {
    /// t′ = t + β.
    TimeTranslation(f64),
    /// t′ = e^{λz} t, x′ = e^{λ/2} x.
    Dilatation(f64),
    /// x′ = x + a^(0).
    SpaceTranslation(Vec<f64>),
    /// x′ = x + a^(1) t.
    Boost(Vec<f64>),
}

impl fmt::Display for LifshitzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LifshitzElement::TimeTranslation(b) => write!(f, "time-translation(β={b})"),
            LifshitzElement::Dilatation(l) => write!(f, "dilatation(λ={l})"),
            LifshitzElement::SpaceTranslation(a) => write!(f, "space-translation({a:?})"),
            LifshitzElement::Boost(a) => write!(f, "boost({a:?})"),
        }
    }
}

struct DilatationMap {
    time: f64,
    space: f64,
}

impl PointMap for DilatationMap {
    fn map_point(&self, t: f64, x: &[f64], out: &mut [f64]) -> Option<f64> {
        out.iter_mut().zip(x).for_each(|(o, v)| *o = self.space * v);
        Some(self.time * t)
    }

    fn describe(&self) -> String {
        alloc::format!("(t, x) → ({}·t, {}·x)", self.time, self.space)
    }
}

struct DilatationImage {
    base: FluidSolution,
    /// e^{−λz}, e^{−λ/2}.
    time: f64,
    space: f64,
    z: f64,
    d: usize,
}

impl DilatationImage {
    fn back(&self, x: &[f64]) -> [f64; MAX_DIM] {
        let mut y = [0.0; MAX_DIM];
        y[..x.len()].iter_mut().zip(x).for_each(|(o, v)| *o = self.space * v);
        y
    }

    /// e^{−λ·p} given e^{−λ/2} and e^{−λz}.
    fn factor(&self, p: f64) -> f64 {
        // ln(e^{−λ/2}) = −λ/2.
        (2.0 * p * self.space.ln()).exp()
    }
}

impl FlowField for DilatationImage {
    fn dim(&self) -> usize {
        self.d
    }

    fn density(&self, t: f64, x: &[f64]) -> Result<f64> {
        Ok(self.factor(self.d as f64 / 2.0) * self.base.density(self.time * t, &self.back(x)[..x.len()])?)
    }

    fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.base.velocity(self.time * t, &self.back(x)[..x.len()], out)?;
        let f = self.factor(self.z - 0.5);
        out.iter_mut().for_each(|o| *o *= f);
        Ok(())
    }

    fn viscosity(&self, t: f64, x: &[f64]) -> Result<Option<Viscosity>> {
        self.base.viscosity(self.time * t, &self.back(x)[..x.len()])
    }

    fn material_derivative_exact(&self, k: usize, t: f64, x: &[f64], out: &mut [f64]) -> Option<Result<()>> {
        let r = self.base.material_derivative_exact(k, self.time * t, &self.back(x)[..x.len()], out)?;
        let f = self.factor((k as f64 + 1.0) * self.z - 0.5);
        out.iter_mut().for_each(|o| *o *= f);
        Some(r)
    }
}

fn apply_lifshitz_one(g: &LifshitzElement, sol: &FluidSolution) -> Result<FluidSolution> {
    let z = sol.symmetry.z()?;
    let d = sol.dim();
    let check_len = |a: &Vec<f64>| {
        if a.len() == d {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: alloc::format!("{d}"), got: a.len() })
        }
    };
    match g {
        LifshitzElement::TimeTranslation(beta) => sol.with_time_offset(-beta),
        LifshitzElement::SpaceTranslation(a) => {
            check_len(a)?;
            apply_shift(sol, core::slice::from_ref(a), alloc::format!("{g}"))
        }
        LifshitzElement::Boost(a) => {
            check_len(a)?;
            apply_shift(sol, &[alloc::vec![0.0; d], a.clone()], alloc::format!("{g}"))
        }
        LifshitzElement::Dilatation(lambda) => {
            if !lambda.is_finite() {
                return Err(Error::InvalidParameter(alloc::format!("λ = {lambda}")));
            }
            if *lambda == 0.0 {
                return Ok(sol.clone());
            }
            let zf = z.as_f64();
            let time = (-lambda * zf).exp();
            let space = (-lambda / 2.0).exp();
            let mut domain = sol.domain.clone();
            domain.t_range = Interval::new(sol.domain.t_range.min / time, sol.domain.t_range.max / time);
            domain.x_ranges = alloc::vec![Interval::unbounded(); d];
            domain.exclusions = alloc::vec![Exclusion::Preimage {
                map: Arc::new(DilatationMap { time, space }),
                base: Box::new(sol.domain.clone()),
            }];
            let field = DilatationImage { base: sol.clone(), time, space, z: zf, d };
            sol.derive(Arc::new(field), domain, alloc::format!("{g}"))
        }
    }
}

/// Applies the elements in order.
pub fn apply_lifshitz(elements: &[LifshitzElement], sol: &FluidSolution) -> Result<FluidSolution> {
    elements.iter().try_fold(sol.clone(), |s, g| apply_lifshitz_one(g, &s))
}

/// Any supported transformation.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    Sl2 { element: Sl2Element, window: Interval },
    Acceleration(AccelerationElement),
    Lifshitz(Vec<LifshitzElement>),
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Sl2 { element, window } => write!(f, "{element} on t∈[{}, {}]", window.min, window.max),
            GroupElement::Acceleration(g) => write!(f, "accel{:?}", g.vectors),
            GroupElement::Lifshitz(gs) => {
                let parts: Vec<String> = gs.iter().map(|g| alloc::format!("{g}")).collect();
                f.write_str(&parts.join("; "))
            }
        }
    }
}

pub fn apply(g: &GroupElement, sol: &FluidSolution) -> Result<FluidSolution> {
    match g {
        GroupElement::Sl2 { element, window } => apply_sl2(element, sol, *window),
        GroupElement::Acceleration(a) => apply_acceleration(a, sol),
        GroupElement::Lifshitz(gs) => apply_lifshitz(gs, sol),
    }
}

/// Residual floor below which base norms are treated as noise.
pub const COVARIANCE_FLOOR: f64 = 1e-10;
/// Allowed growth of the relative residual from base to image.
pub const COVARIANCE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceCheck {
    pub base: ResidualReport,
    pub image: ResidualReport,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport {
    pub element: String,
    pub solution_id: String,
    pub image_id: String,
    pub checks: Vec<CovarianceCheck>,
}

impl CovarianceReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Applies `g`, then runs continuity and the governing Euler equation on the
/// base and on the image. Both use the same derivative path (finite
/// differences unless `cfg.force_fd` is cleared), and a check passes when the
/// image's relative residual is within [`COVARIANCE_FACTOR`] of the base's,
/// with base norms below [`COVARIANCE_FLOOR`] raised to it.
pub fn covariance_suite(
    g: &GroupElement,
    sol: &FluidSolution,
    grid: &GridSpec,
    cfg: &ResidualConfig,
) -> Result<CovarianceReport> {
    let image = apply(g, sol)?;
    let base_reports = residual_suite(sol, grid, cfg)?;
    let image_reports = residual_suite(&image, grid, cfg)?;
    let checks = base_reports
        .into_iter()
        .zip(image_reports)
        .map(|(base, image)| {
            let passed = image.norms.count > 0
                && image.relative() <= COVARIANCE_FACTOR * base.relative().max(COVARIANCE_FLOOR);
            CovarianceCheck { base, image, passed }
        })
        .collect();
    Ok(CovarianceReport { element: alloc::format!("{g}"), solution_id: sol.id.clone(), image_id: image.id.clone(), checks })
}

/// Default configuration for covariance checks: finite differences on both
/// sides, skipping stencils that leave the domain.
pub fn covariance_config() -> ResidualConfig {
    ResidualConfig {
        force_fd: true,
        on_domain_exceeded: crate::residual::DomainPolicy::Skip,
        ..ResidualConfig::default()
    }
}

/// True when the symmetry is Galilei with the given ℓ.
pub fn is_galilei(sol: &FluidSolution) -> bool {
    matches!(sol.symmetry, Symmetry::Galilei(_))
}
