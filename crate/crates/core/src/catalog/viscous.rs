//! Viscous scaling solutions with η = η0·ρ and ξ = ξ0·ρ.

use alloc::sync::Arc;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use super::{check_dim, check_finite, check_positive, SolutionParams};
use crate::domain::{Exclusion, SpacetimeDomain};
use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::field::{Family, FlowField, FluidSolution, Symmetry, Viscosity};
use crate::material::radial_multiplier;
use crate::params::EllParameter;
use crate::rational::{self, int, Rational};
use crate::roots::{brent, RootTolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousParams {
    pub ell: EllParameter,
    pub d: usize,
    pub a: f64,
    pub c: f64,
    pub eta0: f64,
    pub xi0: f64,
}

impl fmt::Display for ViscousParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℓ={},d={},a={},c={},η0={},ξ0={}", self.ell, self.d, self.a, self.c, self.eta0, self.xi0)
    }
}

/// Both roots of the transcendental equation at one |y|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousRoots {
    /// The larger root, the one continuous with the inviscid solution.
    pub selected: f64,
    /// The smaller root, present whenever ξ0 > 0.
    pub other: Option<f64>,
}

/// f(w) = a(m+1)w^{1/m} − ξ0·m·ln w + ½P_ℓ|y|² − c with m = ℓd.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousProfile {
    m: f64,
    a: f64,
    c: f64,
    xi0: f64,
    half_p: f64,
}

impl ViscousProfile {
    pub fn new(p: &ViscousParams) -> Self {
        let m = rational::to_f64(&(p.ell.value() * int(p.d as i128)));
        Self { m, a: p.a, c: p.c, xi0: p.xi0, half_p: 0.5 * p.ell.product().as_f64() }
    }

    fn coeff(&self) -> f64 {
        self.a * (self.m + 1.0)
    }

    pub fn residual(&self, w: f64, y2: f64) -> f64 {
        self.coeff() * w.powf(1.0 / self.m) - self.xi0 * self.m * w.ln() + self.half_p * y2 - self.c
    }

    /// |f(w)| over the largest of its terms.
    pub fn relative_residual(&self, w: f64, y2: f64) -> f64 {
        let terms = [
            self.coeff() * w.powf(1.0 / self.m),
            self.xi0 * self.m * w.ln(),
            self.half_p * y2,
            self.c,
        ];
        let scale = terms.iter().fold(1e-300f64, |s, t| s.max(t.abs()));
        self.residual(w, y2).abs() / scale
    }

    /// The ξ0 = 0 solution ((c − ½P|y|²)/(a(m+1)))^m.
    pub fn inviscid(&self, y2: f64) -> Option<f64> {
        let base = (self.c - self.half_p * y2) / self.coeff();
        (base > 0.0).then(|| base.powf(self.m))
    }

    /// Minimiser of f for ξ0 > 0: w*^{1/m} = ξ0·m²/(a(m+1)).
    pub fn turning_point(&self) -> f64 {
        (self.xi0 * self.m * self.m / self.coeff()).powf(self.m)
    }

    /// Smallest |y|² with a root, 0 when every point has one.
    pub fn threshold_y2(&self) -> f64 {
        if self.xi0 == 0.0 {
            // The inviscid base must be positive: c − ½P|y|² > 0.
            return if self.c > 0.0 { 0.0 } else { self.c / self.half_p };
        }
        let ws = self.turning_point();
        let at_zero = self.residual(ws, 0.0);
        if at_zero < 0.0 {
            0.0
        } else {
            // half_p < 0 for admissible ℓ, so the minimum drops with |y|².
            at_zero / -self.half_p
        }
    }

    pub fn roots(&self, y2: f64) -> Result<ViscousRoots> {
        let tol = RootTolerance { x_abs: 0.0, x_rel: 2.0 * f64::EPSILON, max_iter: 400 };
        let f = |w: f64| self.residual(w, y2);
        if self.xi0 == 0.0 {
            let w = self.inviscid(y2).ok_or(Error::NoRootInBracket { lo: 0.0, hi: f64::INFINITY })?;
            // Polish the closed form against the equation itself.
            let lo = w * (1.0 - 1e-12);
            let hi = w * (1.0 + 1e-12);
            let w = brent(f, lo, hi, tol).unwrap_or(w);
            return Ok(ViscousRoots { selected: w, other: None });
        }
        let ws = self.turning_point();
        if !(f(ws) < 0.0) {
            return Err(Error::NoRootInBracket { lo: 0.0, hi: f64::INFINITY });
        }
        let mut hi = self.inviscid(y2).map_or(ws * 2.0, |w| (w * 10.0).max(ws * 2.0));
        let mut guard = 0;
        while f(hi) <= 0.0 {
            hi *= 10.0;
            guard += 1;
            if guard > 300 || !hi.is_finite() {
                return Err(Error::NoRootInBracket { lo: ws, hi });
            }
        }
        let selected = brent(f, ws, hi, tol)?;
        let mut lo = ws * 0.1;
        let mut guard = 0;
        while f(lo) <= 0.0 && guard < 300 && lo > 0.0 {
            lo *= 0.1;
            guard += 1;
        }
        let other = if lo > 0.0 && f(lo) > 0.0 { brent(f, lo, ws, tol).ok() } else { None };
        Ok(ViscousRoots { selected, other })
    }
}

struct ViscousField {
    d: usize,
    ell: Rational,
    ell_f: f64,
    m: f64,
    eta0: f64,
    xi0: f64,
    law: Law,
}

enum Law {
    /// ρ = c/t^{ℓd}.
    Homogeneous(f64),
    Transcendental(ViscousProfile),
}

impl FlowField for ViscousField {
    fn dim(&self) -> usize {
        self.d
    }

    fn density(&self, t: f64, x: &[f64]) -> Result<f64> {
        match &self.law {
            Law::Homogeneous(c) => Ok(c / t.powf(self.m)),
            Law::Transcendental(profile) => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                let y2 = r2 / t.powf(2.0 * self.ell_f);
                let w = profile.roots(y2).map_err(|_| Error::OutsideDomain { t })?.selected;
                Ok(w / t.powf(self.m))
            }
        }
    }

    fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        let f = self.ell_f / t;
        for (o, xi) in out.iter_mut().zip(x) {
            *o = f * xi;
        }
        Ok(())
    }

    fn viscosity(&self, t: f64, x: &[f64]) -> Result<Option<Viscosity>> {
        let rho = self.density(t, x)?;
        Ok(Some(Viscosity { shear: self.eta0 * rho, bulk: self.xi0 * rho }))
    }

    fn material_derivative_exact(&self, k: usize, t: f64, x: &[f64], out: &mut [f64]) -> Option<Result<()>> {
        let f = rational::to_f64(&radial_multiplier(self.ell, k)) / t.powi(k as i32 + 1);
        for (o, xi) in out.iter_mut().zip(x) {
            *o = f * xi;
        }
        Some(Ok(()))
    }
}

/// Integer ℓ: v_i = ℓx_i/t, ρ = c/t^{ℓd}. Half-integer ℓ: ρ = w/t^{ℓd}
/// with w the larger root of the transcendental equation at y = x/t^ℓ.
pub fn viscous_solution(p: ViscousParams) -> Result<FluidSolution> {
    if !p.ell.is_admissible() {
        return Err(Error::InadmissibleEll(alloc::format!("{}", p.ell)));
    }
    check_dim(p.d)?;
    check_positive("a", p.a)?;
    check_finite("c", p.c)?;
    for (name, v) in [("eta0", p.eta0), ("xi0", p.xi0)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(alloc::format!("{name} = {v} must be non-negative")));
        }
    }
    let m = rational::to_f64(&(p.ell.value() * int(p.d as i128)));
    let (family, law, domain) = if p.ell.is_integer() {
        check_positive("c", p.c)?;
        (Family::ViscousGcaInteger, Law::Homogeneous(p.c), SpacetimeDomain::positive_time(p.d))
    } else {
        let profile = ViscousProfile::new(&p);
        let threshold = profile.threshold_y2();
        let mut domain = SpacetimeDomain::positive_time(p.d);
        if profile.roots(0.0).is_err() {
            domain = domain.exclude(Exclusion::SimilarityShell { power: p.ell.as_f64() * 2.0, min: threshold });
        }
        (Family::ViscousGcaHalfInteger, Law::Transcendental(profile), domain)
    };
    domain.validate()?;
    let field = ViscousField { d: p.d, ell: p.ell.value(), ell_f: p.ell.as_f64(), m, eta0: p.eta0, xi0: p.xi0, law };
    let sol = FluidSolution::new(
        family,
        SolutionParams::Viscous(p),
        Symmetry::Galilei(p.ell),
        EquationOfState::galilei(p.a, p.ell, p.d)?,
        domain,
        Arc::new(field),
    )?;
    Ok(if family == Family::ViscousGcaHalfInteger && p.xi0 > 0.0 {
        sol.with_note("two roots of the transcendental equation; the larger (continuous with ξ0 → 0) is used".into())
    } else {
        sol
    })
}
