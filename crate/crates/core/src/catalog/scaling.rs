//! Scaling-invariant flows v_i = s·x_i/t and their deformations.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use super::{check_dim, check_finite, check_positive, SolutionParams};
use crate::domain::{Interval, SpacetimeDomain};
use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::field::{Family, FlowField, FluidSolution, Symmetry};
use crate::material::radial_multiplier;
use crate::params::{DynamicalExponent, EllParameter};
use crate::rational::{self, int, Rational};
use crate::transform::{apply_acceleration, AccelerationElement};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GcaScalingParams {
    pub ell: EllParameter,
    pub d: usize,
    pub a: f64,
    pub c: f64,
    pub t0: f64,
}

impl GcaScalingParams {
    pub fn new(ell: EllParameter, d: usize, a: f64, c: f64) -> Self {
        Self { ell, d, a, c, t0: 0.0 }
    }

    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.ell.is_admissible() {
            return Err(Error::InadmissibleEll(alloc::format!("{}", self.ell)));
        }
        check_dim(self.d)?;
        check_positive("a", self.a)?;
        check_positive("c", self.c)?;
        check_finite("t0", self.t0)
    }

    /// Coefficient of |x|²/t^{2ℓ+1} inside the density bracket,
    /// −P_ℓ/(2(1+ℓd)), before dividing by a.
    pub(crate) fn radial_coefficient(&self) -> Rational {
        let ell = self.ell.value();
        -self.ell.product().value / (int(2) * (int(1) + ell * int(self.d as i128)))
    }

    pub(crate) fn density_law(&self) -> DensityLaw {
        let ell_d = rational::to_f64(&(self.ell.value() * int(self.d as i128)));
        if self.ell.is_integer() {
            DensityLaw::Homogeneous { c: self.c, power: ell_d }
        } else {
            DensityLaw::Bracket {
                alpha: self.c,
                p: 1.0,
                beta: rational::to_f64(&self.radial_coefficient()) / self.a,
                q: f64::from(self.ell.doubled() + 1),
                e: ell_d,
            }
        }
    }
}

impl fmt::Display for GcaScalingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℓ={},d={},a={},c={}", self.ell, self.d, self.a, self.c)?;
        if self.t0 != 0.0 {
            write!(f, ",t0={}", self.t0)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifshitzParams {
    pub z: DynamicalExponent,
    pub d: usize,
    pub a: f64,
    pub c: f64,
}

impl fmt::Display for LifshitzParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z={},d={},a={},c={}", self.z, self.d, self.a, self.c)
    }
}

/// ρ as a function of the warped time T and r² = |x|².
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum DensityLaw {
    /// c/T^power.
    Homogeneous { c: f64, power: f64 },
    /// (α/T^p + β r²/T^q)^e.
    Bracket { alpha: f64, p: f64, beta: f64, q: f64, e: f64 },
}

impl DensityLaw {
    fn eval(&self, tt: f64, r2: f64) -> Option<f64> {
        match *self {
            DensityLaw::Homogeneous { c, power } => Some(c / tt.powf(power)),
            DensityLaw::Bracket { alpha, p, beta, q, e } => {
                let base = alpha / tt.powf(p) + beta * r2 / tt.powf(q);
                (base > 0.0).then(|| base.powf(e))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TimeWarp {
    /// T = t + t0.
    Shift(f64),
    /// T = t(1 + γt).
    Conformal(f64),
}

impl TimeWarp {
    fn eval(&self, t: f64) -> (f64, f64) {
        match *self {
            TimeWarp::Shift(t0) => (t + t0, 1.0),
            TimeWarp::Conformal(g) => (t * (1.0 + g * t), 1.0 + 2.0 * g * t),
        }
    }
}

/// v_i = s·x_i·T'(t)/T(t) with density law evaluated at T(t).
struct ScalingField {
    d: usize,
    slope: Rational,
    slope_f: f64,
    density: DensityLaw,
    warp: TimeWarp,
}

impl FlowField for ScalingField {
    fn dim(&self) -> usize {
        self.d
    }

    fn density(&self, t: f64, x: &[f64]) -> Result<f64> {
        let (tt, _) = self.warp.eval(t);
        let r2: f64 = x.iter().map(|v| v * v).sum();
        if !(tt > 0.0) {
            return Err(Error::OutsideDomain { t });
        }
        self.density.eval(tt, r2).ok_or(Error::NonPositiveDensity { t })
    }

    fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        let (tt, dt) = self.warp.eval(t);
        let f = self.slope_f * dt / tt;
        for (o, xi) in out.iter_mut().zip(x) {
            *o = f * xi;
        }
        Ok(())
    }

    fn material_derivative_exact(&self, k: usize, t: f64, x: &[f64], out: &mut [f64]) -> Option<Result<()>> {
        let TimeWarp::Shift(t0) = self.warp else { return None };
        let tau = t + t0;
        let m = rational::to_f64(&radial_multiplier(self.slope, k));
        let f = m / tau.powi(k as i32 + 1);
        for (o, xi) in out.iter_mut().zip(x) {
            *o = f * xi;
        }
        Some(Ok(()))
    }
}

fn shifted_domain(d: usize, t0: f64) -> SpacetimeDomain {
    let lo = if t0 < 0.0 { -t0 * (1.0 + f64::EPSILON) } else { f64::MIN_POSITIVE };
    SpacetimeDomain::with_time(d, Interval::new(lo, f64::INFINITY))
}

/// v_i = ℓx_i/(t+t0) with density
/// (c/τ − P_ℓ|x|²/(2a(1+ℓd)τ^{2ℓ+1}))^{ℓd} for half-integer ℓ and
/// c/τ^{ℓd} for integer ℓ, τ = t + t0.
pub fn gca_scaling_solution(p: GcaScalingParams) -> Result<FluidSolution> {
    p.validate()?;
    let field = ScalingField {
        d: p.d,
        slope: p.ell.value(),
        slope_f: p.ell.as_f64(),
        density: p.density_law(),
        warp: TimeWarp::Shift(p.t0),
    };
    FluidSolution::new(
        Family::GcaScaling,
        SolutionParams::GcaScaling(p),
        Symmetry::Galilei(p.ell),
        EquationOfState::galilei(p.a, p.ell, p.d)?,
        shifted_domain(p.d, p.t0),
        Arc::new(field),
    )
}

/// Image of the scaling solution under the special conformal
/// transformation with parameter γ, in closed form.
pub fn conformal_deformed_solution(p: GcaScalingParams, gamma: f64) -> Result<FluidSolution> {
    p.validate()?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!("γ = {gamma} must be non-negative")));
    }
    if p.t0 != 0.0 {
        return Err(Error::InvalidParameter("the conformal deformation is defined for t0 = 0".into()));
    }
    let field = ScalingField {
        d: p.d,
        slope: p.ell.value(),
        slope_f: p.ell.as_f64(),
        density: p.density_law(),
        warp: TimeWarp::Conformal(gamma),
    };
    FluidSolution::new(
        Family::GcaConformalDeformed,
        SolutionParams::ConformalDeformed { base: p, gamma },
        Symmetry::Galilei(p.ell),
        EquationOfState::galilei(p.a, p.ell, p.d)?,
        SpacetimeDomain::positive_time(p.d),
        Arc::new(field),
    )
}

/// The scaling solution transported by the 2ℓ+1 acceleration vectors.
pub fn acceleration_deformed_solution(p: GcaScalingParams, vectors: Vec<Vec<f64>>) -> Result<FluidSolution> {
    let base = gca_scaling_solution(p)?;
    let g = AccelerationElement::new(p.ell, p.d, vectors.clone())?;
    let mut image = apply_acceleration(&g, &base)?;
    image.family = Family::GcaAccelerationDeformed;
    image.params = SolutionParams::AccelerationDeformed { base: p, vectors };
    image.id = alloc::format!("{}[{}]", image.family.name(), image.params.summary());
    Ok(image)
}

/// v_i = x_i/(2zt), ρ = (c/t^{2−1/z} + (2z−1)²|x|²/(4az²(d+2(2z−1))t²))^{d/(2(2z−1))}.
pub fn lifshitz_scaling_solution(p: LifshitzParams) -> Result<FluidSolution> {
    check_dim(p.d)?;
    check_positive("a", p.a)?;
    check_positive("c", p.c)?;
    let z = p.z.value();
    let excess = p.z.excess();
    let dd = int(p.d as i128);
    let coeff = excess * excess / (int(4) * z * z * (dd + int(2) * excess));
    let density = DensityLaw::Bracket {
        alpha: p.c,
        p: rational::to_f64(&(int(2) - z.recip())),
        beta: rational::to_f64(&coeff) / p.a,
        q: 2.0,
        e: rational::to_f64(&(dd / (int(2) * excess))),
    };
    let slope = p.z.velocity_slope();
    let field = ScalingField { d: p.d, slope, slope_f: rational::to_f64(&slope), density, warp: TimeWarp::Shift(0.0) };
    FluidSolution::new(
        Family::LifshitzScaling,
        SolutionParams::Lifshitz(p),
        Symmetry::Lifshitz(p.z),
        EquationOfState::lifshitz(p.a, p.z, p.d)?,
        SpacetimeDomain::positive_time(p.d),
        Arc::new(field),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn ell(doubled: u32) -> EllParameter {
        EllParameter::from_doubled(doubled).unwrap()
    }

    #[test]
    fn integer_ell_is_homogeneous() {
        let s = gca_scaling_solution(GcaScalingParams::new(ell(2), 2, 0.5, 0.1)).unwrap();
        let x = [3.0, -4.0];
        assert!((s.density(1.0, &x).unwrap() - 0.1).abs() < 1e-15);
        let row = s.sample_row(1.0, &x).unwrap();
        assert_eq!(&row[1..], &x);
    }

    #[test]
    fn half_integer_at_origin() {
        let s = gca_scaling_solution(GcaScalingParams::new(ell(1), 1, 0.5, 0.1)).unwrap();
        assert!((s.density(2.0, &[0.0]).unwrap() - 0.05f64.sqrt()).abs() < 1e-15);
        let s = gca_scaling_solution(GcaScalingParams::new(ell(1), 1, 7.0, 1.0)).unwrap();
        assert_eq!(s.density(1.0, &[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn inadmissible_rejected() {
        let err = gca_scaling_solution(GcaScalingParams::new(ell(3), 1, 0.5, 0.1)).unwrap_err();
        assert!(matches!(err, Error::InadmissibleEll(_)));
    }

    #[test]
    fn time_offset() {
        let p = GcaScalingParams::new(ell(5), 1, 0.5, 0.1);
        let shifted = gca_scaling_solution(p.with_t0(0.5)).unwrap();
        let base = gca_scaling_solution(p).unwrap();
        assert_eq!(shifted.density(1.5, &[0.3]).unwrap(), base.density(2.0, &[0.3]).unwrap());
        let mut v = [0.0];
        shifted.velocity(1.5, &[0.3], &mut v).unwrap();
        assert!((v[0] - 2.5 * 0.3 / 2.0).abs() < 1e-16);
    }

    #[test]
    fn lifshitz_z1_matches_half() {
        for d in 1..=3 {
            let l = lifshitz_scaling_solution(LifshitzParams {
                z: DynamicalExponent::new(int(1)).unwrap(),
                d,
                a: 0.5,
                c: 0.1,
            })
            .unwrap();
            let g = gca_scaling_solution(GcaScalingParams::new(ell(1), d, 0.5, 0.1)).unwrap();
            let x = [0.7, -1.1, 2.0];
            assert_eq!(l.density(1.3, &x[..d]).unwrap(), g.density(1.3, &x[..d]).unwrap());
        }
    }

    #[test]
    fn lifshitz_z1_d2_closed_form() {
        let a = 0.3;
        let l = lifshitz_scaling_solution(LifshitzParams { z: DynamicalExponent::new(int(1)).unwrap(), d: 2, a, c: 0.2 })
            .unwrap();
        let (t, x) = (1.7, [0.4, -0.9]);
        let r2 = x[0] * x[0] + x[1] * x[1];
        let expect = 0.2 / t + r2 / (16.0 * a * t * t);
        assert!((l.density(t, &x).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn lifshitz_bound() {
        assert!(DynamicalExponent::new(rat(1, 2)).is_err());
    }

    #[test]
    fn conformal_limit_and_integer_case() {
        let p = GcaScalingParams::new(ell(1), 1, 0.5, 0.1);
        let base = gca_scaling_solution(p).unwrap();
        let def = conformal_deformed_solution(p, 0.0).unwrap();
        assert_eq!(base.sample_row(2.0, &[1.5]).unwrap(), def.sample_row(2.0, &[1.5]).unwrap());
        let p = GcaScalingParams::new(ell(2), 2, 0.5, 0.1);
        let def = conformal_deformed_solution(p, 0.3).unwrap();
        let t = 2.0;
        let expect = 0.1 / (t * (1.0 + 0.3 * t)).powi(2);
        assert!((def.density(t, &[5.0, 1.0]).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn exact_derivative_hook() {
        let s = gca_scaling_solution(GcaScalingParams::new(ell(5), 1, 0.5, 0.1)).unwrap();
        let mut out = [0.0];
        s.material_derivative_exact(5, 2.0, &[1.0], &mut out).unwrap().unwrap();
        assert!((out[0] + 225.0 / 64.0 / 64.0).abs() < 1e-15);
    }
}
