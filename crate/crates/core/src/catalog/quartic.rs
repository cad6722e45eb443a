//! One-dimensional ℓ = 1/2 solutions written through y = x²/t,
//! v = u(y)/x and ρ = w(y)/x.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use super::{check_finite, check_positive, SolutionParams};
use crate::domain::{Exclusion, Interval, SpacetimeDomain};
use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::field::{Family, FlowField, FluidSolution, Symmetry};
use crate::params::EllParameter;
use crate::roots::{bisect, RootTolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    Positive,
    Negative,
}

impl HalfLine {
    pub fn sign(self) -> f64 {
        match self {
            HalfLine::Positive => 1.0,
            HalfLine::Negative => -1.0,
        }
    }
}

impl fmt::Display for HalfLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HalfLine::Positive => "x>0",
            HalfLine::Negative => "x<0",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quartic1dParams {
    pub c1: f64,
    pub c2: f64,
    pub a: f64,
    pub sign1: Sign,
    pub sign2: Sign,
    pub half_line: HalfLine,
}

impl fmt::Display for Quartic1dParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "c1={},c2={},a={},signs=({},{}),{}",
            self.c1, self.c2, self.a, self.sign1, self.sign2, self.half_line
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuityBranchParams {
    pub c: f64,
    pub a: f64,
    pub sign: Sign,
    pub half_line: HalfLine,
}

impl fmt::Display for ContinuityBranchParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c={},a={},sign={},{}", self.c, self.a, self.sign, self.half_line)
    }
}

/// The reduced profile (u(y), w(y)) of either branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuarticProfile {
    Quartic(Quartic1dParams),
    ContinuityBranch(ContinuityBranchParams),
}

/// √((y/2 + c)² − c²) = √(y²/4 + cy), `None` where the radicand is negative.
fn radical(y: f64, c: f64) -> Option<f64> {
    let r = y * (0.25 * y + c);
    (r >= 0.0).then(|| r.sqrt())
}

impl QuarticProfile {
    pub fn a(&self) -> f64 {
        match self {
            QuarticProfile::Quartic(p) => p.a,
            QuarticProfile::ContinuityBranch(p) => p.a,
        }
    }

    pub fn half_line(&self) -> HalfLine {
        match self {
            QuarticProfile::Quartic(p) => p.half_line,
            QuarticProfile::ContinuityBranch(p) => p.half_line,
        }
    }

    /// u(y), or `None` outside the reality region of the radicals.
    pub fn u(&self, y: f64) -> Option<f64> {
        match self {
            QuarticProfile::Quartic(p) => {
                let r1 = radical(y, p.c1)?;
                let r2 = radical(y, p.c2)?;
                Some(0.5 * y + 0.5 * p.sign1.value() * r1 + 0.5 * p.sign2.value() * r2)
            }
            QuarticProfile::ContinuityBranch(_) => Some(0.5 * y),
        }
    }

    /// w(y); `None` where undefined.
    pub fn w(&self, y: f64) -> Option<f64> {
        match self {
            QuarticProfile::Quartic(p) => {
                let r1 = radical(y, p.c1)?;
                let r2 = radical(y, p.c2)?;
                // u − y/2 without cancellation.
                let du = 0.5 * p.sign1.value() * r1 + 0.5 * p.sign2.value() * r2;
                if du == 0.0 {
                    return None;
                }
                Some((p.c1 - p.c2) / (4.0 * (3.0 * p.a).sqrt()) * y / du)
            }
            QuarticProfile::ContinuityBranch(p) => {
                Some(p.sign.value() * radical(y, p.c)? / (3.0 * p.a).sqrt())
            }
        }
    }

    /// Both first integrals of the reduced system:
    /// (u − y/2)w/y and (u² + 3aw²)/y − u.
    pub fn first_integrals(&self, y: f64) -> Option<(f64, f64)> {
        let u = self.u(y)?;
        let w = self.w(y)?;
        let a = self.a();
        let du = match self {
            QuarticProfile::Quartic(p) => {
                0.5 * p.sign1.value() * radical(y, p.c1)? + 0.5 * p.sign2.value() * radical(y, p.c2)?
            }
            QuarticProfile::ContinuityBranch(_) => 0.0,
        };
        Some((du * w / y, (u * u + 3.0 * a * w * w) / y - u))
    }

    /// ρ = w/x > 0 at y (the half-line fixes the sign of x).
    fn density_positive(&self, y: f64) -> bool {
        self.w(y).is_some_and(|w| w * self.half_line().sign() > 0.0 && w.is_finite())
    }
}

/// Maximal closed y-intervals (within (0, ∞)) on which `pred` holds, found
/// by a geometric scan over [y_min, y_max] and bisection of each boundary.
/// An interval touching the top of the scan is reported as unbounded.
pub fn positivity_bands(pred: impl Fn(f64) -> bool, y_min: f64, y_max: f64, samples: usize) -> Vec<Interval> {
    let ratio = (y_max / y_min).powf(1.0 / (samples - 1) as f64);
    let ys: Vec<f64> = (0..samples).map(|i| y_min * ratio.powi(i as i32)).collect();
    let tol = RootTolerance { x_abs: 0.0, x_rel: 1e-15, max_iter: 200 };
    // Bisects the predicate and returns a point still inside.
    let edge = |inside: f64, outside: f64| -> f64 {
        let f = |y: f64| if pred(y) { -1.0 } else { 1.0 };
        let mut y = bisect(f, inside.min(outside), inside.max(outside), tol).unwrap_or(inside);
        // Step back inside if the bisection landed on the outer side.
        let step = if inside < outside { -1.0 } else { 1.0 };
        let mut guard = 0;
        while !pred(y) && guard < 64 {
            y += step * y.abs().max(f64::MIN_POSITIVE) * f64::EPSILON * 4.0;
            guard += 1;
        }
        y
    };

    let mut bands = Vec::new();
    let mut start: Option<f64> = None;
    for (i, &y) in ys.iter().enumerate() {
        let ok = pred(y);
        match (ok, start) {
            (true, None) => {
                start = Some(if i == 0 { 0.0 } else { edge(y, ys[i - 1]) });
            }
            (false, Some(s)) => {
                bands.push(Interval::new(s, edge(ys[i - 1], y)));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        bands.push(Interval::new(s, f64::INFINITY));
    }
    bands
}

struct ProfileField {
    profile: QuarticProfile,
}

impl FlowField for ProfileField {
    fn dim(&self) -> usize {
        1
    }

    fn density(&self, t: f64, x: &[f64]) -> Result<f64> {
        let y = x[0] * x[0] / t;
        let w = self.profile.w(y).ok_or(Error::OutsideDomain { t })?;
        Ok(w / x[0])
    }

    fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        let y = x[0] * x[0] / t;
        out[0] = self.profile.u(y).ok_or(Error::OutsideDomain { t })? / x[0];
        Ok(())
    }
}

fn profile_solution(family: Family, params: SolutionParams, profile: QuarticProfile) -> Result<FluidSolution> {
    let scale = match profile {
        QuarticProfile::Quartic(p) => p.c1.abs().max(p.c2.abs()).max(1.0),
        QuarticProfile::ContinuityBranch(p) => p.c.abs().max(1.0),
    };
    let bands = positivity_bands(|y| profile.density_positive(y), 1e-9 * scale, 1e9 * scale, 4001);
    if bands.is_empty() {
        return Err(Error::EmptyPositivityDomain);
    }
    let half = profile.half_line();
    let domain = SpacetimeDomain::positive_time(1)
        .exclude(Exclusion::HalfSpace { axis: 0, keep_positive: half == HalfLine::Positive })
        .exclude(Exclusion::SimilarityBands { bands });
    let ell = EllParameter::from_doubled(1)?;
    FluidSolution::new(
        family,
        params,
        Symmetry::Galilei(ell),
        EquationOfState::galilei(profile.a(), ell, 1)?,
        domain,
        Arc::new(ProfileField { profile }),
    )
}

/// The quartic branch u ≠ y/2.
pub fn quartic_1d_solution(p: Quartic1dParams) -> Result<FluidSolution> {
    check_positive("a", p.a)?;
    check_finite("c1", p.c1)?;
    check_finite("c2", p.c2)?;
    if p.c1 == p.c2 {
        // Equal radicals: either they cancel (u ≡ y/2) or w ≡ 0.
        return Err(if p.sign1 != p.sign2 { Error::BranchCollision } else { Error::EmptyPositivityDomain });
    }
    profile_solution(Family::GcaQuartic1d, SolutionParams::Quartic1d(p), QuarticProfile::Quartic(p))
}

/// The branch u = y/2 (v = x/(2t)).
pub fn continuity_branch_1d_solution(p: ContinuityBranchParams) -> Result<FluidSolution> {
    check_positive("a", p.a)?;
    check_finite("c", p.c)?;
    profile_solution(
        Family::GcaContinuityBranch1d,
        SolutionParams::ContinuityBranch1d(p),
        QuarticProfile::ContinuityBranch(p),
    )
}
