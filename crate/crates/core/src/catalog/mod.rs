//! Closed-form solution families.

mod acceleration;
mod quartic;
mod scaling;
mod viscous;

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

pub use acceleration::{acceleration_constraints, acceleration_solution, AccelerationConstraint, AccelerationFamilyParams};
pub use quartic::{
    continuity_branch_1d_solution, positivity_bands, quartic_1d_solution, ContinuityBranchParams, HalfLine,
    QuarticProfile, Quartic1dParams, Sign,
};
pub use scaling::{
    acceleration_deformed_solution, conformal_deformed_solution, gca_scaling_solution, lifshitz_scaling_solution,
    GcaScalingParams, LifshitzParams,
};
pub use viscous::{viscous_solution, ViscousParams, ViscousProfile, ViscousRoots};

use crate::error::{Error, Result};
use crate::field::Family;
use crate::MAX_DIM;

/// Parameters a catalog solution was built from.
#[derive(Debug, Clone, PartialEq)]
pub enum SolutionParams {
    GcaScaling(GcaScalingParams),
    Quartic1d(Quartic1dParams),
    ContinuityBranch1d(ContinuityBranchParams),
    Acceleration(AccelerationFamilyParams),
    ConformalDeformed { base: GcaScalingParams, gamma: f64 },
    AccelerationDeformed { base: GcaScalingParams, vectors: Vec<Vec<f64>> },
    Lifshitz(LifshitzParams),
    Viscous(ViscousParams),
}

impl SolutionParams {
    /// Compact `key=value` list used in solution ids.
    pub fn summary(&self) -> String {
        match self {
            SolutionParams::GcaScaling(p) => p.to_string(),
            SolutionParams::Quartic1d(p) => p.to_string(),
            SolutionParams::ContinuityBranch1d(p) => p.to_string(),
            SolutionParams::Acceleration(p) => p.to_string(),
            SolutionParams::ConformalDeformed { base, gamma } => alloc::format!("{base},γ={gamma}"),
            SolutionParams::AccelerationDeformed { base, vectors } => {
                let vs: Vec<String> = vectors
                    .iter()
                    .map(|v| {
                        let parts: Vec<String> = v.iter().map(|c| alloc::format!("{c}")).collect();
                        alloc::format!("({})", parts.join(","))
                    })
                    .collect();
                alloc::format!("{base},a=[{}]", vs.join(","))
            }
            SolutionParams::Lifshitz(p) => p.to_string(),
            SolutionParams::Viscous(p) => p.to_string(),
        }
    }
}

impl fmt::Display for SolutionParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

/// One parameter in a family's schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSchema {
    pub name: &'static str,
    pub kind: &'static str,
    pub constraint: &'static str,
}

/// Discovery data for one family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyInfo {
    pub family: Family,
    pub symmetry: &'static str,
    pub velocity: &'static str,
    pub density: &'static str,
    pub domain: &'static str,
    pub params: &'static [ParamSchema],
}

const fn p(name: &'static str, kind: &'static str, constraint: &'static str) -> ParamSchema {
    ParamSchema { name, kind, constraint }
}

const ELL: ParamSchema = p("ell", "rational p/q", "integer, or half-integer (1+4k)/2 (admissible ℓ)");
const DIM: ParamSchema = p("d", "integer", "1 ≤ d ≤ 8");
const A: ParamSchema = p("a", "real", "a > 0 (equation of state p = aρ^γ)");
const C: ParamSchema = p("c", "real", "c > 0");
const T0: ParamSchema = p("t0", "real", "time offset, default 0");

pub fn family_info(family: Family) -> FamilyInfo {
    use Family::*;
    let (symmetry, velocity, density, domain, params): (_, _, _, _, &'static [ParamSchema]) = match family {
        GcaScaling => (
            "ℓ-conformal Galilei",
            "v_i = ℓx_i/t",
            "ρ = (c/t − P_ℓ|x|²/(2a(1+ℓd)t^{2ℓ+1}))^{ℓd}, P_ℓ = ℓ(ℓ−1)···(ℓ−2ℓ)",
            "t > 0, all x",
            { const L: &[ParamSchema] = &[ELL, DIM, A, C, T0]; L },
        ),
        GcaQuartic1d => (
            "ℓ = 1/2 conformal Galilei, d = 1",
            "v = u(y)/x, u = y/2 ± ½√((y/2+c1)²−c1²) ± ½√((y/2+c2)²−c2²), y = x²/t",
            "ρ = w(y)/x, w = (c1−c2)/(4√(3a)) · y/(u − y/2)",
            "t > 0, one half-line, y in the computed positivity bands",
            { const L: &[ParamSchema] = &[
                p("c1", "real", "c1 ≠ c2 unless the branch is degenerate"),
                p("c2", "real", ""),
                A,
                p("sign1", "+|-", "sign of the first radical"),
                p("sign2", "+|-", "sign of the second radical"),
                p("half_line", "x>0|x<0", ""),
            ]; L },
        ),
        GcaContinuityBranch1d => (
            "ℓ = 1/2 conformal Galilei, d = 1",
            "v = x/(2t)",
            "ρ = w(y)/x, w = ±√((y/2+c)²−c²)/√(3a)",
            "t > 0, one half-line, y ≥ max(0, −4c)",
            { const L: &[ParamSchema] = &[p("c", "real", ""), A, p("sign", "+|-", ""), p("half_line", "x>0|x<0", "")]; L },
        ),
        GcaAcceleration => (
            "ℓ-conformal Galilei, d = 1",
            "v = (n x + c₋₁ + c₀ t)/t",
            "ρ = c/t^n",
            "t > 0, all x",
            { const L: &[ParamSchema] = &[
                ELL,
                p("n", "integer", "0 ≤ n ≤ 2ℓ"),
                C,
                p("c_minus1", "real", "fixed by 𝒟^{2ℓ}v = 0"),
                p("c_0", "real", "fixed by 𝒟^{2ℓ}v = 0"),
            ]; L },
        ),
        GcaConformalDeformed => (
            "ℓ-conformal Galilei",
            "v_i = ℓ(1+2γt)x_i/(t(1+γt))",
            "ρ = (c/(t(1+γt)) − P_ℓ|x|²/(2a(1+ℓd)(t(1+γt))^{2ℓ+1}))^{ℓd}",
            "t > 0, all x",
            { const L: &[ParamSchema] = &[ELL, DIM, A, C, p("gamma", "real", "γ > 0")]; L },
        ),
        GcaAccelerationDeformed => (
            "ℓ-conformal Galilei",
            "v_i(t,x) = ℓ(x−s)_i/t + s'_i, s(t) = Σ_n a^(n) t^n",
            "ρ(t,x) = ρ_scaling(t, x − s(t))",
            "t > 0, all x",
            { const L: &[ParamSchema] = &[ELL, DIM, A, C, p("accel", "2ℓ+1 vectors of length d", "")]; L },
        ),
        LifshitzScaling => (
            "Lifshitz",
            "v_i = x_i/(2zt)",
            "ρ = (c/t^{2−1/z} + (2z−1)²|x|²/(4az²(d+2(2z−1))t²))^{d/(2(2z−1))}",
            "t > 0, all x",
            { const L: &[ParamSchema] = &[p("z", "rational or decimal", "z > 1/2"), DIM, A, C]; L },
        ),
        ViscousGcaInteger => (
            "ℓ-conformal Galilei, viscous",
            "v_i = ℓx_i/t",
            "ρ = c/t^{ℓd}, η = η0ρ, ξ = ξ0ρ",
            "t > 0, all x",
            { const L: &[ParamSchema] = &[ELL, DIM, A, C, p("eta0", "real", "η0 ≥ 0"), p("xi0", "real", "ξ0 ≥ 0")]; L },
        ),
        ViscousGcaHalfInteger => (
            "ℓ-conformal Galilei, viscous",
            "v_i = ℓx_i/t",
            "ρ = w(y)/t^{ℓd}, a(ℓd+1)w^{1/(ℓd)} − ξ0ℓd ln w + ½P_ℓ|y|² = c, y = x/t^ℓ",
            "t > 0, points where the equation has a root",
            { const L: &[ParamSchema] = &[ELL, DIM, A, p("c", "real", "any"), p("eta0", "real", "η0 ≥ 0"), p("xi0", "real", "ξ0 ≥ 0")]; L },
        ),
    };
    FamilyInfo { family, symmetry, velocity, density, domain, params }
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::DimensionMismatch { expected: alloc::format!("1..={MAX_DIM}"), got: d });
    }
    Ok(())
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParameter(alloc::format!("{name} = {v} must be positive")));
    }
    Ok(())
}

pub(crate) fn check_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidParameter(alloc::format!("{name} = {v} must be finite")));
    }
    Ok(())
}
