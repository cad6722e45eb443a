//! Flows invariant under one acceleration subgroup: ρ = c/t^n,
//! v = (n·x + c₋₁ + c₀·t)/t in one dimension.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use super::{check_finite, check_positive, SolutionParams};
use crate::domain::SpacetimeDomain;
use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::field::{Family, FlowField, FluidSolution, Symmetry};
use crate::material::{acceleration_velocity, material_derivative_affine_chain, Laurent};
use crate::params::EllParameter;
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelerationFamilyParams {
    pub ell: EllParameter,
    pub n: u32,
    pub c: f64,
    pub c_minus1: f64,
    pub c_0: f64,
}

impl fmt::Display for AccelerationFamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ℓ={},n={},c={},c_minus1={},c_0={}", self.ell, self.n, self.c, self.c_minus1, self.c_0)
    }
}

/// The linear conditions 𝒟^{2ℓ}v = 0 imposes on (c₋₁, c₀).
#[derive(Debug, Clone, PartialEq)]
pub struct AccelerationConstraint {
    pub ell: EllParameter,
    pub n: u32,
    /// One row per power p of t in 𝒟^{2ℓ}v: (p, coefficient of c₋₁, coefficient of c₀).
    pub rows: Vec<(i32, Rational, Rational)>,
    /// A basis of the allowed (c₋₁, c₀).
    pub basis: Vec<(Rational, Rational)>,
}

impl AccelerationConstraint {
    pub fn c_minus1_free(&self) -> bool {
        self.rows.iter().all(|(_, u, _)| u.is_zero())
    }

    pub fn c_0_free(&self) -> bool {
        self.rows.iter().all(|(_, _, w)| w.is_zero())
    }

    /// Whether (c₋₁, c₀) satisfies every row up to rounding of the inputs.
    pub fn admits(&self, c_minus1: f64, c_0: f64) -> bool {
        self.rows.iter().all(|(_, u, w)| {
            let (u, w) = (rational::to_f64(u), rational::to_f64(w));
            let r = u * c_minus1 + w * c_0;
            r.abs() <= 1e-12 * (u.abs() * c_minus1.abs() + w.abs() * c_0.abs())
        })
    }

    pub fn describe(&self) -> String {
        if self.rows.is_empty() {
            return "c_minus1 and c_0 free".into();
        }
        match self.basis.as_slice() {
            [] => "c_minus1 = c_0 = 0".into(),
            [(_, w)] if w.is_zero() => "c_0 = 0, c_minus1 free".into(),
            [(u, _)] if u.is_zero() => "c_minus1 = 0, c_0 free".into(),
            [(u, w)] => alloc::format!("(c_minus1, c_0) ∝ ({}, {})", rational::format(u), rational::format(w)),
            _ => "c_minus1 and c_0 free".into(),
        }
    }
}

/// Laurent chains A_k, U_k, W_k with 𝒟^k v = A_k·x + c₋₁U_k + c₀W_k.
struct Chains {
    a: Vec<Laurent>,
    u: Vec<Laurent>,
    w: Vec<Laurent>,
}

fn chains(n: u32, depth: usize) -> Chains {
    let from_u = material_derivative_affine_chain(&acceleration_velocity(n, int(1), Rational::zero()), depth);
    let from_w = material_derivative_affine_chain(&acceleration_velocity(n, Rational::zero(), int(1)), depth);
    Chains {
        a: from_u.iter().map(|v| v.a.clone()).collect(),
        u: from_u.into_iter().map(|v| v.b).collect(),
        w: from_w.into_iter().map(|v| v.b).collect(),
    }
}

/// Solves 𝒟^{2ℓ}v = 0 for (c₋₁, c₀) exactly.
pub fn acceleration_constraints(ell: EllParameter, n: u32) -> Result<AccelerationConstraint> {
    if n > ell.doubled() {
        return Err(Error::OutOfRangeAccelerationIndex { n, max: ell.doubled() });
    }
    let k = ell.doubled() as usize;
    let ch = chains(n, k);
    debug_assert!(ch.a[k].is_zero());
    let (u, w) = (&ch.u[k], &ch.w[k]);
    let mut powers: Vec<i32> = u.powers();
    powers.extend(w.powers());
    powers.sort_unstable();
    powers.dedup();
    let rows: Vec<(i32, Rational, Rational)> =
        powers.into_iter().map(|p| (p, u.coefficient(p), w.coefficient(p))).collect();

    // Null space of the k×2 system.
    let pivot = rows.iter().find(|(_, u, w)| !(u.is_zero() && w.is_zero()));
    let basis = match pivot {
        None => alloc::vec![(int(1), Rational::zero()), (Rational::zero(), int(1))],
        Some(&(_, pu, pw)) => {
            let candidate = (pw, -pu);
            if rows.iter().all(|(_, u, w)| (*u * candidate.0 + *w * candidate.1).is_zero()) {
                let s = if candidate.0.is_zero() { candidate.1 } else { candidate.0 };
                alloc::vec![(candidate.0 / s, candidate.1 / s)]
            } else {
                Vec::new()
            }
        }
    };
    Ok(AccelerationConstraint { ell, n, rows, basis })
}

struct AccelerationField {
    n: u32,
    c: f64,
    c_minus1: f64,
    c_0: f64,
    chains: Chains,
}

impl FlowField for AccelerationField {
    fn dim(&self) -> usize {
        1
    }

    fn density(&self, t: f64, _x: &[f64]) -> Result<f64> {
        Ok(self.c / t.powi(self.n as i32))
    }

    fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        out[0] = (f64::from(self.n) * x[0] + self.c_minus1 + self.c_0 * t) / t;
        Ok(())
    }

    fn material_derivative_exact(&self, k: usize, t: f64, x: &[f64], out: &mut [f64]) -> Option<Result<()>> {
        let ch = &self.chains;
        if k >= ch.a.len() {
            return None;
        }
        out[0] = ch.a[k].eval(t) * x[0] + self.c_minus1 * ch.u[k].eval(t) + self.c_0 * ch.w[k].eval(t);
        Some(Ok(()))
    }
}

/// ρ = c/t^n, v = (n·x + c₋₁ + c₀t)/t. Fails with
/// [`Error::NoBoundedSolution`] when (c₋₁, c₀) violates 𝒟^{2ℓ}v = 0.
pub fn acceleration_solution(p: AccelerationFamilyParams) -> Result<FluidSolution> {
    check_positive("c", p.c)?;
    check_finite("c_minus1", p.c_minus1)?;
    check_finite("c_0", p.c_0)?;
    let constraint = acceleration_constraints(p.ell, p.n)?;
    if !constraint.admits(p.c_minus1, p.c_0) {
        return Err(Error::NoBoundedSolution(alloc::format!(
            "ℓ = {}, n = {} requires {}",
            p.ell,
            p.n,
            constraint.describe()
        )));
    }
    let field = AccelerationField {
        n: p.n,
        c: p.c,
        c_minus1: p.c_minus1,
        c_0: p.c_0,
        chains: chains(p.n, crate::params::MAX_DOUBLED_ELL as usize),
    };
    let sol = FluidSolution::new(
        Family::GcaAcceleration,
        SolutionParams::Acceleration(p),
        Symmetry::Galilei(p.ell),
        // ρ depends on t only, so the pressure drops out of the Euler
        // equation and the equation of state is the family's default.
        EquationOfState::galilei(1.0, p.ell, 1)?,
        SpacetimeDomain::positive_time(1),
        Arc::new(field),
    )?;
    Ok(sol.with_note(alloc::format!("constants: {}", constraint.describe())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ell(doubled: u32) -> EllParameter {
        EllParameter::from_doubled(doubled).unwrap()
    }

    #[test]
    fn half_n1_forces_c0() {
        let c = acceleration_constraints(ell(1), 1).unwrap();
        assert!(c.c_minus1_free());
        assert!(!c.c_0_free());
        assert_eq!(c.basis, alloc::vec![(int(1), Rational::zero())]);
        let p = AccelerationFamilyParams { ell: ell(1), n: 1, c: 1.0, c_minus1: 0.7, c_0: 0.0 };
        assert!(acceleration_solution(p).is_ok());
        let bad = AccelerationFamilyParams { c_0: 0.2, ..p };
        assert!(matches!(acceleration_solution(bad), Err(Error::NoBoundedSolution(_))));
    }

    #[test]
    fn half_n0_forces_cminus1() {
        let c = acceleration_constraints(ell(1), 0).unwrap();
        assert_eq!(c.basis, alloc::vec![(Rational::zero(), int(1))]);
        let s = acceleration_solution(AccelerationFamilyParams { ell: ell(1), n: 0, c: 2.0, c_minus1: 0.0, c_0: 0.3 })
            .unwrap();
        assert_eq!(s.density(5.0, &[1.0]).unwrap(), 2.0);
        assert_eq!(s.sample_row(5.0, &[1.0]).unwrap()[1], 0.3);
    }

    #[test]
    fn ell_one_n2_is_free() {
        let c = acceleration_constraints(ell(2), 2).unwrap();
        assert!(c.rows.is_empty());
        assert_eq!(c.basis.len(), 2);
    }

    #[test]
    fn exact_derivative_vanishes_at_top_order() {
        for doubled in 1..=6 {
            for n in 0..=doubled {
                let c = acceleration_constraints(ell(doubled), n).unwrap();
                let (cm, c0) = c.basis.first().map_or((0.0, 0.0), |(u, w)| (rational::to_f64(u), rational::to_f64(w)));
                let s = acceleration_solution(AccelerationFamilyParams { ell: ell(doubled), n, c: 1.0, c_minus1: cm, c_0: c0 })
                    .unwrap();
                let mut out = [0.0];
                s.material_derivative_exact(doubled as usize, 1.7, &[0.4], &mut out).unwrap().unwrap();
                assert!(out[0].abs() < 1e-12, "2ℓ={doubled}, n={n}: {}", out[0]);
            }
        }
    }

    #[test]
    fn index_range() {
        assert!(matches!(acceleration_constraints(ell(1), 2), Err(Error::OutOfRangeAccelerationIndex { .. })));
    }
}
