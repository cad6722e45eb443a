//! Fixtures shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use cfl_core::catalog::*;
use cfl_core::rational::rat;
use cfl_core::{DynamicalExponent, EllParameter, Family, FlowField, FluidSolution, GridAxis, GridSpec, Result};

pub fn ell(doubled: u32) -> EllParameter {
    EllParameter::from_doubled(doubled).unwrap()
}

pub fn z(num: i128, den: i128) -> DynamicalExponent {
    DynamicalExponent::new(rat(num, den)).unwrap()
}

pub fn scaling(doubled: u32, d: usize) -> FluidSolution {
    gca_scaling_solution(GcaScalingParams::new(ell(doubled), d, 0.5, 0.1)).unwrap()
}

pub fn lifshitz(num: i128, den: i128, d: usize) -> FluidSolution {
    lifshitz_scaling_solution(LifshitzParams { z: z(num, den), d, a: 0.5, c: 0.1 }).unwrap()
}

pub fn grid(t: (f64, f64, usize), x: (f64, f64, usize), d: usize) -> GridSpec {
    GridSpec::isotropic(GridAxis::new(t.0, t.1, t.2), GridAxis::new(x.0, x.1, x.2), d)
}

/// Density multiplied by 1 + eps·x_1; velocity unchanged.
pub struct Perturbed {
    pub base: FluidSolution,
    pub eps: f64,
}

impl FlowField for Perturbed {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn density(&self, t: f64, x: &[f64]) -> Result<f64> {
        Ok(self.base.density(t, x)? * (1.0 + self.eps * x[0]))
    }

    fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.base.velocity(t, x, out)
    }
}

pub fn perturbed(sol: &FluidSolution, eps: f64) -> FluidSolution {
    sol.derive(Arc::new(Perturbed { base: sol.clone(), eps }), sol.domain.clone(), format!("perturb({eps})")).unwrap()
}

/// One representative of every family, with a grid inside its domain.
pub fn every_family() -> Vec<(FluidSolution, GridSpec)> {
    let quartic = Quartic1dParams {
        c1: 1.0,
        c2: 0.0,
        a: 1.0 / 3.0,
        sign1: Sign::Plus,
        sign2: Sign::Plus,
        half_line: HalfLine::Positive,
    };
    let branch = ContinuityBranchParams { c: 0.0, a: 1.0, sign: Sign::Plus, half_line: HalfLine::Positive };
    let half_line = grid((1.0, 3.0, 8), (0.5, 6.0, 24), 1);
    let line = grid((2.0, 6.0, 8), (-6.0, 6.0, 24), 1);
    let plane = grid((2.0, 6.0, 6), (-4.0, 4.0, 12), 2);
    let out = vec![
        (scaling(5, 2), plane.clone()),
        (quartic_1d_solution(quartic).unwrap(), half_line.clone()),
        (continuity_branch_1d_solution(branch).unwrap(), half_line),
        (
            acceleration_solution(AccelerationFamilyParams { ell: ell(2), n: 1, c: 0.1, c_minus1: 0.0, c_0: 0.0 })
                .unwrap(),
            line.clone(),
        ),
        (conformal_deformed_solution(GcaScalingParams::new(ell(1), 2, 0.5, 0.1), 0.3).unwrap(), plane.clone()),
        (
            acceleration_deformed_solution(
                GcaScalingParams::new(ell(2), 2, 0.5, 0.1),
                vec![vec![0.0, 1.0], vec![0.5, -0.5], vec![-0.5, -0.5]],
            )
            .unwrap(),
            plane.clone(),
        ),
        (lifshitz(3, 5, 2), plane.clone()),
        (
            viscous_solution(ViscousParams { ell: ell(2), d: 2, a: 0.5, c: 0.1, eta0: 0.3, xi0: 0.2 }).unwrap(),
            plane,
        ),
        (
            viscous_solution(ViscousParams { ell: ell(1), d: 1, a: 0.5, c: 0.75, eta0: 0.0, xi0: 0.1 }).unwrap(),
            line,
        ),
    ];
    let families: Vec<Family> = out.iter().map(|(s, _)| s.family).collect();
    assert_eq!(families, Family::ALL.to_vec());
    out
}
