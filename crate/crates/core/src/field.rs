//! Evaluable density/velocity fields and the solution wrapper.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::catalog::SolutionParams;
use crate::domain::{Interval, SpacetimeDomain};
use crate::eos::EquationOfState;
use crate::error::{Error, Result};
use crate::params::{DynamicalExponent, EllParameter};
use crate::MAX_DIM;

/// Shear and volume viscosity coefficients η and ξ at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viscosity {
    pub shear: f64,
    pub bulk: f64,
}

/// Density and velocity as functions of (t, x). Implementations are pure.
pub trait FlowField: Send + Sync {
    fn dim(&self) -> usize;

    fn density(&self, t: f64, x: &[f64]) -> Result<f64>;

    fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()>;

    fn viscosity(&self, _t: f64, _x: &[f64]) -> Result<Option<Viscosity>> {
        Ok(None)
    }

    /// Exact 𝒟^k v at a point, when the field has a closed form for it.
    fn material_derivative_exact(&self, _k: usize, _t: f64, _x: &[f64], _out: &mut [f64]) -> Option<Result<()>> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    GcaScaling,
    GcaQuartic1d,
    GcaContinuityBranch1d,
    GcaAcceleration,
    GcaConformalDeformed,
    GcaAccelerationDeformed,
    LifshitzScaling,
    ViscousGcaInteger,
    ViscousGcaHalfInteger,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::GcaScaling,
        Family::GcaQuartic1d,
        Family::GcaContinuityBranch1d,
        Family::GcaAcceleration,
        Family::GcaConformalDeformed,
        Family::GcaAccelerationDeformed,
        Family::LifshitzScaling,
        Family::ViscousGcaInteger,
        Family::ViscousGcaHalfInteger,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::GcaScaling => "gca-scaling",
            Family::GcaQuartic1d => "gca-quartic-1d",
            Family::GcaContinuityBranch1d => "gca-continuity-branch-1d",
            Family::GcaAcceleration => "gca-acceleration",
            Family::GcaConformalDeformed => "gca-conformal-deformed",
            Family::GcaAccelerationDeformed => "gca-acceleration-deformed",
            Family::LifshitzScaling => "lifshitz",
            Family::ViscousGcaInteger => "viscous-gca-integer",
            Family::ViscousGcaHalfInteger => "viscous-gca-half-integer",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        let name = name.trim();
        Family::ALL.into_iter().find(|f| f.name() == name).or(match name {
            "lifshitz-scaling" => Some(Family::LifshitzScaling),
            "quartic" => Some(Family::GcaQuartic1d),
            "continuity-branch" => Some(Family::GcaContinuityBranch1d),
            "acceleration" => Some(Family::GcaAcceleration),
            "conformal" => Some(Family::GcaConformalDeformed),
            _ => None,
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which group the governing equations are invariant under.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Galilei(EllParameter),
    Lifshitz(DynamicalExponent),
}

impl Symmetry {
    /// Number of material derivatives in the Euler equation.
    pub fn euler_order(self) -> usize {
        match self {
            Symmetry::Galilei(ell) => ell.doubled() as usize,
            Symmetry::Lifshitz(_) => 1,
        }
    }

    pub fn ell(self) -> Result<EllParameter> {
        match self {
            Symmetry::Galilei(ell) => Ok(ell),
            Symmetry::Lifshitz(_) => Err(Error::SymmetryMismatch("expected an ℓ-conformal Galilei solution".into())),
        }
    }

    pub fn z(self) -> Result<DynamicalExponent> {
        match self {
            Symmetry::Lifshitz(z) => Ok(z),
            Symmetry::Galilei(_) => Err(Error::SymmetryMismatch("expected a Lifshitz solution".into())),
        }
    }
}

/// A density/velocity pair over d spatial dimensions, tagged with the
/// family and parameters it came from.
#[derive(Clone)]
pub struct FluidSolution {
    pub id: String,
    pub family: Family,
    pub params: SolutionParams,
    pub symmetry: Symmetry,
    pub eos: EquationOfState,
    pub domain: SpacetimeDomain,
    /// Free-form flags, e.g. branch choices made during construction.
    pub notes: Vec<String>,
    /// Transformations applied on top of the catalog solution, in order.
    pub lineage: Vec<String>,
    field: Arc<dyn FlowField>,
}

impl fmt::Debug for FluidSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FluidSolution")
            .field("id", &self.id)
            .field("family", &self.family)
            .field("symmetry", &self.symmetry)
            .field("domain", &self.domain)
            .field("lineage", &self.lineage)
            .finish()
    }
}

impl FluidSolution {
    pub fn new(
        family: Family,
        params: SolutionParams,
        symmetry: Symmetry,
        eos: EquationOfState,
        domain: SpacetimeDomain,
        field: Arc<dyn FlowField>,
    ) -> Result<Self> {
        domain.validate()?;
        if field.dim() != domain.dim {
            return Err(Error::DimensionMismatch { expected: alloc::format!("{}", domain.dim), got: field.dim() });
        }
        let id = alloc::format!("{}[{}]", family.name(), params.summary());
        Ok(Self { id, family, params, symmetry, eos, domain, notes: Vec::new(), lineage: Vec::new(), field })
    }

    pub fn dim(&self) -> usize {
        self.domain.dim
    }

    pub fn field(&self) -> &Arc<dyn FlowField> {
        &self.field
    }

    /// Same solution data with a different field and domain, recording `step`
    /// in the lineage.
    pub fn derive(&self, field: Arc<dyn FlowField>, domain: SpacetimeDomain, step: String) -> Result<Self> {
        domain.validate()?;
        let mut out = self.clone();
        out.field = field;
        out.domain = domain;
        out.id = alloc::format!("{}∘{}", step, self.id);
        out.lineage.push(step);
        Ok(out)
    }

    pub(crate) fn with_note(mut self, note: String) -> Self {
        self.notes.push(note);
        self
    }

    fn check(&self, t: f64, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: alloc::format!("{}", self.dim()), got: x.len() });
        }
        if !self.domain.contains(t, x) {
            return Err(Error::OutsideDomain { t });
        }
        Ok(())
    }

    /// ρ(t, x); errors outside the domain or where the formula is not positive.
    pub fn density(&self, t: f64, x: &[f64]) -> Result<f64> {
        self.check(t, x)?;
        let rho = self.field.density(t, x)?;
        if rho > 0.0 && rho.is_finite() {
            Ok(rho)
        } else {
            Err(Error::NonPositiveDensity { t })
        }
    }

    pub fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.check(t, x)?;
        self.field.velocity(t, x, out)
    }

    pub fn viscosity(&self, t: f64, x: &[f64]) -> Result<Option<Viscosity>> {
        self.check(t, x)?;
        self.field.viscosity(t, x)
    }

    pub fn material_derivative_exact(&self, k: usize, t: f64, x: &[f64], out: &mut [f64]) -> Option<Result<()>> {
        if let Err(e) = self.check(t, x) {
            return Some(Err(e));
        }
        self.field.material_derivative_exact(k, t, x, out)
    }

    pub fn has_exact_material_derivative(&self) -> bool {
        let mut buf = [0.0; MAX_DIM];
        let x = [1.0; MAX_DIM];
        self.field.material_derivative_exact(0, 1.0, &x[..self.dim()], &mut buf[..self.dim()]).is_some()
    }

    /// Shifts time, t → t + t0. The governing equations are invariant under
    /// time translation, so the result is again a solution.
    pub fn with_time_offset(&self, t0: f64) -> Result<Self> {
        if t0 == 0.0 {
            return Ok(self.clone());
        }
        if !t0.is_finite() {
            return Err(Error::InvalidParameter(alloc::format!("t0 = {t0}")));
        }
        let mut domain = self.domain.clone();
        let lo = (domain.t_range.min - t0).max(f64::MIN_POSITIVE);
        domain.t_range = Interval::new(lo, domain.t_range.max - t0);
        if domain.t_range.max <= domain.t_range.min {
            return Err(Error::InvalidParameter(alloc::format!("t0 = {t0} leaves no positive time")));
        }
        domain.exclusions = domain
            .exclusions
            .into_iter()
            .map(|e| match e {
                crate::domain::Exclusion::SimilarityBands { .. }
                | crate::domain::Exclusion::SimilarityShell { .. }
                | crate::domain::Exclusion::Preimage { .. } => {
                    crate::domain::Exclusion::Preimage {
                        map: Arc::new(TimeShiftMap(t0)),
                        base: alloc::boxed::Box::new(SpacetimeDomain {
                            exclusions: alloc::vec![e],
                            ..self.domain.clone()
                        }),
                    }
                }
                other => other,
            })
            .collect();
        let field = Arc::new(TimeShift { base: self.clone(), t0 });
        self.derive(field, domain, alloc::format!("time-shift(t0={t0})"))
    }

    /// Samples (ρ, v) at a point into a flat row: ρ, v_1..v_d.
    pub fn sample_row(&self, t: f64, x: &[f64]) -> Result<Vec<f64>> {
        let mut row = alloc::vec![0.0; 1 + self.dim()];
        row[0] = self.density(t, x)?;
        self.velocity(t, x, &mut row[1..])?;
        Ok(row)
    }
}

struct TimeShiftMap(f64);

impl crate::domain::PointMap for TimeShiftMap {
    fn map_point(&self, t: f64, x: &[f64], out: &mut [f64]) -> Option<f64> {
        out.copy_from_slice(x);
        Some(t + self.0)
    }

    fn describe(&self) -> String {
        alloc::format!("t → t + {}", self.0)
    }
}

struct TimeShift {
    base: FluidSolution,
    t0: f64,
}

impl FlowField for TimeShift {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn density(&self, t: f64, x: &[f64]) -> Result<f64> {
        self.base.density(t + self.t0, x)
    }

    fn velocity(&self, t: f64, x: &[f64], out: &mut [f64]) -> Result<()> {
        self.base.velocity(t + self.t0, x, out)
    }

    fn viscosity(&self, t: f64, x: &[f64]) -> Result<Option<Viscosity>> {
        self.base.viscosity(t + self.t0, x)
    }

    fn material_derivative_exact(&self, k: usize, t: f64, x: &[f64], out: &mut [f64]) -> Option<Result<()>> {
        self.base.material_derivative_exact(k, t + self.t0, x, out)
    }
}
