//! Experiment configuration, persisted as TOML next to every run's outputs.

use std::path::{Path, PathBuf};

use cfl_core::catalog::{
    acceleration_deformed_solution, acceleration_solution, conformal_deformed_solution, continuity_branch_1d_solution,
    family_info, gca_scaling_solution, lifshitz_scaling_solution, quartic_1d_solution, viscous_solution,
    AccelerationFamilyParams, ContinuityBranchParams, GcaScalingParams, HalfLine, LifshitzParams, Quartic1dParams, Sign,
    ViscousParams,
};
use cfl_core::material::{StencilConfig, StencilKind};
use cfl_core::residual::{DomainPolicy, ResidualConfig};
use cfl_core::{DynamicalExponent, EllParameter, Family, FluidSolution};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Verify,
    Transform,
    Figures,
    Algebra,
}

/// Everything a run depends on. Re-running a saved config reproduces its
/// output files byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    /// Seed for randomized suites.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionSpec>,
    #[serde(default)]
    pub stencil: StencilSettings,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transform: Option<TransformSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figures: Option<FigureSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSettings>,
    #[serde(default)]
    pub output: OutputSettings,
}

pub fn default_tolerance() -> f64 {
    1e-6
}

impl ExperimentConfig {
    pub fn new(command: CommandKind) -> Self {
        Self {
            command,
            seed: 0,
            tolerance: default_tolerance(),
            grid: None,
            solution: None,
            stencil: StencilSettings::default(),
            transform: None,
            figures: None,
            algebra: None,
            output: OutputSettings::default(),
        }
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_toml(s: &str) -> CliResult<Self> {
        toml::from_str(s).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&s)
    }

    pub fn solution(&self) -> CliResult<&SolutionSpec> {
        self.solution.as_ref().ok_or_else(|| CliError::invalid("no solution family given"))
    }

    pub fn grid_string(&self) -> CliResult<&str> {
        self.grid.as_deref().ok_or_else(|| CliError::invalid("no grid given"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    pub dir: PathBuf,
}

impl Default for OutputSettings {
    fn default() -> Self {
        Self { dir: PathBuf::from("cfl-out") }
    }
}

/// Residual and stencil knobs; defaults match the library defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StencilSettings {
    /// `directional` or `partial`.
    pub kind: String,
    pub h_base: f64,
    pub richardson: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_x: Option<f64>,
    pub rel_step: f64,
    pub force_fd: bool,
    pub cross_check_points: usize,
    /// `fail` or `skip`.
    pub on_domain_exceeded: String,
}

impl Default for StencilSettings {
    fn default() -> Self {
        let r = ResidualConfig::default();
        Self {
            kind: "directional".into(),
            h_base: r.stencil.h_base,
            richardson: r.stencil.richardson,
            h_t: r.stencil.h_t,
            h_x: r.stencil.h_x,
            rel_step: r.rel_step,
            force_fd: r.force_fd,
            cross_check_points: r.cross_check_points,
            on_domain_exceeded: "fail".into(),
        }
    }
}

impl StencilSettings {
    pub fn residual_config(&self) -> CliResult<ResidualConfig> {
        let kind = match self.kind.as_str() {
            "directional" => StencilKind::Directional,
            "partial" => StencilKind::Partial,
            k => return Err(CliError::invalid(format!("stencil kind {k:?}: expected directional or partial"))),
        };
        let on_domain_exceeded = match self.on_domain_exceeded.as_str() {
            "fail" => DomainPolicy::Fail,
            "skip" => DomainPolicy::Skip,
            p => return Err(CliError::invalid(format!("domain policy {p:?}: expected fail or skip"))),
        };
        let stencil = StencilConfig {
            kind,
            h_t: self.h_t,
            h_x: self.h_x,
            h_base: self.h_base,
            richardson: self.richardson,
            ..StencilConfig::default()
        };
        stencil.validate()?;
        if !(self.rel_step > 0.0 && self.rel_step < 0.5) {
            return Err(CliError::invalid(format!("rel_step = {} must lie in (0, 0.5)", self.rel_step)));
        }
        Ok(ResidualConfig {
            stencil,
            rel_step: self.rel_step,
            force_fd: self.force_fd,
            cross_check_points: self.cross_check_points,
            on_domain_exceeded,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSettings {
    /// JSON group element: `{"sl2": {...}}`, `{"accel": [[...], ...]}` or `{"lifshitz": [...]}`.
    pub spec: String,
    #[serde(default)]
    pub check_closed_form: bool,
    /// Run the covariance suite on the image.
    #[serde(default)]
    pub verify: bool,
    /// Number of random SL(2,R) and acceleration elements for the randomized
    /// covariance suite.
    #[serde(default)]
    pub random: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceSettings>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceSettings {
    /// `b=(0.1,0.1)..(0.1,1.0)` (ten points by default), `...:n`, or `b=(x,y)`.
    pub starts: String,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureSettings {
    /// fig1 .. fig5.
    pub which: Vec<String>,
    /// Orbit integration step.
    pub orbit_step: f64,
    /// Quadrature cells per axis for disk masses.
    pub cells: usize,
}

impl Default for FigureSettings {
    fn default() -> Self {
        Self { which: Vec::new(), orbit_step: 1e-4, cells: 512 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSettings {
    /// `gca` or `lifshitz`.
    pub algebra: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    pub d: usize,
}

/// A catalog family and its parameters. Parameters the family does not
/// take are rejected; omitted ones take the defaults listed in
/// [`SolutionSpec::build`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionSpec {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accel: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_minus1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_line: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi0: Option<f64>,
}

/// ℓ as an exact `p/q` or integer string; decimals are rejected.
pub fn parse_ell(s: &str) -> CliResult<EllParameter> {
    let s = s.trim();
    if s.contains(['.', 'e', 'E']) {
        return Err(CliError::invalid(format!("ℓ = {s}: give ℓ exactly as p/q or an integer")));
    }
    Ok(s.parse::<EllParameter>()?)
}

/// z as `p/q` or a decimal.
pub fn parse_z(s: &str) -> CliResult<DynamicalExponent> {
    Ok(DynamicalExponent::parse(s)?)
}

fn parse_sign(name: &str, s: Option<&str>) -> CliResult<Sign> {
    match s.unwrap_or("+") {
        "+" | "plus" => Ok(Sign::Plus),
        "-" | "minus" => Ok(Sign::Minus),
        v => Err(CliError::invalid(format!("{name} = {v:?}: expected + or -"))),
    }
}

fn parse_half_line(s: Option<&str>) -> CliResult<HalfLine> {
    match s.unwrap_or("x>0") {
        "x>0" | "positive" => Ok(HalfLine::Positive),
        "x<0" | "negative" => Ok(HalfLine::Negative),
        v => Err(CliError::invalid(format!("half_line = {v:?}: expected x>0 or x<0"))),
    }
}

impl SolutionSpec {
    pub fn family(&self) -> CliResult<Family> {
        Family::from_name(&self.family).ok_or_else(|| {
            let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
            CliError::invalid(format!("unknown family {:?}; known: {}", self.family, names.join(", ")))
        })
    }

    /// Names of the parameters that were given.
    pub fn given(&self) -> Vec<&'static str> {
        let flags = [
            ("ell", self.ell.is_some()),
            ("z", self.z.is_some()),
            ("d", self.d.is_some()),
            ("a", self.a.is_some()),
            ("c", self.c.is_some()),
            ("t0", self.t0.is_some()),
            ("gamma", self.gamma.is_some()),
            ("accel", self.accel.is_some()),
            ("n", self.n.is_some()),
            ("c_minus1", self.c_minus1.is_some()),
            ("c_0", self.c_0.is_some()),
            ("c1", self.c1.is_some()),
            ("c2", self.c2.is_some()),
            ("sign", self.sign.is_some()),
            ("sign1", self.sign1.is_some()),
            ("sign2", self.sign2.is_some()),
            ("half_line", self.half_line.is_some()),
            ("eta0", self.eta0.is_some()),
            ("xi0", self.xi0.is_some()),
        ];
        flags.into_iter().filter(|(_, g)| *g).map(|(n, _)| n).collect()
    }

    fn ell(&self) -> CliResult<EllParameter> {
        parse_ell(self.ell.as_deref().ok_or_else(|| CliError::invalid(format!("{} needs --ell", self.family)))?)
    }

    fn scaling(&self) -> CliResult<GcaScalingParams> {
        Ok(GcaScalingParams::new(self.ell()?, self.d.unwrap_or(1), self.a.unwrap_or(0.5), self.c.unwrap_or(0.1))
            .with_t0(self.t0.unwrap_or(0.0)))
    }

    fn viscous(&self) -> CliResult<ViscousParams> {
        Ok(ViscousParams {
            ell: self.ell()?,
            d: self.d.unwrap_or(1),
            a: self.a.unwrap_or(0.5),
            c: self.c.unwrap_or(0.1),
            eta0: self.eta0.unwrap_or(0.0),
            xi0: self.xi0.unwrap_or(0.0),
        })
    }

    /// Builds the solution. Defaults: d = 1, a = 0.5, c = 0.1, t0 = 0,
    /// n = c_minus1 = c_0 = 0, c1 = 1, c2 = 0, signs +, half line x > 0,
    /// eta0 = xi0 = 0. ℓ, z, gamma and accel have no default.
    pub fn build(&self) -> CliResult<FluidSolution> {
        let family = self.family()?;
        let allowed: Vec<&str> = family_info(family).params.iter().map(|p| p.name).collect();
        if let Some(extra) = self.given().into_iter().find(|g| !allowed.contains(g)) {
            return Err(CliError::invalid(format!(
                "{} does not take `{extra}` (parameters: {})",
                family.name(),
                allowed.join(", ")
            )));
        }
        let sol = match family {
            Family::GcaScaling => gca_scaling_solution(self.scaling()?)?,
            Family::GcaQuartic1d => quartic_1d_solution(Quartic1dParams {
                c1: self.c1.unwrap_or(1.0),
                c2: self.c2.unwrap_or(0.0),
                a: self.a.unwrap_or(0.5),
                sign1: parse_sign("sign1", self.sign1.as_deref())?,
                sign2: parse_sign("sign2", self.sign2.as_deref())?,
                half_line: parse_half_line(self.half_line.as_deref())?,
            })?,
            Family::GcaContinuityBranch1d => continuity_branch_1d_solution(ContinuityBranchParams {
                c: self.c.unwrap_or(0.1),
                a: self.a.unwrap_or(0.5),
                sign: parse_sign("sign", self.sign.as_deref())?,
                half_line: parse_half_line(self.half_line.as_deref())?,
            })?,
            Family::GcaAcceleration => acceleration_solution(AccelerationFamilyParams {
                ell: self.ell()?,
                n: self.n.unwrap_or(0),
                c: self.c.unwrap_or(0.1),
                c_minus1: self.c_minus1.unwrap_or(0.0),
                c_0: self.c_0.unwrap_or(0.0),
            })?,
            Family::GcaConformalDeformed => {
                let gamma = self.gamma.ok_or_else(|| CliError::invalid("gca-conformal-deformed needs --gamma"))?;
                conformal_deformed_solution(self.scaling()?, gamma)?
            }
            Family::GcaAccelerationDeformed => {
                let accel =
                    self.accel.clone().ok_or_else(|| CliError::invalid("gca-acceleration-deformed needs --accel"))?;
                acceleration_deformed_solution(self.scaling()?, accel)?
            }
            Family::LifshitzScaling => {
                let z = self.z.as_deref().ok_or_else(|| CliError::invalid("lifshitz needs --z"))?;
                lifshitz_scaling_solution(LifshitzParams {
                    z: parse_z(z)?,
                    d: self.d.unwrap_or(1),
                    a: self.a.unwrap_or(0.5),
                    c: self.c.unwrap_or(0.1),
                })?
            }
            Family::ViscousGcaInteger | Family::ViscousGcaHalfInteger => {
                let p = self.viscous()?;
                let want_integer = family == Family::ViscousGcaInteger;
                if p.ell.is_integer() != want_integer {
                    return Err(CliError::invalid(format!(
                        "{} needs {} ℓ, got ℓ = {}",
                        family.name(),
                        if want_integer { "integer" } else { "half-integer" },
                        p.ell
                    )));
                }
                viscous_solution(p)?
            }
        };
        Ok(sol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scaling_spec() -> SolutionSpec {
        SolutionSpec {
            family: "gca-scaling".into(),
            ell: Some("5/2".into()),
            d: Some(1),
            a: Some(0.5),
            c: Some(0.1),
            ..SolutionSpec::default()
        }
    }

    #[test]
    fn toml_round_trip() {
        let mut cfg = ExperimentConfig::new(CommandKind::Verify);
        cfg.grid = Some("t=2:6:50,x=-10:10:100".into());
        cfg.solution = Some(scaling_spec());
        cfg.tolerance = 1e-6;
        cfg.seed = 42;
        let s = cfg.to_toml().unwrap();
        assert_eq!(ExperimentConfig::from_toml(&s).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ExperimentConfig::from_toml("command = \"verify\"\nbogus = 1\n").is_err());
    }

    #[test]
    fn ell_must_be_exact() {
        assert!(parse_ell("2.5").is_err());
        assert_eq!(parse_ell("5/2").unwrap().doubled(), 5);
        assert_eq!(parse_ell("2").unwrap().doubled(), 4);
        assert!(parse_ell("2/3").is_err());
    }

    #[test]
    fn z_accepts_decimals() {
        assert_eq!(parse_z("0.6").unwrap(), parse_z("3/5").unwrap());
        assert!(parse_z("0.5").is_err());
    }

    #[test]
    fn builds_and_rejects() {
        assert_eq!(scaling_spec().build().unwrap().family, Family::GcaScaling);
        let mut bad = scaling_spec();
        bad.ell = Some("3/2".into());
        assert!(matches!(bad.build(), Err(CliError::Core(cfl_core::Error::InadmissibleEll(_)))));
        let mut extra = scaling_spec();
        extra.z = Some("2".into());
        assert!(extra.build().is_err());
        let viscous = SolutionSpec { family: "viscous-gca-integer".into(), ell: Some("1/2".into()), ..Default::default() };
        assert!(viscous.build().is_err());
    }

    #[test]
    fn stencil_defaults_match_library() {
        assert_eq!(StencilSettings::default().residual_config().unwrap(), ResidualConfig::default());
    }
}
