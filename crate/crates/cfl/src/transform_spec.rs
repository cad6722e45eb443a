//! JSON group elements: `{"sl2": {"gamma": 0.3}}`, `{"accel": [[0, 1], ...]}`,
//! `{"lifshitz": [{"dilatation": 0.2}, {"boost": [0.1]}]}`.

use cfl_core::transform::{AccelerationElement, GroupElement, LifshitzElement, Sl2Element};
use cfl_core::{FluidSolution, Interval, Symmetry};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};


#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TransformSpec {
    Sl2(Sl2Spec),
    Accel(Vec<Vec<f64>>),
    Lifshitz(Vec<LifshitzStep>),
}

fn one() -> f64 {
    1.0
}

/// t′ = (αt + β)/(γt + δ); omitted entries come from the identity. Without a
/// window the transform is defined on the grid's time range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sl2Spec {
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default = "one")]
    pub delta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LifshitzStep {
    TimeTranslation(f64),
    Dilatation(f64),
    SpaceTranslation(Vec<f64>),
    Boost(Vec<f64>),
}

impl TransformSpec {
    pub fn parse(json: &str) -> CliResult<Self> {
        serde_json::from_str(json).map_err(|e| CliError::invalid(format!("transform spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transform specs serialize")
    }

    /// The group element acting on `sol`. `window` is used for SL(2,R)
    /// elements that do not carry their own.
    pub fn element(&self, sol: &FluidSolution, window: Interval) -> CliResult<GroupElement> {
        Ok(match self {
            TransformSpec::Sl2(s) => {
                let element = Sl2Element::new(s.alpha, s.beta, s.gamma, s.delta)?;
                let window = s.window.map_or(window, |[lo, hi]| Interval::new(lo, hi));
                GroupElement::Sl2 { element, window }
            }
            TransformSpec::Accel(vectors) => {
                GroupElement::Acceleration(AccelerationElement::new(sol.symmetry.ell()?, sol.dim(), vectors.clone())?)
            }
            TransformSpec::Lifshitz(steps) => GroupElement::Lifshitz(
                steps
                    .iter()
                    .map(|s| match s {
                        LifshitzStep::TimeTranslation(b) => LifshitzElement::TimeTranslation(*b),
                        LifshitzStep::Dilatation(l) => LifshitzElement::Dilatation(*l),
                        LifshitzStep::SpaceTranslation(a) => LifshitzElement::SpaceTranslation(a.clone()),
                        LifshitzStep::Boost(a) => LifshitzElement::Boost(a.clone()),
                    })
                    .collect(),
            ),
        })
    }

    pub fn is_identity(&self) -> bool {
        match self {
            TransformSpec::Sl2(s) => s.alpha == 1.0 && s.beta == 0.0 && s.gamma == 0.0 && s.delta == 1.0,
            TransformSpec::Accel(v) => v.iter().flatten().all(|c| *c == 0.0),
            TransformSpec::Lifshitz(steps) => steps.iter().all(|s| match s {
                LifshitzStep::TimeTranslation(x) | LifshitzStep::Dilatation(x) => *x == 0.0,
                LifshitzStep::SpaceTranslation(a) | LifshitzStep::Boost(a) => a.iter().all(|c| *c == 0.0),
            }),
        }
    }
}

/// Random elements near the identity suited to `sol`: `count` SL(2,R)
/// elements and `count` accelerations with |a^(n)| < max(1, t_max)^{−n} for
/// Galilei solutions, `count` boost-dilatation-translation products for
/// Lifshitz ones. The bound keeps the shift s(t) of order one up to t_max.
pub fn random_specs(sol: &FluidSolution, count: usize, t_max: f64, rng: &mut impl Rng) -> Vec<TransformSpec> {
    let d = sol.dim();
    let mut out = Vec::with_capacity(2 * count);
    match sol.symmetry {
        Symmetry::Galilei(ell) => {
            for _ in 0..count {
                let alpha = 1.0 + rng.gen_range(-0.1..0.1);
                let beta = rng.gen_range(-0.1..0.1);
                let gamma = rng.gen_range(-0.05..0.05);
                let delta = (1.0 + beta * gamma) / alpha;
                out.push(TransformSpec::Sl2(Sl2Spec { alpha, beta, gamma, delta, window: None }));
            }
            for _ in 0..count {
                let vectors = (0..ell.acceleration_count())
                    .map(|n| {
                        let r: f64 = rng.gen_range(0.0..1.0) / t_max.max(1.0).powi(n as i32);
                        let dir: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
                        dir.iter().map(|v| r * v / norm).collect::<Vec<f64>>()
                    })
                    .collect();
                out.push(TransformSpec::Accel(vectors));
            }
        }
        Symmetry::Lifshitz(_) => {
            for _ in 0..count {
                let v = |rng: &mut dyn rand::RngCore| (0..d).map(|_| rng.gen_range(-0.5..0.5)).collect::<Vec<f64>>();
                out.push(TransformSpec::Lifshitz(vec![
                    LifshitzStep::Dilatation(rng.gen_range(-0.2..0.2)),
                    LifshitzStep::Boost(v(rng)),
                    LifshitzStep::SpaceTranslation(v(rng)),
                ]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_three_forms() {
        let s = TransformSpec::parse(r#"{"sl2": {"gamma": 0.3}}"#).unwrap();
        assert_eq!(s, TransformSpec::Sl2(Sl2Spec { alpha: 1.0, beta: 0.0, gamma: 0.3, delta: 1.0, window: None }));
        let a = TransformSpec::parse(r#"{"accel": [[0, 1], [0.5, -0.5], [-0.5, -0.5]]}"#).unwrap();
        assert!(matches!(a, TransformSpec::Accel(ref v) if v.len() == 3));
        let l = TransformSpec::parse(r#"{"lifshitz": [{"dilatation": 0.2}, {"boost": [0.1, 0]}]}"#).unwrap();
        assert!(matches!(l, TransformSpec::Lifshitz(ref v) if v.len() == 2));
        assert_eq!(TransformSpec::parse(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn rejects_unknown() {
        assert!(TransformSpec::parse(r#"{"rotation": 1}"#).is_err());
        assert!(TransformSpec::parse(r#"{"sl2": {"gama": 0.3}}"#).is_err());
    }

    #[test]
    fn identity_detection() {
        assert!(TransformSpec::parse(r#"{"sl2": {}}"#).unwrap().is_identity());
        assert!(!TransformSpec::parse(r#"{"accel": [[0], [1e-9]]}"#).unwrap().is_identity());
    }
}
