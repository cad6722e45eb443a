use cfl_core::catalog::{gca_scaling_solution, lifshitz_scaling_solution, GcaScalingParams, LifshitzParams};
use cfl_core::kinematics::{mass_in_ball, trace_orbit, QuadratureConfig};
use cfl_core::transform::{apply_acceleration, AccelerationElement};
use cfl_core::{DynamicalExponent, EllParameter, FluidSolution, GridAxis, GridSpec};
use serde::Serialize;

use crate::commands::{status_name, Outcome};
use crate::config::{parse_z, ExperimentConfig, FigureSettings};
use crate::error::{CliError, CliResult, ExitStatus};
use crate::output::{fmt_f64, OutputDir};
use crate::pool::Pool;

pub const FIGURES: [&str; 5] = ["fig1", "fig2", "fig3", "fig4", "fig5"];

const A: f64 = 0.5;
const C: f64 = 0.1;
/// Orbits of the singular flows start here instead of at t = 0.
pub const ORBIT_START: f64 = 1e-3;

#[derive(Debug, Serialize)]
pub struct FigureSummary {
    pub figure: String,
    pub parameters: String,
    pub files: Vec<String>,
    /// Times where the two mass curves cross (fig3).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossings: Option<Vec<f64>>,
}

fn ell(doubled: u32) -> EllParameter {
    EllParameter::from_doubled(doubled).expect("figure ℓ is valid")
}

fn label(ell: EllParameter) -> String {
    ell.to_string().replace('/', "_")
}

fn scaling(doubled: u32, d: usize) -> CliResult<FluidSolution> {
    Ok(gca_scaling_solution(GcaScalingParams::new(ell(doubled), d, A, C))?)
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| GridAxis::new(lo, hi, n).value(i)).collect()
}

/// Density surfaces for ℓ = 1/2, 5/2, 9/2, 13/2 over t ∈ [2, 6], x ∈ [−10, 10].
fn fig1(out: &mut OutputDir, pool: &Pool) -> CliResult<FigureSummary> {
    let grid = GridSpec::isotropic(GridAxis::new(2.0, 6.0, 50), GridAxis::new(-10.0, 10.0, 100), 1);
    let mut pts = Vec::new();
    grid.for_each_point(|t, x| pts.push((t, x[0])));
    let mut files = Vec::new();
    for doubled in [1, 5, 9, 13] {
        let sol = scaling(doubled, 1)?;
        let rows = pool.map(&pts, |(t, x)| -> CliResult<[String; 3]> {
            Ok([fmt_f64(*t), fmt_f64(*x), fmt_f64(sol.density(*t, &[*x])?)])
        });
        let rows = rows.into_iter().collect::<CliResult<Vec<_>>>()?;
        let file = format!("fig1/rho_ell_{}.csv", label(ell(doubled)));
        out.write_csv(&file, &["t", "x", "rho"], rows)?;
        files.push(file);
    }
    Ok(FigureSummary {
        figure: "fig1".into(),
        parameters: format!("d=1, a={A}, c={C}, ℓ ∈ {{1/2, 5/2, 9/2, 13/2}}, {}", grid.describe()),
        files,
        crossings: None,
    })
}

/// The ℓ = 1 velocity field on [−1, 1]² at t = 10.
fn fig2(out: &mut OutputDir) -> CliResult<FigureSummary> {
    let sol = scaling(2, 2)?;
    let t = 10.0;
    let axis = linspace(-1.0, 1.0, 21);
    let mut rows = Vec::new();
    for &x1 in &axis {
        for &x2 in &axis {
            let mut v = [0.0; 2];
            sol.velocity(t, &[x1, x2], &mut v)?;
            rows.push([x1, x2, v[0], v[1]].map(fmt_f64));
        }
    }
    let file = "fig2/velocity.csv".to_string();
    out.write_csv(&file, &["x1", "x2", "v1", "v2"], rows)?;
    Ok(FigureSummary {
        figure: "fig2".into(),
        parameters: "ℓ=1, d=2, t=10, x ∈ [-1,1]², 21×21 points".into(),
        files: vec![file],
        crossings: None,
    })
}

fn mass_curve(sol: &FluidSolution, times: &[f64], cells: usize, pool: &Pool) -> CliResult<Vec<f64>> {
    let q = QuadratureConfig { cells };
    let center = vec![0.0; sol.dim()];
    pool.map(times, |t| mass_in_ball(sol, &center, 1.0, *t, &q)).into_iter().map(|m| m.map_err(CliError::from)).collect()
}

fn write_mass(out: &mut OutputDir, file: &str, times: &[f64], mass: &[f64]) -> CliResult<()> {
    out.write_csv(file, &["t", "mass"], times.iter().zip(mass).map(|(t, m)| [fmt_f64(*t), fmt_f64(*m)]))?;
    Ok(())
}

/// Sign changes of a − b, located by linear interpolation.
pub fn crossings(times: &[f64], a: &[f64], b: &[f64]) -> Vec<f64> {
    let diff: Vec<f64> = a.iter().zip(b).map(|(p, q)| p - q).collect();
    let mut out = Vec::new();
    for i in 1..diff.len() {
        let (d0, d1) = (diff[i - 1], diff[i]);
        if d0 == 0.0 {
            out.push(times[i - 1]);
        } else if d0 * d1 < 0.0 {
            out.push(times[i - 1] + (times[i] - times[i - 1]) * d0 / (d0 - d1));
        }
    }
    out
}

/// Unit-disk mass for ℓ = 1/2 and 5/2 in d = 2, t ∈ [0.8, 3].
fn fig3(out: &mut OutputDir, s: &FigureSettings, pool: &Pool) -> CliResult<FigureSummary> {
    let times = linspace(0.8, 3.0, 111);
    let mut files = Vec::new();
    let mut curves = Vec::new();
    for doubled in [1, 5] {
        let mass = mass_curve(&scaling(doubled, 2)?, &times, s.cells, pool)?;
        let file = format!("fig3/mass_ell_{}.csv", label(ell(doubled)));
        write_mass(out, &file, &times, &mass)?;
        files.push(file);
        curves.push(mass);
    }
    Ok(FigureSummary {
        figure: "fig3".into(),
        parameters: format!("d=2, a={A}, c={C}, unit disk, t ∈ [0.8, 3] (111 points), {} cells per axis", s.cells),
        files,
        crossings: Some(crossings(&times, &curves[0], &curves[1])),
    })
}

/// Orbits of the ℓ = 1, d = 2 flow, plain and deformed by the acceleration
/// triple a^(0) = (0, 1) rotated clockwise by 2π/3 twice. An orbit labelled b
/// leaves s(0) = a^(0) with velocity b, so it starts at t_s from
/// s(t_s) + (b − a^(1))t_s; the plain orbits start from b·t_s.
fn fig4(out: &mut OutputDir, s: &FigureSettings, pool: &Pool) -> CliResult<FigureSummary> {
    let s3 = 3f64.sqrt();
    let accel = vec![vec![0.0, 1.0], vec![s3 / 2.0, -0.5], vec![-s3 / 2.0, -0.5]];
    let base = scaling(2, 2)?;
    let deformed = apply_acceleration(&AccelerationElement::new(ell(2), 2, accel.clone())?, &base)?;
    let shift = |t: f64, i: usize| accel[0][i] + accel[1][i] * t + accel[2][i] * t * t;
    let labels: Vec<[f64; 2]> = (1..=10).map(|k| [0.1, 0.1 * k as f64]).collect();
    let t_s = ORBIT_START;
    let mut files = Vec::new();
    for (name, sol) in [("undeformed", &base), ("deformed", &deformed)] {
        let orbits = pool.map(&labels, |b| {
            let start: Vec<f64> = if name == "deformed" {
                (0..2).map(|i| shift(t_s, i) + (b[i] - accel[1][i]) * t_s).collect()
            } else {
                b.iter().map(|v| v * t_s).collect()
            };
            trace_orbit(sol, t_s, &start, 1.0, s.orbit_step)
        });
        for (k, orbit) in orbits.into_iter().enumerate() {
            let orbit = orbit?;
            let file = format!("fig4/{name}_b_{:02}.csv", k + 1);
            out.write_csv(
                &file,
                &["t", "x1", "x2"],
                orbit.samples.iter().map(|(t, x)| [fmt_f64(*t), fmt_f64(x[0]), fmt_f64(x[1])]),
            )?;
            files.push(file);
        }
    }
    Ok(FigureSummary {
        figure: "fig4".into(),
        parameters: format!(
            "ℓ=1, d=2, b = (0.1, 0.1k) for k = 1..10, t ∈ [{t_s}, 1], step {}, a = [(0,1), (√3/2,−1/2), (−√3/2,−1/2)]",
            s.orbit_step
        ),
        files,
        crossings: None,
    })
}

/// Unit-disk mass of the Lifshitz solution for z = 0.6, 0.7, 0.8 in d = 2, t ∈ [0.1, 10].
fn fig5(out: &mut OutputDir, s: &FigureSettings, pool: &Pool) -> CliResult<FigureSummary> {
    let times = linspace(0.1, 10.0, 100);
    let mut files = Vec::new();
    for z in ["0.6", "0.7", "0.8"] {
        let zz: DynamicalExponent = parse_z(z)?;
        let sol = lifshitz_scaling_solution(LifshitzParams { z: zz, d: 2, a: A, c: C })?;
        let mass = mass_curve(&sol, &times, s.cells, pool)?;
        let file = format!("fig5/mass_z_{z}.csv");
        write_mass(out, &file, &times, &mass)?;
        files.push(file);
    }
    Ok(FigureSummary {
        figure: "fig5".into(),
        parameters: format!("d=2, a={A}, c={C}, unit disk, t ∈ [0.1, 10] (100 points), {} cells per axis", s.cells),
        files,
        crossings: None,
    })
}

pub fn run(cfg: &ExperimentConfig, pool: &Pool) -> CliResult<Outcome> {
    let s = cfg.figures.clone().unwrap_or_default();
    let which: Vec<&str> = if s.which.is_empty() { FIGURES.to_vec() } else { s.which.iter().map(String::as_str).collect() };
    if let Some(w) = which.iter().find(|w| !FIGURES.contains(w)) {
        return Err(CliError::invalid(format!("unknown figure {w:?}: expected one of {}", FIGURES.join(", "))));
    }
    if !(s.orbit_step > 0.0 && s.orbit_step < 1.0) || s.cells < 4 {
        return Err(CliError::invalid("orbit_step must lie in (0, 1) and cells must be at least 4"));
    }
    let mut out = OutputDir::create(&cfg.output.dir)?;
    let mut summaries = Vec::new();
    for w in which {
        summaries.push(match w {
            "fig1" => fig1(&mut out, pool)?,
            "fig2" => fig2(&mut out)?,
            "fig3" => fig3(&mut out, &s, pool)?,
            "fig4" => fig4(&mut out, &s, pool)?,
            _ => fig5(&mut out, &s, pool)?,
        });
    }
    out.write_json("figures.json", &summaries)?;
    out.finish(cfg, status_name(ExitStatus::Pass))?;
    let mut text = String::new();
    for f in &summaries {
        text.push_str(&format!("{}: {} files ({})\n", f.figure, f.files.len(), f.parameters));
        if let Some(c) = &f.crossings {
            let ts: Vec<String> = c.iter().map(|t| format!("{t:.4}")).collect();
            text.push_str(&format!("  curves cross {} time(s) at t = [{}]\n", c.len(), ts.join(", ")));
        }
    }
    Ok(Outcome { status: ExitStatus::Pass, summary: text })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_location() {
        let t = [0.0, 1.0, 2.0, 3.0];
        let c = crossings(&t, &[2.0, 1.0, 0.0, -1.0], &[0.0, 0.0, 0.5, 0.5]);
        assert_eq!(c.len(), 1);
        assert!((c[0] - 1.0 - 2.0 / 3.0).abs() < 1e-12);
        assert!(crossings(&t, &[1.0; 4], &[0.0; 4]).is_empty());
    }
}
