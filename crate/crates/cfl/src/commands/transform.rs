use cfl_core::catalog::{acceleration_deformed_solution, conformal_deformed_solution, SolutionParams};
use cfl_core::kinematics::trace_orbit;
use cfl_core::transform::{apply, covariance_suite, CovarianceReport};
use cfl_core::{FluidSolution, GridSpec, Interval};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::commands::{status_name, Outcome};
use crate::config::{ExperimentConfig, TraceSettings};
use crate::error::{CliError, CliResult, ExitStatus};
use crate::grid::parse_grid;
use crate::output::{fmt_f64, OutputDir};
use crate::pool::Pool;
use crate::transform_spec::{random_specs, TransformSpec};

/// Grid points inside the domain, in grid order.
pub fn domain_points(sol: &FluidSolution, grid: &GridSpec) -> Vec<(f64, Vec<f64>)> {
    let mut pts = Vec::new();
    grid.for_each_point(|t, x| {
        if sol.domain.contains(t, x) {
            pts.push((t, x.to_vec()));
        }
    });
    pts
}

/// (t, x, ρ, v) rows at the in-domain grid points where the solution is
/// defined, and the number of points where it is not.
pub fn sample_rows(sol: &FluidSolution, grid: &GridSpec, pool: &Pool) -> (Vec<String>, Vec<Vec<String>>, usize) {
    let d = sol.dim();
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|i| format!("x{i}")));
    header.push("rho".into());
    header.extend((1..=d).map(|i| format!("v{i}")));
    let pts = domain_points(sol, grid);
    let rows = pool.map(&pts, |(t, x)| {
        sol.sample_row(*t, x).ok().map(|s| {
            let mut row = vec![fmt_f64(*t)];
            row.extend(x.iter().chain(&s).map(|v| fmt_f64(*v)));
            row
        })
    });
    let skipped = rows.iter().filter(|r| r.is_none()).count();
    (header, rows.into_iter().flatten().collect(), skipped)
}

/// The closed form of the image when one is cataloged: the special
/// conformal and acceleration images of the scaling solution.
pub fn closed_form(spec: &TransformSpec, sol: &FluidSolution) -> CliResult<FluidSolution> {
    let SolutionParams::GcaScaling(p) = &sol.params else {
        return Err(CliError::invalid(format!("no closed form for transforms of {}", sol.family.name())));
    };
    if !sol.lineage.is_empty() {
        return Err(CliError::invalid("no closed form for an already transformed solution"));
    }
    match spec {
        TransformSpec::Sl2(s) if s.alpha == 1.0 && s.beta == 0.0 && s.delta == 1.0 => {
            Ok(conformal_deformed_solution(*p, s.gamma)?)
        }
        TransformSpec::Accel(v) => Ok(acceleration_deformed_solution(*p, v.clone())?),
        _ => Err(CliError::invalid("closed forms exist for special conformal (α = δ = 1, β = 0) and acceleration elements only")),
    }
}

/// Largest |a − b|/max(|b|, 1) over ρ and v at the points where both are defined.
pub fn max_deviation(a: &FluidSolution, b: &FluidSolution, grid: &GridSpec, pool: &Pool) -> CliResult<(f64, usize)> {
    let pts = domain_points(a, grid);
    let devs = pool.map(&pts, |(t, x)| -> CliResult<f64> {
        let p = a.sample_row(*t, x)?;
        let q = b.sample_row(*t, x)?;
        Ok(p.iter().zip(&q).fold(0.0f64, |m, (p, q)| m.max((p - q).abs() / q.abs().max(1.0))))
    });
    let mut worst = 0.0f64;
    for d in devs {
        worst = worst.max(d?);
    }
    Ok((worst, pts.len()))
}

/// `b=(0.1,0.1)..(0.1,1.0)` gives ten evenly spaced starts, `...:n` gives
/// n, and `b=(x,y)` a single one.
pub fn parse_starts(s: &str, d: usize) -> CliResult<Vec<Vec<f64>>> {
    let bad = || CliError::invalid(format!("trace {s:?}: expected b=(..)..(..)[:n] or b=(..) with {d} components"));
    let body = s.trim().strip_prefix("b=").unwrap_or(s.trim());
    let (body, count) = match body.rsplit_once(':') {
        Some((b, n)) => (b, n.trim().parse::<usize>().ok().filter(|n| *n >= 1).ok_or_else(bad)?),
        None => (body, 10),
    };
    let vector = |v: &str| -> CliResult<Vec<f64>> {
        let inner = v.trim().strip_prefix('(').and_then(|v| v.strip_suffix(')')).ok_or_else(bad)?;
        let out: Vec<f64> = inner.split(',').map(|c| c.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        if out.len() != d || out.iter().any(|c| !c.is_finite()) {
            return Err(bad());
        }
        Ok(out)
    };
    match body.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (vector(a)?, vector(b)?);
            Ok((0..count)
                .map(|k| {
                    let s = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
                    a.iter().zip(&b).map(|(p, q)| p + (q - p) * s).collect()
                })
                .collect())
        }
        None if count == 10 && !s.contains(':') => Ok(vec![vector(body)?]),
        None => Err(bad()),
    }
}

#[derive(Debug, Serialize)]
struct ClosedFormSummary {
    solution: String,
    points: usize,
    max_deviation: f64,
    tolerance: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct CovarianceRow {
    element: String,
    equation: &'static str,
    base_points: usize,
    image_points: usize,
    base_max_rel: f64,
    image_max_rel: f64,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct OrbitSummary {
    file: String,
    b: Vec<f64>,
    samples: usize,
    exited_at: Option<f64>,
}

#[derive(Debug, Serialize)]
struct TransformSummary {
    solution: String,
    element: String,
    spec: String,
    image: String,
    grid: String,
    samples: usize,
    samples_undefined: usize,
    closed_form: Option<ClosedFormSummary>,
    covariance: Vec<CovarianceRow>,
    orbits: Vec<OrbitSummary>,
    passed: bool,
}

fn covariance_rows(r: &CovarianceReport, element: &str) -> Vec<CovarianceRow> {
    r.checks
        .iter()
        .map(|c| CovarianceRow {
            element: element.to_string(),
            equation: c.base.equation.name(),
            base_points: c.base.norms.count,
            image_points: c.image.norms.count,
            base_max_rel: c.base.relative(),
            image_max_rel: c.image.relative(),
            passed: c.passed,
        })
        .collect()
}

fn write_covariance(out: &mut OutputDir, name: &str, rows: &[CovarianceRow]) -> CliResult<()> {
    out.write_csv(
        name,
        &["element", "equation", "base_points", "image_points", "base_max_rel", "image_max_rel", "passed"],
        rows.iter().map(|r| {
            [
                r.element.clone(),
                r.equation.to_string(),
                r.base_points.to_string(),
                r.image_points.to_string(),
                fmt_f64(r.base_max_rel),
                fmt_f64(r.image_max_rel),
                r.passed.to_string(),
            ]
        }),
    )?;
    Ok(())
}

fn trace(
    out: &mut OutputDir,
    image: &FluidSolution,
    t: &TraceSettings,
    pool: &Pool,
) -> CliResult<Vec<OrbitSummary>> {
    let d = image.dim();
    let starts = parse_starts(&t.starts, d)?;
    let orbits = pool.map(&starts, |b| trace_orbit(image, t.from, b, t.to, t.step));
    let width = starts.len().to_string().len().max(2);
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|i| format!("x{i}")));
    let mut summaries = Vec::new();
    for (k, (b, orbit)) in starts.iter().zip(orbits).enumerate() {
        let orbit = orbit?;
        let file = format!("orbits/orbit_{:0width$}.csv", k + 1);
        out.write_csv(
            &file,
            &header,
            orbit.samples.iter().map(|(t, x)| std::iter::once(t).chain(x).map(|v| fmt_f64(*v)).collect::<Vec<_>>()),
        )?;
        summaries.push(OrbitSummary { file, b: b.clone(), samples: orbit.samples.len(), exited_at: orbit.exited_at });
    }
    Ok(summaries)
}

pub fn run(cfg: &ExperimentConfig, pool: &Pool) -> CliResult<Outcome> {
    let ts = cfg.transform.as_ref().ok_or_else(|| CliError::invalid("no transform settings"))?;
    let sol = cfg.solution()?.build()?;
    let grid = parse_grid(cfg.grid_string()?, sol.dim())?;
    let spec = TransformSpec::parse(&ts.spec)?;
    let window = Interval::new(grid.t.min, grid.t.max);
    let element = spec.element(&sol, window)?;
    let image = apply(&element, &sol)?;
    let mut out = OutputDir::create(&cfg.output.dir)?;

    let (header, base_rows, _) = sample_rows(&sol, &grid, pool);
    out.write_csv("base_samples.csv", &header, base_rows)?;
    let (header, image_rows, undefined) = sample_rows(&image, &grid, pool);
    let samples = image_rows.len();
    out.write_csv("image_samples.csv", &header, image_rows)?;

    let mut passed = true;
    let closed = if ts.check_closed_form {
        let cf = closed_form(&spec, &sol)?;
        let (dev, points) = max_deviation(&image, &cf, &grid, pool)?;
        let ok = points > 0 && dev <= cfg.tolerance;
        passed &= ok;
        Some(ClosedFormSummary { solution: cf.id.clone(), points, max_deviation: dev, tolerance: cfg.tolerance, passed: ok })
    } else {
        None
    };

    let mut covariance = Vec::new();
    if ts.verify || ts.random > 0 {
        let rcfg = cfl_core::residual::ResidualConfig {
            force_fd: true,
            on_domain_exceeded: cfl_core::residual::DomainPolicy::Skip,
            ..cfg.stencil.residual_config()?
        };
        let mut elements = Vec::new();
        if ts.verify {
            elements.push(spec.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        elements.extend(random_specs(&sol, ts.random, window.max, &mut rng));
        let reports = pool.map(&elements, |s| -> CliResult<CovarianceReport> {
            Ok(covariance_suite(&s.element(&sol, window)?, &sol, &grid, &rcfg)?)
        });
        for (s, r) in elements.iter().zip(reports) {
            let r = r?;
            passed &= r.passed();
            covariance.extend(covariance_rows(&r, &s.to_json()));
        }
        write_covariance(&mut out, "covariance.csv", &covariance)?;
    }

    let orbits = match &ts.trace {
        Some(t) => trace(&mut out, &image, t, pool)?,
        None => Vec::new(),
    };

    let summary = TransformSummary {
        solution: sol.id.clone(),
        element: element.to_string(),
        spec: spec.to_json(),
        image: image.id.clone(),
        grid: grid.describe(),
        samples,
        samples_undefined: undefined,
        closed_form: closed,
        covariance,
        orbits,
        passed,
    };
    out.write_json("transform.json", &summary)?;
    let status = if passed { ExitStatus::Pass } else { ExitStatus::ToleranceFailure };
    out.finish(cfg, status_name(status))?;

    let mut text = format!("{}\n  image {} sampled at {} points\n", summary.element, summary.image, samples);
    if let Some(c) = &summary.closed_form {
        text.push_str(&format!(
            "  closed form {}: max deviation {:.3e} over {} points (tolerance {:e}) {}\n",
            c.solution,
            c.max_deviation,
            c.points,
            c.tolerance,
            if c.passed { "ok" } else { "FAIL" }
        ));
    }
    if !summary.covariance.is_empty() {
        let failed = summary.covariance.iter().filter(|r| !r.passed).count();
        let worst = summary
            .covariance
            .iter()
            .map(|r| r.image_max_rel / r.base_max_rel.max(cfl_core::transform::COVARIANCE_FLOOR))
            .fold(0.0f64, f64::max);
        text.push_str(&format!(
            "  covariance: {} checks, {} failed, largest image/base ratio {:.2}\n",
            summary.covariance.len(),
            failed,
            worst
        ));
    }
    if !summary.orbits.is_empty() {
        let exited = summary.orbits.iter().filter(|o| o.exited_at.is_some()).count();
        text.push_str(&format!("  {} orbits written, {} left the domain\n", summary.orbits.len(), exited));
    }
    Ok(Outcome { status, summary: text })
}
