use cfl_core::residual::{euler_equation_for, Equation, ResidualConfig, ResidualPlan, ResidualReport};
use cfl_core::{FluidSolution, GridSpec};
use serde::Serialize;

use crate::commands::{status_name, Outcome};
use crate::config::ExperimentConfig;
use crate::error::{CliResult, ExitStatus};
use crate::grid::parse_grid;
use crate::output::{fmt_f64, OutputDir};
use crate::pool::Pool;

/// Residual of one equation with the points spread over the pool. Equal to
/// the sequential library result for any pool size.
pub fn residual_parallel(
    sol: &FluidSolution,
    equation: Equation,
    grid: &GridSpec,
    cfg: &ResidualConfig,
    pool: &Pool,
) -> CliResult<ResidualReport> {
    let plan = ResidualPlan::new(sol, equation, grid, cfg)?;
    let results = pool.map_range(plan.points.len(), |i| plan.evaluate(sol, i, cfg));
    Ok(plan.finish(sol, results, cfg)?)
}

/// Continuity plus the governing Euler equation.
pub fn suite_parallel(
    sol: &FluidSolution,
    grid: &GridSpec,
    cfg: &ResidualConfig,
    pool: &Pool,
) -> CliResult<Vec<ResidualReport>> {
    [Equation::Continuity, euler_equation_for(sol)].into_iter().map(|eq| residual_parallel(sol, eq, grid, cfg, pool)).collect()
}

#[derive(Debug, Serialize)]
pub struct EquationSummary {
    pub equation: &'static str,
    pub path: String,
    pub points: usize,
    pub outside: usize,
    pub stencil_skipped: usize,
    pub max_abs: f64,
    pub rms: f64,
    pub max_rel: f64,
    pub fd_points: usize,
    pub fd_max_rel: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct VerifySummary {
    pub solution: String,
    pub family: &'static str,
    pub grid: String,
    pub tolerance: f64,
    pub passed: bool,
    pub equations: Vec<EquationSummary>,
}

/// A report passes when it evaluated at least one point and its largest
/// relative residual is within `tol`.
pub fn report_passes(r: &ResidualReport, tol: f64) -> bool {
    r.norms.count > 0 && r.relative() <= tol
}

pub fn summarize(r: &ResidualReport, tol: f64) -> EquationSummary {
    EquationSummary {
        equation: r.equation.name(),
        path: format!("{:?}", r.path).to_lowercase(),
        points: r.norms.count,
        outside: r.outside,
        stencil_skipped: r.stencil_skipped,
        max_abs: r.norms.max_abs,
        rms: r.norms.rms,
        max_rel: r.norms.max_rel,
        fd_points: r.fd_norms.map_or(0, |n| n.count),
        fd_max_rel: r.fd_relative(),
        passed: report_passes(r, tol),
    }
}

/// One row per point and equation.
pub fn residual_rows(reports: &[ResidualReport], d: usize) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["equation".to_string(), "t".into()];
    header.extend((1..=d).map(|i| format!("x{i}")));
    header.extend(["max_abs_residual", "scale", "relative", "fd_relative"].map(String::from));
    let mut rows = Vec::new();
    for r in reports {
        for p in &r.points {
            let mut row = vec![r.equation.name().to_string(), fmt_f64(p.t)];
            row.extend(p.x.iter().map(|v| fmt_f64(*v)));
            row.push(fmt_f64(p.max_abs()));
            row.push(fmt_f64(p.scale));
            row.push(fmt_f64(p.relative()));
            let fd = p.fd_residual.as_ref().map(|f| f.iter().fold(0.0f64, |m, v| m.max(v.abs())) / p.scale.max(1e-300));
            row.push(fd.map(fmt_f64).unwrap_or_default());
            rows.push(row);
        }
    }
    (header, rows)
}

pub fn run(cfg: &ExperimentConfig, pool: &Pool) -> CliResult<Outcome> {
    let sol = cfg.solution()?.build()?;
    let grid = parse_grid(cfg.grid_string()?, sol.dim())?;
    let rcfg = cfg.stencil.residual_config()?;
    if cfg.tolerance.is_nan() || cfg.tolerance <= 0.0 {
        return Err(crate::error::CliError::invalid(format!("tolerance {} must be positive", cfg.tolerance)));
    }
    let reports = suite_parallel(&sol, &grid, &rcfg, pool)?;
    let equations: Vec<EquationSummary> = reports.iter().map(|r| summarize(r, cfg.tolerance)).collect();
    let passed = equations.iter().all(|e| e.passed);
    let summary = VerifySummary {
        solution: sol.id.clone(),
        family: sol.family.name(),
        grid: grid.describe(),
        tolerance: cfg.tolerance,
        passed,
        equations,
    };
    let mut out = OutputDir::create(&cfg.output.dir)?;
    let (header, rows) = residual_rows(&reports, sol.dim());
    out.write_csv("residuals.csv", &header, rows)?;
    out.write_json("report.json", &summary)?;
    let status = if passed { ExitStatus::Pass } else { ExitStatus::ToleranceFailure };
    out.finish(cfg, status_name(status))?;
    let mut text = format!("{} on {}\n", summary.solution, summary.grid);
    for e in &summary.equations {
        text.push_str(&format!(
            "  {:<15} {:>6} points  max relative {:.3e}{}  {}\n",
            e.equation,
            e.points,
            e.max_rel,
            e.fd_max_rel.map(|f| format!(" (finite differences {f:.3e})")).unwrap_or_default(),
            if e.passed { "ok" } else { "FAIL" }
        ));
    }
    text.push_str(&format!("tolerance {:e}: {}\n", cfg.tolerance, if passed { "pass" } else { "FAIL" }));
    Ok(Outcome { status, summary: text })
}
