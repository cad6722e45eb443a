use std::path::PathBuf;
use std::process::ExitCode;

use cfl::commands::{self, catalog, Outcome};
use cfl::config::{AlgebraSettings, FigureSettings, StencilSettings, TraceSettings, TransformSettings};
use cfl::pool::Pool;
use cfl::{CliError, CliResult, CommandKind, ExitStatus, ExperimentConfig, SolutionSpec};
use cfl_core::Family;
use clap::{Args, Parser, Subcommand};

/// Exact perfect-fluid solutions with nonrelativistic conformal symmetry:
/// catalog, residual verification, group transformations and figure data.
///
/// Exit status: 0 pass, 1 tolerance failure, 2 invalid input.
/// CFL_WORKERS sets the worker pool size.
#[derive(Parser)]
#[command(name = "cfl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List solution families and their parameter schemas.
    Catalog {
        /// Show one family in full.
        #[arg(long)]
        family: Option<String>,
        /// Machine-readable manifest.
        #[arg(long)]
        json: bool,
    },
    /// Continuity and Euler residuals of a family on a grid.
    Verify {
        #[command(flatten)]
        solution: SolutionArgs,
        /// e.g. "t=2:6:50,x=-10:10:100" (x1=, x2=, max= also accepted).
        #[arg(long)]
        grid: String,
        /// Largest accepted relative residual.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        stencil: StencilArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply a group element to a family and sample, check or trace the image.
    Transform {
        #[command(flatten)]
        solution: SolutionArgs,
        #[arg(long)]
        grid: String,
        /// {"sl2": {"alpha":..,"beta":..,"gamma":..,"delta":..,"window":[lo,hi]}},
        /// {"accel": [[..], ..]} or {"lifshitz": [{"dilatation": λ}, {"boost": [..]}, ..]}.
        #[arg(long)]
        spec: String,
        /// Compare the image with its cataloged closed form.
        #[arg(long)]
        check_closed_form: bool,
        /// Residuals of the image against the base (covariance).
        #[arg(long)]
        verify: bool,
        /// Also run this many random SL(2,R) and acceleration elements.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Orbit starts: "b=(0.1,0.1)..(0.1,1.0)" (10 points), "...:n" or "b=(x,y)".
        #[arg(long)]
        trace: Option<String>,
        /// Orbit start time (default: grid t minimum).
        #[arg(long)]
        trace_from: Option<f64>,
        /// Orbit end time (default: grid t maximum).
        #[arg(long)]
        trace_to: Option<f64>,
        #[arg(long, default_value_t = 1e-3)]
        trace_step: f64,
        /// Tolerance of the closed-form comparison.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        stencil: StencilArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Regenerate the data behind the figures (all when none is named).
    Figures {
        /// fig1 .. fig5.
        which: Vec<String>,
        #[arg(long, default_value_t = 1e-4)]
        orbit_step: f64,
        /// Quadrature cells per axis for disk masses.
        #[arg(long, default_value_t = 512)]
        cells: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the structure relations of a symmetry algebra exactly.
    Algebra {
        /// gca or lifshitz.
        algebra: String,
        /// ℓ as p/q.
        #[arg(long)]
        ell: Option<String>,
        /// z as p/q or decimal.
        #[arg(long)]
        z: Option<String>,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-run a saved config.toml.
    Run {
        config: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct SolutionArgs {
    #[arg(long)]
    family: String,
    /// ℓ as p/q or an integer.
    #[arg(long)]
    ell: Option<String>,
    /// z as p/q or a decimal.
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Acceleration vectors as JSON, e.g. "[[0,1],[0.5,0],[0,0]]".
    #[arg(long)]
    accel: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    c_minus1: Option<f64>,
    #[arg(long = "c-0", allow_hyphen_values = true)]
    c_0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sign1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    sign2: Option<String>,
    /// x>0 or x<0.
    #[arg(long)]
    half_line: Option<String>,
    #[arg(long)]
    eta0: Option<f64>,
    #[arg(long)]
    xi0: Option<f64>,
}

impl SolutionArgs {
    fn spec(self) -> CliResult<SolutionSpec> {
        let accel = match self.accel {
            Some(s) => Some(serde_json::from_str(&s).map_err(|e| CliError::invalid(format!("--accel: {e}")))?),
            None => None,
        };
        Ok(SolutionSpec {
            family: self.family,
            ell: self.ell,
            z: self.z,
            d: self.d,
            a: self.a,
            c: self.c,
            t0: self.t0,
            gamma: self.gamma,
            accel,
            n: self.n,
            c_minus1: self.c_minus1,
            c_0: self.c_0,
            c1: self.c1,
            c2: self.c2,
            sign: self.sign,
            sign1: self.sign1,
            sign2: self.sign2,
            half_line: self.half_line,
            eta0: self.eta0,
            xi0: self.xi0,
        })
    }
}

#[derive(Args)]
struct StencilArgs {
    /// directional or partial.
    #[arg(long, default_value = "directional")]
    stencil: String,
    /// Base of the finite-difference step schedule.
    #[arg(long)]
    h_base: Option<f64>,
    #[arg(long)]
    no_richardson: bool,
    /// Use nested finite differences even where a closed form exists.
    #[arg(long)]
    force_fd: bool,
    /// Points that also get the finite-difference cross-check.
    #[arg(long)]
    cross_check: Option<usize>,
    /// Drop points whose stencil leaves the domain instead of failing.
    #[arg(long)]
    skip_domain_exceeded: bool,
}

impl StencilArgs {
    fn settings(self) -> StencilSettings {
        let d = StencilSettings::default();
        StencilSettings {
            kind: self.stencil,
            h_base: self.h_base.unwrap_or(d.h_base),
            richardson: !self.no_richardson,
            force_fd: self.force_fd,
            cross_check_points: self.cross_check.unwrap_or(d.cross_check_points),
            on_domain_exceeded: if self.skip_domain_exceeded { "skip".into() } else { d.on_domain_exceeded.clone() },
            ..d
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory (default cfl-out/<command>).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn apply(self, cfg: &mut ExperimentConfig, command: &str) {
        cfg.output.dir = self.out.unwrap_or_else(|| PathBuf::from("cfl-out").join(command));
    }
}

enum Plan {
    Print(String),
    Run(Box<ExperimentConfig>),
}

fn plan(cli: Cli) -> CliResult<Plan> {
    Ok(match cli.command {
        Command::Catalog { family, json } => match (family, json) {
            (Some(name), json) => {
                let f = Family::from_name(&name).ok_or_else(|| CliError::invalid(format!("unknown family {name:?}")))?;
                Plan::Print(if json {
                    serde_json::to_string_pretty(&catalog::entry(f))? + "\n"
                } else {
                    catalog::detail(f)
                })
            }
            (None, true) => Plan::Print(catalog::json()),
            (None, false) => Plan::Print(catalog::listing()),
        },
        Command::Verify { solution, grid, tol, stencil, output } => {
            let mut cfg = ExperimentConfig::new(CommandKind::Verify);
            cfg.solution = Some(solution.spec()?);
            cfg.grid = Some(grid);
            cfg.tolerance = tol;
            cfg.stencil = stencil.settings();
            output.apply(&mut cfg, "verify");
            Plan::Run(Box::new(cfg))
        }
        Command::Transform {
            solution,
            grid,
            spec,
            check_closed_form,
            verify,
            random,
            seed,
            trace,
            trace_from,
            trace_to,
            trace_step,
            tol,
            stencil,
            output,
        } => {
            let g = cfl::grid::parse_grid(&grid, solution.d.unwrap_or(1))?;
            let mut cfg = ExperimentConfig::new(CommandKind::Transform);
            cfg.solution = Some(solution.spec()?);
            cfg.grid = Some(grid);
            cfg.tolerance = tol;
            cfg.seed = seed;
            cfg.stencil = stencil.settings();
            cfg.transform = Some(TransformSettings {
                spec,
                check_closed_form,
                verify,
                random,
                trace: trace.map(|starts| TraceSettings {
                    starts,
                    from: trace_from.unwrap_or(g.t.min),
                    to: trace_to.unwrap_or(g.t.max),
                    step: trace_step,
                }),
            });
            output.apply(&mut cfg, "transform");
            Plan::Run(Box::new(cfg))
        }
        Command::Figures { which, orbit_step, cells, output } => {
            let mut cfg = ExperimentConfig::new(CommandKind::Figures);
            cfg.figures = Some(FigureSettings { which, orbit_step, cells });
            output.apply(&mut cfg, "figures");
            Plan::Run(Box::new(cfg))
        }
        Command::Algebra { algebra, ell, z, d, output } => {
            let mut cfg = ExperimentConfig::new(CommandKind::Algebra);
            cfg.algebra = Some(AlgebraSettings { algebra, ell, z, d });
            output.apply(&mut cfg, "algebra");
            Plan::Run(Box::new(cfg))
        }
        Command::Run { config, output } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(dir) = output.out {
                cfg.output.dir = dir;
            }
            Plan::Run(Box::new(cfg))
        }
    })
}

fn execute(cli: Cli) -> CliResult<Outcome> {
    match plan(cli)? {
        Plan::Print(text) => Ok(Outcome { status: ExitStatus::Pass, summary: text }),
        Plan::Run(cfg) => commands::run(&cfg, &Pool::from_env()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(o) => {
            print!("{}", o.summary);
            ExitCode::from(o.status.code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status().code() as u8)
        }
    }
}
