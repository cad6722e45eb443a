use cfl_core::algebra::{verify_structure_relations, AlgebraParams};
use serde::Serialize;

use crate::commands::{status_name, Outcome};
use crate::config::{parse_ell, parse_z, AlgebraSettings, ExperimentConfig};
use crate::error::{CliError, CliResult, ExitStatus};
use crate::output::OutputDir;

#[derive(Debug, Serialize)]
struct AlgebraSummary {
    algebra: String,
    d: usize,
    generators: Vec<String>,
    relations: usize,
    mismatches: usize,
    antisymmetry_failures: Vec<String>,
    jacobi_triples: usize,
    jacobi_failures: Vec<String>,
    exact: bool,
}

pub fn params(s: &AlgebraSettings) -> CliResult<AlgebraParams> {
    match s.algebra.as_str() {
        "gca" | "galilei" => {
            if s.z.is_some() {
                return Err(CliError::invalid("the conformal Galilei algebra takes --ell, not --z"));
            }
            let ell = s.ell.as_deref().ok_or_else(|| CliError::invalid("gca needs --ell"))?;
            Ok(AlgebraParams::Galilei(parse_ell(ell)?))
        }
        "lifshitz" => {
            if s.ell.is_some() {
                return Err(CliError::invalid("the Lifshitz algebra takes --z, not --ell"));
            }
            let z = s.z.as_deref().ok_or_else(|| CliError::invalid("lifshitz needs --z"))?;
            Ok(AlgebraParams::Lifshitz(parse_z(z)?))
        }
        a => Err(CliError::invalid(format!("unknown algebra {a:?}: expected gca or lifshitz"))),
    }
}

pub fn run(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let s = cfg.algebra.as_ref().ok_or_else(|| CliError::invalid("no algebra settings"))?;
    let params = params(s)?;
    let report = verify_structure_relations(params, s.d)?;
    let mut out = OutputDir::create(&cfg.output.dir)?;
    out.write_csv(
        "relations.csv",
        &["relation", "computed", "expected", "matches"],
        report.relations.iter().map(|r| [r.relation.clone(), r.lhs.clone(), r.rhs.clone(), r.matches.to_string()]),
    )?;
    let exact = report.all_hold();
    let summary = AlgebraSummary {
        algebra: params.to_string(),
        d: s.d,
        generators: report.generators.clone(),
        relations: report.relations.len(),
        mismatches: report.mismatches().count(),
        antisymmetry_failures: report.antisymmetry_failures.clone(),
        jacobi_triples: report.jacobi_triples,
        jacobi_failures: report.jacobi_failures.clone(),
        exact,
    };
    out.write_json("algebra.json", &summary)?;
    let status = if exact { ExitStatus::Pass } else { ExitStatus::ToleranceFailure };
    out.finish(cfg, status_name(status))?;
    let mut text = format!(
        "{params}, d = {}: {} generators, {} relations, {} Jacobi triples: {}\n",
        s.d,
        report.generators.len(),
        report.relations.len(),
        report.jacobi_triples,
        if exact { "all exact" } else { "MISMATCH" }
    );
    for r in report.mismatches() {
        text.push_str(&format!("  {}: computed {} expected {}\n", r.relation, r.lhs, r.rhs));
    }
    for f in report.antisymmetry_failures.iter().chain(&report.jacobi_failures) {
        text.push_str(&format!("  {f}\n"));
    }
    Ok(Outcome { status, summary: text })
}
