use std::fmt::Write;

use cfl_core::catalog::family_info;
use cfl_core::params::MAX_DOUBLED_ELL;
use cfl_core::{EllParameter, Family};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ParamEntry {
    pub name: &'static str,
    pub kind: &'static str,
    pub constraint: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyEntry {
    pub name: &'static str,
    pub symmetry: &'static str,
    pub velocity: &'static str,
    pub density: &'static str,
    pub domain: &'static str,
    pub params: Vec<ParamEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogManifest {
    pub tool: &'static str,
    pub version: &'static str,
    /// Admissible ℓ up to the supported maximum.
    pub admissible_ell: Vec<String>,
    pub families: Vec<FamilyEntry>,
}

pub fn entry(family: Family) -> FamilyEntry {
    let info = family_info(family);
    FamilyEntry {
        name: family.name(),
        symmetry: info.symmetry,
        velocity: info.velocity,
        density: info.density,
        domain: info.domain,
        params: info.params.iter().map(|p| ParamEntry { name: p.name, kind: p.kind, constraint: p.constraint }).collect(),
    }
}

pub fn admissible_ells() -> Vec<String> {
    (1..=MAX_DOUBLED_ELL)
        .filter_map(|k| EllParameter::from_doubled(k).ok())
        .filter(|l| l.is_admissible())
        .map(|l| l.to_string())
        .collect()
}

pub fn manifest() -> CatalogManifest {
    CatalogManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        admissible_ell: admissible_ells(),
        families: Family::ALL.into_iter().map(entry).collect(),
    }
}

pub fn json() -> String {
    serde_json::to_string_pretty(&manifest()).expect("catalog serializes") + "\n"
}

/// One line per family.
pub fn listing() -> String {
    let mut s = String::new();
    for f in Family::ALL {
        let info = family_info(f);
        let params: Vec<&str> = info.params.iter().map(|p| p.name).collect();
        let _ = writeln!(s, "{:<26} {:<32} v: {}  [{}]", f.name(), info.symmetry, info.velocity, params.join(", "));
    }
    s
}

/// Full schema of one family.
pub fn detail(family: Family) -> String {
    let e = entry(family);
    let mut s = String::new();
    let _ = writeln!(s, "{}", e.name);
    let _ = writeln!(s, "  symmetry: {}", e.symmetry);
    let _ = writeln!(s, "  velocity: {}", e.velocity);
    let _ = writeln!(s, "  density:  {}", e.density);
    let _ = writeln!(s, "  domain:   {}", e.domain);
    let _ = writeln!(s, "  parameters:");
    for p in &e.params {
        let rule = if p.constraint.is_empty() { String::new() } else { format!(": {}", p.constraint) };
        let _ = writeln!(s, "    {:<10} {}{}", p.name, p.kind, rule);
    }
    if e.params.iter().any(|p| p.name == "ell") {
        let _ = writeln!(s, "  admissible ℓ: {}", admissible_ells().join(", "));
    }
    s
}
