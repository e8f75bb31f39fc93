//! Ring, regular sequence and module sources, from flags or a job file.

use std::fs;

use torext_core::field_poly::{parse_matrix, parse_polynomial_list, GradedFreeModule, Polynomial, PrimeField, Ring};
use torext_core::fixtures::CompleteIntersection;
use torext_core::resolution::{syzygy_module, ModulePresentation};
use torext_core::AlgebraError;

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleSource {
    /// i-th syzygy of the residue field.
    SyzygyOfK(usize),
    /// The ring itself.
    Ring,
    /// Cokernel of a matrix given by rows.
    Coker(String),
}

/// Everything needed to build the module; fields left `None` take defaults.
#[derive(Clone, Debug, Default)]
pub struct JobSpec {
    pub ring: Option<String>,
    pub f: Option<String>,
    pub module: Option<String>,
}

impl JobSpec {
    /// `ring p=<prime> vars=<list>; f=<poly,...>; module=<kind:args>;`
    pub fn parse_file_form(text: &str) -> Result<JobSpec, CliError> {
        let mut spec = JobSpec::default();
        for stmt in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            if let Some(rest) = stmt.strip_prefix("ring") {
                spec.ring = Some(rest.trim().to_string());
            } else if let Some(rest) = stmt.strip_prefix("f=") {
                spec.f = Some(rest.trim().to_string());
            } else if let Some(rest) = stmt.strip_prefix("module=") {
                spec.module = Some(rest.trim().to_string());
            } else {
                return Err(CliError::Usage(format!("unknown job statement '{stmt}'")));
            }
        }
        Ok(spec)
    }

    /// Flags win over the file.
    pub fn merged(self, over: JobSpec) -> JobSpec {
        JobSpec {
            ring: over.ring.or(self.ring),
            f: over.f.or(self.f),
            module: over.module.or(self.module),
        }
    }
}

/// A parsed ring declaration.
#[derive(Clone, Debug)]
pub struct RingDecl {
    pub ring: Ring,
    pub names: Vec<String>,
}

/// `p=101,x1..x3`, `p=7 vars=a,b,c`, … Names are expanded from `a1..a4`
/// ranges. Defaults: p = 101, variables x1..x3.
pub fn parse_ring(decl: Option<&str>) -> Result<RingDecl, CliError> {
    let mut p = 101u32;
    let mut names: Vec<String> = Vec::new();
    for tok in decl
        .unwrap_or("")
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        if let Some(v) = tok.strip_prefix("p=") {
            p = v
                .parse()
                .map_err(|_| CliError::Usage(format!("bad prime '{v}'")))?;
            continue;
        }
        let tok = tok.strip_prefix("vars=").unwrap_or(tok);
        if tok.is_empty() {
            continue;
        }
        match tok.split_once("..") {
            Some((a, b)) => names.extend(expand_range(a, b)?),
            None => names.push(tok.to_string()),
        }
    }
    if names.is_empty() {
        names = vec!["x1".into(), "x2".into(), "x3".into()];
    }
    for n in &names {
        if !n.chars().next().is_some_and(|c| c.is_alphabetic()) || !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(CliError::Usage(format!("bad variable name '{n}'")));
        }
    }
    let mut sorted = names.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != names.len() {
        return Err(CliError::Usage("repeated variable name".into()));
    }
    let field = PrimeField::new(p).map_err(CliError::Math)?;
    let ring = Ring::new(field, names.len()).map_err(CliError::Math)?;
    Ok(RingDecl { ring, names })
}

fn split_index(s: &str) -> Option<(&str, usize)> {
    let k = s.find(|c: char| c.is_ascii_digit())?;
    let (pre, num) = s.split_at(k);
    Some((pre, num.parse().ok()?))
}

fn expand_range(a: &str, b: &str) -> Result<Vec<String>, CliError> {
    let bad = || CliError::Usage(format!("bad variable range '{a}..{b}'"));
    let (pa, ia) = split_index(a).ok_or_else(bad)?;
    let (pb, ib) = split_index(b).ok_or_else(bad)?;
    if pa != pb || ia > ib {
        return Err(bad());
    }
    Ok((ia..=ib).map(|i| format!("{pa}{i}")).collect())
}

/// The regular sequence; defaults to the cubes of the variables.
pub fn parse_f(rd: &RingDecl, f: Option<&str>) -> Result<Vec<Polynomial>, CliError> {
    let text = match f {
        Some(t) => t.to_string(),
        None => rd.names.iter().map(|n| format!("{n}^3")).collect::<Vec<_>>().join(","),
    };
    parse_polynomial_list(rd.ring, &rd.names, &text).map_err(CliError::Math)
}

pub fn parse_module_source(s: Option<&str>) -> Result<ModuleSource, CliError> {
    let s = s.unwrap_or("syzk:0").trim();
    if s == "ring" {
        return Ok(ModuleSource::Ring);
    }
    let (kind, arg) = s
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("module '{s}' is not of the form kind:args")))?;
    match kind {
        "syzk" => arg
            .trim()
            .parse()
            .map(ModuleSource::SyzygyOfK)
            .map_err(|_| CliError::Usage(format!("bad syzygy index '{arg}'"))),
        "coker" => Ok(ModuleSource::Coker(arg.to_string())),
        "file" => {
            let text = fs::read_to_string(arg.trim())
                .map_err(|e| CliError::Usage(format!("cannot read '{arg}': {e}")))?;
            Ok(ModuleSource::Coker(text.trim().to_string()))
        }
        _ => Err(CliError::Usage(format!("unknown module kind '{kind}'"))),
    }
}

/// A module over R = S/f, or over S when `ci` is `None`.
pub fn build_module(rd: &RingDecl, ci: Option<&CompleteIntersection>, src: &ModuleSource) -> Result<ModulePresentation, CliError> {
    let q = ci.map(|c| c.quotient.clone());
    let m = match src {
        ModuleSource::SyzygyOfK(i) => {
            let k = ModulePresentation::residue_field(rd.ring, q);
            syzygy_module(&k, *i)
        }
        ModuleSource::Ring => ModulePresentation::cokernel_of_rows(rd.ring, q, GradedFreeModule::new(vec![0]), vec![vec![]]),
        ModuleSource::Coker(text) => {
            let rows = parse_matrix(rd.ring, &rd.names, text).map_err(CliError::Math)?;
            if rows.is_empty() {
                return Err(CliError::Usage("empty presentation matrix".into()));
            }
            ModulePresentation::cokernel_of_rows(rd.ring, q, GradedFreeModule::new(vec![0; rows.len()]), rows)
        }
    };
    m.map_err(CliError::Math)
}

pub fn complete_intersection(rd: &RingDecl, f: Vec<Polynomial>) -> Result<CompleteIntersection, CliError> {
    if f.is_empty() {
        return Err(CliError::Math(AlgebraError::InvalidParameter("f is empty".into())));
    }
    CompleteIntersection::new(rd.ring, f).map_err(CliError::Math)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_ranges() {
        let rd = parse_ring(Some("p=7,a1..a4")).unwrap();
        assert_eq!(rd.names, ["a1", "a2", "a3", "a4"]);
        assert_eq!(rd.ring.p(), 7);
        let rd = parse_ring(Some("p=101 vars=a,b,c")).unwrap();
        assert_eq!(rd.names, ["a", "b", "c"]);
        assert!(parse_ring(Some("p=8,x")).is_err());
        assert!(parse_ring(Some("x,x")).is_err());
    }

    #[test]
    fn file_form() {
        let j = JobSpec::parse_file_form("ring p=101 vars=x1,x2,x3; f=x1^3,x2^3,x3^3; module=syzk:2;").unwrap();
        assert_eq!(j.module.as_deref(), Some("syzk:2"));
        assert_eq!(j.ring.as_deref(), Some("p=101 vars=x1,x2,x3"));
        assert!(JobSpec::parse_file_form("bogus").is_err());
    }

    #[test]
    fn module_sources() {
        assert_eq!(parse_module_source(Some("syzk:3")).unwrap(), ModuleSource::SyzygyOfK(3));
        assert_eq!(parse_module_source(Some("ring")).unwrap(), ModuleSource::Ring);
        assert!(parse_module_source(Some("syzk:x")).is_err());
        assert!(parse_module_source(Some("nope:1")).is_err());
    }
}
