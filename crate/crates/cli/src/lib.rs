//! Commands behind the `lefschetz` binary.

pub mod repl;
pub mod suite;

use std::fs;
use std::path::Path;

use lefschetz_core::{
    build_a_milnor, build_p_tmj, build_q, build_x, build_y, build_z, certificate_to_json,
    document_kind, fibration_from_json, fibration_to_json, invariant_report, report_to_json,
    search, verify, AbstractLF, CatalogError, Certificate, Mode, Move, SearchBudget,
    SearchOutcome, Verdict, NOT_FOUND,
};
use thiserror::Error;

/// A failed command, carrying its exit status.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, unreadable input or an illegal request: exit 2.
    #[error("{0}")]
    Usage(String),
    /// A well-formed request with a negative answer: exit 1.
    #[error("{0}")]
    Negative(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Negative(_) => 1,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        usage(e.to_string())
    }
}

/// Parameters of a catalog fibration.
#[derive(Debug, Clone, Default)]
pub struct BuildParams {
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub j: Option<usize>,
    pub i: Vec<usize>,
}

fn need(v: Option<usize>, flag: &str, name: &str) -> Result<usize, CliError> {
    v.ok_or_else(|| usage(format!("{name} needs --{flag}")))
}

/// Build a named catalog fibration.
pub fn build_named(name: &str, p: &BuildParams, n: u32) -> Result<AbstractLF, CliError> {
    let f = match name.to_ascii_uppercase().as_str() {
        "X" => build_x(need(p.k, "k", "X")?, n)?,
        "Y" => build_y(need(p.k, "k", "Y")?, n)?,
        "Z" => {
            if p.i.is_empty() {
                return Err(usage("Z needs --i, e.g. --i 2,1"));
            }
            build_z(&p.i, n)?
        }
        "Q" => build_q(need(p.m, "m", "Q")?, n)?,
        "A" => build_a_milnor(need(p.m, "m", "A")?, n)?,
        "P" | "P_TMJ" => build_p_tmj(need(p.m, "m", "P_Tmj")?, need(p.j, "j", "P_Tmj")?, n)?,
        other => return Err(usage(format!("unknown fibration `{other}` (expected X, Y, Z, Q, A or P_Tmj)"))),
    };
    Ok(f)
}

/// Parse a catalog expression such as `X(1)`, `Z(2,1)` or `P_Tmj(5,3)`.
pub fn parse_expression(expr: &str, n: u32) -> Result<AbstractLF, CliError> {
    let expr = expr.trim();
    let (name, rest) = expr
        .split_once('(')
        .ok_or_else(|| usage(format!("`{expr}` is neither a readable file nor an expression like X(1)")))?;
    let args = rest
        .strip_suffix(')')
        .ok_or_else(|| usage(format!("unclosed parenthesis in `{expr}`")))?;
    let nums = args
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().map_err(|_| usage(format!("bad number `{s}` in `{expr}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let arity = |want: usize| {
        if nums.len() == want {
            Ok(())
        } else {
            Err(usage(format!("`{name}` takes {want} argument(s), got {}", nums.len())))
        }
    };
    let mut p = BuildParams::default();
    match name.trim().to_ascii_uppercase().as_str() {
        "X" | "Y" => {
            arity(1)?;
            p.k = Some(nums[0]);
        }
        "Q" | "A" => {
            arity(1)?;
            p.m = Some(nums[0]);
        }
        "P" | "P_TMJ" => {
            arity(2)?;
            p.m = Some(nums[0]);
            p.j = Some(nums[1]);
        }
        "Z" => p.i = nums,
        _ => {}
    }
    build_named(name.trim(), &p, n)
}

/// Read a fibration from a document file, or build it from an expression.
pub fn load_fibration(arg: &str, n: u32) -> Result<AbstractLF, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {arg}: {e}")))?;
        fibration_from_json(&text).map_err(|e| usage(format!("{arg}: {e}")))
    } else {
        parse_expression(arg, n)
    }
}

pub fn load_certificate(path: &str) -> Result<Certificate, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    match document_kind(&text) {
        Ok(k) if k == "certificate" => {}
        Ok(k) => return Err(usage(format!("{path}: expected a certificate document, found {k}"))),
        Err(e) => return Err(usage(format!("{path}: {e}"))),
    }
    lefschetz_core::certificate_from_json(&text).map_err(|e| usage(format!("{path}: {e}")))
}

/// Write to `out`, or return the text for standard output.
pub fn emit(text: String, out: Option<&Path>) -> Result<Option<String>, CliError> {
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

pub fn cmd_invariants(f: &AbstractLF, budget: &SearchBudget) -> String {
    report_to_json(&invariant_report(f, budget))
}

pub fn cmd_apply(f: &AbstractLF, spec: &str, mode: Mode) -> Result<String, CliError> {
    let mv: Move = if spec.trim_start().starts_with('{') {
        serde_json::from_str(spec).map_err(|e| usage(format!("bad move JSON: {e}")))?
    } else {
        spec.parse().map_err(usage)?
    };
    let g = f.apply_move(&mv, mode).map_err(|e| usage(format!("{mv}: {e}")))?;
    Ok(fibration_to_json(&g))
}

pub fn cmd_search(f1: &AbstractLF, f2: &AbstractLF, mode: Mode, budget: &SearchBudget) -> Result<String, CliError> {
    match search(f1, f2, mode, budget).map_err(|e| usage(e.to_string()))? {
        SearchOutcome::Found(c) => Ok(certificate_to_json(&c)),
        SearchOutcome::NotFound { explored } => {
            Err(CliError::Negative(format!("{NOT_FOUND} ({explored} states explored)")))
        }
    }
}

pub fn cmd_verify(c: &Certificate) -> Result<String, CliError> {
    match verify(c) {
        Verdict::Accept => Ok(format!("accept ({} steps, {} mode)\n", c.steps.len(), c.mode)),
        v => Err(CliError::Negative(v.to_string())),
    }
}
