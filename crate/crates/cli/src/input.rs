//! Parsing of parameter tuples, systems and traces.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;

use iis_core::thin::thin_eigen_params;
use iis_core::{ExactField, IISystem, InductionTrace, NumberFieldElement, Rational, SymmetricParams};

use crate::CliError;

/// Parameters over `Q`, or the thin example over `Q(λ)`.
pub enum Params {
    Rational(SymmetricParams<Rational>),
    Thin(SymmetricParams<NumberFieldElement>),
}

/// Runs `$body` with `$p` bound to the concrete parameters.
macro_rules! with_params {
    ($params:expr, $p:ident => $body:expr) => {
        match $params {
            $crate::input::Params::Rational($p) => $body,
            $crate::input::Params::Thin($p) => $body,
        }
    };
}
pub(crate) use with_params;

pub fn parse_params(s: &str) -> Result<Params, CliError> {
    if s.trim() == "thin" {
        return Ok(Params::Thin(thin_eigen_params()));
    }
    s.parse::<SymmetricParams<Rational>>()
        .map(Params::Rational)
        .map_err(|e| CliError::Usage(format!("bad parameters {s:?}: {e}")))
}

pub fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.trim().parse().map_err(|e| CliError::Usage(format!("bad rational {s:?}: {e}")))
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

pub fn read_system(path: &Path) -> Result<IISystem<Rational>, CliError> {
    let v = read_json(path)?;
    let v = v.get("system").cloned().unwrap_or(v);
    serde_json::from_value(v).map_err(|e| CliError::Usage(format!("{}: malformed system: {e}", path.display())))
}

/// A trace file over `Q` or over `Q(λ)`.
pub enum AnyTrace {
    Rational(InductionTrace<Rational>),
    Thin(InductionTrace<NumberFieldElement>),
}

fn typed<F: ExactField + DeserializeOwned>(v: &Value) -> Option<InductionTrace<F>> {
    serde_json::from_value(v.clone()).ok()
}

pub fn read_trace(path: &Path) -> Result<AnyTrace, CliError> {
    let v = read_json(path)?;
    let v = v.get("trace").cloned().unwrap_or(v);
    if let Some(t) = typed::<Rational>(&v) {
        return Ok(AnyTrace::Rational(t));
    }
    if let Some(t) = typed::<NumberFieldElement>(&v) {
        return Ok(AnyTrace::Thin(t));
    }
    Err(CliError::Usage(format!("{}: malformed trace", path.display())))
}
