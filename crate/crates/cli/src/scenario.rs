//! Scenario files: a JSON object with `kind`, `parameters` and `output`.
//!
//! Parameters are the flags of the matching subcommand, written without
//! the leading dashes (`rho_minus` and `rho-minus` are both accepted).
//! They are turned back into an argument list so a scenario is validated
//! exactly like the equivalent command line. A `riemann` scenario picks its
//! analysis with the optional `analysis` parameter.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{Map, Value};

use crate::commands::Failure;
use crate::report::Format;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    kind: Kind,
    parameters: Map<String, Value>,
    #[serde(default)]
    output: Output,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Riemann,
    Oscillator,
    Aw,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Output {
    format: Option<Format>,
    /// Relative paths are taken from the scenario file's directory.
    path: Option<PathBuf>,
}

#[derive(Debug)]
pub struct Invocation {
    pub args: Vec<String>,
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
}

const ANALYSES: &[&str] = &["riemann", "laap", "subsolution", "compare", "sweep"];

pub fn load(path: &Path) -> Result<Invocation, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: ScenarioFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let mut inv = parse(file)?;
    if let Some(out) = &inv.output {
        if out.is_relative() {
            inv.output = Some(path.parent().unwrap_or(Path::new("")).join(out));
        }
    }
    Ok(inv)
}

fn parse(file: ScenarioFile) -> Result<Invocation, Failure> {
    let mut params = file.parameters;
    let subcommand = match file.kind {
        Kind::Riemann => match params.remove("analysis") {
            None => "riemann".to_string(),
            Some(Value::String(a)) if ANALYSES.contains(&a.as_str()) => a,
            Some(other) => {
                return Err(Failure::Input(format!("analysis must be one of {ANALYSES:?}, got {other}")))
            }
        },
        Kind::Oscillator => "oscillator".to_string(),
        Kind::Aw => "aw".to_string(),
    };
    let mut args = vec!["laap-lab".to_string(), subcommand];
    // Keys come out sorted, which keeps the argument list deterministic.
    for (key, value) in params {
        let flag = key.replace('_', "-");
        let valid = !flag.starts_with('-') && flag.chars().all(|c| c.is_ascii_alphanumeric() || c == '-');
        if !valid || flag == "format" || flag == "output" {
            return Err(Failure::Input(format!("unknown parameter `{key}`")));
        }
        let flag = format!("--{flag}");
        match value {
            Value::Bool(true) => args.push(flag),
            Value::Bool(false) => {}
            Value::Number(n) => args.extend([flag, n.to_string()]),
            Value::String(s) => args.extend([flag, s]),
            Value::Array(items) => {
                let parts = items
                    .iter()
                    .map(|v| match v {
                        Value::Number(n) => Ok(n.to_string()),
                        _ => Err(Failure::Input(format!("`{key}` must be a list of numbers"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                args.extend([flag, parts.join(",")]);
            }
            Value::Null | Value::Object(_) => {
                return Err(Failure::Input(format!("`{key}` must be a number, string, boolean or list")))
            }
        }
    }
    Ok(Invocation { args, format: file.output.format, output: file.output.path })
}
