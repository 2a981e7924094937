use std::collections::BTreeMap;
use std::io::Write;

use palg_core::Error;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Residue {
    Fp,
    FpU,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Structured,
}

/// Echoed into every structured record.
#[derive(Debug, Clone, Serialize)]
pub struct SessionConfig {
    pub p: u64,
    pub m: usize,
    pub residue: Residue,
    pub precision: i64,
    pub format: Format,
    pub seed: u64,
}

/// What a command produced, before formatting.
#[derive(Debug, Default)]
pub struct Outcome {
    pub inputs: BTreeMap<String, String>,
    pub trace: Value,
    pub verdict: String,
    pub evidence: Value,
    pub text: Vec<String>,
    /// Nonzero when the command ran but its check failed.
    pub exit: i32,
}

impl Outcome {
    pub fn new(verdict: impl Into<String>) -> Self {
        Outcome {
            verdict: verdict.into(),
            trace: Value::Array(vec![]),
            evidence: Value::Null,
            ..Default::default()
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }
}

#[derive(Serialize)]
struct Record<'a> {
    config: &'a SessionConfig,
    inputs: &'a BTreeMap<String, String>,
    trace: &'a Value,
    verdict: &'a str,
    evidence: &'a Value,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::HypothesisViolation(_) | Error::HypothesisNotVerified(_) => 2,
        Error::Parse { .. } => 3,
        Error::PrecisionExhausted(_) => 4,
        _ => 1,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::HypothesisViolation(_) => "HypothesisViolation",
        Error::HypothesisNotVerified(_) => "HypothesisNotVerified",
        Error::Parse { .. } => "ParseError",
        Error::PrecisionExhausted(_) => "PrecisionExhausted",
        Error::UnsupportedCase(_) => "UnsupportedCase",
        Error::ShapeMismatch(_) => "ShapeMismatch",
        Error::DegenerateExtension(_) => "DegenerateExtension",
        _ => "Error",
    }
}

/// Writes to stdout; a closed pipe (`palg ... | head`) is not an error.
fn put(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

/// Prints the outcome (or error) and returns the process exit code.
pub fn emit(
    cfg: &SessionConfig,
    inputs: BTreeMap<String, String>,
    result: Result<Outcome, Error>,
) -> i32 {
    match (cfg.format, result) {
        (Format::Text, Ok(out)) => {
            for l in &out.text {
                put(l);
            }
            put(&format!("verdict: {}", out.verdict));
            out.exit
        }
        (Format::Text, Err(e)) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
        (Format::Structured, Ok(out)) => {
            let rec = Record {
                config: cfg,
                inputs: &out.inputs,
                trace: &out.trace,
                verdict: &out.verdict,
                evidence: &out.evidence,
            };
            put(&serde_json::to_string(&rec).expect("serializable record"));
            out.exit
        }
        (Format::Structured, Err(e)) => {
            let evidence = serde_json::json!({ "error": error_kind(&e), "message": e.to_string(), "exit": exit_code(&e) });
            let rec = Record {
                config: cfg,
                inputs: &inputs,
                trace: &Value::Array(vec![]),
                verdict: "error",
                evidence: &evidence,
            };
            put(&serde_json::to_string(&rec).expect("serializable record"));
            exit_code(&e)
        }
    }
}
