use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use serde_json::{json, Value};
use tempfile::NamedTempFile;

use lorenz_core::LorenzError;

/// An error on its way to stderr, with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    kind: &'static str,
    message: String,
    code: u8,
}

impl Failure {
    pub fn validation(message: String) -> Self {
        Failure { kind: "validation", message, code: 2 }
    }

    pub fn usage(err: &clap::Error) -> Self {
        let text = err.to_string();
        let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
        Failure::validation(first.trim_start_matches("error: ").to_string())
    }

    pub fn io(err: io::Error) -> Self {
        Failure { kind: "io", message: err.to_string(), code: 1 }
    }

    pub fn internal(err: impl std::fmt::Display) -> Self {
        Failure { kind: "consistency", message: err.to_string(), code: 3 }
    }

    /// Print as one line of JSON on stderr.
    pub fn report(&self) -> ExitCode {
        let line = json!({ "error": self.kind, "message": self.message, "exit": self.code });
        eprintln!("{line}");
        ExitCode::from(self.code)
    }
}

impl From<LorenzError> for Failure {
    fn from(e: LorenzError) -> Self {
        let kind = match &e {
            LorenzError::Domain(_) => "domain",
            LorenzError::Precondition(_) => "precondition",
            LorenzError::Undefined(_) => "undefined",
            LorenzError::HypothesisNotMet(_) => "hypothesis_not_met",
            LorenzError::Parse(_) => "parse",
            LorenzError::Escape { .. } => "escape",
            LorenzError::Consistency(_) => "consistency",
            LorenzError::Contract(_) => "contract",
        };
        let code = match &e {
            LorenzError::Escape { .. } | LorenzError::Consistency(_) | LorenzError::Contract(_) => 3,
            _ => 2,
        };
        Failure { kind, message: e.to_string(), code }
    }
}

/// Replace `path` by `bytes` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(Failure::io)?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(Failure::io)?;
    tmp.write_all(bytes).map_err(Failure::io)?;
    tmp.as_file().sync_all().map_err(Failure::io)?;
    tmp.persist(path).map_err(|e| Failure::io(e.error))?;
    Ok(())
}

/// Pretty JSON to a file when `out` is given, otherwise to stdout.
pub fn emit_json(doc: &Value, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(doc).map_err(Failure::internal)?;
    text.push('\n');
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
