//! Input hashing, the provenance envelope, and atomic output.

use std::io::Write;
use std::path::{Path, PathBuf};

use abstorus::format::{parse_json, FormatError};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub struct Session {
    command: String,
    inputs: Vec<Value>,
    flags: Map<String, Value>,
}

impl Session {
    pub fn new(command: &str) -> Self {
        Session { command: command.to_string(), inputs: Vec::new(), flags: Map::new() }
    }

    pub fn flag(&mut self, name: &str, value: impl Into<Value>) {
        self.flags.insert(name.to_string(), value.into());
    }

    pub fn read_text(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|err| CliError::Io { path: path.display().to_string(), err })?;
        self.inputs.push(json!({
            "path": path.display().to_string(),
            "sha256": hex::encode(Sha256::digest(&bytes)),
        }));
        String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{}: not valid UTF-8", path.display())))
    }

    /// Reads a JSON input; an abstorus output envelope is unwrapped to its result.
    pub fn read_json(&mut self, path: &Path) -> Result<Value, CliError> {
        let text = self.read_text(path)?;
        let v = parse_json(&text).map_err(|e| match e {
            FormatError::Syntax { line, col, message } => {
                FormatError::Syntax { line, col, message: format!("{}: {message}", path.display()) }
            }
            other => other,
        })?;
        Ok(unwrap_envelope(v))
    }

    pub fn envelope(&self, result: Value) -> Value {
        json!({
            "provenance": {
                "tool": "abstorus",
                "version": env!("CARGO_PKG_VERSION"),
                "command": self.command,
                "inputs": self.inputs,
                "flags": self.flags,
            },
            "result": result,
        })
    }
}

pub fn unwrap_envelope(v: Value) -> Value {
    match v {
        Value::Object(mut o) if o.contains_key("provenance") && o.contains_key("result") => {
            o.remove("result").expect("checked")
        }
        other => other,
    }
}

/// Writes `text` to `path` through a temporary file in the same directory, or to stdout.
pub fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|err| CliError::Io { path: "<stdout>".into(), err })
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            };
            let io_err = |err| CliError::Io { path: path.display().to_string(), err };
            let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io_err)?;
            tmp.write_all(text.as_bytes()).map_err(io_err)?;
            tmp.as_file().sync_all().map_err(io_err)?;
            tmp.persist(path).map_err(|e| io_err(e.error))?;
            Ok(())
        }
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
