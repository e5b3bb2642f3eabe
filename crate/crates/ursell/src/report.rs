//! Machine-readable reports: JSON with floats at 17 significant digits
//! (enough to round-trip any double), plus instance digests and the
//! error-object shape shared by all commands.

use crate::ExecMode;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::io;

struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        // 1 leading + 16 fractional digits = 17 significant digits.
        write!(writer, "{value:.16e}")
    }
}

/// Serializes a JSON value with every float at 17 significant digits.
/// The caller must not feed non-finite floats; those have no JSON form.
pub fn to_json17(value: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value
        .serialize(&mut ser)
        .expect("JSON value serializes to memory");
    String::from_utf8(out).expect("serializer emits UTF-8")
}

/// SHA-256 of the canonical instance text, hex-encoded. Logically equal
/// instances (same n, values, kind, certificate) share a digest.
pub fn instance_digest(canonical_text: &str) -> String {
    let hash = Sha256::digest(canonical_text.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in hash {
        use std::fmt::Write;
        write!(hex, "{byte:02x}").expect("writing to a String cannot fail");
    }
    hex
}

/// One named verification inside a report.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    /// Tolerance the comparison used, when one applies.
    pub tolerance: Option<f64>,
    /// Named numeric results (finite floats and integers only).
    pub values: Value,
    pub counterexample: Option<Value>,
}

impl Check {
    fn to_value(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "pass": self.pass,
            "values": self.values,
        });
        if let Some(tol) = self.tolerance {
            v["tolerance"] = json!(tol);
        }
        if let Some(ce) = &self.counterexample {
            v["counterexample"] = ce.clone();
        }
        v
    }
}

/// The report every subcommand prints to stdout.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    /// Echo of the resolved parameters.
    pub params: Value,
    pub mode: ExecMode,
    /// Generator name and seed, when randomness was consumed.
    pub rng: Option<(&'static str, u64)>,
    pub instance_digest: Option<String>,
    pub checks: Vec<Check>,
    /// Command-specific payload (bound values, generated path, ...).
    pub result: Option<Value>,
    pub runtime_seconds: f64,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_value(&self) -> Value {
        let mut v = json!({
            "command": self.command,
            "params": self.params,
            "mode": match self.mode {
                ExecMode::Sequential => "sequential",
                ExecMode::Parallel => "parallel",
            },
            "checks": self.checks.iter().map(Check::to_value).collect::<Vec<_>>(),
            "pass": self.pass(),
            "runtime_seconds": self.runtime_seconds,
        });
        if let Some((name, seed)) = self.rng {
            v["rng"] = json!({ "name": name, "seed": seed });
        }
        if let Some(digest) = &self.instance_digest {
            v["instance_digest"] = json!(digest);
        }
        if let Some(result) = &self.result {
            v["result"] = result.clone();
        }
        v
    }

    pub fn to_json(&self) -> String {
        to_json17(&self.to_value())
    }
}

/// The error object printed to stdout when a command cannot produce a
/// report: {"error":{"kind","exit_code","message"}}.
pub fn error_object(kind: &str, exit_code: i32, message: &str) -> String {
    to_json17(&json!({
        "error": { "kind": kind, "exit_code": exit_code, "message": message }
    }))
}
