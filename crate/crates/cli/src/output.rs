//! CSV and JSON emission. Floats are written as the shortest decimal that
//! reads back to the same value, so output is byte-stable.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

pub fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:?}")
    }
}

/// JSON number, with non-finite values spelled as strings.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::String(float(x))
    }
}

/// Serialises with object keys in sorted order.
pub fn canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json::Value keeps objects in a BTreeMap
    let v = serde_json::to_value(value).expect("run parameters serialise");
    serde_json::to_string(&v).expect("JSON values serialise")
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new<P: Serialize>(header: &[&str], params: &P) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        text.push_str("# params: ");
        text.push_str(&canonical_json(params));
        text.push('\n');
        Csv { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    #[cfg(test)]
    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Writes to `path`, or to stdout when no path is given.
    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => fs::write(p, &self.text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
            None => {
                let mut out = io::stdout().lock();
                out.write_all(self.text.as_bytes())
                    .and_then(|_| out.flush())
                    .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
            }
        }
    }
}

pub fn print_json(value: &Value) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    writeln!(out, "{}", serde_json::to_string(value).expect("JSON values serialise"))
        .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
}
