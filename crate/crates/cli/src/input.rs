//! Reading input files: bytes, JSON, schema, then typed values.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;
use serde_path_to_error::Segment;
use sha2::{Digest, Sha256};

use crate::report::{ErrorKind, Failure, InputDigest};
use crate::schema::{self, Violation};

/// A parsed file together with its digest.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub json: Value,
    pub digest: InputDigest,
}

pub fn read_json(path: &Path) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::new(ErrorKind::Io, format!("{}: {e}", path.display())))?;
    let digest = InputDigest { path: path.display().to_string(), sha256: hex::encode(Sha256::digest(&bytes)) };
    let json = serde_json::from_slice(&bytes).map_err(|e| Failure::new(ErrorKind::Parse, format!("{}: {e}", path.display())))?;
    Ok(Loaded { json, digest })
}

pub fn check_schema(json: &Value, schema_file: &str, path: &str) -> Result<(), Failure> {
    let violations = schema::validate(schema_file, json);
    if violations.is_empty() {
        return Ok(());
    }
    Err(Failure {
        kind: ErrorKind::Schema,
        message: format!("{path}: {} schema violation(s) against {}/{schema_file}", violations.len(), schema::VERSION),
        violations,
    })
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    let mut p = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => p.push_str(&format!("/{index}")),
            Segment::Map { key } => p.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { .. } | Segment::Unknown => {}
        }
    }
    p
}

/// Narrows a pointer using what the library error names: a matrix entry or
/// a context table.
fn refine(base: &str, message: &str) -> String {
    if let Some(rest) = message.strip_prefix("matrix is not Hermitian: entry (") {
        if let Some((r, rest)) = rest.split_once(", ") {
            if let Some((c, _)) = rest.split_once(')') {
                return format!("{base}/matrix/{r}/{c}");
            }
        }
    }
    if let Some(rest) = message.strip_prefix("constraint violated: ") {
        let index = |r: &str| r.split_whitespace().next().unwrap_or("").to_string();
        if rest.starts_with("beta") {
            return format!("{base}/beta");
        }
        if rest.starts_with("temperature") {
            return format!("{base}/temperature");
        }
        if rest.starts_with("weights sum") || rest.starts_with("one weight per") {
            return format!("{base}/weights");
        }
        if let Some(r) = rest.strip_prefix("weight ") {
            return format!("{base}/weights/{}", index(r));
        }
        if let Some(r) = rest.strip_prefix("observable ") {
            return format!("{base}/observables/{}", index(r));
        }
    }
    if message.starts_with("state norm is ") {
        return format!("{base}/amplitudes");
    }
    if let Some(rest) = message.strip_prefix("context ") {
        let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
        let after = &rest[digits.len()..];
        if !digits.is_empty() {
            if after.starts_with(':') && base.is_empty() {
                return format!("/tables/{digits}");
            }
            if base.ends_with("/scenario") || base.is_empty() {
                return format!("{base}/contexts/{digits}");
            }
        }
    }
    base.to_string()
}

/// Typed conversion; library invariant failures come back with a pointer.
pub fn typed<T: DeserializeOwned>(json: &Value, path: &str) -> Result<T, Failure> {
    serde_path_to_error::deserialize(json.clone()).map_err(|e| {
        let message = e.inner().to_string();
        let pointer = refine(&pointer(e.path()), &message);
        Failure {
            kind: ErrorKind::Invariant,
            message: format!("{path}: {message}"),
            violations: vec![Violation { pointer, message }],
        }
    })
}

/// Schema check followed by typed conversion.
pub fn load<T: DeserializeOwned>(path: &Path, schema_file: &str, digests: &mut Vec<InputDigest>) -> Result<(T, Value), Failure> {
    let l = read_json(path)?;
    digests.push(l.digest);
    let shown = path.display().to_string();
    check_schema(&l.json, schema_file, &shown)?;
    let v = typed(&l.json, &shown)?;
    Ok((v, l.json))
}
