//! Deterministic artifact IO: canonical JSON and CSV emission (sorted
//! keys, fixed 17-significant-digit floats) and atomic file writes, so a
//! repeated run with the same configuration produces byte-identical files.

use std::path::{Path, PathBuf};

use serde_json::Value;
use wcslab_core::hardy::{CoeffVector, CoeffVectorFile};

use crate::CliError;

/// Environment variable holding the default directory for relative output
/// paths.
pub const OUT_DIR_ENV: &str = "WCSLAB_OUT_DIR";

/// Relative output paths land under `WCSLAB_OUT_DIR` when it is set.
pub fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// 17 significant digits: enough for exact f64 round trips and stable
/// across runs.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Number for a report field whose value may be unknown (infinite error
/// radii become JSON null).
pub fn json_num(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::Null
    }
}

fn emit(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&fmt_float(n.as_f64().expect("f64 number")));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serialization"))
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                out.push_str("  ");
                emit(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, key) in keys.iter().enumerate() {
                out.push_str(&pad);
                out.push_str("  ");
                out.push_str(&serde_json::to_string(key).expect("key serialization"));
                out.push_str(": ");
                emit(&map[*key], indent + 1, out);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push('}');
        }
    }
}

/// Canonical rendering: sorted object keys, fixed float format, 2-space
/// indentation, trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    emit(value, 0, &mut out);
    out.push('\n');
    out
}

/// Writes via a temporary file in the destination directory plus rename,
/// so readers never observe a partial artifact.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let write = || -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        std::io::Write::write_all(&mut tmp, bytes)?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    };
    write().map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json(path: &Path, value: &Value) -> Result<(), CliError> {
    atomic_write(path, canonical_json(value).as_bytes())
}

/// CSV with a header row and LF line endings; floats use the canonical
/// format.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

pub fn load_vector(path: &Path) -> Result<CoeffVector, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let file: CoeffVectorFile = serde_json::from_str(&text).map_err(|e| {
        CliError::Validation(format!("malformed vector file {}: {e}", path.display()))
    })?;
    file.into_vector()
        .map_err(|e| CliError::Validation(format!("invalid vector file {}: {e}", path.display())))
}

pub fn save_vector(path: &Path, v: &CoeffVector) -> Result<(), CliError> {
    let file = CoeffVectorFile::from_vector(v)
        .map_err(|e| CliError::Runtime(format!("cannot serialize vector: {e}")))?;
    let value = serde_json::to_value(&file).expect("vector file serialization");
    write_json(path, &value)
}
