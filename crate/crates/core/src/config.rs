//! Flat key-value run configuration, merged under command-line flags.

use std::path::Path;

use crate::error::{QismError, Result};

/// Turn a flat TOML table into `--key value` arguments. Keys are lowercased
/// and underscores become hyphens (`N` → `--n`, `u_prime` → `--u-prime`);
/// `true` becomes a bare flag and `false` is dropped.
pub fn config_args(text: &str) -> Result<Vec<String>> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
        let line = e.span().map(|s| text[..s.start].lines().count().max(1)).unwrap_or(1);
        QismError::parse(line, e.message().to_string())
    })?;
    let mut out = Vec::new();
    for (key, value) in table {
        let flag = format!("--{}", key.to_ascii_lowercase().replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => out.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => out.extend([flag, s]),
            toml::Value::Integer(i) => out.extend([flag, i.to_string()]),
            toml::Value::Float(x) => out.extend([flag, x.to_string()]),
            other => {
                return Err(QismError::InvalidParameter(format!("config key `{key}` must be a scalar, got {}", other.type_str())));
            }
        }
    }
    Ok(out)
}

pub fn load_config_args(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| QismError::InvalidParameter(format!("cannot read config {}: {e}", path.display())))?;
    config_args(&text)
}
