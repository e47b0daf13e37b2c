//! `key = value` configuration files. Keys are long flag names without the
//! leading dashes; a key may repeat for multi-valued flags. Lines starting
//! with `#` are comments.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{anyhow, Context};

use crate::{Failure, EXIT_IO, EXIT_USAGE};

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, Failure> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::new(
                EXIT_USAGE,
                anyhow!("config line {}: expected key=value, got {line:?}", n + 1),
            )
        })?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(Failure::new(
                EXIT_USAGE,
                anyhow!("config line {}: invalid key {key:?}", n + 1),
            ));
        }
        out.push((key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn flag_given(argv: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let with_value = format!("--{key}=");
    argv.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&with_value)
    })
}

/// Appends `--key=value` for every config entry whose flag is absent from
/// `argv`, so command-line flags win over the file.
pub fn apply_config_file(argv: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .map_err(|e| Failure::new(EXIT_IO, e))?;
    let entries = parse_config(&text)?;
    log::info!("loaded {} entries from {}", entries.len(), path.display());
    let mut out = argv.clone();
    for (key, value) in entries {
        if !flag_given(&argv, &key) {
            out.push(format!("--{key}={value}").into());
        }
    }
    Ok(out)
}
