//! Plain-text level files: `#` comments, whitespace-separated reals.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use levelstat_core::{make_spectrum, Spectrum};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LevelFile {
    pub path: PathBuf,
    pub levels: Vec<f64>,
}

impl LevelFile {
    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(make_spectrum(&self.levels, &self.path.display().to_string())?)
    }
}

/// Parses `text` as if read from `path`. Values keep file order.
pub fn parse_levels(text: &str, path: &Path) -> Result<Vec<f64>> {
    let mut levels = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut rest = line;
        let mut offset = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let tail = &rest[start..];
            let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
            let token = &tail[..len];
            let value = token.parse::<f64>().map_err(|_| CliError::Parse {
                path: path.to_path_buf(),
                line: ln + 1,
                column: line[..offset + start].chars().count() + 1,
                token: token.to_string(),
            })?;
            levels.push(value);
            offset += start + len;
            rest = &tail[len..];
        }
    }
    Ok(levels)
}

pub fn parse_level_file(path: impl AsRef<Path>) -> Result<LevelFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let levels = parse_levels(&text, path)?;
    // validates count and finiteness
    make_spectrum(&levels, "")?;
    Ok(LevelFile { path: path.to_path_buf(), levels })
}

/// One level per line at 17 significant digits, which round-trips any f64.
pub fn format_levels(levels: &[f64], header: &[String]) -> String {
    let mut out = String::with_capacity(levels.len() * 26);
    for h in header {
        for line in h.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    for v in levels {
        let _ = writeln!(out, "{v:.16e}");
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}
