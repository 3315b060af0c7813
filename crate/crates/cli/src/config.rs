// Copyright 2026 qsdlab Contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration: flat `key=value` text or a JSON object, with
//! typed accessors that reject unknown keys and report line/key diagnostics.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug)]
enum Raw {
    Number(f64),
    Text(String),
}

#[derive(Clone, Debug)]
struct Entry {
    value: Raw,
    line: usize,
    consumed: bool,
}

/// Typed key-value map for one experiment run.
#[derive(Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
}

impl Config {
    /// Parse JSON (when the text starts with `{`) or `key=value` lines;
    /// `#`-prefixed lines and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_lines(text)
        }
    }

    fn parse_json(text: &str) -> Result<Self, ConfigError> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| ConfigError(format!("invalid JSON: {e}")))?;
        let serde_json::Value::Object(map) = value else {
            return Err(ConfigError("JSON config must be an object".into()));
        };
        let mut entries = BTreeMap::new();
        for (key, v) in map {
            let raw = match v {
                serde_json::Value::Number(n) => Raw::Number(
                    n.as_f64().ok_or_else(|| ConfigError(format!("key '{key}': bad number")))?,
                ),
                serde_json::Value::String(s) => Raw::Text(s),
                other => {
                    return Err(ConfigError(format!(
                        "key '{key}': unsupported value {other}"
                    )))
                }
            };
            entries.insert(key, Entry { value: raw, line: 0, consumed: false });
        }
        Ok(Self { entries })
    }

    fn parse_lines(text: &str) -> Result<Self, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| {
                ConfigError(format!("line {lineno}: expected key=value, got {trimmed:?}"))
            })?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(ConfigError(format!("line {lineno}: empty key")));
            }
            let v = value.trim();
            let raw = if let Ok(x) = v.parse::<f64>() {
                Raw::Number(x)
            } else {
                Raw::Text(v.to_string())
            };
            if entries.insert(key.clone(), Entry { value: raw, line: lineno, consumed: false }).is_some()
            {
                return Err(ConfigError(format!("line {lineno}: duplicate key '{key}'")));
            }
        }
        Ok(Self { entries })
    }

    /// Whether a key was supplied (without consuming it).
    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// Force a value (used for the `--seed` flag).
    pub fn set_number(&mut self, key: &str, value: f64) {
        self.entries
            .insert(key.to_string(), Entry { value: Raw::Number(value), line: 0, consumed: false });
    }

    fn take(&mut self, key: &str) -> Option<(Raw, usize)> {
        self.entries.get_mut(key).map(|e| {
            e.consumed = true;
            (e.value.clone(), e.line)
        })
    }

    pub fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((Raw::Number(x), _)) => Ok(x),
            Some((_, line)) => Err(bad_type(key, line, "a number")),
        }
    }

    pub fn usize_or(&mut self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((Raw::Number(x), line)) => {
                if x.fract() != 0.0 || x < 0.0 {
                    Err(ConfigError(format!(
                        "key '{key}'{}: expected a non-negative integer, got {x}",
                        at(line)
                    )))
                } else {
                    Ok(x as usize)
                }
            }
            Some((_, line)) => Err(bad_type(key, line, "an integer")),
        }
    }

    pub fn u64_or(&mut self, key: &str, default: u64) -> Result<u64, ConfigError> {
        Ok(self.usize_or(key, default as usize)? as u64)
    }

    pub fn string_or(&mut self, key: &str, default: &str) -> Result<String, ConfigError> {
        match self.take(key) {
            None => Ok(default.to_string()),
            Some((Raw::Text(s), _)) => Ok(s),
            Some((_, line)) => Err(bad_type(key, line, "a string")),
        }
    }

    /// Reject any key no experiment consumed.
    pub fn finish(self) -> Result<(), ConfigError> {
        let unknown: Vec<String> = self
            .entries
            .iter()
            .filter(|(_, e)| !e.consumed)
            .map(|(k, e)| format!("'{k}'{}", at(e.line)))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(ConfigError(format!("unknown key(s): {}", unknown.join(", "))))
        }
    }
}

fn at(line: usize) -> String {
    if line > 0 { format!(" (line {line})") } else { String::new() }
}

fn bad_type(key: &str, line: usize, want: &str) -> ConfigError {
    ConfigError(format!("key '{key}'{}: expected {want}", at(line)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_value_lines_with_comments() {
        let mut c = Config::parse("# comment\n theta_m = 0.5 \nsteps=32\naxis=x\n").unwrap();
        assert_eq!(c.f64_or("theta_m", 0.0).unwrap(), 0.5);
        assert_eq!(c.usize_or("steps", 0).unwrap(), 32);
        assert_eq!(c.string_or("axis", "z").unwrap(), "x");
        c.finish().unwrap();
    }

    #[test]
    fn parses_json_objects() {
        let mut c = Config::parse(r#"{"theta_m": 0.25, "axis": "y"}"#).unwrap();
        assert_eq!(c.f64_or("theta_m", 0.0).unwrap(), 0.25);
        assert_eq!(c.string_or("axis", "x").unwrap(), "y");
        c.finish().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected_with_line_numbers() {
        let mut c = Config::parse("steps=3\nbogus=1\n").unwrap();
        c.usize_or("steps", 0).unwrap();
        let err = c.finish().unwrap_err();
        assert!(err.0.contains("'bogus' (line 2)"), "{err}");
    }

    #[test]
    fn malformed_lines_name_the_line() {
        let err = Config::parse("steps 3").unwrap_err();
        assert!(err.0.contains("line 1"), "{err}");
    }

    #[test]
    fn type_mismatches_are_reported() {
        let mut c = Config::parse("steps=banana").unwrap();
        let err = c.usize_or("steps", 0).unwrap_err();
        assert!(err.0.contains("'steps'"), "{err}");
    }
}
