//! Plain-text `key = value` configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Keys match the long
//! command-line flags, with `-` and `_` treated alike.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('-', "_")
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| BenchError::Config {
                line: i + 1,
                reason: "expected key=value".into(),
            })?;
            let key = normalize(key);
            if key.is_empty() {
                return Err(BenchError::Config {
                    line: i + 1,
                    reason: "empty key".into(),
                });
            }
            if values
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(BenchError::Config {
                    line: i + 1,
                    reason: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(&normalize(key)).map(String::as_str)
    }

    /// Keys present in the file, for rejecting unknown ones.
    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}
