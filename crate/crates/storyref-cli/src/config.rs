//! Optional plain-text configuration file, `key=value` per line.
//!
//! Precedence is command-line flag, then config file, then built-in
//! default. Recognized keys: `reference`, `format`, `jobs`, `source-label`,
//! `seed`, `pronoun-lexicon`. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut values = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected key=value", path.display(), idx + 1);
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Flag value if given, else the config value parsed, else the default.
    pub fn resolve<T, F>(&self, flag: Option<T>, key: &str, default: T, parse: F) -> Result<T>
    where
        F: Fn(&str) -> Result<T>,
    {
        if let Some(value) = flag {
            return Ok(value);
        }
        match self.get(key) {
            Some(raw) => parse(raw).with_context(|| format!("config key {key:?}")),
            None => Ok(default),
        }
    }
}
