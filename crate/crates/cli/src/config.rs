//! Flat key-value experiment configuration.
//!
//! Config files are lines of `key = value` with `#` comments. Every CLI
//! flag overrides its config key. Each command declares its allowed keys,
//! and unknown keys are rejected so typos cannot silently change an
//! experiment. A config plus the code version uniquely determines all
//! outputs.

use std::collections::BTreeMap;
use std::path::Path;
use swcp_core::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!(
                    "config line {}: expected `key = value`, got {raw:?}",
                    lineno + 1
                ))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if values.insert(key.clone(), value).is_some() {
                return Err(Error::Parse(format!(
                    "config line {}: duplicate key {key}",
                    lineno + 1
                )));
            }
        }
        Ok(Config { values })
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    /// Reject keys outside the command's schema.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for key in self.values.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::invalid_parameter(format!(
                    "unknown config key `{key}`; allowed keys: {}",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    /// Canonical `key = value` text of the resolved config, for hashing
    /// and for the manifest. Operational keys (output location, worker
    /// count) are excluded: they cannot influence any result, so the hash
    /// identifies the experiment alone.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.values {
            if k == "out_dir" || k == "workers" {
                continue;
            }
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(v);
            s.push('\n');
        }
        s
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, raw: &str) -> Result<T> {
        raw.parse().map_err(|_| {
            Error::invalid_parameter(format!(
                "config key `{key}`: cannot parse {raw:?} as {}",
                std::any::type_name::<T>()
            ))
        })
    }

    pub fn get_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.values.get(key) {
            Some(raw) => self.parse(key, raw),
            None => Ok(default),
        }
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        let raw = self.values.get(key).ok_or_else(|| {
            Error::invalid_parameter(format!("missing required config key `{key}`"))
        })?;
        self.parse(key, raw)
    }

    pub fn get_u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.values.get(key) {
            Some(raw) => self.parse(key, raw),
            None => Ok(default),
        }
    }

    pub fn get_u32(&self, key: &str, default: u32) -> Result<u32> {
        match self.values.get(key) {
            Some(raw) => self.parse(key, raw),
            None => Ok(default),
        }
    }

    pub fn get_list_u64(&self, key: &str) -> Result<Vec<u64>> {
        match self.values.get(key) {
            None => Ok(Vec::new()),
            Some(raw) => raw
                .split(',')
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(|s| self.parse(key, s))
                .collect(),
        }
    }

    pub fn get_list_f64(&self, key: &str) -> Result<Vec<f64>> {
        match self.values.get(key) {
            None => Ok(Vec::new()),
            Some(raw) => raw
                .split(',')
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(|s| self.parse(key, s))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_values_and_comments() {
        let c = Config::from_str("a = 1\n# comment\n b = 2.5 # trailing\n\n").unwrap();
        assert_eq!(c.get_u64("a", 0).unwrap(), 1);
        assert_eq!(c.get_f64("b", 0.0).unwrap(), 2.5);
        assert_eq!(c.get_u64("missing", 7).unwrap(), 7);
    }

    #[test]
    fn rejects_malformed_and_duplicates() {
        assert!(Config::from_str("just a line").is_err());
        assert!(Config::from_str("a = 1\na = 2").is_err());
    }

    #[test]
    fn canonical_text_is_sorted_and_stable() {
        let c = Config::from_str("zeta = 1\nalpha = 2").unwrap();
        assert_eq!(c.canonical_text(), "alpha = 2\nzeta = 1\n");
    }

    #[test]
    fn canonical_text_skips_operational_keys() {
        let c = Config::from_str("seed = 1\nout_dir = /tmp/x\nworkers = 4").unwrap();
        assert_eq!(c.canonical_text(), "seed = 1\n");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let c = Config::from_str("good = 1\nbad = 2").unwrap();
        assert!(c.check_keys(&["good"]).is_err());
        assert!(c.check_keys(&["good", "bad"]).is_ok());
    }

    #[test]
    fn lists_parse() {
        let c = Config::from_str("xs = 1, 2,3\nys = 0.5,1.5").unwrap();
        assert_eq!(c.get_list_u64("xs").unwrap(), vec![1, 2, 3]);
        assert_eq!(c.get_list_f64("ys").unwrap(), vec![0.5, 1.5]);
        assert!(c.get_list_u64("missing").unwrap().is_empty());
    }
}
