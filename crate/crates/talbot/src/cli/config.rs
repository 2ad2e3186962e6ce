//! Flat `key=value` run configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Parameters of one run. Blank lines and lines starting with `#` are
/// ignored; keys are unique.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", i + 1)))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Parse(format!("config line {}: empty key", i + 1)));
            }
            if values.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Parse(format!("config line {}: duplicate key '{k}'", i + 1)));
            }
        }
        Ok(RunConfig { values })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.values.insert(key.to_string(), value.into());
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn parse_value<T: FromStr>(&self, key: &str, v: &str) -> Result<T> {
        v.parse().map_err(|_| Error::Parse(format!("{key} = '{v}' is not a valid value")))
    }

    pub fn required<T: FromStr>(&self, key: &str) -> Result<T> {
        let v = self.get(key).ok_or_else(|| Error::Precondition(format!("missing parameter '{key}'")))?;
        self.parse_value(key, v)
    }

    pub fn optional<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key).map(|v| self.parse_value(key, v)).transpose()
    }

    pub fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.optional(key)?.unwrap_or(default))
    }

    /// Comma-separated list; `a..b` expands to the integers from `a` to `b`.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        let Some(v) = self.get(key) else { return Ok(None) };
        if let Some((a, b)) = v.split_once("..") {
            let (a, b): (i64, i64) = (self.parse_value(key, a.trim())?, self.parse_value(key, b.trim())?);
            return (a..=b).map(|i| self.parse_value(key, &i.to_string())).collect::<Result<_>>().map(Some);
        }
        v.split(',').map(|s| self.parse_value(key, s.trim())).collect::<Result<_>>().map(Some)
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.get(key) {
            None | Some("false") | Some("0") => Ok(false),
            Some("true") | Some("1") | Some("") => Ok(true),
            Some(v) => Err(Error::Parse(format!("{key} = '{v}' is not a boolean"))),
        }
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.values {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_lists() {
        let c = RunConfig::parse("# run\nq = 31\nexps=8..11\nb=0.5, 1\n\n").unwrap();
        assert_eq!(c.required::<u64>("q").unwrap(), 31);
        assert_eq!(c.list::<u32>("exps").unwrap().unwrap(), vec![8, 9, 10, 11]);
        assert_eq!(c.list::<f64>("b").unwrap().unwrap(), vec![0.5, 1.0]);
        assert!(c.required::<u64>("k").is_err());
        assert!(RunConfig::parse("q=1\nq=2").is_err());
        assert!(RunConfig::parse("novalue").is_err());
    }

    proptest! {
        #[test]
        fn text_roundtrip(entries in proptest::collection::btree_map("[a-z][a-z0-9_]{0,8}", "[^\n#=]{0,12}", 0..8)) {
            let mut c = RunConfig::new();
            for (k, v) in &entries {
                c.set(k, v.trim());
            }
            prop_assert_eq!(RunConfig::parse(&c.to_string()).unwrap(), c);
        }
    }
}
