//! Flat key=value config files mirroring the command-line flags. A flag
//! given on the command line wins over the same key in the file.

use crate::errors::CliError;
use crate::literals;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    /// Loads `path` if given; an absent flag means an empty config. Lines
    /// are `key=value`, with `#` comments and blank lines skipped. Keys
    /// are the long flag names of the subcommand being run.
    pub fn load(path: Option<&Path>, known_keys: &[&str]) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Run(format!("could not read config {}: {e}", path.display()))
        })?;
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {} is not key=value: {raw:?}",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !known_keys.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config key {key:?} does not match any flag of this subcommand"
                )));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn float(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => literals::parse_float(v)
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key {key}: {e}"))),
        }
    }

    pub fn integer<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                CliError::Usage(format!("config key {key}: not an integer: {v:?}"))
            }),
        }
    }

    pub fn string(&self, key: &str) -> Option<String> {
        self.entries.get(key).cloned()
    }
}

/// The flag value if given, else the config value, else an error naming
/// the missing flag.
pub fn require<T>(flag: Option<T>, from_config: Option<T>, name: &str) -> Result<T, CliError> {
    flag.or(from_config)
        .ok_or_else(|| CliError::Usage(format!("missing required flag --{name}")))
}
