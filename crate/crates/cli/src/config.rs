//! Flat `key = value` configuration files.
//!
//! Keys in the unnamed section apply to every command; a `[verb]` section
//! overrides them for that command. Command-line flags override both, and the
//! `CONSTKIT_SEED` environment variable is consulted only when neither sets a
//! seed.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use ini::Ini;

use crate::CliError;

pub const SEED_ENV: &str = "CONSTKIT_SEED";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path, verb: &str, known: &[&str]) -> Result<Self, CliError> {
        let ini = Ini::load_from_file(path).map_err(|e| match e {
            ini::Error::Io(e) => CliError::Io(format!("{}: {e}", path.display())),
            ini::Error::Parse(e) => CliError::Usage(format!("{}: {e}", path.display())),
        })?;
        let mut values = BTreeMap::new();
        for section in [None, Some(verb)] {
            if let Some(props) = ini.section(section) {
                for (k, v) in props.iter() {
                    let key = k.trim().replace('-', "_");
                    if !known.contains(&key.as_str()) {
                        return Err(CliError::Usage(format!(
                            "{}: unknown key `{k}` for `{verb}`",
                            path.display()
                        )));
                    }
                    values.insert(key, v.trim().to_string());
                }
            }
        }
        Ok(FileConfig { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// `flag`, else the file value parsed, else `default`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.pick_opt(flag, key)?.unwrap_or(default))
    }

    pub fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot parse `{v}`"))),
        }
    }

    /// Seed precedence: flag, file, environment, built-in default.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64, CliError> {
        if let Some(s) = self.pick_opt(flag, "seed")? {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{SEED_ENV}: cannot parse `{v}`"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }
}
