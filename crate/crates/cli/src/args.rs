//! Strict flag parsing with optional config-file defaults. Every subcommand
//! declares its accepted keys; anything else is a usage error, both on the
//! command line and in the config file. Flags override config values.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

#[derive(Debug)]
pub struct ArgError(pub String);

impl fmt::Display for ArgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parsed key/value flags for one subcommand.
#[derive(Debug)]
pub struct Parsed {
    values: BTreeMap<String, String>,
    /// Keys that were set explicitly (flag or config), for provenance.
    allowed: &'static [&'static str],
}

/// Keys every subcommand understands.
pub const COMMON_KEYS: [&str; 4] = ["output", "format", "config", "cache-dir"];

pub fn parse(argv: &[String], allowed: &'static [&'static str]) -> Result<Parsed, ArgError> {
    let mut from_flags: BTreeMap<String, String> = BTreeMap::new();
    let mut iter = argv.iter().peekable();
    while let Some(arg) = iter.next() {
        let Some(flag) = arg.strip_prefix("--") else {
            return Err(ArgError(format!("unexpected positional argument {arg:?}")));
        };
        let (key, value) = match flag.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let Some(value) = iter.next() else {
                    return Err(ArgError(format!("flag --{flag} is missing its value")));
                };
                (flag.to_string(), value.clone())
            }
        };
        check_key(&key, allowed)?;
        if from_flags.insert(key.clone(), value).is_some() {
            return Err(ArgError(format!("flag --{key} given twice")));
        }
    }
    let mut values = BTreeMap::new();
    if let Some(path) = from_flags.get("config") {
        for (key, value) in read_config(path)? {
            check_key(&key, allowed)?;
            values.insert(key, value);
        }
    }
    values.extend(from_flags);
    Ok(Parsed { values, allowed })
}

fn check_key(key: &str, allowed: &'static [&'static str]) -> Result<(), ArgError> {
    if COMMON_KEYS.contains(&key) || allowed.contains(&key) {
        Ok(())
    } else {
        Err(ArgError(format!("unknown key {key:?}")))
    }
}

/// Flat key = value file; blank lines and # comments ignored.
fn read_config(path: &str) -> Result<Vec<(String, String)>, ArgError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ArgError(format!("cannot read config {path:?}: {e}")))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ArgError(format!(
                "{path}:{}: expected `key = value`, got {line:?}",
                lineno + 1
            )));
        };
        let value = value.trim().trim_matches('"');
        out.push((key.trim().to_string(), value.to_string()));
    }
    Ok(out)
}

impl Parsed {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64, ArgError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| ArgError(format!("--{key}: expected a number, got {raw:?}"))),
        }
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize, ArgError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| ArgError(format!("--{key}: expected an integer, got {raw:?}"))),
        }
    }

    pub fn u64(&self, key: &str, default: u64) -> Result<u64, ArgError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse()
                .map_err(|_| ArgError(format!("--{key}: expected an integer, got {raw:?}"))),
        }
    }

    pub fn string(&self, key: &str, default: &str) -> String {
        self.values
            .get(key)
            .cloned()
            .unwrap_or_else(|| default.to_string())
    }

    /// Cache directory: flag, then the environment default.
    pub fn cache_dir(&self) -> Option<PathBuf> {
        self.values
            .get("cache-dir")
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("WEDGESIM_CACHE_DIR").map(PathBuf::from))
    }

    pub fn allowed_keys(&self) -> &'static [&'static str] {
        self.allowed
    }
}
