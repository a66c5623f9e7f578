//! Merging of command-line flags, the JSON config file and the environment.
//!
//! Precedence is flag, then file, then environment (threads only), then the
//! built-in default. File keys are the long flag names, e.g. `"budget-events"`.

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use crate::UsageError;

/// Parses a non-negative integer that may be written in scientific notation.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.trim().parse::<u64>() {
        return Ok(v);
    }
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if !(x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= 9_007_199_254_740_992.0) {
        return Err(format!("`{s}` is not a non-negative integer"));
    }
    Ok(x as u64)
}

pub fn parse_real(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if x.is_nan() {
        return Err("NaN is not allowed".into());
    }
    Ok(x)
}

/// Flat JSON object read from `--config`; empty when no file is given.
#[derive(Debug, Default)]
pub struct FileConfig {
    values: Map<String, Value>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, UsageError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        match serde_json::from_str(&text) {
            Ok(Value::Object(values)) => Ok(Self { values }),
            Ok(_) => Err(UsageError("config file must hold a JSON object".into())),
            Err(e) => Err(UsageError(format!("config {}: {e}", path.display()))),
        }
    }

    fn raw(&self, key: &str) -> Option<&Value> {
        self.values
            .get(key)
            .or_else(|| self.values.get(&key.replace('-', "_")))
    }

    fn text(&self, key: &str) -> Result<Option<String>, UsageError> {
        match self.raw(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(Value::Number(n)) => Ok(Some(n.to_string())),
            Some(Value::Bool(b)) => Ok(Some(b.to_string())),
            Some(v) => Err(UsageError(format!(
                "config key `{key}`: unsupported value {v}"
            ))),
        }
    }

    pub fn count(&self, key: &str) -> Result<Option<u64>, UsageError> {
        self.text(key)?
            .map(|s| parse_count(&s).map_err(|e| UsageError(format!("config key `{key}`: {e}"))))
            .transpose()
    }

    pub fn real(&self, key: &str) -> Result<Option<f64>, UsageError> {
        self.text(key)?
            .map(|s| parse_real(&s).map_err(|e| UsageError(format!("config key `{key}`: {e}"))))
            .transpose()
    }

    pub fn string(&self, key: &str) -> Result<Option<String>, UsageError> {
        self.text(key)
    }

    pub fn flag(&self, key: &str) -> Result<Option<bool>, UsageError> {
        match self.raw(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Bool(b)) => Ok(Some(*b)),
            Some(v) => Err(UsageError(format!(
                "config key `{key}`: expected a boolean, got {v}"
            ))),
        }
    }

    pub fn path(&self, key: &str) -> Result<Option<PathBuf>, UsageError> {
        Ok(self.text(key)?.map(PathBuf::from))
    }
}

/// Resolves one setting: the flag wins over the file.
pub fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

pub fn require<T>(value: Option<T>, key: &str) -> Result<T, UsageError> {
    value.ok_or_else(|| UsageError(format!("missing required setting `--{key}`")))
}

/// Worker threads: flag, file, `MWT_THREADS`, else `None` (all cores).
pub fn resolve_threads(
    flag: Option<u64>,
    file: &FileConfig,
    env: Option<String>,
) -> Result<Option<usize>, UsageError> {
    let from_env = env
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_count(&s).map_err(|e| UsageError(format!("MWT_THREADS: {e}"))))
        .transpose()?;
    let threads = pick(flag, file.count("threads")?).or(from_env);
    match threads {
        Some(0) => Err(UsageError("threads must be at least 1".into())),
        t => Ok(t.map(|t| t as usize)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(json: &str) -> FileConfig {
        let Value::Object(values) = serde_json::from_str(json).unwrap() else {
            panic!()
        };
        FileConfig { values }
    }

    #[test]
    fn counts_accept_scientific_notation() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("250"), Ok(250));
        assert_eq!(parse_count("2.5E2"), Ok(250));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
        assert!(parse_count("abc").is_err());
        assert_eq!(parse_real("1e-20"), Ok(1e-20));
    }

    #[test]
    fn file_values_and_precedence() {
        let f = file(r#"{"n": 1e4, "mu": "1e-3", "budget_events": 100, "out": "x.csv"}"#);
        assert_eq!(f.count("n").unwrap(), Some(10_000));
        assert_eq!(f.real("mu").unwrap(), Some(1e-3));
        assert_eq!(f.count("budget-events").unwrap(), Some(100));
        assert_eq!(f.count("m").unwrap(), None);
        assert_eq!(pick(Some(5), f.count("n").unwrap()), Some(5));
        assert_eq!(pick(None, f.count("n").unwrap()), Some(10_000));
    }

    #[test]
    fn thread_precedence() {
        let empty = FileConfig::default();
        let f = file(r#"{"threads": 3}"#);
        assert_eq!(
            resolve_threads(Some(2), &f, Some("7".into())).unwrap(),
            Some(2)
        );
        assert_eq!(
            resolve_threads(None, &f, Some("7".into())).unwrap(),
            Some(3)
        );
        assert_eq!(
            resolve_threads(None, &empty, Some("7".into())).unwrap(),
            Some(7)
        );
        assert_eq!(resolve_threads(None, &empty, None).unwrap(), None);
        assert!(resolve_threads(Some(0), &empty, None).is_err());
        assert!(resolve_threads(None, &empty, Some("x".into())).is_err());
    }
}
