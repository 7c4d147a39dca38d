//! Flat `key = value` configuration files.
//!
//! Lines are `key = value`; `#` starts a comment; lists are written in
//! brackets (`u = [0, 2]`). Scalars stay exact strings until the ground
//! field parses them.

use std::fs;
use std::path::Path;

use thiserror::Error;

use ob_core::ground::{GroundError, Params};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {0}: {1}")]
    Read(String, std::io::Error),
    #[error("config line {0}: expected `key = value`")]
    Syntax(usize),
    #[error("config line {0}: unknown key `{1}`")]
    UnknownKey(usize, String),
    #[error("invalid value for `{0}`: {1}")]
    Value(&'static str, String),
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("level {0} does not match {1} charges in `{2}`")]
    LevelMismatch(usize, usize, &'static str),
    #[error(transparent)]
    Ground(#[from] GroundError),
}

/// Output encoding of reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Run configuration: parameters, limits and output format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub level: usize,
    pub char_p: u64,
    pub u: Vec<String>,
    pub uprime: Vec<String>,
    pub size_limit: usize,
    pub truncation: usize,
    pub output: Format,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            level: 1,
            char_p: 0,
            u: vec!["0".into()],
            uprime: vec!["0".into()],
            size_limit: 8,
            truncation: 4,
            output: Format::Json,
        }
    }
}

fn parse_list(v: &str) -> Vec<String> {
    let inner = v.trim().trim_start_matches('[').trim_end_matches(']');
    inner.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

fn parse_num<T: std::str::FromStr>(key: &'static str, v: &str) -> Result<T, ConfigError> {
    v.trim().parse().map_err(|_| ConfigError::Value(key, v.trim().to_string()))
}

impl Config {
    /// Parses configuration text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut c = Config::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax(n + 1))?;
            c.set(n + 1, key.trim(), value.trim())?;
        }
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|e| ConfigError::Read(path.display().to_string(), e))?;
        Config::parse(&text)
    }

    fn set(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "level" => self.level = parse_num("level", value)?,
            "char" => self.char_p = parse_num("char", value)?,
            "u" => self.u = parse_list(value),
            "uprime" => self.uprime = parse_list(value),
            "size-limit" => self.size_limit = parse_num("size-limit", value)?,
            "truncation" => self.truncation = parse_num("truncation", value)?,
            "output" => {
                self.output = match value {
                    "json" => Format::Json,
                    "csv" => Format::Csv,
                    other => return Err(ConfigError::Value("output", other.to_string())),
                }
            }
            other => return Err(ConfigError::UnknownKey(line, other.to_string())),
        }
        Ok(())
    }

    /// Checks the limits and builds the ground parameters.
    pub fn params(&self) -> Result<Params, ConfigError> {
        if self.level == 0 {
            return Err(ConfigError::NotPositive("level"));
        }
        if self.size_limit == 0 {
            return Err(ConfigError::NotPositive("size-limit"));
        }
        if self.truncation == 0 {
            return Err(ConfigError::NotPositive("truncation"));
        }
        if self.u.len() != self.level {
            return Err(ConfigError::LevelMismatch(self.level, self.u.len(), "u"));
        }
        if self.uprime.len() != self.level {
            return Err(ConfigError::LevelMismatch(self.level, self.uprime.len(), "uprime"));
        }
        let u: Vec<&str> = self.u.iter().map(String::as_str).collect();
        let up: Vec<&str> = self.uprime.iter().map(String::as_str).collect();
        Ok(Params::new(self.level, self.char_p, &u, &up)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let c = Config::parse(
            "# P2\nlevel = 2\nchar = 0\nu = [0, 2]\nuprime = [0, 1]\nsize-limit = 6\ntruncation = 3\noutput = csv\n",
        )
        .unwrap();
        assert_eq!(c.level, 2);
        assert_eq!(c.u, ["0", "2"]);
        assert_eq!(c.uprime, ["0", "1"]);
        assert_eq!(c.size_limit, 6);
        assert_eq!(c.truncation, 3);
        assert_eq!(c.output, Format::Csv);
        assert_eq!(c.params().unwrap().level(), 2);
    }

    #[test]
    fn fractions_stay_exact() {
        let c = Config::parse("uprime = [1/2]").unwrap();
        assert_eq!(c.params().unwrap().uprime()[0].to_string(), "1/2");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Config::parse("level 2"), Err(ConfigError::Syntax(1))));
        assert!(matches!(Config::parse("colour = red"), Err(ConfigError::UnknownKey(1, _))));
        assert!(matches!(Config::parse("level = two"), Err(ConfigError::Value("level", _))));
        let c = Config::parse("level = 2").unwrap();
        assert!(matches!(c.params(), Err(ConfigError::LevelMismatch(2, 1, "u"))));
        assert!(matches!(Config::parse("truncation = 0").unwrap().params(), Err(ConfigError::NotPositive(_))));
    }
}
