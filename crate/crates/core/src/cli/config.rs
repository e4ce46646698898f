//! Run configuration: defaults, `key = value` config files, environment and
//! flags, in increasing priority.

use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpcore::{pow10, PrecisionContext};
use crate::suite::DEFAULT_SEED;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Parse(format!("format must be json or csv, got '{other}'"))),
        }
    }
}

/// Settings of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub digits: u32,
    pub tail_tolerance: f64,
    pub rel_tolerance: f64,
    pub max_terms: usize,
    pub guard_digits: u32,
    pub format: OutputFormat,
    pub seed: u64,
    pub reproducible: bool,
}

/// Partially specified settings from one source.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverrides {
    pub digits: Option<u32>,
    pub tail_tolerance: Option<f64>,
    pub rel_tolerance: Option<f64>,
    pub max_terms: Option<usize>,
    pub guard_digits: Option<u32>,
    pub format: Option<OutputFormat>,
    pub seed: Option<u64>,
    pub reproducible: Option<bool>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid value '{value}' for '{key}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.trim().to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(Error::Parse(format!("invalid boolean '{value}' for '{key}'"))),
    }
}

impl ConfigOverrides {
    /// Parse `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ConfigOverrides::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", n + 1)))?;
            let key = key.trim().replace('-', "_");
            match key.as_str() {
                "digits" => out.digits = Some(parse_value(&key, value)?),
                "tol" | "tail_tolerance" => out.tail_tolerance = Some(parse_value(&key, value)?),
                "rel_tol" | "rel_tolerance" => out.rel_tolerance = Some(parse_value(&key, value)?),
                "max_terms" => out.max_terms = Some(parse_value(&key, value)?),
                "guard_digits" => out.guard_digits = Some(parse_value(&key, value)?),
                "format" => out.format = Some(value.parse()?),
                "seed" => out.seed = Some(parse_value(&key, value)?),
                "reproducible" => out.reproducible = Some(parse_bool(&key, value)?),
                other => return Err(Error::Parse(format!("config line {}: unknown key '{other}'", n + 1))),
            }
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fields of `self`, falling back to `lower`.
    pub fn or(self, lower: ConfigOverrides) -> Self {
        ConfigOverrides {
            digits: self.digits.or(lower.digits),
            tail_tolerance: self.tail_tolerance.or(lower.tail_tolerance),
            rel_tolerance: self.rel_tolerance.or(lower.rel_tolerance),
            max_terms: self.max_terms.or(lower.max_terms),
            guard_digits: self.guard_digits.or(lower.guard_digits),
            format: self.format.or(lower.format),
            seed: self.seed.or(lower.seed),
            reproducible: self.reproducible.or(lower.reproducible),
        }
    }
}

impl RunConfig {
    /// Fill unset fields with defaults: 50 digits, tolerances
    /// `10^-(digits-10)`, 256 terms, 10 guard digits, JSON.
    pub fn resolve(o: &ConfigOverrides) -> Result<Self> {
        let digits = o.digits.unwrap_or(50);
        let default_tol = pow10(-(digits as i32 - 10));
        let cfg = RunConfig {
            digits,
            tail_tolerance: o.tail_tolerance.unwrap_or(default_tol),
            rel_tolerance: o.rel_tolerance.unwrap_or(default_tol),
            max_terms: o.max_terms.unwrap_or(256),
            guard_digits: o.guard_digits.unwrap_or(10),
            format: o.format.unwrap_or_default(),
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            reproducible: o.reproducible.unwrap_or(false),
        };
        if cfg.guard_digits == 0 {
            return Err(Error::InvalidContext("guard_digits must be >= 1".into()));
        }
        cfg.context().validate()?;
        Ok(cfg)
    }

    pub fn context(&self) -> PrecisionContext {
        PrecisionContext {
            digits: self.digits,
            tail_tolerance: self.tail_tolerance,
            rel_tolerance: self.rel_tolerance,
            max_terms: self.max_terms,
            guard_digits: self.guard_digits,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::resolve(&ConfigOverrides::default()).expect("defaults are valid")
    }
}
