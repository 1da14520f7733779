//! Resolved run configuration: config-file `key = value` lines overlaid by
//! command-line flags, with the origin of every value kept for the output
//! header.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::CliError;

/// Every key accepted in a config file or as a `--flag`.
pub const KEYS: &[&str] = &[
    "axis", "beta", "check", "delta", "delta0", "epsilon", "eta", "format", "g", "k-cut", "lambda", "mode", "mu",
    "n-max", "nu", "output", "potential", "rho-ref", "scale", "side",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Default,
    File,
    Flag,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Default => "default",
            Source::File => "config file",
            Source::Flag => "flag",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Setting {
    pub values: Vec<String>,
    pub source: Source,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    settings: BTreeMap<&'static str, Setting>,
    pub config_file: Option<String>,
}

fn canonical_key(raw: &str) -> Result<&'static str, CliError> {
    let key = raw.trim().replace('_', "-");
    KEYS.iter()
        .find(|k| **k == key)
        .copied()
        .ok_or_else(|| CliError::Usage(format!("unknown configuration key `{}`", raw.trim())))
}

/// Splits comma lists; every entry is trimmed.
fn split_values(raw: &str) -> Vec<String> {
    raw.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

pub fn parse_config_text(text: &str) -> Result<Vec<(&'static str, Vec<String>)>, CliError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`, got {line:?}", lineno + 1)))?;
        let key = canonical_key(key).map_err(|e| CliError::Usage(format!("config line {}: {e}", lineno + 1)))?;
        // The potential spec itself contains commas (`gaussian:a=1,sigma=1`).
        let values = if key == "potential" { vec![value.trim().to_string()] } else { split_values(value) };
        out.push((key, values));
    }
    Ok(out)
}

impl RunConfig {
    /// `flags` are `(key, raw value)` pairs in command-line order; repeated
    /// keys accumulate. Flag values replace file values key by key.
    pub fn resolve(
        command: &'static str,
        flags: Vec<(&'static str, String)>,
        config_file: Option<&Path>,
        defaults: &[(&'static str, &str)],
    ) -> Result<Self, CliError> {
        let mut settings: BTreeMap<&'static str, Setting> = BTreeMap::new();
        for (key, value) in defaults {
            settings.insert(key, Setting { values: vec![value.to_string()], source: Source::Default });
        }
        if let Some(path) = config_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
            for (key, values) in parse_config_text(&text)? {
                settings.insert(key, Setting { values, source: Source::File });
            }
        }
        let mut from_flags: BTreeMap<&'static str, Vec<String>> = BTreeMap::new();
        for (key, raw) in flags {
            let entry = from_flags.entry(key).or_default();
            if key == "potential" {
                entry.push(raw);
            } else {
                entry.extend(split_values(&raw));
            }
        }
        for (key, values) in from_flags {
            if let Some(old) = settings.get(key).filter(|s| s.source == Source::File) {
                eprintln!(
                    "becgap: {key} = {} from flag overrides config file value {}",
                    values.join(","),
                    old.values.join(",")
                );
            }
            settings.insert(key, Setting { values, source: Source::Flag });
        }
        Ok(Self { command, settings, config_file: config_file.map(|p| p.display().to_string()) })
    }

    pub fn has(&self, key: &str) -> bool {
        self.settings.contains_key(key)
    }

    fn values(&self, key: &str) -> Result<&[String], CliError> {
        self.settings
            .get(key)
            .map(|s| s.values.as_slice())
            .ok_or_else(|| CliError::Usage(format!("`{}` needs --{key}", self.command)))
    }

    pub fn string(&self, key: &str) -> Result<&str, CliError> {
        match self.values(key)? {
            [one] => Ok(one),
            many => Err(CliError::Usage(format!("--{key} takes one value, got {}", many.len()))),
        }
    }

    pub fn number(&self, key: &str) -> Result<f64, CliError> {
        parse_number(key, self.string(key)?)
    }

    pub fn optional_number(&self, key: &str) -> Result<Option<f64>, CliError> {
        if self.has(key) { self.number(key).map(Some) } else { Ok(None) }
    }

    pub fn integer(&self, key: &str) -> Result<u64, CliError> {
        let raw = self.string(key)?;
        raw.parse().map_err(|_| CliError::Usage(format!("--{key}: expected a non-negative integer, got `{raw}`")))
    }

    /// Values of a grid key: numbers and `start:stop:step` ranges (inclusive
    /// of `stop` up to rounding), in the given order.
    pub fn grid(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let mut out = Vec::new();
        for raw in self.values(key)? {
            out.extend(parse_range(key, raw)?);
        }
        Ok(out)
    }

    /// `key = value` lines of every resolved setting, in key order.
    pub fn describe(&self) -> Vec<String> {
        let mut lines = vec![format!("command = {}", self.command)];
        if let Some(f) = &self.config_file {
            lines.push(format!("config = {f}"));
        }
        for (key, s) in &self.settings {
            if *key == "output" || *key == "format" {
                continue;
            }
            lines.push(format!("{key} = {} ({})", s.values.join(","), s.source));
        }
        lines
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        map.insert("command".into(), self.command.into());
        for (key, s) in &self.settings {
            if *key == "output" || *key == "format" {
                continue;
            }
            let value = if s.values.len() == 1 { s.values[0].clone().into() } else { s.values.clone().into() };
            map.insert((*key).into(), value);
        }
        serde_json::Value::Object(map)
    }
}

fn parse_number(key: &str, raw: &str) -> Result<f64, CliError> {
    raw.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| !x.is_nan())
        .ok_or_else(|| CliError::Usage(format!("--{key}: not a number: `{raw}`")))
}

fn parse_range(key: &str, raw: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = raw.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(vec![parse_number(key, one)?]),
        [start, stop, step] => {
            let (start, stop, step) = (parse_number(key, start)?, parse_number(key, stop)?, parse_number(key, step)?);
            if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
                return Err(CliError::Usage(format!(
                    "--{key}: range `{raw}` needs start <= stop and a positive step"
                )));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            if count > 1_000_000 {
                return Err(CliError::Usage(format!("--{key}: range `{raw}` has more than 10^6 points")));
            }
            Ok((0..=count).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(CliError::Usage(format!("--{key}: expected a number or start:stop:step, got `{raw}`"))),
    }
}
