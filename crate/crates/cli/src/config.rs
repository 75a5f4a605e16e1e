//! Flat `key = value` experiment configuration.
//!
//! One entry per line, `#` starts a comment, lists are comma separated.
//! Every command declares the keys it understands; anything else is an
//! error, as is a repeated key.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use ckl_core::cesaro::CesaroOrder;
use ckl_core::kernels::Domain;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// A Cesàro order as written in a config, possibly relative to `σ_κ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrderSpec {
    Fixed(CesaroOrder),
    /// `sigma`, `sigma+1`, `sigma-0.5`, ...
    Sigma(f64),
}

impl OrderSpec {
    pub fn resolve(&self, sigma: f64) -> Result<CesaroOrder> {
        match *self {
            Self::Fixed(o) => Ok(o),
            Self::Sigma(shift) => Ok(CesaroOrder::delta(sigma + shift)?),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| CliError::Config {
                line: i + 1,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k.is_empty() {
                return Err(CliError::Config {
                    line: i + 1,
                    msg: "empty key".into(),
                });
            }
            if entries.insert(k.clone(), v).is_some() {
                return Err(CliError::Config {
                    line: i + 1,
                    msg: format!("duplicate key `{k}`"),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text)
    }

    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Self> {
        let text: String = pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
        Self::parse(&text)
    }

    /// Canonical text: sorted `key=value` lines.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        match self.entries.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(CliError::UnknownKey {
                key: k.clone(),
                allowed: allowed.join(", "),
            }),
            None => Ok(()),
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.raw(key).ok_or_else(|| CliError::MissingKey(key.to_string()))
    }

    fn bad(key: &str, value: &str, why: &str) -> CliError {
        CliError::BadValue {
            key: key.to_string(),
            value: value.to_string(),
            why: why.to_string(),
        }
    }

    pub fn usize(&self, key: &str, default: Option<usize>) -> Result<usize> {
        match (self.raw(key), default) {
            (None, Some(d)) => Ok(d),
            (None, None) => Err(CliError::MissingKey(key.to_string())),
            (Some(v), _) => v
                .parse()
                .map_err(|_| Self::bad(key, v, "expected a non-negative integer")),
        }
    }

    pub fn f64(&self, key: &str, default: Option<f64>) -> Result<f64> {
        match (self.raw(key), default) {
            (None, Some(d)) => Ok(d),
            (None, None) => Err(CliError::MissingKey(key.to_string())),
            (Some(v), _) => parse_f64(v).ok_or_else(|| Self::bad(key, v, "expected a finite number")),
        }
    }

    pub fn bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.raw(key) {
            None => Ok(default),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(v) => Err(Self::bad(key, v, "expected true or false")),
        }
    }

    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let v = self.required(key)?;
        split(v)
            .map(|s| parse_f64(s).ok_or_else(|| Self::bad(key, v, "expected comma separated numbers")))
            .collect()
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>> {
        let v = self.required(key)?;
        let out: Vec<usize> = split(v)
            .map(|s| {
                s.parse()
                    .map_err(|_| Self::bad(key, v, "expected comma separated integers"))
            })
            .collect::<Result<_>>()?;
        if out.is_empty() {
            return Err(Self::bad(key, v, "empty list"));
        }
        Ok(out)
    }

    pub fn domain(&self, key: &str) -> Result<Domain> {
        match self.required(key)? {
            "sphere" => Ok(Domain::Sphere),
            "ball" => Ok(Domain::Ball),
            "simplex" => Ok(Domain::Simplex),
            v => Err(Self::bad(key, v, "expected sphere, ball or simplex")),
        }
    }

    pub fn orders(&self, key: &str) -> Result<Vec<OrderSpec>> {
        let v = self.required(key)?;
        let out: Vec<OrderSpec> = split(v)
            .map(|s| parse_order(s).ok_or_else(|| Self::bad(key, s, "expected proj, a number > -1, or sigma[+-shift]")))
            .collect::<Result<_>>()?;
        if out.is_empty() {
            return Err(Self::bad(key, v, "empty list"));
        }
        Ok(out)
    }
}

fn split(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_f64(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

fn parse_order(s: &str) -> Option<OrderSpec> {
    if s == "proj" || s == "projection" {
        return Some(OrderSpec::Fixed(CesaroOrder::Projection));
    }
    if let Some(rest) = s.strip_prefix("sigma") {
        let shift = if rest.is_empty() {
            0.0
        } else {
            parse_f64(rest.strip_prefix('+').unwrap_or(rest))?
        };
        return Some(OrderSpec::Sigma(shift));
    }
    CesaroOrder::delta(parse_f64(s)?).ok().map(OrderSpec::Fixed)
}
