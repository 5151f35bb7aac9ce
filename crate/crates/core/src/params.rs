//! Tiny `name:key=value,key=value` spec parser shared by the measure and
//! function registries.

use crate::error::{Error, Result};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct Spec {
    pub name: String,
    pub params: BTreeMap<String, String>,
}

impl Spec {
    pub fn parse(s: &str) -> Result<Spec> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::config("empty spec string"));
        }
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (s, None),
        };
        let mut params = BTreeMap::new();
        if let Some(rest) = rest {
            for kv in rest.split(',').filter(|t| !t.trim().is_empty()) {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::config(format!("expected key=value, got '{kv}'")))?;
                params.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Spec {
            name: name.trim().to_lowercase(),
            params,
        })
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let raw = self
            .params
            .get(key)
            .ok_or_else(|| Error::config(format!("'{}' requires parameter '{key}'", self.name)))?;
        parse_f64(raw)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            Some(raw) => parse_f64(raw),
            None => Ok(default),
        }
    }

    /// Slash-separated numeric list, e.g. `w=0.6/0.8`.
    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let raw = self
            .params
            .get(key)
            .ok_or_else(|| Error::config(format!("'{}' requires parameter '{key}'", self.name)))?;
        raw.split('/').map(parse_f64).collect()
    }
}

pub fn parse_f64(raw: &str) -> Result<f64> {
    let t = raw.trim();
    match t.to_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => return Ok(f64::INFINITY),
        "-inf" => return Ok(f64::NEG_INFINITY),
        _ => {}
    }
    t.parse::<f64>()
        .map_err(|_| Error::config(format!("could not parse number '{raw}'")))
}
