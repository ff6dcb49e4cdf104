//! Flat `key = value` configuration with command-line overrides.

use std::collections::BTreeMap;
use std::str::FromStr;

use cutquery::expander::ExpanderConfig;
use cutquery::gomory_hu::GomoryHuConfig;
use cutquery::graph::Family;

use crate::error::{CliError, CliResult};

/// Every key a config may set.
pub const KEYS: &[&str] = &[
    "family",
    "n",
    "seeds",
    "seed",
    "algo",
    "graph",
    "out",
    "verify",
    "pivot",
    "terminals",
    "k",
    "eps",
    "alpha",
    "w",
    "tau",
    "sparsifier.c1",
    "sparsifier.c2",
    "friendly.phi",
    "friendly.c_fs",
    "expander.phi",
    "expander.c_dec",
    "expander.exhaustive_limit",
    "star.p_const",
    "star.c_sc",
    "isolating.degree_factor",
    "isolating.tau_factor",
    "isolating.repetitions",
    "isolating.c_ic",
    "single_source.eps",
    "single_source.delta",
    "single_source.alpha",
    "single_source.c_ss",
    "gomory_hu.retry_factor",
    "gomory_hu.c_gh",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut s = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
            s.set(k.trim(), v.trim())?;
        }
        Ok(s)
    }

    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        if !KEYS.contains(&key) {
            return Err(CliError::Config(format!("unknown key `{key}`")));
        }
        self.values.insert(key.to_owned(), value.to_owned());
        Ok(())
    }

    /// Applies `KEY=VAL` overrides on top of the current values.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> CliResult<()> {
        for o in overrides {
            let (k, v) = o.split_once('=').ok_or_else(|| CliError::Config(format!("override `{o}` is not KEY=VAL")))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        self.raw(key)
            .map(|v| v.parse().map_err(|_| CliError::Config(format!("bad value `{v}` for `{key}`"))))
            .transpose()
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> CliResult<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn family(&self) -> CliResult<Family> {
        let raw = self.raw("family").unwrap_or("gnp:0.5");
        raw.parse().map_err(|e: cutquery::Error| CliError::Config(e.to_string()))
    }

    /// A comma list of integers, where `a..b` expands to the half-open range.
    pub fn list(&self, key: &str) -> CliResult<Vec<u64>> {
        let Some(raw) = self.raw(key) else { return Ok(Vec::new()) };
        let bad = || CliError::Config(format!("bad list `{raw}` for `{key}`"));
        let mut out = Vec::new();
        for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once("..") {
                Some((a, b)) => {
                    let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                    out.extend(a..b);
                }
                None => out.push(item.parse().map_err(|_| bad())?),
            }
        }
        Ok(out)
    }

    /// Gomory-Hu constants with every overridable field applied.
    pub fn gomory_hu(&self) -> CliResult<GomoryHuConfig> {
        let mut c = GomoryHuConfig::default();
        c.retry_factor = self.get_or("gomory_hu.retry_factor", c.retry_factor)?;
        c.c_gh = self.get_or("gomory_hu.c_gh", c.c_gh)?;
        let ss = &mut c.single_source;
        ss.eps = self.get_or("single_source.eps", ss.eps)?;
        ss.delta = self.get_or("single_source.delta", ss.delta)?;
        ss.alpha = self.get_or("single_source.alpha", ss.alpha)?;
        ss.c_ss = self.get_or("single_source.c_ss", ss.c_ss)?;
        ss.sparsifier.c1 = self.get_or("sparsifier.c1", ss.sparsifier.c1)?;
        ss.sparsifier.c2 = self.get_or("sparsifier.c2", ss.sparsifier.c2)?;
        ss.friendly.phi = self.get_or("friendly.phi", ss.friendly.phi)?;
        ss.friendly.c_fs = self.get_or("friendly.c_fs", ss.friendly.c_fs)?;
        ss.friendly.expander = self.expander(ss.friendly.expander)?;
        let iso = &mut ss.isolating;
        iso.degree_factor = self.get_or("isolating.degree_factor", iso.degree_factor)?;
        iso.tau_factor = self.get_or("isolating.tau_factor", iso.tau_factor)?;
        iso.repetitions = self.get_or("isolating.repetitions", iso.repetitions)?;
        iso.c_ic = self.get_or("isolating.c_ic", iso.c_ic)?;
        iso.star.p_const = self.get_or("star.p_const", iso.star.p_const)?;
        iso.star.c_sc = self.get_or("star.c_sc", iso.star.c_sc)?;
        iso.friendly = ss.friendly;
        Ok(c)
    }

    pub fn expander(&self, base: ExpanderConfig) -> CliResult<ExpanderConfig> {
        Ok(ExpanderConfig {
            phi: self.get_or("expander.phi", base.phi)?,
            c_dec: self.get_or("expander.c_dec", base.c_dec)?,
            exhaustive_limit: self.get_or("expander.exhaustive_limit", base.exhaustive_limit)?,
            ..base
        })
    }
}
