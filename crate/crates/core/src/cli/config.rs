//! Flat `key = value` configuration with per-command sections.
//!
//! ```text
//! # comment
//! hbar = 1            # applies to every command
//! [figure1]
//! s_max = 100         # only read by `figure1`
//! ```
//!
//! Keys from the file are overridden by `--key value` flags.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Parsed configuration file: global keys and one table per section.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub global: BTreeMap<String, String>,
    pub sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ConfigFile::default();
        let mut section: Option<String> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Config(format!("line {}: unterminated section header", n + 1)))?
                    .trim();
                if name.is_empty() {
                    return Err(Error::Config(format!("line {}: empty section name", n + 1)));
                }
                section = Some(name.to_string());
                cfg.sections.entry(name.to_string()).or_default();
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", n + 1)));
            }
            let table = match &section {
                Some(s) => cfg.sections.get_mut(s).expect("section was inserted"),
                None => &mut cfg.global,
            };
            if table.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key '{k}'", n + 1)));
            }
        }
        Ok(cfg)
    }

    /// Global keys overlaid with the section for `command`.
    pub fn for_command(&self, command: &str) -> BTreeMap<String, String> {
        let mut out = self.global.clone();
        if let Some(s) = self.sections.get(command) {
            out.extend(s.iter().map(|(k, v)| (k.clone(), v.clone())));
        }
        out
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// A key accepted by a command, with its default in text form.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub default: &'static str,
}

pub const fn key(key: &'static str, default: &'static str) -> KeySpec {
    KeySpec { key, default }
}

/// Fully resolved settings of one command, in declaration order.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub command: String,
    entries: Vec<(&'static str, String)>,
}

impl Resolved {
    /// Applies defaults, then `file`, then `flags`. Keys not in `spec` are rejected.
    pub fn new(
        command: &str,
        spec: &[KeySpec],
        file: &BTreeMap<String, String>,
        flags: &[(String, String)],
    ) -> Result<Self> {
        let mut entries: Vec<(&'static str, String)> =
            spec.iter().map(|s| (s.key, s.default.to_string())).collect();
        let mut set = |k: &str, v: &str, origin: &str| -> Result<()> {
            match entries.iter_mut().find(|(name, _)| *name == k) {
                Some(e) => {
                    e.1 = v.to_string();
                    Ok(())
                }
                None => Err(Error::Config(format!(
                    "unknown key '{k}' for command '{command}' ({origin}); accepted keys: {}",
                    spec.iter().map(|s| s.key).collect::<Vec<_>>().join(", ")
                ))),
            }
        };
        for (k, v) in file {
            set(k, v, "config file")?;
        }
        for (k, v) in flags {
            set(k, v, "flag")?;
        }
        Ok(Self {
            command: command.to_string(),
            entries,
        })
    }

    pub fn entries(&self) -> &[(&'static str, String)] {
        &self.entries
    }

    pub fn raw(&self, k: &str) -> &str {
        self.entries
            .iter()
            .find(|(name, _)| *name == k)
            .map(|(_, v)| v.as_str())
            .unwrap_or_else(|| panic!("key '{k}' is not declared for {}", self.command))
    }

    /// Replaces a value after resolution (used to record derived defaults).
    pub fn set(&mut self, k: &str, v: String) {
        let e = self
            .entries
            .iter_mut()
            .find(|(name, _)| *name == k)
            .unwrap_or_else(|| panic!("key '{k}' is not declared for {}", self.command));
        e.1 = v;
    }

    pub fn f64(&self, k: &str) -> Result<f64> {
        let s = self.raw(k);
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::Config(format!("{k}: '{s}' is not a finite number")))
    }

    /// `None` for `auto`.
    pub fn f64_or_auto(&self, k: &str) -> Result<Option<f64>> {
        if self.raw(k) == "auto" {
            Ok(None)
        } else {
            self.f64(k).map(Some)
        }
    }

    pub fn usize(&self, k: &str) -> Result<usize> {
        let s = self.raw(k);
        s.parse::<usize>()
            .map_err(|_| Error::Config(format!("{k}: '{s}' is not a nonnegative integer")))
    }

    pub fn list(&self, k: &str) -> Vec<String> {
        self.raw(k)
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    }

    pub fn f64_list(&self, k: &str) -> Result<Vec<f64>> {
        self.list(k)
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Config(format!("{k}: '{s}' is not a finite number")))
            })
            .collect()
    }

    /// Empty or `none` means unset.
    pub fn optional(&self, k: &str) -> Option<&str> {
        match self.raw(k) {
            "" | "none" => None,
            s => Some(s),
        }
    }

    /// `# key=value` header lines, command first.
    pub fn header(&self) -> String {
        let mut s = format!("# command={}\n", self.command);
        for (k, v) in &self.entries {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s
    }
}
