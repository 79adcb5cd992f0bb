//! Settings resolved from `ctp.toml`, the environment and flags.

use std::path::Path;

use ctp_core::checks::DEFAULT_SEED;
use ctp_core::{CtpError, Limits, Result};
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub limits: Limits,
    pub seed: u64,
    pub format: Format,
    pub workers: Option<usize>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            limits: Limits::default(),
            seed: DEFAULT_SEED,
            format: Format::Text,
            workers: None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileCaps {
    max_width: Option<usize>,
    max_transversals: Option<u64>,
    max_dd_rays: Option<usize>,
    max_maps: Option<u64>,
    max_lp_vars: Option<usize>,
    max_arcs: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    format: Option<Format>,
    workers: Option<usize>,
    #[serde(default)]
    caps: FileCaps,
}

/// Overrides given on the command line.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub max_width: Option<usize>,
    pub max_transversals: Option<u64>,
    pub max_dd_rays: Option<usize>,
}

fn positive<T: PartialOrd + Default + Copy>(name: &str, v: Option<T>) -> Result<Option<T>> {
    match v {
        Some(x) if x <= T::default() => Err(CtpError::InvalidInput(format!("{name} must be positive"))),
        other => Ok(other),
    }
}

impl CliConfig {
    /// Precedence: flags, then `CTP_SEED` (seed only), then the file, then defaults.
    /// `path` is read if given; otherwise `./ctp.toml` is used when present.
    pub fn resolve(path: Option<&Path>, env_seed: Option<&str>, flags: &Overrides) -> Result<Self> {
        let file = match path {
            Some(p) => Some(std::fs::read_to_string(p).map_err(|e| CtpError::Io(format!("{}: {e}", p.display())))?),
            None => std::fs::read_to_string("ctp.toml").ok(),
        };
        let file: ConfigFile = match file {
            Some(text) => toml::from_str(&text).map_err(|e| CtpError::Parse(format!("ctp.toml: {e}")))?,
            None => ConfigFile::default(),
        };
        let mut cfg = CliConfig::default();
        let caps = &file.caps;
        let l = &mut cfg.limits;
        if let Some(v) = positive("max_width", flags.max_width.or(caps.max_width))? {
            l.max_width = v;
        }
        if let Some(v) = positive("max_transversals", flags.max_transversals.or(caps.max_transversals))? {
            l.max_transversals = v;
        }
        if let Some(v) = positive("max_dd_rays", flags.max_dd_rays.or(caps.max_dd_rays))? {
            l.max_dd_rays = v;
        }
        if let Some(v) = positive("max_maps", caps.max_maps)? {
            l.max_maps = v;
        }
        if let Some(v) = positive("max_lp_vars", caps.max_lp_vars)? {
            l.max_lp_vars = v;
        }
        if let Some(v) = positive("max_arcs", caps.max_arcs)? {
            l.max_arcs = v;
        }
        let env_seed = match env_seed {
            Some(s) => Some(
                s.trim()
                    .parse::<u64>()
                    .map_err(|_| CtpError::InvalidInput(format!("CTP_SEED is not an integer: {s:?}")))?,
            ),
            None => None,
        };
        if let Some(s) = flags.seed.or(env_seed).or(file.seed) {
            cfg.seed = s;
        }
        if let Some(f) = flags.format.or(file.format) {
            cfg.format = f;
        }
        cfg.workers = positive("workers", flags.workers.or(file.workers))?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn precedence() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "seed = 5\nformat = \"json\"\n[caps]\nmax_transversals = 10").unwrap();
        let cfg = CliConfig::resolve(Some(f.path()), None, &Overrides::default()).unwrap();
        assert_eq!((cfg.seed, cfg.format, cfg.limits.max_transversals), (5, Format::Json, 10));
        let cfg = CliConfig::resolve(Some(f.path()), Some("7"), &Overrides::default()).unwrap();
        assert_eq!(cfg.seed, 7);
        let flags = Overrides {
            seed: Some(9),
            max_transversals: Some(3),
            ..Default::default()
        };
        let cfg = CliConfig::resolve(Some(f.path()), Some("7"), &flags).unwrap();
        assert_eq!((cfg.seed, cfg.limits.max_transversals), (9, 3));
    }

    #[test]
    fn rejects_bad_input() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "[caps]\nmax_dd_rays = 0").unwrap();
        assert!(CliConfig::resolve(Some(f.path()), None, &Overrides::default()).is_err());
        let mut g = tempfile::NamedTempFile::new().unwrap();
        writeln!(g, "sed = 1").unwrap();
        assert!(CliConfig::resolve(Some(g.path()), None, &Overrides::default()).is_err());
        assert!(CliConfig::resolve(None, Some("x"), &Overrides::default()).is_err());
    }
}
