use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::codebook::CodebookParams;
use super::trials::TrialConfig;
use crate::dmms::AuxChannelSet;
use crate::error::{Error, Result};

/// Auxiliary channels in a config file: a shorthand name or explicit tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AuxSpec {
    /// `"identity-u0"`, `"identity-u1"`, `"identity-u2"` or `"trivial"`.
    Named(String),
    Explicit(AuxChannelSet),
}

impl AuxSpec {
    pub fn resolve(&self, x3_card: usize) -> Result<AuxChannelSet> {
        match self {
            AuxSpec::Named(name) => match name.as_str() {
                "identity-u0" => Ok(AuxChannelSet::identity_u0(x3_card)),
                "identity-u1" => Ok(AuxChannelSet::identity_u1(x3_card)),
                "identity-u2" => Ok(AuxChannelSet::identity_u2(x3_card)),
                "trivial" => Ok(AuxChannelSet::trivial(x3_card)),
                other => Err(Error::Config(format!("unknown auxiliary shorthand {other:?}"))),
            },
            AuxSpec::Explicit(aux) => Ok(aux.clone()),
        }
    }
}

/// A simulation sweep over blocklengths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Relative paths are resolved against the config file's directory.
    pub pmf: PathBuf,
    pub aux: AuxSpec,
    pub n: Vec<usize>,
    #[serde(default = "default_eps1")]
    pub eps1: f64,
    #[serde(default = "default_typ_eps")]
    pub typ_eps: f64,
    #[serde(default = "default_backoff")]
    pub backoff: f64,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub posterior_trials: Option<usize>,
    #[serde(default)]
    pub max_symbols: Option<u64>,
}

fn default_eps1() -> f64 {
    0.05
}

fn default_typ_eps() -> f64 {
    0.05
}

fn default_backoff() -> f64 {
    0.25
}

impl SimConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let cfg: SimConfig = serde_json::from_str(s)?;
        if cfg.n.is_empty() || cfg.n.contains(&0) {
            return Err(Error::Config("n must list positive blocklengths".into()));
        }
        Ok(cfg)
    }

    /// Reads a config and makes its PMF path absolute or relative to the
    /// current directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::from_json_str(&fs::read_to_string(path)?)?;
        if cfg.pmf.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.pmf = dir.join(&cfg.pmf);
            }
        }
        Ok(cfg)
    }

    pub fn trial_config(&self, n: usize) -> TrialConfig {
        let defaults = CodebookParams::default();
        TrialConfig {
            codebook: CodebookParams {
                n,
                eps1: self.eps1,
                backoff: self.backoff,
                max_symbols: self.max_symbols.unwrap_or(defaults.max_symbols),
            },
            typ_eps: self.typ_eps,
            trials: self.trials,
            posterior_trials: self.posterior_trials,
            seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_shorthand_and_defaults() {
        let cfg = SimConfig::from_json_str(
            r#"{"pmf": "a.json", "aux": "identity-u0", "n": [8, 12], "trials": 10}"#,
        )
        .unwrap();
        assert_eq!(cfg.aux, AuxSpec::Named("identity-u0".into()));
        assert_eq!((cfg.eps1, cfg.typ_eps, cfg.backoff), (0.05, 0.05, 0.25));
        assert_eq!(cfg.aux.resolve(2).unwrap(), AuxChannelSet::identity_u0(2));
        assert!(AuxSpec::Named("nope".into()).resolve(2).is_err());
    }

    #[test]
    fn rejects_empty_sweeps_and_unknown_fields() {
        assert!(SimConfig::from_json_str(r#"{"pmf":"a","aux":"trivial","n":[],"trials":1}"#).is_err());
        assert!(
            SimConfig::from_json_str(r#"{"pmf":"a","aux":"trivial","n":[8],"trials":1,"x":1}"#)
                .is_err()
        );
    }
}
