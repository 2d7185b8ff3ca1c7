use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::codebook::{build_codebook, CodebookParams};
use super::coding::encode;
use super::posterior::{cross_posterior, eve_posterior, Observer};
use super::{decode_t1, decode_t2, KeyTriple, LayerRates};
use crate::dmms::{sample_iid, AuxChannelSet, JointPmf4};
use crate::error::{Error, Result};
use crate::seed::{derive_seed, streams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialConfig {
    pub codebook: CodebookParams,
    pub typ_eps: f64,
    pub trials: usize,
    /// Posteriors are computed on the first this many trials only.
    pub posterior_trials: Option<usize>,
    pub seed: u64,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            codebook: CodebookParams::default(),
            typ_eps: 0.05,
            trials: 1000,
            posterior_trials: None,
            seed: 0,
        }
    }
}

/// Monte Carlo estimates at one blocklength. Error rates are over trials the
/// encoder accepted; leakages and gaps are in bits per symbol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n: usize,
    pub trials: usize,
    pub encoded: usize,
    pub encoder_failure_rate: f64,
    /// Either terminal's estimate of `K0` is wrong.
    pub err_common: f64,
    pub err_pk1: f64,
    pub err_pk2: f64,
    /// `(H(K) - E[H(K | X4, F)]) / n` for the key triple.
    pub leak_eve_per_symbol: f64,
    /// What terminal 1 learns about `K2`.
    pub leak_cross_12: f64,
    /// What terminal 2 learns about `K1`.
    pub leak_cross_21: f64,
    /// `(log|K_l| - H(K_l)) / n` per key.
    pub uniformity_gap: [f64; 3],
    pub key_sizes: [usize; 3],
    pub rates: [LayerRates; 3],
    /// Trials whose posteriors entered the leakage estimates.
    pub posterior_trials: usize,
}

#[derive(Clone, Debug)]
struct Accepted {
    keys: KeyTriple,
    t1: Option<(usize, usize)>,
    t2: Option<(usize, usize)>,
    /// Posterior entropies for Eve, T1 about K2, T2 about K1.
    post: Option<[f64; 3]>,
}

fn plugin_entropy<K: Ord>(samples: impl Iterator<Item = K>) -> f64 {
    let mut counts = BTreeMap::new();
    let mut total = 0usize;
    for s in samples {
        *counts.entry(s).or_insert(0usize) += 1;
        total += 1;
    }
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

fn rate(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    }
}

fn leakage(prior_entropy: f64, posterior_entropies: &[f64], n: usize) -> f64 {
    if posterior_entropies.is_empty() {
        return 0.0;
    }
    let mean = posterior_entropies.iter().sum::<f64>() / posterior_entropies.len() as f64;
    let n = n as f64;
    ((prior_entropy - mean) / n).clamp(0.0, prior_entropy / n)
}

/// Builds one codebook and runs `cfg.trials` independent blocks through it.
///
/// Deterministic in `cfg.seed`, independent of thread count.
pub fn run_trials(
    pmf: &JointPmf4,
    aux: &AuxChannelSet,
    cfg: &TrialConfig,
) -> Result<SimulationReport> {
    if !(cfg.typ_eps.is_finite() && cfg.typ_eps > 0.0) {
        return Err(Error::Config(format!("typ_eps must be positive, got {}", cfg.typ_eps)));
    }
    let cb = build_codebook(pmf, aux, &cfg.codebook, cfg.seed)?;
    let n = cfg.codebook.n;
    let posterior_limit = cfg.posterior_trials.unwrap_or(cfg.trials);
    let outcomes: Vec<Option<Accepted>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| -> Result<Option<Accepted>> {
            let block = sample_iid(pmf, n, derive_seed(cfg.seed, streams::TRIAL_SOURCE, i as u64));
            let enc_seed = derive_seed(cfg.seed, streams::TRIAL_ENCODER, i as u64);
            let enc = match encode(&cb, &block.x3, cfg.typ_eps, enc_seed) {
                Ok(e) => e,
                Err(Error::EncoderFailure(_)) => return Ok(None),
                Err(e) => return Err(e),
            };
            let decoded = |r: Result<(usize, usize)>| match r {
                Ok(v) => Ok(Some(v)),
                Err(Error::DecodeFailure { .. }) => Ok(None),
                Err(e) => Err(e),
            };
            let t1 = decoded(decode_t1(&cb, &block.x1, &enc.message, cfg.typ_eps))?;
            let t2 = decoded(decode_t2(&cb, &block.x2, &enc.message, cfg.typ_eps))?;
            let post = if i < posterior_limit {
                let entropy = |r: Result<f64>| match r {
                    Ok(h) => Ok(Some(h)),
                    Err(Error::ZeroEvidence) => Ok(None),
                    Err(e) => Err(e),
                };
                let eve = entropy(eve_posterior(&cb, &block.x4, &enc.message).map(|p| p.entropy()))?;
                let c12 = entropy(
                    cross_posterior(&cb, Observer::T1, &block.x1, &enc.message, t1)
                        .map(|p| p.entropy()),
                )?;
                let c21 = entropy(
                    cross_posterior(&cb, Observer::T2, &block.x2, &enc.message, t2)
                        .map(|p| p.entropy()),
                )?;
                match (eve, c12, c21) {
                    (Some(a), Some(b), Some(c)) => Some([a, b, c]),
                    _ => None,
                }
            } else {
                None
            };
            Ok(Some(Accepted {
                keys: enc.keys,
                t1,
                t2,
                post,
            }))
        })
        .collect::<Result<_>>()?;

    let accepted: Vec<&Accepted> = outcomes.iter().flatten().collect();
    let encoded = accepted.len();
    let common_err = accepted
        .iter()
        .filter(|a| {
            a.t1.is_none_or(|(k0, _)| k0 != a.keys.k0) || a.t2.is_none_or(|(k0, _)| k0 != a.keys.k0)
        })
        .count();
    let pk1_err = accepted
        .iter()
        .filter(|a| a.t1.is_none_or(|(_, k1)| k1 != a.keys.k1))
        .count();
    let pk2_err = accepted
        .iter()
        .filter(|a| a.t2.is_none_or(|(_, k2)| k2 != a.keys.k2))
        .count();

    let with_post: Vec<(&KeyTriple, [f64; 3])> = accepted
        .iter()
        .filter_map(|a| a.post.map(|p| (&a.keys, p)))
        .collect();
    let column = |c: usize| -> Vec<f64> { with_post.iter().map(|(_, p)| p[c]).collect() };
    let leak_eve = leakage(plugin_entropy(with_post.iter().map(|(k, _)| **k)), &column(0), n);
    let leak_12 = leakage(plugin_entropy(with_post.iter().map(|(k, _)| k.k2)), &column(1), n);
    let leak_21 = leakage(plugin_entropy(with_post.iter().map(|(k, _)| k.k1)), &column(2), n);

    let key_sizes = cb.key_sizes();
    let key_entropy = [
        plugin_entropy(accepted.iter().map(|a| a.keys.k0)),
        plugin_entropy(accepted.iter().map(|a| a.keys.k1)),
        plugin_entropy(accepted.iter().map(|a| a.keys.k2)),
    ];
    let uniformity_gap = [0, 1, 2].map(|l| {
        if encoded == 0 {
            0.0
        } else {
            ((key_sizes[l] as f64).log2() - key_entropy[l]).max(0.0) / n as f64
        }
    });

    Ok(SimulationReport {
        n,
        trials: cfg.trials,
        encoded,
        encoder_failure_rate: rate(cfg.trials - encoded, cfg.trials),
        err_common: rate(common_err, encoded),
        err_pk1: rate(pk1_err, encoded),
        err_pk2: rate(pk2_err, encoded),
        leak_eve_per_symbol: leak_eve,
        leak_cross_12: leak_12,
        leak_cross_21: leak_21,
        uniformity_gap,
        key_sizes,
        rates: cb.rates(),
        posterior_trials: with_post.len(),
    })
}

pub const CSV_HEADER: &str =
    "n,err_common,err_pk1,err_pk2,leak_eve,leak_12,leak_21,unif_gap0,unif_gap1,unif_gap2,enc_fail";

/// One row per report under [`CSV_HEADER`].
pub fn report_csv(reports: &[SimulationReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.n,
            r.err_common,
            r.err_pk1,
            r.err_pk2,
            r.leak_eve_per_symbol,
            r.leak_cross_12,
            r.leak_cross_21,
            r.uniformity_gap[0],
            r.uniformity_gap[1],
            r.uniformity_gap[2],
            r.encoder_failure_rate
        ));
    }
    out
}
