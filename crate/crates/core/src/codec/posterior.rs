use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::codebook::LayeredCodebook;
use super::{KeyTriple, PublicMessage};
use crate::error::{Error, Result};

/// Upper limit on codeword tuples enumerated per posterior.
pub const MAX_TUPLES: u128 = 1_000_000;

/// Exact posterior over key values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Posterior<K: Ord> {
    pub probs: BTreeMap<K, f64>,
}

impl<K: Ord> Posterior<K> {
    pub fn prob(&self, k: &K) -> f64 {
        self.probs.get(k).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    /// Entropy in bits.
    pub fn entropy(&self) -> f64 {
        self.probs
            .values()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }
}

/// Who is trying to learn a key they should not know.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Observer {
    /// Terminal 1, after `K2`.
    T1,
    /// Terminal 2, after `K1`.
    T2,
}

struct Evidence<'a> {
    /// Index into the codebook's likelihood tables (0: X1, 1: X2, 2: X4).
    source: usize,
    seq: &'a [u8],
    /// Known rows per layer.
    rows: [Option<usize>; 3],
}

/// Log-likelihood of every codeword tuple in the announced columns that is
/// consistent with the known rows. The selection prior is uniform over these
/// tuples since every parent's column has the same size.
fn tuple_weights(
    cb: &LayeredCodebook,
    msg: &PublicMessage,
    ev: &Evidence,
) -> Result<Vec<([usize; 3], f64)>> {
    if ev.seq.len() != cb.n {
        return Err(Error::ShapeMismatch(format!(
            "sequence has length {}, codebook blocklength is {}",
            ev.seq.len(),
            cb.n
        )));
    }
    let needed: u128 = (0..3)
        .map(|l| cb.layers[l].column_len(msg.cols[l]) as u128)
        .product();
    if needed > MAX_TUPLES {
        return Err(Error::BudgetExceeded {
            what: "posterior tuples",
            needed,
            limit: MAX_TUPLES,
        });
    }
    let [_, c1, c2, _] = cb.cards;
    let (table, width) = &cb.likelihood[ev.source];
    let log_table: Vec<f64> = table.iter().map(|p| p.ln()).collect();
    let members = |l: usize| -> Vec<usize> {
        cb.layers[l]
            .column(msg.cols[l])
            .filter(|&j| ev.rows[l].is_none_or(|r| cb.layers[l].row(j) == r))
            .collect()
    };
    let (m0, m1, m2) = (members(0), members(1), members(2));
    let mut out = Vec::with_capacity(m0.len() * m1.len() * m2.len());
    for &j0 in &m0 {
        let u0 = cb.u0(j0);
        for &j1 in &m1 {
            let u1 = cb.sub(1, j0, j1);
            for &j2 in &m2 {
                let u2 = cb.sub(2, j0, j2);
                let mut ll = 0.0;
                for t in 0..cb.n {
                    let head = (u0[t] as usize * c1 + u1[t] as usize) * c2 + u2[t] as usize;
                    ll += log_table[head * width + ev.seq[t] as usize];
                    if ll == f64::NEG_INFINITY {
                        break;
                    }
                }
                out.push(([j0, j1, j2], ll));
            }
        }
    }
    Ok(out)
}

fn normalize<K: Ord>(
    weights: Vec<([usize; 3], f64)>,
    key: impl Fn([usize; 3]) -> K,
) -> Result<Posterior<K>> {
    let max = weights
        .iter()
        .map(|w| w.1)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::ZeroEvidence);
    }
    let mut probs = BTreeMap::new();
    let mut total = 0.0;
    for (tuple, ll) in weights {
        let w = (ll - max).exp();
        total += w;
        *probs.entry(key(tuple)).or_insert(0.0) += w;
    }
    probs.values_mut().for_each(|p| *p /= total);
    Ok(Posterior { probs })
}

/// Terminal 4's posterior over `(K0, K1, K2)` given `x4` and the message.
pub fn eve_posterior(
    cb: &LayeredCodebook,
    x4: &[u8],
    msg: &PublicMessage,
) -> Result<Posterior<KeyTriple>> {
    let ev = Evidence {
        source: 2,
        seq: x4,
        rows: [None; 3],
    };
    let rows = |t: [usize; 3]| KeyTriple {
        k0: cb.layers[0].row(t[0]),
        k1: cb.layers[1].row(t[1]),
        k2: cb.layers[2].row(t[2]),
    };
    normalize(tuple_weights(cb, msg, &ev)?, rows)
}

/// An honest terminal's posterior over the other terminal's private key,
/// given its own block, the message and optionally its own decoded keys
/// `(k0, k_own)`.
pub fn cross_posterior(
    cb: &LayeredCodebook,
    observer: Observer,
    side: &[u8],
    msg: &PublicMessage,
    known_keys: Option<(usize, usize)>,
) -> Result<Posterior<usize>> {
    let (source, own, other) = match observer {
        Observer::T1 => (0, 1, 2),
        Observer::T2 => (1, 2, 1),
    };
    let mut rows = [None; 3];
    if let Some((k0, k_own)) = known_keys {
        rows[0] = Some(k0);
        rows[own] = Some(k_own);
    }
    let ev = Evidence {
        source,
        seq: side,
        rows,
    };
    normalize(tuple_weights(cb, msg, &ev)?, |t| cb.layers[other].row(t[other]))
}
