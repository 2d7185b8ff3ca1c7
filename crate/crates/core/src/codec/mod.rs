//! Small-blocklength simulation of the layered random-binning scheme.
//!
//! Terminal 3 holds three layers of i.i.d. codewords: `U0` codewords, and
//! under each of them a sub-codebook of `U1` and of `U2` codewords. Every
//! codeword sits in one cell of a `(row, column, randomization)` grid. The
//! encoder picks codewords jointly typical with `x3`, keeps the rows as the
//! keys `(K0, K1, K2)`, and announces the columns. Terminal `j` finds the
//! unique codeword in the announced column that is jointly typical with `xj`.
//!
//! Per-layer rates, with `R` the inner-bound corner and `b` the backoff:
//!
//! ```text
//! layer 0: r = (1-b) R0, r_pub = max{H(U0|X1,Q), H(U0|X2,Q)} + eps1,
//!          r_rand = I(U0;X4|Q)
//! layer 1: r = (1-b) R1, r_pub = H(U1|X1,U0,Q) + eps1,
//!          r_rand = max{I(U1;X2,U2|U0,Q), I(U1;X4,U2|U0,Q)}
//! layer 2: mirror of layer 1
//! ```
//!
//! Secrecy is measured by exact posteriors over the keys given what an
//! observer sees; see [`eve_posterior`] and [`cross_posterior`].

mod codebook;
mod coding;
mod config;
mod posterior;
mod trials;
mod typical;

use serde::{Deserialize, Serialize};

use crate::dmms::ExtendedPmf;
use crate::error::{Error, Result};
use crate::info::{conditional_entropy, conditional_mutual_information, Bits};
use crate::region::inner_bound_from_extended;

pub use codebook::{build_codebook, CodebookParams, Layer, LayeredCodebook};
pub use coding::{decode_t1, decode_t2, encode, Encoding};
pub use config::{AuxSpec, SimConfig};
pub use posterior::{cross_posterior, eve_posterior, Observer, Posterior};
pub use trials::{report_csv, run_trials, SimulationReport, TrialConfig, CSV_HEADER};
pub use typical::TypTable;

/// Row, column and randomization rates of one layer, in bits per symbol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerRates {
    pub r: Bits,
    pub r_pub: Bits,
    pub r_rand: Bits,
}

impl LayerRates {
    pub fn total(&self) -> Bits {
        self.r + self.r_pub + self.r_rand
    }
}

/// Key row indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KeyTriple {
    pub k0: usize,
    pub k1: usize,
    pub k2: usize,
}

/// What terminal 3 announces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PublicMessage {
    pub cols: [usize; 3],
    pub q_index: usize,
}

fn info(t: &crate::table::ProbTable, a: &[usize], b: &[usize], c: &[usize]) -> Result<Bits> {
    conditional_mutual_information(t, a, b, c)
}

/// Rates of the three layers for an extended joint.
pub fn layer_rates(ext: &ExtendedPmf, eps1: f64, backoff: f64) -> Result<[LayerRates; 3]> {
    if !(eps1.is_finite() && eps1 >= 0.0) {
        return Err(Error::Config(format!("eps1 must be finite and >= 0, got {eps1}")));
    }
    if !(0.0..=1.0).contains(&backoff) {
        return Err(Error::Config(format!("backoff must lie in [0, 1], got {backoff}")));
    }
    let t = ext.table();
    let (q, u0, u1, u2) = (ExtendedPmf::Q, ExtendedPmf::U0, ExtendedPmf::U1, ExtendedPmf::U2);
    let (x1, x2, x4) = (ExtendedPmf::X1, ExtendedPmf::X2, ExtendedPmf::X4);
    let corner = inner_bound_from_extended(ext);
    let keep = 1.0 - backoff;

    let layer0 = LayerRates {
        r: keep * corner.r0,
        r_pub: conditional_entropy(t, &[u0], &[x1, q])?.max(conditional_entropy(t, &[u0], &[x2, q])?)
            + eps1,
        r_rand: info(t, &[u0], &[x4], &[q])?,
    };
    let private = |own: usize, x_own: usize, other: usize, x_other: usize, r: Bits| -> Result<LayerRates> {
        Ok(LayerRates {
            r: keep * r,
            r_pub: conditional_entropy(t, &[own], &[x_own, u0, q])? + eps1,
            r_rand: info(t, &[own], &[x_other, other], &[u0, q])?
                .max(info(t, &[own], &[x4, other], &[u0, q])?),
        })
    };
    let rates = [
        layer0,
        private(u1, x1, u2, x2, corner.r1)?,
        private(u2, x2, u1, x1, corner.r2)?,
    ];
    for (layer, lr) in rates.iter().enumerate() {
        for (name, v) in [("r", lr.r), ("r_pub", lr.r_pub), ("r_rand", lr.r_rand)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::DegenerateRates {
                    layer,
                    reason: format!("{name} = {v}"),
                });
            }
        }
    }
    Ok(rates)
}

/// `ceil(2^(n * rate))`, at least 1. `None` when it does not fit in `u64`.
pub(crate) fn bin_count(n: usize, rate: Bits) -> Option<u64> {
    let exp = n as f64 * rate;
    if exp >= 63.0 {
        return None;
    }
    // The guard keeps exact powers of two from rounding up.
    let c = (exp.exp2() - 1e-9).ceil();
    Some((c as u64).max(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bin_counts() {
        assert_eq!(bin_count(12, 0.0), Some(1));
        assert_eq!(bin_count(8, 0.5), Some(16));
        assert_eq!(bin_count(10, 0.05), Some(2));
        assert_eq!(bin_count(100, 1.0), None);
    }
}
