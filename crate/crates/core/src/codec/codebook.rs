use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::typical::TypTable;
use super::{bin_count, layer_rates, LayerRates};
use crate::dmms::{extend_with_aux, AuxChannelSet, ExtendedPmf, JointPmf4};
use crate::error::{Error, Result};
use crate::info::mutual_information;
use crate::seed::{derive_seed, streams};

const Q: usize = ExtendedPmf::Q;
const U0: usize = ExtendedPmf::U0;
const U1: usize = ExtendedPmf::U1;
const U2: usize = ExtendedPmf::U2;
const X1: usize = ExtendedPmf::X1;
const X2: usize = ExtendedPmf::X2;
const X3: usize = ExtendedPmf::X3;
const X4: usize = ExtendedPmf::X4;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CodebookParams {
    pub n: usize,
    pub eps1: f64,
    /// Multiplicative backoff from the inner-bound corner rates.
    pub backoff: f64,
    /// Upper limit on stored codeword symbols across all layers.
    pub max_symbols: u64,
}

impl Default for CodebookParams {
    fn default() -> Self {
        Self {
            n: 12,
            eps1: 0.05,
            backoff: 0.25,
            max_symbols: 200_000_000,
        }
    }
}

/// One layer of codewords. Layer 0 has a single parent; layers 1 and 2 have
/// one sub-codebook per layer-0 codeword.
///
/// Codeword `j` sits in column `j % cols`, row `(j / cols) % rows` and
/// randomization bin `j / (cols * rows)`. Codewords are i.i.d., so filling
/// the grid in this order is a uniform partition into equal-size bins.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    rates: LayerRates,
    rows: usize,
    cols: usize,
    rands: usize,
    count: usize,
    parents: usize,
    n: usize,
    symbols: Vec<u8>,
}

impl Layer {
    pub fn rates(&self) -> LayerRates {
        self.rates
    }

    /// Number of key values.
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rands(&self) -> usize {
        self.rands
    }

    /// Codewords per parent.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn parents(&self) -> usize {
        self.parents
    }

    /// `(row, column, randomization)` of codeword `j`.
    pub fn tag(&self, j: usize) -> (usize, usize, usize) {
        ((j / self.cols) % self.rows, j % self.cols, j / (self.cols * self.rows))
    }

    pub fn row(&self, j: usize) -> usize {
        (j / self.cols) % self.rows
    }

    /// Indices of the codewords in column `c`.
    pub fn column(&self, c: usize) -> impl Iterator<Item = usize> {
        (c..self.count).step_by(self.cols)
    }

    pub fn column_len(&self, c: usize) -> usize {
        if c >= self.count {
            0
        } else {
            (self.count - c).div_ceil(self.cols)
        }
    }

    pub fn codeword(&self, parent: usize, j: usize) -> &[u8] {
        let start = (parent * self.count + j) * self.n;
        &self.symbols[start..start + self.n]
    }
}

/// The three codeword layers plus the reference distributions the encoder,
/// decoders and observers need.
#[derive(Clone, Debug, PartialEq)]
pub struct LayeredCodebook {
    pub(crate) n: usize,
    pub(crate) seed: u64,
    pub(crate) cards: [usize; 4],
    pub(crate) layers: [Layer; 3],
    pub(crate) q_count: usize,
    pub(crate) q_symbols: Vec<u8>,
    pub(crate) typ_x3: TypTable,
    pub(crate) typ_enc: [TypTable; 3],
    pub(crate) typ_q: TypTable,
    pub(crate) typ_t1: [TypTable; 2],
    pub(crate) typ_t2: [TypTable; 2],
    /// `p(x_j | u0, u1, u2)` for `j = 1, 2, 4`, flattened as
    /// `((u0 * |U1| + u1) * |U2| + u2) * |Xj| + x`.
    pub(crate) likelihood: [(Vec<f64>, usize); 3],
}

impl LayeredCodebook {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn layer(&self, l: usize) -> &Layer {
        &self.layers[l]
    }

    pub fn rates(&self) -> [LayerRates; 3] {
        [0, 1, 2].map(|l| self.layers[l].rates)
    }

    /// Number of values each key can take.
    pub fn key_sizes(&self) -> [usize; 3] {
        [0, 1, 2].map(|l| self.layers[l].rows)
    }

    pub fn q_count(&self) -> usize {
        self.q_count
    }

    pub fn q_codeword(&self, i: usize) -> &[u8] {
        &self.q_symbols[i * self.n..(i + 1) * self.n]
    }

    pub fn u0(&self, j: usize) -> &[u8] {
        self.layers[0].codeword(0, j)
    }

    /// Codeword `j` of layer `l` (1 or 2) under layer-0 codeword `parent`.
    pub fn sub(&self, l: usize, parent: usize, j: usize) -> &[u8] {
        self.layers[l].codeword(parent, j)
    }

    /// Auxiliary cardinalities `[|U0|, |U1|, |U2|, |Q|]`.
    pub fn cards(&self) -> [usize; 4] {
        self.cards
    }
}

fn grid(n: usize, rates: LayerRates, layer: usize) -> Result<(usize, usize, usize, usize)> {
    let too_big = |what: &str| Error::DegenerateRates {
        layer,
        reason: format!("{what} does not fit at n = {n}"),
    };
    let rows = bin_count(n, rates.r).ok_or_else(|| too_big("row count"))?;
    let cols = bin_count(n, rates.r_pub).ok_or_else(|| too_big("column count"))?;
    let rands = bin_count(n, rates.r_rand).ok_or_else(|| too_big("randomization count"))?;
    let count = bin_count(n, rates.total()).ok_or_else(|| too_big("codeword count"))?;
    let fit = |v: u64| usize::try_from(v).map_err(|_| too_big("count"));
    Ok((fit(rows)?, fit(cols)?, fit(rands)?, fit(count)?))
}

fn sampler(probs: &[f64]) -> Option<WeightedIndex<f64>> {
    WeightedIndex::new(probs).ok()
}

/// Per-value samplers of `p(child | parent)` from a 2-D table.
fn conditional_samplers(table: &[f64], parent_card: usize) -> Vec<Option<WeightedIndex<f64>>> {
    let width = table.len() / parent_card;
    table.chunks(width).map(sampler).collect()
}

fn likelihood_table(ext: &ExtendedPmf, x: usize) -> Result<(Vec<f64>, usize)> {
    let m = ext.marginal(&[U0, U1, U2, x])?;
    let width = m.dims()[3];
    let mut out = m.probs().to_vec();
    for row in out.chunks_mut(width) {
        let s: f64 = row.iter().sum();
        if s > 0.0 {
            row.iter_mut().for_each(|v| *v /= s);
        }
    }
    Ok((out, width))
}

/// Builds the random codebook for `(pmf, aux)` at blocklength `params.n`.
///
/// Identical arguments give identical codebooks.
pub fn build_codebook(
    pmf: &JointPmf4,
    aux: &AuxChannelSet,
    params: &CodebookParams,
    seed: u64,
) -> Result<LayeredCodebook> {
    let n = params.n;
    if n == 0 {
        return Err(Error::Config("blocklength must be at least 1".into()));
    }
    let ext = extend_with_aux(pmf, aux)?;
    let rates = layer_rates(&ext, params.eps1, params.backoff)?;
    let g = [grid(n, rates[0], 0)?, grid(n, rates[1], 1)?, grid(n, rates[2], 2)?];
    let q_rate = mutual_information(ext.table(), &[U0, U1, U2], &[Q])?;
    let q_count = usize::try_from(bin_count(n, q_rate).ok_or(Error::BudgetExceeded {
        what: "Q codewords",
        needed: u128::MAX,
        limit: params.max_symbols as u128,
    })?)
    .expect("bin counts fit in usize");

    let m0 = g[0].3 as u128;
    let needed = (n as u128) * (m0 + m0 * (g[1].3 as u128 + g[2].3 as u128) + q_count as u128);
    if needed > params.max_symbols as u128 {
        return Err(Error::BudgetExceeded {
            what: "codebook symbols",
            needed,
            limit: params.max_symbols as u128,
        });
    }

    let cards = [aux.card_u0(), aux.card_u1(), aux.card_u2(), aux.card_q()];
    let p_u0 = ext.marginal(&[U0])?;
    let p_q = ext.marginal(&[Q])?;
    let p_u0u1 = ext.marginal(&[U0, U1])?;
    let p_u0u2 = ext.marginal(&[U0, U2])?;

    let draw_iid = |dist: &WeightedIndex<f64>, count: usize, stream: u64| -> Vec<u8> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, stream, 0));
        (0..count * n).map(|_| dist.sample(&mut rng) as u8).collect()
    };
    let u0_dist = sampler(p_u0.probs()).expect("marginal has positive mass");
    let layer0_symbols = draw_iid(&u0_dist, g[0].3, streams::CODEBOOK_L0);
    let q_dist = sampler(p_q.probs()).expect("marginal has positive mass");
    let q_symbols = draw_iid(&q_dist, q_count, streams::CODEBOOK_Q);

    let sub_layer = |table: &[f64], count: usize, stream: u64| -> Vec<u8> {
        let dists = conditional_samplers(table, cards[0]);
        let mut out = vec![0u8; g[0].3 * count * n];
        if count * n == 0 {
            return out;
        }
        out.par_chunks_mut(count * n)
            .enumerate()
            .for_each(|(parent, chunk)| {
                let u0 = &layer0_symbols[parent * n..(parent + 1) * n];
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, stream, parent as u64));
                for cw in chunk.chunks_mut(n) {
                    for (sym, &a) in cw.iter_mut().zip(u0) {
                        let d = dists[a as usize]
                            .as_ref()
                            .expect("layer-0 symbols have positive probability");
                        *sym = d.sample(&mut rng) as u8;
                    }
                }
            });
        out
    };
    let layer1_symbols = sub_layer(p_u0u1.probs(), g[1].3, streams::CODEBOOK_L1);
    let layer2_symbols = sub_layer(p_u0u2.probs(), g[2].3, streams::CODEBOOK_L2);

    let make_layer = |l: usize, parents: usize, symbols: Vec<u8>| {
        let (rows, cols, rands, count) = g[l];
        Layer {
            rates: rates[l],
            rows,
            cols,
            rands,
            count,
            parents,
            n,
            symbols,
        }
    };
    let typ = |axes: &[usize]| TypTable::from_extended(&ext, axes);
    Ok(LayeredCodebook {
        n,
        seed,
        cards,
        layers: [
            make_layer(0, 1, layer0_symbols),
            make_layer(1, g[0].3, layer1_symbols),
            make_layer(2, g[0].3, layer2_symbols),
        ],
        q_count,
        q_symbols,
        typ_x3: typ(&[X3])?,
        typ_enc: [typ(&[U0, X3])?, typ(&[U0, U1, X3])?, typ(&[U0, U2, X3])?],
        typ_q: typ(&[Q, U0, U1, U2])?,
        typ_t1: [typ(&[Q, U0, X1])?, typ(&[Q, U0, U1, X1])?],
        typ_t2: [typ(&[Q, U0, X2])?, typ(&[Q, U0, U2, X2])?],
        likelihood: [
            likelihood_table(&ext, X1)?,
            likelihood_table(&ext, X2)?,
            likelihood_table(&ext, X4)?,
        ],
    })
}
