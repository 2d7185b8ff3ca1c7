//! Numerical search over auxiliary channels.
//!
//! Three candidate streams feed the frontier:
//!
//! 1. every deterministic channel tuple, when their number fits the budget;
//! 2. Dirichlet(1, ..., 1) random stochastic tuples;
//! 3. coordinate ascent on `w . (R0, R1, R2)` for each weight vector `w`,
//!    one conditional row at a time, with a golden-section line search
//!    towards each vertex of the row's simplex.
//!
//! Ascent starts from the first few record-setting candidates (by `w`) of
//! each of the first two streams, and every sweep's end point is kept. A
//! larger budget therefore only ever adds candidates, so the traced region
//! can only grow.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::hull::RegionFrontier;
use super::{CornerEvaluator, RateTriple};
use crate::dmms::{AuxChannelSet, JointPmf4};
use crate::error::{Error, Result};
use crate::seed::{derive_seed, streams};

pub const DEFAULT_WEIGHTS: [[f64; 3]; 7] = [
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
    [1.0, 1.0, 1.0],
    [2.0, 1.0, 1.0],
    [1.0, 2.0, 1.0],
    [1.0, 1.0, 2.0],
];

const GOLDEN_ITERS: usize = 20;
const IMPROVE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Auxiliary cardinalities; `None` means `|X3|`.
    pub card_u0: Option<usize>,
    pub card_u1: Option<usize>,
    pub card_u2: Option<usize>,
    pub card_q: usize,
    /// Deterministic tuples are enumerated only if there are at most this many.
    pub exhaustive_budget: u64,
    pub random_samples: usize,
    pub refine_sweeps: usize,
    /// Record-setting starting points per stream and weight vector.
    pub refine_starts: usize,
    pub weights: Vec<[f64; 3]>,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            card_u0: None,
            card_u1: None,
            card_u2: None,
            card_q: 1,
            exhaustive_budget: 1_000_000,
            random_samples: 1000,
            refine_sweeps: 2,
            refine_starts: 2,
            weights: DEFAULT_WEIGHTS.to_vec(),
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn cardinalities(&self, x3_card: usize) -> [usize; 4] {
        [
            self.card_u0.unwrap_or(x3_card),
            self.card_u1.unwrap_or(x3_card),
            self.card_u2.unwrap_or(x3_card),
            self.card_q,
        ]
    }

    fn validate(&self) -> Result<()> {
        if self.card_q == 0 || [self.card_u0, self.card_u1, self.card_u2].contains(&Some(0)) {
            return Err(Error::Config("auxiliary cardinalities must be positive".into()));
        }
        if self
            .weights
            .iter()
            .any(|w| w.iter().any(|x| !x.is_finite() || *x < 0.0))
        {
            return Err(Error::Config("weights must be finite and non-negative".into()));
        }
        Ok(())
    }
}

/// Number of deterministic channel tuples, or `None` past `u128`.
fn deterministic_count(x3: usize, cards: [usize; 4]) -> Option<u128> {
    let [c0, c1, c2, cq] = cards;
    let pow = |base: usize, exp: usize| -> Option<u128> {
        (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base as u128))
    };
    pow(c0, x3)?
        .checked_mul(pow(c1, c0 * x3)?)?
        .checked_mul(pow(c2, c0 * x3)?)?
        .checked_mul(pow(cq, c0 * c1 * c2)?)
}

/// The `index`-th deterministic tuple in mixed-radix order.
fn deterministic_tuple(x3: usize, cards: [usize; 4], mut index: u128) -> AuxChannelSet {
    let [c0, c1, c2, cq] = cards;
    let mut digits = |len: usize, radix: usize| -> Vec<usize> {
        (0..len)
            .map(|_| {
                let d = (index % radix as u128) as usize;
                index /= radix as u128;
                d
            })
            .collect()
    };
    let u0 = digits(x3, c0);
    let u1 = digits(c0 * x3, c1);
    let u2 = digits(c0 * x3, c2);
    let q = digits(c0 * c1 * c2, cq);
    AuxChannelSet::deterministic(cards, &u0, &u1, &u2, &q).expect("digits are in range")
}

fn dirichlet_row<R: Rng>(rng: &mut R, width: usize) -> Vec<f64> {
    let mut row: Vec<f64> = (0..width).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let sum: f64 = row.iter().sum();
    row.iter_mut().for_each(|v| *v /= sum);
    row
}

fn random_tuple<R: Rng>(rng: &mut R, x3: usize, cards: [usize; 4]) -> AuxChannelSet {
    let [c0, c1, c2, cq] = cards;
    let mut rows = |count: usize, width: usize| -> Vec<Vec<f64>> {
        (0..count).map(|_| dirichlet_row(rng, width)).collect()
    };
    let u0 = rows(x3, c0);
    let u1 = rows(c0 * x3, c1);
    let u2 = rows(c0 * x3, c2);
    let q = rows(c0 * c1 * c2, cq);
    AuxChannelSet::new(cards, u0, u1, u2, q).expect("dirichlet rows are distributions")
}

/// Indices of the first `k` strict running maxima of `w . point`.
fn record_setters(points: &[RateTriple], w: [f64; 3], k: usize) -> Vec<usize> {
    let mut best = f64::NEG_INFINITY;
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if out.len() == k {
            break;
        }
        let v = p.dot(w);
        if v > best + IMPROVE_TOL {
            best = v;
            out.push(i);
        }
    }
    out
}

/// Coordinate ascent from `start`; returns the state after each sweep.
fn refine(
    eval: &CornerEvaluator,
    start: &AuxChannelSet,
    w: [f64; 3],
    sweeps: usize,
) -> Vec<(RateTriple, AuxChannelSet)> {
    let mut cur = start.clone();
    let mut best = eval.corner(&cur).dot(w);
    let mut out = Vec::with_capacity(sweeps);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..sweeps {
        for r in 0..cur.row_count() {
            let width = cur.row_mut(r).len();
            if width < 2 {
                continue;
            }
            for vertex in 0..width {
                let base = cur.row_mut(r).clone();
                let objective = |t: f64, aux: &mut AuxChannelSet| -> f64 {
                    let row = aux.row_mut(r);
                    for (j, v) in row.iter_mut().enumerate() {
                        let e = if j == vertex { 1.0 } else { 0.0 };
                        *v = (1.0 - t) * base[j] + t * e;
                    }
                    eval.corner(aux).dot(w)
                };
                let (mut lo, mut hi) = (0.0, 1.0);
                let mut a = hi - inv_phi * (hi - lo);
                let mut b = lo + inv_phi * (hi - lo);
                let mut fa = objective(a, &mut cur);
                let mut fb = objective(b, &mut cur);
                for _ in 0..GOLDEN_ITERS {
                    if fa >= fb {
                        hi = b;
                        b = a;
                        fb = fa;
                        a = hi - inv_phi * (hi - lo);
                        fa = objective(a, &mut cur);
                    } else {
                        lo = a;
                        a = b;
                        fa = fb;
                        b = lo + inv_phi * (hi - lo);
                        fb = objective(b, &mut cur);
                    }
                }
                let (mut t_best, mut f_best) = if fa >= fb { (a, fa) } else { (b, fb) };
                let f_end = objective(1.0, &mut cur);
                if f_end > f_best {
                    (t_best, f_best) = (1.0, f_end);
                }
                if f_best > best + IMPROVE_TOL {
                    best = f_best;
                    objective(t_best, &mut cur);
                } else {
                    cur.row_mut(r).copy_from_slice(&base);
                }
            }
        }
        out.push((eval.corner(&cur), cur.clone()));
    }
    out
}

/// Traces the achievable region for `pmf` by searching auxiliary channels.
pub fn search_inner_region(pmf: &JointPmf4, cfg: &SearchConfig) -> Result<RegionFrontier> {
    cfg.validate()?;
    let x3 = pmf.sizes()[JointPmf4::X3];
    let cards = cfg.cardinalities(x3);
    let eval = CornerEvaluator::new(pmf);

    let exhaustive: Vec<AuxChannelSet> = match deterministic_count(x3, cards) {
        Some(count) if cfg.exhaustive_budget > 0 && count <= cfg.exhaustive_budget as u128 => {
            (0..count).map(|i| deterministic_tuple(x3, cards, i)).collect()
        }
        _ => Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, streams::SEARCH_RANDOM, 0));
    let random: Vec<AuxChannelSet> = (0..cfg.random_samples)
        .map(|_| random_tuple(&mut rng, x3, cards))
        .collect();
    if exhaustive.is_empty() && random.is_empty() {
        return Err(Error::BudgetZero);
    }

    let streams: Vec<(Vec<AuxChannelSet>, Vec<RateTriple>)> = [exhaustive, random]
        .into_iter()
        .map(|auxs| {
            let pts: Vec<RateTriple> = auxs.par_iter().map(|a| eval.corner(a)).collect();
            (auxs, pts)
        })
        .collect();

    let starts: Vec<(&AuxChannelSet, [f64; 3])> = if cfg.refine_sweeps == 0 {
        Vec::new()
    } else {
        cfg.weights
            .iter()
            .flat_map(|&w| {
                streams.iter().flat_map(move |(auxs, pts)| {
                    record_setters(pts, w, cfg.refine_starts)
                        .into_iter()
                        .map(move |i| (&auxs[i], w))
                })
            })
            .collect()
    };
    let refined: Vec<(RateTriple, AuxChannelSet)> = starts
        .par_iter()
        .flat_map_iter(|(aux, w)| refine(&eval, aux, *w, cfg.refine_sweeps))
        .collect();

    let mut candidates: Vec<(RateTriple, AuxChannelSet)> = Vec::new();
    for (auxs, pts) in streams {
        candidates.extend(pts.into_iter().zip(auxs));
    }
    candidates.extend(refined);
    Ok(RegionFrontier::from_candidates(candidates))
}
