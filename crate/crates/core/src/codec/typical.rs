use serde::{Deserialize, Serialize};

use crate::dmms::ExtendedPmf;
use crate::error::Result;

/// A joint distribution used as the reference for strong typicality.
///
/// Sequences are typical when every cell of their joint type is within
/// `eps` of its probability and cells of probability zero are empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypTable {
    cards: Vec<usize>,
    probs: Vec<f64>,
}

const STACK_CELLS: usize = 128;

impl TypTable {
    pub fn new(cards: Vec<usize>, probs: Vec<f64>) -> Self {
        assert_eq!(cards.iter().product::<usize>(), probs.len(), "shape mismatch");
        Self { cards, probs }
    }

    pub(crate) fn from_extended(ext: &ExtendedPmf, axes: &[usize]) -> Result<Self> {
        let m = ext.marginal(axes)?;
        Ok(Self::new(m.dims().to_vec(), m.probs().to_vec()))
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Whether `seqs` (one sequence per axis, equal lengths) are jointly
    /// typical.
    pub fn is_typical(&self, seqs: &[&[u8]], eps: f64) -> bool {
        debug_assert_eq!(seqs.len(), self.cards.len());
        let n = seqs[0].len();
        if self.probs.len() <= STACK_CELLS {
            let mut counts = [0u32; STACK_CELLS];
            self.check(seqs, n, eps, &mut counts[..self.probs.len()])
        } else {
            let mut counts = vec![0u32; self.probs.len()];
            self.check(seqs, n, eps, &mut counts)
        }
    }

    fn check(&self, seqs: &[&[u8]], n: usize, eps: f64, counts: &mut [u32]) -> bool {
        for t in 0..n {
            let mut cell = 0;
            for (seq, &card) in seqs.iter().zip(&self.cards) {
                cell = cell * card + seq[t] as usize;
            }
            if self.probs[cell] == 0.0 {
                return false;
            }
            counts[cell] += 1;
        }
        let n = n as f64;
        counts
            .iter()
            .zip(&self.probs)
            .all(|(&c, &p)| (c as f64 / n - p).abs() <= eps)
    }
}
