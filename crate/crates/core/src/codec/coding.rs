use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::codebook::LayeredCodebook;
use super::{KeyTriple, PublicMessage};
use crate::error::{EncoderFailure, Error, Result};

/// Encoder output: keys, public message, and the chosen codeword indices
/// (layer-0 index, then sub-codebook indices under it).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Encoding {
    pub keys: KeyTriple,
    pub message: PublicMessage,
    pub codewords: [usize; 3],
}

fn pick(rng: &mut ChaCha8Rng, candidates: &[usize], layer: usize) -> Result<usize> {
    candidates
        .choose(rng)
        .copied()
        .ok_or(Error::EncoderFailure(EncoderFailure::NoTypicalCodeword(layer)))
}

fn check_len(cb: &LayeredCodebook, seq: &[u8]) -> Result<()> {
    if seq.len() != cb.n {
        return Err(Error::ShapeMismatch(format!(
            "sequence has length {}, codebook blocklength is {}",
            seq.len(),
            cb.n
        )));
    }
    Ok(())
}

/// Terminal 3's encoder. Selections among jointly typical codewords are
/// uniform, drawn from a generator seeded by `seed`.
pub fn encode(cb: &LayeredCodebook, x3: &[u8], typ_eps: f64, seed: u64) -> Result<Encoding> {
    check_len(cb, x3)?;
    if !cb.typ_x3.is_typical(&[x3], typ_eps) {
        return Err(Error::EncoderFailure(EncoderFailure::AtypicalSource));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l0 = &cb.layers[0];
    let cands: Vec<usize> = (0..l0.count())
        .filter(|&j| cb.typ_enc[0].is_typical(&[cb.u0(j), x3], typ_eps))
        .collect();
    let j0 = pick(&mut rng, &cands, 0)?;
    let u0 = cb.u0(j0);
    let mut sub = [0usize; 2];
    for l in 1..=2 {
        let cands: Vec<usize> = (0..cb.layers[l].count())
            .filter(|&j| cb.typ_enc[l].is_typical(&[u0, cb.sub(l, j0, j), x3], typ_eps))
            .collect();
        sub[l - 1] = pick(&mut rng, &cands, l)?;
    }
    let q_index = if cb.cards[3] == 1 {
        0
    } else {
        let (u1, u2) = (cb.sub(1, j0, sub[0]), cb.sub(2, j0, sub[1]));
        let cands: Vec<usize> = (0..cb.q_count)
            .filter(|&i| cb.typ_q.is_typical(&[cb.q_codeword(i), u0, u1, u2], typ_eps))
            .collect();
        pick(&mut rng, &cands, 3)?
    };
    let codewords = [j0, sub[0], sub[1]];
    let keys = KeyTriple {
        k0: cb.layers[0].row(j0),
        k1: cb.layers[1].row(sub[0]),
        k2: cb.layers[2].row(sub[1]),
    };
    let cols = [0, 1, 2].map(|l| cb.layers[l].tag(codewords[l]).1);
    Ok(Encoding {
        keys,
        message: PublicMessage { cols, q_index },
        codewords,
    })
}

/// Decoded `(row, codeword index)` pairs for layer 0 and the terminal's own
/// private layer.
pub(crate) fn decode_codewords(
    cb: &LayeredCodebook,
    terminal: usize,
    x: &[u8],
    msg: &PublicMessage,
    typ_eps: f64,
) -> Result<[usize; 2]> {
    check_len(cb, x)?;
    if msg.q_index >= cb.q_count {
        return Err(Error::ShapeMismatch(format!(
            "q index {} out of range {}",
            msg.q_index, cb.q_count
        )));
    }
    let q = cb.q_codeword(msg.q_index);
    let typ = if terminal == 1 { &cb.typ_t1 } else { &cb.typ_t2 };
    let unique = |layer: usize, cands: Vec<usize>| -> Result<usize> {
        match cands.as_slice() {
            [j] => Ok(*j),
            _ => Err(Error::DecodeFailure {
                layer,
                candidates: cands.len(),
            }),
        }
    };
    let l0 = &cb.layers[0];
    let j0 = unique(
        0,
        l0.column(msg.cols[0])
            .filter(|&j| typ[0].is_typical(&[q, cb.u0(j), x], typ_eps))
            .collect(),
    )?;
    let u0 = cb.u0(j0);
    let own = terminal;
    let j = unique(
        own,
        cb.layers[own]
            .column(msg.cols[own])
            .filter(|&j| typ[1].is_typical(&[q, u0, cb.sub(own, j0, j), x], typ_eps))
            .collect(),
    )?;
    Ok([j0, j])
}

/// Terminal 1's estimates `(k0, k1)`.
pub fn decode_t1(
    cb: &LayeredCodebook,
    x1: &[u8],
    msg: &PublicMessage,
    typ_eps: f64,
) -> Result<(usize, usize)> {
    let [j0, j1] = decode_codewords(cb, 1, x1, msg, typ_eps)?;
    Ok((cb.layers[0].row(j0), cb.layers[1].row(j1)))
}

/// Terminal 2's estimates `(k0, k2)`.
pub fn decode_t2(
    cb: &LayeredCodebook,
    x2: &[u8],
    msg: &PublicMessage,
    typ_eps: f64,
) -> Result<(usize, usize)> {
    let [j0, j2] = decode_codewords(cb, 2, x2, msg, typ_eps)?;
    Ok((cb.layers[0].row(j0), cb.layers[2].row(j2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{build_codebook, CodebookParams};
    use crate::dmms::{AuxChannelSet, JointPmf4};

    #[test]
    fn all_zero_block_is_atypical() {
        let pmf = JointPmf4::binary_chain([0.1, 0.1, 0.1], [2, 0, 1, 3]).unwrap();
        let cb = build_codebook(
            &pmf,
            &AuxChannelSet::identity_u0(2),
            &CodebookParams::default(),
            0,
        )
        .unwrap();
        assert!(matches!(
            encode(&cb, &[0; 12], 0.05, 0),
            Err(Error::EncoderFailure(EncoderFailure::AtypicalSource))
        ));
    }

    #[test]
    fn single_bin_codebook_on_a_deterministic_source() {
        // Every terminal sees the same constant symbol.
        let mut probs = vec![0.0; 16];
        probs[0] = 1.0;
        let pmf = JointPmf4::new([2, 2, 2, 2], probs).unwrap();
        let cb = build_codebook(
            &pmf,
            &AuxChannelSet::identity_u0(2),
            &CodebookParams {
                eps1: 0.0,
                ..CodebookParams::default()
            },
            0,
        )
        .unwrap();
        assert_eq!([0, 1, 2].map(|l| cb.layer(l).count()), [1, 1, 1]);
        let enc = encode(&cb, &[0; 12], 0.05, 0).unwrap();
        assert_eq!(enc.keys, KeyTriple { k0: 0, k1: 0, k2: 0 });
        assert_eq!(enc.message.cols, [0, 0, 0]);
        assert_eq!(decode_t1(&cb, &[0; 12], &enc.message, 0.05).unwrap(), (0, 0));
        assert_eq!(decode_t2(&cb, &[0; 12], &enc.message, 0.05).unwrap(), (0, 0));
    }
}
