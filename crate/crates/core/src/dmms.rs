//! The four-source joint distribution, its extension by auxiliary channels,
//! Markov-structure tests and i.i.d. sampling.
//!
//! Terminal `i` observes source `Xi`. Axis `i - 1` of a [`JointPmf4`] holds
//! `Xi`; use the associated constants ([`JointPmf4::X1`], ...) rather than raw
//! numbers.

use std::fmt;
use std::fs;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info;
use crate::table::{self, ConditionalTable, ProbTable};

/// Largest supported alphabet; symbols are stored as `u8`.
pub const MAX_ALPHABET: usize = 256;

/// Tolerance on the mass of each conditional row of an [`AuxChannelSet`].
const ROW_TOL: f64 = 1e-9;

/// A Markov ordering `A - B - C - D` of the four source axes.
pub type Chain = [usize; 4];

/// Human-readable form of a chain, e.g. `X3-X1-X4-X2`.
pub fn chain_label(chain: &Chain) -> String {
    chain
        .iter()
        .map(|a| format!("X{}", a + 1))
        .collect::<Vec<_>>()
        .join("-")
}

/// Exact joint distribution `p(x1, x2, x3, x4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointPmf4 {
    table: ProbTable,
}

/// On-disk form: `{"alphabet_sizes":[a,b,c,d],"probs":[...]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmfFile {
    pub alphabet_sizes: Vec<usize>,
    pub probs: Vec<f64>,
}

impl JointPmf4 {
    pub const X1: usize = 0;
    pub const X2: usize = 1;
    pub const X3: usize = 2;
    pub const X4: usize = 3;

    pub fn new(sizes: [usize; 4], probs: Vec<f64>) -> Result<Self> {
        if let Some(&s) = sizes.iter().find(|&&s| s > MAX_ALPHABET) {
            return Err(Error::ShapeMismatch(format!(
                "alphabet of size {s} exceeds the supported maximum {MAX_ALPHABET}"
            )));
        }
        Ok(Self {
            table: ProbTable::new(sizes.to_vec(), probs)?,
        })
    }

    pub fn sizes(&self) -> [usize; 4] {
        let d = self.table.dims();
        [d[0], d[1], d[2], d[3]]
    }

    pub fn table(&self) -> &ProbTable {
        &self.table
    }

    pub fn probs(&self) -> &[f64] {
        self.table.probs()
    }

    pub fn marginal(&self, keep: &[usize]) -> Result<ProbTable> {
        self.table.marginal(keep)
    }

    pub fn conditional(&self, target: &[usize], given: &[usize]) -> Result<ConditionalTable> {
        table::conditional(&self.table, target, given)
    }

    /// Joint built as `p(a) p(b|a) p(c|b) p(d|c)` along `chain`.
    ///
    /// `kernels[k][v]` is the distribution of the `(k+1)`-th chain variable
    /// given the previous one equals `v`.
    pub fn markov_chain(chain: Chain, first: &[f64], kernels: [&[Vec<f64>]; 3]) -> Result<Self> {
        check_permutation(&chain)?;
        let mut chain_sizes = [first.len(), 0, 0, 0];
        for (k, kernel) in kernels.iter().enumerate() {
            if kernel.len() != chain_sizes[k] || kernel.is_empty() {
                return Err(Error::ShapeMismatch(format!(
                    "kernel {k} has {} rows, expected {}",
                    kernel.len(),
                    chain_sizes[k]
                )));
            }
            chain_sizes[k + 1] = kernel[0].len();
            if kernel.iter().any(|row| row.len() != chain_sizes[k + 1]) {
                return Err(Error::ShapeMismatch(format!("ragged kernel {k}")));
            }
        }
        let mut sizes = [0; 4];
        for (pos, &axis) in chain.iter().enumerate() {
            sizes[axis] = chain_sizes[pos];
        }
        let mut probs = vec![0.0; sizes.iter().product()];
        let dims = sizes;
        for a in 0..chain_sizes[0] {
            for b in 0..chain_sizes[1] {
                for c in 0..chain_sizes[2] {
                    for d in 0..chain_sizes[3] {
                        let p = first[a] * kernels[0][a][b] * kernels[1][b][c] * kernels[2][c][d];
                        let mut coords = [0; 4];
                        coords[chain[0]] = a;
                        coords[chain[1]] = b;
                        coords[chain[2]] = c;
                        coords[chain[3]] = d;
                        let idx = coords.iter().zip(&dims).fold(0, |acc, (&x, &n)| acc * n + x);
                        probs[idx] = p;
                    }
                }
            }
        }
        Self::new(sizes, probs)
    }

    /// Binary chain `A - B - C - D` along `chain`: `A` is a fair bit and each
    /// successor is its predecessor XOR an independent Bernoulli flip with
    /// probabilities `flips[0]`, `flips[1]`, `flips[2]`.
    pub fn binary_chain(flips: [f64; 3], chain: Chain) -> Result<Self> {
        let bsc = |f: f64| vec![vec![1.0 - f, f], vec![f, 1.0 - f]];
        let (k0, k1, k2) = (bsc(flips[0]), bsc(flips[1]), bsc(flips[2]));
        Self::markov_chain(chain, &[0.5, 0.5], [&k0, &k1, &k2])
    }

    pub fn from_file_repr(file: PmfFile) -> Result<Self> {
        let sizes: [usize; 4] = file.alphabet_sizes.as_slice().try_into().map_err(|_| {
            Error::ShapeMismatch(format!(
                "expected 4 alphabet sizes, got {}",
                file.alphabet_sizes.len()
            ))
        })?;
        Self::new(sizes, file.probs)
    }

    pub fn to_file_repr(&self) -> PmfFile {
        PmfFile {
            alphabet_sizes: self.sizes().to_vec(),
            probs: self.probs().to_vec(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_file_repr(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_file_repr()).expect("pmf serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&fs::read_to_string(path)?)
    }
}

fn check_permutation(chain: &Chain) -> Result<()> {
    let mut seen = [false; 4];
    for &a in chain {
        if a >= 4 || seen[a] {
            return Err(Error::BadSubset(chain.to_vec()));
        }
        seen[a] = true;
    }
    Ok(())
}

/// Whether `chain = A - B - C - D` is a Markov chain of `pmf`:
/// `I(A; C, D | B) <= tol` and `I(A, B; D | C) <= tol`.
///
/// # Panics
///
/// If `chain` is not a permutation of the four source axes.
pub fn is_markov_chain(pmf: &JointPmf4, chain: Chain, tol: f64) -> bool {
    check_permutation(&chain).expect("chain must be a permutation of the four sources");
    let [a, b, c, d] = chain;
    let t = pmf.table();
    let first = info::conditional_mutual_information(t, &[a], &[c, d], &[b]);
    let second = info::conditional_mutual_information(t, &[a, b], &[d], &[c]);
    match (first, second) {
        (Ok(x), Ok(y)) => x <= tol && y <= tol,
        _ => false,
    }
}

/// Auxiliary channels `p(u0|x3)`, `p(u1|u0,x3)`, `p(u2|u0,x3)` and
/// `p(q|u0,u1,u2)`.
///
/// Row layouts: `ch_u0[x3]`, `ch_u1[u0 * |X3| + x3]`, `ch_u2[u0 * |X3| + x3]`,
/// `ch_q[(u0 * |U1| + u1) * |U2| + u2]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AuxChannelRepr", into = "AuxChannelRepr")]
pub struct AuxChannelSet {
    card_u0: usize,
    card_u1: usize,
    card_u2: usize,
    card_q: usize,
    x3_card: usize,
    pub(crate) ch_u0: Vec<Vec<f64>>,
    pub(crate) ch_u1: Vec<Vec<f64>>,
    pub(crate) ch_u2: Vec<Vec<f64>>,
    pub(crate) ch_q: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AuxChannelRepr {
    card_u0: usize,
    card_u1: usize,
    card_u2: usize,
    card_q: usize,
    ch_u0: Vec<Vec<f64>>,
    ch_u1: Vec<Vec<f64>>,
    ch_u2: Vec<Vec<f64>>,
    ch_q: Vec<Vec<f64>>,
}

impl TryFrom<AuxChannelRepr> for AuxChannelSet {
    type Error = Error;

    fn try_from(r: AuxChannelRepr) -> Result<Self> {
        Self::new(
            [r.card_u0, r.card_u1, r.card_u2, r.card_q],
            r.ch_u0,
            r.ch_u1,
            r.ch_u2,
            r.ch_q,
        )
    }
}

impl From<AuxChannelSet> for AuxChannelRepr {
    fn from(a: AuxChannelSet) -> Self {
        Self {
            card_u0: a.card_u0,
            card_u1: a.card_u1,
            card_u2: a.card_u2,
            card_q: a.card_q,
            ch_u0: a.ch_u0,
            ch_u1: a.ch_u1,
            ch_u2: a.ch_u2,
            ch_q: a.ch_q,
        }
    }
}

fn check_rows(name: &str, rows: &mut [Vec<f64>], count: usize, width: usize) -> Result<()> {
    if rows.len() != count {
        return Err(Error::ShapeMismatch(format!(
            "{name} has {} rows, expected {count}",
            rows.len()
        )));
    }
    for (r, row) in rows.iter_mut().enumerate() {
        if row.len() != width {
            return Err(Error::ShapeMismatch(format!(
                "{name} row {r} has {} entries, expected {width}",
                row.len()
            )));
        }
        for (index, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteProbability { index });
            }
            if v < 0.0 {
                return Err(Error::NegativeProbability { index, value: v });
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_TOL {
            return Err(Error::NotNormalized { sum });
        }
        row.iter_mut().for_each(|v| *v /= sum);
    }
    Ok(())
}

fn point_mass(width: usize, at: usize) -> Vec<f64> {
    let mut row = vec![0.0; width];
    row[at] = 1.0;
    row
}

impl AuxChannelSet {
    /// Validates the four conditional tables. `|X3|` is the row count of
    /// `ch_u0`.
    pub fn new(
        cards: [usize; 4],
        mut ch_u0: Vec<Vec<f64>>,
        mut ch_u1: Vec<Vec<f64>>,
        mut ch_u2: Vec<Vec<f64>>,
        mut ch_q: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let [card_u0, card_u1, card_u2, card_q] = cards;
        if cards.iter().any(|&c| c == 0 || c > MAX_ALPHABET) {
            return Err(Error::ShapeMismatch(format!(
                "auxiliary cardinalities must be in 1..={MAX_ALPHABET}, got {cards:?}"
            )));
        }
        let x3_card = ch_u0.len();
        if x3_card == 0 {
            return Err(Error::ShapeMismatch("ch_u0 has no rows".into()));
        }
        check_rows("ch_u0", &mut ch_u0, x3_card, card_u0)?;
        check_rows("ch_u1", &mut ch_u1, card_u0 * x3_card, card_u1)?;
        check_rows("ch_u2", &mut ch_u2, card_u0 * x3_card, card_u2)?;
        check_rows("ch_q", &mut ch_q, card_u0 * card_u1 * card_u2, card_q)?;
        Ok(Self {
            card_u0,
            card_u1,
            card_u2,
            card_q,
            x3_card,
            ch_u0,
            ch_u1,
            ch_u2,
            ch_q,
        })
    }

    /// Channels given by deterministic maps.
    ///
    /// `u0_of[x3]`, `u1_of[u0 * |X3| + x3]`, `u2_of[u0 * |X3| + x3]`,
    /// `q_of[(u0 * |U1| + u1) * |U2| + u2]`.
    pub fn deterministic(
        cards: [usize; 4],
        u0_of: &[usize],
        u1_of: &[usize],
        u2_of: &[usize],
        q_of: &[usize],
    ) -> Result<Self> {
        let rows = |map: &[usize], width: usize| -> Result<Vec<Vec<f64>>> {
            map.iter()
                .map(|&v| {
                    if v < width {
                        Ok(point_mass(width, v))
                    } else {
                        Err(Error::ShapeMismatch(format!(
                            "deterministic map value {v} outside alphabet of size {width}"
                        )))
                    }
                })
                .collect()
        };
        Self::new(
            cards,
            rows(u0_of, cards[0])?,
            rows(u1_of, cards[1])?,
            rows(u2_of, cards[2])?,
            rows(q_of, cards[3])?,
        )
    }

    /// All auxiliaries constant.
    pub fn trivial(x3_card: usize) -> Self {
        Self::deterministic([1, 1, 1, 1], &vec![0; x3_card], &vec![0; x3_card], &vec![0; x3_card], &[0])
            .expect("trivial channels are valid")
    }

    /// `U0 = X3`; `U1`, `U2`, `Q` constant.
    pub fn identity_u0(x3_card: usize) -> Self {
        let u0: Vec<usize> = (0..x3_card).collect();
        let zeros = vec![0; x3_card * x3_card];
        Self::deterministic([x3_card, 1, 1, 1], &u0, &zeros, &zeros, &vec![0; x3_card])
            .expect("identity channels are valid")
    }

    /// `U1 = X3`; `U0`, `U2`, `Q` constant.
    pub fn identity_u1(x3_card: usize) -> Self {
        let x3: Vec<usize> = (0..x3_card).collect();
        let zeros = vec![0; x3_card];
        Self::deterministic([1, x3_card, 1, 1], &zeros, &x3, &zeros, &zeros)
            .expect("identity channels are valid")
    }

    /// `U2 = X3`; `U0`, `U1`, `Q` constant.
    pub fn identity_u2(x3_card: usize) -> Self {
        let x3: Vec<usize> = (0..x3_card).collect();
        let zeros = vec![0; x3_card];
        Self::deterministic([1, 1, x3_card, 1], &zeros, &zeros, &x3, &zeros)
            .expect("identity channels are valid")
    }

    pub fn card_u0(&self) -> usize {
        self.card_u0
    }
    pub fn card_u1(&self) -> usize {
        self.card_u1
    }
    pub fn card_u2(&self) -> usize {
        self.card_u2
    }
    pub fn card_q(&self) -> usize {
        self.card_q
    }
    pub fn x3_card(&self) -> usize {
        self.x3_card
    }

    pub fn ch_u0(&self) -> &[Vec<f64>] {
        &self.ch_u0
    }
    pub fn ch_u1(&self) -> &[Vec<f64>] {
        &self.ch_u1
    }
    pub fn ch_u2(&self) -> &[Vec<f64>] {
        &self.ch_u2
    }
    pub fn ch_q(&self) -> &[Vec<f64>] {
        &self.ch_q
    }

    /// `p(u0|x3) p(u1|u0,x3) p(u2|u0,x3) p(q|u0,u1,u2)`.
    #[inline]
    pub fn weight(&self, q: usize, u0: usize, u1: usize, u2: usize, x3: usize) -> f64 {
        let r = u0 * self.x3_card + x3;
        self.ch_u0[x3][u0]
            * self.ch_u1[r][u1]
            * self.ch_u2[r][u2]
            * self.ch_q[(u0 * self.card_u1 + u1) * self.card_u2 + u2][q]
    }

    pub(crate) fn row_count(&self) -> usize {
        self.ch_u0.len() + self.ch_u1.len() + self.ch_u2.len() + self.ch_q.len()
    }

    pub(crate) fn row_mut(&mut self, mut i: usize) -> &mut Vec<f64> {
        for rows in [&mut self.ch_u0, &mut self.ch_u1, &mut self.ch_u2, &mut self.ch_q] {
            if i < rows.len() {
                return &mut rows[i];
            }
            i -= rows.len();
        }
        panic!("row index out of range")
    }
}

/// Joint distribution of `(q, u0, u1, u2, x1, x2, x3, x4)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedPmf {
    table: ProbTable,
}

impl ExtendedPmf {
    pub const Q: usize = 0;
    pub const U0: usize = 1;
    pub const U1: usize = 2;
    pub const U2: usize = 3;
    pub const X1: usize = 4;
    pub const X2: usize = 5;
    pub const X3: usize = 6;
    pub const X4: usize = 7;

    pub fn table(&self) -> &ProbTable {
        &self.table
    }

    pub fn marginal(&self, keep: &[usize]) -> Result<ProbTable> {
        self.table.marginal(keep)
    }

    /// The source distribution recovered by summing out the auxiliaries.
    pub fn source_marginal(&self) -> JointPmf4 {
        JointPmf4 {
            table: self
                .table
                .marginalize(&[Self::X1, Self::X2, Self::X3, Self::X4]),
        }
    }
}

/// Extends `pmf` by the auxiliaries through
/// `p(q|u0,u1,u2) p(u0|x3) p(u1|u0,x3) p(u2|u0,x3) p(x1,x2,x3,x4)`.
pub fn extend_with_aux(pmf: &JointPmf4, aux: &AuxChannelSet) -> Result<ExtendedPmf> {
    let [s1, s2, s3, s4] = pmf.sizes();
    if aux.x3_card() != s3 {
        return Err(Error::ShapeMismatch(format!(
            "auxiliary channels expect |X3| = {}, source has {s3}",
            aux.x3_card()
        )));
    }
    let (cq, c0, c1, c2) = (aux.card_q(), aux.card_u0(), aux.card_u1(), aux.card_u2());
    let src = pmf.probs();
    let src_len = src.len();
    let mut probs = Vec::with_capacity(cq * c0 * c1 * c2 * src_len);
    for q in 0..cq {
        for u0 in 0..c0 {
            for u1 in 0..c1 {
                for u2 in 0..c2 {
                    for (i, &p) in src.iter().enumerate() {
                        let x3 = (i / s4) % s3;
                        probs.push(p * aux.weight(q, u0, u1, u2, x3));
                    }
                }
            }
        }
    }
    Ok(ExtendedPmf {
        table: ProbTable::from_parts(vec![cq, c0, c1, c2, s1, s2, s3, s4], probs),
    })
}

/// `n` symbols per terminal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceBlock {
    pub n: usize,
    pub x1: Vec<u8>,
    pub x2: Vec<u8>,
    pub x3: Vec<u8>,
    pub x4: Vec<u8>,
}

impl SourceBlock {
    /// The sequence observed by terminal `axis + 1`.
    pub fn terminal(&self, axis: usize) -> &[u8] {
        match axis {
            0 => &self.x1,
            1 => &self.x2,
            2 => &self.x3,
            3 => &self.x4,
            _ => panic!("no terminal for axis {axis}"),
        }
    }
}

impl fmt::Display for SourceBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, seq) in [("x1", &self.x1), ("x2", &self.x2), ("x3", &self.x3), ("x4", &self.x4)] {
            write!(f, "{name}: ")?;
            for s in seq {
                write!(f, "{s}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Draws `n` i.i.d. symbols from `pmf`; identical seeds give identical blocks.
pub fn sample_iid(pmf: &JointPmf4, n: usize, seed: u64) -> SourceBlock {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = WeightedIndex::new(pmf.probs()).expect("validated pmf has positive mass");
    let [_, s2, s3, s4] = pmf.sizes();
    let mut block = SourceBlock {
        n,
        x1: Vec::with_capacity(n),
        x2: Vec::with_capacity(n),
        x3: Vec::with_capacity(n),
        x4: Vec::with_capacity(n),
    };
    for _ in 0..n {
        let i = dist.sample(&mut rng);
        block.x4.push((i % s4) as u8);
        block.x3.push(((i / s4) % s3) as u8);
        block.x2.push(((i / (s4 * s3)) % s2) as u8);
        block.x1.push((i / (s4 * s3 * s2)) as u8);
    }
    block
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::mutual_information;

    const X1: usize = JointPmf4::X1;
    const X2: usize = JointPmf4::X2;
    const X3: usize = JointPmf4::X3;
    const X4: usize = JointPmf4::X4;

    #[test]
    fn uniform_and_degenerate_pmfs_are_valid() {
        assert!(JointPmf4::new([2, 2, 2, 2], vec![1.0 / 16.0; 16]).is_ok());
        assert!(JointPmf4::new([1, 1, 1, 1], vec![1.0]).is_ok());
    }

    #[test]
    fn rejects_bad_pmfs() {
        assert!(matches!(
            JointPmf4::new([2, 2, 2, 2], vec![0.98 / 16.0; 16]),
            Err(Error::NotNormalized { .. })
        ));
        let mut neg = vec![1.0 / 16.0; 16];
        neg[0] = -0.1;
        neg[1] += 0.1;
        assert!(matches!(
            JointPmf4::new([2, 2, 2, 2], neg),
            Err(Error::NegativeProbability { index: 0, .. })
        ));
        assert!(matches!(
            JointPmf4::new([2, 2, 2, 2], vec![0.125; 8]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn json_parser_rejects_bad_files() {
        assert!(matches!(
            JointPmf4::from_json_str(r#"{"alphabet_sizes":[2,2,2,2],"probs":[NaN]}"#),
            Err(Error::Json(_))
        ));
        assert!(matches!(
            JointPmf4::from_json_str(r#"{"alphabet_sizes":[2,2,2],"probs":[0.125,0.125,0.125,0.125,0.125,0.125,0.125,0.125]}"#),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            JointPmf4::from_json_str(r#"{"alphabet_sizes":[1,1,1,2],"probs":[1.5,-0.5]}"#),
            Err(Error::NegativeProbability { .. })
        ));
        let pmf = JointPmf4::binary_chain([0.1, 0.2, 0.3], [X3, X1, X2, X4]).unwrap();
        let back = JointPmf4::from_json_str(&pmf.to_json_string()).unwrap();
        assert!(back.table().max_abs_diff(pmf.table()).unwrap() < 1e-15);
    }

    #[test]
    fn uniform_marginal_is_fair_bit() {
        let pmf = JointPmf4::new([2, 2, 2, 2], vec![1.0 / 16.0; 16]).unwrap();
        assert_eq!(pmf.marginal(&[X1]).unwrap().probs(), &[0.5, 0.5]);
        assert_eq!(pmf.marginal(&[X1, X2, X3, X4]).unwrap(), *pmf.table());
    }

    #[test]
    fn conditional_of_deterministic_copy_is_identity() {
        // X1 = X3 uniform, others independent uniform.
        let mut probs = vec![0.0; 16];
        for x1 in 0..2 {
            for x2 in 0..2 {
                for x4 in 0..2 {
                    probs[((x1 * 2 + x2) * 2 + x1) * 2 + x4] = 0.125;
                }
            }
        }
        let pmf = JointPmf4::new([2, 2, 2, 2], probs).unwrap();
        let c = pmf.conditional(&[X1], &[X3]).unwrap();
        assert_eq!(c.row(&[0]), Some(&[1.0, 0.0][..]));
        assert_eq!(c.row(&[1]), Some(&[0.0, 1.0][..]));
        let uniform = JointPmf4::new([2, 2, 2, 2], vec![1.0 / 16.0; 16]).unwrap();
        let c = uniform.conditional(&[X1], &[X2]).unwrap();
        assert_eq!(c.row(&[0]), Some(&[0.5, 0.5][..]));
    }

    #[test]
    fn binary_chain_follows_requested_order() {
        // X1 - X3 - X4 - X2: X3 is one flip away from X1.
        let pmf = JointPmf4::binary_chain([0.1, 0.2, 0.3], [X1, X3, X4, X2]).unwrap();
        let c = pmf.conditional(&[X3], &[X1]).unwrap();
        assert!((c.row(&[0]).unwrap()[1] - 0.1).abs() < 1e-15);
        assert!(is_markov_chain(&pmf, [X1, X3, X4, X2], 1e-12));
        assert!(!is_markov_chain(&pmf, [X3, X1, X4, X2], 1e-6));
    }

    #[test]
    fn identity_aux_gives_diagonal_u0_x3() {
        let pmf = JointPmf4::binary_chain([0.1, 0.1, 0.1], [X3, X1, X2, X4]).unwrap();
        let ext = extend_with_aux(&pmf, &AuxChannelSet::identity_u0(2)).unwrap();
        let m = ext.marginal(&[ExtendedPmf::U0, ExtendedPmf::X3]).unwrap();
        assert!((m.get(&[0, 0]) - 0.5).abs() < 1e-15);
        assert_eq!(m.get(&[0, 1]), 0.0);
        assert_eq!(m.get(&[1, 0]), 0.0);
        let mi = mutual_information(ext.table(), &[ExtendedPmf::U0], &[ExtendedPmf::X3]).unwrap();
        assert!((mi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trivial_aux_keeps_source() {
        let pmf = JointPmf4::binary_chain([0.2, 0.1, 0.4], [X2, X1, X3, X4]).unwrap();
        let ext = extend_with_aux(&pmf, &AuxChannelSet::trivial(2)).unwrap();
        assert_eq!(ext.table().dims(), &[1, 1, 1, 1, 2, 2, 2, 2]);
        assert_eq!(ext.table().probs(), pmf.probs());
    }

    #[test]
    fn extension_rejects_mismatched_x3() {
        let pmf = JointPmf4::new([1, 1, 3, 1], vec![0.2, 0.3, 0.5]).unwrap();
        assert!(matches!(
            extend_with_aux(&pmf, &AuxChannelSet::identity_u0(2)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn aux_rows_must_be_distributions() {
        let bad = AuxChannelSet::new(
            [2, 1, 1, 1],
            vec![vec![0.5, 0.4], vec![0.0, 1.0]],
            vec![vec![1.0]; 4],
            vec![vec![1.0]; 4],
            vec![vec![1.0]; 2],
        );
        assert!(matches!(bad, Err(Error::NotNormalized { .. })));
        let short = AuxChannelSet::new(
            [2, 1, 1, 1],
            vec![vec![0.5, 0.5], vec![0.0, 1.0]],
            vec![vec![1.0]; 3],
            vec![vec![1.0]; 4],
            vec![vec![1.0]; 2],
        );
        assert!(matches!(short, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn aux_serde_roundtrip_validates() {
        let aux = AuxChannelSet::identity_u1(2);
        let json = serde_json::to_string(&aux).unwrap();
        assert_eq!(serde_json::from_str::<AuxChannelSet>(&json).unwrap(), aux);
        let broken = json.replace("1.0", "2.0");
        assert!(serde_json::from_str::<AuxChannelSet>(&broken).is_err());
    }

    #[test]
    fn degenerate_pmf_samples_constants() {
        let pmf = JointPmf4::new([1, 2, 1, 1], vec![0.0, 1.0]).unwrap();
        let block = sample_iid(&pmf, 50, 3);
        assert!(block.x1.iter().all(|&s| s == 0));
        assert!(block.x2.iter().all(|&s| s == 1));
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let pmf = JointPmf4::binary_chain([0.1, 0.2, 0.3], [X3, X1, X2, X4]).unwrap();
        assert_eq!(sample_iid(&pmf, 1000, 42), sample_iid(&pmf, 1000, 42));
        assert_ne!(sample_iid(&pmf, 1000, 42), sample_iid(&pmf, 1000, 43));
    }

    #[test]
    fn coupled_sources_never_disagree() {
        let pmf = JointPmf4::binary_chain([0.0, 0.3, 0.2], [X1, X3, X2, X4]).unwrap();
        let block = sample_iid(&pmf, 100_000, 5);
        assert!(block.x1.iter().zip(&block.x3).all(|(a, b)| a == b));
    }
}
