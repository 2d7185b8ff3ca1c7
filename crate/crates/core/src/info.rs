//! Shannon measures in bits.
//!
//! Exact quantities are computed from a [`ProbTable`] by marginalizing onto
//! variable groups (given as axis indices). Mutual informations are formed
//! from entropies and clamped at zero when floating-point cancellation leaves
//! a value in `[-NEGATIVE_TOL, 0)`; anything more negative is reported as an
//! error since it can only come from a bug upstream.

use crate::error::{Error, Result};
use crate::table::{ProbTable, NORMALIZATION_TOL};

/// Information in bits (per symbol when rate-normalized).
pub type Bits = f64;

/// Negative values down to this are treated as rounding noise.
pub const NEGATIVE_TOL: f64 = 1e-9;

fn plogp_sum(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// Entropy of a raw probability vector, `0 log 0 = 0`.
pub fn entropy(probs: &[f64]) -> Result<Bits> {
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOL || probs.iter().any(|&p| p < 0.0) {
        return Err(Error::NotNormalized { sum });
    }
    Ok(plogp_sum(probs).max(0.0))
}

/// Joint entropy of all axes of a validated table.
pub fn table_entropy(table: &ProbTable) -> Bits {
    plogp_sum(table.probs()).max(0.0)
}

/// `H(axes)` of the marginal; the empty group has zero entropy.
pub(crate) fn marginal_entropy(table: &ProbTable, axes: &[usize]) -> Bits {
    if axes.is_empty() {
        return 0.0;
    }
    table_entropy(&table.marginalize(axes))
}

pub(crate) fn clamp_information(value: f64) -> Result<Bits> {
    if value < -NEGATIVE_TOL {
        Err(Error::NegativeInformation(value))
    } else {
        Ok(value.max(0.0))
    }
}

fn check_groups(table: &ProbTable, groups: &[&[usize]], allow_empty_last: bool) -> Result<()> {
    let mut seen = vec![false; table.rank()];
    for (i, group) in groups.iter().enumerate() {
        let may_be_empty = allow_empty_last && i == groups.len() - 1;
        if group.is_empty() && !may_be_empty {
            return Err(Error::BadPartition);
        }
        for &a in *group {
            if a >= table.rank() || seen[a] {
                return Err(Error::BadPartition);
            }
            seen[a] = true;
        }
    }
    Ok(())
}

fn union(groups: &[&[usize]]) -> Vec<usize> {
    let mut all: Vec<usize> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    all.sort_unstable();
    all
}

/// `I(A; B) = H(A) + H(B) - H(A, B)`.
pub fn mutual_information(table: &ProbTable, a: &[usize], b: &[usize]) -> Result<Bits> {
    check_groups(table, &[a, b], false)?;
    let value = marginal_entropy(table, a) + marginal_entropy(table, b)
        - marginal_entropy(table, &union(&[a, b]));
    clamp_information(value)
}

/// `I(A; B | C) = H(A, C) + H(B, C) - H(A, B, C) - H(C)`.
///
/// An empty `c` reduces to [`mutual_information`].
pub fn conditional_mutual_information(
    table: &ProbTable,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<Bits> {
    check_groups(table, &[a, b, c], true)?;
    let value = marginal_entropy(table, &union(&[a, c])) + marginal_entropy(table, &union(&[b, c]))
        - marginal_entropy(table, &union(&[a, b, c]))
        - marginal_entropy(table, c);
    clamp_information(value)
}

/// `H(A | B)`.
pub fn conditional_entropy(table: &ProbTable, a: &[usize], b: &[usize]) -> Result<Bits> {
    check_groups(table, &[a, b], true)?;
    let value = marginal_entropy(table, &union(&[a, b])) - marginal_entropy(table, b);
    clamp_information(value)
}

/// Empirical (maximum-likelihood) joint distribution of paired sample columns.
///
/// `columns[k][t]` is the `t`-th observation of variable `k`, which takes
/// values in `0..cards[k]`.
pub fn empirical_table(columns: &[&[usize]], cards: &[usize]) -> Result<ProbTable> {
    if columns.len() != cards.len() || columns.is_empty() {
        return Err(Error::ShapeMismatch(
            "one alphabet size per sample column is required".into(),
        ));
    }
    let len = columns[0].len();
    if len == 0 {
        return Err(Error::EmptySample);
    }
    if columns.iter().any(|c| c.len() != len) {
        return Err(Error::ShapeMismatch("sample columns differ in length".into()));
    }
    let cells: usize = cards.iter().product();
    let mut counts = vec![0u64; cells];
    for t in 0..len {
        let mut idx = 0;
        for (col, &card) in columns.iter().zip(cards) {
            let s = col[t];
            if s >= card {
                return Err(Error::ShapeMismatch(format!(
                    "symbol {s} outside alphabet of size {card}"
                )));
            }
            idx = idx * card + s;
        }
        counts[idx] += 1;
    }
    let total = len as f64;
    Ok(ProbTable::from_parts(
        cards.to_vec(),
        counts.into_iter().map(|c| c as f64 / total).collect(),
    ))
}

/// Plug-in entropy of a sample.
pub fn empirical_entropy(samples: &[usize], card: usize) -> Result<Bits> {
    Ok(table_entropy(&empirical_table(&[samples], &[card])?))
}

/// Plug-in mutual information between paired samples of `A` and `B`.
pub fn empirical_mi(a: &[usize], b: &[usize], card_a: usize, card_b: usize) -> Result<Bits> {
    let joint = empirical_table(&[a, b], &[card_a, card_b])?;
    mutual_information(&joint, &[0], &[1])
}
