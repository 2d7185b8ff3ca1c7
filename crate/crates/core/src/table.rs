//! Dense probability tables over finite alphabets.
//!
//! A [`ProbTable`] is a row-major tensor: the last axis varies fastest, so the
//! flat index of `(a, b, c)` with sizes `(A, B, C)` is `(a * B + b) * C + c`.
//! Every joint distribution in the crate (the four-source joint, its extension
//! by auxiliary variables, empirical histograms) is one of these.

use crate::error::{Error, Result};

/// Tolerance on the total mass accepted by the validating constructors.
pub const NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbTable {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl ProbTable {
    /// Validates and wraps a flat probability array.
    ///
    /// Entries must be finite and non-negative and sum to one within
    /// [`NORMALIZATION_TOL`]; the stored table is rescaled to unit mass.
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::ShapeMismatch(format!(
                "alphabet sizes must be positive, got {dims:?}"
            )));
        }
        let expected: usize = dims.iter().product();
        if probs.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{} probabilities for alphabet sizes {dims:?} (expected {expected})",
                probs.len()
            )));
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteProbability { index });
            }
            if value < 0.0 {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        let probs = probs.into_iter().map(|p| p / sum).collect();
        Ok(Self { dims, probs })
    }

    /// Builds a table from unnormalized non-negative weights.
    pub fn from_weights(dims: Vec<usize>, weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::NotNormalized { sum });
        }
        Self::new(dims, weights.into_iter().map(|w| w / sum).collect())
    }

    /// Wraps data the caller has already normalized.
    pub(crate) fn from_parts(dims: Vec<usize>, probs: Vec<f64>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), probs.len());
        Self { dims, probs }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn rank(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn flat_index(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dims.len());
        coords
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&c, &d)| acc * d + c)
    }

    pub fn get(&self, coords: &[usize]) -> f64 {
        self.probs[self.flat_index(coords)]
    }

    /// Marginal onto `keep`, with the result's axes in the order given.
    pub fn marginal(&self, keep: &[usize]) -> Result<ProbTable> {
        if keep.is_empty() {
            return Err(Error::BadSubset(keep.to_vec()));
        }
        self.check_axes(keep)?;
        Ok(self.marginalize(keep))
    }

    pub(crate) fn check_axes(&self, axes: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.rank()];
        for &a in axes {
            if a >= self.rank() || seen[a] {
                return Err(Error::BadSubset(axes.to_vec()));
            }
            seen[a] = true;
        }
        Ok(())
    }

    /// Marginal without validation; an empty `keep` yields a rank-0 table
    /// holding the total mass.
    pub(crate) fn marginalize(&self, keep: &[usize]) -> ProbTable {
        let out_dims: Vec<usize> = keep.iter().map(|&a| self.dims[a]).collect();
        let out_len: usize = out_dims.iter().product();
        // Stride of each source axis inside the output (0 when summed out).
        let mut out_stride = vec![0usize; self.rank()];
        let mut s = 1;
        for (pos, &a) in keep.iter().enumerate().rev() {
            out_stride[a] = s;
            s *= out_dims[pos];
        }
        let mut out = vec![0.0; out_len];
        let mut coords = vec![0usize; self.rank()];
        let mut target = 0usize;
        for &p in &self.probs {
            out[target] += p;
            // Odometer increment, keeping `target` in sync.
            for axis in (0..self.rank()).rev() {
                coords[axis] += 1;
                target += out_stride[axis];
                if coords[axis] < self.dims[axis] {
                    break;
                }
                target -= out_stride[axis] * coords[axis];
                coords[axis] = 0;
            }
        }
        ProbTable::from_parts(out_dims, out)
    }

    /// Largest absolute entrywise difference; `None` if shapes differ.
    pub fn max_abs_diff(&self, other: &ProbTable) -> Option<f64> {
        if self.dims != other.dims {
            return None;
        }
        Some(
            self.probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// Conditional distribution of target axes given conditioning axes.
///
/// Rows are indexed by the flat index of the conditioning values. A row whose
/// conditioning event has zero probability is `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalTable {
    pub given_dims: Vec<usize>,
    pub target_dims: Vec<usize>,
    pub rows: Vec<Option<Vec<f64>>>,
}

impl ConditionalTable {
    pub fn row(&self, given: &[usize]) -> Option<&[f64]> {
        let idx = given
            .iter()
            .zip(&self.given_dims)
            .fold(0, |acc, (&c, &d)| acc * d + c);
        self.rows[idx].as_deref()
    }

    pub fn undefined_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.is_none()).count()
    }
}

/// `p(target | given)` computed from `table`.
pub fn conditional(
    table: &ProbTable,
    target: &[usize],
    given: &[usize],
) -> Result<ConditionalTable> {
    if target.is_empty() {
        return Err(Error::BadSubset(target.to_vec()));
    }
    let overlap: Vec<usize> = target
        .iter()
        .copied()
        .filter(|a| given.contains(a))
        .collect();
    if !overlap.is_empty() {
        return Err(Error::OverlappingSets(overlap));
    }
    let mut axes = given.to_vec();
    axes.extend_from_slice(target);
    table.check_axes(&axes)?;

    let joint = table.marginalize(&axes);
    let target_len: usize = target.iter().map(|&a| table.dims()[a]).product();
    let rows = joint
        .probs()
        .chunks(target_len)
        .map(|chunk| {
            let mass: f64 = chunk.iter().sum();
            (mass > 0.0).then(|| chunk.iter().map(|p| p / mass).collect())
        })
        .collect();
    Ok(ConditionalTable {
        given_dims: given.iter().map(|&a| table.dims()[a]).collect(),
        target_dims: target.iter().map(|&a| table.dims()[a]).collect(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(dims: Vec<usize>) -> ProbTable {
        let n: usize = dims.iter().product();
        ProbTable::new(dims, vec![1.0 / n as f64; n]).unwrap()
    }

    #[test]
    fn rejects_zero_sized_alphabet() {
        assert!(matches!(
            ProbTable::new(vec![2, 0], vec![]),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn marginal_respects_requested_order() {
        let t = ProbTable::new(vec![2, 3], vec![0.1, 0.2, 0.0, 0.3, 0.15, 0.25]).unwrap();
        let m = t.marginal(&[1, 0]).unwrap();
        assert_eq!(m.dims(), &[3, 2]);
        assert!((m.get(&[0, 1]) - 0.3).abs() < 1e-15);
        assert!((m.get(&[2, 1]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn marginal_rejects_repeated_or_missing_axes() {
        let t = uniform(vec![2, 2]);
        assert!(matches!(t.marginal(&[0, 0]), Err(Error::BadSubset(_))));
        assert!(matches!(t.marginal(&[2]), Err(Error::BadSubset(_))));
        assert!(matches!(t.marginal(&[]), Err(Error::BadSubset(_))));
    }

    #[test]
    fn empty_marginalize_is_total_mass() {
        let t = uniform(vec![3, 2]);
        let m = t.marginalize(&[]);
        assert_eq!(m.rank(), 0);
        assert!((m.probs()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conditional_flags_zero_mass_rows() {
        // x0 = 1 never happens.
        let t = ProbTable::new(vec![2, 2], vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let c = conditional(&t, &[1], &[0]).unwrap();
        assert_eq!(c.row(&[0]), Some(&[0.5, 0.5][..]));
        assert_eq!(c.row(&[1]), None);
        assert_eq!(c.undefined_rows(), 1);
    }

    #[test]
    fn conditional_rejects_overlap() {
        let t = uniform(vec![2, 2]);
        assert!(matches!(
            conditional(&t, &[0], &[0, 1]),
            Err(Error::OverlappingSets(_))
        ));
    }
}
