//! Inner and outer bounds on the secret-key / private-keys rate region.
//!
//! For fixed auxiliaries `(U0, U1, U2, Q)` the achievable corner is
//!
//! ```text
//! R0 = [min{I(U0;X1|Q), I(U0;X2|Q)} - I(U0;X4|Q)]+
//! R1 = [I(U1;X1|U0,Q) - max{I(U1;X2,U2|U0,Q), I(U1;X4,U2|U0,Q)}]+
//! R2 = [I(U2;X2|U0,Q) - max{I(U2;X1,U1|U0,Q), I(U2;X4,U1|U0,Q)}]+
//! ```
//!
//! and the region is the convex hull of the union of the boxes below these
//! corners over all auxiliary channels. [`search_inner_region`] traces that
//! union numerically; [`outer_bound`] gives the closed-form box every
//! achievable triple must lie in.

mod corollary;
mod hull;
mod search;

use serde::{Deserialize, Serialize};

use crate::dmms::{extend_with_aux, AuxChannelSet, ExtendedPmf, JointPmf4};
use crate::error::Result;
use crate::info::{conditional_mutual_information as cmi, Bits};
use crate::table::ProbTable;

pub use corollary::{
    corollary_bound, corollary_box, corollary_capacity, matching_cases, Capacity, CorollaryCase,
    CorollaryReport, CHAINS,
};
pub use hull::{contains, read_corners_csv, RegionFrontier, MEMBERSHIP_TOL};
pub use search::{search_inner_region, SearchConfig, DEFAULT_WEIGHTS};

/// Key rates in bits per source symbol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateTriple {
    pub r0: Bits,
    pub r1: Bits,
    pub r2: Bits,
}

impl RateTriple {
    pub const ZERO: RateTriple = RateTriple {
        r0: 0.0,
        r1: 0.0,
        r2: 0.0,
    };

    /// # Panics
    ///
    /// If any component is negative or not finite.
    pub fn new(r0: Bits, r1: Bits, r2: Bits) -> Self {
        assert!(
            [r0, r1, r2].iter().all(|r| r.is_finite() && *r >= 0.0),
            "rates must be finite and non-negative: ({r0}, {r1}, {r2})"
        );
        Self { r0, r1, r2 }
    }

    /// Applies `[x]+ = max(x, 0)` to each component.
    pub fn clamped(r0: Bits, r1: Bits, r2: Bits) -> Self {
        Self::new(r0.max(0.0), r1.max(0.0), r2.max(0.0))
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r0, self.r1, self.r2]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn dot(self, w: [f64; 3]) -> f64 {
        self.r0 * w[0] + self.r1 * w[1] + self.r2 * w[2]
    }

    /// Componentwise `self <= other + tol`.
    pub fn le_with_tol(self, other: RateTriple, tol: f64) -> bool {
        self.r0 <= other.r0 + tol && self.r1 <= other.r1 + tol && self.r2 <= other.r2 + tol
    }
}

/// Right-hand sides of the outer bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OuterBox {
    /// `min{I(X3;X1|X4), I(X3;X2|X4)}`
    pub b0: Bits,
    /// `min{I(X3;X1|X4), I(X3;X1|X2)}`
    pub b1: Bits,
    /// `min{I(X3;X2|X4), I(X3;X2|X1)}`
    pub b2: Bits,
}

impl OuterBox {
    pub fn corner(&self) -> RateTriple {
        RateTriple::new(self.b0, self.b1, self.b2)
    }

    pub fn contains(&self, point: RateTriple, tol: f64) -> bool {
        point.le_with_tol(self.corner(), tol)
    }
}

fn info(table: &ProbTable, a: &[usize], b: &[usize], c: &[usize]) -> Bits {
    cmi(table, a, b, c).expect("axes of a validated joint are well formed")
}

/// Closed-form outer bound.
pub fn outer_bound(pmf: &JointPmf4) -> OuterBox {
    let t = pmf.table();
    let (x1, x2, x3, x4) = (JointPmf4::X1, JointPmf4::X2, JointPmf4::X3, JointPmf4::X4);
    let i31_4 = info(t, &[x3], &[x1], &[x4]);
    let i32_4 = info(t, &[x3], &[x2], &[x4]);
    let i31_2 = info(t, &[x3], &[x1], &[x2]);
    let i32_1 = info(t, &[x3], &[x2], &[x1]);
    OuterBox {
        b0: i31_4.min(i32_4),
        b1: i31_4.min(i31_2),
        b2: i32_4.min(i32_1),
    }
}

/// The six mutual-information differences behind the inner-bound corner,
/// evaluated on any table whose axes are named by `axes`.
struct Axes {
    q: usize,
    u0: usize,
    u1: usize,
    u2: usize,
}

/// Corner of the inner bound from marginals `p(q,u0,u1,u2,x_j)` for
/// `j = 1, 2, 4`, each passed with the axis holding `x_j`.
fn corner_from_tables(
    axes: &Axes,
    t1: (&ProbTable, usize),
    t2: (&ProbTable, usize),
    t4: (&ProbTable, usize),
) -> RateTriple {
    let Axes { q, u0, u1, u2 } = *axes;
    let r0 = info(t1.0, &[u0], &[t1.1], &[q]).min(info(t2.0, &[u0], &[t2.1], &[q]))
        - info(t4.0, &[u0], &[t4.1], &[q]);
    let r1 = info(t1.0, &[u1], &[t1.1], &[u0, q])
        - info(t2.0, &[u1], &[t2.1, u2], &[u0, q]).max(info(t4.0, &[u1], &[t4.1, u2], &[u0, q]));
    let r2 = info(t2.0, &[u2], &[t2.1], &[u0, q])
        - info(t1.0, &[u2], &[t1.1, u1], &[u0, q]).max(info(t4.0, &[u2], &[t4.1, u1], &[u0, q]));
    RateTriple::clamped(r0, r1, r2)
}

/// Inner-bound corner for one choice of auxiliaries, computed on the full
/// extended joint.
pub fn inner_bound_point(pmf: &JointPmf4, aux: &AuxChannelSet) -> Result<RateTriple> {
    let ext = extend_with_aux(pmf, aux)?;
    Ok(inner_bound_from_extended(&ext))
}

pub fn inner_bound_from_extended(ext: &ExtendedPmf) -> RateTriple {
    let axes = Axes {
        q: ExtendedPmf::Q,
        u0: ExtendedPmf::U0,
        u1: ExtendedPmf::U1,
        u2: ExtendedPmf::U2,
    };
    let t = ext.table();
    corner_from_tables(
        &axes,
        (t, ExtendedPmf::X1),
        (t, ExtendedPmf::X2),
        (t, ExtendedPmf::X4),
    )
}

/// Evaluates inner-bound corners without materializing the 8-variable joint.
///
/// Only `p(q, u0, u1, u2, x_j)` for `j = 1, 2, 4` enter the corner, and each
/// is a small contraction of `p(x3, x_j)` with the auxiliary channels. The
/// search calls this tens of thousands of times per source.
#[derive(Clone, Debug)]
pub(crate) struct CornerEvaluator {
    x3: usize,
    /// `p(x3, x_j)` flattened as `x3 * |Xj| + xj`, for j = 1, 2, 4.
    pairs: [(Vec<f64>, usize); 3],
}

impl CornerEvaluator {
    pub(crate) fn new(pmf: &JointPmf4) -> Self {
        let sizes = pmf.sizes();
        let pair = |axis: usize| {
            let m = pmf.table().marginalize(&[JointPmf4::X3, axis]);
            (m.probs().to_vec(), sizes[axis])
        };
        Self {
            x3: sizes[JointPmf4::X3],
            pairs: [pair(JointPmf4::X1), pair(JointPmf4::X2), pair(JointPmf4::X4)],
        }
    }

    pub(crate) fn corner(&self, aux: &AuxChannelSet) -> RateTriple {
        let (cq, c0, c1, c2) = (aux.card_q(), aux.card_u0(), aux.card_u1(), aux.card_u2());
        let heads = cq * c0 * c1 * c2;
        // w[h * |X3| + x3] = p(q,u0,u1,u2 | x3), h = ((q*c0 + u0)*c1 + u1)*c2 + u2
        let mut w = Vec::with_capacity(heads * self.x3);
        for q in 0..cq {
            for u0 in 0..c0 {
                for u1 in 0..c1 {
                    for u2 in 0..c2 {
                        for x3 in 0..self.x3 {
                            w.push(aux.weight(q, u0, u1, u2, x3));
                        }
                    }
                }
            }
        }
        let tables: Vec<ProbTable> = self
            .pairs
            .iter()
            .map(|(pair, sj)| {
                let mut out = vec![0.0; heads * sj];
                for h in 0..heads {
                    let wh = &w[h * self.x3..(h + 1) * self.x3];
                    let row = &mut out[h * sj..(h + 1) * sj];
                    for (x3, &wv) in wh.iter().enumerate() {
                        if wv == 0.0 {
                            continue;
                        }
                        for (o, &p) in row.iter_mut().zip(&pair[x3 * sj..(x3 + 1) * sj]) {
                            *o += wv * p;
                        }
                    }
                }
                ProbTable::from_parts(vec![cq, c0, c1, c2, *sj], out)
            })
            .collect();
        let axes = Axes {
            q: 0,
            u0: 1,
            u1: 2,
            u2: 3,
        };
        corner_from_tables(&axes, (&tables[0], 4), (&tables[1], 4), (&tables[2], 4))
    }
}
