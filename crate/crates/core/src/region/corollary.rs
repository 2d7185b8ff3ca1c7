//! Capacity results for Markov-structured sources.
//!
//! | chain (and mirror)                   | region                                  |
//! |--------------------------------------|-----------------------------------------|
//! | `X3-X4-X1-X2`, `X3-X4-X2-X1`         | `{0}`                                   |
//! | `X3-X1-X4-X2` (`X3-X2-X4-X1`)        | `R0 = R2 = 0`, `R1 <= I(X3;X1|X4)`      |
//! | `X1-X3-X4-X2` (`X2-X3-X4-X1`)        | same as above                           |
//! | `X3-X1-X2-X4` (`X3-X2-X1-X4`)        | auxiliary form, `R2 = 0`                |
//! | `X2-X1-X3-X4` (`X1-X2-X3-X4`)        | auxiliary form, `R2 = 0`                |
//! | `X2-X3-X1-X4` (`X1-X3-X2-X4`)        | auxiliary form, achievable only         |
//!
//! Mirrors swap the roles of terminals 1 and 2.

use serde::{Deserialize, Serialize};

use super::{info, search_inner_region, RateTriple, RegionFrontier, SearchConfig};
use crate::dmms::{
    chain_label, extend_with_aux, is_markov_chain, AuxChannelSet, Chain, ExtendedPmf, JointPmf4,
};
use crate::error::Result;

const X1: usize = JointPmf4::X1;
const X2: usize = JointPmf4::X2;
const X3: usize = JointPmf4::X3;
const X4: usize = JointPmf4::X4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CorollaryCase {
    AllZero,
    Cor1,
    Cor1Mirror,
    Cor2,
    Cor2Mirror,
    Cor3,
    Cor3Mirror,
    Cor4,
    Cor4Mirror,
    Cor5,
    Cor5Mirror,
}

/// Chains in the order they are tried.
pub const CHAINS: [(CorollaryCase, Chain); 12] = [
    (CorollaryCase::AllZero, [X3, X4, X1, X2]),
    (CorollaryCase::AllZero, [X3, X4, X2, X1]),
    (CorollaryCase::Cor1, [X3, X1, X4, X2]),
    (CorollaryCase::Cor1Mirror, [X3, X2, X4, X1]),
    (CorollaryCase::Cor2, [X1, X3, X4, X2]),
    (CorollaryCase::Cor2Mirror, [X2, X3, X4, X1]),
    (CorollaryCase::Cor3, [X3, X1, X2, X4]),
    (CorollaryCase::Cor3Mirror, [X3, X2, X1, X4]),
    (CorollaryCase::Cor4, [X2, X1, X3, X4]),
    (CorollaryCase::Cor4Mirror, [X1, X2, X3, X4]),
    (CorollaryCase::Cor5, [X2, X3, X1, X4]),
    (CorollaryCase::Cor5Mirror, [X1, X3, X2, X4]),
];

impl CorollaryCase {
    pub fn label(self) -> &'static str {
        match self {
            Self::AllZero => "all rates zero",
            Self::Cor1 => "Corollary 1",
            Self::Cor1Mirror => "Corollary 1 (mirrored)",
            Self::Cor2 => "Corollary 2",
            Self::Cor2Mirror => "Corollary 2 (mirrored)",
            Self::Cor3 => "Corollary 3",
            Self::Cor3Mirror => "Corollary 3 (mirrored)",
            Self::Cor4 => "Corollary 4",
            Self::Cor4Mirror => "Corollary 4 (mirrored)",
            Self::Cor5 => "Corollary 5",
            Self::Cor5Mirror => "Corollary 5 (mirrored)",
        }
    }

    pub fn is_mirror(self) -> bool {
        matches!(
            self,
            Self::Cor1Mirror | Self::Cor2Mirror | Self::Cor3Mirror | Self::Cor4Mirror | Self::Cor5Mirror
        )
    }

    /// Whether the case only yields an achievable region, not the capacity.
    pub fn inner_bound_only(self) -> bool {
        matches!(self, Self::Cor5 | Self::Cor5Mirror)
    }
}

/// What is known about the region for a matched case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Capacity {
    /// The region is the box below this corner.
    Box(RateTriple),
    /// Capacity region traced by auxiliary search.
    Region(RegionFrontier),
    /// Achievable region traced by auxiliary search.
    InnerBound(RegionFrontier),
}

impl Capacity {
    pub fn max_rates(&self) -> RateTriple {
        match self {
            Capacity::Box(c) => *c,
            Capacity::Region(f) | Capacity::InnerBound(f) => f.max_rates(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub case: CorollaryCase,
    pub chain: Chain,
    pub capacity: Capacity,
    /// Every chain that holds, in test order.
    pub matched: Vec<(CorollaryCase, Chain)>,
}

impl CorollaryReport {
    pub fn chain_label(&self) -> String {
        chain_label(&self.chain)
    }
}

/// Cases whose chains hold for `pmf` within `tol`, in test order.
pub fn matching_cases(pmf: &JointPmf4, tol: f64) -> Vec<(CorollaryCase, Chain)> {
    CHAINS
        .iter()
        .copied()
        .filter(|(_, chain)| is_markov_chain(pmf, *chain, tol))
        .collect()
}

/// Detects a Markov structure with a known region and evaluates it.
///
/// Returns `Ok(None)` when no listed chain holds. Auxiliary-form cases run
/// [`search_inner_region`] with `cfg`.
pub fn corollary_capacity(
    pmf: &JointPmf4,
    tol: f64,
    cfg: &SearchConfig,
) -> Result<Option<CorollaryReport>> {
    let matched = matching_cases(pmf, tol);
    let Some(&(case, chain)) = matched.first() else {
        return Ok(None);
    };
    let t = pmf.table();
    let capacity = match case {
        CorollaryCase::AllZero => Capacity::Box(RateTriple::ZERO),
        CorollaryCase::Cor1 | CorollaryCase::Cor2 => {
            Capacity::Box(RateTriple::new(0.0, info(t, &[X3], &[X1], &[X4]), 0.0))
        }
        CorollaryCase::Cor1Mirror | CorollaryCase::Cor2Mirror => {
            Capacity::Box(RateTriple::new(0.0, 0.0, info(t, &[X3], &[X2], &[X4])))
        }
        c if c.inner_bound_only() => Capacity::InnerBound(search_inner_region(pmf, cfg)?),
        _ => Capacity::Region(search_inner_region(pmf, cfg)?),
    };
    Ok(Some(CorollaryReport {
        case,
        chain,
        capacity,
        matched,
    }))
}

/// The auxiliary-form bound of an auxiliary-form case at one choice of
/// auxiliaries, with `[x]+` applied. `None` for box cases.
pub fn corollary_bound(
    case: CorollaryCase,
    pmf: &JointPmf4,
    aux: &AuxChannelSet,
) -> Result<Option<RateTriple>> {
    use CorollaryCase::*;
    let ext = extend_with_aux(pmf, aux)?;
    let t = ext.table();
    let (q, u0) = (ExtendedPmf::Q, ExtendedPmf::U0);
    // Unmirrored roles: `xa`/`ua` is terminal 1, `xb`/`ub` is terminal 2.
    let (xa, xb, ua, ub) = if case.is_mirror() {
        (ExtendedPmf::X2, ExtendedPmf::X1, ExtendedPmf::U2, ExtendedPmf::U1)
    } else {
        (ExtendedPmf::X1, ExtendedPmf::X2, ExtendedPmf::U1, ExtendedPmf::U2)
    };
    let x4 = ExtendedPmf::X4;
    let r0 = info(t, &[u0], &[xb], &[q]) - info(t, &[u0], &[x4], &[q]);
    let gain_a = info(t, &[ua], &[xa], &[u0, q]);
    let (ra, rb) = match case {
        AllZero | Cor1 | Cor1Mirror | Cor2 | Cor2Mirror => return Ok(None),
        Cor3 | Cor3Mirror => (gain_a - info(t, &[ua], &[xb], &[u0, q]), 0.0),
        Cor4 | Cor4Mirror => (gain_a - info(t, &[ua], &[x4], &[u0, q]), 0.0),
        Cor5 | Cor5Mirror => (
            gain_a - info(t, &[ua], &[xb], &[u0, q]),
            info(t, &[ub], &[xb], &[u0, q]) - info(t, &[ub], &[xa], &[u0, q]),
        ),
    };
    let (r1, r2) = if case.is_mirror() { (rb, ra) } else { (ra, rb) };
    Ok(Some(RateTriple::clamped(r0, r1, r2)))
}

/// The closed-form box for a box case, `None` otherwise.
pub fn corollary_box(case: CorollaryCase, pmf: &JointPmf4) -> Option<RateTriple> {
    let t = pmf.table();
    match case {
        CorollaryCase::AllZero => Some(RateTriple::ZERO),
        CorollaryCase::Cor1 | CorollaryCase::Cor2 => {
            Some(RateTriple::new(0.0, info(t, &[X3], &[X1], &[X4]), 0.0))
        }
        CorollaryCase::Cor1Mirror | CorollaryCase::Cor2Mirror => {
            Some(RateTriple::new(0.0, 0.0, info(t, &[X3], &[X2], &[X4])))
        }
        _ => None,
    }
}
