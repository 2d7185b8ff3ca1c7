mod common;

use common::oracle::{chain_b, outer_box, Joint};
use keyregion::dmms::{AuxChannelSet, JointPmf4};
use keyregion::info::{conditional_mutual_information, entropy, mutual_information};
use keyregion::region::{inner_bound_point, outer_bound};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const X1: usize = JointPmf4::X1;
const X2: usize = JointPmf4::X2;
const X3: usize = JointPmf4::X3;
const X4: usize = JointPmf4::X4;

fn random_probs(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..len).map(|_| -rng.random::<f64>().ln()).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|v| v / s).collect()
}

fn subsets() -> Vec<Vec<usize>> {
    (1..16u32)
        .map(|m| (0..4).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

#[test]
fn measures_match_summation_on_random_joints() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let probs = random_probs(&mut rng, 16);
        let pmf = JointPmf4::new([2, 2, 2, 2], probs.clone()).unwrap();
        let oracle = Joint::from_table(&[2, 2, 2, 2], &probs);
        let t = pmf.table();
        for s in subsets() {
            let lib = entropy(pmf.marginal(&s).unwrap().probs()).unwrap();
            assert!((lib - oracle.entropy(&s)).abs() < 1e-9, "H{s:?}");
        }
        for a in 0..4 {
            for b in 0..4 {
                if a == b {
                    continue;
                }
                let lib = mutual_information(t, &[a], &[b]).unwrap();
                assert!((lib - oracle.mi(&[a], &[b])).abs() < 1e-9);
                for c in (0..4).filter(|&c| c != a && c != b) {
                    let lib = conditional_mutual_information(t, &[a], &[b], &[c]).unwrap();
                    assert!((lib - oracle.cmi(&[a], &[b], &[c])).abs() < 1e-9);
                    let d = 6 - a - b - c;
                    let lib = conditional_mutual_information(t, &[a], &[b, d], &[c]).unwrap();
                    assert!((lib - oracle.cmi(&[a], &[b, d], &[c])).abs() < 1e-9);
                }
            }
        }
    }
}

#[test]
fn chain_b_constructor_matches_summation() {
    for order in [[X3, X1, X4, X2], [X1, X3, X4, X2], [X3, X1, X2, X4], [X2, X1, X3, X4]] {
        let lib = JointPmf4::binary_chain([0.1, 0.2, 0.3], order).unwrap();
        for (a, b) in lib.probs().iter().zip(chain_b([0.1, 0.2, 0.3], order)) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}

#[test]
fn outer_box_matches_summation_in_every_corollary_ordering() {
    for order in [[X3, X1, X4, X2], [X1, X3, X4, X2], [X3, X1, X2, X4], [X2, X1, X3, X4]] {
        let probs = chain_b([0.1, 0.1, 0.1], order);
        let lib = outer_bound(&JointPmf4::new([2, 2, 2, 2], probs.clone()).unwrap());
        let expected = outer_box(&Joint::from_table(&[2, 2, 2, 2], &probs));
        for (l, e) in [lib.b0, lib.b1, lib.b2].iter().zip(expected) {
            assert!((l - e).abs() < 1e-9);
        }
    }
}

/// Inner-bound corner by summation on an oracle-built extended joint with
/// variables `(x1, x2, x3, x4, q, u0, u1, u2)`.
fn oracle_corner(probs: &[f64], aux: &AuxChannelSet) -> [f64; 3] {
    let src = Joint::from_table(&[2, 2, 2, 2], probs);
    let (c0, c1, c2, cq) = (aux.card_u0(), aux.card_u1(), aux.card_u2(), aux.card_q());
    let ext = src.extend(|x| {
        let mut alts = Vec::new();
        for u0 in 0..c0 {
            for u1 in 0..c1 {
                for u2 in 0..c2 {
                    for q in 0..cq {
                        let w = aux.ch_u0()[x[2]][u0]
                            * aux.ch_u1()[u0 * 2 + x[2]][u1]
                            * aux.ch_u2()[u0 * 2 + x[2]][u2]
                            * aux.ch_q()[(u0 * c1 + u1) * c2 + u2][q];
                        alts.push((vec![q, u0, u1, u2], w));
                    }
                }
            }
        }
        alts
    });
    let (x1, x2, x4, q, u0, u1, u2) = (0, 1, 3, 4, 5, 6, 7);
    let r0 = ext.cmi(&[u0], &[x1], &[q]).min(ext.cmi(&[u0], &[x2], &[q])) - ext.cmi(&[u0], &[x4], &[q]);
    let r1 = ext.cmi(&[u1], &[x1], &[u0, q])
        - ext
            .cmi(&[u1], &[x2, u2], &[u0, q])
            .max(ext.cmi(&[u1], &[x4, u2], &[u0, q]));
    let r2 = ext.cmi(&[u2], &[x2], &[u0, q])
        - ext
            .cmi(&[u2], &[x1, u1], &[u0, q])
            .max(ext.cmi(&[u2], &[x4, u1], &[u0, q]));
    [r0.max(0.0), r1.max(0.0), r2.max(0.0)]
}

#[test]
fn inner_bound_matches_summation_for_random_auxiliaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..30 {
        let probs = random_probs(&mut rng, 16);
        let pmf = JointPmf4::new([2, 2, 2, 2], probs.clone()).unwrap();
        let cards = [2, 2 + trial % 2, 2, 1 + trial % 2];
        let rows = |rng: &mut ChaCha8Rng, count: usize, width: usize| -> Vec<Vec<f64>> {
            (0..count).map(|_| random_probs(rng, width)).collect()
        };
        let aux = AuxChannelSet::new(
            cards,
            rows(&mut rng, 2, cards[0]),
            rows(&mut rng, cards[0] * 2, cards[1]),
            rows(&mut rng, cards[0] * 2, cards[2]),
            rows(&mut rng, cards[0] * cards[1] * cards[2], cards[3]),
        )
        .unwrap();
        let lib = inner_bound_point(&pmf, &aux).unwrap().to_array();
        let expected = oracle_corner(&probs, &aux);
        for (l, e) in lib.iter().zip(expected) {
            assert!((l - e).abs() < 1e-9, "{lib:?} vs {expected:?}");
        }
    }
}

#[test]
fn triple_copy_search_example() {
    let pmf = JointPmf4::new([2, 2, 2, 2], chain_b([0.0, 0.0, 0.5], [X3, X1, X2, X4])).unwrap();
    let f = keyregion::region::search_inner_region(&pmf, &Default::default()).unwrap();
    assert!(f.points.iter().any(|p| p.r0 >= 1.0 - 1e-9));
}
