//! Convex, downward-closed regions represented by their corner points.
//!
//! The region spanned by corners `c_1..c_m` is every non-negative triple that
//! is componentwise below some convex combination of the corners and the
//! origin. Membership of `p` reduces to the linear program
//!
//! ```text
//! maximize t  s.t.  t p <= sum_j lambda_j c_j,  sum_j lambda_j <= 1,  t, lambda >= 0
//! ```
//!
//! with `p` inside iff the optimum reaches 1. The program has four rows, so a
//! dense tableau with Bland's rule is all that is needed.

use std::cmp::Ordering;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::RateTriple;
use crate::dmms::AuxChannelSet;

/// Slack accepted when deciding membership.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Points below this in every component count as the origin.
const ZERO_TOL: f64 = 1e-12;

const PIVOT_TOL: f64 = 1e-12;

/// Largest `t` with `t * point` in the downward-closed hull of `corners` and
/// the origin. Infinite for the origin itself.
pub(crate) fn max_scaling(corners: &[RateTriple], point: RateTriple) -> f64 {
    let p = point.to_array();
    if p.iter().all(|&x| x <= ZERO_TOL) {
        return f64::INFINITY;
    }
    if corners.is_empty() {
        return 0.0;
    }
    let m = corners.len();
    // Columns: t, lambda_1..lambda_m, slack_0..slack_3, rhs.
    let cols = m + 1 + 4 + 1;
    let rhs = cols - 1;
    let mut tab = vec![vec![0.0; cols]; 5];
    for k in 0..3 {
        tab[k][0] = p[k];
        for (j, c) in corners.iter().enumerate() {
            tab[k][1 + j] = -c.to_array()[k];
        }
        tab[k][m + 1 + k] = 1.0;
    }
    for j in 0..m {
        tab[3][1 + j] = 1.0;
    }
    tab[3][m + 4] = 1.0;
    tab[3][rhs] = 1.0;
    // Objective row holds reduced costs of `max t`.
    tab[4][0] = 1.0;
    let mut basis: Vec<usize> = (0..4).map(|k| m + 1 + k).collect();

    loop {
        let Some(enter) = (0..rhs).find(|&c| tab[4][c] > PIVOT_TOL) else {
            break;
        };
        let mut leave: Option<(usize, f64)> = None;
        for r in 0..4 {
            let a = tab[r][enter];
            if a > PIVOT_TOL {
                let ratio = tab[r][rhs] / a;
                let better = match leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < best - PIVOT_TOL
                            || (ratio <= best + PIVOT_TOL && basis[r] < basis[lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return f64::INFINITY;
        };
        let pivot = tab[row][enter];
        tab[row].iter_mut().for_each(|v| *v /= pivot);
        let pivot_row = tab[row].clone();
        for (r, line) in tab.iter_mut().enumerate() {
            if r != row {
                let f = line[enter];
                if f != 0.0 {
                    line.iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
                }
            }
        }
        basis[row] = enter;
    }
    basis
        .iter()
        .position(|&b| b == 0)
        .map_or(0.0, |r| tab[r][rhs])
}

/// Whether `point` lies in the convex, downward-closed hull of `corners` and
/// the origin.
pub fn contains(corners: &[RateTriple], point: RateTriple) -> bool {
    max_scaling(corners, point) >= 1.0 - MEMBERSHIP_TOL
}

/// Achievable-region corners, each with the auxiliaries that reach it.
///
/// No corner lies in the hull spanned by the others and the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionFrontier {
    pub points: Vec<RateTriple>,
    pub provenance: Vec<AuxChannelSet>,
}

fn lex_cmp(a: &RateTriple, b: &RateTriple) -> Ordering {
    a.r0
        .total_cmp(&b.r0)
        .then(a.r1.total_cmp(&b.r1))
        .then(a.r2.total_cmp(&b.r2))
}

impl RegionFrontier {
    /// Reduces candidates to the non-redundant corner set.
    ///
    /// Candidates are ordered lexicographically by `(r0, r1, r2)` (stable, so
    /// equal points keep their input order and the first one's auxiliaries
    /// win), near-duplicates and singly dominated points are dropped, and then
    /// every point inside the hull of the remaining others is removed.
    pub fn from_candidates(mut candidates: Vec<(RateTriple, AuxChannelSet)>) -> Self {
        candidates.sort_by(|a, b| lex_cmp(&a.0, &b.0));
        let mut kept: Vec<(RateTriple, AuxChannelSet)> = Vec::new();
        for cand in candidates {
            if kept
                .last()
                .is_some_and(|(p, _)| cand.0.le_with_tol(*p, ZERO_TOL) && p.le_with_tol(cand.0, ZERO_TOL))
            {
                continue;
            }
            kept.push(cand);
        }

        // Pareto filter: drop points componentwise below another point.
        let mut front: Vec<(RateTriple, AuxChannelSet)> = Vec::new();
        for cand in kept {
            if front.iter().any(|(f, _)| cand.0.le_with_tol(*f, 0.0)) {
                continue;
            }
            front.retain(|(f, _)| !f.le_with_tol(cand.0, 0.0));
            front.push(cand);
        }
        front.sort_by(|a, b| lex_cmp(&a.0, &b.0));
        let mut kept = front;

        let mut i = 0;
        while i < kept.len() {
            if kept.len() == 1 {
                break;
            }
            let others: Vec<RateTriple> = kept
                .iter()
                .enumerate()
                .filter_map(|(j, c)| (j != i).then_some(c.0))
                .collect();
            if contains(&others, kept[i].0) {
                kept.remove(i);
            } else {
                i += 1;
            }
        }
        let (points, provenance) = kept.into_iter().unzip();
        Self { points, provenance }
    }

    pub fn contains(&self, point: RateTriple) -> bool {
        contains(&self.points, point)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Componentwise maxima over the corners.
    pub fn max_rates(&self) -> RateTriple {
        self.points.iter().fold(RateTriple::ZERO, |acc, p| {
            RateTriple::new(acc.r0.max(p.r0), acc.r1.max(p.r1), acc.r2.max(p.r2))
        })
    }

    /// CSV with header `r0,r1,r2` and one row per corner.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "r0,r1,r2")?;
        for p in &self.points {
            writeln!(out, "{},{},{}", p.r0, p.r1, p.r2)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is ascii")
    }
}

/// Parses the `r0,r1,r2` CSV written by [`RegionFrontier::write_csv`].
pub fn read_corners_csv(text: &str) -> Result<Vec<RateTriple>, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == "r0,r1,r2" => {}
        other => return Err(format!("expected header r0,r1,r2, found {other:?}")),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let vals: Vec<f64> = line
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| format!("row {}: {e}", i + 1))?;
            match vals.as_slice() {
                &[a, b, c] if [a, b, c].iter().all(|v| v.is_finite() && *v >= 0.0) => {
                    Ok(RateTriple::new(a, b, c))
                }
                _ => Err(format!("row {}: expected three non-negative rates", i + 1)),
            }
        })
        .collect()
}
