//! Brute-force reference values, written without the library's code paths.
//!
//! Every quantity is a direct sum over the full joint of
//! `p log2(p_abc p_c / (p_ac p_bc))`, with marginals accumulated in hash
//! maps keyed by the projected outcome.

#![allow(dead_code)]

use std::collections::HashMap;

/// A joint over several discrete variables, one probability per outcome.
pub struct Joint {
    pub outcomes: Vec<(Vec<usize>, f64)>,
}

impl Joint {
    /// Row-major table with the given dimensions.
    pub fn from_table(dims: &[usize], probs: &[f64]) -> Self {
        let mut outcomes = Vec::with_capacity(probs.len());
        for (flat, &p) in probs.iter().enumerate() {
            let mut coords = vec![0; dims.len()];
            let mut rest = flat;
            for (k, &d) in dims.iter().enumerate().rev() {
                coords[k] = rest % d;
                rest /= d;
            }
            outcomes.push((coords, p));
        }
        Self { outcomes }
    }

    /// Appends variables computed from each outcome, splitting mass over a
    /// finite list of `(values, weight)` alternatives.
    pub fn extend(&self, f: impl Fn(&[usize]) -> Vec<(Vec<usize>, f64)>) -> Self {
        let mut outcomes = Vec::new();
        for (coords, p) in &self.outcomes {
            for (extra, w) in f(coords) {
                let mut c = coords.clone();
                c.extend(extra);
                outcomes.push((c, p * w));
            }
        }
        Self { outcomes }
    }

    fn marginal(&self, vars: &[usize]) -> HashMap<Vec<usize>, f64> {
        let mut m = HashMap::new();
        for (c, p) in &self.outcomes {
            let key: Vec<usize> = vars.iter().map(|&v| c[v]).collect();
            *m.entry(key).or_insert(0.0) += p;
        }
        m
    }

    pub fn entropy(&self, vars: &[usize]) -> f64 {
        self.marginal(vars)
            .values()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }

    /// `I(A; B | C)` by direct summation over outcomes of `(A, B, C)`.
    pub fn cmi(&self, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        let cat = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
        let abc = self.marginal(&cat(&cat(a, b), c));
        let ac = self.marginal(&cat(a, c));
        let bc = self.marginal(&cat(b, c));
        let cm = self.marginal(c);
        let (na, nb) = (a.len(), b.len());
        let mut total = 0.0;
        for (key, &p) in &abc {
            if p <= 0.0 {
                continue;
            }
            let ka = &key[..na];
            let kb = &key[na..na + nb];
            let kc = &key[na + nb..];
            let p_ac = ac[&cat(ka, kc)];
            let p_bc = bc[&cat(kb, kc)];
            let p_c = cm[kc];
            total += p * (p * p_c / (p_ac * p_bc)).log2();
        }
        total
    }

    pub fn mi(&self, a: &[usize], b: &[usize]) -> f64 {
        self.cmi(a, b, &[])
    }
}

/// Binary Markov chain `A - B - C - D` with fair `A` and crossover
/// probabilities `flips`, returned as a joint over `(x1, x2, x3, x4)` where
/// `order[k]` is the terminal axis of the k-th chain element.
pub fn chain_b(flips: [f64; 3], order: [usize; 4]) -> Vec<f64> {
    let mut probs = vec![0.0; 16];
    for bits in 0..16usize {
        let chain = [(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1];
        let mut p = 0.5;
        for k in 0..3 {
            p *= if chain[k] == chain[k + 1] { 1.0 - flips[k] } else { flips[k] };
        }
        let mut x = [0usize; 4];
        for k in 0..4 {
            x[order[k]] = chain[k];
        }
        probs[((x[0] * 2 + x[1]) * 2 + x[2]) * 2 + x[3]] += p;
    }
    probs
}

/// Outer box `(b0, b1, b2)` by summation on a joint over `(x1, x2, x3, x4)`.
pub fn outer_box(j: &Joint) -> [f64; 3] {
    let (x1, x2, x3, x4) = (0, 1, 2, 3);
    let i31_4 = j.cmi(&[x3], &[x1], &[x4]);
    let i32_4 = j.cmi(&[x3], &[x2], &[x4]);
    [
        i31_4.min(i32_4),
        i31_4.min(j.cmi(&[x3], &[x1], &[x2])),
        i32_4.min(j.cmi(&[x3], &[x2], &[x1])),
    ]
}
