//! Seeded generators for labels and ring elements, used by the randomized
//! verification suites.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::labels::{canonicalize_factor, NiceLabel, PerfectLabel};
use crate::lengths::IndexSubset;
use crate::moduli::Moduli;
use crate::nice_ring::{FreshIndex, NiceElement, NiceTerms};
use crate::perfect_ring::{PerfectElement, PerfectTerms};

/// A nice label on `[n]` of codimension at most `max_codim`, with the sign
/// picked up by canonicalization.
pub fn nice_label<R: Rng>(
    rng: &mut R,
    n: usize,
    max_codim: usize,
    overlines: bool,
) -> (NiceLabel, i64) {
    let mut indices: Vec<usize> = (1..=n).collect();
    indices.shuffle(rng);
    let mut budget = rng.gen_range(0..=max_codim);
    let mut parts = Vec::new();
    let mut rest = &indices[..];
    while budget > 0 && rest.len() >= 2 {
        let size = rng.gen_range(2..=(budget + 1).min(rest.len()));
        let (block, tail) = rest.split_at(size);
        let mut plus = IndexSubset::EMPTY;
        let mut minus = IndexSubset::EMPTY;
        for &i in block {
            if overlines && rng.gen_bool(0.4) {
                minus = minus.with(i);
            } else {
                plus = plus.with(i);
            }
        }
        parts.push((plus, minus));
        budget -= size - 1;
        rest = tail;
    }
    let mut sign = 1;
    let mut factors = Vec::new();
    for (plus, minus) in parts {
        let (f, s) = canonicalize_factor(plus, minus).expect("blocks are disjoint and nonempty");
        sign *= s.to_i64();
        factors.extend(f);
    }
    (NiceLabel::from_canonical(factors), sign)
}

pub fn perfect_label<R: Rng>(rng: &mut R, n: usize, max_codim: usize) -> PerfectLabel {
    let (label, _) = nice_label(rng, n, max_codim, false);
    PerfectLabel::from_canonical(label.factors().iter().map(|f| f.plus()).collect())
}

fn coefficient<R: Rng>(rng: &mut R) -> BigInt {
    let c: i64 = rng.gen_range(1..=3);
    BigInt::from(if rng.gen_bool(0.5) { c } else { -c })
}

/// A combination of up to `terms` labels of codimension at most `max_codim`.
pub fn nice_element<R: Rng>(
    rng: &mut R,
    moduli: &Arc<Moduli>,
    terms: usize,
    max_codim: usize,
) -> NiceElement {
    let mut combo = NiceTerms::new();
    for _ in 0..rng.gen_range(1..=terms.max(1)) {
        let (label, sign) = nice_label(rng, moduli.n(), max_codim, true);
        combo.add_term(label, coefficient(rng) * sign);
    }
    NiceElement::from_terms(moduli, combo)
}

pub fn perfect_element<R: Rng>(
    rng: &mut R,
    moduli: &Arc<Moduli>,
    terms: usize,
    max_codim: usize,
) -> PerfectElement {
    let mut combo = PerfectTerms::new();
    for _ in 0..rng.gen_range(1..=terms.max(1)) {
        combo.add_term(perfect_label(rng, moduli.n(), max_codim), coefficient(rng));
    }
    PerfectElement::from_terms(moduli, combo)
}

/// Splits a codimension budget into `parts` random pieces summing to at
/// most `total`, so products of elements drawn with them can survive the
/// dimension bound.
pub fn split_budget<R: Rng>(rng: &mut R, total: usize, parts: usize) -> Vec<usize> {
    let mut left = rng.gen_range(0..=total);
    let mut out = Vec::with_capacity(parts);
    for k in 0..parts {
        let take = if k + 1 == parts {
            left
        } else {
            rng.gen_range(0..=left)
        };
        out.push(take);
        left -= take;
    }
    out.shuffle(rng);
    out
}

/// Picks the auxiliary index of a Chern class expansion uniformly among the
/// admissible ones.
pub struct RandomFresh<R>(pub R);

impl<R: Rng> FreshIndex for RandomFresh<R> {
    fn pick(&mut self, component: IndexSubset, n: usize) -> Option<usize> {
        let free: Vec<usize> = (1..=n).filter(|&k| !component.contains(k)).collect();
        free.choose(&mut self.0).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn labels_respect_the_codimension_budget() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let (l, s) = nice_label(&mut rng, 7, 3, true);
            assert!(l.codim() <= 3);
            assert!(s == 1 || s == -1);
            assert!(l.support().max_index().unwrap_or(0) <= 7);
        }
    }
}
