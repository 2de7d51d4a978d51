//! Length vectors of flexible polygons, long/short subsets and chambers.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest supported edge count. Subsets are `u32` masks and several
/// routines enumerate all `2^n` subsets.
pub const MAX_EDGES: usize = 20;

/// Number of draws `random_generic` makes before giving up.
pub const RANDOM_RETRY_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LengthError {
    #[error("need at least 4 edges, got {0}")]
    TooFewEdges(usize),
    #[error("at most {MAX_EDGES} edges are supported, got {0}")]
    TooManyEdges(usize),
    #[error("edge {0} has zero length")]
    ZeroLength(usize),
    #[error("cannot parse length list: {0}")]
    Parse(String),
    #[error("lengths are not generic: {plus} and {minus} have equal length sums")]
    NonGeneric {
        plus: IndexSubset,
        minus: IndexSubset,
    },
    #[error("moduli space empty: edge {0} is longer than half the perimeter")]
    Empty(usize),
    #[error("no generic nonempty vector found after {0} draws")]
    BudgetExhausted(usize),
    #[error("cannot sample {n} lengths from 1..={bound}")]
    BadSamplingBox { n: usize, bound: u64 },
}

/// A subset of `[n] = {1, ..., n}`; index `i` is stored in bit `i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct IndexSubset(u32);

impl IndexSubset {
    pub const EMPTY: IndexSubset = IndexSubset(0);

    pub fn from_mask(mask: u32) -> Self {
        IndexSubset(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// The full set `[n]`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        if n == 32 {
            IndexSubset(u32::MAX)
        } else {
            IndexSubset((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=32).contains(&i));
        IndexSubset(1 << (i - 1))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(Self::EMPTY, |acc, i| acc.with(i))
    }

    pub fn with(self, i: usize) -> Self {
        self.union(Self::singleton(i))
    }

    pub fn without(self, i: usize) -> Self {
        IndexSubset(self.0 & !Self::singleton(i).0)
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=32).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn union(self, other: Self) -> Self {
        IndexSubset(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        IndexSubset(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        IndexSubset(self.0 & !other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        Self::full(n).difference(self)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn min_index(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros() as usize)
    }

    /// Indices in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i + 1)
        })
    }

    /// Compares the ascending index sequences lexicographically.
    pub fn lex_cmp(self, other: Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }

    /// All subsets of `[n]`, as masks `0 .. 2^n`.
    pub fn all(n: usize) -> impl Iterator<Item = IndexSubset> {
        (0..1u64 << n).map(|m| IndexSubset(m as u32))
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = IndexSubset> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(IndexSubset(cur))
        })
    }
}

impl fmt::Display for IndexSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

/// Positive integer edge lengths `l_1, ..., l_n` with `n >= 4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LengthVector {
    lengths: Vec<u64>,
}

impl LengthVector {
    pub fn new(lengths: Vec<u64>) -> Result<Self, LengthError> {
        if lengths.len() < 4 {
            return Err(LengthError::TooFewEdges(lengths.len()));
        }
        if lengths.len() > MAX_EDGES {
            return Err(LengthError::TooManyEdges(lengths.len()));
        }
        if let Some(i) = lengths.iter().position(|&l| l == 0) {
            return Err(LengthError::ZeroLength(i + 1));
        }
        Ok(LengthVector { lengths })
    }

    pub fn n(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    /// Length of edge `i` (1-based).
    pub fn length(&self, i: usize) -> u64 {
        self.lengths[i - 1]
    }

    pub fn perimeter(&self) -> u64 {
        self.lengths.iter().sum()
    }

    pub fn subset_sum(&self, set: IndexSubset) -> u64 {
        set.iter().map(|i| self.lengths[i - 1]).sum()
    }

    /// `2 * sum_I l_i > sum l_i`.
    pub fn is_long(&self, set: IndexSubset) -> bool {
        2 * self.subset_sum(set) > self.perimeter()
    }

    pub fn is_short(&self, set: IndexSubset) -> bool {
        !self.is_long(set)
    }

    /// Every signed sum `sum_{i in I} ±l_i` over a nonempty `I` is nonzero.
    ///
    /// A vanishing signed sum is the same thing as two distinct subsets with
    /// equal length sums (drop the common part), so it is enough to check
    /// that all `2^n` subset sums are pairwise distinct.
    pub fn is_generic(&self) -> bool {
        self.sum_collision().is_none()
    }

    /// Two disjoint subsets, not both empty, with equal sums.
    pub fn sum_collision(&self) -> Option<(IndexSubset, IndexSubset)> {
        let n = self.n();
        let mut sums: Vec<(u64, u32)> = Vec::with_capacity(1 << n);
        sums.push((0, 0));
        for i in 0..n {
            let l = self.lengths[i];
            for k in 0..sums.len() {
                let (s, m) = sums[k];
                sums.push((s + l, m | (1 << i)));
            }
        }
        sums.sort_unstable();
        sums.windows(2).find(|w| w[0].0 == w[1].0).map(|w| {
            let (a, b) = (IndexSubset(w[0].1), IndexSubset(w[1].1));
            let common = a.intersection(b);
            (b.difference(common), a.difference(common))
        })
    }

    /// No subset sits exactly on a wall `sum_I = sum_{I^c}`.
    pub fn avoids_walls(&self) -> bool {
        let p = self.perimeter();
        if p % 2 == 1 {
            return true;
        }
        IndexSubset::all(self.n()).all(|s| 2 * self.subset_sum(s) != p)
    }

    /// No singleton `{i}` is long.
    pub fn is_nonempty(&self) -> bool {
        self.long_edge().is_none()
    }

    pub fn long_edge(&self) -> Option<usize> {
        (1..=self.n()).find(|&i| self.is_long(IndexSubset::singleton(i)))
    }

    /// Checks genericity and nonemptiness.
    pub fn validate(&self) -> Result<(), LengthError> {
        if let Some((plus, minus)) = self.sum_collision() {
            return Err(LengthError::NonGeneric { plus, minus });
        }
        if let Some(i) = self.long_edge() {
            return Err(LengthError::Empty(i));
        }
        Ok(())
    }

    pub fn chamber_signature(&self) -> Result<ChamberSignature, LengthError> {
        if let Some((plus, minus)) = self.sum_collision() {
            return Err(LengthError::NonGeneric { plus, minus });
        }
        Ok(self.long_set_signature())
    }

    /// Long-set family without the genericity gate; used by the chamber scan
    /// for vectors that only avoid walls.
    pub(crate) fn long_set_signature(&self) -> ChamberSignature {
        let n = self.n();
        let mut words = vec![0u64; (1usize << n).div_ceil(64)];
        for s in IndexSubset::all(n) {
            if self.is_long(s) {
                let m = s.mask() as usize;
                words[m / 64] |= 1 << (m % 64);
            }
        }
        ChamberSignature { n, words }
    }

    /// A moved copy `2^n * L + (1, 2, 4, ..., 2^(n-1))`.
    ///
    /// If `L` avoids every wall, the result lies in the same chamber and has
    /// pairwise distinct subset sums.
    pub fn generic_lift(&self) -> LengthVector {
        let n = self.n();
        let scale = 1u64 << n;
        LengthVector {
            lengths: self
                .lengths
                .iter()
                .enumerate()
                .map(|(i, &l)| scale * l + (1 << i))
                .collect(),
        }
    }

    /// Deterministic sample of a generic nonempty vector with entries in `1..=bound`.
    pub fn random_generic(n: usize, bound: u64, seed: u64) -> Result<LengthVector, LengthError> {
        if !(4..=MAX_EDGES).contains(&n) || bound == 0 {
            return Err(LengthError::BadSamplingBox { n, bound });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RANDOM_RETRY_BUDGET {
            let lengths: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=bound)).collect();
            let lv = LengthVector { lengths };
            if lv.is_generic() && lv.is_nonempty() {
                return Ok(lv);
            }
        }
        Err(LengthError::BudgetExhausted(RANDOM_RETRY_BUDGET))
    }
}

impl FromStr for LengthVector {
    type Err = LengthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lengths = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|e| LengthError::Parse(format!("{t:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        LengthVector::new(lengths)
    }
}

impl fmt::Display for LengthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.lengths.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// The family of long subsets of `[n]`, stored as a bitset over subset masks.
/// Two generic vectors share a signature exactly when they lie in the same chamber.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChamberSignature {
    n: usize,
    words: Vec<u64>,
}

impl ChamberSignature {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_long(&self, set: IndexSubset) -> bool {
        let m = set.mask() as usize;
        self.words[m / 64] >> (m % 64) & 1 == 1
    }

    pub fn long_sets(&self) -> impl Iterator<Item = IndexSubset> + '_ {
        IndexSubset::all(self.n).filter(|&s| self.is_long(s))
    }

    /// Long sets all of whose proper subsets are short.
    pub fn minimal_long_sets(&self) -> Vec<IndexSubset> {
        self.long_sets()
            .filter(|&s| s.iter().all(|i| !self.is_long(s.without(i))))
            .collect()
    }

    /// True when some single edge is long.
    pub fn is_empty_moduli(&self) -> bool {
        (1..=self.n).any(|i| self.is_long(IndexSubset::singleton(i)))
    }
}
