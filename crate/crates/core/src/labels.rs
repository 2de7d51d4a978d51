//! Labels of nice and perfect manifolds.
//!
//! A nice factor `(I ~J)` freezes the edges of `I` codirected and those of
//! `J` opposite to them. Swapping the two sides flips the sign, so every
//! factor is stored with the smallest index on the `I` side. Factors on a
//! single index are the unit and are dropped.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use thiserror::Error;

use crate::lengths::IndexSubset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("index {index} appears on both sides of a factor")]
    Overlap { index: usize },
    #[error("empty factor")]
    EmptyFactor,
    #[error("index {index} appears in two factors of one label")]
    SharedIndex { index: usize },
    #[error("index {index} is outside 1..={n}")]
    OutOfRange { index: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_bool_negative(neg: bool) -> Self {
        if neg {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// An elementary nice factor `(a b)` or `(a ~b)` with `a` on the positive side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elementary {
    pub first: usize,
    pub second: usize,
    /// `Plus` for codirected, `Minus` for opposite.
    pub relation: Sign,
}

impl Elementary {
    pub fn codirected(first: usize, second: usize) -> Self {
        Elementary {
            first,
            second,
            relation: Sign::Plus,
        }
    }

    pub fn opposite(first: usize, second: usize) -> Self {
        Elementary {
            first,
            second,
            relation: Sign::Minus,
        }
    }

    /// Rewrites so that `first < second`; returns the sign picked up.
    pub fn canonical(self) -> (Elementary, Sign) {
        if self.first < self.second {
            (self, Sign::Plus)
        } else {
            let swapped = Elementary {
                first: self.second,
                second: self.first,
                ..self
            };
            (swapped, self.relation)
        }
    }

    pub fn to_factor(self) -> Result<(Option<NiceFactor>, Sign), LabelError> {
        let a = IndexSubset::singleton(self.first);
        let b = IndexSubset::singleton(self.second);
        match self.relation {
            Sign::Plus => canonicalize_factor(a.union(b), IndexSubset::EMPTY),
            Sign::Minus => canonicalize_factor(a, b),
        }
    }
}

/// A canonical nice factor: `|I ∪ J| >= 2`, `I ∩ J = ∅`, `min(I ∪ J) ∈ I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NiceFactor {
    plus: IndexSubset,
    minus: IndexSubset,
}

/// Normalizes `(I ~J)`. Returns `None` for the unit (a single index).
pub fn canonicalize_factor(
    plus: IndexSubset,
    minus: IndexSubset,
) -> Result<(Option<NiceFactor>, Sign), LabelError> {
    if let Some(index) = plus.intersection(minus).min_index() {
        return Err(LabelError::Overlap { index });
    }
    let support = plus.union(minus);
    let root = support.min_index().ok_or(LabelError::EmptyFactor)?;
    let (plus, minus, sign) = if plus.contains(root) {
        (plus, minus, Sign::Plus)
    } else {
        (minus, plus, Sign::Minus)
    };
    if support.len() == 1 {
        return Ok((None, sign));
    }
    Ok((Some(NiceFactor { plus, minus }), sign))
}

impl NiceFactor {
    pub fn plus(&self) -> IndexSubset {
        self.plus
    }

    pub fn minus(&self) -> IndexSubset {
        self.minus
    }

    pub fn support(&self) -> IndexSubset {
        self.plus.union(self.minus)
    }

    pub fn root(&self) -> usize {
        self.plus.min_index().expect("canonical factor has a root")
    }

    pub fn codim(&self) -> usize {
        self.support().len() - 1
    }

    /// Star-shaped elementary factors from the root; their product is `+self`.
    pub fn star(&self) -> impl Iterator<Item = Elementary> + '_ {
        let r = self.root();
        self.plus
            .without(r)
            .iter()
            .map(move |i| Elementary::codirected(r, i))
            .chain(self.minus.iter().map(move |j| Elementary::opposite(r, j)))
    }
}

impl Ord for NiceFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.support()
            .lex_cmp(other.support())
            .then_with(|| self.minus.lex_cmp(other.minus))
    }
}

impl PartialOrd for NiceFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NiceFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, i) in self.support().iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            if self.minus.contains(i) {
                f.write_str("~")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str(")")
    }
}

/// An unordered product of pairwise disjoint canonical nice factors.
/// The empty product is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NiceLabel {
    factors: Vec<NiceFactor>,
}

impl NiceLabel {
    pub fn unit() -> Self {
        NiceLabel::default()
    }

    /// Builds a label from raw `(I, J)` pairs, canonicalizing each factor.
    pub fn from_parts<It>(parts: It) -> Result<(NiceLabel, Sign), LabelError>
    where
        It: IntoIterator<Item = (IndexSubset, IndexSubset)>,
    {
        let mut used = IndexSubset::EMPTY;
        let mut sign = Sign::Plus;
        let mut factors = Vec::new();
        for (plus, minus) in parts {
            let support = plus.union(minus);
            if let Some(index) = used.intersection(support).min_index() {
                return Err(LabelError::SharedIndex { index });
            }
            used = used.union(support);
            let (factor, s) = canonicalize_factor(plus, minus)?;
            sign = sign * s;
            factors.extend(factor);
        }
        factors.sort_by_key(|f| f.root());
        Ok((NiceLabel { factors }, sign))
    }

    /// Builds from canonical factors known to be disjoint.
    pub(crate) fn from_canonical(mut factors: Vec<NiceFactor>) -> NiceLabel {
        factors.sort_by_key(|f| f.root());
        NiceLabel { factors }
    }

    pub fn factors(&self) -> &[NiceFactor] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn support(&self) -> IndexSubset {
        self.factors
            .iter()
            .fold(IndexSubset::EMPTY, |acc, f| acc.union(f.support()))
    }

    pub fn codim(&self) -> usize {
        self.factors.iter().map(NiceFactor::codim).sum()
    }

    pub fn is_perfect(&self) -> bool {
        self.factors.iter().all(|f| f.minus.is_empty())
    }

    /// Elementary factors whose product reconstructs the label with sign +1.
    pub fn star_decomposition(&self) -> Vec<Elementary> {
        self.factors.iter().flat_map(|f| f.star()).collect()
    }
}

impl Ord for NiceLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.codim()
            .cmp(&other.codim())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for NiceLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NiceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (k, factor) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

/// An unordered product of disjoint blocks of size at least two.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PerfectLabel {
    blocks: Vec<IndexSubset>,
}

impl PerfectLabel {
    pub fn unit() -> Self {
        PerfectLabel::default()
    }

    /// Drops singleton blocks; rejects overlapping or empty blocks.
    pub fn from_blocks<It>(blocks: It) -> Result<PerfectLabel, LabelError>
    where
        It: IntoIterator<Item = IndexSubset>,
    {
        let mut used = IndexSubset::EMPTY;
        let mut kept = Vec::new();
        for b in blocks {
            if b.is_empty() {
                return Err(LabelError::EmptyFactor);
            }
            if let Some(index) = used.intersection(b).min_index() {
                return Err(LabelError::SharedIndex { index });
            }
            used = used.union(b);
            if b.len() >= 2 {
                kept.push(b);
            }
        }
        Ok(Self::from_canonical(kept))
    }

    pub(crate) fn from_canonical(mut blocks: Vec<IndexSubset>) -> PerfectLabel {
        blocks.retain(|b| b.len() >= 2);
        blocks.sort_by_key(|b| b.min_index());
        PerfectLabel { blocks }
    }

    pub fn blocks(&self) -> &[IndexSubset] {
        &self.blocks
    }

    pub fn is_unit(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn support(&self) -> IndexSubset {
        self.blocks
            .iter()
            .fold(IndexSubset::EMPTY, |a, &b| a.union(b))
    }

    pub fn codim(&self) -> usize {
        self.blocks.iter().map(|b| b.len() - 1).sum()
    }

    pub fn block_of(&self, i: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(i))
    }

    /// Elementary perfect factors `(r i)` from each block root.
    pub fn star_decomposition(&self) -> Vec<(usize, usize)> {
        self.blocks
            .iter()
            .flat_map(|b| {
                let r = b.min_index().expect("nonempty block");
                b.without(r).iter().map(move |i| (r, i))
            })
            .collect()
    }

    /// The same label read as a nice label.
    pub fn to_nice(&self) -> NiceLabel {
        NiceLabel::from_canonical(
            self.blocks
                .iter()
                .map(|&b| NiceFactor {
                    plus: b,
                    minus: IndexSubset::EMPTY,
                })
                .collect(),
        )
    }
}

impl Ord for PerfectLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.codim().cmp(&other.codim()).then_with(|| {
            self.blocks
                .iter()
                .map(|b| b.iter().collect::<Vec<_>>())
                .cmp(other.blocks.iter().map(|b| b.iter().collect::<Vec<_>>()))
        })
    }
}

impl PartialOrd for PerfectLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PerfectLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return f.write_str("1");
        }
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            f.write_str("(")?;
            for (m, i) in b.iter().enumerate() {
                if m > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{i}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> IndexSubset {
        IndexSubset::from_indices(v.iter().copied())
    }

    fn label(parts: &[(&[usize], &[usize])]) -> (NiceLabel, Sign) {
        NiceLabel::from_parts(parts.iter().map(|(p, m)| (set(p), set(m)))).unwrap()
    }

    #[test]
    fn swap_flips_sign() {
        let (f, s) = canonicalize_factor(set(&[3]), set(&[1, 2])).unwrap();
        let f = f.unwrap();
        assert_eq!(s, Sign::Minus);
        assert_eq!(f.plus(), set(&[1, 2]));
        assert_eq!(f.minus(), set(&[3]));
        assert_eq!(f.to_string(), "(1 2 ~3)");
    }

    #[test]
    fn canonical_factor_is_kept() {
        let (f, s) = canonicalize_factor(set(&[1, 2]), IndexSubset::EMPTY).unwrap();
        assert_eq!(s, Sign::Plus);
        assert_eq!(f.unwrap().plus(), set(&[1, 2]));
    }

    #[test]
    fn singleton_is_unit() {
        assert_eq!(
            canonicalize_factor(set(&[5]), IndexSubset::EMPTY).unwrap(),
            (None, Sign::Plus)
        );
        // (~5) = -(5) = -1
        assert_eq!(
            canonicalize_factor(IndexSubset::EMPTY, set(&[5])).unwrap(),
            (None, Sign::Minus)
        );
    }

    #[test]
    fn overlap_rejected() {
        assert_eq!(
            canonicalize_factor(set(&[1, 2]), set(&[2])),
            Err(LabelError::Overlap { index: 2 })
        );
        assert_eq!(
            canonicalize_factor(IndexSubset::EMPTY, IndexSubset::EMPTY),
            Err(LabelError::EmptyFactor)
        );
    }

    #[test]
    fn canonicalization_is_idempotent() {
        for plus in IndexSubset::all(5) {
            for minus in IndexSubset::all(5) {
                if !plus.is_disjoint(minus) || plus.union(minus).is_empty() {
                    continue;
                }
                let (f, s) = canonicalize_factor(plus, minus).unwrap();
                if let Some(f) = f {
                    let (g, t) = canonicalize_factor(f.plus(), f.minus()).unwrap();
                    assert_eq!(g, Some(f));
                    assert_eq!(t, Sign::Plus);
                    let (h, u) = canonicalize_factor(minus, plus).unwrap();
                    assert_eq!(h, Some(f));
                    assert_eq!(u, -s);
                }
            }
        }
    }

    #[test]
    fn codim_examples() {
        assert_eq!(label(&[(&[1, 2], &[])]).0.codim(), 1);
        assert_eq!(label(&[(&[1, 2], &[3]), (&[4, 5], &[])]).0.codim(), 3);
        assert_eq!(NiceLabel::unit().codim(), 0);
    }

    #[test]
    fn star_examples() {
        let (l, _) = label(&[(&[1, 2, 3], &[])]);
        assert_eq!(
            l.star_decomposition(),
            vec![Elementary::codirected(1, 2), Elementary::codirected(1, 3)]
        );
        let (l, _) = label(&[(&[1, 2], &[3])]);
        assert_eq!(
            l.star_decomposition(),
            vec![Elementary::codirected(1, 2), Elementary::opposite(1, 3)]
        );
        let (l, _) = label(&[(&[3, 4], &[]), (&[1, 2], &[])]);
        assert_eq!(
            l.star_decomposition(),
            vec![Elementary::codirected(1, 2), Elementary::codirected(3, 4)]
        );
        for parts in [
            vec![(set(&[1, 4]), set(&[2, 6])), (set(&[3]), set(&[5, 7]))],
            vec![(set(&[2]), set(&[1]))],
        ] {
            let (l, _) = NiceLabel::from_parts(parts).unwrap();
            assert_eq!(l.star_decomposition().len(), l.codim());
        }
    }

    #[test]
    fn shared_index_rejected() {
        let err = NiceLabel::from_parts([(set(&[1, 2]), set(&[])), (set(&[2, 3]), set(&[]))]);
        assert_eq!(err, Err(LabelError::SharedIndex { index: 2 }));
    }

    #[test]
    fn display_and_order() {
        let (a, s) = label(&[(&[4, 5], &[]), (&[2, 3], &[1])]);
        assert_eq!(s, Sign::Minus);
        assert_eq!(a.to_string(), "(1 ~2 ~3).(4 5)");
        let (b, _) = label(&[(&[1, 2], &[])]);
        assert!(b < a);
        assert_eq!(NiceLabel::unit().to_string(), "1");
    }

    #[test]
    fn perfect_labels() {
        let p = PerfectLabel::from_blocks([set(&[4, 5]), set(&[1, 2, 3]), set(&[6])]).unwrap();
        assert_eq!(p.to_string(), "(1 2 3).(4 5)");
        assert_eq!(p.codim(), 3);
        assert_eq!(p.star_decomposition(), vec![(1, 2), (1, 3), (4, 5)]);
        assert!(p.to_nice().is_perfect());
        assert_eq!(p.to_nice().to_string(), "(1 2 3).(4 5)");
        assert!(PerfectLabel::from_blocks([set(&[1, 2]), set(&[2, 3])]).is_err());
    }
}
