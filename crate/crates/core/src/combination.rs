//! Finite integer combinations of labels.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::hkn::write_signed_terms;

/// Something that can be printed as a term and knows whether it is the unit.
pub trait Term: Ord + Clone + fmt::Display {
    fn is_unit(&self) -> bool;
}

impl Term for crate::labels::NiceLabel {
    fn is_unit(&self) -> bool {
        crate::labels::NiceLabel::is_unit(self)
    }
}

impl Term for crate::labels::PerfectLabel {
    fn is_unit(&self) -> bool {
        crate::labels::PerfectLabel::is_unit(self)
    }
}

/// Map from label to nonzero coefficient, kept sorted by the label order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Combination<L: Term> {
    terms: BTreeMap<L, BigInt>,
}

impl<L: Term> Default for Combination<L> {
    fn default() -> Self {
        Combination {
            terms: BTreeMap::new(),
        }
    }
}

impl<L: Term> Combination<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(label: L, coeff: impl Into<BigInt>) -> Self {
        let mut c = Self::new();
        c.add_term(label, coeff.into());
        c
    }

    pub fn add_term(&mut self, label: L, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&label) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&label);
                }
            }
            None => {
                self.terms.insert(label, coeff);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (l, c) in &other.terms {
            self.add_term(l.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &BigInt) {
        for (l, c) in &other.terms {
            self.add_term(l.clone(), c * factor);
        }
    }

    pub fn scaled(&self, factor: &BigInt) -> Self {
        let mut out = Self::new();
        out.add_scaled(self, factor);
        out
    }

    pub fn negated(&self) -> Self {
        Combination {
            terms: self.terms.iter().map(|(l, c)| (l.clone(), -c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, label: &L) -> BigInt {
        self.terms.get(label).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, &BigInt)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.terms.keys()
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&L) -> bool) {
        self.terms.retain(|l, _| keep(l));
    }
}

impl<L: Term> FromIterator<(L, BigInt)> for Combination<L> {
    fn from_iter<T: IntoIterator<Item = (L, BigInt)>>(iter: T) -> Self {
        let mut c = Self::new();
        for (l, k) in iter {
            c.add_term(l, k);
        }
        c
    }
}

impl<L: Term> fmt::Display for Combination<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(
            f,
            self.terms.iter().map(|(l, c)| (l.clone(), c.clone())),
            |l| l.is_unit(),
        )
    }
}
