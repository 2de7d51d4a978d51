//! The ring of perfect manifolds and the maps to and from nice manifolds.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::combination::Combination;
use crate::hkn::NormalForm;
use crate::labels::{LabelError, PerfectLabel};
use crate::lengths::IndexSubset;
use crate::moduli::Moduli;
use crate::nice_ring::{NiceElement, NiceTerms, RingError};

pub type PerfectTerms = Combination<PerfectLabel>;

#[derive(Clone)]
pub struct PerfectElement {
    moduli: Arc<Moduli>,
    terms: PerfectTerms,
}

impl fmt::Debug for PerfectElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PerfectElement[{}]({})",
            self.moduli.lengths(),
            self.terms
        )
    }
}

impl fmt::Display for PerfectElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.terms.fmt(f)
    }
}

impl PartialEq for PerfectElement {
    fn eq(&self, other: &Self) -> bool {
        self.moduli.lengths() == other.moduli.lengths() && self.terms == other.terms
    }
}

impl Eq for PerfectElement {}

fn vanishes(moduli: &Moduli, label: &PerfectLabel) -> bool {
    label.codim() > moduli.dim() || label.blocks().iter().any(|&b| moduli.is_long(b))
}

/// Builds a label from blocks known to be disjoint, dropping singletons.
fn label_of(blocks: impl IntoIterator<Item = IndexSubset>) -> PerfectLabel {
    PerfectLabel::from_canonical(blocks.into_iter().filter(|b| b.len() >= 2).collect())
}

impl PerfectElement {
    pub fn zero(moduli: &Arc<Moduli>) -> Self {
        PerfectElement {
            moduli: moduli.clone(),
            terms: PerfectTerms::new(),
        }
    }

    pub fn one(moduli: &Arc<Moduli>) -> Self {
        Self::from_label(moduli, PerfectLabel::unit(), 1)
    }

    pub fn from_terms(moduli: &Arc<Moduli>, mut terms: PerfectTerms) -> Self {
        terms.retain(|l| !vanishes(moduli, l));
        PerfectElement {
            moduli: moduli.clone(),
            terms,
        }
    }

    pub fn from_label(moduli: &Arc<Moduli>, label: PerfectLabel, coeff: impl Into<BigInt>) -> Self {
        Self::from_terms(moduli, PerfectTerms::single(label, coeff))
    }

    pub fn from_blocks<It>(moduli: &Arc<Moduli>, blocks: It) -> Result<Self, RingError>
    where
        It: IntoIterator<Item = IndexSubset>,
    {
        let blocks: Vec<_> = blocks.into_iter().collect();
        let n = moduli.n();
        for b in &blocks {
            if let Some(index) = b.max_index().filter(|&i| i > n) {
                return Err(LabelError::OutOfRange { index, n }.into());
            }
        }
        Ok(Self::from_label(
            moduli,
            PerfectLabel::from_blocks(blocks)?,
            1,
        ))
    }

    pub fn moduli(&self) -> &Arc<Moduli> {
        &self.moduli
    }

    pub fn terms(&self) -> &PerfectTerms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> Self {
        PerfectElement {
            moduli: self.moduli.clone(),
            terms: self.terms.scaled(&c.into()),
        }
    }

    fn check_context(&self, other: &Self) -> Result<(), RingError> {
        if self.moduli.same_as(&other.moduli) {
            Ok(())
        } else {
            Err(RingError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_context(other)?;
        let mut terms = self.terms.clone();
        terms.add_assign(&other.terms);
        Ok(PerfectElement {
            moduli: self.moduli.clone(),
            terms,
        })
    }

    /// The same labels read in the nice ring.
    pub fn phi(&self) -> NiceElement {
        let terms: NiceTerms = self
            .terms
            .iter()
            .map(|(l, c)| (l.to_nice(), c.clone()))
            .collect();
        NiceElement::from_terms(&self.moduli, terms)
    }

    /// Equality is decided in the nice ring.
    pub fn normal_form(&self) -> Result<NormalForm, RingError> {
        self.phi().normal_form()
    }

    pub fn same_class(&self, other: &Self) -> Result<bool, RingError> {
        self.check_context(other)?;
        Ok(self.normal_form()? == other.normal_form()?)
    }

    /// Product by the elementary perfect manifold `(i j)`.
    pub fn times_elementary(&self, i: usize, j: usize) -> Result<Self, RingError> {
        let n = self.moduli.n();
        if i == j {
            return Err(RingError::SameIndex(i));
        }
        if let Some(index) = [i, j].into_iter().find(|&x| x == 0 || x > n) {
            return Err(LabelError::OutOfRange { index, n }.into());
        }
        let mut out = PerfectTerms::new();
        for (label, c) in self.terms.iter() {
            out.add_scaled(&times_elementary_label(&self.moduli, label, i, j)?, c);
        }
        Ok(Self::from_terms(&self.moduli, out))
    }

    pub fn perfect_product(&self, other: &Self) -> Result<Self, RingError> {
        self.check_context(other)?;
        let mut out = PerfectTerms::new();
        for (lb, cb) in other.terms.iter() {
            let mut acc = self.clone();
            for (r, i) in lb.star_decomposition() {
                if acc.is_zero() {
                    break;
                }
                acc = acc.times_elementary(r, i)?;
            }
            out.add_scaled(&acc.terms, cb);
        }
        Ok(Self::from_terms(&self.moduli, out))
    }

    pub fn pow(&self, e: u32) -> Result<Self, RingError> {
        let mut acc = Self::one(&self.moduli);
        for _ in 0..e {
            acc = acc.perfect_product(self)?;
        }
        Ok(acc)
    }

    /// Reference product: through the nice ring and back.
    pub fn roundtrip_product(&self, other: &Self) -> Result<Self, RingError> {
        psi(&self.phi().cup(&other.phi())?)
    }
}

/// The case analysis for `label * (i j)`.
fn times_elementary_label(
    moduli: &Arc<Moduli>,
    label: &PerfectLabel,
    i: usize,
    j: usize,
) -> Result<PerfectTerms, RingError> {
    if label.codim() + 1 > moduli.dim() {
        return Ok(PerfectTerms::new());
    }
    let blocks = label.blocks();
    match (label.block_of(i), label.block_of(j)) {
        (Some(a), Some(b)) if a == b => {
            // (ij) = (ip) + (jq) - (pq) with p, q outside the block and not sharing one
            let inside = blocks[a];
            let (p, q) =
                fresh_pair(label, inside, moduli.n()).ok_or(RingError::NoFreshIndex(inside))?;
            let mut out = PerfectTerms::new();
            for (x, y, c) in [(i, p, 1), (j, q, 1), (p, q, -1)] {
                out.add_scaled(
                    &times_elementary_label(moduli, label, x, y)?,
                    &BigInt::from(c),
                );
            }
            Ok(out)
        }
        (a, b) => {
            let mut merged = IndexSubset::from_indices([i, j]);
            let mut rest = Vec::new();
            for (k, &block) in blocks.iter().enumerate() {
                if Some(k) == a || Some(k) == b {
                    merged = merged.union(block);
                } else {
                    rest.push(block);
                }
            }
            rest.push(merged);
            Ok(PerfectTerms::single(label_of(rest), BigInt::one()))
        }
    }
}

/// Smallest pair `p < q` outside `inside` whose members lie in different
/// blocks of `label` (or in none).
fn fresh_pair(label: &PerfectLabel, inside: IndexSubset, n: usize) -> Option<(usize, usize)> {
    let outside: Vec<usize> = (1..=n).filter(|&x| !inside.contains(x)).collect();
    for (k, &p) in outside.iter().enumerate() {
        for &q in &outside[k + 1..] {
            let bp = label.block_of(p);
            if bp.is_none() || bp != label.block_of(q) {
                return Some((p, q));
            }
        }
    }
    None
}

/// `psi(i ~j) = (j k) - (i k)`.
pub fn psi_elementary(
    moduli: &Arc<Moduli>,
    i: usize,
    j: usize,
    k: usize,
) -> Result<PerfectElement, RingError> {
    if i == j || i == k || j == k {
        return Err(RingError::SameIndex(if i == j || i == k { i } else { j }));
    }
    let a = PerfectElement::from_blocks(moduli, [IndexSubset::from_indices([j, k])])?;
    let b = PerfectElement::from_blocks(moduli, [IndexSubset::from_indices([i, k])])?;
    a.try_add(&b.scale(-1))
}

/// `psi(I ~J) = (I).(J k) - (I k).(J)` for the given `k`, or the smallest
/// index outside `I ∪ J` when `k` is `None`.
pub fn psi_factor(
    moduli: &Arc<Moduli>,
    plus: IndexSubset,
    minus: IndexSubset,
    k: Option<usize>,
) -> Result<PerfectElement, RingError> {
    if let Some(index) = plus.intersection(minus).min_index() {
        return Err(LabelError::Overlap { index }.into());
    }
    let support = plus.union(minus);
    if support.is_empty() {
        return Err(LabelError::EmptyFactor.into());
    }
    if minus.is_empty() {
        return Ok(PerfectElement::from_label(moduli, label_of([plus]), 1));
    }
    if plus.is_empty() {
        // (~J) is the unit up to the swap sign: -(J)
        return Ok(PerfectElement::from_label(moduli, label_of([minus]), -1));
    }
    let k = match k {
        Some(k) if support.contains(k) => return Err(RingError::SameIndex(k)),
        Some(k) => k,
        None => match (1..=moduli.n()).find(|&x| !support.contains(x)) {
            Some(k) => k,
            // I ∪ J = [n] has codimension n - 1
            None => return Ok(PerfectElement::zero(moduli)),
        },
    };
    let mut terms = PerfectTerms::new();
    terms.add_term(label_of([plus, minus.with(k)]), BigInt::one());
    terms.add_term(label_of([plus.with(k), minus]), -BigInt::one());
    Ok(PerfectElement::from_terms(moduli, terms))
}

/// Linear and multiplicative extension of [`psi_factor`].
pub fn psi(x: &NiceElement) -> Result<PerfectElement, RingError> {
    let moduli = x.moduli();
    let mut out = PerfectElement::zero(moduli);
    for (label, c) in x.terms().iter() {
        let mut acc = PerfectElement::one(moduli);
        for f in label.factors() {
            acc = acc.perfect_product(&psi_factor(moduli, f.plus(), f.minus(), None)?)?;
        }
        out = out.try_add(&acc.scale(c.clone()))?;
    }
    Ok(out)
}

/// Whether `psi(phi(x)) = x` in the ring.
pub fn psi_phi_roundtrip_check(x: &PerfectElement) -> Result<bool, RingError> {
    psi(&x.phi())?.same_class(x)
}
