//! Cup products of nice manifolds.
//!
//! A product of elementary factors `(a b)` / `(a ~b)` is evaluated by
//! inserting the factors into a [`SignedPartition`]. A factor joining two
//! classes glues the corresponding nice factors. A factor that contradicts
//! the recorded directions makes the product vanish. A factor that is
//! already implied is replaced by `±Ch(a) = ±((a k) - (a ~k))` for an index
//! `k` outside the class of `a`, which splits the computation in two
//! branches that each glue one more class.
//!
//! Orientation bookkeeping: every class carries a sign `eps` such that the
//! class contributes `eps * (C, sigma)`, where `sigma` orients the class
//! with its root (smallest index) on the positive side. Gluing `X` and `Y`
//! along a shared index `b` gives `sigma_Y(b)` times the union oriented by
//! `X`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::combination::Combination;
use crate::hkn::{HknPolynomial, NormalForm, PresentationError};
use crate::labels::{canonicalize_factor, Elementary, LabelError, NiceFactor, NiceLabel, Sign};
use crate::lengths::{IndexSubset, LengthVector};
use crate::moduli::Moduli;
use crate::partition::{Link, SignedPartition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("elements belong to different length vectors")]
    ContextMismatch,
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error("no index outside {0} to expand a Chern class")]
    NoFreshIndex(IndexSubset),
    #[error("Chern class needs two distinct indices, got {0} twice")]
    SameIndex(usize),
    #[error("not enough edges for this operation")]
    TooFewEdges,
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// Chooses the auxiliary index `k` in `Ch(a) = (a k) - (a ~k)`.
pub trait FreshIndex {
    /// An index of `1..=n` outside `component`, if any.
    fn pick(&mut self, component: IndexSubset, n: usize) -> Option<usize>;
}

/// Smallest index outside the class.
#[derive(Debug, Clone, Copy, Default)]
pub struct SmallestFresh;

impl FreshIndex for SmallestFresh {
    fn pick(&mut self, component: IndexSubset, n: usize) -> Option<usize> {
        (1..=n).find(|&k| !component.contains(k))
    }
}

impl<F: FnMut(IndexSubset, usize) -> Option<usize>> FreshIndex for F {
    fn pick(&mut self, component: IndexSubset, n: usize) -> Option<usize> {
        self(component, n)
    }
}

pub type NiceTerms = Combination<NiceLabel>;

#[derive(Clone)]
struct Branch {
    partition: SignedPartition,
    /// orientation sign per class root
    eps: Vec<Sign>,
    coeff: Sign,
}

impl Branch {
    fn new(n: usize) -> Self {
        Branch {
            partition: SignedPartition::new(n),
            eps: vec![Sign::Plus; n + 1],
            coeff: Sign::Plus,
        }
    }

    fn insert(&mut self, e: Elementary) -> Link {
        let (ra, sa) = self.partition.find(e.first);
        let (rb, sb) = self.partition.find(e.second);
        let link = self.partition.link(e.first, e.second, e.relation);
        if let Link::Merged { root, .. } = link {
            let eps = self.eps[ra] * self.eps[rb];
            self.eps[root] = if root == ra {
                eps * sb
            } else {
                eps * sa * e.relation
            };
        }
        link
    }

    fn violates_lengths(&mut self, i: usize, lengths: &LengthVector) -> bool {
        let (plus, minus) = self.partition.sides(i);
        lengths.is_long(plus) || lengths.is_long(minus)
    }

    fn read_off(mut self) -> (NiceLabel, Sign) {
        let mut sign = self.coeff;
        let mut factors = Vec::new();
        for r in self.partition.roots() {
            let (plus, minus) = self.partition.sides(r);
            if plus.len() + minus.len() < 2 {
                continue;
            }
            sign = sign * self.eps[r];
            let (f, s) = canonicalize_factor(plus, minus).expect("partition sides are disjoint");
            debug_assert_eq!(s, Sign::Plus);
            factors.extend(f);
        }
        (NiceLabel::from_canonical(factors), sign)
    }
}

/// Expands products of elementary factors into nice labels.
pub struct Expander<'a> {
    n: usize,
    lengths: Option<&'a LengthVector>,
    fresh: &'a mut dyn FreshIndex,
}

impl<'a> Expander<'a> {
    /// Applies the dimension bound and the long-set vanishing of `lengths`.
    pub fn pruned(lengths: &'a LengthVector, fresh: &'a mut dyn FreshIndex) -> Self {
        Expander {
            n: lengths.n(),
            lengths: Some(lengths),
            fresh,
        }
    }

    /// Pure label calculus over `[n]`: nothing vanishes except through
    /// contradicting directions.
    pub fn raw(n: usize, fresh: &'a mut dyn FreshIndex) -> Self {
        Expander {
            n,
            lengths: None,
            fresh,
        }
    }

    /// Product of the factors, taken in the given order.
    pub fn expand(&mut self, factors: &[Elementary]) -> Result<NiceTerms, RingError> {
        let mut out = NiceTerms::new();
        if let Some(lengths) = self.lengths {
            if factors.len() > lengths.n() - 3 {
                return Ok(out);
            }
        }
        for e in factors {
            for i in [e.first, e.second] {
                if i == 0 || i > self.n {
                    return Err(LabelError::OutOfRange {
                        index: i,
                        n: self.n,
                    }
                    .into());
                }
            }
            if e.first == e.second {
                return Err(RingError::SameIndex(e.first));
            }
        }
        self.run(Branch::new(self.n), factors, &mut out)?;
        Ok(out)
    }

    fn run(
        &mut self,
        mut branch: Branch,
        rest: &[Elementary],
        out: &mut NiceTerms,
    ) -> Result<(), RingError> {
        let Some((&e, tail)) = rest.split_first() else {
            let (label, sign) = branch.read_off();
            out.add_term(label, BigInt::from(sign.to_i64()));
            return Ok(());
        };
        match branch.insert(e) {
            Link::Contradiction => Ok(()),
            Link::Merged { .. } => {
                if let Some(l) = self.lengths {
                    if branch.violates_lengths(e.first, l) {
                        return Ok(());
                    }
                }
                self.run(branch, tail, out)
            }
            Link::Redundant => {
                let a = e.first;
                let component = branch.partition.component(a);
                let k = self
                    .fresh
                    .pick(component, self.n)
                    .ok_or(RingError::NoFreshIndex(component))?;
                debug_assert!(!component.contains(k));
                // (a b) -> +Ch(a), (a ~b) -> -Ch(a); Ch(a) = (a k) - (a ~k)
                for (relation, sign) in [(Sign::Plus, e.relation), (Sign::Minus, -e.relation)] {
                    let mut b = branch.clone();
                    b.coeff = b.coeff * sign;
                    b.insert(Elementary {
                        first: a,
                        second: k,
                        relation,
                    });
                    if let Some(l) = self.lengths {
                        if b.violates_lengths(a, l) {
                            continue;
                        }
                    }
                    self.run(b, tail, out)?;
                }
                Ok(())
            }
        }
    }
}

/// Sorted canonical factors of a product of labels; sorting makes the
/// expansion independent of the order of the operands.
fn collect_factors<'l>(labels: impl IntoIterator<Item = &'l NiceLabel>) -> Vec<Elementary> {
    let mut all: Vec<Elementary> = labels
        .into_iter()
        .flat_map(|l| l.star_decomposition())
        .collect();
    all.sort();
    all
}

/// Label-level product without any length constraints.
pub fn raw_product(n: usize, labels: &[&NiceLabel]) -> Result<NiceTerms, RingError> {
    Expander::raw(n, &mut SmallestFresh).expand(&collect_factors(labels.iter().copied()))
}

/// Image of an elementary factor in the polynomial presentation:
/// `(i n) -> V_i`, `(i ~n) -> -(V_i + R)`, `(i j) -> V_i + V_j + R`,
/// `(i ~j) -> V_j - V_i` for `i < j < n`.
pub fn elementary_to_hkn(e: Elementary, n: usize) -> HknPolynomial {
    let (e, sign) = e.canonical();
    let (a, b) = (e.first, e.second);
    let p = match (b == n, e.relation) {
        (true, Sign::Plus) => HknPolynomial::v(a),
        (true, Sign::Minus) => -HknPolynomial::u(a),
        (false, Sign::Plus) => HknPolynomial::v(a) + HknPolynomial::v(b) + HknPolynomial::r(),
        (false, Sign::Minus) => HknPolynomial::v(b) - HknPolynomial::v(a),
    };
    if sign.is_minus() {
        -p
    } else {
        p
    }
}

/// Product of the images of the star decomposition.
pub fn label_to_hkn(label: &NiceLabel, n: usize) -> HknPolynomial {
    label
        .star_decomposition()
        .into_iter()
        .fold(HknPolynomial::one(), |acc, e| {
            acc.multiply(&elementary_to_hkn(e, n))
        })
}

/// An element of the ring of nice manifolds for a fixed length vector.
#[derive(Clone)]
pub struct NiceElement {
    moduli: Arc<Moduli>,
    terms: NiceTerms,
}

impl fmt::Debug for NiceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NiceElement[{}]({})", self.moduli.lengths(), self.terms)
    }
}

impl PartialEq for NiceElement {
    fn eq(&self, other: &Self) -> bool {
        self.moduli.lengths() == other.moduli.lengths() && self.terms == other.terms
    }
}

impl Eq for NiceElement {}

impl fmt::Display for NiceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.terms.fmt(f)
    }
}

impl NiceElement {
    pub fn zero(moduli: &Arc<Moduli>) -> Self {
        NiceElement {
            moduli: moduli.clone(),
            terms: NiceTerms::new(),
        }
    }

    pub fn one(moduli: &Arc<Moduli>) -> Self {
        Self::from_label(moduli, NiceLabel::unit(), BigInt::one())
    }

    /// Drops terms that vanish for dimension or length reasons.
    pub fn from_terms(moduli: &Arc<Moduli>, terms: NiceTerms) -> Self {
        let mut terms = terms;
        terms.retain(|l| !vanishes(moduli, l));
        NiceElement {
            moduli: moduli.clone(),
            terms,
        }
    }

    pub fn from_label(moduli: &Arc<Moduli>, label: NiceLabel, coeff: impl Into<BigInt>) -> Self {
        Self::from_terms(moduli, NiceTerms::single(label, coeff))
    }

    /// `(I_1 ~J_1) . (I_2 ~J_2) ...` from raw sides.
    pub fn from_parts<It>(moduli: &Arc<Moduli>, parts: It) -> Result<Self, RingError>
    where
        It: IntoIterator<Item = (IndexSubset, IndexSubset)>,
    {
        let n = moduli.n();
        let parts: Vec<_> = parts.into_iter().collect();
        for (p, m) in &parts {
            if let Some(index) = p.union(*m).max_index().filter(|&i| i > n) {
                return Err(LabelError::OutOfRange { index, n }.into());
            }
        }
        let (label, sign) = NiceLabel::from_parts(parts)?;
        Ok(Self::from_label(moduli, label, sign.to_i64()))
    }

    pub fn elementary(moduli: &Arc<Moduli>, e: Elementary) -> Result<Self, RingError> {
        let (f, s) = e.to_factor()?;
        let label = NiceLabel::from_canonical(f.into_iter().collect());
        if e.first.max(e.second) > moduli.n() {
            return Err(LabelError::OutOfRange {
                index: e.first.max(e.second),
                n: moduli.n(),
            }
            .into());
        }
        Ok(Self::from_label(moduli, label, s.to_i64()))
    }

    /// `Ch(i) = (i k) - (i ~k)`.
    pub fn chern(moduli: &Arc<Moduli>, i: usize, k: usize) -> Result<Self, RingError> {
        if i == k {
            return Err(RingError::SameIndex(i));
        }
        let a = Self::elementary(moduli, Elementary::codirected(i, k))?;
        let b = Self::elementary(moduli, Elementary::opposite(i, k))?;
        Ok(a - b)
    }

    /// `Ch(i)` with `k` the smallest index different from `i`.
    pub fn chern_default(moduli: &Arc<Moduli>, i: usize) -> Result<Self, RingError> {
        let k = if i == 1 { 2 } else { 1 };
        Self::chern(moduli, i, k)
    }

    pub fn moduli(&self) -> &Arc<Moduli> {
        &self.moduli
    }

    pub fn terms(&self) -> &NiceTerms {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> Self {
        NiceElement {
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
        Ok(NiceElement {
            moduli: self.moduli.clone(),
            terms,
        })
    }

    pub fn cup(&self, other: &Self) -> Result<Self, RingError> {
        self.cup_with(other, &mut SmallestFresh)
    }

    pub fn cup_with(&self, other: &Self, fresh: &mut dyn FreshIndex) -> Result<Self, RingError> {
        self.check_context(other)?;
        let lengths = self.moduli.lengths();
        let mut expander = Expander::pruned(lengths, fresh);
        let mut out = NiceTerms::new();
        for (la, ca) in self.terms.iter() {
            for (lb, cb) in other.terms.iter() {
                let product = expander.expand(&collect_factors([la, lb]))?;
                out.add_scaled(&product, &(ca * cb));
            }
        }
        Ok(NiceElement {
            moduli: self.moduli.clone(),
            terms: out,
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self, RingError> {
        let mut acc = Self::one(&self.moduli);
        for _ in 0..e {
            acc = acc.cup(self)?;
        }
        Ok(acc)
    }

    pub fn to_hkn(&self) -> HknPolynomial {
        let n = self.moduli.n();
        let mut p = HknPolynomial::zero();
        for (l, c) in self.terms.iter() {
            p += label_to_hkn(l, n).scale(c);
        }
        p
    }

    pub fn normal_form(&self) -> Result<NormalForm, RingError> {
        Ok(self.moduli.basis()?.reduce(&self.to_hkn()))
    }

    /// Equality in the cohomology ring.
    pub fn same_class(&self, other: &Self) -> Result<bool, RingError> {
        self.check_context(other)?;
        Ok(self.normal_form()? == other.normal_form()?)
    }

    /// Substitutes `V_i -> (n i)` and `R -> (n ~1) - (n 1)` and multiplies out
    /// with the cup product.
    pub fn from_hkn(moduli: &Arc<Moduli>, p: &HknPolynomial) -> Result<Self, RingError> {
        let n = moduli.n();
        let r = Self::elementary(moduli, Elementary::opposite(n, 1))?
            - Self::elementary(moduli, Elementary::codirected(n, 1))?;
        let mut out = Self::zero(moduli);
        for (m, c) in p.terms() {
            let mut t = r.pow(m.r)?;
            for i in m.v.iter() {
                t = t.cup(&Self::elementary(moduli, Elementary::codirected(n, i))?)?;
            }
            out = out + t.scale(c.clone());
        }
        Ok(out)
    }
}

fn vanishes(moduli: &Moduli, label: &NiceLabel) -> bool {
    label.codim() > moduli.dim()
        || label
            .factors()
            .iter()
            .any(|f: &NiceFactor| moduli.is_long(f.plus()) || moduli.is_long(f.minus()))
}

impl std::ops::Add for NiceElement {
    type Output = NiceElement;
    /// Panics when the contexts differ; see [`NiceElement::try_add`].
    fn add(self, rhs: NiceElement) -> NiceElement {
        self.try_add(&rhs)
            .expect("adding elements of different moduli spaces")
    }
}

impl std::ops::Neg for NiceElement {
    type Output = NiceElement;
    fn neg(self) -> NiceElement {
        NiceElement {
            terms: self.terms.negated(),
            moduli: self.moduli,
        }
    }
}

impl std::ops::Sub for NiceElement {
    type Output = NiceElement;
    fn sub(self, rhs: NiceElement) -> NiceElement {
        self + (-rhs)
    }
}

/// Checks `sum_{S ⊊ H, S ∪ {n} short} (S n) * (-Ch(n))^(|H - S| - 1) = (H)`
/// in the cohomology ring.
pub fn sigma_identity_check(moduli: &Arc<Moduli>, h: IndexSubset) -> Result<bool, RingError> {
    let n = moduli.n();
    let last = IndexSubset::singleton(n);
    if h.contains(n) || h.len() < 2 {
        return Err(RingError::TooFewEdges);
    }
    let minus_chern = -NiceElement::chern_default(moduli, n)?;
    let mut sum = NiceElement::zero(moduli);
    for s in h.subsets() {
        if s == h || moduli.is_long(s.union(last)) {
            continue;
        }
        let base = NiceElement::from_parts(moduli, [(s.union(last), IndexSubset::EMPTY)])?;
        let power = minus_chern.pow((h.len() - s.len() - 1) as u32)?;
        sum = sum + base.cup(&power)?;
    }
    let target = NiceElement::from_parts(moduli, [(h, IndexSubset::EMPTY)])?;
    sum.same_class(&target)
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

    fn raw(n: usize, factors: &[(&[usize], &[usize])]) -> String {
        let mut sign = Sign::Plus;
        let labels: Vec<NiceLabel> = factors
            .iter()
            .map(|f| {
                let (l, s) = label(&[*f]);
                sign = sign * s;
                l
            })
            .collect();
        let refs: Vec<&NiceLabel> = labels.iter().collect();
        let terms = raw_product(n, &refs).unwrap();
        terms.scaled(&BigInt::from(sign.to_i64())).to_string()
    }

    #[test]
    fn gluing_rules() {
        assert_eq!(raw(5, &[(&[1, 2], &[]), (&[2, 3], &[])]), "(1 2 3)");
        assert_eq!(raw(5, &[(&[1, 2], &[]), (&[1], &[3])]), "(1 2 ~3)");
        assert_eq!(
            raw(6, &[(&[1, 2, 3], &[]), (&[3, 4, 5], &[])]),
            "(1 2 3 4 5)"
        );
        assert_eq!(
            raw(6, &[(&[1, 2, 3], &[]), (&[3, 4], &[5])]),
            "(1 2 3 4 ~5)"
        );
        assert_eq!(raw(6, &[(&[1, 2], &[3]), (&[4, 5], &[3])]), "-(1 2 ~3 4 5)");
        assert_eq!(
            raw(6, &[(&[1, 2], &[]), (&[3, 4], &[]), (&[5], &[6])]),
            "(1 2).(3 4).(5 ~6)"
        );
    }

    #[test]
    fn squares_of_elementary_factors() {
        assert_eq!(
            raw(4, &[(&[1, 2], &[]), (&[1, 2], &[])]),
            "(1 2 3) - (1 2 ~3)"
        );
        assert_eq!(
            raw(4, &[(&[1], &[2]), (&[1], &[2])]),
            "-(1 ~2 3) + (1 ~2 ~3)"
        );
        assert_eq!(raw(4, &[(&[1, 2], &[]), (&[1], &[2])]), "0");
    }

    #[test]
    fn fresh_index_exhaustion_is_an_error() {
        let (l, _) = label(&[(&[1, 2], &[])]);
        let e = raw_product(2, &[&l, &l]);
        assert!(matches!(e, Err(RingError::NoFreshIndex(_))));
    }

    #[test]
    fn elementary_images() {
        let n = 5;
        assert_eq!(
            elementary_to_hkn(Elementary::codirected(5, 1), n).to_string(),
            "V1"
        );
        assert_eq!(
            elementary_to_hkn(Elementary::codirected(1, 2), n).to_string(),
            "R + V1 + V2"
        );
        assert_eq!(
            elementary_to_hkn(Elementary::opposite(1, 2), n).to_string(),
            "-V1 + V2"
        );
        assert_eq!(
            elementary_to_hkn(Elementary::opposite(5, 1), n).to_string(),
            "R + V1"
        );
        assert_eq!(
            elementary_to_hkn(Elementary::opposite(1, 5), n).to_string(),
            "-R - V1"
        );
    }

    fn moduli(v: &[u64]) -> Arc<Moduli> {
        Moduli::new(LengthVector::new(v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn chern_classes_expand_along_the_auxiliary_index() {
        let m = moduli(&[3, 5, 6, 7]);
        let c = NiceElement::chern(&m, 1, 2).unwrap();
        assert_eq!(c.to_string(), "(1 2) - (1 ~2)");
        let base = c.normal_form().unwrap();
        for k in [3, 4] {
            assert_eq!(
                NiceElement::chern(&m, 1, k).unwrap().normal_form().unwrap(),
                base
            );
        }
        assert!(matches!(
            NiceElement::chern(&m, 1, 1),
            Err(RingError::SameIndex(1))
        ));
    }

    #[test]
    fn chern_images_in_the_presentation() {
        let m = moduli(&[33, 34, 36, 40, 48]);
        let nf = |x: &NiceElement| x.normal_form().unwrap();
        let basis = m.basis().unwrap();
        let two_v_plus_r = HknPolynomial::v(2).scale(&BigInt::from(2)) + HknPolynomial::r();
        assert_eq!(
            nf(&NiceElement::chern_default(&m, 2).unwrap()),
            basis.reduce(&two_v_plus_r)
        );
        assert_eq!(
            nf(&NiceElement::chern_default(&m, 5).unwrap()),
            basis.reduce(&-HknPolynomial::r())
        );
    }

    #[test]
    fn hkn_generators_come_back_from_labels() {
        let m = moduli(&[33, 34, 36, 40, 48]);
        for p in [
            HknPolynomial::r(),
            HknPolynomial::v(1),
            HknPolynomial::v(3),
            HknPolynomial::u(2),
        ] {
            let x = NiceElement::from_hkn(&m, &p).unwrap();
            assert_eq!(
                x.normal_form().unwrap(),
                m.basis().unwrap().reduce(&p),
                "{p}"
            );
        }
    }

    #[test]
    fn sigma_identity_examples() {
        let m = moduli(&[33, 34, 36, 40, 48]);
        assert!(sigma_identity_check(&m, IndexSubset::from_indices([1, 2])).unwrap());
        let m = Moduli::new(LengthVector::random_generic(6, 400, 1).unwrap()).unwrap();
        assert!(sigma_identity_check(&m, IndexSubset::from_indices([1, 2, 3])).unwrap());
        assert!(sigma_identity_check(&m, IndexSubset::from_indices([1, 2, 3, 4])).unwrap());
        assert!(matches!(
            sigma_identity_check(&m, IndexSubset::from_indices([1, 6])),
            Err(RingError::TooFewEdges)
        ));
    }
}
