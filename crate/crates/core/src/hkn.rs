//! The polynomial presentation `Z[R, V_1..V_{n-1}, U_1..U_{n-1}] / I`.
//!
//! `U_i` is eliminated through `U_i = V_i + R`, after which `U_i V_i = 0`
//! becomes the square-free rewrite `V_i^2 = -R V_i`. The quotient is
//! computed one degree at a time: the relations landing in degree `d` are
//! put into integer echelon form and the basis is the set of non-pivot
//! monomials. All pivots must be 1, which is the freeness of the
//! cohomology groups.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::echelon::{Echelon, Overflow};
use crate::lengths::{IndexSubset, LengthVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("echelon pivot {value} at monomial {monomial} in degree {degree}; quotient is not free on monomials")]
    NonUnitPivot {
        degree: usize,
        monomial: HknMonomial,
        value: i64,
    },
    #[error("quotient does not vanish in degree {degree} (rank {rank})")]
    NonVanishingTop { degree: usize, rank: usize },
    #[error(transparent)]
    Overflow(#[from] Overflow),
}

/// `R^r * prod_{i in v} V_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HknMonomial {
    pub r: u32,
    #[serde(with = "subset_as_list")]
    pub v: IndexSubset,
}

mod subset_as_list {
    use super::IndexSubset;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(s: &IndexSubset, ser: S) -> Result<S::Ok, S::Error> {
        s.iter().collect::<Vec<_>>().serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<IndexSubset, D::Error> {
        let v = Vec::<usize>::deserialize(de)?;
        Ok(IndexSubset::from_indices(v))
    }
}

/// A single integer in the same encoding as [`integer_list`].
pub mod integer {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::integer_list::Repr;

    pub fn serialize<S: Serializer>(x: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
        Repr::from(x).serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
        Repr::deserialize(de)?.into_bigint::<D::Error>()
    }
}

/// Integers as JSON numbers when they fit in `i64`, as decimal strings
/// otherwise.
pub mod integer_list {
    use num_bigint::BigInt;
    use num_traits::ToPrimitive;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    pub(super) enum Repr {
        Small(i64),
        Big(String),
    }

    impl Repr {
        pub(super) fn into_bigint<E: Error>(self) -> Result<BigInt, E> {
            match self {
                Repr::Small(x) => Ok(BigInt::from(x)),
                Repr::Big(s) => s.parse().map_err(E::custom),
            }
        }
    }

    impl From<&BigInt> for Repr {
        fn from(x: &BigInt) -> Self {
            x.to_i64()
                .map_or_else(|| Repr::Big(x.to_string()), Repr::Small)
        }
    }

    pub fn serialize<S: Serializer>(v: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        v.iter().map(Repr::from).collect::<Vec<_>>().serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Repr>::deserialize(de)?
            .into_iter()
            .map(Repr::into_bigint::<D::Error>)
            .collect()
    }
}

impl HknMonomial {
    pub const ONE: HknMonomial = HknMonomial {
        r: 0,
        v: IndexSubset::EMPTY,
    };

    pub fn new(r: u32, v: IndexSubset) -> Self {
        HknMonomial { r, v }
    }

    pub fn degree(&self) -> usize {
        self.r as usize + self.v.len()
    }

    /// Product with the square-free rewrite; returns the sign picked up.
    pub fn times(self, other: HknMonomial) -> (HknMonomial, bool) {
        let overlap = self.v.intersection(other.v).len();
        (
            HknMonomial {
                r: self.r + other.r + overlap as u32,
                v: self.v.union(other.v),
            },
            overlap % 2 == 1,
        )
    }
}

impl Ord for HknMonomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.v
            .len()
            .cmp(&other.v.len())
            .then_with(|| self.v.lex_cmp(other.v))
            .then_with(|| self.r.cmp(&other.r))
    }
}

impl PartialOrd for HknMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HknMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.r {
            0 => {}
            1 => parts.push("R".to_string()),
            r => parts.push(format!("R^{r}")),
        }
        parts.extend(self.v.iter().map(|i| format!("V{i}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Integer polynomial in `R` and square-free `V` monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HknPolynomial {
    terms: BTreeMap<HknMonomial, BigInt>,
}

impl HknPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(HknMonomial::ONE, BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(HknMonomial::ONE, c.into())
    }

    pub fn r() -> Self {
        Self::monomial(HknMonomial::new(1, IndexSubset::EMPTY), BigInt::one())
    }

    pub fn v(i: usize) -> Self {
        Self::monomial(
            HknMonomial::new(0, IndexSubset::singleton(i)),
            BigInt::one(),
        )
    }

    /// `U_i = V_i + R`.
    pub fn u(i: usize) -> Self {
        Self::v(i) + Self::r()
    }

    pub fn monomial(m: HknMonomial, c: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: HknMonomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HknMonomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    /// Distributive product with `V_i^2 -> -R V_i`.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            for (k, b) in &other.terms {
                let (mk, neg) = m.times(*k);
                let c = a * b;
                out.add_term(mk, if neg { -c } else { c });
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.multiply(self))
    }

    /// Splits into homogeneous parts keyed by degree.
    /// Drops the monomials `V_S R^r` with `S ∪ {n}` long, which lie in the
    /// ideal.
    pub fn without_long_products(&self, lengths: &LengthVector) -> Self {
        let last = IndexSubset::singleton(lengths.n());
        HknPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !lengths.is_long(m.v.union(last)))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_parts(&self) -> BTreeMap<usize, HknPolynomial> {
        let mut parts: BTreeMap<usize, HknPolynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts.entry(m.degree()).or_default().add_term(*m, c.clone());
        }
        parts
    }
}

impl Add for HknPolynomial {
    type Output = HknPolynomial;
    fn add(mut self, rhs: HknPolynomial) -> HknPolynomial {
        self += rhs;
        self
    }
}

impl AddAssign for HknPolynomial {
    fn add_assign(&mut self, rhs: HknPolynomial) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Neg for HknPolynomial {
    type Output = HknPolynomial;
    fn neg(self) -> HknPolynomial {
        HknPolynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Sub for HknPolynomial {
    type Output = HknPolynomial;
    fn sub(self, rhs: HknPolynomial) -> HknPolynomial {
        self + (-rhs)
    }
}

impl Mul for &HknPolynomial {
    type Output = HknPolynomial;
    fn mul(self, rhs: &HknPolynomial) -> HknPolynomial {
        self.multiply(rhs)
    }
}

pub(crate) fn write_signed_terms<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (T, BigInt)>,
    is_unit: impl Fn(&T) -> bool,
) -> fmt::Result {
    let mut first = true;
    for (t, c) in terms {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        if is_unit(&t) {
            write!(f, "{abs}")?;
        } else if abs.is_one() {
            write!(f, "{t}")?;
        } else {
            write!(f, "{abs}*{t}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for HknPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(f, self.terms.iter().map(|(m, c)| (*m, c.clone())), |m| {
            *m == HknMonomial::ONE
        })
    }
}

/// Which members of the square-free-product family go into the ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductFamily {
    /// Every `I` with `I ∪ {n}` long.
    All,
    /// Only inclusion-minimal such `I`.
    Minimal,
}

/// `prod_{i in I} V_i` for `I ∪ {n}` long, then the sums
/// `sum_{S ⊊ H, S ∪ {n} short} V_S R^{|H - S| - 1}` for every long `H ⊆ [n-1]`.
pub fn ideal_generators(lengths: &LengthVector, family: ProductFamily) -> Vec<HknPolynomial> {
    let n = lengths.n();
    let last = IndexSubset::singleton(n);
    let with_last_long = |s: IndexSubset| lengths.is_long(s.union(last));
    let mut out = Vec::new();
    for s in IndexSubset::all(n - 1) {
        if !with_last_long(s) {
            continue;
        }
        let minimal = s.iter().all(|i| !with_last_long(s.without(i)));
        if family == ProductFamily::All || minimal {
            out.push(HknPolynomial::monomial(
                HknMonomial::new(0, s),
                BigInt::one(),
            ));
        }
    }
    out.extend(
        IndexSubset::all(n - 1)
            .filter(|&h| lengths.is_long(h))
            .map(|h| long_set_relation(lengths, h)),
    );
    out
}

fn long_set_relation(lengths: &LengthVector, h: IndexSubset) -> HknPolynomial {
    let last = IndexSubset::singleton(lengths.n());
    let mut p = HknPolynomial::zero();
    for s in h.subsets() {
        if s == h || lengths.is_long(s.union(last)) {
            continue;
        }
        let r = (h.len() - s.len() - 1) as u32;
        p.add_term(HknMonomial::new(r, s), BigInt::one());
    }
    p
}

/// Coordinates of a homogeneous class in the degree-`d` basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientVector {
    pub degree: usize,
    #[serde(with = "integer_list")]
    pub coords: Vec<BigInt>,
}

impl QuotientVector {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Normal form of a possibly inhomogeneous class; zero parts are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormalForm {
    pub components: BTreeMap<usize, QuotientVector>,
}

impl NormalForm {
    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component(&self, degree: usize) -> Option<&QuotientVector> {
        self.components.get(&degree)
    }
}

#[derive(Debug, Clone)]
pub struct DegreeSlice {
    degree: usize,
    columns: Vec<HknMonomial>,
    index: HashMap<HknMonomial, usize>,
    echelon: Echelon,
    basis: Vec<usize>,
}

impl DegreeSlice {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Spanning monomials in column order.
    pub fn columns(&self) -> &[HknMonomial] {
        &self.columns
    }

    pub fn basis(&self) -> Vec<HknMonomial> {
        self.basis.iter().map(|&k| self.columns[k]).collect()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = (HknMonomial, i64)> + '_ {
        self.echelon.pivots().map(|(c, v)| (self.columns[c], v))
    }

    fn new(degree: usize, mut columns: Vec<HknMonomial>) -> Self {
        // Ascending by V-support size, then lex, then R-power. Pivots land on
        // the leftmost column, so V-light monomials are eliminated first.
        columns.sort();
        let index = columns.iter().enumerate().map(|(k, m)| (*m, k)).collect();
        let width = columns.len();
        DegreeSlice {
            degree,
            columns,
            index,
            echelon: Echelon::new(width),
            basis: Vec::new(),
        }
    }

    fn add_relation(&mut self, p: &HknPolynomial) -> Result<(), Overflow> {
        let mut row = vec![0i64; self.columns.len()];
        let mut nonzero = false;
        for (m, c) in p.terms() {
            if let Some(&k) = self.index.get(m) {
                row[k] = c.to_i64().ok_or(Overflow)?;
                nonzero |= row[k] != 0;
            }
        }
        if nonzero {
            self.echelon.insert(row)?;
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<(), PresentationError> {
        if let Some((c, value)) = self.echelon.pivots().find(|&(_, v)| v != 1) {
            return Err(PresentationError::NonUnitPivot {
                degree: self.degree,
                monomial: self.columns[c],
                value,
            });
        }
        self.basis = (0..self.columns.len())
            .filter(|&k| !self.echelon.is_pivot(k))
            .collect();
        Ok(())
    }

    /// Coordinates of a homogeneous polynomial of this degree. Monomials
    /// outside the spanning set lie in the ideal and are ignored.
    pub fn reduce(&self, p: &HknPolynomial) -> QuotientVector {
        let mut v = vec![BigInt::zero(); self.columns.len()];
        for (m, c) in p.terms() {
            debug_assert_eq!(m.degree(), self.degree);
            if let Some(&k) = self.index.get(m) {
                v[k] += c;
            }
        }
        self.echelon.reduce(&mut v);
        QuotientVector {
            degree: self.degree,
            coords: self.basis.iter().map(|&k| v[k].clone()).collect(),
        }
    }

    /// The polynomial `sum coords[k] * basis[k]`.
    pub fn lift(&self, q: &QuotientVector) -> HknPolynomial {
        let mut p = HknPolynomial::zero();
        for (&k, c) in self.basis.iter().zip(&q.coords) {
            p.add_term(self.columns[k], c.clone());
        }
        p
    }
}

/// Square-free monomials of degree `d` whose `V`-set passes `keep`.
fn monomials_of_degree(
    vars: usize,
    d: usize,
    keep: impl Fn(IndexSubset) -> bool,
) -> Vec<HknMonomial> {
    IndexSubset::all(vars)
        .filter(|s| s.len() <= d && keep(*s))
        .map(|s| HknMonomial::new((d - s.len()) as u32, s))
        .collect()
}

/// Per-degree bases of the quotient ring, degrees `0..=n-2`; the last slice
/// is checked to vanish, so every higher degree vanishes as well.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    n: usize,
    slices: Vec<DegreeSlice>,
}

impl GradedBasis {
    /// Uses the square-free-product family implicitly: every monomial
    /// `V_S R^a` with `S ∪ {n}` long is left out of the spanning set.
    pub fn build(lengths: &LengthVector) -> Result<GradedBasis, PresentationError> {
        let n = lengths.n();
        let last = IndexSubset::singleton(n);
        let short = |s: IndexSubset| !lengths.is_long(s.union(last));
        let relations: Vec<(usize, HknPolynomial)> = IndexSubset::all(n - 1)
            .filter(|&h| lengths.is_long(h))
            .map(|h| (h.len() - 1, long_set_relation(lengths, h)))
            .collect();
        let slices = (0..=n - 2)
            .map(|d| {
                let mut slice = DegreeSlice::new(d, monomials_of_degree(n - 1, d, short));
                for (gd, g) in &relations {
                    if *gd > d {
                        continue;
                    }
                    for m in monomials_of_degree(n - 1, d - gd, short) {
                        let row = g.multiply(&HknPolynomial::monomial(m, BigInt::one()));
                        slice.add_relation(&row)?;
                    }
                }
                slice.finish()?;
                Ok(slice)
            })
            .collect::<Result<Vec<_>, PresentationError>>()?;
        Self::checked(n, slices)
    }

    /// Builds from an explicit generator list over all square-free monomials.
    pub fn from_generators(
        n: usize,
        generators: &[HknPolynomial],
    ) -> Result<GradedBasis, PresentationError> {
        let parts: Vec<(usize, HknPolynomial)> = generators
            .iter()
            .flat_map(|g| g.homogeneous_parts())
            .collect();
        let slices = (0..=n - 2)
            .map(|d| {
                let mut slice = DegreeSlice::new(d, monomials_of_degree(n - 1, d, |_| true));
                for (gd, g) in &parts {
                    if *gd > d {
                        continue;
                    }
                    for m in monomials_of_degree(n - 1, d - gd, |_| true) {
                        slice.add_relation(
                            &g.multiply(&HknPolynomial::monomial(m, BigInt::one())),
                        )?;
                    }
                }
                slice.finish()?;
                Ok(slice)
            })
            .collect::<Result<Vec<_>, PresentationError>>()?;
        Self::checked(n, slices)
    }

    fn checked(n: usize, slices: Vec<DegreeSlice>) -> Result<GradedBasis, PresentationError> {
        let top = &slices[n - 2];
        if top.rank() != 0 {
            return Err(PresentationError::NonVanishingTop {
                degree: n - 2,
                rank: top.rank(),
            });
        }
        Ok(GradedBasis { n, slices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Top complex degree `n - 3`.
    pub fn top_degree(&self) -> usize {
        self.n - 3
    }

    pub fn slice(&self, degree: usize) -> Option<&DegreeSlice> {
        self.slices.get(degree)
    }

    /// Slices for degrees `0..=n-3`.
    pub fn slices(&self) -> &[DegreeSlice] {
        &self.slices[..=self.top_degree()]
    }

    /// `b_0, ..., b_{n-3}` in complex grading.
    pub fn betti(&self) -> Vec<usize> {
        self.slices().iter().map(DegreeSlice::rank).collect()
    }

    pub fn reduce(&self, p: &HknPolynomial) -> NormalForm {
        let mut components = BTreeMap::new();
        for (d, part) in p.homogeneous_parts() {
            let Some(slice) = self.slices.get(d) else {
                continue;
            };
            let q = slice.reduce(&part);
            if !q.is_zero() {
                components.insert(d, q);
            }
        }
        NormalForm { components }
    }

    /// Degree-`d` coordinates, all zero when the class has no such part.
    pub fn reduce_in_degree(&self, p: &HknPolynomial, degree: usize) -> QuotientVector {
        match self.slices.get(degree) {
            Some(slice) => slice.reduce(&p.homogeneous_parts().remove(&degree).unwrap_or_default()),
            None => QuotientVector {
                degree,
                coords: Vec::new(),
            },
        }
    }

    pub fn lift(&self, nf: &NormalForm) -> HknPolynomial {
        let mut p = HknPolynomial::zero();
        for (d, q) in &nf.components {
            p += self.slices[*d].lift(q);
        }
        p
    }

    pub fn dump(&self) -> Vec<DegreeDump> {
        self.slices()
            .iter()
            .map(|s| DegreeDump {
                degree: s.degree,
                rank: s.rank(),
                monomials: s.basis(),
            })
            .collect()
    }
}

/// One entry of the JSON basis dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDump {
    pub degree: usize,
    pub rank: usize,
    pub monomials: Vec<HknMonomial>,
}
