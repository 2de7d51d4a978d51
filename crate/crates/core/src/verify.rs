//! Named identity checks. Each suite returns one [`Check`] per identity;
//! randomized suites draw from a seeded generator so reports reproduce.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hkn::{ideal_generators, HknPolynomial, ProductFamily};
use crate::labels::{Elementary, NiceLabel};
use crate::lengths::IndexSubset;
use crate::moduli::Moduli;
use crate::nice_ring::{
    raw_product, sigma_identity_check, Expander, NiceElement, NiceTerms, RingError, SmallestFresh,
};
use crate::perfect_ring::{psi, psi_factor, PerfectElement};
use crate::random::{self, RandomFresh};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Counterexample or error on failure, case count on success.
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}", self.name)?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

/// Outcome of a check body: `Ok(None)` passes, `Ok(Some(msg))` fails with
/// a counterexample.
type Outcome = Result<Option<String>, RingError>;

fn run(name: impl Into<String>, body: impl FnOnce() -> Outcome) -> Check {
    let name = name.into();
    match body() {
        Ok(None) => Check {
            name,
            passed: true,
            detail: String::new(),
        },
        Ok(Some(detail)) => Check {
            name,
            passed: false,
            detail,
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn expect_terms(got: &NiceTerms, want: &NiceTerms) -> Option<String> {
    (got != want).then(|| format!("got {got}, expected {want}"))
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        write!(f, "{passed}/{} checks passed", self.checks.len())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    /// Cases per randomized suite.
    pub samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            samples: 200,
        }
    }
}

pub fn set(v: &[usize]) -> IndexSubset {
    IndexSubset::from_indices(v.iter().copied())
}

/// Parses a single-factor label written as `plus` and `minus` index lists.
fn factor(plus: &[usize], minus: &[usize]) -> (NiceLabel, i64) {
    let (l, s) = NiceLabel::from_parts([(set(plus), set(minus))]).expect("well-formed literal");
    (l, s.to_i64())
}

/// Expected combination from signed single-factor literals.
fn terms(entries: &[(i64, &[usize], &[usize])]) -> NiceTerms {
    entries
        .iter()
        .map(|&(c, p, m)| {
            let (l, s) = factor(p, m);
            (l, BigInt::from(c * s))
        })
        .collect()
}

/// Raw product of single-factor literals, with their canonicalization signs.
fn raw(n: usize, factors: &[(&[usize], &[usize])]) -> Result<NiceTerms, RingError> {
    let mut sign = 1;
    let labels: Vec<NiceLabel> = factors
        .iter()
        .map(|(p, m)| {
            let (l, s) = factor(p, m);
            sign *= s;
            l
        })
        .collect();
    let refs: Vec<&NiceLabel> = labels.iter().collect();
    Ok(raw_product(n, &refs)?.scaled(&BigInt::from(sign)))
}

/// Gluing of factors along one shared index, as label identities.
pub fn gluing_rules() -> Vec<Check> {
    let n = 8;
    vec![
        run(
            "gluing along a codirected index: (1 2 3)*(3 4 5) = (1 2 3 4 5)",
            || {
                let got = raw(n, &[(&[1, 2, 3], &[]), (&[3, 4, 5], &[])])?;
                Ok(expect_terms(&got, &terms(&[(1, &[1, 2, 3, 4, 5], &[])])))
            },
        ),
        run(
            "gluing with an overline: (1 2 3)*(3 4 ~5) = (1 2 3 4 ~5)",
            || {
                let got = raw(n, &[(&[1, 2, 3], &[]), (&[3, 4], &[5])])?;
                Ok(expect_terms(&got, &terms(&[(1, &[1, 2, 3, 4], &[5])])))
            },
        ),
        run(
            "gluing along an overlined index: (1 2 ~3)*(4 5 ~3) = -(1 2 4 5 ~3)",
            || {
                let got = raw(n, &[(&[1, 2], &[3]), (&[4, 5], &[3])])?;
                Ok(expect_terms(&got, &terms(&[(-1, &[1, 2, 4, 5], &[3])])))
            },
        ),
        run(
            "disjoint factors multiply formally: (1 2)*(3 4) = (1 2).(3 4)",
            || {
                let got = raw(n, &[(&[1, 2], &[]), (&[3, 4], &[])])?;
                let (want, _) =
                    NiceLabel::from_parts([(set(&[1, 2]), set(&[])), (set(&[3, 4]), set(&[]))])?;
                Ok(expect_terms(&got, &NiceTerms::single(want, 1)))
            },
        ),
        run("opposite directions are disjoint: (1 2)*(1 ~2) = 0", || {
            let got = raw(n, &[(&[1, 2], &[]), (&[1], &[2])])?;
            Ok(expect_terms(&got, &NiceTerms::new()))
        }),
    ]
}

/// `(i j)^2 = (i j k) - (i j ~k)` and `(i ~j)^2 = -(i ~j k) + (i ~j ~k)` for
/// all `i != j` in `[n]`, where `k` is the smallest index other than `i, j`.
pub fn power_rule(n: usize) -> Vec<Check> {
    let body = |opposite: bool| -> Outcome {
        for i in 1..=n {
            for j in (1..=n).filter(|&j| j != i) {
                let k = (1..=n)
                    .find(|&k| k != i && k != j)
                    .ok_or(RingError::TooFewEdges)?;
                let (ij, ij_minus): (&[usize], &[usize]) = if opposite {
                    (&[i], &[j])
                } else {
                    (&[i, j], &[])
                };
                let got = raw(n, &[(ij, ij_minus), (ij, ij_minus)])?;
                let with = |extra_minus: bool| {
                    let mut plus = ij.to_vec();
                    let mut minus = ij_minus.to_vec();
                    if extra_minus {
                        minus.push(k)
                    } else {
                        plus.push(k)
                    }
                    (plus, minus)
                };
                let (p1, m1) = with(false);
                let (p2, m2) = with(true);
                let sign = if opposite { -1 } else { 1 };
                let want = terms(&[(sign, &p1, &m1), (-sign, &p2, &m2)]);
                if let Some(msg) = expect_terms(&got, &want) {
                    return Ok(Some(format!("i={i}, j={j}: {msg}")));
                }
            }
        }
        Ok(None)
    };
    vec![
        run(
            format!("square of a codirected pair, n={n}: (i j)^2 = (i j k) - (i j ~k)"),
            || body(false),
        ),
        run(
            format!("square of an opposite pair, n={n}: (i ~j)^2 = -(i ~j k) + (i ~j ~k)"),
            || body(true),
        ),
    ]
}

/// The expansion of `(1 2 3)*(1 2 4)` over five indices, before any
/// length constraints.
pub fn triple_product_terms() -> NiceTerms {
    terms(&[(1, &[1, 2, 3, 4, 5], &[]), (-1, &[1, 2, 3, 4], &[5])])
}

/// The expansion of `(1 2)^4 * (5 6)` over eight indices, before any
/// length constraints.
pub fn fourth_power_terms() -> NiceTerms {
    terms(&[
        (1, &[1, 2, 3, 4, 5, 6], &[]),
        (-1, &[1, 2, 4, 5, 6], &[3]),
        (-1, &[1, 2, 3, 5, 6], &[4]),
        (-1, &[1, 2, 3, 4], &[5, 6]),
        (1, &[1, 2, 5, 6], &[3, 4]),
        (1, &[1, 2, 4], &[3, 5, 6]),
        (1, &[1, 2, 3], &[4, 5, 6]),
        (-1, &[1, 2], &[3, 4, 5, 6]),
    ])
}

/// Worked products with repeated factors.
pub fn worked_products() -> Vec<Check> {
    vec![
        run(
            "(1 2 3)*(1 2 4) = (1 2 3 4 5) - (1 2 3 4 ~5) over five indices",
            || {
                let got = raw(5, &[(&[1, 2, 3], &[]), (&[1, 2, 4], &[])])?;
                Ok(expect_terms(&got, &triple_product_terms()))
            },
        ),
        run(
            "(1 2)^4*(5 6): eight-term expansion over eight indices",
            || {
                let f: (&[usize], &[usize]) = (&[1, 2], &[]);
                let got = raw(8, &[f, f, f, f, (&[5, 6], &[])])?;
                Ok(expect_terms(&got, &fourth_power_terms()))
            },
        ),
    ]
}

/// The star decomposition multiplies back to the label.
pub fn star_reconstruction(n: usize, seed: u64, samples: usize) -> Check {
    run(
        format!("star decomposition reconstructs {samples} random labels, n={n}"),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let (label, _) = random::nice_label(&mut rng, n, n.saturating_sub(1), true);
                let got =
                    Expander::raw(n, &mut SmallestFresh).expand(&label.star_decomposition())?;
                if got != NiceTerms::single(label.clone(), 1) {
                    return Ok(Some(format!("{label} rebuilt as {got}")));
                }
            }
            Ok(None)
        },
    )
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=n).flat_map(move |i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)))
}

fn elem(m: &Arc<Moduli>, e: Elementary) -> Result<NiceElement, RingError> {
    NiceElement::elementary(m, e)
}

/// Relations that hold in every chamber.
pub fn local_relations(m: &Arc<Moduli>) -> Vec<Check> {
    let n = m.n();
    vec![
        run("(i j)*(i ~j) = 0", || {
            for (i, j) in pairs(n) {
                let p = elem(m, Elementary::codirected(i, j))?
                    .cup(&elem(m, Elementary::opposite(i, j))?)?;
                if !p.normal_form()?.is_zero() {
                    return Ok(Some(format!("i={i}, j={j}: {p}")));
                }
            }
            Ok(None)
        }),
        run("four-term relation (i j) + (k l) = (j k) + (i l)", || {
            for (i, j) in pairs(n) {
                for (k, l) in pairs(n) {
                    if [i, j].contains(&k) || [i, j].contains(&l) {
                        continue;
                    }
                    let c = |a, b| elem(m, Elementary::codirected(a, b));
                    let lhs = c(i, j)? + c(k, l)?;
                    let rhs = c(j, k)? + c(i, l)?;
                    if !lhs.same_class(&rhs)? {
                        return Ok(Some(format!("i={i}, j={j}, k={k}, l={l}")));
                    }
                }
            }
            Ok(None)
        }),
        run("Ch(i) = (i k) - (i ~k) does not depend on k", || {
            for i in 1..=n {
                let base = NiceElement::chern_default(m, i)?.normal_form()?;
                for k in (1..=n).filter(|&k| k != i) {
                    if NiceElement::chern(m, i, k)?.normal_form()? != base {
                        return Ok(Some(format!("i={i}, k={k}")));
                    }
                }
            }
            Ok(None)
        }),
        run("(i ~j) = (j k) - (i k)", || {
            for (i, j) in pairs(n) {
                for k in (1..=n).filter(|&k| k != i && k != j) {
                    let c = |a, b| elem(m, Elementary::codirected(a, b));
                    let rhs = c(j, k)? - c(i, k)?;
                    if !elem(m, Elementary::opposite(i, j))?.same_class(&rhs)? {
                        return Ok(Some(format!("i={i}, j={j}, k={k}")));
                    }
                }
            }
            Ok(None)
        }),
    ]
}

/// `Σ(H) = (H)` for every `H ⊆ [n-1]` with `2 <= |H| <= n-1`.
pub fn sigma_identities(m: &Arc<Moduli>) -> Check {
    let n = m.n();
    run(
        format!("Σ(H) = (H) for all H ⊆ [{}], |H| >= 2", n - 1),
        || {
            let mut count = 0;
            for h in IndexSubset::full(n - 1).subsets().filter(|h| h.len() >= 2) {
                if !sigma_identity_check(m, h)? {
                    return Ok(Some(format!("H={h}")));
                }
                count += 1;
            }
            debug_assert!(count > 0);
            Ok(None)
        },
    )
}

/// The dictionary `V_i = (n i)`, `U_i = (n ~i)`, `R = -(n i) + (n ~i)`
/// respects every defining relation of the polynomial presentation, and
/// Chern classes land on `2 V_i + R` and `-R`.
pub fn dictionary(m: &Arc<Moduli>) -> Vec<Check> {
    let n = m.n();
    let basis = m.basis();
    let u = |i| elem(m, Elementary::opposite(n, i));
    let v = |i| elem(m, Elementary::codirected(n, i));
    let r = |i| -> Result<NiceElement, RingError> { Ok(u(i)? - v(i)?) };
    vec![
        run("dictionary: R does not depend on i", || {
            let r1 = r(1)?;
            for i in 2..n {
                if !r(i)?.same_class(&r1)? {
                    return Ok(Some(format!("i={i}")));
                }
            }
            Ok(None)
        }),
        run("dictionary: U_i - V_i - R = 0", || {
            for i in 1..n {
                let x = u(i)? - v(i)? - r(1)?;
                if !x.normal_form()?.is_zero() {
                    return Ok(Some(format!("i={i}: {x}")));
                }
            }
            Ok(None)
        }),
        run("dictionary: U_i V_i = 0", || {
            for i in 1..n {
                let x = u(i)?.cup(&v(i)?)?;
                if !x.is_zero() {
                    return Ok(Some(format!("i={i}: {x}")));
                }
            }
            Ok(None)
        }),
        run(
            "dictionary: products of V over long I ∪ {n} and the long-H sums vanish",
            || {
                for g in ideal_generators(m.lengths(), ProductFamily::All) {
                    let x = NiceElement::from_hkn(m, &g)?;
                    if !x.normal_form()?.is_zero() {
                        return Ok(Some(format!("generator {g} maps to {x}")));
                    }
                }
                Ok(None)
            },
        ),
        run("Chern classes: Ch(i) = 2 V_i + R, Ch(n) = -R", || {
            let basis = basis.map_err(RingError::from)?;
            for i in 1..=n {
                let want = if i == n {
                    -HknPolynomial::r()
                } else {
                    HknPolynomial::v(i).scale(&BigInt::from(2)) + HknPolynomial::r()
                };
                for k in (1..=n).filter(|&k| k != i) {
                    if NiceElement::chern(m, i, k)?.normal_form()? != basis.reduce(&want) {
                        return Ok(Some(format!("i={i}, k={k}")));
                    }
                }
            }
            Ok(None)
        }),
    ]
}

/// Random pairs: the cup product agrees with the product of polynomial
/// images.
pub fn oracle_equivalence(m: &Arc<Moduli>, seed: u64, samples: usize) -> Check {
    run(
        format!("cup product agrees with the polynomial presentation on {samples} random pairs"),
        || {
            let basis = m.basis()?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let budget = random::split_budget(&mut rng, m.dim(), 2);
                let a = random::nice_element(&mut rng, m, 3, budget[0]);
                let b = random::nice_element(&mut rng, m, 3, budget[1]);
                let got = a.cup(&b)?.normal_form()?;
                let want = basis.reduce(&a.to_hkn().multiply(&b.to_hkn()));
                if got != want {
                    return Ok(Some(format!("a = {a}, b = {b}")));
                }
            }
            Ok(None)
        },
    )
}

/// Commutativity, associativity and independence of the Chern expansion
/// index.
pub fn structural(m: &Arc<Moduli>, seed: u64, samples: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chunks: Vec<Vec<NiceElement>> = (0..samples)
        .map(|_| {
            let budget = random::split_budget(&mut rng, m.dim(), 3);
            budget
                .into_iter()
                .map(|c| random::nice_element(&mut rng, m, 2, c))
                .collect()
        })
        .collect();
    let fresh_seed = seed.wrapping_add(1);
    vec![
        run(
            format!("commutativity on {samples} random pairs (exact)"),
            || {
                for c in &chunks {
                    if c[0].cup(&c[1])? != c[1].cup(&c[0])? {
                        return Ok(Some(format!("a = {}, b = {}", c[0], c[1])));
                    }
                }
                Ok(None)
            },
        ),
        run(format!("associativity on {samples} random triples"), || {
            for c in &chunks {
                let left = c[0].cup(&c[1])?.cup(&c[2])?;
                let right = c[0].cup(&c[1].cup(&c[2])?)?;
                if !left.same_class(&right)? {
                    return Ok(Some(format!("a = {}, b = {}, c = {}", c[0], c[1], c[2])));
                }
            }
            Ok(None)
        }),
        run(
            format!("Chern expansion index choice on {samples} random products"),
            || {
                let mut fresh = RandomFresh(ChaCha8Rng::seed_from_u64(fresh_seed));
                for c in &chunks {
                    let b = c[1].try_add(&c[2])?;
                    let x = c[0].cup_with(&b, &mut fresh)?;
                    if !x.same_class(&c[0].cup(&b)?)? {
                        return Ok(Some(format!("a = {}, b = {b}", c[0])));
                    }
                }
                Ok(None)
            },
        ),
    ]
}

fn random_disjoint<R: Rng>(
    rng: &mut R,
    n: usize,
    within: IndexSubset,
) -> (IndexSubset, IndexSubset) {
    let mut plus = IndexSubset::EMPTY;
    let mut minus = IndexSubset::EMPTY;
    for i in 1..=n {
        if within.contains(i) {
            continue;
        }
        match rng.gen_range(0..4) {
            0 => plus = plus.with(i),
            1 => minus = minus.with(i),
            _ => {}
        }
    }
    (plus, minus)
}

/// The map back to perfect manifolds kills every relation of the nice
/// ring and inverts the inclusion of perfect manifolds.
pub fn psi_suite(m: &Arc<Moduli>, seed: u64, samples: usize) -> Vec<Check> {
    let n = m.n();
    let pf = |p: IndexSubset, q: IndexSubset| psi_factor(m, p, q, None);
    let mut checks = vec![
        run("ψ((I ~J) + (J ~I)) = 0", || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let (p, q) = random_disjoint(&mut rng, n, IndexSubset::EMPTY);
                if p.union(q).is_empty() {
                    continue;
                }
                let x = pf(p, q)?.try_add(&pf(q, p)?)?;
                if !x.normal_form()?.is_zero() {
                    return Ok(Some(format!("I={p}, J={q}")));
                }
            }
            Ok(None)
        }),
        run("ψ respects gluing along a shared index", || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
            for _ in 0..samples {
                let i = rng.gen_range(1..=n);
                let shared_minus = rng.gen_bool(0.5);
                let (p1, q1) = random_disjoint(&mut rng, n, IndexSubset::singleton(i));
                let (p2, q2) =
                    random_disjoint(&mut rng, n, IndexSubset::singleton(i).union(p1).union(q1));
                let (p1, p2, q1, q2) = if shared_minus {
                    (p1, p2, q1.with(i), q2.with(i))
                } else {
                    (p1.with(i), p2.with(i), q1, q2)
                };
                let lhs = pf(p1, q1)?.perfect_product(&pf(p2, q2)?)?;
                let glued = pf(p1.union(p2), q1.union(q2))?;
                let rhs = if shared_minus { glued.scale(-1) } else { glued };
                if !lhs.same_class(&rhs)? {
                    return Ok(Some(format!("({p1} ~{q1}) * ({p2} ~{q2})")));
                }
            }
            Ok(None)
        }),
        run("ψ(I ~J) = 0 when I or J is long", || {
            for mask in 0..3u32.pow(n as u32) {
                let (mut p, mut q, mut x) = (IndexSubset::EMPTY, IndexSubset::EMPTY, mask);
                for i in 1..=n {
                    match x % 3 {
                        1 => p = p.with(i),
                        2 => q = q.with(i),
                        _ => {}
                    }
                    x /= 3;
                }
                if p.is_empty() || !(m.is_long(p) || m.is_long(q)) {
                    continue;
                }
                let y = pf(p, q)?;
                if !y.is_zero() {
                    return Ok(Some(format!("I={p}, J={q}: {y}")));
                }
            }
            Ok(None)
        }),
        run("ψ((i j)*(i ~j)) = 0", || {
            for (i, j) in pairs(n) {
                let x = pf(set(&[i, j]), IndexSubset::EMPTY)?
                    .perfect_product(&pf(set(&[i]), set(&[j]))?)?;
                if !x.normal_form()?.is_zero() {
                    return Ok(Some(format!("i={i}, j={j}: {x}")));
                }
            }
            Ok(None)
        }),
        run("ψ((i j) - (i ~j) - (i k) + (i ~k)) = 0", || {
            for (i, j) in pairs(n) {
                for k in (1..=n).filter(|&k| k != i && k != j) {
                    let x = pf(set(&[i, j]), IndexSubset::EMPTY)?
                        .try_add(&pf(set(&[i]), set(&[j]))?.scale(-1))?
                        .try_add(&pf(set(&[i, k]), IndexSubset::EMPTY)?.scale(-1))?
                        .try_add(&pf(set(&[i]), set(&[k]))?)?;
                    if !x.normal_form()?.is_zero() {
                        return Ok(Some(format!("i={i}, j={j}, k={k}: {x}")));
                    }
                }
            }
            Ok(None)
        }),
        run("ψ(i ~j) does not depend on k", || {
            for (i, j) in pairs(n) {
                let base = psi_factor(m, set(&[i]), set(&[j]), None)?;
                for k in (1..=n).filter(|&k| k != i && k != j) {
                    if !psi_factor(m, set(&[i]), set(&[j]), Some(k))?.same_class(&base)? {
                        return Ok(Some(format!("i={i}, j={j}, k={k}")));
                    }
                }
            }
            Ok(None)
        }),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let perfect: Vec<[PerfectElement; 2]> = (0..samples)
        .map(|_| {
            let budget = random::split_budget(&mut rng, m.dim(), 2);
            [0, 1].map(|k| random::perfect_element(&mut rng, m, 3, budget[k]))
        })
        .collect();
    let nice: Vec<NiceElement> = (0..samples)
        .map(|_| random::nice_element(&mut rng, m, 3, m.dim()))
        .collect();
    checks.push(run(
        format!("ψ∘φ = id on {samples} random perfect elements"),
        || {
            for x in perfect.iter().flatten() {
                if !crate::perfect_ring::psi_phi_roundtrip_check(x)? {
                    return Ok(Some(x.to_string()));
                }
            }
            Ok(None)
        },
    ));
    checks.push(run(
        format!("φ∘ψ = id on {samples} random nice elements"),
        || {
            for x in &nice {
                if !psi(x)?.phi().same_class(x)? {
                    return Ok(Some(x.to_string()));
                }
            }
            Ok(None)
        },
    ));
    checks.push(run(
        format!("perfect products agree with cup products on {samples} random pairs"),
        || {
            for w in &perfect {
                let p = w[0].perfect_product(&w[1])?;
                if !p.phi().same_class(&w[0].phi().cup(&w[1].phi())?)? {
                    return Ok(Some(format!("a = {}, b = {}", w[0], w[1])));
                }
            }
            Ok(None)
        },
    ));
    checks
}

/// Every suite for the given moduli space.
pub fn run_all(m: &Arc<Moduli>, opts: Options) -> Report {
    let n = m.n();
    let mut checks = gluing_rules();
    checks.extend(power_rule(n.max(3)));
    checks.extend(worked_products());
    checks.push(star_reconstruction(n.max(8), opts.seed, opts.samples));
    checks.extend(local_relations(m));
    checks.push(sigma_identities(m));
    checks.extend(dictionary(m));
    checks.push(oracle_equivalence(m, opts.seed, opts.samples));
    checks.extend(structural(m, opts.seed, opts.samples));
    checks.extend(psi_suite(m, opts.seed, opts.samples));
    Report { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lengths::LengthVector;

    #[test]
    fn label_identities_pass() {
        for c in gluing_rules()
            .into_iter()
            .chain(power_rule(5))
            .chain(worked_products())
        {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn suites_pass_for_a_small_pentagon() {
        let m = Moduli::new(LengthVector::random_generic(5, 100, 1).unwrap()).unwrap();
        let report = run_all(
            &m,
            Options {
                seed: 3,
                samples: 30,
            },
        );
        assert!(report.all_passed(), "{report}");
    }
}
