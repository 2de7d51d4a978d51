use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polycoh::expr::{self, Mode, Value};
use polycoh::hkn::{ideal_generators, GradedBasis, HknPolynomial, ProductFamily, QuotientVector};
use polycoh::labels::{canonicalize_factor, Sign};
use polycoh::lengths::{IndexSubset, LengthVector};
use polycoh::moduli::Moduli;
use polycoh::nice_ring::{raw_product, Expander, NiceElement, NiceTerms, RingError, SmallestFresh};
use polycoh::perfect_ring::psi_elementary;
use polycoh::random::{self, RandomFresh};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn moduli(n: usize, seed: u64) -> Arc<Moduli> {
    Moduli::new(LengthVector::random_generic(n, 400, seed).unwrap()).unwrap()
}

fn any_lengths() -> impl Strategy<Value = LengthVector> {
    prop::collection::vec(1u64..60, 4..=10).prop_map(|v| LengthVector::new(v).unwrap())
}

/// A generic nonempty moduli space with `n` in the given range.
fn any_moduli(edges: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Arc<Moduli>> {
    (edges, any::<u64>()).prop_map(|(n, seed)| moduli(n, seed))
}

fn disjoint_pair(n: usize) -> impl Strategy<Value = (IndexSubset, IndexSubset)> {
    prop::collection::vec(0u8..3, n).prop_map(|marks| {
        let mut plus = IndexSubset::EMPTY;
        let mut minus = IndexSubset::EMPTY;
        for (k, m) in marks.into_iter().enumerate() {
            match m {
                1 => plus = plus.with(k + 1),
                2 => minus = minus.with(k + 1),
                _ => {}
            }
        }
        (plus, minus)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn a_set_and_its_complement_are_never_both_long(l in any_lengths(), mask in any::<u32>()) {
        let n = l.n();
        let s = IndexSubset::from_mask(mask & ((1 << n) - 1));
        let c = s.complement(n);
        prop_assert!(!(l.is_long(s) && l.is_long(c)));
        if l.avoids_walls() {
            prop_assert!(l.is_long(s) != l.is_long(c));
        }
    }

    #[test]
    fn scaling_preserves_the_long_sets(l in any_lengths(), k in 2u64..7) {
        let scaled = LengthVector::new(l.lengths().iter().map(|x| x * k).collect()).unwrap();
        for s in IndexSubset::all(l.n()) {
            prop_assert_eq!(l.is_long(s), scaled.is_long(s));
        }
    }

    #[test]
    fn the_generic_lift_keeps_the_chamber(l in any_lengths()) {
        prop_assume!(l.avoids_walls());
        let lifted = l.generic_lift();
        prop_assert!(lifted.is_generic());
        for s in IndexSubset::all(l.n()) {
            prop_assert_eq!(l.is_long(s), lifted.is_long(s));
        }
    }

    #[test]
    fn canonical_factors_are_fixed_and_swapping_sides_flips_the_sign((plus, minus) in disjoint_pair(9)) {
        prop_assume!(!plus.union(minus).is_empty());
        let (f, s) = canonicalize_factor(plus, minus).unwrap();
        let (g, t) = canonicalize_factor(minus, plus).unwrap();
        prop_assert_eq!(f, g);
        prop_assert_eq!(s, -t);
        if let Some(f) = f {
            prop_assert_eq!(canonicalize_factor(f.plus(), f.minus()).unwrap(), (Some(f), Sign::Plus));
            prop_assert_eq!(f.codim(), plus.union(minus).len() - 1);
        }
    }

    #[test]
    fn a_label_is_the_raw_product_of_its_star(seed in any::<u64>(), n in 4usize..=9) {
        let (label, _) = random::nice_label(&mut rng(seed), n, n - 1, true);
        let star = label.star_decomposition();
        prop_assert_eq!(star.len(), label.codim());
        let got = Expander::raw(n, &mut SmallestFresh).expand(&star).unwrap();
        prop_assert_eq!(got, NiceTerms::single(label, 1));
    }

    #[test]
    fn raw_products_add_codimensions(seed in any::<u64>(), n in 4usize..=8) {
        let mut r = rng(seed);
        let (a, _) = random::nice_label(&mut r, n, 3, true);
        let (b, _) = random::nice_label(&mut r, n, 3, true);
        // a Chern class on a component covering all of [n] has no expansion
        let product = raw_product(n, &[&a, &b]);
        prop_assume!(!matches!(product, Err(RingError::NoFreshIndex(_))));
        for (l, _) in product.unwrap().iter() {
            prop_assert_eq!(l.codim(), a.codim() + b.codim());
        }
    }

    #[test]
    fn json_round_trips_quotient_vectors(degree in 0usize..10, coords in prop::collection::vec(any::<i128>(), 0..8)) {
        let q = QuotientVector { degree, coords: coords.into_iter().map(BigInt::from).collect() };
        let text = serde_json::to_string(&q).unwrap();
        prop_assert_eq!(serde_json::from_str::<QuotientVector>(&text).unwrap(), q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_commute_exactly(m in any_moduli(4..=7), seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random::split_budget(&mut r, m.dim(), 2);
        let x = random::nice_element(&mut r, &m, 3, b[0]);
        let y = random::nice_element(&mut r, &m, 3, b[1]);
        prop_assert_eq!(x.cup(&y).unwrap(), y.cup(&x).unwrap());
    }

    #[test]
    fn products_associate(m in any_moduli(4..=7), seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random::split_budget(&mut r, m.dim(), 3);
        let x = random::nice_element(&mut r, &m, 2, b[0]);
        let y = random::nice_element(&mut r, &m, 2, b[1]);
        let z = random::nice_element(&mut r, &m, 2, b[2]);
        let left = x.cup(&y).unwrap().cup(&z).unwrap();
        let right = x.cup(&y.cup(&z).unwrap()).unwrap();
        prop_assert!(left.same_class(&right).unwrap());
    }

    #[test]
    fn the_auxiliary_index_does_not_change_the_class(m in any_moduli(4..=7), seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random::split_budget(&mut r, m.dim(), 2);
        let x = random::nice_element(&mut r, &m, 3, b[0]);
        let y = random::nice_element(&mut r, &m, 3, b[1]);
        let shuffled = x.cup_with(&y, &mut RandomFresh(rng(seed ^ 0x5eed))).unwrap();
        prop_assert!(shuffled.same_class(&x.cup(&y).unwrap()).unwrap());
    }

    #[test]
    fn products_agree_with_the_polynomial_oracle(m in any_moduli(4..=7), seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = random::split_budget(&mut r, m.dim(), 2);
        let x = random::nice_element(&mut r, &m, 3, b[0]);
        let y = random::nice_element(&mut r, &m, 3, b[1]);
        let oracle = m.basis().unwrap().reduce(&x.to_hkn().multiply(&y.to_hkn()));
        prop_assert_eq!(x.cup(&y).unwrap().normal_form().unwrap(), oracle);
    }

    #[test]
    fn labels_with_a_long_side_vanish(m in any_moduli(4..=7), seed in any::<u64>()) {
        let n = m.n();
        let (label, _) = random::nice_label(&mut rng(seed), n, n - 1, true);
        let long = label.factors().iter().any(|f| m.is_long(f.plus()) || m.is_long(f.minus()));
        prop_assume!(long);
        prop_assert!(NiceElement::from_label(&m, label.clone(), 1).is_zero());
        let image = polycoh::nice_ring::label_to_hkn(&label, n);
        prop_assert!(m.basis().unwrap().reduce(&image).is_zero());
    }

    #[test]
    fn v_squared_equals_minus_r_v(m in any_moduli(4..=7)) {
        let basis = m.basis().unwrap();
        for i in 1..m.n() {
            let v = HknPolynomial::v(i);
            prop_assert!(basis.reduce(&(v.multiply(&v) + HknPolynomial::r().multiply(&v))).is_zero());
        }
    }

    #[test]
    fn minimal_products_generate_the_same_ideal(m in any_moduli(4..=7)) {
        let l = m.lengths();
        let all = GradedBasis::from_generators(l.n(), &ideal_generators(l, ProductFamily::All)).unwrap();
        let minimal = GradedBasis::from_generators(l.n(), &ideal_generators(l, ProductFamily::Minimal)).unwrap();
        for (a, b) in all.slices().iter().zip(minimal.slices()) {
            prop_assert_eq!(a.basis(), b.basis());
        }
    }

    #[test]
    fn local_relations_hold(m in any_moduli(4..=6)) {
        for c in polycoh::verify::local_relations(&m) {
            prop_assert!(c.passed, "{}", c);
        }
    }

    #[test]
    fn psi_of_an_elementary_factor_ignores_k(m in any_moduli(4..=7), i in 1usize..=7, j in 1usize..=7) {
        let n = m.n();
        prop_assume!(i <= n && j <= n && i != j);
        let mut images = (1..=n).filter(|&k| k != i && k != j).map(|k| psi_elementary(&m, i, j, k).unwrap());
        let first = images.next().unwrap();
        for other in images {
            prop_assert!(other.same_class(&first).unwrap());
        }
    }

    #[test]
    fn nice_elements_survive_printing_and_parsing(m in any_moduli(4..=8), seed in any::<u64>()) {
        let x = random::nice_element(&mut rng(seed), &m, 4, m.dim());
        let text = x.to_string();
        let e = expr::parse(&text, Mode::Nice, m.n()).unwrap();
        match expr::evaluate(&e, Mode::Nice, &m).unwrap() {
            Value::Nice(y) => prop_assert_eq!(y, x, "{}", text),
            other => prop_assert!(false, "{:?}", other),
        }
    }

    #[test]
    fn perfect_elements_survive_printing_and_parsing(m in any_moduli(4..=8), seed in any::<u64>()) {
        let x = random::perfect_element(&mut rng(seed), &m, 4, m.dim());
        let text = x.to_string();
        let e = expr::parse(&text, Mode::Perfect, m.n()).unwrap();
        match expr::evaluate(&e, Mode::Perfect, &m).unwrap() {
            Value::Perfect(y) => prop_assert!(y.same_class(&x).unwrap(), "{}", text),
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn betti_numbers_are_palindromic_with_unit_pivots(n in 4usize..=8, seed in any::<u64>()) {
        let l = LengthVector::random_generic(n, 1000, seed).unwrap();
        let basis = GradedBasis::build(&l).unwrap();
        for s in basis.slices() {
            prop_assert!(s.pivots().all(|(_, v)| v == 1));
        }
        let b = basis.betti();
        prop_assert_eq!(b[0], 1);
        prop_assert!(b.iter().eq(b.iter().rev()), "{:?}", b);
    }
}
