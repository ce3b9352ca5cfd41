#![allow(clippy::needless_range_loop)]

use std::collections::BTreeSet;

use eisenstein_template::roots::{bigfloat_to_f64, CartanType, Family, Root, RootSystem, Weight};
use num_rational::Rational64;
use proptest::prelude::*;

fn small_types() -> Vec<&'static str> {
    vec!["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2"]
}

fn all_types() -> Vec<CartanType> {
    let mut out = Vec::new();
    for r in 1..=8 {
        out.push(CartanType::new(Family::A, r).unwrap());
    }
    for r in 2..=6 {
        out.push(CartanType::new(Family::B, r).unwrap());
        out.push(CartanType::new(Family::C, r).unwrap());
    }
    for r in 3..=8 {
        out.push(CartanType::new(Family::D, r).unwrap());
    }
    for r in 6..=8 {
        out.push(CartanType::new(Family::E, r).unwrap());
    }
    out.push(CartanType::new(Family::F, 4).unwrap());
    out.push(CartanType::new(Family::G, 2).unwrap());
    out
}

fn parity(inversions: usize) -> i64 {
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[test]
fn positive_roots_sum_to_two_rho() {
    for ct in all_types() {
        let rs = RootSystem::new(ct);
        let mut sum = vec![Rational64::from_integer(0); rs.rank()];
        for r in rs.positive_roots() {
            let w = rs.root_weight(r);
            for (s, c) in sum.iter_mut().zip(&w.coords) {
                *s += c;
            }
        }
        let two_rho: Vec<Rational64> = rs.rho().coords.iter().map(|c| c * 2).collect();
        assert_eq!(sum, two_rho, "{ct}");
    }
}

#[test]
fn fundamental_weights_are_dual_to_simple_coroots() {
    for ct in all_types() {
        let rs = RootSystem::new(ct);
        let n = rs.rank();
        for i in 0..n {
            for j in 0..n {
                let v = rs.weight_pairing(&Weight::fundamental(n, i), &rs.simple_root(j));
                assert_eq!(v, Rational64::from_integer((i == j) as i64), "{ct} {i} {j}");
            }
        }
    }
}

#[test]
fn type_a_roots_match_the_difference_model() {
    for r in 1..=5usize {
        let rs = RootSystem::new(CartanType::new(Family::A, r).unwrap());
        let got: BTreeSet<Vec<i64>> = rs.positive_roots().iter().map(|x| x.coords.clone()).collect();
        let mut want = BTreeSet::new();
        for i in 0..=r {
            for j in i + 1..=r {
                // e_i - e_j = α_i + … + α_{j-1}
                let coords: Vec<i64> = (0..r).map(|k| (i <= k && k < j) as i64).collect();
                want.insert(coords);
            }
        }
        assert_eq!(got, want, "A{r}");
    }
}

#[test]
fn longest_element_negates_positive_roots_and_rho() {
    for t in small_types() {
        let rs = RootSystem::new(t.parse().unwrap());
        let w0 = rs.longest_element(10_000).unwrap();
        let images: BTreeSet<Vec<i64>> = rs
            .positive_roots()
            .iter()
            .map(|r| rs.apply_root(&w0, r).coords)
            .collect();
        let negatives: BTreeSet<Vec<i64>> = rs.positive_roots().iter().map(|r| r.neg().coords).collect();
        assert_eq!(images, negatives, "{t}");
        let rho = rs.apply_weight(&w0, rs.rho());
        let minus: Vec<Rational64> = rs.rho().coords.iter().map(|c| -c).collect();
        assert_eq!(rho.coords, minus, "{t}");
        assert_eq!(w0.length(), rs.positive_roots().len());
    }
}

#[test]
fn every_weyl_element_permutes_the_roots() {
    for t in small_types() {
        let rs = RootSystem::new(t.parse().unwrap());
        let all: BTreeSet<Vec<i64>> = rs
            .positive_roots()
            .iter()
            .flat_map(|r| [r.coords.clone(), r.neg().coords])
            .collect();
        for w in rs.enumerate_weyl(10_000).unwrap() {
            let img: BTreeSet<Vec<i64>> = all
                .iter()
                .map(|c| rs.apply_root(&w, &Root { coords: c.clone() }).coords)
                .collect();
            assert_eq!(img, all, "{t} {:?}", w.word);
        }
    }
}

#[test]
fn sign_is_a_homomorphism_up_to_rank_three() {
    for t in ["A1", "A2", "A3", "B2", "B3", "C3", "G2"] {
        let rs = RootSystem::new(t.parse().unwrap());
        let elems = rs.enumerate_weyl(10_000).unwrap();
        for a in &elems {
            for b in &elems {
                let word: Vec<usize> = a.word.iter().chain(&b.word).copied().collect();
                let ab = rs.weyl_element(&word).unwrap();
                assert_eq!(
                    parity(ab.inversions().len()),
                    parity(a.inversions().len()) * parity(b.inversions().len()),
                    "{t}"
                );
                assert_eq!(a.sign(), parity(a.inversions().len()));
            }
        }
    }
}

#[test]
fn weyl_denominator_identity() {
    for t in ["A1", "A2", "A3", "A4", "D4"] {
        let rs = RootSystem::new(t.parse().unwrap());
        for eps in [
            Rational64::new(1, 100),
            Rational64::new(1, 10),
            Rational64::from_integer(1),
        ] {
            let (l, r) = rs.weyl_denominator_check(eps, 256, 10_000).unwrap();
            let (l, r) = (bigfloat_to_f64(&l), bigfloat_to_f64(&r));
            assert!((l - r).abs() <= 1e-12 * r.abs(), "{t} ε={eps}: {l} vs {r}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflections_are_involutions(t in prop::sample::select(small_types()), a in 0usize..64, i in 0usize..8) {
        let rs = RootSystem::new(t.parse().unwrap());
        let roots = rs.positive_roots();
        let r = &roots[a % roots.len()];
        let s = rs.simple_root(i % rs.rank());
        let once = rs.reflect(r, &s);
        prop_assert!(rs.signed_index(&once).is_some());
        prop_assert_eq!(rs.reflect(&once, &s), r.clone());
    }

    #[test]
    fn cartan_inverse_is_an_inverse(t in prop::sample::select(vec!["A4", "B4", "C4", "D5", "E6", "E7", "F4", "G2"])) {
        let rs = RootSystem::new(t.parse().unwrap());
        let c = rs.cartan_matrix();
        let inv = rs.cartan_inverse();
        let n = rs.rank();
        for i in 0..n {
            for j in 0..n {
                let v: Rational64 = (0..n).map(|k| Rational64::from_integer(c[i][k]) * inv[k][j]).sum();
                prop_assert_eq!(v, Rational64::from_integer((i == j) as i64));
            }
        }
    }

    #[test]
    fn random_words_act_compatibly(t in prop::sample::select(small_types()), word in prop::collection::vec(0usize..8, 0..12)) {
        let rs = RootSystem::new(t.parse().unwrap());
        let word: Vec<usize> = word.into_iter().map(|i| i % rs.rank()).collect();
        let w = rs.weyl_element(&word).unwrap();
        let mut expected = rs.rho().clone();
        for &i in word.iter().rev() {
            rs.reflect_weight_coords(i, &mut expected.coords);
        }
        prop_assert_eq!(rs.apply_weight(&w, rs.rho()), expected);
    }
}
