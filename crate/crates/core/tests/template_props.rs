use std::collections::{BTreeMap, BTreeSet};

use eisenstein_template::parabolic::ParabolicData;
use eisenstein_template::roots::{RootSystem, Weight};
use eisenstein_template::symalg::{FactorKind, LinearForm, ScalarFlag, Symbol, SymbolKind};
use eisenstein_template::template::{
    constant_term, expand_c_factors, first_coefficient, Mode, Normalization, SatakeAssignment,
};
use num_complex::Complex64;
use num_rational::Rational64;

const TYPES: [&str; 17] = [
    "A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "D5", "G2", "F4", "E6", "E7",
];

fn subsets(rank: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (0u32..(1 << rank)).map(move |mask| (0..rank).filter(|i| mask & (1 << i) != 0).collect())
}

fn proper_levis(t: &str) -> Vec<ParabolicData> {
    let rs = RootSystem::new(t.parse().unwrap());
    let rank = rs.rank();
    let sets: Vec<BTreeSet<usize>> = if rank <= 6 {
        subsets(rank).filter(|s| s.len() < rank).collect()
    } else {
        (0..rank)
            .map(|p| (0..rank).filter(|&i| i != p).collect())
            .chain([BTreeSet::new()])
            .collect()
    };
    sets.into_iter()
        .map(|s| ParabolicData::new(rs.clone(), s).unwrap())
        .collect()
}

fn one() -> Rational64 {
    Rational64::from_integer(1)
}

fn sorted_texts(forms: impl IntoIterator<Item = LinearForm>) -> Vec<String> {
    let mut v: Vec<String> = forms.into_iter().map(|f| f.to_text()).collect();
    v.sort();
    v
}

/// Squared length of a root relative to the simple root lengths.
fn squared_length(rs: &RootSystem, k: usize) -> Rational64 {
    let r = &rs.positive_roots()[k];
    let co = rs.coroot_coeffs(k);
    let i = r.support().next().unwrap();
    rs.simple_lengths()[i] * r.coords[i] / co[i]
}

#[test]
fn grouped_atoms_cover_the_flat_factors() {
    for t in TYPES {
        for p in proper_levis(t) {
            let assign = SatakeAssignment::standard(p);
            let flat = first_coefficient(&assign, Mode::Flat, Normalization::Hecke);
            let grouped = assign.grouped_atoms();
            let from_groups = sorted_texts(grouped.iter().flat_map(|(_, args)| args.clone()));
            assert_eq!(from_groups, sorted_texts(flat.arguments(FactorKind::ZetaStar)), "{t}");
            for (factor, args) in &grouped {
                for a in args {
                    let s_part = a
                        .filter_terms(|s| s.kind() != SymbolKind::Spectral)
                        .add_constant(a.constant_value());
                    assert_eq!(s_part, factor.argument, "{t}");
                }
            }
        }
    }
}

#[test]
fn maximal_parabolic_arguments_follow_the_grading() {
    for t in TYPES {
        let rs = RootSystem::new(t.parse().unwrap());
        for p in 0..rs.rank() {
            let levi: BTreeSet<usize> = (0..rs.rank()).filter(|&i| i != p).collect();
            let par = ParabolicData::new(rs.clone(), levi).unwrap();
            let levels = par.unipotent_grading().unwrap();
            let assign = SatakeAssignment::standard(par);
            let s = assign.s_symbols[&p].clone();
            for (j, roots) in levels {
                assert!(j >= 1);
                for k in roots {
                    let arg = assign.pairing(k) + one();
                    assert_eq!(arg.coefficient(&s), Rational64::from_integer(j), "{t} P{p}");
                    assert_eq!(arg.constant_value(), one(), "{t} P{p}");
                    assert!(
                        arg.terms().all(|(x, _)| x == &s || x.kind() == SymbolKind::Spectral),
                        "{t} P{p}: {}",
                        arg.to_text()
                    );
                }
            }
        }
    }
}

#[test]
fn borel_flat_formula_has_one_factor_per_positive_root() {
    for t in TYPES {
        let rs = RootSystem::new(t.parse().unwrap());
        let n = rs.positive_roots().len();
        let assign = SatakeAssignment::standard(ParabolicData::new(rs, BTreeSet::new()).unwrap());
        let f = first_coefficient(&assign, Mode::Flat, Normalization::Hecke);
        let args = f.arguments(FactorKind::ZetaStar);
        assert_eq!(args.len(), n, "{t}");
        assert!(f.factors.iter().all(|x| x.exponent == -one()));
        let want = sorted_texts((0..n).map(|k| assign.pairing(k) + one()));
        assert_eq!(sorted_texts(args), want, "{t}");
    }
}

#[test]
fn normalization_sets_the_scalar_flag() {
    for t in ["A2", "B3", "G2"] {
        for p in proper_levis(t) {
            let assign = SatakeAssignment::standard(p);
            for mode in [Mode::Flat, Mode::Grouped] {
                assert_eq!(
                    first_coefficient(&assign, mode, Normalization::Hecke).scalar,
                    ScalarFlag::Exact
                );
                assert_eq!(
                    first_coefficient(&assign, mode, Normalization::Petersson).scalar,
                    ScalarFlag::UpToNonzeroConstant
                );
            }
        }
    }
}

#[test]
fn unipotent_roots_sum_to_twice_rho_minus_rho_l() {
    for t in TYPES {
        for p in proper_levis(t) {
            let rank = p.rs.rank();
            let mut sum = Weight::zero(rank);
            for &k in &p.delta_u {
                for (a, b) in sum.coords.iter_mut().zip(p.rs.root_weight(p.root(k)).coords) {
                    *a += b;
                }
            }
            let want: Vec<Rational64> = p.rho_minus_rho_l().iter().map(|c| c * 2).collect();
            assert_eq!(sum.coords, want, "{t} {:?}", p.levi_simples);
        }
    }
}

/// Roots of U with the same coefficients off the Levi and the same length
/// form exactly one W_L-orbit.
#[test]
fn orbits_match_shape_and_length_classes() {
    for t in TYPES {
        for p in proper_levis(t) {
            let mut classes: BTreeMap<(Vec<i64>, Rational64), BTreeSet<usize>> = BTreeMap::new();
            for &k in &p.delta_u {
                let r = p.root(k);
                let shape: Vec<i64> = p.sigma_l_complement.iter().map(|&i| r.coords[i]).collect();
                classes.entry((shape, squared_length(&p.rs, k))).or_default().insert(k);
            }
            let want: BTreeSet<BTreeSet<usize>> = classes.into_values().collect();
            let got: BTreeSet<BTreeSet<usize>> = p
                .wl_orbits()
                .orbits
                .into_iter()
                .map(|o| o.roots.into_iter().collect())
                .collect();
            assert_eq!(got, want, "{t} {:?}", p.levi_simples);
        }
    }
}

#[test]
fn orbits_refine_the_grading_levels() {
    for t in TYPES {
        let rs = RootSystem::new(t.parse().unwrap());
        for p in 0..rs.rank() {
            let levi: BTreeSet<usize> = (0..rs.rank()).filter(|&i| i != p).collect();
            let par = ParabolicData::new(rs.clone(), levi).unwrap();
            let level_of: BTreeMap<usize, i64> = par
                .unipotent_grading()
                .unwrap()
                .into_iter()
                .flat_map(|(j, ks)| ks.into_iter().map(move |k| (k, j)))
                .collect();
            for o in par.wl_orbits().orbits {
                let levels: BTreeSet<i64> = o.roots.iter().map(|k| level_of[k]).collect();
                assert_eq!(levels.len(), 1, "{t} P{p}");
            }
        }
    }
}

#[test]
fn constant_term_has_one_term_per_weyl_element() {
    for t in ["A1", "A2", "A3", "B2", "B3", "C3", "G2"] {
        let rs = RootSystem::new(t.parse().unwrap());
        let lam: Vec<LinearForm> = (0..rs.rank())
            .map(|i| LinearForm::symbol(Symbol::real(&format!("s{}", i + 1))))
            .collect();
        let ct = constant_term(&rs, &lam, 10_000).unwrap();
        assert_eq!(ct.terms.len() as u64, rs.cartan_type().weyl_order(), "{t}");
        let symbolic: BTreeSet<Vec<String>> = ct
            .terms
            .iter()
            .map(|x| x.exponent.iter().map(|l| l.to_text()).collect())
            .collect();
        assert_eq!(symbolic.len(), ct.terms.len(), "{t}");
        let generic = [2f64.ln(), 3f64.ln(), 5f64.ln(), 7f64.ln()];
        let numeric: Vec<Vec<Complex64>> = ct
            .terms
            .iter()
            .map(|x| {
                x.exponent
                    .iter()
                    .map(|l| {
                        l.eval(|s| {
                            let k: usize = s.name()[1..].parse().unwrap();
                            Complex64::new(generic[k - 1], 0.0)
                        })
                    })
                    .collect()
            })
            .collect();
        for (a, xa) in numeric.iter().enumerate() {
            for xb in &numeric[a + 1..] {
                let gap: f64 = xa.iter().zip(xb).map(|(u, v)| (u - v).norm()).sum();
                assert!(gap > 1e-6, "{t}");
            }
        }
        for term in &ct.terms {
            assert_eq!(term.coefficient.factors.len(), term.weyl.length(), "{t}");
            let expanded = expand_c_factors(&term.coefficient);
            assert!(expanded.factors.iter().all(|f| f.kind == FactorKind::ZetaStar));
        }
    }
}
