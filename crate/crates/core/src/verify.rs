//! Built-in verification suites: worked examples reproduced exactly, and
//! numerical and structural properties checked on seeded random samples.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::glcoords::GLPartition;
use crate::hecke::{borel_eigenvalue, hecke_shape, parabolic_eigenvalue, EigenvalueQuery};
use crate::parabolic::ParabolicData;
use crate::roots::{bigfloat_to_f64, CartanType, Family, RootSystem, Weight};
use crate::specfun::{bessel_k, c_factor, gamma_r, zeta_star};
use crate::symalg::{Factor, FactorKind, FormulaExpression, LinearForm, ScalarFlag, Symbol};
use crate::template::{
    first_coefficient, minimal_hecke_ratio_check, to_alpha_coordinates, to_classical, Mode, Normalization,
    SatakeAssignment,
};
use crate::whittaker::{
    jacquet_sl2_closed_form, jacquet_sl2_quadrature, whittaker_padic, whittaker_sl2_arch, TorusPoint,
};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn equal<T: PartialEq + std::fmt::Debug>(name: impl Into<String>, got: T, want: T) -> Self {
        let passed = got == want;
        let detail = if passed {
            String::new()
        } else {
            format!("got {got:?}, expected {want:?}")
        };
        Check::new(name, passed, detail)
    }

    fn within(name: impl Into<String>, worst: f64, tol: f64) -> Self {
        Check::new(
            name,
            worst <= tol,
            format!("max error {worst:.3e} (tolerance {tol:.0e})"),
        )
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

fn assignment(t: &str, levi: &[usize]) -> SatakeAssignment {
    let rs = RootSystem::new(t.parse().expect("valid Cartan type"));
    let p = ParabolicData::new(rs, levi.iter().copied().collect()).expect("valid Levi");
    SatakeAssignment::standard(p)
}

fn sym(name: &str) -> LinearForm {
    LinearForm::symbol(Symbol::real(name))
}

fn isym(name: &str) -> LinearForm {
    LinearForm::symbol(Symbol::imag(name))
}

fn one() -> LinearForm {
    LinearForm::int(1)
}

fn exact(factors: Vec<Factor>) -> FormulaExpression {
    FormulaExpression::new(factors, ScalarFlag::Exact)
}

fn borel_alpha_product(n: usize) -> FormulaExpression {
    let mut factors = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            factors.push(Factor::zeta_star(
                sym(&format!("alpha{i}")) - sym(&format!("alpha{j}")) + one(),
                -1,
            ));
        }
    }
    exact(factors)
}

/// SL(3) Borel first coefficient in Langlands parameters.
pub fn sl3_borel() -> Vec<Check> {
    let a = assignment("A2", &[]);
    let f = first_coefficient(&a, Mode::Grouped, Normalization::Hecke);
    vec![
        Check::equal(
            "SL(3) Borel, root coordinates",
            f.clone(),
            exact(vec![
                Factor::zeta_star(sym("s1") + one(), -1),
                Factor::zeta_star(sym("s2") + one(), -1),
                Factor::zeta_star(sym("s1") + sym("s2") + one(), -1),
            ]),
        ),
        Check::equal(
            "SL(3) Borel, Langlands parameters",
            to_alpha_coordinates(&f, 3),
            borel_alpha_product(3),
        ),
    ]
}

/// SL(3) maximal parabolic induced from a cusp form on GL(2).
pub fn sl3_parabolic() -> Vec<Check> {
    let a = assignment("A2", &[0]);
    let grouped = first_coefficient(&a, Mode::Grouped, Normalization::Hecke);
    let pet = first_coefficient(&a, Mode::Grouped, Normalization::Petersson);
    let mut out = vec![Check::equal(
        "SL(3) (2,1) grouped",
        grouped.clone(),
        exact(vec![Factor::l_star(sym("s") + one(), "π", -1)]),
    )];
    match to_classical(&grouped, &a) {
        Ok(c) => out.push(Check::equal(
            "SL(3) (2,1) grouped, classical",
            c,
            exact(vec![Factor::l_star(sym("z1") * 3 + one(), "φ", -1)]),
        )),
        Err(e) => out.push(Check::new("SL(3) (2,1) grouped, classical", false, e.to_string())),
    }
    out.push(Check::equal(
        "SL(3) (2,1) petersson scalar",
        pet.scalar,
        ScalarFlag::UpToNonzeroConstant,
    ));
    let norm = pet
        .factors
        .iter()
        .filter(|f| f.kind == FactorKind::NormSymbol)
        .map(|f| (f.rep.clone(), f.argument.clone(), f.exponent))
        .collect::<Vec<_>>();
    out.push(Check::equal(
        "SL(3) (2,1) petersson norm factor",
        norm,
        vec![(Some("Ad π".to_string()), one(), Rational64::new(-1, 2))],
    ));
    let flat = first_coefficient(&a, Mode::Flat, Normalization::Hecke);
    match to_classical(&flat, &a) {
        Ok(c) => {
            let got: BTreeSet<LinearForm> = c.arguments(FactorKind::ZetaStar).into_iter().collect();
            let want: BTreeSet<LinearForm> = [sym("z1") * 3 + sym("v") + one(), sym("z1") * 3 - sym("v") + one()]
                .into_iter()
                .collect();
            out.push(Check::equal("SL(3) (2,1) flat arguments", got, want));
        }
        Err(e) => out.push(Check::new("SL(3) (2,1) flat arguments", false, e.to_string())),
    }
    out
}

/// The four standard parabolics of SL(4).
pub fn sl4_tables() -> Vec<Check> {
    let mut out = Vec::new();
    let borel = first_coefficient(&assignment("A3", &[]), Mode::Grouped, Normalization::Hecke);
    out.push(Check::equal(
        "SL(4) (1,1,1,1)",
        to_alpha_coordinates(&borel, 4),
        borel_alpha_product(4),
    ));
    let s2 = sym("s2");
    let s3 = sym("s3");
    out.push(Check::equal(
        "SL(4) (2,1,1)",
        first_coefficient(&assignment("A3", &[0]), Mode::Grouped, Normalization::Hecke),
        exact(vec![
            Factor::zeta_star(s3.clone() + one(), -1),
            Factor::l_star(s2.clone() + one(), "π", -1),
            Factor::l_star(s2 + s3 + one(), "π", -1),
        ]),
    ));
    out.push(Check::equal(
        "SL(4) (2,2)",
        first_coefficient(&assignment("A3", &[0, 2]), Mode::Grouped, Normalization::Hecke),
        exact(vec![Factor::l_star(sym("s") + one(), "π'×π''", -1)]),
    ));
    out.push(Check::equal(
        "SL(4) (3,1)",
        first_coefficient(&assignment("A3", &[0, 1]), Mode::Grouped, Normalization::Hecke),
        exact(vec![Factor::l_star(sym("s") + one(), "π", -1)]),
    ));
    out
}

/// Divisor-sum shapes of the SL(4) Hecke eigenvalues and a numeric check of
/// the (2,2) case at a prime.
pub fn sl4_hecke_shapes() -> Vec<Check> {
    let expected = [
        ("1,1,1,1", "Σ_{c1c2c3c4=m} c1^(α1) c2^(α2) c3^(α3) c4^(α4)"),
        ("2,1,1", "Σ_{c1c2c3=m} λ_φ(c1) c1^(z1) c2^(z2) c3^(-2z1-z2)"),
        ("2,2", "Σ_{c1c2=m} λ_φ1(c1) λ_φ2(c2) c1^(z1) c2^(-z1)"),
        ("3,1", "Σ_{c1c2=m} λ_φ(c1) c1^(z1) c2^(-3z1)"),
    ];
    let mut out: Vec<Check> = expected
        .iter()
        .map(|(p, want)| {
            let part: GLPartition = p.parse().expect("partition");
            Check::equal(format!("SL(4) Hecke shape ({p})"), hecke_shape(&part), want.to_string())
        })
        .collect();
    let z1 = Complex64::new(0.23, 0.41);
    let p = 7u64;
    let l1 = |m: u64| Ok(Complex64::new(0.5 + m as f64, -0.25));
    let l2 = |m: u64| Ok(Complex64::new(0.1, m as f64));
    let q = EigenvalueQuery {
        partition: "2,2".parse().expect("partition"),
        m: p,
        z: vec![z1, -z1],
    };
    let lp = (p as f64).ln();
    let want = l1(p).unwrap() * l2(1).unwrap() * (z1 * lp).exp() + l1(1).unwrap() * l2(p).unwrap() * (-z1 * lp).exp();
    let err = match parabolic_eigenvalue(&q, &[&l1, &l2]) {
        Ok(v) => (v - want).norm() / want.norm(),
        Err(_) => f64::INFINITY,
    };
    out.push(Check::within("SL(4) (2,2) eigenvalue at a prime", err, 1e-12));
    out
}

/// Maximal parabolics of E8 with Levi E7 and D7.
pub fn exceptional() -> Vec<Check> {
    let mut out = Vec::new();
    for (levi, sizes, want) in [
        (
            vec![0, 1, 2, 3, 4, 5, 6],
            vec![1usize, 56],
            exact(vec![
                Factor::l_star(sym("s") + one(), "π,56", -1),
                Factor::zeta_star(sym("s") * 2 + one(), -1),
            ]),
        ),
        (
            vec![1, 2, 3, 4, 5, 6, 7],
            vec![14, 64],
            exact(vec![
                Factor::l_star(sym("s") + one(), "π,Spin", -1),
                Factor::l_star(sym("s") * 2 + one(), "π,Stan", -1),
            ]),
        ),
    ] {
        let a = assignment("E8", &levi);
        let levi_type = a.parabolic.levi_components[0].cartan_type;
        let mut got_sizes: Vec<usize> = a.parabolic.wl_orbits().orbits.iter().map(|o| o.roots.len()).collect();
        got_sizes.sort_unstable();
        out.push(Check::equal(format!("E8/{levi_type} orbit sizes"), got_sizes, sizes));
        out.push(Check::equal(
            format!("E8/{levi_type} grouped"),
            first_coefficient(&a, Mode::Grouped, Normalization::Hecke),
            want,
        ));
    }
    out
}

type PairingCase = (&'static str, &'static str, Vec<usize>, Vec<(Vec<i64>, LinearForm)>);

/// Pairings `⟨μ, α^∨⟩` over the unipotent radical, root by root.
pub fn pairings() -> Vec<Check> {
    let s = || sym("s");
    let cases: Vec<PairingCase> = vec![
        (
            "SL(3) Borel",
            "A2",
            vec![],
            vec![
                (vec![1, 0], sym("s1")),
                (vec![0, 1], sym("s2")),
                (vec![1, 1], sym("s1") + sym("s2")),
            ],
        ),
        (
            "SL(3) (2,1)",
            "A2",
            vec![0],
            vec![(vec![0, 1], s() - isym("t")), (vec![1, 1], s() + isym("t"))],
        ),
        (
            "SL(4) (2,2)",
            "A3",
            vec![0, 2],
            vec![
                (vec![0, 1, 0], s() - isym("t'") - isym("t''")),
                (vec![1, 1, 0], s() + isym("t'") - isym("t''")),
                (vec![0, 1, 1], s() - isym("t'") + isym("t''")),
                (vec![1, 1, 1], s() + isym("t'") + isym("t''")),
            ],
        ),
        (
            "SL(4) (2,1,1)",
            "A3",
            vec![0],
            vec![
                (vec![0, 1, 0], sym("s2") - isym("t")),
                (vec![1, 1, 0], sym("s2") + isym("t")),
                (vec![0, 0, 1], sym("s3")),
                (vec![0, 1, 1], sym("s2") + sym("s3") - isym("t")),
                (vec![1, 1, 1], sym("s2") + sym("s3") + isym("t")),
            ],
        ),
        (
            "SL(4) (3,1)",
            "A3",
            vec![0, 1],
            vec![
                (vec![0, 0, 1], s() + isym("t3")),
                (vec![0, 1, 1], s() + isym("t2")),
                (vec![1, 1, 1], s() + isym("t1")),
            ],
        ),
    ];
    cases
        .into_iter()
        .map(|(name, t, levi, want)| {
            let a = assignment(t, &levi);
            let rs = a.root_system();
            let mut got: Vec<(Vec<i64>, LinearForm)> = a
                .pairings_u()
                .into_iter()
                .map(|(k, form)| (rs.positive_roots()[k].coords.clone(), form))
                .collect();
            got.sort();
            let mut want = want;
            want.sort();
            Check::equal(format!("{name} pairings"), got, want)
        })
        .collect()
}

pub fn worked_examples_suite() -> Vec<Check> {
    let mut out = sl3_borel();
    out.extend(sl3_parabolic());
    out.extend(sl4_tables());
    out.extend(sl4_hecke_shapes());
    out.extend(exceptional());
    out.extend(pairings());
    out
}

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}

/// Jacquet integral for SL(2, ℝ) by quadrature against its closed form.
pub fn whittaker_quadrature() -> Vec<Check> {
    let mut worst_quad: f64 = 0.0;
    let mut worst_canon: f64 = 0.0;
    let mut failures = Vec::new();
    for nu in [0.2, 0.5, 1.0, 1.5] {
        for y in [0.5, 1.0, 2.0, 5.0] {
            let nu_c = Complex64::new(nu, 0.0);
            let quad = jacquet_sl2_quadrature(nu_c, y);
            let closed = jacquet_sl2_closed_form(nu_c, y);
            let (quad, closed) = match (quad, closed) {
                (Ok(q), Ok(c)) => (q.value.value(), c.value()),
                _ => {
                    failures.push(format!("ν={nu}, y={y}"));
                    continue;
                }
            };
            worst_quad = worst_quad.max((quad - closed).norm());
            let scaled = quad
                * gamma_r(2.0 * nu_c + 1.0)
                    .map(|g| g.value())
                    .unwrap_or(Complex64::new(f64::NAN, 0.0));
            let canon = whittaker_sl2_arch(nu_c, y).map(|w| w.value.value());
            match canon {
                Ok(w) => worst_canon = worst_canon.max((scaled - w).norm()),
                Err(_) => failures.push(format!("canonical ν={nu}, y={y}")),
            }
        }
    }
    let mut out = vec![
        Check::within("Jacquet quadrature vs closed form on the 4x4 grid", worst_quad, 1e-6),
        Check::within(
            "Γ_R(2ν+1) · quadrature vs canonical Whittaker function",
            worst_canon,
            1e-6,
        ),
    ];
    if !failures.is_empty() {
        out.push(Check::new("quadrature evaluation", false, failures.join("; ")));
    }
    out
}

fn random_complex(rng: &mut StdRng, scale: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale))
}

/// Casselman–Shalika values: identity, Weyl invariance and the GL(2) sum.
pub fn casselman_shalika(seed: u64) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut identity: f64 = 0.0;
    let mut invariance: f64 = 0.0;
    let mut errors = Vec::new();
    for rank in 1..=3usize {
        let rs = RootSystem::new(CartanType::new(Family::A, rank).expect("type A"));
        let weyl = rs.enumerate_weyl(100).expect("small Weyl group");
        for p in [2u64, 3, 5] {
            for _ in 0..20 {
                let lam: Vec<Complex64> = (0..rank).map(|_| random_complex(&mut rng, 1.0)).collect();
                let e = whittaker_padic(p, &lam, &TorusPoint::identity(rank), &rs, 100);
                match e {
                    Ok(v) => {
                        let bound = v.value.abs_err_estimate.max(f64::EPSILON);
                        identity = identity.max((v.value.value() - 1.0).norm() / bound);
                    }
                    Err(err) => errors.push(err.to_string()),
                }
                let m: Vec<i64> = (0..rank).map(|_| rng.gen_range(0..3)).collect();
                let a = TorusPoint::from_coweight(&rs, &m).expect("coweight");
                let base = match whittaker_padic(p, &lam, &a, &rs, 100) {
                    Ok(v) => v.value.value(),
                    Err(err) => {
                        errors.push(err.to_string());
                        continue;
                    }
                };
                for w in &weyl {
                    let wl = crate::whittaker::apply_weyl_numeric(&rs, w, &lam);
                    match whittaker_padic(p, &wl, &a, &rs, 100) {
                        Ok(v) => invariance = invariance.max(rel_err(v.value.value(), base)),
                        Err(err) => errors.push(err.to_string()),
                    }
                }
            }
        }
    }
    let a1 = RootSystem::new(CartanType::new(Family::A, 1).expect("A1"));
    let mut geometric: f64 = 0.0;
    for p in [2u64, 3, 5] {
        let nu = random_complex(&mut rng, 0.5);
        for k in 0..=10i64 {
            let a = TorusPoint::from_coweight(&a1, &[k]).expect("coweight");
            let pf = p as f64;
            let want: Complex64 = (0..=k)
                .map(|j| (nu * (k - 2 * j) as f64 * pf.ln()).exp())
                .sum::<Complex64>()
                * pf.powf(-(k as f64) / 2.0);
            match whittaker_padic(p, &[nu * 2.0], &a, &a1, 10) {
                Ok(v) => geometric = geometric.max(rel_err(v.value.value(), want)),
                Err(err) => errors.push(err.to_string()),
            }
        }
    }
    let mut out = vec![
        Check::new(
            "W_p(e) = 1 within the rounding bound",
            identity <= 1.0,
            format!("max error / rounding bound = {identity:.3}"),
        ),
        Check::within("Weyl invariance, A1-A3, p in {2,3,5}", invariance, 1e-10),
        Check::within("GL(2) geometric sum, k <= 10", geometric, 1e-10),
    ];
    if !errors.is_empty() {
        out.push(Check::new("Casselman-Shalika evaluation", false, errors.join("; ")));
    }
    out
}

/// Functional equations and special values of ζ*, c and K_ν.
pub fn special_functions(seed: u64) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut fe: f64 = 0.0;
    let mut cc: f64 = 0.0;
    let mut errors = Vec::new();
    for _ in 0..100 {
        let s = Complex64::new(0.5 + rng.gen_range(-3.0..3.0), rng.gen_range(-30.0..30.0));
        match (zeta_star(s), zeta_star(1.0 - s)) {
            (Ok(a), Ok(b)) => fe = fe.max(rel_err(a.value(), b.value())),
            _ => errors.push(format!("ζ* at {s}")),
        }
        match (c_factor(s), c_factor(-s)) {
            (Ok(a), Ok(b)) => cc = cc.max((a.value() * b.value() - 1.0).norm()),
            _ => errors.push(format!("c at {s}")),
        }
    }
    let z2 = zeta_star(Complex64::new(2.0, 0.0))
        .map(|v| (v.value() - PI / 6.0).norm())
        .unwrap_or(f64::INFINITY);
    let mut ksym: f64 = 0.0;
    for _ in 0..20 {
        let nu = random_complex(&mut rng, 5.0);
        let x = rng.gen_range(0.1..20.0);
        match (bessel_k(nu, x), bessel_k(-nu, x)) {
            (Ok(a), Ok(b)) => ksym = ksym.max(rel_err(a.value(), b.value())),
            _ => errors.push(format!("K at ν={nu}, x={x}")),
        }
    }
    let mut out = vec![
        Check::within("ζ*(s) = ζ*(1-s) on 100 strip points", fe, 1e-9),
        Check::within("c(s)c(-s) = 1 on 100 strip points", cc, 1e-9),
        Check::within("ζ*(2) = π/6", z2, 1e-12),
        Check::within("K_ν = K_-ν", ksym, 1e-11),
    ];
    if !errors.is_empty() {
        out.push(Check::new("special function evaluation", false, errors.join("; ")));
    }
    out
}

pub fn supported_types() -> Vec<CartanType> {
    let mut out = Vec::new();
    let ranges: [(Family, std::ops::RangeInclusive<usize>); 7] = [
        (Family::A, 1..=8),
        (Family::B, 2..=6),
        (Family::C, 2..=6),
        (Family::D, 3..=8),
        (Family::E, 6..=8),
        (Family::F, 4..=4),
        (Family::G, 2..=2),
    ];
    for (family, ranks) in ranges {
        for r in ranks {
            out.push(CartanType::new(family, r).expect("supported"));
        }
    }
    out
}

/// Root-system identities and the Levi cancellation in the normalizing factors.
pub fn structural() -> Vec<Check> {
    let mut bad_rho = Vec::new();
    let mut bad_dual = Vec::new();
    for ct in supported_types() {
        let rs = RootSystem::new(ct);
        let r = rs.rank();
        let mut sum = vec![0i64; r];
        for root in rs.positive_roots() {
            for (s, c) in sum.iter_mut().zip(&root.coords) {
                *s += c;
            }
        }
        let two_rho: Vec<Rational64> = rs.rho_root_coords().iter().map(|q| q * 2).collect();
        if sum.iter().map(|&x| Rational64::from_integer(x)).collect::<Vec<_>>() != two_rho {
            bad_rho.push(ct.to_string());
        }
        for i in 0..r {
            for j in 0..r {
                let v = rs.weight_pairing(&Weight::fundamental(r, i), &rs.simple_root(j));
                if v != Rational64::from_integer((i == j) as i64) {
                    bad_dual.push(format!("{ct} ({i},{j})"));
                }
            }
        }
    }
    let mut weyl_worst: f64 = 0.0;
    let mut errors = Vec::new();
    for t in ["A1", "A2", "A3", "A4", "D4"] {
        let rs = RootSystem::new(t.parse().expect("type"));
        match rs.weyl_denominator_check(Rational64::new(1, 3), 256, 1_000) {
            Ok((l, r)) => {
                let (l, r) = (bigfloat_to_f64(&l), bigfloat_to_f64(&r));
                weyl_worst = weyl_worst.max((l - r).abs() / r.abs());
            }
            Err(e) => errors.push(format!("{t}: {e}")),
        }
    }
    let configs: [(&str, &[usize]); 10] = [
        ("A2", &[]),
        ("A2", &[0]),
        ("A3", &[0]),
        ("A3", &[0, 2]),
        ("A3", &[0, 1]),
        ("A4", &[1, 2]),
        ("D4", &[0, 2, 3]),
        ("D5", &[1, 2]),
        ("E6", &[1, 2, 3]),
        ("E7", &[0, 1, 2, 3, 4, 5]),
    ];
    let cancel_bad: Vec<String> = configs
        .iter()
        .filter(|(t, levi)| !minimal_hecke_ratio_check(&assignment(t, levi)))
        .map(|(t, levi)| format!("{t} {levi:?}"))
        .collect();
    let mut out = vec![
        Check::new("sum of positive roots = 2ρ", bad_rho.is_empty(), bad_rho.join(", ")),
        Check::new(
            "fundamental weights dual to simple coroots",
            bad_dual.is_empty(),
            bad_dual.join(", "),
        ),
        Check::within("Weyl denominator identity, A1-A4 and D4", weyl_worst, 1e-12),
        Check::new(
            "Levi cancellation in the normalizing factors, 10 parabolics",
            cancel_bad.is_empty(),
            cancel_bad.join(", "),
        ),
    ];
    if !errors.is_empty() {
        out.push(Check::new("Weyl denominator evaluation", false, errors.join("; ")));
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Multiplicativity of the Borel eigenvalues and the GL(2) comparison with
/// the p-adic Whittaker function.
pub fn hecke_properties(seed: u64) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut mult: f64 = 0.0;
    let mut errors = Vec::new();
    for n in 2..=4usize {
        let mut alpha: Vec<Complex64> = (0..n).map(|_| random_complex(&mut rng, 0.5)).collect();
        let mean = alpha.iter().sum::<Complex64>() / n as f64;
        alpha.iter_mut().for_each(|a| *a -= mean);
        let table: Vec<Complex64> = std::iter::once(Complex64::new(0.0, 0.0))
            .chain((1..=10_000u64).map(|m| borel_eigenvalue(&alpha, m).unwrap_or(Complex64::new(f64::NAN, 0.0))))
            .collect();
        for a in 2..=100u64 {
            for b in (a + 1)..=(10_000 / a) {
                if gcd(a, b) == 1 {
                    let lhs = table[(a * b) as usize];
                    let rhs = table[a as usize] * table[b as usize];
                    mult = mult.max((lhs - rhs).norm() / lhs.norm().max(1.0));
                }
            }
        }
        if table.iter().any(|v| v.re.is_nan()) {
            errors.push(format!("evaluation failed for n = {n}"));
        }
    }
    let a1 = RootSystem::new(CartanType::new(Family::A, 1).expect("A1"));
    let mut gl2: f64 = 0.0;
    for p in [2u64, 3, 5, 7, 11, 13] {
        let nu = random_complex(&mut rng, 0.5);
        let a = TorusPoint::from_coweight(&a1, &[1]).expect("coweight");
        let w = whittaker_padic(p, &[nu * 2.0], &a, &a1, 10);
        let lam = borel_eigenvalue(&[nu, -nu], p);
        match (w, lam) {
            (Ok(w), Ok(l)) => gl2 = gl2.max(rel_err(l, w.value.value() * (p as f64).sqrt())),
            _ => errors.push(format!("GL(2) comparison at p = {p}")),
        }
    }
    let mut out = vec![
        Check::within("multiplicativity for coprime m, n with mn <= 10^4", mult, 1e-10),
        Check::within("GL(2) λ(p) = p^(1/2) W_p at coweight 1", gl2, 1e-10),
    ];
    if !errors.is_empty() {
        out.push(Check::new("Hecke evaluation", false, errors.join("; ")));
    }
    out
}

pub fn properties_suite(seed: u64) -> Vec<Check> {
    let mut out = whittaker_quadrature();
    out.extend(casselman_shalika(seed));
    out.extend(special_functions(seed.wrapping_add(1)));
    out.extend(structural());
    out.extend(hecke_properties(seed.wrapping_add(2)));
    out
}
