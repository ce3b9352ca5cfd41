//! Canonical spherical Whittaker functions: normalizing factors, the
//! Casselman–Shalika formula, SL(2, ℝ) values and the Jacquet integral.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;
use thiserror::Error;

use crate::roots::{rational_to_f64, Root, RootError, RootSystem, WeylElement};
use crate::specfun::{self, ComplexValue, SpecError};
use crate::symalg::Place;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WhittakerError {
    #[error("pole of ζ_v at root {root} (argument {arg})")]
    PoleAt { root: Root, arg: Complex64 },
    #[error("singular parameter: ⟨wλ, α^∨⟩ = {arg} for w = {word:?}, α = {root}")]
    Singular {
        word: Vec<usize>,
        root: Root,
        arg: Complex64,
    },
    #[error("quadrature failed to converge (achieved error {0:e})")]
    ConvergenceFailure(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Special(#[from] SpecError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    CasselmanShalika,
    BesselClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerValue {
    pub value: ComplexValue,
    pub method: Method,
}

/// A p-adic torus element `Π h_{α_i}(p^{k_i})`, stored by its simple-coroot
/// exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusPoint {
    pub coroot_coords: Vec<Rational64>,
    pub dominant: bool,
}

impl TorusPoint {
    pub fn from_coroot(rs: &RootSystem, k: &[Rational64]) -> Result<Self, WhittakerError> {
        if k.len() != rs.rank() {
            return Err(WhittakerError::Dimension(format!(
                "{} exponents for rank {}",
                k.len(),
                rs.rank()
            )));
        }
        let m = rs.coweight_from_coroot_coords(k);
        Ok(TorusPoint {
            coroot_coords: k.to_vec(),
            dominant: m.iter().all(|x| *x >= Rational64::zero()),
        })
    }

    pub fn from_coroot_ints(rs: &RootSystem, k: &[i64]) -> Result<Self, WhittakerError> {
        let k: Vec<Rational64> = k.iter().map(|&x| Rational64::from_integer(x)).collect();
        Self::from_coroot(rs, &k)
    }

    /// From fundamental-coweight coordinates `m_j = ⟨α_j, μ^∨⟩`.
    pub fn from_coweight(rs: &RootSystem, m: &[i64]) -> Result<Self, WhittakerError> {
        if m.len() != rs.rank() {
            return Err(WhittakerError::Dimension(format!(
                "{} exponents for rank {}",
                m.len(),
                rs.rank()
            )));
        }
        let m: Vec<Rational64> = m.iter().map(|&x| Rational64::from_integer(x)).collect();
        Self::from_coroot(rs, &rs.coroot_coords_from_coweight(&m))
    }

    pub fn identity(rank: usize) -> Self {
        TorusPoint {
            coroot_coords: vec![Rational64::zero(); rank],
            dominant: true,
        }
    }
}

/// `⟨λ, α^∨⟩` for a numeric weight in fundamental-weight coordinates.
pub fn pair_numeric(rs: &RootSystem, lam: &[Complex64], k: usize) -> Complex64 {
    rs.coroot_coeffs(k).iter().zip(lam).map(|(&c, l)| *l * c as f64).sum()
}

pub fn apply_weyl_numeric(rs: &RootSystem, w: &WeylElement, lam: &[Complex64]) -> Vec<Complex64> {
    let c = rs.cartan_matrix();
    let mut v = lam.to_vec();
    for &i in w.word.iter().rev() {
        let ci = v[i];
        for (j, vj) in v.iter_mut().enumerate() {
            if c[i][j] != 0 {
                *vj -= ci * c[i][j] as f64;
            }
        }
    }
    v
}

fn check_rank(rs: &RootSystem, lam: &[Complex64]) -> Result<(), WhittakerError> {
    if lam.len() != rs.rank() {
        return Err(WhittakerError::Dimension(format!(
            "weight of length {} for rank {}",
            lam.len(),
            rs.rank()
        )));
    }
    Ok(())
}

/// `N_v(λ) = Π_{α∈Δ_+} ζ_v(⟨λ,α^∨⟩ + 1)`.
pub fn normalization_factor(place: Place, lam: &[Complex64], rs: &RootSystem) -> Result<ComplexValue, WhittakerError> {
    check_rank(rs, lam)?;
    let mut value = Complex64::new(1.0, 0.0);
    let mut rel = 0.0;
    for (k, root) in rs.positive_roots().iter().enumerate() {
        let arg = pair_numeric(rs, lam, k) + 1.0;
        let f = specfun::local_zeta(place, arg).map_err(|e| match e {
            SpecError::PoleAt(_) => WhittakerError::PoleAt {
                root: root.clone(),
                arg,
            },
            other => WhittakerError::Special(other),
        })?;
        value *= f.value();
        rel += f.abs_err_estimate / f.value().norm();
    }
    Ok(ComplexValue::new(value, rel * value.norm()))
}

/// Canonical p-adic Whittaker function via the Casselman–Shalika formula.
pub fn whittaker_padic(
    p: u64,
    lam: &[Complex64],
    a: &TorusPoint,
    rs: &RootSystem,
    cap: u64,
) -> Result<WhittakerValue, WhittakerError> {
    check_rank(rs, lam)?;
    if a.coroot_coords.len() != rs.rank() {
        return Err(WhittakerError::Dimension("torus point rank".to_string()));
    }
    if !a.dominant {
        return Ok(WhittakerValue {
            value: ComplexValue::new(Complex64::zero(), 0.0),
            method: Method::CasselmanShalika,
        });
    }
    let ln_p = (p as f64).ln();
    let rho = rs.rho();
    let k: Vec<f64> = a.coroot_coords.iter().map(|&x| rational_to_f64(x)).collect();
    let mut total = Complex64::zero();
    let mut magnitude = 0.0;
    for w in rs.enumerate_weyl(cap)? {
        let wl = apply_weyl_numeric(rs, &w, lam);
        let mut term = Complex64::new(1.0, 0.0);
        for (idx, root) in rs.positive_roots().iter().enumerate() {
            let x = pair_numeric(rs, &wl, idx);
            let d = 1.0 - (x * ln_p).exp();
            if d.norm() < 1e-12 {
                return Err(WhittakerError::Singular {
                    word: w.word.clone(),
                    root: root.clone(),
                    arg: x,
                });
            }
            term /= d;
        }
        let exponent: Complex64 = wl
            .iter()
            .zip(&rho.coords)
            .zip(&k)
            .map(|((l, r), ki)| (*l + rational_to_f64(*r)) * *ki)
            .sum();
        term *= (-exponent * ln_p).exp();
        magnitude += term.norm();
        total += term;
    }
    let err = 64.0 * f64::EPSILON * magnitude;
    Ok(WhittakerValue {
        value: ComplexValue::new(total, err),
        method: Method::CasselmanShalika,
    })
}

/// `2√y K_ν(2πy)`, the canonical SL(2, ℝ) Whittaker function.
pub fn whittaker_sl2_arch(nu: Complex64, y: f64) -> Result<WhittakerValue, WhittakerError> {
    if !(y > 0.0) {
        return Err(WhittakerError::Special(SpecError::Domain("y must be positive")));
    }
    let k = specfun::bessel_k(nu, 2.0 * PI * y)?;
    let f = 2.0 * y.sqrt();
    Ok(WhittakerValue {
        value: ComplexValue::new(k.value() * f, k.abs_err_estimate * f),
        method: Method::BesselClosedForm,
    })
}

/// Closed form `2π^{ν+1/2} √y K_ν(2πy) / Γ(ν+1/2)` of the SL(2) Jacquet integral.
pub fn jacquet_sl2_closed_form(nu: Complex64, y: f64) -> Result<ComplexValue, WhittakerError> {
    let w = whittaker_sl2_arch(nu, y)?.value;
    let g = specfun::gamma(nu + 0.5)?;
    let factor = ((nu + 0.5) * PI.ln()).exp() / g.value();
    let v = w.value() * factor;
    let err = factor.norm() * w.abs_err_estimate + v.norm() * g.abs_err_estimate / g.value().norm();
    Ok(ComplexValue::new(v, err))
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Wynn's ε-algorithm applied to a sequence of partial sums; returns the
/// last two accelerated estimates.
fn wynn_epsilon(partial: &[Complex64]) -> (Complex64, Complex64) {
    let n = partial.len();
    let mut prev = vec![Complex64::zero(); n + 1];
    let mut cur: Vec<Complex64> = partial.to_vec();
    let mut best = (partial[n - 1], partial[n.saturating_sub(2)]);
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff.norm() == 0.0 {
                return best;
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        col += 1;
        prev = cur;
        cur = next;
        if col % 2 == 0 && cur.len() >= 2 {
            best = (cur[cur.len() - 1], cur[cur.len() - 2]);
        }
    }
    best
}

/// Numerical Jacquet integral `∫_ℝ (y/(x²+y²))^{1/2+ν} e^{−2πix} dx` for `Re ν > 0`.
pub fn jacquet_sl2_quadrature(nu: Complex64, y: f64) -> Result<WhittakerValue, WhittakerError> {
    if !(nu.re > 0.0) {
        return Err(WhittakerError::Special(SpecError::Domain("Re ν must be positive")));
    }
    if !(y > 0.0) {
        return Err(WhittakerError::Special(SpecError::Domain("y must be positive")));
    }
    let gl = gauss_legendre(24);
    let expo = nu + 0.5;
    let f = |x: f64| ((y / (x * x + y * y)).ln() * expo).exp() * (2.0 * PI * x).cos();
    let integrate = |a: f64, b: f64, pieces: usize| {
        let h = (b - a) / pieces as f64;
        let mut s = Complex64::zero();
        for j in 0..pieces {
            let lo = a + j as f64 * h;
            let mid = lo + h / 2.0;
            for &(t, w) in &gl {
                s += f(mid + t * h / 2.0) * w * (h / 2.0);
            }
        }
        s
    };
    let first_pieces = (4.0 / y).ceil().clamp(4.0, 64.0) as usize;
    let mut partial = Vec::new();
    let mut acc = integrate(0.0, 0.25, first_pieces);
    partial.push(acc);
    let mut last_err = f64::INFINITY;
    for j in 0..400 {
        let a = 0.25 + 0.5 * j as f64;
        acc += integrate(a, a + 0.5, 2);
        partial.push(acc);
        if partial.len() >= 12 && partial.len() % 4 == 0 {
            let tail = &partial[partial.len().saturating_sub(40)..];
            let (e1, e2) = wynn_epsilon(tail);
            let err = (e1 - e2).norm();
            last_err = err;
            if err < 1e-11 {
                let v = 2.0 * e1;
                return Ok(WhittakerValue {
                    value: ComplexValue::new(v, 2.0 * err.max(1e-14)),
                    method: Method::Quadrature,
                });
            }
        }
    }
    if last_err < 1e-8 {
        let (e1, _) = wynn_epsilon(&partial[partial.len() - 40..]);
        return Ok(WhittakerValue {
            value: ComplexValue::new(2.0 * e1, 2.0 * last_err),
            method: Method::Quadrature,
        });
    }
    Err(WhittakerError::ConvergenceFailure(last_err))
}

/// Terms `e^{−t(wλ+ρ)(H)} Π_α Γ_R(−⟨wλ,α^∨⟩)` of the leading asymptotic
/// model, where `H` is given by `α_i(H) = a_i`.
pub fn asymptotic_terms(
    lam: &[Complex64],
    rs: &RootSystem,
    a: &[Rational64],
    t: f64,
    cap: u64,
) -> Result<Vec<(WeylElement, Complex64)>, WhittakerError> {
    check_rank(rs, lam)?;
    if a.len() != rs.rank() {
        return Err(WhittakerError::Dimension("H has the wrong rank".to_string()));
    }
    let h = rs.coroot_coords_from_coweight(a);
    let rho = rs.rho();
    let mut out = Vec::new();
    for w in rs.enumerate_weyl(cap)? {
        let wl = apply_weyl_numeric(rs, &w, lam);
        let mut term = Complex64::new(1.0, 0.0);
        for (k, root) in rs.positive_roots().iter().enumerate() {
            let x = pair_numeric(rs, &wl, k);
            let g = specfun::gamma_r(-x).map_err(|_| WhittakerError::Singular {
                word: w.word.clone(),
                root: root.clone(),
                arg: x,
            })?;
            term *= g.value();
        }
        let pairing: Complex64 = wl
            .iter()
            .zip(&rho.coords)
            .zip(&h)
            .map(|((l, r), hi)| (*l + rational_to_f64(*r)) * rational_to_f64(*hi))
            .sum();
        out.push((w, term * (-t * pairing).exp()));
    }
    Ok(out)
}

pub fn leading_asymptotics(
    lam: &[Complex64],
    rs: &RootSystem,
    a: &[Rational64],
    t: f64,
    cap: u64,
) -> Result<ComplexValue, WhittakerError> {
    let terms = asymptotic_terms(lam, rs, a, t, cap)?;
    let mag: f64 = terms.iter().map(|(_, v)| v.norm()).sum();
    let sum: Complex64 = terms.into_iter().map(|(_, v)| v).sum();
    Ok(ComplexValue::new(sum, 64.0 * f64::EPSILON * mag))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rs(t: &str) -> RootSystem {
        RootSystem::new(t.parse().unwrap())
    }

    #[test]
    fn normalization_examples() {
        let a1 = rs("A1");
        let nu = c(0.3, 0.2);
        let n = normalization_factor(Place::Infty, &[nu * 2.0], &a1).unwrap().value();
        let want = specfun::gamma_r(2.0 * nu + 1.0).unwrap().value();
        assert!((n - want).norm() < 1e-14);

        let n = normalization_factor(Place::Prime(3), &[c(1.0, 0.0)], &a1)
            .unwrap()
            .value();
        assert!((n.re - 1.0 / (1.0 - 1.0 / 9.0f64)).abs() < 1e-14);

        let a2 = rs("A2");
        let lam = [c(0.31, -0.2), c(0.12, 0.45)];
        let n = normalization_factor(Place::Prime(3), &lam, &a2).unwrap().value();
        let local = |x: Complex64| 1.0 / (1.0 - (-x * 3f64.ln()).exp());
        let want = local(lam[0] + 1.0) * local(lam[1] + 1.0) * local(lam[0] + lam[1] + 1.0);
        assert!((n - want).norm() < 1e-14 * want.norm());
        assert!(normalization_factor(Place::Prime(3), &[c(-1.0, 0.0), c(0.0, 0.0)], &a2).is_err());
    }

    #[test]
    fn padic_identity_and_support() {
        let a2 = rs("A2");
        let lam = [c(0.13, 0.4), c(-0.21, 0.07)];
        let e = whittaker_padic(5, &lam, &TorusPoint::identity(2), &a2, 1000).unwrap();
        assert!((e.value.value() - 1.0).norm() < 1e-12);
        let bad = TorusPoint::from_coweight(&a2, &[-1, 2]).unwrap();
        assert!(!bad.dominant);
        let v = whittaker_padic(5, &lam, &bad, &a2, 1000).unwrap();
        assert_eq!(v.value.value(), Complex64::zero());
    }

    #[test]
    fn gl2_geometric_sum() {
        let a1 = rs("A1");
        for &p in &[2u64, 3, 5] {
            let nu = c(0.17, 0.31);
            for k in 0..=10i64 {
                let a = TorusPoint::from_coweight(&a1, &[k]).unwrap();
                let got = whittaker_padic(p, &[nu * 2.0], &a, &a1, 10).unwrap().value.value();
                let pf = p as f64;
                let want: Complex64 = (0..=k)
                    .map(|j| ((nu * (k - 2 * j) as f64) * pf.ln()).exp())
                    .sum::<Complex64>()
                    * pf.powf(-(k as f64) / 2.0);
                assert!((got - want).norm() <= 1e-10 * want.norm(), "p={p} k={k}");
            }
        }
    }

    #[test]
    fn padic_singular() {
        let a1 = rs("A1");
        let a = TorusPoint::from_coweight(&a1, &[1]).unwrap();
        assert!(matches!(
            whittaker_padic(3, &[c(0.0, 0.0)], &a, &a1, 10),
            Err(WhittakerError::Singular { .. })
        ));
    }

    #[test]
    fn sl2_arch() {
        let a = whittaker_sl2_arch(c(0.4, 0.1), 1.3).unwrap().value.value();
        let b = whittaker_sl2_arch(c(-0.4, -0.1), 1.3).unwrap().value.value();
        assert!((a - b).norm() <= 1e-11 * a.norm());
        let half = whittaker_sl2_arch(c(0.5, 0.0), 1.0).unwrap().value.value();
        assert!((half.re - (-2.0 * PI).exp()).abs() < 1e-10 * half.re);
        let big = whittaker_sl2_arch(c(0.0, 0.25), 5.0).unwrap().value.value();
        assert!((big.re / (-10.0 * PI).exp() - 1.0).abs() < 0.02);
    }

    #[test]
    fn jacquet_quadrature_examples() {
        for (nu, y) in [(c(0.3, 0.0), 1.0), (c(1.0, 0.0), 0.5)] {
            let q = jacquet_sl2_quadrature(nu, y).unwrap();
            assert_eq!(q.method, Method::Quadrature);
            let cf = jacquet_sl2_closed_form(nu, y).unwrap().value();
            assert!((q.value.value() - cf).norm() < 1e-6, "{nu} {y}");
        }
        assert!(jacquet_sl2_quadrature(c(-0.1, 0.0), 1.0).is_err());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let gl = gauss_legendre(10);
        let s: f64 = gl.iter().map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn asymptotic_model_a1() {
        let a1 = rs("A1");
        let nu = 0.3;
        let y: f64 = 1e-3;
        let model = leading_asymptotics(&[c(2.0 * nu, 0.0)], &a1, &[Rational64::from_integer(1)], -y.ln(), 10)
            .unwrap()
            .value();
        let exact = whittaker_sl2_arch(c(nu, 0.0), y).unwrap().value.value();
        assert!((model / exact - 1.0).norm() < 0.01);

        let a2 = rs("A2");
        let lam = [c(0.37, 0.0), c(0.21, 0.0)];
        let h = [Rational64::from_integer(1), Rational64::from_integer(1)];
        let terms = asymptotic_terms(&lam, &a2, &h, 40.0, 100).unwrap();
        let top = terms
            .iter()
            .max_by(|x, y| x.1.norm().partial_cmp(&y.1.norm()).unwrap())
            .unwrap();
        assert_eq!(top.0.length(), 3);

        let wall = leading_asymptotics(&[c(0.0, 0.0)], &a1, &[Rational64::from_integer(1)], 1.0, 10);
        assert!(matches!(wall, Err(WhittakerError::Singular { .. })));
    }
}
