//! Complex Γ, Riemann ζ, the completed ζ*, local zeta factors, the
//! Gindikin–Karpelevich factor c(s) and the K-Bessel function.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum SpecError {
    #[error("pole at {0}")]
    PoleAt(Complex64),
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("quadrature did not converge")]
    NoConvergence,
}

/// A complex value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
    pub abs_err_estimate: f64,
}

impl ComplexValue {
    pub fn new(z: Complex64, abs_err_estimate: f64) -> Self {
        ComplexValue {
            re: z.re,
            im: z.im,
            abs_err_estimate,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const EPS: f64 = f64::EPSILON;

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `sin(πx)` and `cos(πx)` for real x with exact reduction of the argument.
fn sincospi(x: f64) -> (f64, f64) {
    let r = x - 2.0 * (x / 2.0).floor();
    let (r, flip) = if r > 1.0 { (r - 1.0, true) } else { (r, false) };
    let (s, c) = if r == 0.5 {
        (1.0, 0.0)
    } else if r == 0.0 {
        (0.0, 1.0)
    } else if r == 1.0 {
        (0.0, -1.0)
    } else {
        (PI * r).sin_cos()
    };
    if flip {
        (-s, -c)
    } else {
        (s, c)
    }
}

/// `sin(πz)` for complex z.
pub fn sinpi(z: Complex64) -> Complex64 {
    let (s, c) = sincospi(z.re);
    let b = PI * z.im;
    Complex64::new(s * b.cosh(), c * b.sinh())
}

fn ln_gamma_lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// log Γ(z) for `Re z ≥ 1/2` (principal branch of the logarithm of each piece).
pub fn ln_gamma(z: Complex64) -> Result<Complex64, SpecError> {
    if is_nonpositive_integer(z) {
        return Err(SpecError::PoleAt(z));
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_lanczos(z))
    } else {
        Ok(Complex64::new(PI.ln(), 0.0) - sinpi(z).ln() - ln_gamma_lanczos(1.0 - z))
    }
}

pub fn gamma(z: Complex64) -> Result<ComplexValue, SpecError> {
    if is_nonpositive_integer(z) {
        return Err(SpecError::PoleAt(z));
    }
    let (v, lg) = if z.re >= 0.5 {
        let lg = ln_gamma_lanczos(z);
        (lg.exp(), lg)
    } else {
        let lg = ln_gamma_lanczos(1.0 - z);
        (PI / (sinpi(z) * lg.exp()), lg)
    };
    let rel = 1e-15 + 4.0 * EPS * (1.0 + lg.norm());
    Ok(ComplexValue::new(v, rel * v.norm()))
}

fn gamma_value(z: Complex64) -> Result<Complex64, SpecError> {
    gamma(z).map(|g| g.value())
}

/// Borwein's accelerated alternating series for η(s) = (1 − 2^{1−s}) ζ(s).
fn eta_borwein(s: Complex64, n: usize) -> Complex64 {
    let nf = n as f64;
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0;
    let mut acc = 1.0;
    d.push(acc);
    for i in 0..n {
        let fi = i as f64;
        term *= (nf + fi) * 4.0 * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        acc += term;
        d.push(acc);
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let pow = (-s * ((k + 1) as f64).ln()).exp();
        sum += sign * (d[k] - dn) * pow;
    }
    -sum / dn
}

const BERNOULLI_2K: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Euler–Maclaurin summation for ζ(s), valid for any s ≠ 1.
pub fn zeta_euler_maclaurin(s: Complex64) -> Complex64 {
    let n = (20.0 + s.norm()).ceil() as usize;
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_pow = (-s * nf.ln()).exp();
    sum += n_pow * nf / (s - 1.0) + 0.5 * n_pow;
    let mut rising = s;
    let mut npow = n_pow / nf;
    let mut fact = 2.0;
    for (j, b) in BERNOULLI_2K.iter().enumerate() {
        let k = 2 * j + 2;
        sum += *b / fact * rising * npow;
        rising = rising * (s + (k - 1) as f64) * (s + k as f64);
        npow /= nf * nf;
        fact *= ((k + 1) * (k + 2)) as f64;
    }
    sum
}

fn zeta_right(s: Complex64) -> (Complex64, f64) {
    let denom = 1.0 - (-(s - 1.0) * LN_2).exp();
    let t = s.im.abs();
    if denom.norm() < 0.2 {
        let v = zeta_euler_maclaurin(s);
        return (v, 1e-14 * (1.0 + v.norm()) * (1.0 + t));
    }
    let n = 30 + (1.8 * t).ceil() as usize;
    let v = eta_borwein(s, n) / denom;
    let err = (n as f64) * 4.0 * EPS * (1.0 + v.norm()) / denom.norm() * (1.0 + t);
    (v, err)
}

/// Riemann ζ(s).
pub fn zeta(s: Complex64) -> Result<ComplexValue, SpecError> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(SpecError::PoleAt(s));
    }
    if s.re >= 0.0 {
        let (v, e) = zeta_right(s);
        return Ok(ComplexValue::new(v, e));
    }
    let one_minus = 1.0 - s;
    let (z1, e1) = zeta_right(one_minus);
    let g = gamma_value(one_minus)?;
    let factor = (s * LN_2 + (s - 1.0) * PI.ln()).exp() * sinpi(s / 2.0) * g;
    let v = factor * z1;
    let err = factor.norm() * e1 + 1e-14 * v.norm() * (1.0 + s.norm());
    Ok(ComplexValue::new(v, err))
}

fn near_negative_even(w: Complex64) -> bool {
    if w.re > -1.0 {
        return false;
    }
    let k = (w.re / 2.0).round() * 2.0;
    (w - k).norm() < 0.25
}

/// Completed zeta ζ*(w) = π^{−w/2} Γ(w/2) ζ(w).
pub fn zeta_star(w: Complex64) -> Result<ComplexValue, SpecError> {
    if w == Complex64::new(0.0, 0.0) || w == Complex64::new(1.0, 0.0) {
        return Err(SpecError::PoleAt(w));
    }
    if near_negative_even(w) {
        return zeta_star(1.0 - w);
    }
    let g = gamma(w / 2.0)?;
    let z = zeta(w)?;
    let p = (-w / 2.0 * PI.ln()).exp();
    let v = p * g.value() * z.value();
    let err = p.norm() * (g.abs_err_estimate * z.value().norm() + g.value().norm() * z.abs_err_estimate);
    Ok(ComplexValue::new(v, err))
}

/// Γ_R(s) = π^{−s/2} Γ(s/2).
pub fn gamma_r(s: Complex64) -> Result<ComplexValue, SpecError> {
    let g = gamma(s / 2.0)?;
    let p = (-s / 2.0 * PI.ln()).exp();
    Ok(ComplexValue::new(p * g.value(), p.norm() * g.abs_err_estimate))
}

/// Local factor ζ_v(s): Γ_R at the archimedean place, (1 − p^{−s})^{−1} at p.
pub fn local_zeta(place: crate::symalg::Place, s: Complex64) -> Result<ComplexValue, SpecError> {
    match place {
        crate::symalg::Place::Infty => gamma_r(s),
        crate::symalg::Place::Prime(p) => {
            let d = 1.0 - (-s * (p as f64).ln()).exp();
            if d.norm() < 1e-15 {
                return Err(SpecError::PoleAt(s));
            }
            let v = 1.0 / d;
            Ok(ComplexValue::new(v, 4.0 * EPS * v.norm() * (1.0 + s.norm())))
        }
    }
}

/// c(s) = ζ*(s)/ζ*(s+1).
pub fn c_factor(s: Complex64) -> Result<ComplexValue, SpecError> {
    if s == Complex64::new(0.0, 0.0) {
        return Ok(ComplexValue::new(Complex64::new(-1.0, 0.0), 0.0));
    }
    if s == Complex64::new(-1.0, 0.0) {
        return Ok(ComplexValue::new(Complex64::new(0.0, 0.0), 0.0));
    }
    let a = zeta_star(s)?;
    let b = zeta_star(s + 1.0)?;
    let v = a.value() / b.value();
    let err = (a.abs_err_estimate + v.norm() * b.abs_err_estimate) / b.value().norm();
    Ok(ComplexValue::new(v, err))
}

/// K_ν(x) for x > 0 and complex ν, from
/// `K_ν(x) = ½ ∫_ℝ exp(−x cosh u + νu) du` along `u = t + iβ`.
pub fn bessel_k(nu: Complex64, x: f64) -> Result<ComplexValue, SpecError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecError::Domain("bessel_k needs x > 0"));
    }
    let b = nu.im.abs();
    let delta = if b > 0.0 { (3.0 / b).min(PI / 2.0) } else { PI / 2.0 };
    let saddle = (nu / x).asinh().im;
    let cap = PI / 2.0 - delta;
    let beta = saddle.clamp(-cap, cap);
    let (sb, cb) = beta.sin_cos();
    let a = nu.re;
    let real_exp = |t: f64| -x * cb * t.cosh() + a * t;
    let peak = (a / (x * cb)).asinh();
    let top = real_exp(peak);
    let edge = |dir: f64| {
        let mut step = 0.5;
        let mut t = peak;
        while real_exp(t + dir * step) > top - 40.0 {
            t += dir * step;
            step *= 1.5;
        }
        let (mut lo, mut hi) = (t, t + dir * step);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if real_exp(mid) > top - 40.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    };
    let left = edge(-1.0);
    let right = edge(1.0);
    let iu = Complex64::new(0.0, beta);
    let f = |t: f64| {
        let ch = Complex64::new(t.cosh() * cb, t.sinh() * sb);
        (-x * ch + nu * (t + iu)).exp()
    };
    let mut h = 0.25f64.min((right - left) / 16.0);
    let trapezoid = |h: f64, offset: f64| {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut mag = 0.0;
        let mut t = left + offset;
        while t <= right {
            let v = f(t);
            sum += v;
            mag += v.norm();
            t += h;
        }
        (sum * h, mag * h)
    };
    let (mut total, mut mag) = trapezoid(h, 0.0);
    for _ in 0..14 {
        let (mid, mid_mag) = trapezoid(h, h / 2.0);
        let next = 0.5 * (total + mid);
        let next_mag = 0.5 * (mag + mid_mag);
        let diff = (next - total).norm();
        h /= 2.0;
        total = next;
        mag = next_mag;
        let floor = 64.0 * EPS * mag;
        if diff <= 1e-14 * total.norm() || diff <= floor {
            let v = 0.5 * total;
            let err = 0.5 * diff.max(floor) + 4.0 * EPS * v.norm();
            return Ok(ComplexValue::new(v, err));
        }
    }
    Err(SpecError::NoConvergence)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    /// Stirling series after shifting the argument to Re z ≥ 30.
    fn ln_gamma_stirling(z: Complex64) -> Complex64 {
        let mut shift = Complex64::new(0.0, 0.0);
        let mut w = z;
        while w.re < 30.0 {
            shift += w.ln();
            w += 1.0;
        }
        let inv = 1.0 / w;
        let inv2 = inv * inv;
        let series = inv
            * (1.0 / 12.0
                + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 + inv2 * (-1.0 / 1680.0 + inv2 * (1.0 / 1188.0)))));
        (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(c(1.0, 0.0)).unwrap().re - 1.0).abs() < 1e-15);
        assert!((gamma(c(0.5, 0.0)).unwrap().re - PI.sqrt()).abs() < 1e-14);
        assert!(matches!(gamma(c(-3.0, 0.0)), Err(SpecError::PoleAt(_))));
        assert!(matches!(gamma(c(0.0, 0.0)), Err(SpecError::PoleAt(_))));
        for z in [c(0.5, 14.1347), c(3.3, -7.0), c(-2.5, 1.0), c(20.0, 30.0), c(0.1, 0.0)] {
            let got = gamma(z).unwrap().value();
            let want = ln_gamma_stirling(z).exp();
            assert!(rel(got, want) < 1e-11, "{z}: {got} vs {want}");
        }
        let g = gamma(c(-0.5, 0.0)).unwrap();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn zeta_values() {
        assert!((zeta(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-12);
        assert!((zeta(c(0.0, 0.0)).unwrap().re + 0.5).abs() < 1e-13);
        assert!((zeta(c(-1.0, 0.0)).unwrap().re + 1.0 / 12.0).abs() < 1e-13);
        assert!(zeta(c(-4.0, 0.0)).unwrap().value().norm() < 1e-13);
        let apery: f64 = 2.5
            * (1..40)
                .map(|k| {
                    let kf = k as f64;
                    let binom = (1..=k).fold(1.0, |acc, j| acc * (k + j) as f64 / j as f64);
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    sign / (kf * kf * kf * binom)
                })
                .sum::<f64>();
        assert!((zeta(c(3.0, 0.0)).unwrap().re - apery).abs() < 1e-12);
        for t in [14.134_725_141_734_694, 21.022_039_638_771_555, 49.773_832_477_672_3] {
            assert!(zeta(c(0.5, t)).unwrap().value().norm() < 1e-9, "zero at {t}");
        }
        assert!(matches!(zeta(c(1.0, 0.0)), Err(SpecError::PoleAt(_))));
    }

    #[test]
    fn eta_series_agrees_with_euler_maclaurin() {
        for s in [c(0.5, 3.0), c(2.0, 45.0), c(0.1, -30.0), c(3.0, 1.0), c(1.0, 9.0)] {
            let a = zeta(s).unwrap().value();
            let b = zeta_euler_maclaurin(s);
            assert!(rel(a, b) < 1e-10, "{s}: {a} vs {b}");
        }
    }

    #[test]
    fn completed_zeta() {
        assert!((zeta_star(c(2.0, 0.0)).unwrap().re - PI / 6.0).abs() < 1e-12);
        assert!((zeta_star(c(4.0, 0.0)).unwrap().re - PI * PI / 90.0).abs() < 1e-12);
        let w = c(0.3, 2.0);
        assert!(rel(zeta_star(w).unwrap().value(), zeta_star(1.0 - w).unwrap().value()) < 1e-10);
        assert!(matches!(zeta_star(c(0.0, 0.0)), Err(SpecError::PoleAt(_))));
        assert!(matches!(zeta_star(c(1.0, 0.0)), Err(SpecError::PoleAt(_))));
        let near = zeta_star(c(-2.0, 0.0)).unwrap().value();
        assert!(rel(near, zeta_star(c(3.0, 0.0)).unwrap().value()) < 1e-13);
    }

    #[test]
    fn local_factors() {
        use crate::symalg::Place;
        let s = c(2.0, 1.0);
        let v = local_zeta(Place::Prime(2), s).unwrap().value();
        assert!((v * (1.0 - (-s * 2f64.ln()).exp()) - 1.0).norm() < 1e-15);
        assert!((gamma_r(c(1.0, 0.0)).unwrap().re - 1.0).abs() < 1e-14);
        let s = c(0.7, 0.3);
        let prod = c_factor(s).unwrap().value() * c_factor(-s).unwrap().value();
        assert!((prod - 1.0).norm() < 1e-10);
        assert_eq!(c_factor(c(0.0, 0.0)).unwrap().re, -1.0);
    }

    /// K_0 from its power series with the logarithmic term.
    fn k0_series(x: f64) -> f64 {
        let euler_gamma = 0.577_215_664_901_532_9;
        let q = x * x / 4.0;
        let (mut i0, mut rest) = (0.0, 0.0);
        let mut term = 1.0;
        let mut harmonic = 0.0;
        for k in 0..60 {
            if k > 0 {
                term *= q / ((k * k) as f64);
                harmonic += 1.0 / k as f64;
            }
            i0 += term;
            rest += term * harmonic;
        }
        -((x / 2.0).ln() + euler_gamma) * i0 + rest
    }

    #[test]
    fn bessel_k_values() {
        let k = bessel_k(c(0.5, 0.0), 1.0).unwrap().value();
        let want = (PI / 2.0).sqrt() * (-1.0f64).exp();
        assert!((k.re - want).abs() / want < 1e-10);
        let a = bessel_k(c(0.0, 0.7), 2.0).unwrap().value();
        let b = bessel_k(c(0.0, -0.7), 2.0).unwrap().value();
        assert!(rel(a, b) < 1e-12);
        for x in [0.1, 1.0, 3.0] {
            let k = bessel_k(c(0.0, 0.0), x).unwrap().re;
            assert!((k - k0_series(x)).abs() / k < 1e-10, "x = {x}");
        }
        assert!(bessel_k(c(1.0, 0.0), 0.0).is_err());
        assert!(bessel_k(c(1.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn bessel_k_large_imaginary_order() {
        for (nu, x) in [
            (c(0.0, 20.0), 0.05),
            (c(0.0, 20.0), 50.0),
            (c(3.0, 15.0), 0.5),
            (c(20.0, 0.0), 0.05),
        ] {
            let k = bessel_k(nu, x).unwrap();
            let km = bessel_k(-nu, x).unwrap();
            assert!(rel(k.value(), km.value()) < 1e-10, "{nu} {x}");
            assert!(k.abs_err_estimate <= 1e-10 * k.value().norm(), "{nu} {x}: {k:?}");
        }
    }
}
