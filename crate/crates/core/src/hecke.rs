//! Hecke eigenvalues `λ((m,1,…,1))` of GL(n) Eisenstein series as divisor sums.

use num_complex::Complex64;
use num_rational::Rational64;
use thiserror::Error;

use crate::glcoords::{rho_p, GLPartition};
use crate::symalg::{LinearForm, Symbol};

pub const MAX_M: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeckeError {
    #[error("m must be between 1 and {MAX_M}, got {0}")]
    Range(u64),
    #[error("Langlands parameters must sum to zero (sum = {0})")]
    NonzeroSum(Complex64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("Levi eigenvalue unavailable: {0}")]
    Callback(String),
}

/// Prime factorization by trial division.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn divisors(m: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(m) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

fn check_m(m: u64) -> Result<(), HeckeError> {
    if m == 0 || m > MAX_M {
        return Err(HeckeError::Range(m));
    }
    Ok(())
}

/// Complete homogeneous symmetric polynomial `h_e(x_1, …, x_n)`.
fn complete_homogeneous(x: &[Complex64], e: usize) -> Complex64 {
    let mut dp = vec![Complex64::new(0.0, 0.0); e + 1];
    dp[0] = Complex64::new(1.0, 0.0);
    for xi in x {
        for d in 1..=e {
            let prev = dp[d - 1];
            dp[d] += prev * xi;
        }
    }
    dp[e]
}

/// `Σ_{c_1⋯c_n = m} c_1^{α_1} ⋯ c_n^{α_n}`.
pub fn borel_eigenvalue(alpha: &[Complex64], m: u64) -> Result<Complex64, HeckeError> {
    check_m(m)?;
    if alpha.is_empty() {
        return Err(HeckeError::Dimension("no Langlands parameters".to_string()));
    }
    let sum: Complex64 = alpha.iter().sum();
    if sum.norm() > 1e-12 {
        return Err(HeckeError::NonzeroSum(sum));
    }
    Ok(multiplicative_sum(alpha, m))
}

fn multiplicative_sum(alpha: &[Complex64], m: u64) -> Complex64 {
    factorize(m)
        .into_iter()
        .map(|(p, e)| {
            let lp = (p as f64).ln();
            let x: Vec<Complex64> = alpha.iter().map(|a| (a * lp).exp()).collect();
            complete_homogeneous(&x, e as usize)
        })
        .product()
}

/// A Hecke eigenvalue request for a GL(n) Eisenstein series induced from the
/// parabolic of `partition`, with parameters `z_i = s_i − ρ_P(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueQuery {
    pub partition: GLPartition,
    pub m: u64,
    pub z: Vec<Complex64>,
}

impl EigenvalueQuery {
    /// Builds a query from the s-parameters of the Eisenstein series.
    pub fn from_s(partition: GLPartition, m: u64, s: &[Complex64]) -> Result<Self, HeckeError> {
        if s.len() != partition.len() {
            return Err(HeckeError::Dimension(format!(
                "{} s-values for {} blocks",
                s.len(),
                partition.len()
            )));
        }
        let rho = rho_p(&partition);
        let z = s
            .iter()
            .zip(rho)
            .map(|(si, r)| si - crate::roots::rational_to_f64(r))
            .collect();
        Ok(EigenvalueQuery { partition, m, z })
    }
}

pub type LeviEigenvalue<'a> = &'a dyn Fn(u64) -> Result<Complex64, HeckeError>;

pub type BoxedEigenvalue = Box<dyn Fn(u64) -> Result<Complex64, HeckeError>>;

/// `Σ_{c_1⋯c_r = m} λ_{φ_1}(c_1) ⋯ λ_{φ_r}(c_r) c_1^{z_1} ⋯ c_r^{z_r}`.
pub fn parabolic_eigenvalue(
    query: &EigenvalueQuery,
    levi_eigs: &[LeviEigenvalue<'_>],
) -> Result<Complex64, HeckeError> {
    check_m(query.m)?;
    let r = query.partition.len();
    if query.z.len() != r || levi_eigs.len() != r {
        return Err(HeckeError::Dimension(format!(
            "partition {} needs {r} z-values and {r} Levi eigenvalue functions",
            query.partition
        )));
    }
    let weighted: Complex64 = query
        .partition
        .parts()
        .iter()
        .zip(&query.z)
        .map(|(&n, z)| z * n as f64)
        .sum();
    if weighted.norm() > 1e-12 {
        return Err(HeckeError::NonzeroSum(weighted));
    }
    let divs = divisors(query.m);
    let mut cache: Vec<Vec<Option<Complex64>>> = vec![vec![None; divs.len()]; r];
    fn rec(
        i: usize,
        rest: u64,
        q: &EigenvalueQuery,
        divs: &[u64],
        eigs: &[LeviEigenvalue<'_>],
        cache: &mut [Vec<Option<Complex64>>],
    ) -> Result<Complex64, HeckeError> {
        let r = q.z.len();
        let term = |c: u64, cache: &mut [Vec<Option<Complex64>>]| -> Result<Complex64, HeckeError> {
            let idx = divs.binary_search(&c).expect("divisor of m");
            if let Some(v) = cache[i][idx] {
                return Ok(v);
            }
            let v = eigs[i](c)? * (q.z[i] * (c as f64).ln()).exp();
            cache[i][idx] = Some(v);
            Ok(v)
        };
        if i + 1 == r {
            return term(rest, cache);
        }
        let mut total = Complex64::new(0.0, 0.0);
        for &c in divs.iter().filter(|&&d| d <= rest && rest.is_multiple_of(d)) {
            let head = term(c, cache)?;
            if head != Complex64::new(0.0, 0.0) {
                total += head * rec(i + 1, rest / c, q, divs, eigs, cache)?;
            }
        }
        Ok(total)
    }
    rec(0, query.m, query, &divs, levi_eigs, &mut cache)
}

/// The exponents `z_1, …, z_r` of the divisor sum written in the independent
/// variables `z_1, …, z_{r−1}` (using `Σ n_i z_i = 0`); for the Borel
/// partition they are `α_1, …, α_n`.
pub fn hecke_exponents(partition: &GLPartition) -> Vec<LinearForm> {
    let r = partition.len();
    if partition.is_borel() {
        return (1..=r)
            .map(|k| LinearForm::symbol(Symbol::real(&format!("alpha{k}"))))
            .collect();
    }
    let parts = partition.parts();
    let z = |j: usize| LinearForm::symbol(Symbol::real(&format!("z{j}")));
    let mut out: Vec<LinearForm> = (1..r).map(z).collect();
    let last = (1..r).fold(LinearForm::zero(), |acc, j| acc + z(j) * parts[j - 1] as i64)
        * Rational64::new(-1, parts[r - 1] as i64);
    out.push(last);
    out
}

/// Text rendering of the divisor-sum shape, e.g.
/// `Σ_{c1c2=m} λ_φ1(c1) λ_φ2(c2) c1^(z1) c2^(-z1)`.
pub fn hecke_shape(partition: &GLPartition) -> String {
    let r = partition.len();
    let exps = hecke_exponents(partition);
    let cuspidal: Vec<usize> = (0..r).filter(|&i| partition.parts()[i] > 1).collect();
    let label = |i: usize| {
        if cuspidal.len() == 1 {
            "φ".to_string()
        } else {
            let pos = cuspidal.iter().position(|&c| c == i).expect("cuspidal block") + 1;
            format!("φ{pos}")
        }
    };
    let vars: String = (1..=r).map(|i| format!("c{i}")).collect();
    let mut s = format!("Σ_{{{vars}=m}}");
    for &i in &cuspidal {
        s.push_str(&format!(" λ_{}(c{})", label(i), i + 1));
    }
    for (i, e) in exps.iter().enumerate() {
        s.push_str(&format!(" c{}^({})", i + 1, e.to_text()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factorization_and_divisors() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(999_983), vec![(999_983, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    /// Direct enumeration of all ordered factorizations.
    fn brute(alpha: &[Complex64], m: u64) -> Complex64 {
        if alpha.len() == 1 {
            return (alpha[0] * (m as f64).ln()).exp();
        }
        (1..=m)
            .filter(|d| m.is_multiple_of(*d))
            .map(|d| (alpha[0] * (d as f64).ln()).exp() * brute(&alpha[1..], m / d))
            .sum()
    }

    #[test]
    fn borel_examples() {
        let a = [c(0.3, 0.1), c(-0.3, -0.1)];
        assert_eq!(borel_eigenvalue(&a, 1).unwrap(), c(1.0, 0.0));
        let v = borel_eigenvalue(&a, 7).unwrap();
        let want = (a[0] * 7f64.ln()).exp() + (a[1] * 7f64.ln()).exp();
        assert!((v - want).norm() < 1e-14);
        let a3 = [c(0.2, 0.5), c(-0.7, 0.1), c(0.5, -0.6)];
        for m in [6, 12, 30, 64, 90] {
            let got = borel_eigenvalue(&a3, m).unwrap();
            assert!((got - brute(&a3, m)).norm() < 1e-10 * (1.0 + got.norm()), "m = {m}");
        }
        let l6 = borel_eigenvalue(&a3, 6).unwrap();
        let l2 = borel_eigenvalue(&a3, 2).unwrap();
        let l3 = borel_eigenvalue(&a3, 3).unwrap();
        assert!((l6 - l2 * l3).norm() < 1e-10);
        assert!(matches!(
            borel_eigenvalue(&[c(1.0, 0.0)], 2),
            Err(HeckeError::NonzeroSum(_))
        ));
        assert!(matches!(borel_eigenvalue(&a, 0), Err(HeckeError::Range(0))));
        assert!(matches!(borel_eigenvalue(&a, MAX_M + 1), Err(HeckeError::Range(_))));
    }

    #[test]
    fn parabolic_22_prime() {
        let part: GLPartition = "2,2".parse().unwrap();
        let z1 = c(0.21, 0.4);
        let q = EigenvalueQuery {
            partition: part,
            m: 5,
            z: vec![z1, -z1],
        };
        let l1 = |n: u64| Ok(c(n as f64 * 0.1, 1.0));
        let l2 = |n: u64| Ok(c(-0.5, n as f64));
        let v = parabolic_eigenvalue(&q, &[&l1, &l2]).unwrap();
        let ln5 = 5f64.ln();
        let l1_at_1 = l1(1).unwrap();
        let l2_at_1 = l2(1).unwrap();
        let exact = l1(5).unwrap() * l2_at_1 * (z1 * ln5).exp() + l1_at_1 * l2(5).unwrap() * (-z1 * ln5).exp();
        assert!((v - exact).norm() < 1e-13);
    }

    #[test]
    fn parabolic_refines_borel() {
        let part: GLPartition = "2,1,1".parse().unwrap();
        let beta = c(0.13, 0.27);
        let z = vec![c(0.1, 0.2), c(-0.35, 0.05), c(0.15, -0.45)];
        let q = EigenvalueQuery {
            partition: part,
            m: 360,
            z: z.clone(),
        };
        let gl2 = move |n: u64| borel_eigenvalue(&[beta, -beta], n);
        let one = |_n: u64| Ok(c(1.0, 0.0));
        let v = parabolic_eigenvalue(&q, &[&gl2, &one, &one]).unwrap();
        let alpha = [beta + z[0], -beta + z[0], z[1], z[2]];
        let w = borel_eigenvalue(&alpha, 360).unwrap();
        assert!((v - w).norm() < 1e-10 * w.norm());
        assert_eq!(
            parabolic_eigenvalue(&EigenvalueQuery { m: 1, ..q.clone() }, &[&gl2, &one, &one]).unwrap(),
            c(1.0, 0.0)
        );
        let failing = |_n: u64| Err(HeckeError::Callback("no data".to_string()));
        assert!(parabolic_eigenvalue(&q, &[&failing, &one, &one]).is_err());
    }

    #[test]
    fn from_s_uses_rho_p() {
        let q = EigenvalueQuery::from_s("2,1".parse().unwrap(), 2, &[c(0.5, 0.0), c(-1.0, 0.0)]).unwrap();
        assert_eq!(q.z, vec![c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn sl4_shapes() {
        let shapes: Vec<String> = ["1,1,1,1", "2,1,1", "2,2", "3,1"]
            .iter()
            .map(|p| hecke_shape(&p.parse().unwrap()))
            .collect();
        assert_eq!(shapes[0], "Σ_{c1c2c3c4=m} c1^(α1) c2^(α2) c3^(α3) c4^(α4)");
        assert_eq!(shapes[1], "Σ_{c1c2c3=m} λ_φ(c1) c1^(z1) c2^(z2) c3^(-2z1-z2)");
        assert_eq!(shapes[2], "Σ_{c1c2=m} λ_φ1(c1) λ_φ2(c2) c1^(z1) c2^(-z1)");
        assert_eq!(shapes[3], "Σ_{c1c2=m} λ_φ(c1) c1^(z1) c2^(-3z1)");
    }
}

#[cfg(test)]
mod gl2_tests {
    use super::*;
    use crate::roots::{CartanType, Family, RootSystem};
    use crate::whittaker::{whittaker_padic, TorusPoint};

    #[test]
    fn gl2_matches_whittaker_at_coweight_one() {
        let rs = RootSystem::new(CartanType::new(Family::A, 1).unwrap());
        for (nu, p) in [
            (Complex64::new(0.17, 0.3), 3u64),
            (Complex64::new(0.0, 2.5), 7),
            (Complex64::new(-0.4, 0.0), 11),
        ] {
            let a = TorusPoint::from_coweight(&rs, &[1]).unwrap();
            let w = whittaker_padic(p, &[nu * 2.0], &a, &rs, 10).unwrap().value.value();
            let lam = borel_eigenvalue(&[nu, -nu], p).unwrap();
            let scaled = w * (p as f64).sqrt();
            assert!((lam - scaled).norm() < 1e-12 * lam.norm().max(1.0), "{lam} vs {scaled}");
        }
    }
}
