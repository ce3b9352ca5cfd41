//! GL(n) coordinates: s-variables, Langlands parameters, parabolic
//! characters ρ_P and power-function exponents.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use thiserror::Error;

use crate::symalg::LinearForm;

pub const MAX_GL_N: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("Σ n_i s_i must vanish, got {0}")]
    NonzeroTrace(String),
    #[error("invalid partition `{0}`")]
    Partition(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLParameters {
    pub n: usize,
    pub alpha: Vec<LinearForm>,
}

impl GLParameters {
    pub fn sum(&self) -> LinearForm {
        self.alpha.iter().fold(LinearForm::zero(), |a, b| a + b.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GLPartition {
    parts: Vec<usize>,
}

impl GLPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self, GlError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(GlError::Partition(format!("{parts:?}")));
        }
        Ok(GLPartition { parts })
    }

    pub fn borel(n: usize) -> Self {
        GLPartition { parts: vec![1; n] }
    }

    /// Parses `2,1,1`; the empty string means the Borel partition of `n`.
    pub fn parse_for(s: &str, n: usize) -> Result<Self, GlError> {
        let p = if s.trim().is_empty() {
            Self::borel(n)
        } else {
            s.parse()?
        };
        if p.n() != n {
            return Err(GlError::Partition(format!("{s} is not a partition of {n}")));
        }
        Ok(p)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_borel(&self) -> bool {
        self.parts.iter().all(|&p| p == 1)
    }

    /// 0-based indices of the simple roots α_{n_1}, α_{n_1+n_2}, … outside the Levi.
    pub fn sigma_nodes(&self) -> Vec<usize> {
        let mut acc = 0;
        let mut out = Vec::new();
        for &p in &self.parts[..self.parts.len() - 1] {
            acc += p;
            out.push(acc - 1);
        }
        out
    }

    pub fn levi_simples(&self) -> BTreeSet<usize> {
        let sigma: BTreeSet<usize> = self.sigma_nodes().into_iter().collect();
        (0..self.n() - 1).filter(|i| !sigma.contains(i)).collect()
    }
}

impl FromStr for GLPartition {
    type Err = GlError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                if t.is_empty() || t.len() > 3 || !t.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(GlError::Partition(s.to_string()));
                }
                t.parse::<usize>().map_err(|_| GlError::Partition(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let p = GLPartition::new(parts)?;
        if p.n() > MAX_GL_N {
            return Err(GlError::Partition(format!("{s}: n above {MAX_GL_N}")));
        }
        Ok(p)
    }
}

impl fmt::Display for GLPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&v.join(","))
    }
}

/// `b_{i,j}` for 1 ≤ i, j ≤ n−1.
pub fn b_coeff(n: usize, i: usize, j: usize) -> i64 {
    if i + j <= n {
        (i * j) as i64
    } else {
        ((n - i) * (n - j)) as i64
    }
}

/// Langlands parameters from the s-variables `s_1, …, s_{n−1}`.
pub fn alpha_from_s(n: usize, s: &[LinearForm]) -> Result<GLParameters, GlError> {
    if n < 2 || s.len() != n - 1 {
        return Err(GlError::Dimension(format!(
            "expected {} s-variables for n = {n}",
            n.saturating_sub(1)
        )));
    }
    let inv_n = Rational64::new(1, n as i64);
    let big_b: Vec<LinearForm> = (1..n)
        .map(|j| {
            (1..n).fold(LinearForm::zero(), |acc, i| {
                acc + (s[i - 1].clone() - inv_n) * b_coeff(n, i, j)
            })
        })
        .collect();
    let b = |j: usize| big_b[j - 1].clone();
    let mut alpha = Vec::with_capacity(n);
    alpha.push(b(n - 1));
    for i in 2..n {
        alpha.push(b(n - i) - b(n - i + 1));
    }
    alpha.push(-b(1));
    Ok(GLParameters { n, alpha })
}

/// `s_i = (α_i − α_{i+1} + 1)/n`.
pub fn s_from_alpha(p: &GLParameters) -> Vec<LinearForm> {
    let inv_n = Rational64::new(1, p.n as i64);
    (0..p.n - 1)
        .map(|i| (p.alpha[i].clone() - p.alpha[i + 1].clone() + Rational64::from_integer(1)) * inv_n)
        .collect()
}

pub fn rho_p(partition: &GLPartition) -> Vec<Rational64> {
    let n = partition.n() as i64;
    let mut before = 0i64;
    partition
        .parts()
        .iter()
        .map(|&nj| {
            let r = Rational64::new(n - nj as i64, 2) - before;
            before += nj as i64;
            r
        })
        .collect()
}

/// Langlands parameters of the Eisenstein series induced from Levi data with
/// parameters `levi_alphas` at the point `s`.
pub fn eisenstein_parameters(
    partition: &GLPartition,
    s: &[LinearForm],
    levi_alphas: &[GLParameters],
) -> Result<GLParameters, GlError> {
    let r = partition.len();
    if s.len() != r || levi_alphas.len() != r {
        return Err(GlError::Dimension(format!(
            "partition {partition} needs {r} s-values and {r} Levi blocks"
        )));
    }
    for (k, (&nk, la)) in partition.parts().iter().zip(levi_alphas).enumerate() {
        if la.alpha.len() != nk {
            return Err(GlError::Dimension(format!(
                "block {} has {} parameters, expected {nk}",
                k + 1,
                la.alpha.len()
            )));
        }
    }
    let trace = partition
        .parts()
        .iter()
        .zip(s)
        .fold(LinearForm::zero(), |acc, (&nk, si)| acc + si.clone() * nk as i64);
    if !trace.is_zero() {
        return Err(GlError::NonzeroTrace(trace.to_text()));
    }
    let rho = rho_p(partition);
    let mut alpha = Vec::with_capacity(partition.n());
    for ((si, la), rk) in s.iter().zip(levi_alphas).zip(&rho) {
        for a in &la.alpha {
            alpha.push(a.clone() + si.clone() - *rk);
        }
    }
    Ok(GLParameters {
        n: partition.n(),
        alpha,
    })
}

/// Exponent of `y_i` (i = 1, …, n−1) in the power function `I(xy, α)`.
pub fn power_function_exponents(p: &GLParameters) -> Vec<LinearForm> {
    let n = p.n;
    let rho = |k: usize| Rational64::new(n as i64 + 1, 2) - k as i64;
    (1..n)
        .map(|i| (1..=n - i).fold(LinearForm::zero(), |acc, k| acc + p.alpha[k - 1].clone() + rho(k)))
        .collect()
}

/// Trivial Levi data: all-zero parameters in each block.
pub fn zero_levi(partition: &GLPartition) -> Vec<GLParameters> {
    partition
        .parts()
        .iter()
        .map(|&k| GLParameters {
            n: k,
            alpha: vec![LinearForm::zero(); k],
        })
        .collect()
}

pub fn is_zero_sum(p: &GLParameters) -> bool {
    p.sum().is_zero()
}

/// Langlands parameters of the Eisenstein series induced from cusp forms on
/// the Levi blocks, in the variables `z_1, …, z_{r−1}` (with `Σ n_i z_i = 0`)
/// and the Levi parameters: `(v, −v)` on a GL(2) block, `alpha_from_s(m, v_j + 1/m)`
/// on a GL(m) block, primed by block when several blocks are cuspidal.
pub fn classical_parameters(partition: &GLPartition) -> Result<GLParameters, GlError> {
    let parts = partition.parts();
    let r = parts.len();
    let sym = |name: String| LinearForm::symbol(crate::symalg::Symbol::real(&name));
    let z_last = (1..r).fold(LinearForm::zero(), |acc, j| {
        acc + sym(format!("z{j}")) * parts[j - 1] as i64
    }) * Rational64::new(-1, parts[r - 1] as i64);
    let z = |j: usize| if j == r { z_last.clone() } else { sym(format!("z{j}")) };
    let rho = rho_p(partition);
    let s: Vec<LinearForm> = (1..=r).map(|j| z(j) + rho[j - 1]).collect();
    let many = parts.iter().filter(|&&m| m > 1).count() > 1;
    let mut cusp = 0;
    let mut levi = Vec::with_capacity(r);
    for &m in parts {
        let alpha = match m {
            1 => vec![LinearForm::zero()],
            _ => {
                cusp += 1;
                let primes = if many { "'".repeat(cusp) } else { String::new() };
                if m == 2 {
                    let v = sym(format!("v{primes}"));
                    vec![v.clone(), -v]
                } else {
                    let inv_m = Rational64::new(1, m as i64);
                    let vs: Vec<LinearForm> = (1..m).map(|j| sym(format!("v{primes}{j}")) + inv_m).collect();
                    alpha_from_s(m, &vs)?.alpha
                }
            }
        };
        levi.push(GLParameters { n: m, alpha });
    }
    eisenstein_parameters(partition, &s, &levi)
}
