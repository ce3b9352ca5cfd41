//! Exact linear forms in formal symbols and canonical products of
//! ζ*/L*-type factors.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::rational_to_f64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymalgError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid symbol name `{0}`")]
    InvalidSymbol(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("rational out of range")]
    Overflow,
    #[error("factor exponent must be nonzero")]
    ZeroExponent,
    #[error("unknown factor kind `{0}`")]
    UnknownKind(String),
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("ζ* factors carry no representation label")]
    RepOnZeta,
    #[error("unknown scalar flag `{0}`")]
    UnknownScalar(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    SVariable,
    Spectral,
    Classical,
}

/// A formal variable. An imaginary symbol `t` stands for `i·t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    name: String,
    imaginary: bool,
}

struct NameParts<'a> {
    prefix: &'a str,
    primes: usize,
    number: Option<u64>,
    digits: &'a str,
}

fn split_name(name: &str) -> Option<NameParts<'_>> {
    let prefix_end = name
        .char_indices()
        .find(|(_, c)| c.is_ascii_digit() || *c == '\'')
        .map(|(i, _)| i)
        .unwrap_or(name.len());
    let prefix = &name[..prefix_end];
    if prefix.is_empty() || !prefix.chars().all(char::is_alphabetic) {
        return None;
    }
    let rest = &name[prefix_end..];
    let primes = rest.bytes().take_while(|&b| b == b'\'').count();
    let digits = &rest[primes..];
    if !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 9 {
        return None;
    }
    let number = if digits.is_empty() {
        None
    } else {
        Some(digits.parse().ok()?)
    };
    Some(NameParts {
        prefix,
        primes,
        number,
        digits,
    })
}

impl Symbol {
    /// Panics on a malformed name; use [`Symbol::parse`] for untrusted input.
    pub fn new(name: &str, imaginary: bool) -> Self {
        Self::parse(name, imaginary).expect("malformed symbol name")
    }

    pub fn parse(name: &str, imaginary: bool) -> Result<Self, SymalgError> {
        if split_name(name).is_none() {
            return Err(SymalgError::InvalidSymbol(name.to_string()));
        }
        Ok(Symbol {
            name: name.to_string(),
            imaginary,
        })
    }

    pub fn real(name: &str) -> Self {
        Self::new(name, false)
    }

    pub fn imag(name: &str) -> Self {
        Self::new(name, true)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_imaginary(&self) -> bool {
        self.imaginary
    }

    fn parts(&self) -> NameParts<'_> {
        split_name(&self.name).expect("validated at construction")
    }

    pub fn kind(&self) -> SymbolKind {
        match self.parts().prefix {
            "s" => SymbolKind::SVariable,
            "t" => SymbolKind::Spectral,
            _ => SymbolKind::Classical,
        }
    }

    fn prefix_rank(&self) -> u8 {
        match self.parts().prefix {
            "alpha" => 0,
            "z" => 1,
            "v" => 2,
            _ => 3,
        }
    }

    fn sort_key(&self) -> (SymbolKind, u8, &str, usize, Option<u64>, bool) {
        let p = self.parts();
        (
            self.kind(),
            self.prefix_rank(),
            p.prefix,
            p.primes,
            p.number,
            self.imaginary,
        )
    }

    pub fn to_text(&self) -> String {
        let p = self.parts();
        let base = if p.prefix == "alpha" { "α" } else { p.prefix };
        format!(
            "{}{}{}{}",
            if self.imaginary { "i" } else { "" },
            base,
            "'".repeat(p.primes),
            p.digits
        )
    }

    pub fn to_latex(&self) -> String {
        let p = self.parts();
        let base = match p.prefix {
            "alpha" => "\\alpha".to_string(),
            other if other.chars().count() == 1 => other.to_string(),
            other => format!("\\mathrm{{{other}}}"),
        };
        let sub = match p.digits.len() {
            0 => String::new(),
            1 => format!("_{}", p.digits),
            _ => format!("_{{{}}}", p.digits),
        };
        format!(
            "{}{}{}{}",
            if self.imaginary { "i" } else { "" },
            base,
            "'".repeat(p.primes),
            sub
        )
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.name.cmp(&other.name))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `constant + Σ coef·symbol`, never storing a zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    constant: Rational64,
    terms: BTreeMap<Symbol, Rational64>,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational64) -> Self {
        LinearForm {
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational64::from_integer(c))
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::term(s, Rational64::one())
    }

    pub fn term(s: Symbol, coef: Rational64) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(s, coef);
        }
        LinearForm {
            constant: Rational64::zero(),
            terms,
        }
    }

    pub fn from_parts(constant: Rational64, terms: impl IntoIterator<Item = (Symbol, Rational64)>) -> Self {
        let mut lf = Self::constant(constant);
        for (s, c) in terms {
            lf.add_term(s, c);
        }
        lf
    }

    fn add_term(&mut self, s: Symbol, c: Rational64) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(s).or_insert_with(Rational64::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn checked_add_term(&mut self, s: Symbol, c: Rational64) -> Option<()> {
        if c.is_zero() {
            return Some(());
        }
        let e = self.terms.entry(s.clone()).or_insert_with(Rational64::zero);
        *e = e.checked_add(&c)?;
        if e.is_zero() {
            self.terms.remove(&s);
        }
        Some(())
    }

    pub fn constant_value(&self) -> Rational64 {
        self.constant
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Symbol, &Rational64)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: &Symbol) -> Rational64 {
        self.terms.get(s).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, q: Rational64) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        LinearForm {
            constant: self.constant * q,
            terms: self.terms.iter().map(|(s, c)| (s.clone(), *c * q)).collect(),
        }
    }

    pub fn add_constant(&self, q: Rational64) -> Self {
        let mut r = self.clone();
        r.constant += q;
        r
    }

    /// Keeps only the terms whose symbol satisfies `keep`; the constant is dropped.
    pub fn filter_terms(&self, keep: impl Fn(&Symbol) -> bool) -> Self {
        LinearForm {
            constant: Rational64::zero(),
            terms: self
                .terms
                .iter()
                .filter(|(s, _)| keep(s))
                .map(|(s, c)| (s.clone(), *c))
                .collect(),
        }
    }

    pub fn substitute(&self, map: &BTreeMap<Symbol, LinearForm>) -> Self {
        let mut out = Self::constant(self.constant);
        for (s, c) in &self.terms {
            match map.get(s) {
                Some(repl) => out += repl.scale(*c),
                None => out.add_term(s.clone(), *c),
            }
        }
        out
    }

    /// Evaluates with `value(sym)` giving the real parameter behind each
    /// symbol; imaginary symbols contribute `i·value`.
    pub fn eval(&self, value: impl Fn(&Symbol) -> Complex64) -> Complex64 {
        let mut z = Complex64::new(rational_to_f64(self.constant), 0.0);
        for (s, c) in &self.terms {
            let v = value(s);
            let v = if s.imaginary { v * Complex64::i() } else { v };
            z += v * rational_to_f64(*c);
        }
        z
    }

    /// Representative of `self` modulo the relations `r = 0`, chosen as the
    /// point of smallest support on each line `self + λr`; ties go to the
    /// smaller coefficient mass, then to eliminating the later symbol.
    pub fn reduce(&self, relations: &[LinearForm]) -> Self {
        let mut cur = self.clone();
        for rel in relations {
            if rel.terms.is_empty() {
                continue;
            }
            let mut best: Option<(usize, Rational64, Reverse<Symbol>, LinearForm)> = None;
            for (sym, w) in &rel.terms {
                let lambda = -cur.coefficient(sym) / *w;
                let cand = cur.clone() + rel.scale(lambda);
                let eliminated = rel
                    .terms
                    .keys()
                    .filter(|s| cand.coefficient(s).is_zero())
                    .max()
                    .cloned()
                    .unwrap_or_else(|| sym.clone());
                let mass: Rational64 = cand.terms.values().map(|c| c.abs()).sum();
                let key = (cand.support_len(), mass, Reverse(eliminated));
                let better = match &best {
                    None => true,
                    Some((l, m, e, _)) => key < (*l, *m, e.clone()),
                };
                if better {
                    best = Some((key.0, key.1, key.2, cand));
                }
            }
            cur = best.expect("relation has terms").3;
        }
        cur
    }

    pub fn max_symbol(&self) -> Option<&Symbol> {
        self.terms.keys().next_back()
    }

    pub fn min_symbol(&self) -> Option<&Symbol> {
        self.terms.keys().next()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, c) in &self.terms {
            push_coef_text(&mut out, *c, &s.to_text());
        }
        if !self.constant.is_zero() || out.is_empty() {
            push_const(&mut out, self.constant, false);
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        if !self.constant.is_zero() {
            push_const(&mut out, self.constant, true);
        }
        for (s, c) in &self.terms {
            push_coef_latex(&mut out, *c, &s.to_latex());
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn push_sign(out: &mut String, negative: bool) {
    if negative {
        out.push('-');
    } else if !out.is_empty() {
        out.push('+');
    }
}

fn push_const(out: &mut String, c: Rational64, latex: bool) {
    push_sign(out, c.is_negative());
    let a = c.abs();
    if latex && !a.is_integer() {
        let _ = write!(out, "\\frac{{{}}}{{{}}}", a.numer(), a.denom());
    } else {
        let _ = write!(out, "{a}");
    }
}

fn push_coef_text(out: &mut String, c: Rational64, sym: &str) {
    push_sign(out, c.is_negative());
    let a = c.abs();
    if a.is_one() {
    } else if a.is_integer() {
        let _ = write!(out, "{a}");
    } else {
        let _ = write!(out, "({a})");
    }
    out.push_str(sym);
}

fn push_coef_latex(out: &mut String, c: Rational64, sym: &str) {
    push_sign(out, c.is_negative());
    let a = c.abs();
    if a.is_one() {
    } else if a.is_integer() {
        let _ = write!(out, "{a}");
    } else {
        let _ = write!(out, "\\tfrac{{{}}}{{{}}}", a.numer(), a.denom());
    }
    out.push_str(sym);
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Ord for LinearForm {
    /// Constants first, then by largest symbol, then by smallest symbol
    /// (later first), then term by term from the top, then the constant.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.terms.is_empty(), other.terms.is_empty()) {
            (true, true) => return self.constant.cmp(&other.constant),
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        self.max_symbol()
            .cmp(&other.max_symbol())
            .then_with(|| other.min_symbol().cmp(&self.min_symbol()))
            .then_with(|| {
                let mut a = self.terms.iter().rev();
                let mut b = other.terms.iter().rev();
                loop {
                    match (a.next(), b.next()) {
                        (None, None) => return Ordering::Equal,
                        (None, Some(_)) => return Ordering::Less,
                        (Some(_), None) => return Ordering::Greater,
                        (Some((sa, ca)), Some((sb, cb))) => {
                            let o = sa.cmp(sb).then_with(|| ca.cmp(cb));
                            if o != Ordering::Equal {
                                return o;
                            }
                        }
                    }
                }
            })
            .then_with(|| self.constant.cmp(&other.constant))
    }
}

impl PartialOrd for LinearForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for LinearForm {
    type Output = LinearForm;
    fn add(mut self, rhs: LinearForm) -> LinearForm {
        self += rhs;
        self
    }
}

impl Add<&LinearForm> for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        self.clone() + rhs.clone()
    }
}

impl Add<Rational64> for LinearForm {
    type Output = LinearForm;
    fn add(mut self, rhs: Rational64) -> LinearForm {
        self.constant += rhs;
        self
    }
}

impl AddAssign for LinearForm {
    fn add_assign(&mut self, rhs: LinearForm) {
        self.constant += rhs.constant;
        for (s, c) in rhs.terms {
            self.add_term(s, c);
        }
    }
}

impl Sub for LinearForm {
    type Output = LinearForm;
    fn sub(mut self, rhs: LinearForm) -> LinearForm {
        self -= rhs;
        self
    }
}

impl Sub<&LinearForm> for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self.clone() - rhs.clone()
    }
}

impl Sub<Rational64> for LinearForm {
    type Output = LinearForm;
    fn sub(mut self, rhs: Rational64) -> LinearForm {
        self.constant -= rhs;
        self
    }
}

impl SubAssign for LinearForm {
    fn sub_assign(&mut self, rhs: LinearForm) {
        self.constant -= rhs.constant;
        for (s, c) in rhs.terms {
            self.add_term(s, -c);
        }
    }
}

impl Neg for LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(-Rational64::one())
    }
}

impl Mul<Rational64> for LinearForm {
    type Output = LinearForm;
    fn mul(self, rhs: Rational64) -> LinearForm {
        self.scale(rhs)
    }
}

impl Mul<i64> for LinearForm {
    type Output = LinearForm;
    fn mul(self, rhs: i64) -> LinearForm {
        self.scale(Rational64::from_integer(rhs))
    }
}

pub fn lf_add(a: &LinearForm, b: &LinearForm) -> LinearForm {
    a + b
}

pub fn lf_sub(a: &LinearForm, b: &LinearForm) -> LinearForm {
    a - b
}

pub fn lf_scale(a: &LinearForm, q: Rational64) -> LinearForm {
    a.scale(q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorKind {
    LStar,
    ZetaStar,
    LocalZeta,
    NormSymbol,
    CFactor,
}

impl FactorKind {
    pub fn json_name(self) -> &'static str {
        match self {
            FactorKind::LStar => "L_star",
            FactorKind::ZetaStar => "zeta_star",
            FactorKind::LocalZeta => "local_zeta",
            FactorKind::NormSymbol => "norm_symbol",
            FactorKind::CFactor => "c_factor",
        }
    }

    fn from_json_name(s: &str) -> Result<Self, SymalgError> {
        Ok(match s {
            "L_star" => FactorKind::LStar,
            "zeta_star" => FactorKind::ZetaStar,
            "local_zeta" => FactorKind::LocalZeta,
            "norm_symbol" => FactorKind::NormSymbol,
            "c_factor" => FactorKind::CFactor,
            other => return Err(SymalgError::UnknownKind(other.to_string())),
        })
    }
}

/// Place of a local factor; `None` in a [`Factor`] means a generic place `v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infty,
    Prime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub kind: FactorKind,
    pub place: Option<Place>,
    pub rep: Option<String>,
    pub argument: LinearForm,
    pub exponent: Rational64,
}

impl Factor {
    pub fn zeta_star(argument: LinearForm, exponent: i64) -> Self {
        Factor {
            kind: FactorKind::ZetaStar,
            place: None,
            rep: None,
            argument,
            exponent: Rational64::from_integer(exponent),
        }
    }

    pub fn l_star(argument: LinearForm, rep: &str, exponent: i64) -> Self {
        Factor {
            kind: FactorKind::LStar,
            place: None,
            rep: Some(rep.to_string()),
            argument,
            exponent: Rational64::from_integer(exponent),
        }
    }

    pub fn local_zeta(place: Option<Place>, argument: LinearForm, exponent: i64) -> Self {
        Factor {
            kind: FactorKind::LocalZeta,
            place,
            rep: None,
            argument,
            exponent: Rational64::from_integer(exponent),
        }
    }

    pub fn c_factor(argument: LinearForm) -> Self {
        Factor {
            kind: FactorKind::CFactor,
            place: None,
            rep: None,
            argument,
            exponent: Rational64::one(),
        }
    }

    fn key(&self) -> (FactorKind, &Option<String>, &LinearForm, &Option<Place>) {
        (self.kind, &self.rep, &self.argument, &self.place)
    }

    fn head_text(&self) -> String {
        let arg = self.argument.to_text();
        let place = match self.place {
            None => "v".to_string(),
            Some(Place::Infty) => "∞".to_string(),
            Some(Place::Prime(p)) => p.to_string(),
        };
        let with_rep = |name: &str| match &self.rep {
            Some(r) => format!("{name}({arg},{r})"),
            None => format!("{name}({arg})"),
        };
        match self.kind {
            FactorKind::ZetaStar => with_rep("ζ*"),
            FactorKind::LStar | FactorKind::NormSymbol => with_rep("L*"),
            FactorKind::LocalZeta => match &self.rep {
                Some(_) => with_rep(&format!("L_{place}")),
                None => with_rep(&format!("ζ_{place}")),
            },
            FactorKind::CFactor => with_rep("c"),
        }
    }

    fn head_latex(&self) -> String {
        let arg = self.argument.to_latex();
        let place = match self.place {
            None => "v".to_string(),
            Some(Place::Infty) => "\\infty".to_string(),
            Some(Place::Prime(p)) => p.to_string(),
        };
        let with_rep = |name: &str| match &self.rep {
            Some(r) => format!("{name}({arg},{})", rep_latex(r)),
            None => format!("{name}({arg})"),
        };
        match self.kind {
            FactorKind::ZetaStar => with_rep("\\zeta^*"),
            FactorKind::LStar | FactorKind::NormSymbol => with_rep("L^*"),
            FactorKind::LocalZeta => match &self.rep {
                Some(_) => with_rep(&format!("L_{{{place}}}")),
                None => with_rep(&format!("\\zeta_{{{place}}}")),
            },
            FactorKind::CFactor => with_rep("c"),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = self.head_text();
        if !self.exponent.is_one() {
            let _ = write!(s, "^{}", self.exponent);
        }
        s
    }

    pub fn to_latex(&self) -> String {
        let mut s = self.head_latex();
        if !self.exponent.is_one() {
            let _ = write!(s, "^{{{}}}", self.exponent);
        }
        s
    }
}

fn rep_latex(rep: &str) -> String {
    let mut out = String::new();
    let chars: Vec<char> = rep.chars().collect();
    let mut i = 0;
    let mut after_greek = false;
    while i < chars.len() {
        let c = chars[i];
        match c {
            'π' | 'φ' => {
                out.push_str(if c == 'π' { "\\pi" } else { "\\phi" });
                after_greek = true;
                i += 1;
                continue;
            }
            '×' => out.push_str("\\times"),
            '⊗' => out.push_str("\\otimes"),
            ' ' => out.push_str("\\,"),
            '\'' => {
                out.push('\'');
                i += 1;
                continue;
            }
            d if d.is_ascii_digit() && after_greek => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                if digits.len() == 1 {
                    let _ = write!(out, "_{digits}");
                } else {
                    let _ = write!(out, "_{{{digits}}}");
                }
                after_greek = false;
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                if ends_with_command(&out) {
                    out.push(' ');
                }
                if word.len() == 1 {
                    out.push_str(&word);
                } else {
                    let _ = write!(out, "\\mathrm{{{word}}}");
                }
                after_greek = false;
                continue;
            }
            other => out.push(other),
        }
        after_greek = false;
        i += 1;
    }
    out
}

fn ends_with_command(out: &str) -> bool {
    let tail: String = out.chars().rev().take_while(|c| c.is_ascii_alphabetic()).collect();
    !tail.is_empty() && out[..out.len() - tail.len()].ends_with('\\')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScalarFlag {
    Exact,
    UpToNonzeroConstant,
}

impl ScalarFlag {
    fn json_name(self) -> &'static str {
        match self {
            ScalarFlag::Exact => "exact",
            ScalarFlag::UpToNonzeroConstant => "up_to_nonzero_constant",
        }
    }
}

/// A product of factors raised to rational powers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormulaExpression {
    pub factors: Vec<Factor>,
    pub scalar: ScalarFlag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
}

impl FormulaExpression {
    pub fn new(factors: Vec<Factor>, scalar: ScalarFlag) -> Self {
        FormulaExpression { factors, scalar }.canonicalize()
    }

    pub fn one() -> Self {
        FormulaExpression {
            factors: Vec::new(),
            scalar: ScalarFlag::Exact,
        }
    }

    /// Sorts factors and merges equal ones by adding exponents.
    pub fn canonicalize(&self) -> Self {
        self.try_canonicalize().expect("exponent overflow")
    }

    fn try_canonicalize(&self) -> Option<Self> {
        let mut fs = self.factors.clone();
        fs.sort_by(|a, b| a.key().cmp(&b.key()));
        let mut out: Vec<Factor> = Vec::with_capacity(fs.len());
        for f in fs {
            match out.last_mut() {
                Some(last) if last.key() == f.key() => {
                    last.exponent = last.exponent.checked_add(&f.exponent)?;
                }
                _ => out.push(f),
            }
        }
        out.retain(|f| !f.exponent.is_zero());
        Some(FormulaExpression {
            factors: out,
            scalar: self.scalar,
        })
    }

    pub fn multiply(&self, other: &FormulaExpression) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let scalar = self.scalar.max(other.scalar);
        FormulaExpression { factors, scalar }.canonicalize()
    }

    pub fn inverse(&self) -> Self {
        FormulaExpression {
            factors: self
                .factors
                .iter()
                .map(|f| Factor {
                    exponent: -f.exponent,
                    ..f.clone()
                })
                .collect(),
            scalar: self.scalar,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Latex => self.to_latex(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_text(&self) -> String {
        let body = if self.factors.is_empty() {
            "1".to_string()
        } else {
            self.factors.iter().map(Factor::to_text).collect::<Vec<_>>().join(" · ")
        };
        match self.scalar {
            ScalarFlag::Exact => body,
            ScalarFlag::UpToNonzeroConstant => format!("c0 · {body}"),
        }
    }

    pub fn to_latex(&self) -> String {
        let all_inverse = self.factors.len() > 1 && self.factors.iter().all(|f| f.exponent == -Rational64::one());
        let body = if self.factors.is_empty() {
            "1".to_string()
        } else if all_inverse {
            let inner: String = self.factors.iter().map(Factor::head_latex).collect();
            format!("\\left({inner}\\right)^{{-1}}")
        } else {
            self.factors.iter().map(Factor::to_latex).collect()
        };
        match self.scalar {
            ScalarFlag::Exact => body,
            ScalarFlag::UpToNonzeroConstant => format!("c_0\\,{body}"),
        }
    }

    pub fn to_json(&self) -> String {
        let doc = JsonFormula {
            scalar: self.scalar.json_name().to_string(),
            factors: self.factors.iter().map(JsonFactor::from_factor).collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, SymalgError> {
        let doc: JsonFormula = serde_json::from_str(s).map_err(|e| SymalgError::Json(e.to_string()))?;
        let scalar = match doc.scalar.as_str() {
            "exact" => ScalarFlag::Exact,
            "up_to_nonzero_constant" => ScalarFlag::UpToNonzeroConstant,
            other => return Err(SymalgError::UnknownScalar(other.to_string())),
        };
        let factors = doc
            .factors
            .into_iter()
            .map(JsonFactor::into_factor)
            .collect::<Result<Vec<_>, _>>()?;
        FormulaExpression { factors, scalar }
            .try_canonicalize()
            .ok_or(SymalgError::Overflow)
    }

    /// Argument multiset of the factors of a given kind, each repeated by its
    /// (integer) exponent magnitude.
    pub fn arguments(&self, kind: FactorKind) -> Vec<LinearForm> {
        self.factors
            .iter()
            .filter(|f| f.kind == kind)
            .map(|f| f.argument.clone())
            .collect()
    }
}

pub fn canonicalize(f: &FormulaExpression) -> FormulaExpression {
    f.canonicalize()
}

pub fn render(f: &FormulaExpression, format: Format) -> String {
    f.render(format)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonRational {
    num: i64,
    den: i64,
}

impl JsonRational {
    fn from_q(q: Rational64) -> Self {
        JsonRational {
            num: *q.numer(),
            den: *q.denom(),
        }
    }

    fn into_q(self) -> Result<Rational64, SymalgError> {
        if self.den == 0 {
            return Err(SymalgError::ZeroDenominator);
        }
        if self.num == i64::MIN || self.den == i64::MIN {
            return Err(SymalgError::Overflow);
        }
        Ok(Rational64::new(self.num, self.den))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonTerm {
    sym: String,
    imag: bool,
    coef: JsonRational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonArgument {
    #[serde(rename = "const")]
    constant: JsonRational,
    terms: Vec<JsonTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonPlace {
    Prime(u64),
    Named(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonFactor {
    kind: String,
    place: Option<JsonPlace>,
    rep: Option<String>,
    exponent: JsonRational,
    argument: JsonArgument,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonFormula {
    scalar: String,
    factors: Vec<JsonFactor>,
}

impl JsonFactor {
    fn from_factor(f: &Factor) -> Self {
        JsonFactor {
            kind: f.kind.json_name().to_string(),
            place: f.place.map(|p| match p {
                Place::Infty => JsonPlace::Named("infty".to_string()),
                Place::Prime(p) => JsonPlace::Prime(p),
            }),
            rep: f.rep.clone(),
            exponent: JsonRational::from_q(f.exponent),
            argument: JsonArgument {
                constant: JsonRational::from_q(f.argument.constant),
                terms: f
                    .argument
                    .terms
                    .iter()
                    .map(|(s, c)| JsonTerm {
                        sym: s.name.clone(),
                        imag: s.imaginary,
                        coef: JsonRational::from_q(*c),
                    })
                    .collect(),
            },
        }
    }

    fn into_factor(self) -> Result<Factor, SymalgError> {
        let kind = FactorKind::from_json_name(&self.kind)?;
        let place = match self.place {
            None => None,
            Some(JsonPlace::Named(s)) if s == "infty" => Some(Place::Infty),
            Some(JsonPlace::Named(s)) => return Err(SymalgError::UnknownPlace(s)),
            Some(JsonPlace::Prime(p)) if is_prime(p) => Some(Place::Prime(p)),
            Some(JsonPlace::Prime(p)) => return Err(SymalgError::UnknownPlace(p.to_string())),
        };
        if kind == FactorKind::ZetaStar && self.rep.is_some() {
            return Err(SymalgError::RepOnZeta);
        }
        let exponent = self.exponent.into_q()?;
        if exponent.is_zero() {
            return Err(SymalgError::ZeroExponent);
        }
        let mut argument = LinearForm::constant(self.argument.constant.into_q()?);
        for t in self.argument.terms {
            let sym = Symbol::parse(&t.sym, t.imag)?;
            let c = t.coef.into_q()?;
            argument.checked_add_term(sym, c).ok_or(SymalgError::Overflow)?;
        }
        // guard later arithmetic on parsed data against i64 overflow
        for c in argument.terms.values().chain(std::iter::once(&argument.constant)) {
            c.checked_mul(&Rational64::from_integer(1 << 20))
                .ok_or(SymalgError::Overflow)?;
        }
        Ok(Factor {
            kind,
            place,
            rep: self.rep,
            argument,
            exponent,
        })
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: &str) -> LinearForm {
        LinearForm::symbol(Symbol::real(n))
    }

    fn it(n: &str) -> LinearForm {
        LinearForm::symbol(Symbol::imag(n))
    }

    fn one() -> Rational64 {
        Rational64::one()
    }

    #[test]
    fn cancellation_and_scaling() {
        let a = s("s") + it("t");
        let b = s("s") - it("t");
        assert_eq!(a + b, s("s").scale(Rational64::from_integer(2)));
        assert!(lf_scale(&s("s"), Rational64::zero()).is_zero());
        let f = s("s2") + s("s3") + one();
        assert_eq!(f.to_text(), "s2+s3+1");
    }

    #[test]
    fn symbol_order() {
        let mut v = [
            Symbol::real("z1"),
            Symbol::imag("t3"),
            Symbol::real("s2"),
            Symbol::real("alpha2"),
            Symbol::imag("t'"),
            Symbol::real("v"),
            Symbol::imag("t"),
            Symbol::real("s10"),
        ];
        v.sort();
        let names: Vec<_> = v.iter().map(|s| s.name().to_string()).collect();
        assert_eq!(names, ["s2", "s10", "t", "t3", "t'", "alpha2", "z1", "v"]);
    }

    #[test]
    fn merge_and_cancel() {
        let x = s("s") + one();
        let f = FormulaExpression::new(
            vec![Factor::zeta_star(x.clone(), -1), Factor::zeta_star(x.clone(), -1)],
            ScalarFlag::Exact,
        );
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].exponent, Rational64::from_integer(-2));
        let g = FormulaExpression::new(
            vec![Factor::zeta_star(x.clone(), 1), Factor::zeta_star(x, -1)],
            ScalarFlag::Exact,
        );
        assert!(g.factors.is_empty());
        assert_eq!(g.to_text(), "1");
    }

    fn borel_a2() -> Vec<Factor> {
        let a = |i: usize| s(&format!("alpha{i}"));
        vec![
            Factor::zeta_star(a(1) - a(2) + one(), -1),
            Factor::zeta_star(a(2) - a(3) + one(), -1),
            Factor::zeta_star(a(1) - a(3) + one(), -1),
        ]
    }

    #[test]
    fn borel_latex() {
        let mut fs = borel_a2();
        fs.reverse();
        let f = FormulaExpression::new(fs, ScalarFlag::Exact);
        assert_eq!(
            f.to_latex(),
            "\\left(\\zeta^*(1+\\alpha_1-\\alpha_2)\\zeta^*(1+\\alpha_2-\\alpha_3)\\zeta^*(1+\\alpha_1-\\alpha_3)\\right)^{-1}"
        );
        let g = FormulaExpression::new(borel_a2(), ScalarFlag::Exact);
        assert_eq!(f, g);
    }

    #[test]
    fn parabolic_211_text() {
        let f = FormulaExpression::new(
            vec![
                Factor::zeta_star(s("s3") + one(), -1),
                Factor::l_star(s("s2") + s("s3") + one(), "π", -1),
                Factor::l_star(s("s2") + one(), "π", -1),
            ],
            ScalarFlag::Exact,
        );
        assert_eq!(f.to_text(), "L*(s2+1,π)^-1 · L*(s2+s3+1,π)^-1 · ζ*(s3+1)^-1");
    }

    #[test]
    fn json_round_trip() {
        let mut fs = borel_a2();
        fs.push(Factor {
            kind: FactorKind::NormSymbol,
            place: None,
            rep: Some("Ad π".into()),
            argument: LinearForm::int(1),
            exponent: Rational64::new(-1, 2),
        });
        fs.push(Factor::local_zeta(Some(Place::Prime(5)), it("t") + one(), 1));
        fs.push(Factor::local_zeta(Some(Place::Infty), it("t"), 2));
        let f = FormulaExpression::new(fs, ScalarFlag::UpToNonzeroConstant);
        let j = f.to_json();
        let g = FormulaExpression::from_json(&j).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.to_json(), j);
    }

    #[test]
    fn json_rejects_bad_input() {
        assert!(FormulaExpression::from_json("{").is_err());
        let zero_den = r#"{"scalar":"exact","factors":[{"kind":"zeta_star","place":null,"rep":null,"exponent":{"num":1,"den":0},"argument":{"const":{"num":1,"den":1},"terms":[]}}]}"#;
        assert_eq!(
            FormulaExpression::from_json(zero_den),
            Err(SymalgError::ZeroDenominator)
        );
        let rep_on_zeta = r#"{"scalar":"exact","factors":[{"kind":"zeta_star","place":null,"rep":"π","exponent":{"num":1,"den":1},"argument":{"const":{"num":1,"den":1},"terms":[]}}]}"#;
        assert_eq!(FormulaExpression::from_json(rep_on_zeta), Err(SymalgError::RepOnZeta));
        let bad_sym = r#"{"scalar":"exact","factors":[{"kind":"zeta_star","place":null,"rep":null,"exponent":{"num":1,"den":1},"argument":{"const":{"num":1,"den":1},"terms":[{"sym":"1x","imag":false,"coef":{"num":1,"den":1}}]}}]}"#;
        assert!(matches!(
            FormulaExpression::from_json(bad_sym),
            Err(SymalgError::InvalidSymbol(_))
        ));
    }

    #[test]
    fn reduce_with_trace_relation() {
        let rel = it("t1") + it("t2") + it("t3");
        let x = s("s") - it("t1") - it("t3");
        assert_eq!(x.reduce(std::slice::from_ref(&rel)), s("s") + it("t2"));
        let y = s("s") + it("t3");
        assert_eq!(y.reduce(std::slice::from_ref(&rel)), y);
        let a = |i: usize| s(&format!("alpha{i}"));
        let rel_a = a(1) + a(2) + a(3);
        let z = a(1) + a(2) + one();
        assert_eq!(z.reduce(std::slice::from_ref(&rel_a)), -a(3) + one());
        let w = a(2) - a(3) + one();
        assert_eq!(w.reduce(&[rel_a]), w);
    }

    #[test]
    fn reduce_is_canonical_on_lines() {
        let rel = it("t1") + it("t2") + it("t3");
        let base = s("s") + it("t1") - it("t2");
        for k in -3..=3 {
            let moved = base.clone() + rel.scale(Rational64::from_integer(k));
            assert_eq!(
                moved.reduce(std::slice::from_ref(&rel)),
                base.reduce(std::slice::from_ref(&rel))
            );
        }
    }

    #[test]
    fn text_of_imaginary_and_fractions() {
        let f = s("s") - it("t'") + Rational64::new(-1, 2);
        assert_eq!(f.to_text(), "s-it'-1/2");
        assert_eq!(f.to_latex(), "-\\frac{1}{2}+s-it'");
        let g = s("z1").scale(Rational64::new(3, 2));
        assert_eq!(g.to_text(), "(3/2)z1");
        assert_eq!(LinearForm::zero().to_text(), "0");
    }

    #[test]
    fn rep_label_latex() {
        assert_eq!(rep_latex("π'×π''"), "\\pi'\\times\\pi''");
        assert_eq!(rep_latex("Ad φ1"), "\\mathrm{Ad}\\,\\phi_1");
        assert_eq!(rep_latex("π,Spin"), "\\pi,\\mathrm{Spin}");
    }
}
