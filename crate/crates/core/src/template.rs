//! First Fourier coefficients of Eisenstein series built from Satake
//! parameters, and the constant term along the Borel.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use thiserror::Error;

use crate::glcoords::alpha_from_s;
use crate::parabolic::ParabolicData;
use crate::roots::{pair, CartanType, Family, RootError, RootSystem, WeylElement};
use crate::symalg::{Factor, FactorKind, FormulaExpression, LinearForm, Place, ScalarFlag, Symbol, SymbolKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TemplateError {
    #[error("simple root {0} outside the Levi has no s-symbol")]
    MissingSymbol(usize),
    #[error("symbol {0} is used in more than one place")]
    Collision(String),
    #[error("relations are inconsistent: {0}")]
    Inconsistent(String),
    #[error("Levi component {0}: {1}")]
    Component(usize, String),
    #[error("classical coordinates need a type A group, got {0}")]
    NotTypeA(CartanType),
    #[error(transparent)]
    Root(#[from] RootError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Flat,
    Grouped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Hecke,
    Petersson,
}

/// Satake data `μ = Σ s_α ϖ_α + μ(π)` attached to a standard parabolic.
#[derive(Debug, Clone)]
pub struct SatakeAssignment {
    pub parabolic: ParabolicData,
    /// Symbol for each simple root outside the Levi.
    pub s_symbols: BTreeMap<usize, Symbol>,
    /// For each Levi component, the coefficients of μ(π) on the component's
    /// simple roots, listed in the order of `LeviComponent::nodes`.
    pub levi_spectral: Vec<Vec<LinearForm>>,
    pub relations: Vec<LinearForm>,
    /// Name of the cusp form on each Levi component (π, π′, π″, …).
    pub component_labels: Vec<String>,
}

impl SatakeAssignment {
    pub fn new(
        parabolic: ParabolicData,
        s_symbols: BTreeMap<usize, Symbol>,
        levi_spectral: Vec<Vec<LinearForm>>,
        relations: Vec<LinearForm>,
        component_labels: Vec<String>,
    ) -> Result<Self, TemplateError> {
        let a = SatakeAssignment {
            parabolic,
            s_symbols,
            levi_spectral,
            relations,
            component_labels,
        };
        a.validate()?;
        Ok(a)
    }

    /// Default symbols: `s` or `s{k}` off the Levi, `t`, `t′`, … on rank-one
    /// components and `t1, …, t_{m+1}` (with `Σ t_k = 0`) on type A_m.
    pub fn standard(parabolic: ParabolicData) -> Self {
        let sigma = &parabolic.sigma_l_complement;
        let s_symbols = sigma
            .iter()
            .map(|&i| {
                let name = if sigma.len() == 1 {
                    "s".to_string()
                } else {
                    format!("s{}", i + 1)
                };
                (i, Symbol::real(&name))
            })
            .collect();
        let comps = &parabolic.levi_components;
        let count = comps.len();
        let primes = |k: usize| if count == 1 { String::new() } else { "'".repeat(k + 1) };
        let mut levi_spectral = Vec::new();
        let mut relations = Vec::new();
        let mut component_labels = Vec::new();
        for (k, comp) in comps.iter().enumerate() {
            let stem = format!("t{}", primes(k));
            component_labels.push(format!("π{}", primes(k)));
            let rank = comp.nodes.len();
            if comp.cartan_type.family() == Family::A && rank == 1 {
                levi_spectral.push(vec![LinearForm::symbol(Symbol::imag(&stem))]);
            } else if comp.cartan_type.family() == Family::A {
                let t: Vec<LinearForm> = (1..=rank + 1)
                    .map(|j| LinearForm::symbol(Symbol::imag(&format!("{stem}{j}"))))
                    .collect();
                let mut acc = LinearForm::zero();
                let coeffs = t[..rank]
                    .iter()
                    .map(|tj| {
                        acc = acc.clone() + tj.clone();
                        acc.clone()
                    })
                    .collect();
                levi_spectral.push(coeffs);
                relations.push(t.into_iter().fold(LinearForm::zero(), |a, b| a + b));
            } else {
                levi_spectral.push(
                    (1..=rank)
                        .map(|j| LinearForm::symbol(Symbol::imag(&format!("{stem}{j}"))))
                        .collect(),
                );
            }
        }
        SatakeAssignment {
            parabolic,
            s_symbols,
            levi_spectral,
            relations,
            component_labels,
        }
    }

    /// Renames symbols (matched by name) throughout the assignment.
    pub fn rename(&self, renames: &BTreeMap<String, String>) -> Result<Self, TemplateError> {
        let mut map = BTreeMap::new();
        for sym in self.all_symbols() {
            if let Some(new) = renames.get(sym.name()) {
                let target = Symbol::parse(new, sym.is_imaginary())
                    .map_err(|e| TemplateError::Collision(format!("{new}: {e}")))?;
                if target.kind() != sym.kind() {
                    return Err(TemplateError::Collision(format!(
                        "{new} cannot replace {} (different symbol kind)",
                        sym.name()
                    )));
                }
                map.insert(sym.clone(), LinearForm::symbol(target));
            }
        }
        for key in renames.keys() {
            if !self.all_symbols().iter().any(|s| s.name() == key) {
                return Err(TemplateError::Collision(format!("unknown symbol {key}")));
            }
        }
        let sub = |l: &LinearForm| l.substitute(&map);
        let s_symbols = self
            .s_symbols
            .iter()
            .map(|(&i, s)| {
                let t = sub(&LinearForm::symbol(s.clone()));
                let sym = t.terms().next().map(|(x, _)| x.clone()).expect("symbol");
                (i, sym)
            })
            .collect();
        let out = SatakeAssignment {
            parabolic: self.parabolic.clone(),
            s_symbols,
            levi_spectral: self.levi_spectral.iter().map(|c| c.iter().map(sub).collect()).collect(),
            relations: self.relations.iter().map(sub).collect(),
            component_labels: self.component_labels.clone(),
        };
        out.validate()?;
        Ok(out)
    }

    fn all_symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self.s_symbols.values().cloned().collect();
        for comp in &self.levi_spectral {
            let set: BTreeSet<Symbol> = comp.iter().flat_map(|l| l.terms().map(|(s, _)| s.clone())).collect();
            out.extend(set);
        }
        out
    }

    fn validate(&self) -> Result<(), TemplateError> {
        let p = &self.parabolic;
        for &i in &p.sigma_l_complement {
            if !self.s_symbols.contains_key(&i) {
                return Err(TemplateError::MissingSymbol(i + 1));
            }
        }
        if self.levi_spectral.len() != p.levi_components.len() || self.component_labels.len() != p.levi_components.len()
        {
            return Err(TemplateError::Component(
                self.levi_spectral.len(),
                format!("expected {} Levi components", p.levi_components.len()),
            ));
        }
        for (k, (coeffs, comp)) in self.levi_spectral.iter().zip(&p.levi_components).enumerate() {
            if coeffs.len() != comp.nodes.len() {
                return Err(TemplateError::Component(
                    k + 1,
                    format!("{} coefficients for {} simple roots", coeffs.len(), comp.nodes.len()),
                ));
            }
        }
        let mut seen = BTreeSet::new();
        for sym in self.all_symbols() {
            if !seen.insert(sym.name().to_string()) {
                return Err(TemplateError::Collision(sym.name().to_string()));
            }
        }
        let mut reduced: Vec<LinearForm> = Vec::new();
        for rel in &self.relations {
            let r = rel.reduce(&reduced);
            if r.is_constant() && !r.is_zero() {
                return Err(TemplateError::Inconsistent(rel.to_text()));
            }
            if !r.is_zero() {
                reduced.push(r);
            }
        }
        Ok(())
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.parabolic.rs
    }

    /// μ in fundamental-weight coordinates.
    pub fn mu(&self) -> Vec<LinearForm> {
        let mut mu = self.mu_levi();
        for (&i, s) in &self.s_symbols {
            mu[i] = mu[i].clone() + LinearForm::symbol(s.clone());
        }
        mu
    }

    /// μ(π) in fundamental-weight coordinates.
    pub fn mu_levi(&self) -> Vec<LinearForm> {
        let rs = self.root_system();
        let c = rs.cartan_matrix();
        let mut mu = vec![LinearForm::zero(); rs.rank()];
        for (coeffs, comp) in self.levi_spectral.iter().zip(&self.parabolic.levi_components) {
            for (cj, &j) in coeffs.iter().zip(&comp.nodes) {
                for (i, m) in mu.iter_mut().enumerate() {
                    if c[j][i] != 0 {
                        *m = m.clone() + cj.clone() * c[j][i];
                    }
                }
            }
        }
        mu
    }

    /// `⟨μ, α^∨⟩` for the positive root with index `k`, reduced modulo the relations.
    pub fn pairing(&self, k: usize) -> LinearForm {
        let rs = self.root_system();
        pair(&self.mu(), &rs.positive_roots()[k], rs).reduce(&self.relations)
    }

    pub fn pairings_u(&self) -> Vec<(usize, LinearForm)> {
        self.parabolic.delta_u.iter().map(|&k| (k, self.pairing(k))).collect()
    }

    fn label_for(&self, touches: &BTreeSet<usize>, size: usize) -> String {
        let joined = if touches.is_empty() {
            "π".to_string()
        } else {
            touches
                .iter()
                .map(|&c| self.component_labels[c].as_str())
                .collect::<Vec<_>>()
                .join("×")
        };
        let rs = self.root_system();
        if rs.cartan_type().family() == Family::A {
            return joined;
        }
        let levi: Vec<CartanType> = self.parabolic.levi_components.iter().map(|c| c.cartan_type).collect();
        match rep_alias(rs.cartan_type(), &levi, size) {
            Some(alias) => format!("{joined},{alias}"),
            None => format!("{joined},dim{size}"),
        }
    }

    /// One grouped factor per W_L-orbit of Δ_U together with the flat
    /// arguments it stands for.
    pub fn grouped_atoms(&self) -> Vec<(Factor, Vec<LinearForm>)> {
        let orbits = self.parabolic.wl_orbits();
        orbits
            .orbits
            .iter()
            .map(|o| {
                let args: Vec<LinearForm> = o
                    .roots
                    .iter()
                    .map(|&k| self.pairing(k) + Rational64::from_integer(1))
                    .collect();
                let s_part = args[0]
                    .filter_terms(|s| s.kind() != SymbolKind::Spectral)
                    .add_constant(args[0].constant_value());
                let spectral_free = args[0].terms().all(|(s, _)| s.kind() != SymbolKind::Spectral);
                let factor = if o.roots.len() == 1 && spectral_free {
                    Factor::zeta_star(s_part, -1)
                } else {
                    Factor::l_star(s_part, &self.label_for(&o.touches, o.roots.len()), -1)
                };
                (factor, args)
            })
            .collect()
    }

    fn normalization_factors(&self) -> Vec<Factor> {
        self.component_labels
            .iter()
            .map(|l| Factor {
                kind: FactorKind::NormSymbol,
                place: None,
                rep: Some(format!("Ad {l}")),
                argument: LinearForm::int(1),
                exponent: Rational64::new(-1, 2),
            })
            .collect()
    }
}

/// Short names for the Levi representations of the E_8 maximal parabolics.
pub fn rep_alias(group: CartanType, levi: &[CartanType], size: usize) -> Option<&'static str> {
    let e8 = CartanType::new(Family::E, 8).ok()?;
    if group != e8 || levi.len() != 1 {
        return None;
    }
    let l = levi[0];
    match (l.family(), l.rank(), size) {
        (Family::E, 7, 56) => Some("56"),
        (Family::D, 7, 64) => Some("Spin"),
        (Family::D, 7, 14) => Some("Stan"),
        _ => None,
    }
}

pub fn first_coefficient(assign: &SatakeAssignment, mode: Mode, normalization: Normalization) -> FormulaExpression {
    let mut factors: Vec<Factor> = match mode {
        Mode::Flat => assign
            .pairings_u()
            .into_iter()
            .map(|(_, p)| Factor::zeta_star(p + Rational64::from_integer(1), -1))
            .collect(),
        Mode::Grouped => assign.grouped_atoms().into_iter().map(|(f, _)| f).collect(),
    };
    let scalar = match normalization {
        Normalization::Hecke => ScalarFlag::Exact,
        Normalization::Petersson => {
            factors.extend(assign.normalization_factors());
            ScalarFlag::UpToNonzeroConstant
        }
    };
    FormulaExpression::new(factors, scalar)
}

/// Rewrites a type A_{n−1} Borel formula in the parameters α_1, …, α_n
/// (with `s_k = α_k − α_{k+1}` and `Σ α_k = 0`).
pub fn to_alpha_coordinates(expr: &FormulaExpression, n: usize) -> FormulaExpression {
    let alpha = |k: usize| LinearForm::symbol(Symbol::real(&format!("alpha{k}")));
    let map: BTreeMap<Symbol, LinearForm> = (1..n)
        .map(|k| (Symbol::real(&format!("s{k}")), alpha(k) - alpha(k + 1)))
        .collect();
    let rel = vec![(1..=n).fold(LinearForm::zero(), |a, k| a + alpha(k))];
    map_arguments(expr, |l| l.substitute(&map).reduce(&rel), |r| r.to_string())
}

fn map_arguments(
    expr: &FormulaExpression,
    arg: impl Fn(&LinearForm) -> LinearForm,
    rep: impl Fn(&str) -> String,
) -> FormulaExpression {
    let factors = expr
        .factors
        .iter()
        .map(|f| Factor {
            argument: arg(&f.argument),
            rep: f.rep.as_deref().map(&rep),
            ..f.clone()
        })
        .collect();
    FormulaExpression::new(factors, expr.scalar)
}

/// Substitution from root coordinates (s, it, …) to the GL(n) coordinates
/// z_j, v, v_j used for Eisenstein series induced from cusp forms.
pub fn classical_substitution(assign: &SatakeAssignment) -> Result<BTreeMap<Symbol, LinearForm>, TemplateError> {
    let rs = assign.root_system();
    let ct = rs.cartan_type();
    if ct.family() != Family::A {
        return Err(TemplateError::NotTypeA(ct));
    }
    let n = ct.rank() + 1;
    let sigma = &assign.parabolic.sigma_l_complement;
    let mut parts = Vec::new();
    let mut prev = 0;
    for &i in sigma.iter().chain(std::iter::once(&(n - 1))) {
        parts.push((i + 1 - prev) as i64);
        prev = i + 1;
    }
    let r = parts.len();
    let z = |j: usize| LinearForm::symbol(Symbol::real(&format!("z{j}")));
    let z_last =
        (1..r).fold(LinearForm::zero(), |acc, j| acc + z(j) * parts[j - 1]) * Rational64::new(-1, parts[r - 1]);
    let zz = |j: usize| if j == r { z_last.clone() } else { z(j) };
    let mut map = BTreeMap::new();
    for (j, &i) in sigma.iter().enumerate() {
        let sym = assign.s_symbols[&i].clone();
        map.insert(sym, zz(j + 1) - zz(j + 2));
    }
    let comps = &assign.parabolic.levi_components;
    let many = comps.len() > 1;
    for (k, (comp, coeffs)) in comps.iter().zip(&assign.levi_spectral).enumerate() {
        let primes = if many { "'".repeat(k + 1) } else { String::new() };
        let m = comp.nodes.len() + 1;
        let mut symbols: Vec<Symbol> = Vec::new();
        for c in coeffs {
            for (s, _) in c.terms() {
                if !symbols.contains(s) {
                    symbols.push(s.clone());
                }
            }
        }
        if let Some(rel) = assign
            .relations
            .iter()
            .find(|r| r.terms().any(|(s, _)| symbols.contains(s)))
        {
            for (s, _) in rel.terms() {
                if !symbols.contains(s) {
                    symbols.push(s.clone());
                }
            }
        }
        if m == 2 {
            let v = LinearForm::symbol(Symbol::real(&format!("v{primes}")));
            for s in symbols {
                map.insert(s, v.clone());
            }
            continue;
        }
        let inv_m = Rational64::new(1, m as i64);
        let vs: Vec<LinearForm> = (1..m)
            .map(|j| LinearForm::symbol(Symbol::real(&format!("v{primes}{j}"))) + inv_m)
            .collect();
        let params = alpha_from_s(m, &vs).map_err(|e| TemplateError::Component(k + 1, e.to_string()))?;
        if symbols.len() != m {
            return Err(TemplateError::Component(
                k + 1,
                "classical coordinates need the standard spectral symbols".to_string(),
            ));
        }
        for (s, a) in symbols.into_iter().zip(params.alpha) {
            map.insert(s, a);
        }
    }
    Ok(map)
}

pub fn classical_label(label: &str) -> String {
    label
        .replace("π'''", "φ3")
        .replace("π''", "φ2")
        .replace("π'", "φ1")
        .replace('π', "φ")
}

/// Rewrites a formula produced from `assign` in classical GL(n) coordinates.
pub fn to_classical(expr: &FormulaExpression, assign: &SatakeAssignment) -> Result<FormulaExpression, TemplateError> {
    let map = classical_substitution(assign)?;
    Ok(map_arguments(expr, |l| l.substitute(&map), classical_label))
}

/// Term `c(w) Φ_{wλ}` of the constant term.
#[derive(Debug, Clone)]
pub struct ConstantTerm {
    pub weyl: WeylElement,
    pub coefficient: FormulaExpression,
    pub exponent: Vec<LinearForm>,
}

#[derive(Debug, Clone)]
pub struct ConstantTermExpansion {
    pub terms: Vec<ConstantTerm>,
}

pub fn constant_term(rs: &RootSystem, lam: &[LinearForm], cap: u64) -> Result<ConstantTermExpansion, TemplateError> {
    let elements = rs.enumerate_weyl(cap)?;
    let pairings: Vec<LinearForm> = rs.positive_roots().iter().map(|a| pair(lam, a, rs)).collect();
    let terms = elements
        .into_iter()
        .map(|w| {
            let factors = w
                .inversions()
                .into_iter()
                .map(|k| Factor::c_factor(pairings[k].clone()))
                .collect();
            let exponent = rs.apply_generic(&w, lam);
            ConstantTerm {
                weyl: w,
                coefficient: FormulaExpression::new(factors, ScalarFlag::Exact),
                exponent,
            }
        })
        .collect();
    Ok(ConstantTermExpansion { terms })
}

/// Replaces each `c(x)` by `ζ*(x) ζ*(x+1)^{-1}`.
pub fn expand_c_factors(expr: &FormulaExpression) -> FormulaExpression {
    let mut out = Vec::new();
    for f in &expr.factors {
        if f.kind == FactorKind::CFactor {
            let mut a = Factor::zeta_star(f.argument.clone(), 1);
            a.exponent = f.exponent;
            let mut b = Factor::zeta_star(f.argument.clone() + Rational64::from_integer(1), 1);
            b.exponent = -f.exponent;
            out.push(a);
            out.push(b);
        } else {
            out.push(f.clone());
        }
    }
    FormulaExpression::new(out, expr.scalar)
}

fn local_product(assign: &SatakeAssignment, roots: &[usize], mu: &[LinearForm], exponent: i64) -> FormulaExpression {
    let rs = assign.root_system();
    let factors = roots
        .iter()
        .map(|&k| {
            let arg = pair(mu, &rs.positive_roots()[k], rs).reduce(&assign.relations) + Rational64::from_integer(1);
            Factor::local_zeta(None, arg, exponent)
        })
        .collect();
    FormulaExpression::new(factors, ScalarFlag::Exact)
}

/// Checks `N_v^L(μ(π)) / N_v(μ) = Π_{α∈Δ_U} ζ_v(⟨μ,α^∨⟩+1)^{-1}` as formal products.
pub fn minimal_hecke_ratio_check(assign: &SatakeAssignment) -> bool {
    let p = &assign.parabolic;
    let all: Vec<usize> = (0..p.rs.positive_roots().len()).collect();
    let levi_side = local_product(assign, &p.delta_l, &assign.mu_levi(), 1);
    let full = local_product(assign, &all, &assign.mu(), -1);
    let lhs = levi_side.multiply(&full);
    let rhs = local_product(assign, &p.delta_u, &assign.mu(), -1);
    lhs == rhs
        && lhs
            .factors
            .iter()
            .all(|f| f.place.is_none() && f.kind == FactorKind::LocalZeta)
}

/// Specializes local factors at a place.
pub fn at_place(expr: &FormulaExpression, place: Place) -> FormulaExpression {
    let factors = expr
        .factors
        .iter()
        .map(|f| Factor {
            place: if f.kind == FactorKind::LocalZeta {
                Some(place)
            } else {
                f.place
            },
            ..f.clone()
        })
        .collect();
    FormulaExpression::new(factors, expr.scalar)
}
