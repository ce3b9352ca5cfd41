//! Command-line front end.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;
use thiserror::Error;

use crate::glcoords::{alpha_from_s, classical_parameters, rho_p, GLPartition, MAX_GL_N};
use crate::hecke::{self, borel_eigenvalue, factorize, hecke_shape, parabolic_eigenvalue, EigenvalueQuery, HeckeError};
use crate::parabolic::ParabolicData;
use crate::roots::{CartanType, Family, RootError, RootSystem};
use crate::specfun::{self, ComplexValue};
use crate::symalg::{Format, FormulaExpression, LinearForm, Place, Symbol};
use crate::template::{
    constant_term, expand_c_factors, first_coefficient, to_alpha_coordinates, to_classical, Mode, Normalization,
    SatakeAssignment,
};
use crate::verify;
use crate::whittaker::{
    jacquet_sl2_closed_form, jacquet_sl2_quadrature, whittaker_padic, whittaker_sl2_arch, TorusPoint, WhittakerError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("{0} verification check(s) failed")]
    Mismatch(usize),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) | CliError::Io(_) => EXIT_NUMERIC,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

impl From<RootError> for CliError {
    fn from(e: RootError) -> Self {
        match e {
            RootError::CapExceeded(_) => numeric(e),
            other => usage(other),
        }
    }
}

impl From<WhittakerError> for CliError {
    fn from(e: WhittakerError) -> Self {
        match e {
            WhittakerError::Dimension(_) => usage(e),
            WhittakerError::Root(r) => r.into(),
            other => numeric(other),
        }
    }
}

impl From<HeckeError> for CliError {
    fn from(e: HeckeError) -> Self {
        match e {
            HeckeError::Callback(_) => numeric(e),
            other => usage(other),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "eisenstein",
    version,
    about = "First Fourier coefficients of Eisenstein series and related numerics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// First Fourier coefficient of a (cuspidal) Eisenstein series
    FirstCoeff(FirstCoeffArgs),
    /// Constant term along the Borel as a sum over the Weyl group
    ConstantTerm(ConstantTermArgs),
    /// Langlands parameters of a GL(n) Eisenstein series
    Params(ParamsArgs),
    /// Hecke eigenvalues as divisor sums
    Hecke(HeckeArgs),
    /// p-adic spherical Whittaker function (Casselman-Shalika)
    WhittakerP(WhittakerPArgs),
    /// Canonical archimedean Whittaker function on SL(2)
    WhittakerSl2(WhittakerSl2Args),
    /// Zeta, Gamma, c-function and K-Bessel values
    Zeta(ZetaArgs),
    /// Run a built-in verification suite
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
struct GroupArgs {
    /// Cartan type such as A2, D4, E8
    #[arg(long = "type", value_name = "TYPE")]
    cartan: Option<String>,
    /// GL(n), shorthand for type A(n-1)
    #[arg(long)]
    gln: Option<usize>,
    /// Levi as a partition of n (type A only); empty for the Borel
    #[arg(long, value_name = "n1,n2,...")]
    levi: Option<String>,
    /// Levi as 1-based simple-root indices
    #[arg(long = "levi-nodes", value_name = "i,j,...")]
    levi_nodes: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Flat,
    Grouped,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum NormArg {
    Hecke,
    Petersson,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Latex,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Latex => Format::Latex,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoordsArg {
    Root,
    Classical,
}

#[derive(Debug, Args)]
struct FirstCoeffArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, value_enum, default_value = "grouped")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "hecke")]
    normalization: NormArg,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Root-system parameters or GL(n) coordinates (default: GL(n) for type A Borel, root otherwise)
    #[arg(long, value_enum)]
    coords: Option<CoordsArg>,
    /// Rename symbols, e.g. `t'=u,s=w`
    #[arg(long, value_name = "old=new,...")]
    symbols: Option<String>,
}

#[derive(Debug, Args)]
struct ConstantTermArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, default_value_t = 100_000)]
    cap: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write c(x) as ζ*(x)/ζ*(x+1)
    #[arg(long)]
    expand: bool,
}

#[derive(Debug, Args)]
struct ParamsArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct HeckeArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    m: Option<u64>,
    /// Langlands parameters of a Borel Eisenstein series
    #[arg(long, allow_hyphen_values = true, value_name = "a1,a2,...")]
    alpha: Option<String>,
    /// Parameters z_1,...,z_r (or z_1,...,z_{r-1}) of a parabolic series
    #[arg(long, allow_hyphen_values = true, value_name = "z1,...")]
    z: Option<String>,
    /// Langlands parameters of each Levi block, blocks separated by `;`
    #[arg(long, allow_hyphen_values = true, value_name = "a,b;c,d;...")]
    lambda: Option<String>,
}

#[derive(Debug, Args)]
struct WhittakerPArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    p: u64,
    /// λ in the fundamental-weight basis
    #[arg(long, allow_hyphen_values = true, value_name = "l1,l2,...")]
    nu: Option<String>,
    /// GL(n) Langlands parameters (alternative to --nu)
    #[arg(long, allow_hyphen_values = true, value_name = "a1,a2,...")]
    alpha: Option<String>,
    /// Torus point as integer coroot coordinates k_i (μ = Σ k_i α_i^∨)
    #[arg(long, allow_hyphen_values = true, value_name = "k1,k2,...")]
    cochar: Option<String>,
    /// Torus point as integer coweight coordinates
    #[arg(long, allow_hyphen_values = true, value_name = "m1,m2,...")]
    coweight: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    cap: u64,
}

#[derive(Debug, Args)]
struct WhittakerSl2Args {
    #[arg(long, allow_hyphen_values = true)]
    nu: String,
    #[arg(long)]
    y: f64,
    /// Also print the Jacquet integral by quadrature and in closed form
    #[arg(long)]
    quadrature: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FnArg {
    Zeta,
    ZetaStar,
    Gamma,
    GammaR,
    C,
    Local,
    BesselK,
}

#[derive(Debug, Args)]
struct ZetaArgs {
    #[arg(long = "fn", value_enum, default_value = "zeta-star")]
    function: FnArg,
    /// Argument s
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Prime for --fn local (omit for the archimedean factor)
    #[arg(long)]
    p: Option<u64>,
    /// Order for --fn bessel-k
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
    /// Argument x for --fn bessel-k
    #[arg(long = "y", allow_hyphen_values = true)]
    y: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Paper,
    Properties,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "paper")]
    suite: SuiteArg,
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
}

/// Parses a complex number such as `0.5`, `-2i`, `1.5-0.25i` or `i`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty number".to_string());
    }
    let fixed = match t.as_str() {
        "i" | "+i" => "1i".to_string(),
        "-i" => "-1i".to_string(),
        _ => t.replace("+i", "+1i").replace("-i", "-1i"),
    };
    let z = Complex64::from_str(&fixed).map_err(|_| format!("cannot parse complex number `{s}`"))?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(format!("non-finite number `{s}`"));
    }
    Ok(z)
}

/// Comma-separated complex numbers.
pub fn parse_complex_list(s: &str) -> Result<Vec<Complex64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_complex).collect()
}

/// Comma-separated integers.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("cannot parse integer `{t}`"))
        })
        .collect()
}

/// `old=new` pairs separated by commas.
pub fn parse_symbol_map(s: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for pair in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (a, b) = pair
            .split_once('=')
            .ok_or_else(|| format!("expected old=new, got `{pair}`"))?;
        let (a, b) = (a.trim(), b.trim());
        if a.is_empty() || b.is_empty() {
            return Err(format!("empty symbol name in `{pair}`"));
        }
        if out.insert(a.to_string(), b.to_string()).is_some() {
            return Err(format!("symbol `{a}` renamed twice"));
        }
    }
    Ok(out)
}

fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".to_string()
        } else {
            s
        }
    } else {
        let mant = mant.trim_end_matches('0').trim_end_matches('.');
        format!("{mant}e{exp}")
    }
}

/// Formats with 12 significant digits, dropping a component that is below
/// rounding level relative to the other.
pub fn fmt_complex(z: Complex64) -> String {
    let scale = z.norm();
    let re = if z.re.abs() <= 1e-14 * scale { 0.0 } else { z.re };
    let im = if z.im.abs() <= 1e-14 * scale { 0.0 } else { z.im };
    match (re == 0.0, im == 0.0) {
        (_, true) => fmt_real(re),
        (true, false) => format!("{}i", fmt_real(im)),
        (false, false) => {
            let sign = if im < 0.0 { "-" } else { "+" };
            format!("{}{}{}i", fmt_real(re), sign, fmt_real(im.abs()))
        }
    }
}

fn fmt_value(v: &ComplexValue) -> String {
    fmt_complex(v.value())
}

struct Group {
    rs: RootSystem,
    levi: BTreeSet<usize>,
    partition: Option<GLPartition>,
}

impl Group {
    fn type_a_n(&self) -> Option<usize> {
        let ct = self.rs.cartan_type();
        (ct.family() == Family::A).then(|| ct.rank() + 1)
    }

    fn gl_partition(&self) -> Result<GLPartition, CliError> {
        if let Some(p) = &self.partition {
            return Ok(p.clone());
        }
        let n = self
            .type_a_n()
            .ok_or_else(|| usage("this subcommand needs a type A group (--gln or --type A<r>)"))?;
        if !self.levi.is_empty() {
            return Err(usage("give the Levi as a partition with --levi"));
        }
        Ok(GLPartition::borel(n))
    }
}

fn resolve_group(g: &GroupArgs) -> Result<Group, CliError> {
    let ct: CartanType = match (&g.cartan, g.gln) {
        (Some(_), Some(_)) => return Err(usage("use only one of --type and --gln")),
        (None, None) => return Err(usage("missing --type or --gln")),
        (Some(t), None) => t.parse().map_err(usage)?,
        (None, Some(n)) => {
            if !(2..=MAX_GL_N).contains(&n) {
                return Err(usage(format!("--gln must be between 2 and {MAX_GL_N}")));
            }
            CartanType::new(Family::A, n - 1)?
        }
    };
    if ct.family() == Family::A && ct.rank() + 1 > MAX_GL_N {
        return Err(usage(format!("type A rank above {}", MAX_GL_N - 1)));
    }
    let rank = ct.rank();
    let rs = RootSystem::new(ct);
    let (levi, partition) = match (&g.levi, &g.levi_nodes) {
        (Some(_), Some(_)) => return Err(usage("use only one of --levi and --levi-nodes")),
        (Some(p), None) => {
            if ct.family() != Family::A {
                return Err(usage("--levi takes a partition and needs type A; use --levi-nodes"));
            }
            let part = GLPartition::parse_for(p, rank + 1).map_err(usage)?;
            (part.levi_simples(), Some(part))
        }
        (None, Some(nodes)) => {
            let mut set = BTreeSet::new();
            for k in parse_int_list(nodes).map_err(usage)? {
                if k < 1 || k as usize > rank {
                    return Err(usage(format!("Levi node {k} outside 1..={rank}")));
                }
                set.insert(k as usize - 1);
            }
            (set, None)
        }
        (None, None) => (BTreeSet::new(), None),
    };
    Ok(Group { rs, levi, partition })
}

fn first_coeff(args: &FirstCoeffArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let g = resolve_group(&args.group)?;
    let n = g.type_a_n();
    let borel = g.levi.is_empty();
    let parabolic = ParabolicData::new(g.rs, g.levi).map_err(usage)?;
    let mut assign = SatakeAssignment::standard(parabolic);
    if let Some(s) = &args.symbols {
        assign = assign.rename(&parse_symbol_map(s).map_err(usage)?).map_err(usage)?;
    }
    let mode = match args.mode {
        ModeArg::Flat => Mode::Flat,
        ModeArg::Grouped => Mode::Grouped,
    };
    let norm = match args.normalization {
        NormArg::Hecke => Normalization::Hecke,
        NormArg::Petersson => Normalization::Petersson,
    };
    if mode == Mode::Grouped && !borel {
        writeln!(err, "note: grouping: W_L-orbit heuristic")?;
    }
    let mut expr = first_coefficient(&assign, mode, norm);
    let coords = args.coords.unwrap_or(if borel && n.is_some() {
        CoordsArg::Classical
    } else {
        CoordsArg::Root
    });
    if coords == CoordsArg::Classical {
        let n = n.ok_or_else(|| usage("classical coordinates need a type A group"))?;
        expr = if borel {
            to_alpha_coordinates(&expr, n)
        } else {
            to_classical(&expr, &assign).map_err(usage)?
        };
    }
    writeln!(out, "{}", expr.render(args.format.into()))?;
    Ok(())
}

fn s_symbols(rank: usize) -> Vec<LinearForm> {
    if rank == 1 {
        vec![LinearForm::symbol(Symbol::real("s"))]
    } else {
        (1..=rank)
            .map(|k| LinearForm::symbol(Symbol::real(&format!("s{k}"))))
            .collect()
    }
}

fn render_forms(forms: &[LinearForm], format: FormatArg) -> String {
    match format {
        FormatArg::Latex => format!(
            "\\left({}\\right)",
            forms.iter().map(|f| f.to_latex()).collect::<Vec<_>>().join(", ")
        ),
        _ => format!("({})", forms.iter().map(|f| f.to_text()).collect::<Vec<_>>().join(", ")),
    }
}

fn word_text(word: &[usize]) -> String {
    if word.is_empty() {
        "e".to_string()
    } else {
        word.iter().map(|i| format!("s{}", i + 1)).collect::<Vec<_>>().join("·")
    }
}

fn constant_term_cmd(args: &ConstantTermArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = resolve_group(&args.group)?;
    if !g.levi.is_empty() {
        return Err(usage("constant-term works with the Borel; omit --levi"));
    }
    let lam = s_symbols(g.rs.rank());
    let ct = constant_term(&g.rs, &lam, args.cap).map_err(|e| match e {
        crate::template::TemplateError::Root(r) => CliError::from(r),
        other => usage(other),
    })?;
    let coefficient = |f: &FormulaExpression| if args.expand { expand_c_factors(f) } else { f.clone() };
    match args.format {
        FormatArg::Json => {
            let terms: Vec<serde_json::Value> = ct
                .terms
                .iter()
                .map(|t| {
                    let coef: serde_json::Value =
                        serde_json::from_str(&coefficient(&t.coefficient).to_json()).expect("formula json");
                    json!({
                        "weyl": t.weyl.word.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "coefficient": coef,
                        "exponent": t.exponent.iter().map(|f| f.to_text()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string(&json!({ "terms": terms })).expect("json")
            )?;
        }
        format => {
            for t in &ct.terms {
                let c = coefficient(&t.coefficient);
                let c = if c.factors.is_empty() {
                    "1".to_string()
                } else {
                    c.render(format.into())
                };
                writeln!(
                    out,
                    "{}: {} ; {}",
                    word_text(&t.weyl.word),
                    c,
                    render_forms(&t.exponent, format)
                )?;
            }
        }
    }
    Ok(())
}

fn params_cmd(args: &ParamsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = resolve_group(&args.group)?;
    let part = g.gl_partition()?;
    let (alpha, rho) = if part.is_borel() {
        let p = alpha_from_s(part.n(), &s_symbols(part.n() - 1)).map_err(usage)?;
        (p.alpha, None)
    } else {
        let p = classical_parameters(&part).map_err(usage)?;
        (p.alpha, Some(rho_p(&part)))
    };
    match args.format {
        FormatArg::Json => {
            let mut doc = json!({ "alpha": alpha.iter().map(|f| f.to_text()).collect::<Vec<_>>() });
            if let Some(r) = &rho {
                doc["rho_P"] = json!(r.iter().map(|q| q.to_string()).collect::<Vec<_>>());
            }
            writeln!(out, "{}", serde_json::to_string(&doc).expect("json"))?;
        }
        format => {
            writeln!(out, "alpha = {}", render_forms(&alpha, format))?;
            if let Some(r) = rho {
                let forms: Vec<LinearForm> = r.into_iter().map(LinearForm::constant).collect();
                writeln!(out, "rho_P = {}", render_forms(&forms, format))?;
            }
        }
    }
    Ok(())
}

fn hecke_cmd(args: &HeckeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = resolve_group(&args.group)?;
    let part = g.gl_partition()?;
    if part.is_borel() {
        let Some(alpha) = &args.alpha else {
            writeln!(out, "{}", hecke_shape(&part))?;
            return Ok(());
        };
        let alpha = parse_complex_list(alpha).map_err(usage)?;
        if alpha.len() != part.n() {
            return Err(usage(format!("--alpha needs {} values", part.n())));
        }
        let m = args.m.ok_or_else(|| usage("missing --m"))?;
        writeln!(out, "{}", fmt_complex(borel_eigenvalue(&alpha, m)?))?;
        return Ok(());
    }
    if args.alpha.is_some() {
        return Err(usage("--alpha is for the Borel; use --z and --lambda with a Levi"));
    }
    let Some(z) = &args.z else {
        writeln!(out, "{}", hecke_shape(&part))?;
        return Ok(());
    };
    let mut z = parse_complex_list(z).map_err(usage)?;
    let parts = part.parts().to_vec();
    let r = parts.len();
    if z.len() + 1 == r {
        let weighted: Complex64 = z.iter().zip(&parts).map(|(zi, &n)| zi * n as f64).sum();
        z.push(-weighted / parts[r - 1] as f64);
    } else if z.len() != r {
        return Err(usage(format!("--z needs {} or {r} values", r - 1)));
    }
    let blocks: Vec<Vec<Complex64>> = match &args.lambda {
        Some(l) => l
            .split(';')
            .map(parse_complex_list)
            .collect::<Result<_, _>>()
            .map_err(usage)?,
        None => parts.iter().map(|&n| vec![Complex64::new(0.0, 0.0); n]).collect(),
    };
    if blocks.len() != r || blocks.iter().zip(&parts).any(|(b, &n)| b.len() != n) {
        return Err(usage(format!("--lambda needs {r} blocks of sizes {part}")));
    }
    let m = args.m.ok_or_else(|| usage("missing --m"))?;
    let query = EigenvalueQuery { partition: part, m, z };
    let closures: Vec<hecke::BoxedEigenvalue> = blocks
        .into_iter()
        .map(|b| Box::new(move |c: u64| borel_eigenvalue(&b, c)) as hecke::BoxedEigenvalue)
        .collect();
    let refs: Vec<hecke::LeviEigenvalue<'_>> = closures.iter().map(|b| b.as_ref()).collect();
    writeln!(out, "{}", fmt_complex(parabolic_eigenvalue(&query, &refs)?))?;
    Ok(())
}

fn whittaker_p_cmd(args: &WhittakerPArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = resolve_group(&args.group)?;
    if !g.levi.is_empty() {
        return Err(usage("whittaker-p takes no Levi"));
    }
    if factorize(args.p).len() != 1 || factorize(args.p)[0].1 != 1 {
        return Err(usage(format!("--p must be a prime, got {}", args.p)));
    }
    let rank = g.rs.rank();
    let lam = match (&args.nu, &args.alpha) {
        (Some(nu), None) => parse_complex_list(nu).map_err(usage)?,
        (None, Some(a)) => {
            if g.type_a_n().is_none() {
                return Err(usage("--alpha needs a type A group"));
            }
            let a = parse_complex_list(a).map_err(usage)?;
            if a.len() != rank + 1 {
                return Err(usage(format!("--alpha needs {} values", rank + 1)));
            }
            a.windows(2).map(|w| w[0] - w[1]).collect()
        }
        _ => return Err(usage("give exactly one of --nu and --alpha")),
    };
    if lam.len() != rank {
        return Err(usage(format!("--nu needs {rank} values")));
    }
    let point = match (&args.cochar, &args.coweight) {
        (Some(k), None) => {
            let k = parse_int_list(k).map_err(usage)?;
            if k.len() != rank {
                return Err(usage(format!("--cochar needs {rank} values")));
            }
            TorusPoint::from_coroot_ints(&g.rs, &k)?
        }
        (None, Some(m)) => TorusPoint::from_coweight(&g.rs, &parse_int_list(m).map_err(usage)?)?,
        (None, None) => TorusPoint::identity(rank),
        _ => return Err(usage("give at most one of --cochar and --coweight")),
    };
    let v = whittaker_padic(args.p, &lam, &point, &g.rs, args.cap)?;
    writeln!(out, "{}", fmt_value(&v.value))?;
    Ok(())
}

fn whittaker_sl2_cmd(args: &WhittakerSl2Args, out: &mut dyn Write) -> Result<(), CliError> {
    let nu = parse_complex(&args.nu).map_err(usage)?;
    if !(args.y > 0.0) || !args.y.is_finite() {
        return Err(usage("--y must be positive"));
    }
    let w = whittaker_sl2_arch(nu, args.y)?;
    if !args.quadrature {
        writeln!(out, "{}", fmt_value(&w.value))?;
        return Ok(());
    }
    let closed = jacquet_sl2_closed_form(nu, args.y)?;
    let quad = jacquet_sl2_quadrature(nu, args.y)?;
    writeln!(out, "canonical = {}", fmt_value(&w.value))?;
    writeln!(out, "jacquet_closed_form = {}", fmt_value(&closed))?;
    writeln!(out, "jacquet_quadrature = {}", fmt_value(&quad.value))?;
    writeln!(
        out,
        "difference = {}",
        fmt_real((quad.value.value() - closed.value()).norm())
    )?;
    Ok(())
}

fn zeta_cmd(args: &ZetaArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let s = || -> Result<Complex64, CliError> {
        let s = args.s.as_deref().ok_or_else(|| usage("missing --s"))?;
        parse_complex(s).map_err(usage)
    };
    let v = match args.function {
        FnArg::Zeta => specfun::zeta(s()?),
        FnArg::ZetaStar => specfun::zeta_star(s()?),
        FnArg::Gamma => specfun::gamma(s()?),
        FnArg::GammaR => specfun::gamma_r(s()?),
        FnArg::C => specfun::c_factor(s()?),
        FnArg::Local => {
            let place = match args.p {
                Some(p) if factorize(p).len() == 1 && factorize(p)[0].1 == 1 => Place::Prime(p),
                Some(p) => return Err(usage(format!("--p must be a prime, got {p}"))),
                None => Place::Infty,
            };
            specfun::local_zeta(place, s()?)
        }
        FnArg::BesselK => {
            let nu = parse_complex(args.nu.as_deref().ok_or_else(|| usage("missing --nu"))?).map_err(usage)?;
            let x = args.y.ok_or_else(|| usage("missing --y"))?;
            specfun::bessel_k(nu, x)
        }
    }
    .map_err(numeric)?;
    writeln!(out, "{}", fmt_value(&v))?;
    Ok(())
}

fn verify_cmd(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let checks = match args.suite {
        SuiteArg::Paper => verify::worked_examples_suite(),
        SuiteArg::Properties => verify::properties_suite(args.seed),
    };
    let mut failed = 0;
    for c in &checks {
        if c.passed {
            writeln!(out, "PASS {}", c.name)?;
        } else {
            failed += 1;
            writeln!(out, "FAIL {}: {}", c.name, c.detail)?;
        }
    }
    writeln!(out, "{}/{} checks passed", checks.len() - failed, checks.len())?;
    if failed > 0 {
        return Err(CliError::Mismatch(failed));
    }
    Ok(())
}

/// Runs the command line `argv` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::FirstCoeff(a) => first_coeff(a, out, err),
        Command::ConstantTerm(a) => constant_term_cmd(a, out),
        Command::Params(a) => params_cmd(a, out),
        Command::Hecke(a) => hecke_cmd(a, out),
        Command::WhittakerP(a) => whittaker_p_cmd(a, out),
        Command::WhittakerSl2(a) => whittaker_sl2_cmd(a, out),
        Command::Zeta(a) => zeta_cmd(a, out),
        Command::Verify(a) => verify_cmd(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("eisenstein").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_real(1.0000000000000002), "1");
        assert_eq!(fmt_real(-0.25), "-0.25");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(123456.789), "123456.789");
        assert_eq!(fmt_real(2.5e-9), "2.5e-9");
        assert_eq!(fmt_real(6.02e23), "6.02e23");
        assert_eq!(fmt_complex(Complex64::new(1.0, 1e-18)), "1");
        assert_eq!(fmt_complex(Complex64::new(0.5, -2.0)), "0.5-2i");
        assert_eq!(fmt_complex(Complex64::new(0.0, 3.0)), "3i");
    }

    #[test]
    fn parsers() {
        assert_eq!(parse_complex("0.2").unwrap(), Complex64::new(0.2, 0.0));
        assert_eq!(parse_complex("1-2i").unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex(" 0.5 + i ").unwrap(), Complex64::new(0.5, 1.0));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("inf").is_err());
        assert_eq!(parse_int_list("1, -2,3").unwrap(), vec![1, -2, 3]);
        assert!(parse_int_list("1,,2").is_err());
        let m = parse_symbol_map("t'=u, s=w").unwrap();
        assert_eq!(m["t'"], "u");
        assert!(parse_symbol_map("t").is_err());
        assert!(parse_symbol_map("t=a,t=b").is_err());
    }

    #[test]
    fn examples() {
        let (code, out, err) = call(&[
            "first-coeff",
            "--type",
            "A3",
            "--levi",
            "2,2",
            "--mode",
            "grouped",
            "--format",
            "text",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "L*(s+1,π'×π'')^-1\n");
        assert!(err.contains("W_L-orbit heuristic"));
        let (code, out, _) = call(&[
            "whittaker-p",
            "--type",
            "A1",
            "--p",
            "5",
            "--nu",
            "0.2",
            "--cochar",
            "0",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "1\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["first-coeff", "--type", "X9"]).0, EXIT_USAGE);
        assert_eq!(call(&["first-coeff", "--type", "E8", "--levi", "2,2"]).0, EXIT_USAGE);
        assert_eq!(call(&["nonsense"]).0, EXIT_USAGE);
        assert_eq!(
            call(&["constant-term", "--type", "E8", "--cap", "1000"]).0,
            EXIT_NUMERIC
        );
        assert_eq!(call(&["zeta", "--fn", "zeta", "--s", "1"]).0, EXIT_NUMERIC);
        assert_eq!(
            call(&["whittaker-p", "--type", "A1", "--p", "4", "--nu", "0.2"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }
}
