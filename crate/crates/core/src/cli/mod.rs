//! Command-line front end: descriptor files and the `lfunc` subcommands.
//!
//! A descriptor file is a list of `key value` lines. `#` starts a comment.
//!
//! ```text
//! # Dedekind zeta of Q(i)
//! digits      30
//! weight      1
//! lambda      0 1
//! conductor   4
//! sign        1
//! pole        0  0.886226925452758013649083741670572591398774728061193564106903894926
//! pole        1 -0.886226925452758013649083741670572591398774728061193564106903894926
//! growth      0.5
//! coeffs      builtin:dedekind-quadratic:-4
//! ```
//!
//! | key | value |
//! |-----|-------|
//! | `digits` | target decimal digits (overridden by `--digits`) |
//! | `weight` | `w` in `s ↦ w − s` |
//! | `lambda` | the shifts `λ_j`, space separated |
//! | `sign` | the root number, or `unknown` |
//! | `conductor` / `A` | exactly one: `N` gives `A = √N / π^{d/2}`, `A` gives it directly |
//! | `pole` | `location residue`, repeatable; `residue` may be `unknown`. Residues are those of `−L*` |
//! | `growth` | `α` with `|a_n| ≤ C n^α` |
//! | `growth_constant` | `C` (default: the largest `|a_n|/n^α` over `n ≤ 100`) |
//! | `coeffs` | coefficient source, see below |
//! | `dual_coeffs`, `dual_conductor`, `dual_A`, `dual_pole` | the dual series and its data |
//!
//! Coefficient sources: `builtin:one`, `builtin:dirichlet:M:χ(1),…,χ(M)`,
//! `builtin:dedekind-quadratic:D`, `builtin:tau`, `file:PATH` (line `n` holds
//! `a_n`, as `re` or `re+imi`), and `eulerfile:PATH` (lines `p c_1 … c_r` for
//! the local factor `1/(1 + c_1 p^{-s} + … + c_r p^{-rs})`). Paths are relative
//! to the descriptor file.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::lseries::{
    CoefficientProvider, DedekindQuadratic, Dirichlet, EulerProduct, ExpFactor, LFunction, LFunctionDescriptor, LValue,
    One, PoleSpec, Table, Tau,
};
use crate::numerics::{format_real, HPComplex, Number, Precision};
use crate::solver;

pub const DEFAULT_DIGITS: u32 = 30;

/// A parsed descriptor file.
#[derive(Clone, Debug)]
pub struct DescriptorFile {
    pub descriptor: LFunctionDescriptor,
    pub digits: Option<u32>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number(line: usize, s: &str) -> Result<Number> {
    s.parse::<Number>()
        .map_err(|_| parse_err(line, format!("cannot parse number `{s}`")))
}

/// Reads and parses a descriptor file.
pub fn load_descriptor(path: &Path) -> Result<DescriptorFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_descriptor(&text, base)
}

#[derive(Default)]
struct Raw {
    digits: Option<u32>,
    weight: Option<Number>,
    lambdas: Option<Vec<Number>>,
    sign: Option<Option<Number>>,
    exp: Option<ExpFactor>,
    poles: Vec<PoleSpec>,
    growth: Option<f64>,
    growth_constant: Option<f64>,
    coeffs: Option<Source>,
    dual_coeffs: Option<Source>,
    dual_exp: Option<ExpFactor>,
    dual_poles: Option<Vec<PoleSpec>>,
}

struct Source {
    provider: Arc<dyn CoefficientProvider>,
    /// Set for builtin sources that come with a natural dual.
    implied_dual: Option<Arc<dyn CoefficientProvider>>,
}

fn set_once<T>(slot: &mut Option<T>, value: T, key: &str, line: usize) -> Result<()> {
    if slot.is_some() {
        return Err(parse_err(line, format!("`{key}` given twice")));
    }
    *slot = Some(value);
    Ok(())
}

fn pole(line: usize, value: &str) -> Result<PoleSpec> {
    let parts: Vec<&str> = value.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(parse_err(line, "`pole` needs a location and a residue"));
    }
    let loc = number(line, parts[0])?;
    Ok(match parts[1] {
        "unknown" => PoleSpec::unknown(loc),
        r => PoleSpec::new(loc, number(line, r)?),
    })
}

fn positive_real(line: usize, key: &str, value: &str) -> Result<Number> {
    let n = number(line, value)?;
    let (re, im) = n.to_f64();
    if im != 0.0 || re <= 0.0 {
        return Err(parse_err(line, format!("`{key}` must be a positive real")));
    }
    Ok(n)
}

fn real_f64(line: usize, key: &str, value: &str) -> Result<f64> {
    let (re, im) = number(line, value)?.to_f64();
    if im != 0.0 {
        return Err(parse_err(line, format!("`{key}` must be real")));
    }
    Ok(re)
}

/// Parses descriptor text; `base` resolves relative coefficient paths.
pub fn parse_descriptor(text: &str, base: &Path) -> Result<DescriptorFile> {
    let mut raw = Raw::default();
    for (idx, full) in text.lines().enumerate() {
        let line = idx + 1;
        let content = full.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = match content.split_once(char::is_whitespace) {
            Some((k, v)) => (k, v.trim()),
            None => return Err(parse_err(line, format!("`{content}` has no value"))),
        };
        match key {
            "digits" => {
                let d = value
                    .parse::<u32>()
                    .ok()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| parse_err(line, "`digits` must be a positive integer"))?;
                set_once(&mut raw.digits, d, key, line)?;
            }
            "weight" => set_once(&mut raw.weight, number(line, value)?, key, line)?,
            "lambda" => {
                let l = value
                    .split_whitespace()
                    .map(|v| number(line, v))
                    .collect::<Result<Vec<_>>>()?;
                set_once(&mut raw.lambdas, l, key, line)?;
            }
            "sign" => {
                let s = match value {
                    "unknown" => None,
                    v => Some(number(line, v)?),
                };
                set_once(&mut raw.sign, s, key, line)?;
            }
            "conductor" => set_once(
                &mut raw.exp,
                ExpFactor::Conductor(positive_real(line, key, value)?),
                "conductor/A",
                line,
            )?,
            "A" => set_once(
                &mut raw.exp,
                ExpFactor::Direct(positive_real(line, key, value)?),
                "conductor/A",
                line,
            )?,
            "dual_conductor" => set_once(
                &mut raw.dual_exp,
                ExpFactor::Conductor(positive_real(line, key, value)?),
                "dual_conductor/dual_A",
                line,
            )?,
            "dual_A" => set_once(
                &mut raw.dual_exp,
                ExpFactor::Direct(positive_real(line, key, value)?),
                "dual_conductor/dual_A",
                line,
            )?,
            "pole" => raw.poles.push(pole(line, value)?),
            "dual_pole" => raw.dual_poles.get_or_insert_with(Vec::new).push(pole(line, value)?),
            "growth" => set_once(&mut raw.growth, real_f64(line, key, value)?, key, line)?,
            "growth_constant" => set_once(&mut raw.growth_constant, real_f64(line, key, value)?, key, line)?,
            "coeffs" => set_once(&mut raw.coeffs, source(line, value, base)?, key, line)?,
            "dual_coeffs" => set_once(&mut raw.dual_coeffs, source(line, value, base)?, key, line)?,
            other => return Err(parse_err(line, format!("unknown key `{other}`"))),
        }
    }

    let missing = |what: &str| parse_err(0, format!("missing `{what}`"));
    let coeffs = raw.coeffs.ok_or_else(|| missing("coeffs"))?;
    let mut desc = LFunctionDescriptor::new(
        coeffs.provider,
        raw.weight.ok_or_else(|| missing("weight"))?,
        raw.lambdas.ok_or_else(|| missing("lambda"))?,
        raw.exp.ok_or_else(|| missing("conductor` or `A"))?,
    )
    .with_sign(raw.sign.ok_or_else(|| missing("sign"))?);
    desc.poles = raw.poles;
    desc.growth = raw.growth.unwrap_or(0.0);
    desc.growth_constant = raw.growth_constant;
    desc.dual_coeffs = raw.dual_coeffs.map(|s| s.provider).or(coeffs.implied_dual);
    desc.dual_exp_factor = raw.dual_exp;
    desc.dual_poles = raw.dual_poles;
    desc.validate()?;
    Ok(DescriptorFile {
        descriptor: desc,
        digits: raw.digits,
    })
}

fn source(line: usize, spec: &str, base: &Path) -> Result<Source> {
    let plain = |p: Arc<dyn CoefficientProvider>| Source {
        provider: p,
        implied_dual: None,
    };
    let wrap = |e: Error| match e {
        Error::Parse { line: inner, message } if inner > 0 => {
            parse_err(line, format!("{spec}: line {inner}: {message}"))
        }
        Error::Parse { message, .. } => parse_err(line, message),
        other => other,
    };
    if let Some(path) = spec.strip_prefix("file:") {
        let p = base.join(path);
        let text = std::fs::read_to_string(&p).map_err(|e| parse_err(line, format!("{}: {e}", p.display())))?;
        let values = parse_coefficient_file(&text).map_err(wrap)?;
        return Ok(plain(Arc::new(Table::new(values, path))));
    }
    if let Some(path) = spec.strip_prefix("eulerfile:") {
        let p = base.join(path);
        let text = std::fs::read_to_string(&p).map_err(|e| parse_err(line, format!("{}: {e}", p.display())))?;
        let factors = parse_euler_file(&text).map_err(wrap)?;
        return Ok(plain(Arc::new(EulerProduct::new(factors, path)?)));
    }
    let Some(builtin) = spec.strip_prefix("builtin:") else {
        return Err(parse_err(line, format!("unknown coefficient source `{spec}`")));
    };
    let mut parts = builtin.splitn(3, ':');
    match (parts.next(), parts.next(), parts.next()) {
        (Some("one"), None, None) => Ok(plain(Arc::new(One))),
        (Some("tau"), None, None) => Ok(plain(Arc::new(Tau::new()))),
        (Some("dedekind-quadratic"), Some(d), None) => {
            let d: i64 = d
                .parse()
                .map_err(|_| parse_err(line, format!("bad discriminant `{d}`")))?;
            Ok(plain(Arc::new(DedekindQuadratic::new(d)?)))
        }
        (Some("dirichlet"), Some(m), Some(vals)) => {
            let m: usize = m.parse().map_err(|_| parse_err(line, format!("bad modulus `{m}`")))?;
            let values = vals.split(',').map(|v| number(line, v)).collect::<Result<Vec<_>>>()?;
            if values.len() != m {
                return Err(parse_err(
                    line,
                    format!("{} character values for modulus {m}", values.len()),
                ));
            }
            let real = values.iter().all(Number::is_real);
            let chi = Dirichlet::new(values)?;
            let dual = if real { None } else { chi.conjugate() };
            Ok(Source {
                provider: Arc::new(chi),
                implied_dual: dual,
            })
        }
        _ => Err(parse_err(line, format!("unknown builtin `{builtin}`"))),
    }
}

/// One coefficient per line: line `n` holds `a_n`. Trailing blank lines are ignored.
pub fn parse_coefficient_file(text: &str) -> Result<Vec<Number>> {
    let lines: Vec<&str> = text.trim_end().lines().collect();
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            if l.trim().is_empty() {
                return Err(parse_err(i + 1, "empty line inside coefficient list"));
            }
            number(i + 1, l)
        })
        .collect()
}

/// Lines `p c_1 … c_r`; `#` comments and blank lines are skipped.
pub fn parse_euler_file(text: &str) -> Result<BTreeMap<u64, Vec<Number>>> {
    let mut out = BTreeMap::new();
    for (i, full) in text.lines().enumerate() {
        let line = i + 1;
        let content = full.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let p: u64 = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| parse_err(line, "expected a prime"))?;
        let c = fields.map(|f| number(line, f)).collect::<Result<Vec<_>>>()?;
        if out.insert(p, c).is_some() {
            return Err(parse_err(line, format!("prime {p} listed twice")));
        }
    }
    Ok(out)
}

/// Parses `a`, `a+bi`, `bi` into a complex at `bits`.
pub fn parse_point(s: &str, bits: u32) -> Result<HPComplex> {
    Ok(s.parse::<Number>()
        .map_err(|_| Error::Unsupported(format!("cannot parse point `{s}`")))?
        .to_hp(bits))
}

/// One CSV row `re(s),im(s),re(L),im(L),est_error`. At a pole the value
/// columns read `pole`.
pub fn csv_row(s: &HPComplex, value: Option<&HPComplex>, est: f64, digits: usize) -> String {
    let (vr, vi) = match value {
        Some(v) => (format_real(v.re(), digits), format_real(v.im(), digits)),
        None => ("pole".into(), "pole".into()),
    };
    format!(
        "{},{},{},{},{:.3e}",
        format_real(s.re(), digits),
        format_real(s.im(), digits),
        vr,
        vi,
        est
    )
}

pub const CSV_HEADER: &str = "re_s,im_s,re_L,im_L,est_error";

#[derive(Debug, Parser)]
#[command(name = "lfunc", version, about = "High-precision L-function evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Descriptor file.
    pub file: PathBuf,
    /// Target decimal digits; overrides the file.
    #[arg(long)]
    pub digits: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the functional equation of the theta series at sample points.
    Check {
        #[command(flatten)]
        common: Common,
        /// Sample point t > 0; repeatable.
        #[arg(long = "t")]
        t: Vec<f64>,
    },
    /// Evaluate L(s) or a derivative.
    Value {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 0)]
        deriv: usize,
    },
    /// Evaluate the k-th derivative of L at s.
    Deriv {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, default_value_t = 1)]
        deriv: usize,
    },
    /// Solve for unknown data: `sign`, `residues`, or `coeffs:p=P:K=K`.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long = "unknown", required = true)]
        unknown: Vec<String>,
        /// Sample points for the linear system; default is a grid on [1.1, 3].
        #[arg(long = "t")]
        t: Vec<f64>,
        /// Do not round recovered coefficients to integers.
        #[arg(long)]
        real: bool,
    },
    /// Tabulate L on a segment as CSV.
    Table {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Number of intervals; `steps + 1` rows are written.
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        deriv: usize,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit status: 0 on success, 1 on a failed check or computation, 2 on bad input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Fail = 1,
    Usage = 2,
}

fn status_of(e: &Error) -> Status {
    match e {
        Error::Parse { .. } | Error::Validation { .. } | Error::Io(_) | Error::UnknownParameter(_) => Status::Usage,
        Error::Unsupported(_) => Status::Usage,
        _ => Status::Fail,
    }
}

fn load(common: &Common) -> Result<(LFunctionDescriptor, Precision)> {
    let file = load_descriptor(&common.file)?;
    let digits = common.digits.or(file.digits).unwrap_or(DEFAULT_DIGITS);
    if digits == 0 {
        return Err(Error::InvalidPrecision("digits must be positive".into()));
    }
    Ok((file.descriptor, Precision::new(digits)))
}

/// Runs a parsed command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Status {
    let result = match &cli.command {
        Command::Check { common, t } => check(common, t),
        Command::Value { common, s, deriv } | Command::Deriv { common, s, deriv } => value(common, s, *deriv),
        Command::Solve {
            common,
            unknown,
            t,
            real,
        } => solve(common, unknown, t, !*real),
        Command::Table {
            common,
            from,
            to,
            steps,
            deriv,
            out: path,
        } => table(common, from, to, *steps, *deriv, path.as_deref()),
    };
    match result {
        Ok((text, status)) => {
            let _ = out.write_all(text.as_bytes());
            status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            status_of(&e)
        }
    }
}

/// Parses `args` and runs; clap's own usage errors map to status 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::Usage as i32 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&cli, &mut stdout.lock(), &mut stderr.lock()) as i32
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

fn check(common: &Common, ts: &[f64]) -> Result<(String, Status)> {
    let (desc, prec) = load(common)?;
    let l = LFunction::prepare(&desc, &prec)?;
    let ts = if ts.is_empty() {
        solver::fresh_samples()
    } else {
        ts.to_vec()
    };
    let tol = 10f64.powf(solver::tolerance_log10(&prec));
    let mut text = String::new();
    let mut ok = true;
    for &t in &ts {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::Unsupported(format!("sample point {t} is not positive")));
        }
        let r = l.feq_residual_f64(t)?;
        let abs = r.value.abs_f64();
        let pass = abs <= tol;
        ok &= pass;
        let _ = writeln!(
            text,
            "t = {t}  residual = {}  terms = {}  {}",
            sci(abs),
            r.terms_used,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(text, "tolerance {}: {}", sci(tol), if ok { "PASS" } else { "FAIL" });
    Ok((text, if ok { Status::Ok } else { Status::Fail }))
}

fn label(k: usize, s: &str) -> String {
    match k {
        0 => format!("L({s})"),
        1 => format!("L'({s})"),
        k => format!("L^({k})({s})"),
    }
}

fn value(common: &Common, s_text: &str, k: usize) -> Result<(String, Status)> {
    let (desc, prec) = load(common)?;
    let l = LFunction::prepare(&desc, &prec)?;
    let s = parse_point(s_text, prec.bits())?;
    let digits = prec.target_digits() as usize;
    let mut text = String::new();
    match l.l_value(&s, k)? {
        LValue::Value(r) => {
            let _ = writeln!(
                text,
                "{} = {} ± {}",
                label(k, s_text),
                r.value.to_string_digits(digits),
                sci(r.est_error)
            );
            let _ = writeln!(text, "terms {}  working digits {}", r.terms_used, r.working_digits_used);
            for w in &r.warnings {
                let _ = writeln!(text, "warning: {w}");
            }
        }
        LValue::Pole(p) => {
            let _ = writeln!(
                text,
                "{} has a pole of order {} at s = {}; leading coefficient {} ± {}",
                label(k, s_text),
                p.order,
                p.location.to_string_digits(digits),
                p.residue.to_string_digits(digits),
                sci(p.est_error)
            );
        }
    }
    Ok((text, Status::Ok))
}

enum Unknown {
    Sign,
    Residues,
    Coeffs { p: u64, k: u32 },
}

fn parse_unknown(spec: &str) -> Result<Unknown> {
    let bad = || Error::Unsupported(format!("unknown `{spec}`: expected sign, residues or coeffs:p=P:K=K"));
    match spec {
        "sign" => return Ok(Unknown::Sign),
        "residues" => return Ok(Unknown::Residues),
        _ => {}
    }
    let rest = spec.strip_prefix("coeffs:").ok_or_else(bad)?;
    let (mut p, mut k) = (None, None);
    for part in rest.split(':') {
        match part.split_once('=') {
            Some(("p", v)) => p = v.parse().ok(),
            Some(("K", v)) => k = v.parse().ok(),
            _ => return Err(bad()),
        }
    }
    Ok(Unknown::Coeffs {
        p: p.ok_or_else(bad)?,
        k: k.ok_or_else(bad)?,
    })
}

fn write_verification(text: &mut String, v: &solver::Verification) -> bool {
    for (t, r) in &v.residuals {
        let _ = writeln!(text, "verify t = {t:.6}  residual = {}", sci(*r));
    }
    let ok = v.passed();
    let _ = writeln!(
        text,
        "tolerance {}: {}",
        sci(v.tolerance),
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn solve(common: &Common, unknowns: &[String], ts: &[f64], integers: bool) -> Result<(String, Status)> {
    let (mut desc, prec) = load(common)?;
    let specs = unknowns.iter().map(|u| parse_unknown(u)).collect::<Result<Vec<_>>>()?;
    let mut bad_prime = None;
    for spec in specs {
        match spec {
            Unknown::Sign => desc.sign = None,
            Unknown::Residues => {
                for p in &mut desc.poles {
                    p.residue = None;
                }
            }
            Unknown::Coeffs { p, k } => {
                if bad_prime.replace((p, k)).is_some() {
                    return Err(Error::Unsupported("one bad prime per run".into()));
                }
            }
        }
    }
    let digits = prec.target_digits() as usize;
    let mut text = String::new();
    if let Some((p, k)) = bad_prime {
        if !desc.unknowns().is_empty() {
            return Err(Error::Unsupported(
                "coefficients are solved with sign and residues known".into(),
            ));
        }
        let sol = solver::solve_bad_prime(&desc, p, k, ts, &prec, integers)?;
        for (e, v) in sol.values.iter().enumerate() {
            let name = format!("a_{}", p.pow(e as u32 + 1));
            match &sol.integers {
                Some(ints) => {
                    let _ = writeln!(text, "{name} = {}  ({})", ints[e], v.to_string_digits(digits));
                }
                None => {
                    let _ = writeln!(text, "{name} = {}", v.to_string_digits(digits));
                }
            }
        }
        let _ = writeln!(
            text,
            "least-squares residual {}  condition 10^{:.1}",
            sci(sol.lsq_residual),
            sol.condition_log10
        );
        for w in &sol.warnings {
            let _ = writeln!(text, "warning: {w}");
        }
        let ok = write_verification(&mut text, &sol.verification);
        return Ok((text, if ok { Status::Ok } else { Status::Fail }));
    }
    let count = desc.unknowns().len();
    if count == 0 {
        return Err(Error::Unsupported("nothing to solve".into()));
    }
    let samples = if ts.is_empty() {
        solver::default_samples(count + 3)
    } else {
        ts.to_vec()
    };
    let sol = solver::solve_sign_residues(&desc, &samples, &prec)?;
    if desc.sign.is_none() {
        let _ = writeln!(text, "sign = {}", sol.sign.to_string_digits(digits));
    }
    for ((loc, r), spec) in sol.residues.iter().zip(&desc.poles) {
        if spec.residue.is_none() {
            let _ = writeln!(
                text,
                "residue at {} = {}",
                loc.to_string_digits(digits.min(6)),
                r.to_string_digits(digits)
            );
        }
    }
    let _ = writeln!(
        text,
        "least-squares residual {}  condition 10^{:.1}",
        sci(sol.lsq_residual),
        sol.condition_log10
    );
    let ok = write_verification(&mut text, &sol.verification);
    Ok((text, if ok { Status::Ok } else { Status::Fail }))
}

/// Evaluates `L^{(k)}` at `steps + 1` evenly spaced points, in parallel,
/// returning rows in order.
pub fn tabulate(
    l: &LFunction,
    from: &HPComplex,
    to: &HPComplex,
    steps: usize,
    k: usize,
) -> Result<Vec<(HPComplex, Option<HPComplex>, f64)>> {
    let points: Vec<HPComplex> = (0..=steps)
        .map(|i| {
            if steps == 0 {
                return from.clone();
            }
            let f = HPComplex::from_i64(from.prec(), i as i64).div_i64(steps as i64);
            from + &(&(to - from) * &f)
        })
        .collect();
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(points.len())
        .max(1);
    let chunk = points.len().div_ceil(workers);
    let results: Vec<Result<Vec<_>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|pts| {
                scope.spawn(move || {
                    pts.iter()
                        .map(|s| match l.l_value(s, k)? {
                            LValue::Value(r) => Ok((s.clone(), Some(r.value), r.est_error)),
                            LValue::Pole(p) => Ok((s.clone(), None, p.est_error)),
                        })
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("table worker panicked"))
            .collect()
    });
    let mut rows = Vec::with_capacity(points.len());
    for r in results {
        rows.extend(r?);
    }
    Ok(rows)
}

fn table(
    common: &Common,
    from: &str,
    to: &str,
    steps: usize,
    k: usize,
    out: Option<&Path>,
) -> Result<(String, Status)> {
    let (desc, prec) = load(common)?;
    let l = LFunction::prepare(&desc, &prec)?;
    let a = parse_point(from, prec.bits())?;
    let b = parse_point(to, prec.bits())?;
    let rows = tabulate(&l, &a, &b, steps, k)?;
    let digits = prec.target_digits() as usize;
    let mut csv = String::new();
    let _ = writeln!(csv, "{CSV_HEADER}");
    for (s, v, est) in &rows {
        let _ = writeln!(csv, "{}", csv_row(s, v.as_ref(), *est, digits));
    }
    match out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok((format!("wrote {} rows to {}\n", rows.len(), path.display()), Status::Ok))
        }
        None => Ok((csv, Status::Ok)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ZETA: &str = "weight 1\nlambda 0\nconductor 1\nsign 1\npole 0 1\npole 1 -1\ncoeffs builtin:one\n";

    #[test]
    fn parses_zeta() {
        let f = parse_descriptor(ZETA, Path::new(".")).unwrap();
        assert_eq!(f.descriptor.d(), 1);
        assert_eq!(f.descriptor.poles.len(), 2);
        assert!(f.digits.is_none());
    }

    #[test]
    fn rejects_unknown_key_with_line() {
        let text = format!("{ZETA}colour blue\n");
        match parse_descriptor(&text, Path::new(".")) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_both_conductor_and_a() {
        let text = format!("{ZETA}A 1\n");
        assert!(matches!(
            parse_descriptor(&text, Path::new(".")),
            Err(Error::Parse { line: 8, .. })
        ));
    }

    #[test]
    fn missing_sign_is_reported() {
        let text = ZETA.replace("sign 1\n", "");
        assert!(matches!(
            parse_descriptor(&text, Path::new(".")),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn complex_dirichlet_gets_dual() {
        let text = "weight 1\nlambda 1\nconductor 5\nsign unknown\n\
                    coeffs builtin:dirichlet:5:1,i,-i,-1,0\n";
        let f = parse_descriptor(text, Path::new(".")).unwrap();
        assert!(!f.descriptor.is_self_dual());
        let d = f.descriptor.dual_provider().coefficient(2, 64).unwrap();
        assert_eq!(d.to_f64(), (0.0, -1.0));
    }

    #[test]
    fn coefficient_file_format() {
        let v = parse_coefficient_file("1\n-2\n0.5+1.5i\n\n").unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[2].to_f64(), (0.5, 1.5));
        assert!(matches!(
            parse_coefficient_file("1\n\n2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn euler_file_format() {
        let f = parse_euler_file("# Q(i)\n2 -1\n3 0 -1\n").unwrap();
        assert_eq!(f[&3].len(), 2);
        assert!(matches!(
            parse_euler_file("2 -1\n2 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn unknown_specs() {
        assert!(matches!(
            parse_unknown("coeffs:p=3:K=2"),
            Ok(Unknown::Coeffs { p: 3, k: 2 })
        ));
        assert!(parse_unknown("coeffs:p=3").is_err());
        assert!(parse_unknown("conductor").is_err());
    }
}
