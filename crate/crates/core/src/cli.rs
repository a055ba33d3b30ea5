//! Command-line front end: argument parsing, JSON job specs, and rendering.
//!
//! Every subcommand can also be given as a JSON job on stdin, e.g.
//! `{"command":"irred","ell":3,"f":1,"n":2,"format":"json"}`.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::global_weights::{check_det_sets, global_weight_set, twist_global, GlobalDatum};
use crate::local_factors::{classify_pi_d, FactorShape, LocalFactorInput};
use crate::modarith::FieldParams;
use crate::q_table::{weights_q_row, QClass, QShape, QVariant};
use crate::recipe_irred::{
    count_closed_form_irred, enumerate_wprime_irred, injectivity_fails_irred, wp_irred,
    NiveauTwoDatum,
};
use crate::recipe_red::{
    count_closed_form_red, enumerate_wprime_red, injectivity_fails_red, wp_red_partial,
    wp_red_split, ExtClass, ReducibleDatum,
};
use crate::verify::{verify_sweep, SweepBounds, SweepKind, DEFAULT_BUDGET, DEFAULT_RANGE_CAP};
use crate::weights::{SerreWeight, WeightSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Tsv,
    Pretty,
}

#[derive(Parser, Debug)]
#[command(
    name = "serre-weights",
    version,
    about = "Serre weight sets for mod-l local Galois data"
)]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Read a JSON job spec from stdin instead of a subcommand.
    #[arg(long)]
    pub stdin: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// W_p for an irreducible (niveau 2) datum.
    Irred(IrredArgs),
    /// W_p for a reducible datum.
    Red(RedArgs),
    /// The explicit table over Q_ell.
    Qtable(QtableArgs),
    /// Products of local weight sets over several primes.
    Global(GlobalArgs),
    /// The quaternionic mod-ell local factor.
    Factor(FactorArgs),
    /// Exhaustive verification sweeps.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrredArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub f: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    /// List the labeled set W' instead of its projection.
    #[arg(long)]
    #[serde(default)]
    pub labeled: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtArg {
    Split,
    Unknown,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long)]
    pub f: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub n1: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    #[serde(default)]
    pub n2: i64,
    #[arg(long, value_enum, default_value_t = ExtArg::Split)]
    #[serde(default = "split_ext")]
    pub ext: ExtArg,
    #[arg(long)]
    #[serde(default)]
    pub labeled: bool,
}

fn split_ext() -> ExtArg {
    ExtArg::Split
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassArg {
    Split,
    Peu,
    Tres,
    Generic,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QtableArgs {
    #[arg(long)]
    pub ell: u64,
    /// 1 or 2; omit together with --b to list every legal shape.
    #[arg(long, requires = "b")]
    #[serde(default)]
    pub niveau: Option<u8>,
    #[arg(long, requires = "niveau")]
    #[serde(default)]
    pub b: Option<u64>,
    #[arg(long = "class", value_enum)]
    #[serde(default, rename = "class")]
    pub cls: Option<ClassArg>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// Global datum as JSON, `{"ell":..,"primes":[..]}`.
    #[arg(
        long,
        conflicts_with = "datum_file",
        required_unless_present = "datum_file"
    )]
    #[serde(default)]
    pub datum: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub datum_file: Option<PathBuf>,
    /// Parsed datum when the job arrives as JSON.
    #[arg(skip)]
    #[serde(default, rename = "global")]
    pub parsed: Option<GlobalDatum>,
    /// Twist exponents, one per prime, applied before computing.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default)]
    pub twist: Vec<i64>,
    /// Cap on listed products; counts are always exact.
    #[arg(long, default_value_t = 10_000)]
    #[serde(default = "default_limit")]
    pub limit: usize,
}

fn default_limit() -> usize {
    10_000
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeArg {
    Irreducible,
    CycSplit,
    CycNonsplit,
    Other,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorArgs {
    #[arg(long)]
    pub ell: u64,
    /// N(p), reduced mod ell.
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_enum)]
    pub shape: ShapeArg,
    #[arg(long)]
    #[serde(default)]
    pub ext_nonzero: bool,
    #[arg(long)]
    #[serde(default)]
    pub split_algebra: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// counts, counts-irred, counts-red, injectivity, injectivity-irred,
    /// injectivity-red, det-law, symmetry, qtable-crosscheck, nonempty,
    /// generic-split, worked-example, all
    #[arg(required = true)]
    pub kinds: Vec<String>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub ell: Vec<u64>,
    #[arg(long)]
    pub f_max: u32,
    /// Window-evaluation budget; accepts `1e7`.
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    #[serde(default = "default_budget", deserialize_with = "de_count")]
    pub budget: u64,
    /// Skip (ell, f) with ell^(2f) above this.
    #[arg(long, value_parser = parse_count, default_value = "1e7")]
    #[serde(default = "default_cap", deserialize_with = "de_count")]
    pub range_cap: u64,
    #[arg(long)]
    #[serde(default)]
    pub serial: bool,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

fn default_cap() -> u64 {
    DEFAULT_RANGE_CAP
}

/// A non-negative integer written plainly or as `1e7`, `2.5e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let x: f64 = s.parse().map_err(|_| format!("'{s}' is not a count"))?;
    if !(x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x < 1.8e19) {
        return Err(format!("'{s}' is not a non-negative integer"));
    }
    Ok(x as u64)
}

fn de_count<'de, D: serde::Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        N(u64),
        F(f64),
        S(String),
    }
    let s = match Raw::deserialize(d)? {
        Raw::N(n) => return Ok(n),
        Raw::F(x) => x.to_string(),
        Raw::S(s) => s,
    };
    parse_count(&s).map_err(serde::de::Error::custom)
}

/// A job read from stdin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobSpec {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default)]
    pub format: Format,
}

/// A failed run; `flag` names the offending option when there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub flag: Option<&'static str>,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.flag {
            Some(flag) => write!(f, "{flag}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn err(flag: &'static str) -> impl Fn(Error) -> CliError {
    move |e| CliError {
        flag: Some(flag),
        message: e.to_string(),
    }
}

fn params(ell: u64, f: u32) -> Result<FieldParams, CliError> {
    FieldParams::new(ell, f).map_err(|e| {
        let flag = match e {
            Error::NotPrime(_) => "--ell",
            _ => "--f",
        };
        err(flag)(e)
    })
}

/// Rendered output plus exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
}

struct Rendered {
    json: Value,
    tsv: String,
    pretty: String,
    code: i32,
}

impl Rendered {
    fn ok(json: Value, tsv: String, pretty: String) -> Self {
        Rendered {
            json,
            tsv,
            pretty,
            code: EXIT_OK,
        }
    }

    fn emit(self, format: Format) -> Outcome {
        let mut text = match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("values serialize"),
            Format::Tsv => self.tsv,
            Format::Pretty => self.pretty,
        };
        if !text.ends_with('\n') {
            text.push('\n');
        }
        Outcome {
            code: self.code,
            text,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn b_field(v: &SerreWeight) -> String {
    v.b().iter().join(",")
}

fn weights_tsv(ws: &WeightSet) -> String {
    let mut s = String::from("a\tb\n");
    for v in ws {
        let _ = writeln!(s, "{}\t{}", v.a().value(), b_field(v));
    }
    s
}

fn weights_pretty(ws: &WeightSet) -> String {
    ws.iter().map(|v| format!("{v}\n")).collect()
}

/// `{V_{a,b},...}` in canonical order; only meaningful for `f = 1`.
pub fn q_notation(ws: &WeightSet) -> String {
    let inner = ws
        .iter()
        .map(|v| format!("V_{{{},{}}}", v.a().value(), b_field(v)))
        .join(",");
    format!("{{{inner}}}")
}

fn run_irred(a: &IrredArgs) -> Result<Rendered, CliError> {
    let p = params(a.ell, a.f)?;
    let d = NiveauTwoDatum::new(p, a.n as i128).map_err(err("--n"))?;
    if a.labeled {
        let w = enumerate_wprime_irred(&d);
        let mut tsv = String::from("a\tb\tB\n");
        for x in &w {
            let _ = writeln!(
                tsv,
                "{}\t{}\t{}",
                x.weight.a().value(),
                b_field(&x.weight),
                x.set.indices(p.f()).join(",")
            );
        }
        let pretty = w.iter().map(|x| format!("{x}\n")).collect();
        return Ok(Rendered::ok(to_value(&w), tsv, pretty));
    }
    let w = wp_irred(&d);
    let mut pretty = weights_pretty(&w);
    let _ = writeln!(
        pretty,
        "# |W'| = {}, injective: {}",
        count_closed_form_irred(&d),
        injectivity_fails_irred(&d).is_none()
    );
    Ok(Rendered::ok(to_value(&w), weights_tsv(&w), pretty))
}

fn run_red(a: &RedArgs) -> Result<Rendered, CliError> {
    let p = params(a.ell, a.f)?;
    let ext = match a.ext {
        ExtArg::Split => ExtClass::Split,
        ExtArg::Unknown => ExtClass::NonSplitUnknown,
    };
    let d = ReducibleDatum::new(p, a.n1 as i128, a.n2 as i128, ext);
    if a.labeled {
        let w = enumerate_wprime_red(&d);
        let mut tsv = String::from("a\tb\tB\tsolution\n");
        for x in &w {
            let _ = writeln!(
                tsv,
                "{}\t{}\t{}\t{}",
                x.weight.a().value(),
                b_field(&x.weight),
                x.set.indices(p.f()).join(","),
                x.solution
            );
        }
        let pretty = w.iter().map(|x| format!("{x}\n")).collect();
        return Ok(Rendered::ok(to_value(&w), tsv, pretty));
    }
    match ext {
        ExtClass::Split => {
            let w = wp_red_split(&d).map_err(err("--ext"))?;
            let mut pretty = weights_pretty(&w);
            let _ = writeln!(
                pretty,
                "# |W'| = {}, injective: {}",
                count_closed_form_red(&d),
                injectivity_fails_red(&d).is_none()
            );
            Ok(Rendered::ok(to_value(&w), weights_tsv(&w), pretty))
        }
        ExtClass::NonSplitUnknown => {
            let w = wp_red_partial(&d).map_err(err("--ext"))?;
            let mut tsv = String::from("status\ta\tb\n");
            let mut pretty = String::new();
            for (tag, set) in [("certain", &w.certain), ("possible", &w.possible)] {
                for v in set {
                    let _ = writeln!(tsv, "{tag}\t{}\t{}", v.a().value(), b_field(v));
                    let _ = writeln!(pretty, "{v}  {tag}");
                }
            }
            Ok(Rendered::ok(to_value(&w), tsv, pretty))
        }
    }
}

fn qshape(ell: u64, niveau: u8, b: u64, cls: Option<ClassArg>) -> Result<QShape, CliError> {
    match (niveau, cls) {
        (2, None) => QShape::niveau2(ell, b).map_err(err("--b")),
        (2, Some(_)) => Err(CliError {
            flag: Some("--class"),
            message: "niveau 2 takes no class".into(),
        }),
        (1, Some(c)) => {
            let cls = match c {
                ClassArg::Split => QClass::Split,
                ClassArg::Peu => QClass::NonSplitPeu,
                ClassArg::Tres => QClass::NonSplitTres,
                ClassArg::Generic => QClass::NonSplitGeneric,
            };
            QShape::niveau1(ell, b, cls).map_err(err("--class"))
        }
        (1, None) => Err(CliError {
            flag: Some("--class"),
            message: "niveau 1 needs a class".into(),
        }),
        _ => Err(CliError {
            flag: Some("--niveau"),
            message: format!("niveau must be 1 or 2, got {niveau}"),
        }),
    }
}

fn shape_fields(s: &QShape) -> (u8, u64, &'static str) {
    match s.variant {
        QVariant::Niveau2 { b } => (2, b, "-"),
        QVariant::Niveau1 { b, cls } => (
            1,
            b,
            match cls {
                QClass::Split => "split",
                QClass::NonSplitPeu => "peu",
                QClass::NonSplitTres => "tres",
                QClass::NonSplitGeneric => "generic",
            },
        ),
    }
}

fn run_qtable(a: &QtableArgs) -> Result<Rendered, CliError> {
    params(a.ell, 1)?;
    let shapes = match (a.niveau, a.b) {
        (Some(n), Some(b)) => vec![qshape(a.ell, n, b, a.cls)?],
        (None, None) => QShape::all_legal(a.ell),
        _ => {
            return Err(CliError {
                flag: Some("--b"),
                message: "--niveau and --b go together".into(),
            })
        }
    };
    let mut rows = Vec::new();
    let mut tsv = String::from("niveau\tb\tclass\trow\tweights\n");
    let mut pretty = String::new();
    for s in &shapes {
        let (row, set) = weights_q_row(s).map_err(err("--b"))?;
        let (niv, b, cls) = shape_fields(s);
        let text = q_notation(&set);
        let _ = writeln!(tsv, "{niv}\t{b}\t{cls}\t{}\t{text}", row.index());
        let _ = writeln!(
            pretty,
            "ell={} niveau={niv} b={b} class={cls} row={}: {text}",
            s.ell,
            row.index()
        );
        rows.push(json!({
            "shape": s,
            "row": row.index(),
            "weights": set,
            "display": text,
        }));
    }
    let json = if a.niveau.is_some() {
        rows.pop().expect("one row")
    } else {
        Value::Array(rows)
    };
    Ok(Rendered::ok(json, tsv, pretty))
}

fn run_global(a: &GlobalArgs) -> Result<Rendered, CliError> {
    let datum: GlobalDatum = if let Some(d) = &a.parsed {
        d.clone()
    } else {
        let raw = match (&a.datum, &a.datum_file) {
            (Some(s), _) => s.clone(),
            (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| CliError {
                flag: Some("--datum-file"),
                message: e.to_string(),
            })?,
            (None, None) => {
                return Err(CliError {
                    flag: Some("--datum"),
                    message: "a global datum is required".into(),
                })
            }
        };
        serde_json::from_str(&raw).map_err(|e| CliError {
            flag: Some("--datum"),
            message: e.to_string(),
        })?
    };
    let datum = if a.twist.is_empty() {
        datum
    } else {
        twist_global(
            &datum,
            &a.twist.iter().map(|&c| c as i128).collect::<Vec<_>>(),
        )
        .map_err(err("--twist"))?
    };
    let sets = global_weight_set(&datum).map_err(err("--datum"))?;
    let det = check_det_sets(&datum, &sets);
    let certain: Vec<_> = sets.certain().take(a.limit).collect();
    let closure_extra: Vec<_> = if sets.is_exact() {
        Vec::new()
    } else {
        let certain_slots = &sets.slots;
        sets.closure()
            .filter(|g| {
                !g.0.iter()
                    .zip(certain_slots)
                    .all(|(v, s)| s.certain.contains(v))
            })
            .take(a.limit)
            .collect()
    };
    let certain_len = sets.certain_len();
    let closure_len = sets.closure_len();
    let json = json!({
        "datum": datum,
        "exact": sets.is_exact(),
        "slots": sets.slots,
        "certain_count": certain_len.to_string(),
        "closure_count": closure_len.to_string(),
        "certain": certain,
        "possible": closure_extra,
        "truncated": (certain.len() as u128) < certain_len
            || (closure_extra.len() as u128) < closure_len - certain_len,
        "det_check": det,
    });
    let mut tsv = String::from("status\tweights\n");
    let mut pretty = format!(
        "# {} certain, {} in closure, det law {}\n",
        certain_len,
        closure_len,
        if det.passed() { "holds" } else { "VIOLATED" }
    );
    for (tag, list) in [("certain", &certain), ("possible", &closure_extra)] {
        for g in list {
            let _ = writeln!(
                tsv,
                "{tag}\t{}",
                g.0.iter()
                    .map(|v| format!("{}:{}", v.a().value(), b_field(v)))
                    .join("\t")
            );
            let _ = writeln!(pretty, "{g}  {tag}");
        }
    }
    Ok(Rendered::ok(json, tsv, pretty))
}

fn run_factor(a: &FactorArgs) -> Result<Rendered, CliError> {
    let shape = match a.shape {
        ShapeArg::Irreducible => FactorShape::Irreducible,
        ShapeArg::CycSplit => FactorShape::CycTwistExt { split: true },
        ShapeArg::CycNonsplit => FactorShape::CycTwistExt { split: false },
        ShapeArg::Other => FactorShape::OtherReducible,
    };
    let input = LocalFactorInput {
        ell: a.ell,
        q_mod_ell: a.q,
        shape,
        ext_nonzero: a.ext_nonzero,
        split_algebra: a.split_algebra,
    };
    let flag = if crate::modarith::is_prime(a.ell) {
        "--q"
    } else {
        "--ell"
    };
    let c = classify_pi_d(&input).map_err(err(flag))?;
    let factor = to_value(&c.factor);
    let tsv = format!(
        "factor\text_space_dim\tcaveats\n{}\t{}\t{}\n",
        serde_json::to_string(&factor).expect("values serialize"),
        c.ext_space_dim.map_or("-".into(), |d| d.to_string()),
        c.caveats.join("; ")
    );
    let mut pretty = format!("{:?}\n", c.factor);
    if let Some(d) = c.ext_space_dim {
        let _ = writeln!(pretty, "ext space dimension {d}");
    }
    for cv in &c.caveats {
        let _ = writeln!(pretty, "caveat: {cv}");
    }
    Ok(Rendered::ok(to_value(&c), tsv, pretty))
}

fn run_verify(a: &VerifyArgs) -> Result<Rendered, CliError> {
    let mut kinds = Vec::new();
    for k in &a.kinds {
        let expanded = SweepKind::expand(k).ok_or_else(|| CliError {
            flag: Some("KIND"),
            message: format!("unknown sweep kind '{k}'"),
        })?;
        for e in expanded {
            if !kinds.contains(&e) {
                kinds.push(e);
            }
        }
    }
    for &ell in &a.ell {
        params(ell, 1)?;
    }
    let mut bounds = SweepBounds::new(a.ell.clone(), a.f_max)
        .with_budget(a.budget)
        .with_range_cap(a.range_cap);
    if a.serial {
        bounds = bounds.serial();
    }
    // All budgets are checked before any sweep starts.
    if kinds.iter().any(SweepKind::sweeps_residues) {
        let needed = bounds.cost().map_err(err("--ell"))?;
        if needed > bounds.budget {
            return Err(err("--budget")(Error::BudgetExceeded {
                needed,
                budget: bounds.budget,
            }));
        }
    }
    let mut reports = Vec::new();
    for &k in &kinds {
        reports.push(verify_sweep(k, &bounds).map_err(err("--budget"))?);
    }
    let mut tsv = String::from("kind\tell\tf\tdata\ttriples\tchecks\tmismatches\n");
    let mut pretty = String::new();
    for r in &reports {
        for s in &r.ranges {
            let _ = writeln!(
                tsv,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.kind, s.ell, s.f, s.data, s.triples, s.checks, s.mismatches
            );
        }
        let _ = writeln!(
            pretty,
            "{} {}: {} checks, {} mismatches over {} ranges",
            if r.passed() { "PASS" } else { "FAIL" },
            r.kind,
            r.checks,
            r.mismatch_total,
            r.ranges.len()
        );
        for m in &r.mismatches {
            let _ = writeln!(
                pretty,
                "  ell={} f={} {} [{}] {}",
                m.ell, m.f, m.datum, m.check, m.detail
            );
        }
        for fnd in &r.findings {
            let _ = writeln!(pretty, "  note: {fnd}");
        }
    }
    let code = if reports.iter().all(|r| r.passed()) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    Ok(Rendered {
        json: to_value(&reports),
        tsv,
        pretty,
        code,
    })
}

/// Runs one job.
pub fn run(command: &Command, format: Format) -> Outcome {
    let result = match command {
        Command::Irred(a) => run_irred(a),
        Command::Red(a) => run_red(a),
        Command::Qtable(a) => run_qtable(a),
        Command::Global(a) => run_global(a),
        Command::Factor(a) => run_factor(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(r) => r.emit(format),
        Err(e) => Outcome {
            code: EXIT_INPUT,
            text: format!("error: {e}\n"),
        },
    }
}

/// Parses `args` and runs the job, reading `stdin` only for `--stdin`.
/// Errors go to the returned text with exit code 1.
pub fn main_with<I, T>(args: I, stdin: impl Read) -> (Outcome, Option<PathBuf>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return (
                Outcome {
                    code,
                    text: e.render().to_string(),
                },
                None,
            );
        }
    };
    let out = cli.out.clone();
    let input_error = |message: String| Outcome {
        code: EXIT_INPUT,
        text: format!("error: {message}\n"),
    };
    let outcome = match (cli.stdin, cli.command) {
        (true, None) => {
            let mut raw = String::new();
            let mut stdin = stdin;
            match stdin.read_to_string(&mut raw) {
                Err(e) => input_error(format!("--stdin: {e}")),
                Ok(_) => match serde_json::from_str::<JobSpec>(&raw) {
                    Ok(job) => run(&job.command, job.format),
                    Err(e) => input_error(format!("--stdin: {e}")),
                },
            }
        }
        (false, Some(cmd)) => run(&cmd, cli.format),
        (true, Some(_)) => input_error("--stdin: takes no subcommand".into()),
        (false, None) => input_error("a subcommand or --stdin is required".into()),
    };
    (outcome, out)
}
