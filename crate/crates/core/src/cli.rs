//! Batch front end. `run` parses arguments, executes one subcommand and writes
//! its report; the returned code is 0 on success, 1 when a check fails and 2
//! on usage errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::load_config_args;
use crate::dense::DEFAULT_DENSE_CAP;
use crate::error::{QismError, Result};
use crate::fixtures::{self, Fixture};
use crate::models::{self, Convention, FourVertexParams, SixVertexParams, XXXGenerator, XXXParams, ADOPTED_CONVENTION};
use crate::monodromy::{self, random_exact, ModelParams, SiteOrder, LABELS};
use crate::operator::{Densified, LocalOperator};
use crate::poisson::{self, Atom, ElemBracketTable, PExpr, Strategy, SubstituteMode, TableValue, ValueExpr};
use crate::scalar::{fmt_gauss, Scalar};
use crate::vertex::{self, BoundarySpec, LatticeSpec, VertexModel, Weight};

/// Library checks and the one subcommand that exposes each.
pub const CHECK_COVERAGE: &[(&str, &str)] = &[
    ("monodromy::commutation_residual[4v,6v]", "transfer-commutator"),
    ("monodromy::select_convention", "transfer-commutator"),
    ("monodromy::ybe_residual_trig", "ybe-check"),
    ("monodromy::rll_residual_6v", "rll-check"),
    ("monodromy::four_vertex_r_candidates", "rll-check"),
    ("monodromy::monodromy", "monodromy"),
    ("monodromy::monodromy_symbolic_for", "monodromy"),
    ("monodromy::yb_products", "yb-products"),
    ("vertex::partition_enum", "enumerate-z"),
    ("vertex::probability_table", "enumerate-z"),
    ("vertex::partition_transfer", "compare-z"),
    ("vertex::derive_weight_dictionary", "compare-z"),
    ("poisson::expand_with", "poisson-expand"),
    ("poisson::substitute", "poisson-expand"),
    ("poisson::structure_check", "poisson-structure"),
    ("poisson::count_elementary", "poisson-structure"),
    ("poisson::jacobi_residual", "jacobi-test"),
    ("models::spin_matrices", "xxx-check"),
    ("models::phi_map", "xxx-check"),
    ("monodromy::commutation_residual[xxx]", "xxx-check"),
    ("fixtures::diff_builtin", "fixture-diff"),
    ("fixtures::diff_text", "fixture-diff"),
];

#[derive(Parser, Debug)]
#[command(name = "qism", version, about = "Integrability checks for the 4-vertex model and relatives", args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Records,
    Table,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Flat TOML file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Records)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest dense realization, in rows.
    #[arg(long, default_value_t = DEFAULT_DENSE_CAP)]
    dense_cap: usize,
}

#[derive(Args, Debug, Clone)]
struct LatticeArgs {
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, default_value_t = 3)]
    cols: usize,
    /// `dwbc`, `dwbc-dual`, `ferro`, `random:<seed>`, or a ring of in/out tokens.
    #[arg(long, default_value = "dwbc")]
    boundary: String,
    /// Lattice file (`rows`, `cols`, `boundary`); overrides the flags above.
    #[arg(long)]
    lattice: Option<PathBuf>,
    /// `4v` or `6v`.
    #[arg(long, default_value = "4v")]
    mode: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ‖[t(u), t(u′)]‖ for random spectral pairs, chain lengths 1..=n.
    TransferCommutator {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "4v")]
        model: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long)]
        convention: Option<String>,
        #[arg(long, default_value = "ascending")]
        order: String,
        #[arg(long, default_value_t = 0.4)]
        eta: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also run the projector-convention selection.
        #[arg(long)]
        select_convention: bool,
    },
    /// Yang-Baxter equation for the trigonometric 6-vertex R.
    YbeCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// RLL residuals: 6-vertex (asserted) or 4-vertex candidates (reported).
    RllCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "6v")]
        model: String,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long)]
        convention: Option<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Monodromy entries A, B, C, D.
    Monodromy {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "4v")]
        model: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "1+i")]
        u: String,
        #[arg(long)]
        symbolic: bool,
        #[arg(long)]
        convention: Option<String>,
        #[arg(long, default_value = "ascending")]
        order: String,
        #[arg(long, default_value_t = 0.4)]
        eta: f64,
        #[arg(long, default_value = "1/2")]
        spin: String,
    },
    /// The sixteen products X(u)Y(u′) with their norms.
    YbProducts {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        u_prime: Option<String>,
        #[arg(long)]
        convention: Option<String>,
        #[arg(long, default_value = "ascending")]
        order: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Exact partition polynomial by enumeration.
    EnumerateZ {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Emit every configuration.
        #[arg(long)]
        list: bool,
        /// Emit exact probabilities and check their normalization.
        #[arg(long)]
        probabilities: bool,
    },
    /// Enumeration against the row-transfer evaluation.
    CompareZ {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Also derive the vertex dictionary of the 4-vertex L-operator.
        #[arg(long)]
        dictionary: bool,
        #[arg(long)]
        convention: Option<String>,
    },
    /// Expand a bracket expression into elementary brackets.
    PoissonExpand {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::LeftFirst)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = poisson::DEFAULT_DEPTH_CAP)]
        depth_cap: usize,
        /// Elementary bracket table file.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Use `{X(u), X(u')} = 1/(u - u')` for same-name generators.
        #[arg(long)]
        diagonal_table: bool,
        /// Spectral and atom values, `name=value` comma-separated.
        #[arg(long)]
        assign: Option<String>,
        #[arg(long)]
        strict: bool,
    },
    /// Elementary counts of the 4 × 4 block bracket structure.
    PoissonStructure {
        #[command(flatten)]
        common: Common,
    },
    /// Jacobi residual on random expressions with constant tables.
    JacobiTest {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        atoms: usize,
        /// Maximum bracket nesting of each random expression.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Explicit f, g, h instead of random ones (all three required).
        #[arg(long, requires_all = ["g", "h"])]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        assign: Option<String>,
    },
    /// Higher-spin XXX chain: su(2) relations, generator map, commutation.
    XxxCheck {
        #[command(flatten)]
        common: Common,
        /// Comma-separated spins.
        #[arg(long, default_value = "1/2,1")]
        spin: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Per-term diff of transcribed product entries against the engine.
    FixtureDiff {
        #[command(flatten)]
        common: Common,
        /// `two-site`, `three-site-first-row` or `all`.
        #[arg(long, default_value = "all")]
        fixture: String,
        /// Transcription file to diff instead of a built-in one.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Chain length for `--file` (default from the file's `@chain_len`).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        convention: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    LeftFirst,
    RightFirst,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::LeftFirst => Strategy::LeftFirst,
            StrategyArg::RightFirst => Strategy::RightFirst,
        }
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::TransferCommutator { common, .. }
            | Command::YbeCheck { common, .. }
            | Command::RllCheck { common, .. }
            | Command::Monodromy { common, .. }
            | Command::YbProducts { common, .. }
            | Command::EnumerateZ { common, .. }
            | Command::CompareZ { common, .. }
            | Command::PoissonExpand { common, .. }
            | Command::PoissonStructure { common }
            | Command::JacobiTest { common, .. }
            | Command::XxxCheck { common, .. }
            | Command::FixtureDiff { common, .. } => common,
        }
    }
}

/// Subcommand names as registered with the parser.
pub fn subcommand_names() -> Vec<String> {
    Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect()
}

/// Records plus whether every asserted check passed.
struct Report {
    records: Vec<Value>,
    passed: bool,
}

impl Report {
    fn new() -> Self {
        Report { records: Vec::new(), passed: true }
    }

    fn push(&mut self, v: Value) {
        self.records.push(v);
    }

    fn check(&mut self, ok: bool) {
        self.passed &= ok;
    }
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<QismError> for Failure {
    fn from(e: QismError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Run one command line (`args[0]` is the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut args: Vec<String> = args.into_iter().map(Into::into).collect();
    if let Some(path) = config_path(&args) {
        match load_config_args(&path) {
            Ok(extra) => {
                let at = 2.min(args.len());
                args.splice(at..at, extra);
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        }
    }
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let common = cli.command.common().clone();
    let report = match execute(&cli.command) {
        Ok(r) => r,
        Err(Failure::Usage(m) | Failure::Io(m)) => {
            eprintln!("error: {m}");
            return 2;
        }
    };
    let text = render(&report.records, common.format);
    let written = match &common.out {
        Some(p) => std::fs::write(p, &text).map_err(|e| e.to_string()),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return 2;
    }
    if report.passed { 0 } else { 1 }
}

fn config_path(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

fn render(records: &[Value], format: Format) -> String {
    match format {
        Format::Records => records.iter().map(|r| format!("{r}\n")).collect(),
        Format::Table => render_table(records),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Aligned columns; a new header starts whenever the key set changes.
fn render_table(records: &[Value]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < records.len() {
        let keys: Vec<String> = records[i].as_object().map(|o| o.keys().cloned().collect()).unwrap_or_default();
        let mut j = i;
        while j < records.len() && records[j].as_object().map(|o| o.keys().cloned().collect::<Vec<_>>()) == Some(keys.clone()) {
            j += 1;
        }
        let rows: Vec<Vec<String>> = records[i..j.max(i + 1)]
            .iter()
            .map(|r| keys.iter().map(|k| r.get(k).map(cell).unwrap_or_default()).collect())
            .collect();
        let widths: Vec<usize> = (0..keys.len())
            .map(|c| rows.iter().map(|r| r[c].chars().count()).chain([keys[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: &[String]| -> String {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
            format!("{}\n", parts.join("  ").trim_end())
        };
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str(&line(&keys));
        for r in &rows {
            out.push_str(&line(r));
        }
        i = j.max(i + 1);
    }
    out
}

/// Scalar literal: rational-function syntax (`1+i`, `-3/2`) or a decimal.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    if let Ok(e) = ValueExpr::parse(s) {
        if let Ok(v) = e.evaluate(&BTreeMap::new()) {
            return Ok(v);
        }
    }
    s.trim()
        .parse::<f64>()
        .map(|x| Scalar::float(x, 0.0))
        .map_err(|_| QismError::InvalidParameter(format!("cannot parse scalar `{s}`")))
}

/// `1/2` → 1, `1` → 2.
fn parse_two_s(s: &str) -> Result<u32> {
    let v = parse_scalar(s)?;
    let two = &v * &Scalar::int(2);
    let re = two.to_c64();
    if !two.is_exact() || re.im != 0.0 || re.re < 1.0 || re.re.fract() != 0.0 {
        return Err(QismError::InvalidSpin(s.to_string()));
    }
    Ok(re.re as u32)
}

fn convention(arg: &Option<String>) -> Result<Convention> {
    arg.as_deref().map_or(Ok(ADOPTED_CONVENTION), str::parse)
}

fn random_complex(rng: &mut ChaCha8Rng, re: f64, im: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-re..re), rng.gen_range(-im..=im))
}

fn random_float_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let z = random_complex(rng, 2.0, 1.0);
    Scalar::float(z.re, z.im)
}

fn execute(cmd: &Command) -> std::result::Result<Report, Failure> {
    let (seed, cap) = (cmd.common().seed, cmd.common().dense_cap);
    match cmd {
        Command::TransferCommutator { model, n, samples, convention: conv, order, eta, tol, select_convention, .. } => {
            transfer_commutator(model, *n, *samples, conv, order, *eta, *tol, *select_convention, seed, cap)
        }
        Command::YbeCheck { samples, tol, .. } => Ok(ybe_check(*samples, *tol, seed)?),
        Command::RllCheck { model, samples, convention: conv, tol, .. } => rll_check(model, *samples, conv, *tol, seed),
        Command::Monodromy { model, n, u, symbolic, convention: conv, order, eta, spin, .. } => {
            monodromy_cmd(model, *n, u, *symbolic, conv, order, *eta, spin, cap)
        }
        Command::YbProducts { n, u, u_prime, convention: conv, order, tol, .. } => {
            yb_products_cmd(*n, u.as_deref(), u_prime.as_deref(), conv, order, *tol, seed, cap)
        }
        Command::EnumerateZ { lattice, list, probabilities, .. } => enumerate_z(lattice, *list, *probabilities),
        Command::CompareZ { lattice, dictionary, convention: conv, .. } => compare_z(lattice, *dictionary, conv),
        Command::PoissonExpand { expr, strategy, depth_cap, table, diagonal_table, assign, strict, .. } => {
            poisson_expand(expr, (*strategy).into(), *depth_cap, table, *diagonal_table, assign.as_deref(), *strict)
        }
        Command::PoissonStructure { .. } => Ok(poisson_structure()?),
        Command::JacobiTest { samples, atoms, depth, f, g, h, table, assign, .. } => {
            jacobi_test(*samples, *atoms, *depth, f.as_deref(), g.as_deref(), h.as_deref(), table, assign.as_deref(), seed)
        }
        Command::XxxCheck { spin, n, samples, tol, .. } => Ok(xxx_check(spin, *n, *samples, *tol, seed, cap)?),
        Command::FixtureDiff { fixture, file, n, convention: conv, .. } => fixture_diff(fixture, file, *n, conv),
    }
}

#[allow(clippy::too_many_arguments)]
fn transfer_commutator(
    model: &str,
    n: usize,
    samples: usize,
    conv: &Option<String>,
    order: &str,
    eta: f64,
    tol: f64,
    select: bool,
    seed: u64,
    cap: usize,
) -> std::result::Result<Report, Failure> {
    let order: SiteOrder = order.parse()?;
    let conv = convention(conv)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::new();
    for len in 1..=n {
        for s in 0..samples {
            let (params, u, v) = match model {
                "4v" => {
                    let (u, v) = (random_exact(&mut rng), random_exact(&mut rng));
                    (ModelParams::FourVertex(FourVertexParams::new(u.clone()).with_convention(conv)), u, v)
                }
                "6v" => {
                    let (u, v) = (random_float_scalar(&mut rng), random_float_scalar(&mut rng));
                    let inhom: Vec<Complex64> = (0..len).map(|_| random_complex(&mut rng, 0.5, 0.0)).collect();
                    let p = SixVertexParams { v: inhom, ..SixVertexParams::trig(u.to_c64(), Complex64::new(eta, 0.0)) };
                    (ModelParams::SixVertex(p), u, v)
                }
                "xxx" => return Err(usage("the XXX chain is checked by `xxx-check`")),
                other => return Err(usage(format!("unknown model `{other}` (expected 4v or 6v)"))),
            };
            jobs.push((len, s, params, u, v));
        }
    }
    let residuals: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|(len, _, p, u, v)| monodromy::commutation_residual(p, u, v, *len, order, cap))
        .collect();
    let mut rep = Report::new();
    let mut max: f64 = 0.0;
    for ((len, s, _, u, v), r) in jobs.iter().zip(residuals) {
        let r = r?;
        max = max.max(r);
        rep.push(json!({"check": "transfer-commutator", "model": model, "n": len, "sample": s,
            "u": u.to_string(), "u_prime": v.to_string(), "residual": r}));
    }
    let pass = max <= tol;
    rep.check(pass);
    rep.push(json!({"check": "transfer-commutator", "summary": true, "model": model, "convention": conv.name(),
        "order": format!("{order:?}").to_lowercase(), "max_residual": max, "tol": tol, "pass": pass}));
    if select {
        let sel = monodromy::select_convention(n.min(6), samples, seed, tol)?;
        rep.push(json!({"check": "convention-selection", "selection": serde_json::to_value(&sel).map_err(|e| Failure::Io(e.to_string()))?}));
    }
    Ok(rep)
}

fn ybe_check(samples: usize, tol: f64, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new();
    let mut max: f64 = 0.0;
    for s in 0..samples {
        let x = random_complex(&mut rng, 1.5, 0.5);
        let y = random_complex(&mut rng, 1.5, 0.5);
        let eta = Complex64::new(rng.gen_range(0.1..1.4), 0.0);
        let r = monodromy::ybe_residual_trig(x, y, eta)?;
        max = max.max(r);
        rep.push(json!({"check": "ybe", "sample": s, "lambda": fmt_c(x), "mu": fmt_c(y), "eta": fmt_c(eta), "residual": r}));
    }
    let pass = max <= tol;
    rep.check(pass);
    rep.push(json!({"check": "ybe", "summary": true, "max_residual": max, "tol": tol, "pass": pass}));
    Ok(rep)
}

fn fmt_c(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn rll_check(model: &str, samples: usize, conv: &Option<String>, tol: f64, seed: u64) -> std::result::Result<Report, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new();
    match model {
        "6v" => {
            let (mut max2, mut max1): (f64, f64) = (0.0, 0.0);
            for s in 0..samples {
                let l = random_complex(&mut rng, 1.5, 0.5);
                let m = random_complex(&mut rng, 1.5, 0.5);
                let eta = Complex64::new(rng.gen_range(0.1..1.4), 0.0);
                let v = random_complex(&mut rng, 0.5, 0.0);
                let r2 = monodromy::rll_residual_6v(l, m, eta, v, 2.0)?;
                let r1 = monodromy::rll_residual_6v(l, m, eta, v, 1.0)?;
                max2 = max2.max(r2);
                max1 = max1.max(r1);
                rep.push(json!({"check": "rll-6v", "sample": s, "lambda": fmt_c(l), "mu": fmt_c(m), "eta": fmt_c(eta),
                    "v": fmt_c(v), "residual_crossing_2eta": r2, "residual_crossing_eta": r1}));
            }
            let pass = max2 <= tol;
            rep.check(pass);
            rep.push(json!({"check": "rll-6v", "summary": true, "r_form": "P*R_trig(lambda-mu, 2 eta)",
                "max_residual": max2, "max_residual_crossing_eta": max1, "tol": tol, "pass": pass}));
        }
        "4v" => {
            let conv = convention(conv)?;
            for s in 0..samples {
                let u = random_complex(&mut rng, 2.0, 1.0);
                let v = random_complex(&mut rng, 2.0, 1.0);
                for c in monodromy::four_vertex_r_candidates(u, v, conv)? {
                    rep.push(json!({"check": "rll-4v", "sample": s, "u": fmt_c(u), "u_prime": fmt_c(v),
                        "candidate": c.name, "check_form": c.check_form, "residual": c.residual}));
                }
            }
            rep.push(json!({"check": "rll-4v", "summary": true, "convention": conv.name(), "asserted": false}));
        }
        other => return Err(usage(format!("unknown model `{other}` (expected 4v or 6v)"))),
    }
    Ok(rep)
}

fn densified_entries(d: &Densified) -> Vec<Value> {
    let mut out = Vec::new();
    match d {
        Densified::Exact(m) => {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let z = m.get(i, j);
                    if !num_traits::Zero::is_zero(z) {
                        out.push(json!([i, j, fmt_gauss(z)]));
                    }
                }
            }
        }
        Densified::Float(m) => {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    let z = *m.get(i, j);
                    if z.norm() > 0.0 {
                        out.push(json!([i, j, fmt_c(z)]));
                    }
                }
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn monodromy_cmd(
    model: &str,
    n: usize,
    u: &str,
    symbolic: bool,
    conv: &Option<String>,
    order: &str,
    eta: f64,
    spin: &str,
    cap: usize,
) -> std::result::Result<Report, Failure> {
    let order: SiteOrder = order.parse()?;
    let u = parse_scalar(u)?;
    let params = match model {
        "4v" => ModelParams::FourVertex(FourVertexParams::new(u.clone()).with_convention(convention(conv)?)),
        "6v" => ModelParams::SixVertex(SixVertexParams::trig(u.to_c64(), Complex64::new(eta, 0.0))),
        "xxx" => ModelParams::XXX(XXXParams::new(u.clone(), parse_two_s(spin)?)),
        other => return Err(usage(format!("unknown model `{other}`"))),
    };
    let mut rep = Report::new();
    if symbolic {
        let t = monodromy::monodromy_symbolic_for(&params, n, order)?;
        for (l, c) in LABELS.iter().zip(t.cells()) {
            rep.push(json!({"entry": l.to_string(), "n": n, "terms": c.num_terms(), "word_sum": c.body_text().trim_end()}));
        }
    } else {
        let t = monodromy::monodromy(&params, n, order)?;
        for (l, c) in LABELS.iter().zip(t.cells()) {
            let d = c.densify_capped(cap)?;
            rep.push(json!({"entry": l.to_string(), "n": n, "model": model, "u": u.to_string(),
                "dim": c.dim(), "nonzeros": densified_entries(&d)}));
        }
    }
    Ok(rep)
}

fn yb_products_cmd(
    n: usize,
    u: Option<&str>,
    u_prime: Option<&str>,
    conv: &Option<String>,
    order: &str,
    tol: f64,
    seed: u64,
    cap: usize,
) -> std::result::Result<Report, Failure> {
    let order: SiteOrder = order.parse()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = match u {
        Some(s) => parse_scalar(s)?,
        None => random_exact(&mut rng),
    };
    let v = match u_prime {
        Some(s) => parse_scalar(s)?,
        None => random_exact(&mut rng),
    };
    let conv = convention(conv)?;
    let r = monodromy::yb_products_capped(&FourVertexParams::new(u.clone()).with_convention(conv), &v, n, order, cap)?;
    let mut rep = Report::new();
    for row in &r.rows {
        rep.push(json!({"label": row.label, "pair": row.pair, "n": n, "product_norm": row.product_norm,
            "commutator_norm": row.commutator_norm, "exchange_norm": row.exchange_norm}));
    }
    let pass = r.transfer_commutator_norm <= tol;
    rep.check(pass);
    rep.push(json!({"summary": true, "n": n, "u": u.to_string(), "u_prime": v.to_string(), "convention": conv.name(),
        "transfer_commutator_norm": r.transfer_commutator_norm, "tol": tol, "pass": pass}));
    Ok(rep)
}

fn build_lattice(args: &LatticeArgs) -> Result<(vertex::Lattice, VertexModel)> {
    let spec = match &args.lattice {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| QismError::InvalidParameter(format!("cannot read {}: {e}", p.display())))?;
            LatticeSpec::parse(&text)?
        }
        None => LatticeSpec { rows: args.rows, cols: args.cols, boundary: BoundarySpec::Preset(args.boundary.clone()) },
    };
    Ok((spec.build()?, args.mode.parse()?))
}

fn ring_text(l: &vertex::Lattice) -> String {
    l.ring().iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ")
}

fn poly_json(p: &vertex::WeightPoly, model: VertexModel) -> Value {
    match (model, p.triples()) {
        (VertexModel::FourVertex, Some(t)) => json!(t.iter().map(|(a, c, k)| json!([a, c, k.to_string()])).collect::<Vec<_>>()),
        _ => json!(p.quadruples().iter().map(|(a, b, c, k)| json!([a, b, c, k.to_string()])).collect::<Vec<_>>()),
    }
}

fn enumerate_z(args: &LatticeArgs, list: bool, probabilities: bool) -> std::result::Result<Report, Failure> {
    let (lat, model) = build_lattice(args)?;
    let mut rep = Report::new();
    let it = vertex::enumerate(&lat, &model.allowed())?;
    let consistent = it.boundary_consistent();
    let configs: Vec<vertex::LatticeConfig> = it.collect();
    if list {
        for (k, c) in configs.iter().enumerate() {
            rep.push(json!({"config": k, "types": c.types(), "counts": c.counts(), "weight": vertex::weight(c, model).to_string()}));
        }
    }
    let z = vertex::partition_enum(&lat, model)?;
    if probabilities && !z.is_zero() {
        let table = vertex::probability_table(&lat, model)?;
        let total = table.iter().fold(vertex::WeightPoly::zero(), |acc, (_, p)| acc.w_add(&p.num));
        let normalized = total == z;
        rep.check(normalized);
        for (k, (_, p)) in table.iter().enumerate() {
            rep.push(json!({"config": k, "probability_num": p.num.to_string(), "probability_den": p.den.to_string()}));
        }
        rep.push(json!({"check": "probability-normalization", "pass": normalized}));
    }
    let key = if model == VertexModel::FourVertex { "triples" } else { "quadruples" };
    rep.push(json!({"rows": lat.rows(), "cols": lat.cols(), "boundary": ring_text(&lat), "mode": args.mode,
        "boundary_consistent": consistent, "configurations": configs.len(), "z": z.to_string(), key: poly_json(&z, model)}));
    Ok(rep)
}

fn compare_z(args: &LatticeArgs, dictionary: bool, conv: &Option<String>) -> std::result::Result<Report, Failure> {
    let (lat, model) = build_lattice(args)?;
    let ze = vertex::partition_enum(&lat, model)?;
    let zt = vertex::partition_transfer(&lat, model)?;
    let same = ze == zt;
    let mut rep = Report::new();
    rep.check(same);
    if dictionary {
        for c in vertex::derive_weight_dictionary(convention(conv)?)? {
            let dict = c.dictionary.as_ref().map(|d| d.iter().map(|(t, l)| (t.to_string(), l.to_string())).collect::<BTreeMap<_, _>>());
            rep.push(json!({"check": "l-dictionary", "aux0": c.map.aux0, "q0": c.map.q0, "dictionary": dict,
                "lattices_checked": c.lattices_checked, "mismatches": c.mismatches, "passes": c.passes(),
                "adopted": c.map == vertex::ADOPTED_ORIENTATION}));
        }
    }
    rep.push(json!({"check": "compare-z", "rows": lat.rows(), "cols": lat.cols(), "boundary": ring_text(&lat), "mode": args.mode,
        "enumeration": ze.to_string(), "transfer": zt.to_string(), "identical": same,
        "message": if same { "polynomials identical" } else { "polynomials differ" }}));
    Ok(rep)
}

/// `name=value` pairs; names that parse as atoms (with brackets or a tag)
/// become atom values, the rest spectral variables.
fn parse_assign(s: Option<&str>) -> Result<(BTreeMap<String, Scalar>, BTreeMap<Atom, Scalar>)> {
    let (mut vars, mut atoms) = (BTreeMap::new(), BTreeMap::new());
    let Some(s) = s else { return Ok((vars, atoms)) };
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    for p in parts.into_iter().filter(|p| !p.trim().is_empty()) {
        let (k, v) = p.split_once('=').ok_or_else(|| QismError::InvalidParameter(format!("expected name=value, got `{p}`")))?;
        let (k, v) = (k.trim(), parse_scalar(v.trim())?);
        if k.contains('[') || k.contains('(') {
            match PExpr::parse(k)? {
                PExpr::Atom(a) => {
                    atoms.insert(a, v);
                }
                _ => return Err(QismError::InvalidParameter(format!("`{k}` is not an atom"))),
            }
        } else {
            vars.insert(k.to_string(), v.clone());
            atoms.insert(Atom::new(k, ""), v);
        }
    }
    Ok((vars, atoms))
}

fn read_table(path: &Option<PathBuf>) -> Result<Option<ElemBracketTable>> {
    path.as_ref()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|e| QismError::InvalidParameter(format!("cannot read {}: {e}", p.display())))?;
            ElemBracketTable::parse(&text)
        })
        .transpose()
}

fn poisson_expand(
    expr: &str,
    strategy: Strategy,
    depth_cap: usize,
    table: &Option<PathBuf>,
    diagonal: bool,
    assign: Option<&str>,
    strict: bool,
) -> std::result::Result<Report, Failure> {
    let e = PExpr::parse(expr)?;
    let nf = poisson::expand_with(&e, strategy, depth_cap)?;
    let other = match strategy {
        Strategy::LeftFirst => Strategy::RightFirst,
        Strategy::RightFirst => Strategy::LeftFirst,
    };
    let confluent = poisson::expand_with(&e, other, depth_cap)? == nf;
    let mut rep = Report::new();
    rep.check(confluent);
    for t in nf.terms() {
        rep.push(json!({"coefficient": t.coefficient.to_string(), "left": t.left.to_string(), "right": t.right.to_string()}));
    }
    let count = nf.count_elementary();
    let mut summary = json!({"expr": e.to_string(), "elementary": count, "message": format!("{count} elementary brackets"),
        "normal_form": nf.to_string(), "confluent": confluent});
    let table = match (read_table(table)?, diagonal) {
        (Some(t), _) => Some(t),
        (None, true) => Some(ElemBracketTable::inverse_difference_diagonal()),
        (None, false) => None,
    };
    if let Some(t) = table {
        let (vars, atoms) = parse_assign(assign)?;
        let mode = if strict { SubstituteMode::Strict } else { SubstituteMode::Lenient };
        let value = poisson::substitute(&nf, &t, &vars, mode)?;
        summary["substituted"] = json!(value.to_string());
        summary["approximate"] = json!(t.any_approximate());
        if let Ok(x) = value.evaluate(&atoms) {
            summary["value"] = json!(x.to_string());
        }
    }
    rep.push(summary);
    Ok(rep)
}

fn poisson_structure() -> Result<Report> {
    let mut rep = Report::new();
    let expected = [[9, 12, 12, 15], [12, 16, 16, 20], [12, 16, 16, 20], [15, 20, 20, 25]];
    for r in poisson::structure_check()? {
        for g in &r.groups {
            for e in &g.entries {
                let ok = e.elementary == expected[e.left_block - 1][e.right_block - 1]
                    && e.elementary == poisson::count_elementary(poisson::BLOCK_SIZES[e.left_block - 1], poisson::BLOCK_SIZES[e.right_block - 1])?;
                rep.check(ok);
                rep.push(json!({"model": r.model, "group": g.group, "bracket": format!("{{I{}(u), I{}(u')}}", e.left_block, e.right_block),
                    "elementary": e.elementary, "diagonal": e.diagonal, "constant": e.constant, "completed": g.completed}));
            }
        }
        rep.push(json!({"model": r.model, "summary": true, "total_brackets": r.total_brackets, "counts": r.counts()}));
    }
    // diagonal table on the first group's diagonal terms at u = 2, u' = 1
    let t = ElemBracketTable::inverse_difference_diagonal();
    let vars = BTreeMap::from([("u".to_string(), Scalar::int(2)), ("u'".to_string(), Scalar::int(1))]);
    let mut values = Vec::new();
    for j in 1..=poisson::BLOCK_SIZES[0] {
        let e = PExpr::bracket(PExpr::Atom(Atom::generator(1, j, "u")), PExpr::Atom(Atom::generator(1, j, "u'")));
        let v = poisson::substitute(&poisson::expand(&e)?, &t, &vars, SubstituteMode::Strict)?;
        values.push(v.to_string());
    }
    rep.push(json!({"check": "diagonal-table", "u": "2", "u_prime": "1", "values": values, "approximate": true}));
    Ok(rep)
}

fn random_pexpr(rng: &mut ChaCha8Rng, atoms: &[PExpr], depth: usize) -> PExpr {
    let pick = |rng: &mut ChaCha8Rng| atoms[rng.gen_range(0..atoms.len())].clone();
    let roll = rng.gen_range(0..10);
    if depth > 0 && roll < 3 {
        return PExpr::bracket(random_pexpr(rng, atoms, depth - 1), random_pexpr(rng, atoms, depth - 1));
    }
    let terms = rng.gen_range(1..=2);
    let mut sum = Vec::new();
    for _ in 0..terms {
        let factors = rng.gen_range(1..=2);
        let mut prod: Vec<PExpr> = (0..factors).map(|_| pick(rng)).collect();
        if depth > 0 && rng.gen_bool(0.3) {
            prod.push(random_pexpr(rng, atoms, depth - 1));
        }
        let c = Scalar::int(rng.gen_range(-3..=3));
        sum.push(PExpr::scale(c, PExpr::Product(prod)));
    }
    PExpr::Sum(sum)
}

fn random_constant_table(rng: &mut ChaCha8Rng, atoms: &[Atom]) -> ElemBracketTable {
    let mut t = ElemBracketTable::new();
    for i in 0..atoms.len() {
        for j in i + 1..atoms.len() {
            let v = ValueExpr::Num(Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)));
            t.insert(atoms[i].clone(), atoms[j].clone(), TableValue::Value(v), false).expect("distinct atoms");
        }
    }
    t
}

#[allow(clippy::too_many_arguments)]
fn jacobi_test(
    samples: usize,
    natoms: usize,
    depth: usize,
    f: Option<&str>,
    g: Option<&str>,
    h: Option<&str>,
    table: &Option<PathBuf>,
    assign: Option<&str>,
    seed: u64,
) -> std::result::Result<Report, Failure> {
    let mut rep = Report::new();
    if let (Some(f), Some(g), Some(h)) = (f, g, h) {
        let (f, g, h) = (PExpr::parse(f)?, PExpr::parse(g)?, PExpr::parse(h)?);
        let t = read_table(table)?.ok_or_else(|| usage("--table is required with explicit f, g, h"))?;
        let (vars, _) = parse_assign(assign)?;
        let r = poisson::jacobi_residual(&f, &g, &h, &t, &vars)?;
        if r.constant_table {
            rep.check(r.holds());
        }
        rep.push(json!({"check": "jacobi", "residual": r.residual.to_string(), "zero": r.holds(), "asserted": r.constant_table}));
        return Ok(rep);
    }
    if natoms == 0 {
        return Err(usage("--atoms must be at least 1"));
    }
    let atoms: Vec<Atom> = (1..=natoms).map(|k| Atom::new(format!("x{k}"), "")).collect();
    let leaves: Vec<PExpr> = atoms.iter().cloned().map(PExpr::Atom).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cases: Vec<_> = (0..samples)
        .map(|_| {
            let t = random_constant_table(&mut rng, &atoms);
            let f = random_pexpr(&mut rng, &leaves, depth);
            let g = random_pexpr(&mut rng, &leaves, depth);
            let h = random_pexpr(&mut rng, &leaves, depth);
            (f, g, h, t)
        })
        .collect();
    let results: Vec<Result<poisson::JacobiReport>> =
        cases.par_iter().map(|(f, g, h, t)| poisson::jacobi_residual(f, g, h, t, &BTreeMap::new())).collect();
    let mut zeros = 0;
    for (k, ((f, g, h, _), r)) in cases.iter().zip(results).enumerate() {
        let r = r?;
        zeros += r.holds() as usize;
        rep.push(json!({"check": "jacobi", "sample": k, "f": f.to_string(), "g": g.to_string(), "h": h.to_string(),
            "residual_terms": r.residual.num_terms(), "zero": r.holds()}));
    }
    let pass = zeros == samples;
    rep.check(pass);
    rep.push(json!({"check": "jacobi", "summary": true, "samples": samples, "zero_residuals": zeros, "pass": pass}));
    Ok(rep)
}

fn local_sub(a: &LocalOperator, b: &LocalOperator) -> Result<LocalOperator> {
    a.add(&b.scale(&Scalar::int(-1)))
}

fn xxx_check(spins: &str, n: usize, samples: usize, tol: f64, seed: u64, cap: usize) -> Result<Report> {
    let mut rep = Report::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for spin in spins.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let two_s = parse_two_s(spin)?;
        let m = models::spin_matrices(two_s)?;
        let su2 = local_sub(&m.s3.commutator(&m.splus)?, &m.splus)?.is_zero()
            && m.s3.commutator(&m.sminus)?.add(&m.sminus)?.is_zero()
            && local_sub(&m.splus.commutator(&m.sminus)?, &m.s3.scale(&Scalar::int(2)))?.is_zero();
        let d = m.s3.dim();
        let cas = m.s3.matmul(&m.s3)?.add(&m.splus.matmul(&m.sminus)?.add(&m.sminus.matmul(&m.splus)?)?.scale(&Scalar::ratio(1, 2)))?;
        let s = Scalar::ratio(two_s as i64, 2);
        let want = LocalOperator::identity(d).scale(&(&s * &(&s + &Scalar::one())));
        let casimir = cas == want;
        rep.check(su2 && casimir);
        rep.push(json!({"check": "su2", "spin": spin, "dim": d, "relations": su2, "casimir": casimir}));

        let lambda = random_exact(&mut rng);
        let params = XXXParams::new(lambda.clone(), two_s);
        let mut phi_ok = true;
        for site in 0..n.min(2) {
            let l = models::lxxx(site, &params, n.min(2))?;
            for (g, cell) in [XXXGenerator::A, XXXGenerator::B, XXXGenerator::C, XXXGenerator::D].into_iter().zip(l.cells()) {
                let img = models::phi_map(g, &params, site, n.min(2))?;
                phi_ok &= img.densify_exact()? == cell.densify_exact()?;
            }
        }
        rep.check(phi_ok);
        rep.push(json!({"check": "phi-map", "spin": spin, "lambda": lambda.to_string(), "matches_l_operator": phi_ok}));

        let mut jobs = Vec::new();
        for len in 1..=n {
            for k in 0..samples {
                jobs.push((len, k, random_float_scalar(&mut rng), random_float_scalar(&mut rng)));
            }
        }
        let res: Vec<Result<f64>> = jobs
            .par_iter()
            .map(|(len, _, l, m)| {
                let p = ModelParams::XXX(XXXParams::new(l.clone(), two_s));
                monodromy::commutation_residual(&p, l, m, *len, SiteOrder::Ascending, cap)
            })
            .collect();
        let mut max: f64 = 0.0;
        for ((len, k, l, m), r) in jobs.iter().zip(res) {
            let r = r?;
            max = max.max(r);
            rep.push(json!({"check": "xxx-commutator", "spin": spin, "n": len, "sample": k, "lambda": l.to_string(), "mu": m.to_string(), "residual": r}));
        }
        let pass = max <= tol;
        rep.check(pass);
        rep.push(json!({"check": "xxx-commutator", "summary": true, "spin": spin, "max_residual": max, "tol": tol, "pass": pass}));
    }
    Ok(rep)
}

fn fixture_diff(which: &str, file: &Option<PathBuf>, n: Option<usize>, conv: &Option<String>) -> std::result::Result<Report, Failure> {
    let conv = convention(conv)?;
    let reports = match file {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("cannot read {}: {e}", p.display())))?;
            let n = match n {
                Some(n) => n,
                None => text
                    .lines()
                    .find_map(|l| l.trim().strip_prefix("@chain_len").and_then(|x| x.trim().parse().ok()))
                    .ok_or_else(|| usage("--n is required when the file has no @chain_len"))?,
            };
            vec![fixtures::diff_text(&text, n, conv, &p.display().to_string())?]
        }
        None => {
            let list: Vec<Fixture> = if which == "all" { Fixture::all().to_vec() } else { vec![which.parse()?] };
            list.into_iter().map(|f| fixtures::diff_builtin(f, conv)).collect::<Result<_>>()?
        }
    };
    let mut rep = Report::new();
    for r in reports {
        for e in &r.entries {
            for t in &e.terms {
                rep.push(json!({"fixture": r.fixture, "entry": e.entry, "word": t.word, "status": t.status, "engine": t.engine, "transcribed": t.fixture}));
            }
            rep.push(json!({"fixture": r.fixture, "entry": e.entry, "summary": true, "matched": e.matched,
                "coefficient_mismatch": e.coefficient_mismatch, "missing_in_fixture": e.missing_in_fixture,
                "extra_in_fixture": e.extra_in_fixture, "vanished_in_fixture": e.vanished_in_fixture, "support_match": e.support_match}));
        }
        rep.push(json!({"fixture": r.fixture, "convention": r.convention, "complete": true, "all_supports_match": r.all_supports_match()}));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn run_str(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("qism").chain(args.iter().copied()), &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn coverage_table_is_total_and_unique() {
        let names: BTreeSet<String> = subcommand_names().into_iter().collect();
        assert_eq!(names.len(), 12);
        let checks: Vec<&str> = CHECK_COVERAGE.iter().map(|(c, _)| *c).collect();
        let unique: BTreeSet<&str> = checks.iter().copied().collect();
        assert_eq!(unique.len(), checks.len(), "a check is listed twice");
        for (_, sub) in CHECK_COVERAGE {
            assert!(names.contains(*sub), "{sub} not registered");
        }
        for n in &names {
            assert!(CHECK_COVERAGE.iter().any(|(_, s)| s == n), "{n} exposes no check");
        }
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["no-such-command"]).0, 2);
        assert_eq!(run_str(&["ybe-check", "--bogus"]).0, 2);
        assert_eq!(run_str(&["enumerate-z", "--rows", "5", "--cols", "5"]).0, 2);
        assert_eq!(run_str(&["transfer-commutator", "--model", "xxx"]).0, 2);
    }

    #[test]
    fn poisson_expand_reports_nine() {
        let (code, out) = run_str(&["poisson-expand", "--expr", "{I[1,1](u)+I[1,2](u)+I[1,3](u), I[1,1](v)+I[1,2](v)+I[1,3](v)}"]);
        assert_eq!(code, 0);
        assert!(out.contains("9 elementary brackets"));
    }

    #[test]
    fn compare_z_dwbc() {
        let (code, out) = run_str(&["compare-z", "--rows", "3", "--cols", "3", "--boundary", "dwbc", "--mode", "4v"]);
        assert_eq!(code, 0);
        assert!(out.contains("polynomials identical"));
    }

    #[test]
    fn flags_override_config() {
        let dir = std::env::temp_dir().join(format!("qism-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let cfg = dir.join("run.toml");
        std::fs::write(&cfg, "rows = 1\ncols = 1\nboundary = \"ferro\"\nmode = \"6v\"\n").unwrap();
        let (code, out) = run_str(&["enumerate-z", "--config", cfg.to_str().unwrap(), "--cols", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"cols\":2"));
        assert!(out.contains("\"mode\":\"6v\""));
    }

    #[test]
    fn table_format_renders() {
        let (code, out) = run_str(&["poisson-structure", "--format", "table"]);
        assert_eq!(code, 0);
        assert!(out.lines().next().unwrap().contains("bracket"));
    }

    #[test]
    fn scalar_literals() {
        assert_eq!(parse_scalar("1+i").unwrap(), Scalar::gauss(1, 1));
        assert_eq!(parse_scalar("-3/2").unwrap(), Scalar::ratio(-3, 2));
        assert!(!parse_scalar("0.25").unwrap().is_exact());
        assert_eq!(parse_two_s("1/2").unwrap(), 1);
        assert_eq!(parse_two_s("3/2").unwrap(), 3);
        assert!(parse_two_s("1/3").is_err());
    }
}
