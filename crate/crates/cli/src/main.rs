//! `tcyclo`: coefficients, heights, family maxima, bounds, witnesses and table
//! reproduction for ternary cyclotomic polynomials.
//!
//! Exit codes: 0 success, 1 a difference was found (table diff, `--check`
//! mismatch, refuted witness), 2 domain error, 3 budget exceeded.

mod tables;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyclo_core::binary::BinaryContext;
use cyclo_core::bounds::bounds_report;
use cyclo_core::family::{compute_mp, compute_mpq, conductor_scan, CacheLine, FamilyOptions, SummaryRecord};
use cyclo_core::kaplan::{HeightOptions, HeightRecord, TernaryInstance, DEFAULT_KAPLAN_DEGREE_CAP, DEFAULT_VECTOR_DEGREE_CAP};
use cyclo_core::numtheory::{binary_factors, ternary_factors};
use cyclo_core::oracle::{CyclotomicOracle, DEFAULT_ORACLE_CAP};
use cyclo_core::witnesses::{instantiate, verify, verify_all, LemmaId, MatrixRow, Outcome};
use cyclo_core::Error;
use serde::Serialize;

use tables::{diff_table, family_rows, TableId, TableOptions, CONJECTURAL_BANNER};

#[derive(Parser)]
#[command(name = "tcyclo", version, about = "Ternary cyclotomic coefficients, heights and family maxima")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Machine-readable JSON output.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// CSV output with a header row.
    #[arg(long, global = true)]
    csv: bool,

    /// Per-instance degree cap for Kaplan computations.
    #[arg(long, global = true, default_value_t = DEFAULT_KAPLAN_DEGREE_CAP)]
    degree_cap: u64,

    /// Largest n expanded by the polynomial oracle.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: u64,

    /// More logging (repeat for more); RUST_LOG also works.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient a_n(k).
    Coeff {
        n: u64,
        k: u64,
        #[command(flatten)]
        path: PathArgs,
    },
    /// All coefficients of Phi_n.
    Poly {
        n: u64,
        #[command(flatten)]
        path: PathArgs,
    },
    /// Height A(n), given n or its three prime factors.
    Height {
        #[arg(num_args = 1..=3, required = true)]
        n: Vec<u64>,
        /// Scan every index instead of the palindromic half.
        #[arg(long)]
        full_scan: bool,
        #[command(flatten)]
        path: PathArgs,
    },
    /// M(p;q), the largest height over all primes r > q.
    Mpq {
        p: u64,
        q: u64,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// M(p;q) for every prime p < q <= qmax.
    Mp {
        p: u64,
        #[arg(long)]
        qmax: u64,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Every applicable bound and exact rule for M(p;q).
    Bounds { p: u64, q: u64 },
    /// Instantiate one witness lemma and check its predicted coefficient.
    Verify {
        /// Lemma name, e.g. moeller, wilms2, wilms-1, p-1, elf11, l11_3, l19, d_2p_m1.
        lemma: LemmaId,
        #[arg(long)]
        p: Option<u64>,
        /// Defaults to the smallest admissible q.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        search_cap: Option<u64>,
    },
    /// Every witness lemma for every admissible p <= pmax.
    VerifyAll {
        #[arg(long, default_value_t = 19)]
        pmax: u64,
    },
    /// Recompute an embedded reference table and diff it.
    Table {
        /// T1, T4, T5, T6, T_NEGENTIEN, or one of the conjectural Q13, Q17, Q19, Q23.
        table: TableId,
        #[arg(long)]
        qmax: Option<u64>,
        /// Keep only these rows (p for T1; the exact q or the residue otherwise).
        #[arg(long, value_delimiter = ',')]
        rows: Option<Vec<u64>>,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Look for a modulus d with M(p;q) eventually a function of q mod d. Exploratory.
    ScanConductor {
        p: u64,
        #[arg(long)]
        qmax: u64,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        d: Vec<u64>,
        #[command(flatten)]
        family: FamilyArgs,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Kaplan for ternary n, oracle otherwise.
    Auto,
    Kaplan,
    Oracle,
}

#[derive(Args)]
struct PathArgs {
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Compute by two independent routes and compare.
    #[arg(long)]
    check: bool,
}

#[derive(Args)]
struct FamilyArgs {
    /// Compute every primitive class instead of one per {c, -c} pair.
    #[arg(long)]
    full_classes: bool,
    /// JSON-lines cache; finished classes are reused on later runs.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Human,
    Json,
    Csv,
}

enum Failure {
    Core(Error),
    Output(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

type CmdResult = std::result::Result<bool, Failure>;

struct Ctx {
    format: Format,
    degree_cap: u64,
    oracle: CyclotomicOracle,
}

impl Ctx {
    fn family(&self, args: &FamilyArgs) -> FamilyOptions {
        FamilyOptions {
            full_classes: args.full_classes,
            cache: args.cache.clone(),
            degree_cap: self.degree_cap,
            ..Default::default()
        }
    }

    fn height_opts(&self, full_scan: bool) -> HeightOptions {
        HeightOptions { full_scan, degree_cap: self.degree_cap, ..Default::default() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let ctx = Ctx {
        format: match (cli.json, cli.csv) {
            (true, _) => Format::Json,
            (_, true) => Format::Csv,
            _ => Format::Human,
        },
        degree_cap: cli.degree_cap,
        oracle: CyclotomicOracle::new(cli.oracle_cap),
    };
    match run(&ctx, cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
        Err(Failure::Output(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` means the command ran but found a difference.
fn run(ctx: &Ctx, command: Command) -> CmdResult {
    match command {
        Command::Coeff { n, k, path } => cmd_coeff(ctx, n, k, &path),
        Command::Poly { n, path } => cmd_poly(ctx, n, &path),
        Command::Height { n, full_scan, path } => cmd_height(ctx, &n, full_scan, &path),
        Command::Mpq { p, q, family } => cmd_mpq(ctx, p, q, &family),
        Command::Mp { p, qmax, family } => cmd_mp(ctx, p, qmax, &family),
        Command::Bounds { p, q } => cmd_bounds(ctx, p, q),
        Command::Verify { lemma, p, q, search_cap } => cmd_verify(ctx, lemma, p, q, search_cap),
        Command::VerifyAll { pmax } => cmd_verify_all(ctx, pmax),
        Command::Table { table, qmax, rows, family } => cmd_table(ctx, table, qmax, rows, &family),
        Command::ScanConductor { p, qmax, d, family } => cmd_scan_conductor(ctx, p, qmax, &d, &family),
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn csv_out() -> csv::Writer<io::Stdout> {
    csv::Writer::from_writer(io::stdout())
}

fn write_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<(), Failure> {
    let mut w = csv_out();
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn emit<T: Serialize>(ctx: &Ctx, value: &T, human: impl FnOnce() -> String) -> Result<(), Failure> {
    match ctx.format {
        Format::Json => print_json(value),
        Format::Csv => write_csv([value]),
        Format::Human => {
            println!("{}", human());
            Ok(())
        }
    }
}

/// The route `auto` takes for `n`, after checking an explicit choice is usable.
fn resolve(method: Method, n: u64) -> Result<Method, Failure> {
    match (method, ternary_factors(n)) {
        (Method::Auto, Some(_)) | (Method::Kaplan, Some(_)) => Ok(Method::Kaplan),
        (Method::Kaplan, None) => Err(Error::BadPrimes(format!("{n} is not a product of three distinct odd primes")).into()),
        _ => Ok(Method::Oracle),
    }
}

fn ternary(n: u64) -> Result<TernaryInstance, Failure> {
    let (p, q, r) = ternary_factors(n).ok_or_else(|| Error::BadPrimes(format!("{n} is not ternary")))?;
    Ok(TernaryInstance::new(p, q, r)?)
}

fn report_mismatch(what: &str, a: (&str, String), b: (&str, String)) -> bool {
    if a.1 == b.1 {
        return true;
    }
    eprintln!("mismatch in {what}: {} gives {}, {} gives {}", a.0, a.1, b.0, b.1);
    false
}

#[derive(Serialize)]
struct CoeffOut {
    n: u64,
    k: u64,
    value: i64,
}

fn cmd_coeff(ctx: &Ctx, n: u64, k: u64, path: &PathArgs) -> CmdResult {
    let kaplan = |n| -> Result<i64, Failure> { Ok(ternary(n)?.coefficient(k)) };
    let oracle = |n| -> Result<i64, Failure> { Ok(ctx.oracle.cyclotomic(n)?.coeff(k as usize)) };
    let value = match resolve(path.method, n)? {
        Method::Kaplan => kaplan(n)?,
        _ => oracle(n)?,
    };
    let mut same = true;
    if path.check {
        let (name, other) = second_route(n, path.method)?;
        let v2 = match other {
            Route::Kaplan => kaplan(n)?,
            Route::Oracle => oracle(n)?,
            Route::Binary => {
                let (p, q) = binary_factors(n).expect("binary route only chosen for binary n");
                let ctx = BinaryContext::new(p, q)?;
                if k < p * q { ctx.coefficient(k)? } else { 0 }
            }
        };
        same = report_mismatch(&format!("a_{n}({k})"), ("first route", value.to_string()), (name, v2.to_string()));
    }
    emit(ctx, &CoeffOut { n, k, value }, || value.to_string())?;
    Ok(same)
}

enum Route {
    Kaplan,
    Oracle,
    Binary,
}

/// The independent route used by `--check`: the oracle against Kaplan or
/// Lam-Leung, whichever applies to `n`.
fn second_route(n: u64, method: Method) -> Result<(&'static str, Route), Failure> {
    let first = resolve(method, n)?;
    Ok(match first {
        Method::Kaplan => ("oracle", Route::Oracle),
        _ if ternary_factors(n).is_some() => ("kaplan", Route::Kaplan),
        _ if binary_factors(n).is_some() => ("lam-leung", Route::Binary),
        _ => {
            return Err(Error::BadPrimes(format!("--check needs a binary or ternary n, got {n}")).into());
        }
    })
}

#[derive(Serialize)]
struct PolyOut {
    n: u64,
    coefficients: Vec<i64>,
}

#[derive(Serialize)]
struct PolyRow {
    k: usize,
    value: i64,
}

fn cmd_poly(ctx: &Ctx, n: u64, path: &PathArgs) -> CmdResult {
    let kaplan = |n| -> Result<Vec<i64>, Failure> { Ok(ternary(n)?.coefficient_vector(ctx.degree_cap.min(DEFAULT_VECTOR_DEGREE_CAP))?) };
    let oracle = |n| -> Result<Vec<i64>, Failure> { Ok(ctx.oracle.cyclotomic(n)?.coeffs().to_vec()) };
    let coefficients = match resolve(path.method, n)? {
        Method::Kaplan => kaplan(n)?,
        _ => oracle(n)?,
    };
    let mut same = true;
    if path.check {
        let (name, other) = second_route(n, path.method)?;
        let mut v2 = match other {
            Route::Kaplan => kaplan(n)?,
            Route::Oracle => oracle(n)?,
            Route::Binary => {
                let (p, q) = binary_factors(n).expect("binary route only chosen for binary n");
                BinaryContext::new(p, q)?.coefficients()
            }
        };
        v2.truncate(coefficients.len());
        same = report_mismatch(&format!("Phi_{n}"), ("first route", format!("{coefficients:?}")), (name, format!("{v2:?}")));
    }
    match ctx.format {
        Format::Json => print_json(&PolyOut { n, coefficients })?,
        Format::Csv => write_csv(coefficients.iter().enumerate().map(|(k, &value)| PolyRow { k, value }))?,
        Format::Human => {
            let s: Vec<String> = coefficients.iter().map(i64::to_string).collect();
            println!("{}", s.join(" "));
        }
    }
    Ok(same)
}

#[derive(Serialize)]
struct HeightOut {
    n: u64,
    height: u64,
    witness_k: u64,
    witness_value: i64,
}

impl HeightOut {
    fn new(n: u64, h: &HeightRecord) -> Self {
        HeightOut { n, height: h.height, witness_k: h.witness_k, witness_value: h.witness_value }
    }
}

fn cmd_height(ctx: &Ctx, args: &[u64], full_scan: bool, path: &PathArgs) -> CmdResult {
    let n = match args {
        [n] => *n,
        [p, q, r] => p.checked_mul(*q).and_then(|x| x.checked_mul(*r)).ok_or_else(|| Error::Overflow(format!("{p}*{q}*{r}")))?,
        _ => return Err(Error::BadPrimes("give n, or p q r".into()).into()),
    };
    let kaplan = |n| -> Result<HeightRecord, Failure> { Ok(ternary(n)?.height(ctx.height_opts(full_scan))?) };
    let oracle = |n| -> Result<HeightRecord, Failure> {
        let (height, k, value) = ctx.oracle.cyclotomic(n)?.height_with_witness();
        Ok(HeightRecord { factors: vec![n], height, witness_k: k as u64, witness_value: value })
    };
    let h = match resolve(path.method, n)? {
        Method::Kaplan => kaplan(n)?,
        _ => oracle(n)?,
    };
    let out = HeightOut::new(n, &h);
    let mut same = true;
    if path.check {
        let (name, other) = second_route(n, path.method)?;
        let h2 = match other {
            Route::Kaplan => kaplan(n)?,
            Route::Oracle => oracle(n)?,
            // binary cyclotomic polynomials are flat
            Route::Binary => {
                let (p, q) = binary_factors(n).expect("binary route only chosen for binary n");
                let c = BinaryContext::new(p, q)?.coefficients();
                let (k, v) = c.iter().enumerate().max_by_key(|&(k, v)| (v.unsigned_abs(), std::cmp::Reverse(k))).expect("nonempty");
                HeightRecord { factors: vec![p, q], height: v.unsigned_abs(), witness_k: k as u64, witness_value: *v }
            }
        };
        let key = |h: &HeightRecord| format!("{} at k = {}", h.height, h.witness_k);
        same = report_mismatch(&format!("A({n})"), ("first route", key(&h)), (name, key(&h2)));
    }
    emit(ctx, &out, || format!("A({n}) = {} (k = {}, a = {})", out.height, out.witness_k, out.witness_value))?;
    Ok(same)
}

fn cmd_mpq(ctx: &Ctx, p: u64, q: u64, args: &FamilyArgs) -> CmdResult {
    let res = compute_mpq(p, q, &ctx.family(args))?;
    match ctx.format {
        Format::Json => {
            for line in res.cache_lines() {
                print_json(&line)?;
            }
        }
        Format::Csv => write_csv(res.class_heights.values())?,
        Format::Human => {
            println!("M({p};{q}) = {}", res.m);
            let w = &res.witness;
            println!("witness: class {} (r = {}), a({}) = {}", w.class, w.r, w.witness_k, w.witness_value);
            println!("{:>8} {:>10} {:>4}", "class", "r", "A");
            for rec in res.class_heights.values() {
                println!("{:>8} {:>10} {:>4}", rec.class, rec.r, rec.a);
            }
            if res.paired {
                println!("(one class per {{c, -c}} pair; A(c) = A(-c))");
            }
        }
    }
    Ok(true)
}

fn cmd_mp(ctx: &Ctx, p: u64, qmax: u64, args: &FamilyArgs) -> CmdResult {
    let mp = compute_mp(p, qmax, &ctx.family(args))?;
    let summaries = mp.values.values().map(|f| match f.cache_lines().pop() {
        Some(CacheLine::Summary(s)) => s,
        _ => unreachable!("cache_lines ends with the summary"),
    });
    match ctx.format {
        Format::Json => {
            for s in summaries {
                print_json(&s)?;
            }
        }
        Format::Csv => write_csv(summaries)?,
        Format::Human => {
            println!("{:>6} {:>4}", "q", "M");
            for (q, f) in &mp.values {
                println!("{q:>6} {:>4}", f.m);
            }
            println!("max M({p};q) for q <= {qmax}: {} at q = {} (a lower bound for M({p}))", mp.running_max, mp.argmax_q);
        }
    }
    Ok(true)
}

fn cmd_bounds(ctx: &Ctx, p: u64, q: u64) -> CmdResult {
    let report = bounds_report(p, q)?;
    match ctx.format {
        Format::Json => print_json(&report)?,
        Format::Csv => write_csv(&report.entries)?,
        Format::Human => {
            println!("bounds for M({p};{q})");
            println!("{:<14} {:<6} {:>6}  {:<8} note", "name", "kind", "value", "binding");
            for e in &report.entries {
                let kind = format!("{:?}", e.kind).to_lowercase();
                println!("{:<14} {:<6} {:>6}  {:<8} {}", e.name, kind, e.value, if e.binding { "yes" } else { "" }, e.note);
            }
            match report.determined {
                Some(v) => println!("M({p};{q}) = {v}"),
                None => println!("{} <= M({p};{q}) <= {}", report.lower, report.upper),
            }
        }
    }
    Ok(true)
}

fn cmd_verify(ctx: &Ctx, lemma: LemmaId, p: Option<u64>, q: Option<u64>, search_cap: Option<u64>) -> CmdResult {
    let p = p
        .or(lemma.fixed_p())
        .ok_or_else(|| Error::ConditionUnsatisfiable(format!("{lemma} needs --p")))?;
    let spec = instantiate(lemma, p, q, search_cap)?;
    let v = verify(&spec)?;
    let confirmed = v.outcome == Outcome::Confirmed;
    if ctx.format == Format::Csv {
        let row = MatrixRow {
            lemma,
            p,
            q: Some(spec.q),
            r: Some(spec.r),
            k: Some(spec.k),
            predicted: Some(spec.predicted),
            computed: Some(v.computed),
            outcome: Some(v.outcome),
            error: None,
        };
        write_csv([MatrixCsvRow::from(&row)])?;
        return Ok(confirmed);
    }
    emit(ctx, &v, || {
        let s = &v.spec;
        let mut out = format!(
            "{lemma}: p = {}, q = {}, r = {}, k = {}, predicted {}, computed {}: {}",
            s.p,
            s.q,
            s.r,
            s.k,
            s.predicted,
            v.computed,
            if confirmed { "confirmed" } else { "REFUTED" }
        );
        if let Some(a) = s.aux {
            out.push_str(&format!("\n  auxiliary parameter: {a}"));
        }
        out.push_str(&format!("\n  q: {}\n  r: {}", s.q_conditions, s.r_conditions.join("; ")));
        for n in &s.notes {
            out.push_str(&format!("\n  note: {n}"));
        }
        out
    })?;
    Ok(confirmed)
}

#[derive(Serialize)]
struct MatrixCsvRow {
    lemma: &'static str,
    p: u64,
    q: Option<u64>,
    r: Option<u64>,
    k: Option<u64>,
    predicted: Option<i64>,
    computed: Option<i64>,
    outcome: String,
    error: Option<String>,
}

impl From<&MatrixRow> for MatrixCsvRow {
    fn from(r: &MatrixRow) -> Self {
        MatrixCsvRow {
            lemma: r.lemma.name(),
            p: r.p,
            q: r.q,
            r: r.r,
            k: r.k,
            predicted: r.predicted,
            computed: r.computed,
            outcome: r.outcome.map_or("error".into(), |o| format!("{o:?}").to_lowercase()),
            error: r.error.clone(),
        }
    }
}

fn cmd_verify_all(ctx: &Ctx, pmax: u64) -> CmdResult {
    let m = verify_all(pmax);
    let opt = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
    match ctx.format {
        Format::Json => print_json(&m)?,
        Format::Csv => write_csv(m.rows.iter().map(MatrixCsvRow::from))?,
        Format::Human => {
            println!("{:<10} {:>3} {:>6} {:>10} {:>16} {:>5} {:>5}  outcome", "lemma", "p", "q", "r", "k", "pred", "comp");
            for r in &m.rows {
                let outcome = match (&r.outcome, &r.error) {
                    (Some(Outcome::Confirmed), _) => "confirmed".to_string(),
                    (Some(Outcome::Refuted), _) => "REFUTED".to_string(),
                    (None, e) => format!("error: {}", e.clone().unwrap_or_default()),
                };
                println!(
                    "{:<10} {:>3} {:>6} {:>10} {:>16} {:>5} {:>5}  {outcome}",
                    r.lemma.name(),
                    r.p,
                    opt(r.q),
                    opt(r.r),
                    opt(r.k),
                    r.predicted.map_or("-".into(), |x| x.to_string()),
                    r.computed.map_or("-".into(), |x| x.to_string()),
                );
            }
            println!("{} confirmed, {} refuted, {} errors", m.confirmed(), m.refuted(), m.errors());
        }
    }
    Ok(m.refuted() == 0)
}

fn cmd_table(ctx: &Ctx, table: TableId, qmax: Option<u64>, rows: Option<Vec<u64>>, args: &FamilyArgs) -> CmdResult {
    let diff = diff_table(table, &TableOptions { qmax, rows, family: ctx.family(args) })?;
    match ctx.format {
        Format::Json => print_json(&diff)?,
        Format::Csv => {
            if let Some(b) = &diff.banner {
                eprintln!("{b}");
            }
            write_csv(&diff.rows)?
        }
        Format::Human => {
            println!("table {}", diff.table);
            if let Some(b) = &diff.banner {
                println!("{b}");
            }
            let kw = diff.rows.iter().map(|r| r.key.len()).max().unwrap_or(0);
            let ew = diff.rows.iter().map(|r| r.expected.len()).max().unwrap_or(0);
            for r in &diff.rows {
                println!("{:<kw$}  expected {:<ew$}  {:<18}  {}", r.key, r.expected, r.status.to_string(), r.computed);
            }
        }
    }
    Ok(!diff.has_differences())
}

fn cmd_scan_conductor(ctx: &Ctx, p: u64, qmax: u64, ds: &[u64], args: &FamilyArgs) -> CmdResult {
    let scan = conductor_scan(p, qmax, ds, &ctx.family(args))?;
    let conjectural = TableId::conjectural_for(p).map(|t| {
        family_rows(t)
            .into_iter()
            .flat_map(|r| r.residues.into_iter().map(move |a| (a, r.expected.clone())))
            .collect::<std::collections::BTreeMap<u64, Vec<u64>>>()
    });
    match ctx.format {
        Format::Json => print_json(&scan)?,
        Format::Csv => write_csv(scan.values.iter().map(|(&q, &m)| SummaryRecord { p, q, m }))?,
        Format::Human => {
            println!("EXPLORATORY: M({p};q) for q <= {qmax}; nothing here is a proof");
            if conjectural.is_some() {
                println!("{CONJECTURAL_BANNER}");
            }
            let vals: Vec<String> = scan.values.iter().map(|(q, m)| format!("{q}:{m}")).collect();
            println!("values: {}", vals.join(" "));
            for c in &scan.candidates {
                println!();
                println!("d = {}: {}, q0 = {}", c.d, if c.consistent { "consistent" } else { "not consistent" }, c.q0);
                match c.symmetric {
                    Some(s) => println!("  g(a) = g(d - a): {}", if s { "yes" } else { "no" }),
                    None => println!("  g(a) = g(d - a): not checkable"),
                }
                for (a, set) in &c.residue_table {
                    let got: Vec<String> = set.iter().map(u64::to_string).collect();
                    let mut line = format!("  g({a}) = {}", got.join(","));
                    if let Some(expected) = conjectural.as_ref().filter(|_| c.d == p).and_then(|t| t.get(a)) {
                        let e: Vec<String> = expected.iter().map(u64::to_string).collect();
                        line.push_str(&format!("   (conjectured {})", e.join(",")));
                    }
                    println!("{line}");
                }
                for n in &c.notes {
                    println!("  note: {n}");
                }
            }
        }
    }
    Ok(true)
}
