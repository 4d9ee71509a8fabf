//! Command-line front end: `table`, `gf`, `verify` and `padic`.
//!
//! Exit codes: 0 success, 1 identity or oracle failure, 2 usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::audit::{self, AuditConfig, Profile};
use crate::combinatorics::{shared_table, StirlingKind};
use crate::error::Result;
use crate::euler_boole::{family_series, family_value, qboole_number, Construction, Family, FamilyId, Kind};
use crate::padic::{witt_check, WittParams};
use crate::poly::MultiPoly;
use crate::rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker count of `verify` and `padic`.
pub const THREADS_ENV: &str = "QBOOLE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "qboole", version, about = "Exact q-Boole polynomial tables, generating functions, identity audit and p-adic oracle")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Polynomial family values or Stirling triangles, one row per degree
    Table(TableArgs),
    /// Generating-function coefficients
    Gf(GfArgs),
    /// Run the identity audit
    Verify(VerifyArgs),
    /// Check an integral representation with the fermionic p-adic oracle
    Padic(PadicArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Euler,
    BooleClassical,
    QbooleFirst,
    QbooleSecond,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Euler => Family::Euler,
            FamilyArg::BooleClassical => Family::BooleClassical,
            FamilyArg::QbooleFirst => Family::QBooleFirst,
            FamilyArg::QbooleSecond => Family::QBooleSecond,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFamily {
    Euler,
    BooleClassical,
    QbooleFirst,
    QbooleSecond,
    QbooleNumberFirst,
    QbooleNumberSecond,
    Stirling1,
    Stirling1Unsigned,
    Stirling2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructionArg {
    Series,
    Stirling,
    Integral,
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Construction {
        match c {
            ConstructionArg::Series => Construction::BySeries,
            ConstructionArg::Stirling => Construction::ByStirlingSum,
            ConstructionArg::Integral => Construction::ByIntegral,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Latex,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    family: TableFamily,
    /// Largest degree (or triangle row) to emit
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    alpha: u32,
    #[arg(long, value_enum, default_value_t = ConstructionArg::Series)]
    construction: ConstructionArg,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GfArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Truncation order K
    #[arg(long, default_value_t = crate::series::DEFAULT_ORDER)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    alpha: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
    profile: ProfileArg,
    /// Also evaluate identities as printed where they differ from the derivation
    #[arg(long)]
    include_printed_variants: bool,
    #[arg(long, default_value_t = audit::DEFAULT_SEED)]
    seed: u64,
    /// Random evaluation points per identity
    #[arg(long, default_value_t = audit::DEFAULT_EVAL_POINTS)]
    eval_points: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Keep wall-time fields in the JSON report (zeroed otherwise)
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PadicArgs {
    #[arg(long)]
    p: u64,
    /// Summation depth: sums run over [0, p^N)
    #[arg(long = "N")]
    depth: u32,
    /// Output precision: residues mod p^M
    #[arg(long = "M")]
    precision: u32,
    #[arg(long, value_enum, default_value_t = FamilyArg::QbooleFirst)]
    family: FamilyArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    alpha: u32,
    #[arg(long, allow_hyphen_values = true)]
    x: i64,
    #[arg(long, allow_hyphen_values = true)]
    lambda: i64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    q: i64,
    /// Force term-by-term summation for order 1
    #[arg(long)]
    literal: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, stderr: String::new(), code: EXIT_OK }
    }

    fn usage(msg: impl Into<String>) -> Self {
        Outcome { stdout: String::new(), stderr: msg.into(), code: EXIT_USAGE }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::usage(text)
            };
        }
    };
    let result = match cli.command {
        Command::Table(a) => cmd_table(&a).map(|s| (s, EXIT_OK, a.out.clone())),
        Command::Gf(a) => cmd_gf(&a).map(|s| (s, EXIT_OK, a.out.clone())),
        Command::Verify(a) => with_pool(|| cmd_verify(&a)).map(|(s, c)| (s, c, a.out.clone())),
        Command::Padic(a) => with_pool(|| cmd_padic(&a)).map(|(s, c)| (s, c, a.out.clone())),
    };
    match result {
        Ok((text, code, None)) => Outcome { stdout: text, stderr: String::new(), code },
        Ok((text, code, Some(path))) => match std::fs::write(&path, text) {
            Ok(()) => Outcome { stdout: String::new(), stderr: String::new(), code },
            Err(e) => Outcome {
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
                code: EXIT_FAILURE,
            },
        },
        Err(e) => Outcome::usage(format!("error: {e}\n")),
    }
}

fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok());
    match threads {
        Some(n) if n > 0 => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

#[derive(Serialize)]
struct Row {
    n: usize,
    value: String,
}

#[derive(Serialize)]
struct TriangleRow {
    n: usize,
    k: usize,
    value: String,
}

fn family_rows(args: &TableArgs) -> Result<Option<Vec<(usize, MultiPoly)>>> {
    let single = |family: Family| -> Result<Vec<(usize, MultiPoly)>> {
        let id = FamilyId::new(family, args.alpha)?;
        (0..=args.n)
            .map(|n| family_value(id, n, args.construction.into()).map(|v| (n, v)))
            .collect()
    };
    let numbers = |kind: Kind| (0..=args.n).map(|n| (n, qboole_number(n, kind))).collect();
    Ok(Some(match args.family {
        TableFamily::Euler => single(Family::Euler)?,
        TableFamily::BooleClassical => single(Family::BooleClassical)?,
        TableFamily::QbooleFirst => single(Family::QBooleFirst)?,
        TableFamily::QbooleSecond => single(Family::QBooleSecond)?,
        TableFamily::QbooleNumberFirst => numbers(Kind::First),
        TableFamily::QbooleNumberSecond => numbers(Kind::Second),
        _ => return Ok(None),
    }))
}

fn triangle(args: &TableArgs) -> Vec<TriangleRow> {
    let (kind, unsigned) = match args.family {
        TableFamily::Stirling1 => (StirlingKind::First, false),
        TableFamily::Stirling1Unsigned => (StirlingKind::First, true),
        _ => (StirlingKind::Second, false),
    };
    let table = shared_table(kind, args.n);
    let mut rows = Vec::new();
    for n in 0..=args.n {
        for (k, v) in table.row(n).unwrap().iter().enumerate() {
            let v = if unsigned { num_traits::Signed::abs(v) } else { v.clone() };
            rows.push(TriangleRow { n, k, value: v.to_string() });
        }
    }
    rows
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn latex_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\begin{{tabular}}{{{}}}", "r".repeat(header.len() - 1) + "l");
    let _ = writeln!(out, "{} \\\\", header.join(" & "));
    out.push_str("\\hline\n");
    for r in rows {
        let _ = writeln!(out, "{} \\\\", r.join(" & "));
    }
    out.push_str("\\end{tabular}\n");
    out
}

fn text_table(rows: impl IntoIterator<Item = Vec<String>>) -> String {
    rows.into_iter().map(|r| r.join("  ") + "\n").collect()
}

fn table_name(f: TableFamily) -> String {
    f.to_possible_value().unwrap().get_name().to_string()
}

fn render_family_rows(rows: &[(usize, MultiPoly)], format: Format, meta: serde_json::Value) -> String {
    match format {
        Format::Csv => csv_string(
            &["n", "value"],
            rows.iter().map(|(n, v)| vec![n.to_string(), v.render()]),
        ),
        Format::Latex => latex_table(
            &["n", "value"],
            rows.iter().map(|(n, v)| vec![n.to_string(), format!("${}$", v.render_latex())]),
        ),
        Format::Text => text_table(rows.iter().map(|(n, v)| vec![n.to_string(), v.render()])),
        Format::Json => {
            let mut obj = meta;
            obj["rows"] = serde_json::to_value(
                rows.iter().map(|(n, v)| Row { n: *n, value: v.render() }).collect::<Vec<_>>(),
            )
            .unwrap();
            serde_json::to_string_pretty(&obj).unwrap() + "\n"
        }
    }
}

fn cmd_table(args: &TableArgs) -> Result<String> {
    if let Some(rows) = family_rows(args)? {
        let meta = json!({
            "family": table_name(args.family),
            "alpha": args.alpha,
            "construction": Construction::from(args.construction).name(),
        });
        return Ok(render_family_rows(&rows, args.format, meta));
    }
    let rows = triangle(args);
    let cells = || rows.iter().map(|r| vec![r.n.to_string(), r.k.to_string(), r.value.clone()]);
    Ok(match args.format {
        Format::Csv => csv_string(&["n", "k", "value"], cells()),
        Format::Latex => latex_table(&["n", "k", "value"], cells()),
        Format::Text => text_table(cells()),
        Format::Json => {
            serde_json::to_string_pretty(&json!({ "family": table_name(args.family), "rows": rows })).unwrap()
                + "\n"
        }
    })
}

#[derive(Serialize)]
struct GfRow {
    n: usize,
    factorial: String,
    coefficient: String,
    value: String,
}

fn cmd_gf(args: &GfArgs) -> Result<String> {
    let id = FamilyId::new(args.family.into(), args.alpha)?;
    let series = family_series(id, args.k);
    let rows: Vec<GfRow> = (0..=args.k)
        .map(|n| GfRow {
            n,
            factorial: rational::render(&rational::factorial(n)),
            coefficient: series.coeff(n).unwrap().render(),
            value: series.egf_coeff(n).unwrap().render(),
        })
        .collect();
    let header = ["n", "factorial", "coefficient", "value"];
    let cells = || rows.iter().map(|r| vec![r.n.to_string(), r.factorial.clone(), r.coefficient.clone(), r.value.clone()]);
    Ok(match args.format {
        Format::Csv => csv_string(&header, cells()),
        Format::Text => text_table(cells()),
        Format::Latex => latex_table(
            &header,
            (0..=args.k).map(|n| {
                vec![
                    n.to_string(),
                    rational::render(&rational::factorial(n)),
                    format!("${}$", series.coeff(n).unwrap().render_latex()),
                    format!("${}$", series.egf_coeff(n).unwrap().render_latex()),
                ]
            }),
        ),
        Format::Json => {
            serde_json::to_string_pretty(&json!({
                "family": id.family().name(),
                "alpha": id.order(),
                "k": args.k,
                "rows": rows,
            }))
            .unwrap()
                + "\n"
        }
    })
}

fn cmd_verify(args: &VerifyArgs) -> Result<(String, i32)> {
    let config = AuditConfig {
        profile: match args.profile {
            ProfileArg::Quick => Profile::Quick,
            ProfileArg::Full => Profile::Full,
        },
        include_printed_variants: args.include_printed_variants,
        seed: args.seed,
        eval_points: args.eval_points,
    };
    let report = audit::run_suite(&config)?;
    let text = match args.format {
        Format::Text => report.to_text(),
        _ => report.to_json(args.timing) + "\n",
    };
    let code = if report.all_asserted_pass { EXIT_OK } else { EXIT_FAILURE };
    Ok((text, code))
}

fn cmd_padic(args: &PadicArgs) -> Result<(String, i32)> {
    let family = FamilyId::new(args.family.into(), args.alpha)?;
    let params = WittParams {
        family,
        n: args.n,
        x: args.x,
        lambda: args.lambda,
        q: args.q,
        p: args.p,
        depth: args.depth,
        precision: args.precision,
        literal: args.literal,
    };
    let outcome = witt_check(&params)?;
    let out = json!({
        "family": family.family().name(),
        "alpha": family.order(),
        "n": args.n,
        "x": args.x,
        "lambda": args.lambda,
        "q": args.q,
        "p": args.p,
        "N": args.depth,
        "M": args.precision,
        "literal": args.literal,
        "integral": outcome.integral,
        "polynomial": outcome.polynomial,
        "verdict": if outcome.pass { "pass" } else { "fail" },
    });
    let code = if outcome.pass { EXIT_OK } else { EXIT_FAILURE };
    Ok((serde_json::to_string_pretty(&out).unwrap() + "\n", code))
}
