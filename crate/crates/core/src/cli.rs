//! The `nutcirc` command line.
//!
//! [`run`] parses an argument vector, dispatches to the library and returns
//! the exit code together with the text for stdout and stderr, so the whole
//! front end is testable without spawning a process.
//!
//! Exit codes: `0` on success (a negative verdict is still a success), `1` on
//! a failed computation, `2` on malformed input.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::circulant::{is_nut_kernel, is_nut_spectral, GeneratorSet, NutVerdict};
use crate::cyclotomy::{cyclo_divisors_accelerated, cyclo_divisors_oracle};
use crate::families::{
    appendix_golden_check, build_family, default_golden_dir, family_nut_check, generate_table,
    FamilyId, FamilyPolyKind, FamilyVariant, Table,
};
use crate::poly::SparsePoly;
use crate::search::{catalog, Catalog, SearchOptions, DEFAULT_CAPACITY};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "nutcirc",
    version,
    about = "Exact checks and searches for circulant nut graphs"
)]
struct Cli {
    /// Emit a JSON envelope instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether Circ(n, S) is a nut graph.
    Verify(VerifyArgs),
    /// Build a family member and optionally check it.
    Family(FamilyArgs),
    /// Print a residue table, or check all tables against the golden files.
    Tables(TablesArgs),
    /// Catalog existence of d-regular circulant nut graphs by order.
    Search(SearchArgs),
    /// List the cyclotomic polynomials dividing a sparse polynomial.
    Cyclodiv(CyclodivArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Spectral,
    Kernel,
    Both,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    n: u64,
    /// Comma-separated generators, each below n/2.
    #[arg(long, required = true, value_delimiter = ',', num_args = 1..)]
    set: Vec<u64>,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_parser = parse_variant)]
    variant: FamilyVariant,
    #[arg(long)]
    t: u64,
    #[arg(long)]
    n: u64,
    /// Run the family, spectral and kernel nut tests.
    #[arg(long)]
    check: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Md,
}

#[derive(Debug, Args)]
struct TablesArgs {
    #[arg(long, value_parser = parse_kind, required_unless_present = "golden_check")]
    kind: Option<FamilyPolyKind>,
    #[arg(long, required_unless_present = "golden_check")]
    modulus: Option<u64>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    /// Regenerate every table and diff against the golden files.
    #[arg(long, conflicts_with_all = ["kind", "modulus"])]
    golden_check: bool,
    /// Golden file directory (defaults to the shipped tables).
    #[arg(long, requires = "golden_check")]
    golden_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SearchFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    degree: u64,
    #[arg(long)]
    n_min: u64,
    #[arg(long)]
    n_max: u64,
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write the catalog to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SearchFormat::Json)]
    format: SearchFormat,
    /// Skip generator sets with unequal numbers of odd and even members.
    #[arg(long)]
    balanced_only: bool,
    /// Largest number of generator sets searched per order.
    #[arg(long, default_value_t = DEFAULT_CAPACITY)]
    capacity: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Oracle,
    #[value(alias = "accelerated")]
    Fast,
}

#[derive(Debug, Args)]
struct CyclodivArgs {
    /// Sparse form, e.g. 5:2,4:1,3:-1,2:1,1:-1,0:-2
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    #[arg(long, value_enum, default_value_t = EngineArg::Fast)]
    engine: EngineArg,
}

fn parse_variant(s: &str) -> std::result::Result<FamilyVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> std::result::Result<FamilyPolyKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Command output before rendering.
struct Report {
    payload: Value,
    text: String,
    /// Set when the command ran but its result is a failure (exit 1).
    failure: Option<String>,
}

impl Report {
    fn ok(payload: Value, text: String) -> Self {
        Report {
            payload,
            text,
            failure: None,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("domain types serialise to JSON")
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify(_) => "verify",
        Command::Family(_) => "family",
        Command::Tables(_) => "tables",
        Command::Search(_) => "search",
        Command::Cyclodiv(_) => "cyclodiv",
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let json = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                return Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                };
            }
            return if json {
                Outcome {
                    code,
                    stdout: envelope("usage", Err(&rendered), None, 0),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            };
        }
    };
    let name = command_name(&cli.command);
    let start = Instant::now();
    let result = dispatch(&cli.command);
    let elapsed = start.elapsed().as_millis() as u64;
    match result {
        Ok(report) => {
            let code = if report.failure.is_some() { 1 } else { 0 };
            if cli.json {
                let status = report.failure.as_deref().map_or(Ok(()), Err);
                Outcome {
                    code,
                    stdout: envelope(name, status, Some(report.payload), elapsed),
                    stderr: String::new(),
                }
            } else {
                let stderr = report
                    .failure
                    .map(|m| format!("error: {m}\n"))
                    .unwrap_or_default();
                Outcome {
                    code,
                    stdout: report.text,
                    stderr,
                }
            }
        }
        Err(e) => {
            let code = if e.is_usage() { 2 } else { 1 };
            let msg = e.to_string();
            if cli.json {
                Outcome {
                    code,
                    stdout: envelope(name, Err(&msg), None, elapsed),
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: format!("error: {msg}\n"),
                }
            }
        }
    }
}

/// The JSON envelope; `serde_json::Value` keeps object keys sorted.
fn envelope(
    command: &str,
    status: std::result::Result<(), &str>,
    payload: Option<Value>,
    elapsed_ms: u64,
) -> String {
    let mut v = json!({
        "command": command,
        "status": if status.is_ok() { "ok" } else { "error" },
        "payload": payload.unwrap_or(Value::Null),
        "elapsed_ms": elapsed_ms,
    });
    if let Err(msg) = status {
        v["message"] = Value::String(msg.trim_end().to_string());
    }
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialise");
    s.push('\n');
    s
}

fn dispatch(c: &Command) -> Result<Report> {
    match c {
        Command::Verify(a) => verify(a),
        Command::Family(a) => family(a),
        Command::Tables(a) => tables(a),
        Command::Search(a) => search(a),
        Command::Cyclodiv(a) => cyclodiv(a),
    }
}

fn verdict_line(label: &str, v: &NutVerdict) -> String {
    format!(
        "{label}: is_nut={} reason={}\n",
        v.is_nut,
        to_value(&v.reason).as_str().unwrap_or_default()
    )
}

fn verify(a: &VerifyArgs) -> Result<Report> {
    let g = GeneratorSet::new(a.n, a.set.clone())?;
    let spectral = matches!(a.method, Method::Spectral | Method::Both).then(|| is_nut_spectral(&g));
    let kernel = match a.method {
        Method::Kernel | Method::Both => Some(is_nut_kernel(&g)?),
        Method::Spectral => None,
    };
    let verdicts: Vec<&NutVerdict> = spectral.iter().chain(kernel.iter()).collect();
    let is_nut = verdicts.iter().all(|v| v.is_nut);
    let agree = verdicts.iter().all(|v| v.is_nut == is_nut);
    let mut text = format!("{g}\n");
    for (label, v) in [("spectral", &spectral), ("kernel", &kernel)] {
        if let Some(v) = v {
            text.push_str(&verdict_line(label, v));
        }
    }
    let payload = json!({
        "n": a.n,
        "set": g.elements(),
        "method": a.method,
        "spectral": spectral,
        "kernel": kernel,
        "is_nut": is_nut,
        "agree": agree,
    });
    let failure = (!agree).then(|| "spectral and kernel verdicts disagree".to_string());
    Ok(Report {
        payload,
        text,
        failure,
    })
}

fn family(a: &FamilyArgs) -> Result<Report> {
    let id = FamilyId::new(a.variant, a.t, a.n)?;
    let g = build_family(&id);
    let mut text = format!("{g}\n");
    let mut payload = json!({
        "variant": a.variant,
        "t": a.t,
        "n": a.n,
        "set": g.elements(),
        "degree": g.degree(),
    });
    let mut failure = None;
    if a.check {
        let fam = match family_nut_check(&id) {
            Ok(v) => Some(v),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        let spectral = is_nut_spectral(&g);
        let kernel = is_nut_kernel(&g)?;
        match &fam {
            Some(v) => text.push_str(&verdict_line("family", v)),
            None => text.push_str("family: not applicable to this variant\n"),
        }
        text.push_str(&verdict_line("spectral", &spectral));
        text.push_str(&verdict_line("kernel", &kernel));
        let all: Vec<bool> = fam
            .iter()
            .chain([&spectral, &kernel])
            .map(|v| v.is_nut)
            .collect();
        let agree = all.iter().all(|&x| x == all[0]);
        if !agree {
            failure = Some("nut checks disagree".to_string());
        }
        payload["checks"] = json!({ "family": fam, "spectral": spectral, "kernel": kernel });
        payload["is_nut"] = json!(all.iter().all(|&x| x));
        payload["agree"] = json!(agree);
    }
    Ok(Report {
        payload,
        text,
        failure,
    })
}

fn table_csv(t: &Table) -> String {
    let mut out = String::from("residue,representative,reduced,remainder\n");
    for r in &t.rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.residue, r.representative, r.reduced, r.remainder
        ));
    }
    out
}

fn table_md(t: &Table) -> String {
    let k = t.kind.name().to_uppercase();
    let b = t.modulus;
    let mut out =
        format!("| t mod {b} | {k}_t mod x^{b} - 1 | remainder mod Phi_{b} |\n|---|---|---|\n");
    for r in &t.rows {
        out.push_str(&format!(
            "| {} | {} | {} |\n",
            r.residue, r.reduced, r.remainder
        ));
    }
    out
}

fn tables(a: &TablesArgs) -> Result<Report> {
    if a.golden_check {
        let dir = a.golden_dir.clone().unwrap_or_else(default_golden_dir);
        let report = appendix_golden_check(&dir)?;
        let mut text = format!(
            "{} tables, {} rows, {} mismatches, {} zero remainders\n",
            report.tables_checked,
            report.rows_checked,
            report.mismatches.len(),
            report.zero_remainders
        );
        for m in &report.mismatches {
            text.push_str(&format!(
                "{}_{} residue {} {}: expected {} got {}\n",
                m.kind, m.modulus, m.residue, m.field, m.expected, m.actual
            ));
        }
        let failure = (!report.passed()).then(|| {
            format!(
                "golden check failed: {} mismatches, {} zero remainders",
                report.mismatches.len(),
                report.zero_remainders
            )
        });
        return Ok(Report {
            payload: to_value(&report),
            text,
            failure,
        });
    }
    let (Some(kind), Some(b)) = (a.kind, a.modulus) else {
        return Err(Error::InvalidArgument(
            "--kind and --modulus are required".into(),
        ));
    };
    let table = generate_table(kind, b)?;
    let text = match a.format {
        TableFormat::Csv => table_csv(&table),
        TableFormat::Md => table_md(&table),
    };
    Ok(Report::ok(to_value(&table), text))
}

fn catalog_text(c: &Catalog, format: SearchFormat) -> String {
    match format {
        SearchFormat::Csv => c.to_csv(),
        SearchFormat::Json => {
            let mut s = serde_json::to_string_pretty(&to_value(c)).expect("JSON values serialise");
            s.push('\n');
            s
        }
    }
}

fn search(a: &SearchArgs) -> Result<Report> {
    let opts = SearchOptions {
        jobs: a.jobs,
        balanced_only: a.balanced_only,
        capacity: a.capacity,
    };
    let c = catalog(a.degree, a.n_min, a.n_max, opts)?;
    let body = catalog_text(&c, a.format);
    let text = match &a.out {
        Some(path) => {
            fs::write(path, &body)
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            let found: Vec<String> = c
                .entries
                .iter()
                .filter(|e| e.exists)
                .map(|e| e.n.to_string())
                .collect();
            format!(
                "wrote {}; exists for n in {{{}}}\n",
                path.display(),
                found.join(", ")
            )
        }
        None => body,
    };
    Ok(Report::ok(to_value(&c), text))
}

fn cyclodiv(a: &CyclodivArgs) -> Result<Report> {
    let p = SparsePoly::parse_sparse(&a.poly)?;
    let report = match a.engine {
        EngineArg::Oracle => cyclo_divisors_oracle(&p)?,
        EngineArg::Fast => cyclo_divisors_accelerated(&p)?,
    };
    let list: Vec<String> = report.divisors.iter().map(u64::to_string).collect();
    let text = format!("divisors: {{{}}}\n", list.join(", "));
    Ok(Report::ok(to_value(&report), text))
}
