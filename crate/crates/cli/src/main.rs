//! Command line front end for the metacyclic analysis library.
//!
//! Every subcommand runs over an (n, m) grid given by `--n` and `--m`,
//! emits one table of rows in json, csv, or text form, and exits with
//! 0 when every checked identity agrees, 1 when a discrepancy was found
//! (discrepancies are data and are still reported in full), 2 when a
//! computation would exceed the budget, and 3 on invalid input.
//!
//! Output is deterministic and byte-identical for a fixed config and
//! version, independent of `--workers`.

use std::fmt;
use std::fs;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use metacyclic::{
    classification_scan, classify_size_n, classify_size_n_plus_1, count_failing_size_n,
    egz_bruteforce_for_length, full_product_check, harborth_bruteforce, harborth_closed_form,
    lemma_sweep_group, run_suite, subset_passes, weighted_harborth_bruteforce, Error, FormCode,
    GroupParams, ScanSize, Subset, SuiteConfig, DEFAULT_BUDGET, DEFAULT_ORACLE_BUDGET,
};

#[derive(Parser)]
#[command(
    name = "metacyclic",
    version,
    about = "Product sets and zero-sum constants of the metacyclic groups H(n,m)",
    after_help = "Exit codes: 0 all checks agree, 1 discrepancy found, \
                  2 budget exceeded, 3 invalid input."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Values of n: a single value, a comma list, or an inclusive range a..b
    #[arg(long, global = true, value_name = "SPEC")]
    n: Option<String>,

    /// Values of m per n: all, even, odd, a value, a comma list, or a..b
    #[arg(long, global = true, value_name = "SPEC", default_value = "all")]
    m: String,

    /// What to compute where a closed form and a brute force both exist
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,

    /// Budget in primitive checks for each brute-force call
    #[arg(long, global = true, env = "METACYCLIC_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Worker threads (defaults to the number of logical CPUs)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = OutputArg::Text)]
    output: OutputArg,

    /// Write the report to a file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Group order and exponent
    Exponent,
    /// Smallest k such that every k-subset has an exp(G)-term product 1
    Harborth,
    /// Failure-form classification of size-n and size-(n+1) subsets
    Classify {
        /// Classify one subset (comma separated elements) instead of scanning
        #[arg(long, value_name = "ELEMENTS")]
        subset: Option<String>,
    },
    /// Closed count of failing size-n subsets
    CountFailing {
        /// Also enumerate all subsets and compare
        #[arg(long)]
        verify: bool,
    },
    /// Whether every size-(n+2) subset multiplies onto the whole group
    FullProduct,
    /// Harborth constant with each element usable as itself or its inverse
    Weighted,
    /// Smallest l such that every length-l sequence has a product-1 subsequence
    Egz {
        /// Scan ceiling (default 2|G| - 1, the cyclic-group worst case)
        #[arg(long, value_name = "K")]
        k_max: Option<u32>,
        /// Required subsequence length (default exp(G); |G| gives the
        /// order-indexed variant of the constant)
        #[arg(long, value_name = "T")]
        product_length: Option<u32>,
    },
    /// Product-set lower bound and equality rules over all exponent sets
    LemmaCheck {
        /// One summary row per group instead of one row per exponent set
        #[arg(long)]
        summary: bool,
    },
    /// Run the built-in claim suite: every closed form against brute force
    VerifyClaims {
        /// Only claims whose id contains this substring
        #[arg(long, value_name = "SUBSTRING")]
        only: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Exponent => "exponent",
            Command::Harborth => "harborth",
            Command::Classify { .. } => "classify",
            Command::CountFailing { .. } => "count-failing",
            Command::FullProduct => "full-product",
            Command::Weighted => "weighted",
            Command::Egz { .. } => "egz",
            Command::LemmaCheck { .. } => "lemma-check",
            Command::VerifyClaims { .. } => "verify-claims",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Formula,
    Brute,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputArg {
    Json,
    Csv,
    Text,
}

enum CliError {
    Lib(Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Io(e) => write!(f, "cannot write report: {e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) => e.exit_code() as u8,
            CliError::Usage(_) | CliError::Io(_) => 3,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// An (n or m) selector. Wildcard forms (all/even/odd/range) skip grid
/// cells an operation does not support; explicit values make such cells
/// an error.
#[derive(Clone)]
enum Spec {
    All,
    Even,
    Odd,
    Range(i64, i64),
    List(Vec<i64>),
}

impl Spec {
    fn parse(text: &str) -> Result<Spec, CliError> {
        let text = text.trim();
        match text {
            "all" => return Ok(Spec::All),
            "even" => return Ok(Spec::Even),
            "odd" => return Ok(Spec::Odd),
            _ => {}
        }
        let bad = || usage(format!("cannot parse {text:?}: expected all, even, odd, a value, a comma list, or a..b"));
        if let Some((a, b)) = text.split_once("..") {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(usage(format!("empty range {a}..{b}")));
            }
            return Ok(Spec::Range(a, b));
        }
        let values = text
            .split(',')
            .map(|part| part.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<i64>, CliError>>()?;
        if values.is_empty() {
            return Err(bad());
        }
        Ok(Spec::List(values))
    }

    fn is_wildcard(&self) -> bool {
        !matches!(self, Spec::List(_))
    }

    /// Concrete n values; parity words are unbounded and rejected here.
    fn n_values(&self) -> Result<Vec<i64>, CliError> {
        match self {
            Spec::All | Spec::Even | Spec::Odd => Err(usage(
                "--n needs explicit values or a range; all/even/odd are only meaningful for --m",
            )),
            Spec::Range(a, b) => Ok((*a..=*b).collect()),
            Spec::List(v) => Ok(v.clone()),
        }
    }

    /// Concrete m values for one n. Wildcards range over [0, n).
    fn m_values(&self, n: i64) -> Vec<i64> {
        match self {
            Spec::All => (0..n).collect(),
            Spec::Even => (0..n).step_by(2).collect(),
            Spec::Odd => (1..n).step_by(2).collect(),
            Spec::Range(a, b) => (*a..=*b).filter(|m| (0..n).contains(m)).collect(),
            Spec::List(v) => v.clone(),
        }
    }
}

struct Grid {
    cells: Vec<GroupParams>,
    /// True when unsupported cells may be skipped instead of failing.
    lenient: bool,
}

fn resolve_grid(cli: &Cli) -> Result<Grid, CliError> {
    let n_spec = Spec::parse(cli.n.as_deref().ok_or_else(|| usage("--n is required"))?)?;
    let m_spec = Spec::parse(&cli.m)?;
    let mut cells = Vec::new();
    for n in n_spec.n_values()? {
        for m in m_spec.m_values(n) {
            cells.push(GroupParams::new(n, m)?);
        }
    }
    if cells.is_empty() {
        return Err(usage("the (n, m) grid is empty"));
    }
    Ok(Grid {
        cells,
        lenient: n_spec.is_wildcard() || m_spec.is_wildcard(),
    })
}

/// Runs one grid cell; a precondition error is demoted to a skip when
/// the grid came from wildcard selectors.
fn run_cell<T>(
    grid: &Grid,
    result: metacyclic::Result<T>,
) -> Result<Option<T>, CliError> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(Error::Precondition(_)) if grid.lenient => Ok(None),
        Err(e) => Err(e.into()),
    }
}

#[derive(Serialize)]
struct JsonDoc<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    rows: &'a [T],
}

fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| usage(format!("cannot serialize row: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| usage(format!("cannot serialize rows: {e}")))?;
    String::from_utf8(bytes).map_err(|e| usage(format!("report is not utf-8: {e}")))
}

fn render_table(csv_text: &str) -> String {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(csv_text.as_bytes());
    let rows: Vec<Vec<String>> = rdr
        .records()
        .filter_map(|r| r.ok())
        .map(|r| r.iter().map(str::to_owned).collect())
        .collect();
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0usize; columns];
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i + 1 == row.len() {
                line.push_str(cell);
            } else {
                line.push_str(&format!("{cell:<width$}  ", width = widths[i]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn emit<T: Serialize>(cli: &Cli, rows: &[T]) -> Result<(), CliError> {
    let text = match cli.output {
        OutputArg::Json => {
            let doc = JsonDoc {
                schema_version: 1,
                command: cli.command.name(),
                rows,
            };
            let mut s = serde_json::to_string_pretty(&doc)
                .map_err(|e| usage(format!("cannot serialize report: {e}")))?;
            s.push('\n');
            s
        }
        OutputArg::Csv => rows_to_csv(rows)?,
        OutputArg::Text => render_table(&rows_to_csv(rows)?),
    };
    match &cli.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn join_words(words: &[String]) -> String {
    words.join(" ")
}

#[derive(Serialize)]
struct ExponentRow {
    n: u32,
    m: u32,
    order: u64,
    exponent: u64,
}

fn cmd_exponent(cli: &Cli) -> Result<bool, CliError> {
    let grid = resolve_grid(cli)?;
    let rows: Vec<ExponentRow> = grid
        .cells
        .iter()
        .map(|g| ExponentRow {
            n: g.n(),
            m: g.m(),
            order: g.order(),
            exponent: g.exponent(),
        })
        .collect();
    emit(cli, &rows)?;
    Ok(true)
}

#[derive(Serialize)]
struct HarborthRow {
    n: u32,
    m: u32,
    closed: Option<u32>,
    brute: Option<u32>,
    agree: Option<bool>,
}

fn cmd_harborth(cli: &Cli) -> Result<bool, CliError> {
    let grid = resolve_grid(cli)?;
    let mut rows = Vec::new();
    let mut consistent = true;
    for g in &grid.cells {
        let closed = (cli.method != MethodArg::Brute).then(|| harborth_closed_form(g));
        let brute = if cli.method == MethodArg::Formula {
            None
        } else {
            match run_cell(&grid, harborth_bruteforce(g, cli.budget))? {
                Some(r) => Some(r.g),
                None => continue,
            }
        };
        let agree = closed.zip(brute).map(|(c, b)| c == b);
        if agree == Some(false) {
            consistent = false;
        }
        rows.push(HarborthRow { n: g.n(), m: g.m(), closed, brute, agree });
    }
    emit(cli, &rows)?;
    Ok(consistent)
}

#[derive(Serialize)]
struct ClassifyScanRow {
    n: u32,
    m: u32,
    size: u32,
    total: u64,
    failing: u64,
    mismatches: u64,
    form_counts: String,
}

#[derive(Serialize)]
struct ClassifySubsetRow {
    n: u32,
    m: u32,
    subset: String,
    size: u32,
    code: &'static str,
    fails: bool,
    consistent: bool,
}

fn cmd_classify(cli: &Cli, subset: Option<&str>) -> Result<bool, CliError> {
    let grid = resolve_grid(cli)?;
    if let Some(text) = subset {
        if grid.cells.len() != 1 {
            return Err(usage("--subset needs a single n and a single m"));
        }
        let g = grid.cells[0];
        let s = Subset::parse(g, text)?;
        let form = if s.len() == g.n() {
            classify_size_n(&s)?
        } else if s.len() == g.n() + 1 {
            classify_size_n_plus_1(&s)?
        } else {
            return Err(usage(format!(
                "classification covers subset sizes {} and {}, got {}",
                g.n(),
                g.n() + 1,
                s.len()
            )));
        };
        let fails = !subset_passes(&s)?;
        let consistent = (form.code != FormCode::None) == fails;
        let rows = [ClassifySubsetRow {
            n: g.n(),
            m: g.m(),
            subset: join_words(&s.element_strings()),
            size: s.len(),
            code: form.code.as_str(),
            fails,
            consistent,
        }];
        emit(cli, &rows)?;
        return Ok(consistent);
    }
    let mut rows = Vec::new();
    let mut consistent = true;
    for g in &grid.cells {
        for size in [ScanSize::N, ScanSize::NPlus1] {
            let Some(report) = run_cell(&grid, classification_scan(g, size, cli.budget))? else {
                continue;
            };
            if report.mismatch_count > 0 {
                consistent = false;
            }
            let form_counts = report
                .form_counts
                .iter()
                .map(|(code, count)| format!("{code}={count}"))
                .collect::<Vec<_>>()
                .join(" ");
            rows.push(ClassifyScanRow {
                n: g.n(),
                m: g.m(),
                size: size.subset_size(g.n()),
                total: report.total,
                failing: report.failing,
                mismatches: report.mismatch_count,
                form_counts,
            });
        }
    }
    emit(cli, &rows)?;
    Ok(consistent)
}

#[derive(Serialize)]
struct CountFailingRow {
    n: u32,
    m: u32,
    formula: String,
    enumerated: Option<u64>,
    agree: Option<bool>,
}

fn cmd_count_failing(cli: &Cli, verify: bool) -> Result<bool, CliError> {
    let grid = resolve_grid(cli)?;
    let mut rows = Vec::new();
    let mut consistent = true;
    for g in &grid.cells {
        let Some(formula) = run_cell(&grid, count_failing_size_n(g))? else {
            continue;
        };
        let enumerated = if verify {
            match run_cell(&grid, classification_scan(g, ScanSize::N, cli.budget))? {
                Some(scan) => Some(scan.failing),
                None => continue,
            }
        } else {
            None
        };
        let agree = enumerated.map(|e| formula == e.into());
        if agree == Some(false) {
            consistent = false;
        }
        rows.push(CountFailingRow {
            n: g.n(),
            m: g.m(),
            formula: formula.to_string(),
            enumerated,
            agree,
        });
    }
    emit(cli, &rows)?;
    Ok(consistent)
}

#[derive(Serialize)]
struct FullProductRow {
    n: u32,
    m: u32,
    ok: bool,
    subsets_checked: u64,
    witness: Option<String>,
}

fn cmd_full_product(cli: &Cli) -> Result<bool, CliError> {
    let grid = resolve_grid(cli)?;
    let mut rows = Vec::new();
    let mut consistent = true;
    for g in &grid.cells {
        let Some(report) = run_cell(&grid, full_product_check(g, cli.budget))? else {
            continue;
        };
        if !report.ok {
            consistent = false;
        }
        rows.push(FullProductRow {
            n: g.n(),
            m: g.m(),
            ok: report.ok,
            subsets_checked: report.subsets_checked,
            witness: report.witness.as_deref().map(join_words),
        });
    }
    emit(cli, &rows)?;
    Ok(consistent)
}

#[derive(Serialize)]
struct WeightedRow {
    n: u32,
    m: u32,
    weighted: u32,
    plain_closed: u32,
    le_plain: bool,
}

fn cmd_weighted(cli: &Cli) -> Result<bool, CliError> {
    let grid = resolve_grid(cli)?;
    let mut rows = Vec::new();
    let mut consistent = true;
    for g in &grid.cells {
        let Some(report) = run_cell(&grid, weighted_harborth_bruteforce(g, cli.budget))? else {
            continue;
        };
        let plain_closed = harborth_closed_form(g);
        let le_plain = report.g <= plain_closed;
        if !le_plain {
            consistent = false;
        }
        rows.push(WeightedRow {
            n: g.n(),
            m: g.m(),
            weighted: report.g,
            plain_closed,
            le_plain,
        });
    }
    emit(cli, &rows)?;
    Ok(consistent)
}

#[derive(Serialize)]
struct EgzRow {
    n: u32,
    m: u32,
    product_length: u32,
    k_max: u32,
    s: Option<u32>,
    last_failing_witness: Option<String>,
}

fn cmd_egz(cli: &Cli, k_max: Option<u32>, product_length: Option<u32>) -> Result<bool, CliError> {
    let grid = resolve_grid(cli)?;
    let mut rows = Vec::new();
    for g in &grid.cells {
        let t = product_length.unwrap_or(g.exponent() as u32);
        let k_max = k_max.unwrap_or(2 * g.order() as u32 - 1).max(t);
        let Some(report) = run_cell(&grid, egz_bruteforce_for_length(g, t, k_max, cli.budget))?
        else {
            continue;
        };
        let witness = report
            .levels
            .iter()
            .rev()
            .find(|lvl| !lvl.passed)
            .and_then(|lvl| lvl.failing_witness.as_deref())
            .map(join_words);
        rows.push(EgzRow {
            n: g.n(),
            m: g.m(),
            product_length: t,
            k_max,
            s: report.s,
            last_failing_witness: witness,
        });
    }
    emit(cli, &rows)?;
    Ok(true)
}

#[derive(Serialize)]
struct LemmaRow {
    n: u32,
    m: u32,
    t: u32,
    alphas: String,
    bound: u32,
    achieved: u32,
    predicted_equality: bool,
    actual_equality: bool,
    equality_form_ok: Option<bool>,
}

#[derive(Serialize)]
struct LemmaSummaryRow {
    n: u32,
    m: u32,
    records: u64,
    bound_violations: u64,
    equality_mismatches: u64,
    form_failures: u64,
}

fn cmd_lemma_check(cli: &Cli, summary: bool) -> Result<bool, CliError> {
    let grid = resolve_grid(cli)?;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    let mut consistent = true;
    for g in &grid.cells {
        let Some((records, sum)) = run_cell(&grid, lemma_sweep_group(g, cli.budget))? else {
            continue;
        };
        if sum.bound_violations > 0 || sum.equality_mismatches > 0 || sum.form_failures > 0 {
            consistent = false;
        }
        if summary {
            summaries.push(LemmaSummaryRow {
                n: g.n(),
                m: g.m(),
                records: sum.records,
                bound_violations: sum.bound_violations,
                equality_mismatches: sum.equality_mismatches,
                form_failures: sum.form_failures,
            });
        } else {
            rows.extend(records.into_iter().map(|r| LemmaRow {
                n: r.n,
                m: r.m,
                t: r.t,
                alphas: r
                    .alphas
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
                bound: r.bound,
                achieved: r.achieved,
                predicted_equality: r.predicted_equality,
                actual_equality: r.actual_equality,
                equality_form_ok: r.equality_form_ok,
            }));
        }
    }
    if summary {
        emit(cli, &summaries)?;
    } else {
        emit(cli, &rows)?;
    }
    Ok(consistent)
}

fn cmd_verify_claims(cli: &Cli, only: Option<&str>) -> Result<bool, CliError> {
    let config = SuiteConfig {
        only: only.map(str::to_owned),
        budget: cli.budget,
        oracle_budget: DEFAULT_ORACLE_BUDGET,
    };
    let results = run_suite(config)?;
    if results.is_empty() {
        return Err(usage(format!(
            "no claim id contains {:?}",
            only.unwrap_or_default()
        )));
    }
    let consistent = results
        .iter()
        .all(|r| r.status != metacyclic::ClaimStatus::Fail);
    emit(cli, &results)?;
    Ok(consistent)
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(usage("--workers must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| usage(format!("cannot configure {workers} workers: {e}")))?;
    }
    if cli.budget == 0 {
        return Err(usage("--budget must be positive"));
    }
    match &cli.command {
        Command::Exponent => cmd_exponent(cli),
        Command::Harborth => cmd_harborth(cli),
        Command::Classify { subset } => cmd_classify(cli, subset.as_deref()),
        Command::CountFailing { verify } => cmd_count_failing(cli, *verify),
        Command::FullProduct => cmd_full_product(cli),
        Command::Weighted => cmd_weighted(cli),
        Command::Egz { k_max, product_length } => cmd_egz(cli, *k_max, *product_length),
        Command::LemmaCheck { summary } => cmd_lemma_check(cli, *summary),
        Command::VerifyClaims { only } => cmd_verify_claims(cli, only.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
