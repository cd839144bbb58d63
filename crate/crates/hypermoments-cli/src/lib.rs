//! Command-line front end for exact multivariate hypergeometric moments.
//!
//! Three modes, all emitting newline-delimited JSON records on stdout and
//! diagnostics on stderr:
//!
//! - `single`: one moment for one exponent vector;
//! - `table`: every moment with exponent norm up to `--max-order`,
//!   lexicographically;
//! - `verify`: formula-vs-oracle comparison for every exponent up to
//!   `--max-order`, exiting nonzero when any value disagrees.
//!
//! Exact values serialize as strings like `"27/10"` (JSON numbers cannot
//! hold them losslessly); `--format decimal:<digits>` adds a rounded
//! rendering without ever replacing the exact field. Exit codes: 0 success,
//! 1 invalid request or parameters, 2 verification mismatch.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Parser, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use hypermoments::exact::decimal_string;
use hypermoments::moments::{MomentKind, MomentRegistry};
use hypermoments::verify::verify_formula;
use hypermoments::{
    multi_indices_up_to_norm, DistributionParams, MultiIndex, Oracle, ProbabilityVector,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "hypermoments",
    about = "Exact moments of the multivariate hypergeometric distribution",
    long_about = None
)]
struct Cli {
    /// Total population size N.
    #[arg(long = "N", value_name = "INT")]
    population: u64,

    /// Sample size n (drawn without replacement).
    #[arg(long = "n", value_name = "INT")]
    sample_size: u64,

    /// Explicit category counts N_1,...,N_d.
    #[arg(
        long,
        value_name = "INT,...",
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "probs"
    )]
    counts: Option<Vec<String>>,

    /// Exact category probabilities p_1,...,p_d (rationals like 1/2); each
    /// N*p_i must be an integer.
    #[arg(
        long,
        value_name = "RAT,...",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    probs: Option<Vec<String>>,

    /// Exponent vector for single mode.
    #[arg(
        long,
        value_name = "INT,...",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    alpha: Option<Vec<String>>,

    /// Moment kind: factorial, noncentral, or central. Verify mode checks
    /// all three when omitted.
    #[arg(long, value_name = "KIND")]
    kind: Option<String>,

    #[arg(long, value_enum, default_value_t = Mode::Single)]
    mode: Mode,

    /// Exponent-norm bound for table and verify modes.
    #[arg(long = "max-order", value_name = "INT")]
    max_order: Option<u64>,

    /// Output format: `rational`, or `decimal:<digits>` to add a rounded
    /// decimal field.
    #[arg(long, value_name = "FMT", default_value = "rational")]
    format: String,

    /// RNG seed for sampling-backed workflows; the exact modes ignore it.
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// One moment for one exponent vector.
    Single,
    /// All moments with exponent norm up to --max-order.
    Table,
    /// Compare formulas against the brute-force oracle.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum OutputFormat {
    Rational,
    Decimal(usize),
}

/// One JSON line of output. Field order is fixed; exact values are strings
/// that round-trip to the same rational.
#[derive(Serialize)]
struct OutputRecord {
    #[serde(rename = "N")]
    population: u64,
    n: u64,
    counts: Vec<u64>,
    alpha: Vec<u64>,
    kind: &'static str,
    value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<String>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    is_match: Option<bool>,
}

impl OutputRecord {
    fn new(
        params: &DistributionParams,
        alpha: &MultiIndex,
        kind: MomentKind,
        value: &BigRational,
        format: OutputFormat,
    ) -> Self {
        OutputRecord {
            population: params.population(),
            n: params.sample_size(),
            counts: params.counts().to_vec(),
            alpha: alpha.entries().to_vec(),
            kind: kind.as_str(),
            value: value.to_string(),
            decimal: match format {
                OutputFormat::Rational => None,
                OutputFormat::Decimal(digits) => Some(decimal_string(value, digits)),
            },
            oracle: None,
            is_match: None,
        }
    }
}

/// Parse arguments and execute, writing records to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run<I, S, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => {
                    write!(out, "{e}").expect("write help");
                    EXIT_OK
                }
                _ => {
                    write!(err, "{e}").expect("write diagnostic");
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(message) => {
            writeln!(err, "error: {message}").expect("write diagnostic");
            EXIT_INVALID
        }
    }
}

fn execute<O: Write>(cli: &Cli, out: &mut O) -> Result<i32, String> {
    let params = build_params(cli)?;
    let format = parse_format(&cli.format)?;
    // Formulas are picked out of the registry by name; --kind is a lookup
    // key, not a hardcoded dispatch.
    let registry = MomentRegistry::builtin();
    let selected = cli
        .kind
        .as_deref()
        .map(|name| {
            registry.get(name).ok_or_else(|| {
                let known: Vec<&str> = registry.iter().map(|f| f.name()).collect();
                format!(
                    "unknown moment kind `{name}` (expected one of: {})",
                    known.join(", ")
                )
            })
        })
        .transpose()?;

    match cli.mode {
        Mode::Single => {
            let alpha = required_alpha(cli, &params)?;
            let formula = selected.ok_or("single mode requires --kind")?;
            let value = formula.moment(&params, &alpha).map_err(|e| e.to_string())?;
            emit(
                out,
                &OutputRecord::new(&params, &alpha, formula.kind(), &value, format),
            );
            Ok(EXIT_OK)
        }
        Mode::Table => {
            let max_order = cli.max_order.ok_or("table mode requires --max-order")?;
            let formula = selected.ok_or("table mode requires --kind")?;
            for alpha in multi_indices_up_to_norm(params.dimension(), max_order) {
                let value = formula.moment(&params, &alpha).map_err(|e| e.to_string())?;
                emit(
                    out,
                    &OutputRecord::new(&params, &alpha, formula.kind(), &value, format),
                );
            }
            Ok(EXIT_OK)
        }
        Mode::Verify => {
            let max_order = cli.max_order.ok_or("verify mode requires --max-order")?;
            let selected_name = selected.map(|f| f.name());
            let oracle = Oracle::new(&params);
            let mut all_match = true;
            for alpha in multi_indices_up_to_norm(params.dimension(), max_order) {
                for formula in registry.iter() {
                    if selected_name.is_some_and(|name| formula.name() != name) {
                        continue;
                    }
                    let report =
                        verify_formula(formula, &oracle, &alpha).map_err(|e| e.to_string())?;
                    all_match &= report.is_match;
                    let mut record = OutputRecord::new(
                        &params,
                        &alpha,
                        report.kind,
                        &report.formula_value,
                        format,
                    );
                    record.oracle = Some(report.oracle_value.to_string());
                    record.is_match = Some(report.is_match);
                    emit(out, &record);
                }
            }
            Ok(if all_match { EXIT_OK } else { EXIT_MISMATCH })
        }
    }
}

fn build_params(cli: &Cli) -> Result<DistributionParams, String> {
    match (&cli.counts, &cli.probs) {
        (Some(counts), None) => {
            let counts = parse_u64_list(counts, "--counts")?;
            DistributionParams::from_counts(cli.population, cli.sample_size, counts)
                .map_err(|e| e.to_string())
        }
        (None, Some(probs)) => {
            let probs = probs
                .iter()
                .map(|s| {
                    s.parse::<BigRational>()
                        .map_err(|_| format!("--probs entry `{s}` is not a rational number"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let probs = ProbabilityVector::new(probs).map_err(|e| e.to_string())?;
            DistributionParams::from_probs(cli.population, cli.sample_size, &probs)
                .map_err(|e| e.to_string())
        }
        (None, None) => Err("one of --counts or --probs is required".to_string()),
        (Some(_), Some(_)) => unreachable!("clap rejects conflicting sources"),
    }
}

fn required_alpha(cli: &Cli, params: &DistributionParams) -> Result<MultiIndex, String> {
    let entries = cli.alpha.as_ref().ok_or("single mode requires --alpha")?;
    let entries = parse_u64_list(entries, "--alpha")?;
    let alpha = MultiIndex::new(entries);
    if alpha.dimension() != params.dimension() {
        return Err(format!(
            "--alpha has {} entries but the distribution has {} categories",
            alpha.dimension(),
            params.dimension()
        ));
    }
    Ok(alpha)
}

fn parse_u64_list(entries: &[String], flag: &str) -> Result<Vec<u64>, String> {
    entries
        .iter()
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| format!("{flag} entry `{s}` is not a nonnegative integer"))
        })
        .collect()
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    if s == "rational" {
        return Ok(OutputFormat::Rational);
    }
    if let Some(digits) = s.strip_prefix("decimal:") {
        let digits = digits
            .parse::<usize>()
            .map_err(|_| format!("decimal precision `{digits}` is not a nonnegative integer"))?;
        return Ok(OutputFormat::Decimal(digits));
    }
    Err(format!(
        "unknown format `{s}` (expected `rational` or `decimal:<digits>`)"
    ))
}

fn emit<O: Write>(out: &mut O, record: &OutputRecord) {
    let line = serde_json::to_string(record).expect("record serializes");
    writeln!(out, "{line}").expect("write record");
}
