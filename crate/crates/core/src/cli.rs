//! SNR sweep harness, report files, and the command-line front end.

use std::fmt;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use serde::{Deserialize, Serialize};

use crate::analysis::{union_bound, AnalyticMethod, SnrPoint};
use crate::codebook::{build_codebook, PepConvention, SystemConfig};
use crate::error::{Error, Result};
use crate::simulator::monte_carlo;

/// Exact CSV header of a report.
pub const CSV_HEADER: [&str; 10] = [
    "snr_db",
    "bler_craig",
    "bler_exp",
    "ber_craig",
    "ber_exp",
    "bler_sim",
    "ber_sim",
    "bler_ci95",
    "ber_ci95",
    "convention",
];

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum SweepMode {
    Analytic,
    Simulate,
    #[default]
    Both,
}

impl SweepMode {
    pub fn analytic(self) -> bool {
        matches!(self, SweepMode::Analytic | SweepMode::Both)
    }

    pub fn simulate(self) -> bool {
        matches!(self, SweepMode::Simulate | SweepMode::Both)
    }
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytic" => Ok(SweepMode::Analytic),
            "simulate" => Ok(SweepMode::Simulate),
            "both" => Ok(SweepMode::Both),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config(format!("unknown format `{other}`"))),
        }
    }
}

/// One experiment: a system, an SNR grid, and what to compute.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub system: SystemConfig,
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub snr_db_step: f64,
    pub trials: u64,
    pub seed: u64,
    pub mode: SweepMode,
    pub format: ReportFormat,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.snr_db_start, self.snr_db_stop, self.snr_db_step]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Config("SNR grid bounds must be finite".into()));
        }
        if self.snr_db_start > self.snr_db_stop {
            return Err(Error::Config(format!(
                "snr start {} exceeds stop {}",
                self.snr_db_start, self.snr_db_stop
            )));
        }
        if self.snr_db_step <= 0.0 {
            return Err(Error::Config(format!(
                "snr step must be positive, got {}",
                self.snr_db_step
            )));
        }
        if self.mode.simulate() && self.trials == 0 {
            return Err(Error::Config("simulation needs at least one trial".into()));
        }
        Ok(())
    }

    /// `start, start + step, ...` up to and including `stop` (with a small
    /// allowance for rounding in the step count).
    pub fn snr_grid(&self) -> Vec<SnrPoint> {
        let span = (self.snr_db_stop - self.snr_db_start) / self.snr_db_step;
        let count = (span + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| SnrPoint::from_db(self.snr_db_start + i as f64 * self.snr_db_step))
            .collect()
    }
}

/// One SNR point of a sweep. Absent quantities are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub snr_db: f64,
    pub bler_craig: Option<f64>,
    pub bler_exp: Option<f64>,
    pub ber_craig: Option<f64>,
    pub ber_exp: Option<f64>,
    pub bler_sim: Option<f64>,
    pub ber_sim: Option<f64>,
    pub bler_ci95: Option<f64>,
    pub ber_ci95: Option<f64>,
    pub convention: PepConvention,
    /// Set when part of the row could not be computed; never serialised.
    #[serde(skip)]
    pub error: Option<String>,
}

impl ReportRow {
    fn empty(snr: SnrPoint, convention: PepConvention) -> Self {
        ReportRow {
            snr_db: snr.db(),
            bler_craig: None,
            bler_exp: None,
            ber_craig: None,
            ber_exp: None,
            bler_sim: None,
            ber_sim: None,
            bler_ci95: None,
            ber_ci95: None,
            convention,
            error: None,
        }
    }

    fn note_error(&mut self, e: &Error) {
        let msg = e.to_string();
        self.error = Some(match self.error.take() {
            Some(prev) => format!("{prev}; {msg}"),
            None => msg,
        });
    }
}

/// Evaluates every requested quantity at every grid point.
///
/// Only an invalid configuration fails the whole sweep. A failure at a single
/// point leaves the affected fields empty and sets [`ReportRow::error`].
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<ReportRow>> {
    config.validate()?;
    let codebook = build_codebook(config.system)?;
    let convention = config.system.convention();
    let mut rows = Vec::new();
    for (i, snr) in config.snr_grid().into_iter().enumerate() {
        let mut row = ReportRow::empty(snr, convention);
        if config.mode.analytic() {
            match union_bound(&codebook, snr, AnalyticMethod::Craig) {
                Ok(u) => {
                    row.bler_craig = Some(u.bler);
                    row.ber_craig = Some(u.ber);
                }
                Err(e) => row.note_error(&e),
            }
            match union_bound(&codebook, snr, AnalyticMethod::Exponential) {
                Ok(u) => {
                    row.bler_exp = Some(u.bler);
                    row.ber_exp = Some(u.ber);
                }
                Err(e) => row.note_error(&e),
            }
        }
        if config.mode.simulate() {
            match monte_carlo(
                &codebook,
                snr,
                config.trials,
                config.seed.wrapping_add(i as u64),
            ) {
                Ok(est) => {
                    row.bler_sim = Some(est.bler_hat);
                    row.ber_sim = Some(est.ber_hat);
                    row.bler_ci95 = Some(est.bler_ci95);
                    row.ber_ci95 = Some(est.ber_ci95);
                }
                Err(e) => row.note_error(&e),
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

// Shortest representation that parses back to the same f64; never uses
// exponent notation.
fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn parse_cell(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| Error::Contract(format!("not a number: `{s}`")))
}

/// Writes `rows` to `out` in the requested format.
pub fn emit_report<W: Write>(rows: &[ReportRow], format: ReportFormat, out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Contract("refusing to write an empty report".into()));
    }
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in rows {
                w.write_record([
                    format!("{}", r.snr_db),
                    cell(r.bler_craig),
                    cell(r.bler_exp),
                    cell(r.ber_craig),
                    cell(r.ber_exp),
                    cell(r.bler_sim),
                    cell(r.ber_sim),
                    cell(r.bler_ci95),
                    cell(r.ber_ci95),
                    r.convention.to_string(),
                ])?;
            }
            w.flush()?;
        }
        ReportFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            out.write_all(b"\n")?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Writes the report to `path`, or to standard output when `path` is `None`.
pub fn write_report(rows: &[ReportRow], format: ReportFormat, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => emit_report(rows, format, io::BufWriter::new(File::create(p)?)),
        None => emit_report(rows, format, io::stdout().lock()),
    }
}

/// Parses a CSV report produced by [`emit_report`].
pub fn parse_report_csv<R: Read>(input: R) -> Result<Vec<ReportRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::Contract(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let f = |i: usize| parse_cell(&record[i]);
        rows.push(ReportRow {
            snr_db: f(0)?.ok_or_else(|| Error::Contract("missing snr_db".into()))?,
            bler_craig: f(1)?,
            bler_exp: f(2)?,
            ber_craig: f(3)?,
            ber_exp: f(4)?,
            bler_sim: f(5)?,
            ber_sim: f(6)?,
            bler_ci95: f(7)?,
            ber_ci95: f(8)?,
            convention: record[9].parse()?,
            error: None,
        });
    }
    Ok(rows)
}

/// Analytic and Monte Carlo error rates of OFDM with index modulation.
///
/// Settings come from built-in defaults, then the optional `--config` file
/// (`key = value` lines using the long flag names), then explicit flags.
#[derive(Debug, Default, Parser)]
#[command(name = "ofdmim", version)]
pub struct Args {
    /// key=value file with any of the settings below
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Subcarriers per group (N)
    #[arg(long)]
    pub n: Option<usize>,
    /// Active subcarriers (K)
    #[arg(long)]
    pub k: Option<usize>,
    /// PSK order (M)
    #[arg(long)]
    pub m: Option<usize>,
    /// Mean channel power gain
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub snr_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub snr_stop: Option<f64>,
    #[arg(long)]
    pub snr_step: Option<f64>,
    /// Monte Carlo trials per SNR point
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<SweepMode>,
    /// `standard` or `paper`
    #[arg(long)]
    pub convention: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<ReportFormat>,
    /// Output file; standard output if omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
struct Settings {
    n: usize,
    k: usize,
    m: usize,
    mu: f64,
    snr_start: f64,
    snr_stop: f64,
    snr_step: f64,
    trials: u64,
    seed: u64,
    mode: SweepMode,
    convention: PepConvention,
    format: ReportFormat,
    out: Option<PathBuf>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            n: 4,
            k: 2,
            m: 2,
            mu: 1.0,
            snr_start: 0.0,
            snr_stop: 30.0,
            snr_step: 5.0,
            trials: 100_000,
            seed: 1,
            mode: SweepMode::Both,
            convention: PepConvention::Standard,
            format: ReportFormat::Csv,
            out: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

impl Settings {
    fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "n" => self.n = parse_value(&key, value)?,
                "k" => self.k = parse_value(&key, value)?,
                "m" => self.m = parse_value(&key, value)?,
                "mu" => self.mu = parse_value(&key, value)?,
                "snr-start" => self.snr_start = parse_value(&key, value)?,
                "snr-stop" => self.snr_stop = parse_value(&key, value)?,
                "snr-step" => self.snr_step = parse_value(&key, value)?,
                "trials" => self.trials = parse_value(&key, value)?,
                "seed" => self.seed = parse_value(&key, value)?,
                "mode" => self.mode = value.parse()?,
                "convention" => self.convention = value.parse()?,
                "format" => self.format = value.parse()?,
                "out" => self.out = Some(PathBuf::from(value)),
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key `{other}`",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(())
    }

    fn apply_args(&mut self, args: &Args) -> Result<()> {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if let Some(v) = args.$field.clone() { self.$field = v; })*
            };
        }
        take!(n, k, m, mu, snr_start, snr_stop, snr_step, trials, seed, mode, format);
        if let Some(c) = &args.convention {
            self.convention = c.parse()?;
        }
        if let Some(out) = &args.out {
            self.out = Some(out.clone());
        }
        Ok(())
    }

    fn into_sweep(self) -> Result<SweepConfig> {
        let system = SystemConfig::new(self.n, self.k, self.m, self.mu, self.convention)?;
        let config = SweepConfig {
            system,
            snr_db_start: self.snr_start,
            snr_db_stop: self.snr_stop,
            snr_db_step: self.snr_step,
            trials: self.trials,
            seed: self.seed,
            mode: self.mode,
            format: self.format,
            output_path: self.out,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Resolves defaults, config file, and flags into a validated sweep.
pub fn resolve_config(args: &Args) -> Result<SweepConfig> {
    let mut settings = Settings::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        settings.apply_file(&text)?;
    }
    settings.apply_args(args)?;
    settings.into_sweep()
}

struct Failure<'a>(&'a ReportRow);

impl fmt::Display for Failure<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} dB: {}",
            self.0.snr_db,
            self.0.error.as_deref().unwrap_or("unknown error")
        )
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let config = match resolve_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let rows = match run_sweep(&config) {
        Ok(r) => r,
        Err(e @ Error::Config(_)) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_COMPUTATION;
        }
    };
    let mut code = EXIT_OK;
    for row in rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("error: {}", Failure(row));
        code = EXIT_COMPUTATION;
    }
    if let Err(e) = write_report(&rows, config.format, config.output_path.as_deref()) {
        eprintln!("error: {e}");
        code = EXIT_COMPUTATION;
    }
    code
}
