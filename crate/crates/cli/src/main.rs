use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use eisenlab_core::characters::{primitive_character, DirichletCharacter};
use eisenlab_core::cusps::enumerate_cusps;
use eisenlab_core::eisenstein::EisensteinSeries;
use eisenlab_core::error::SeriesError;
use eisenlab_core::scanner::{
    congruence_check, emit, expansion_json, render, scan, EigenTable, OutputFormat, ScanConfig,
};

#[derive(Parser)]
#[command(
    name = "eisenlab",
    version,
    about = "Weight-two Eisenstein series, cusps and cuspidal orders"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check and order computation for all admissible configurations at a level.
    Scan(ScanArgs),
    /// Print the q-expansion of one series as JSON.
    Expand(ExpandArgs),
    /// List the cusps of X_0(N).
    Cusps {
        #[arg(long)]
        level: u64,
    },
    /// Check an external eigenvalue table for Eisenstein congruences mod a prime above q.
    Congruence(CongruenceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CharArgs {
    #[arg(long, default_value_t = 1)]
    chi_conductor: u64,
    #[arg(long, default_value_t = 0)]
    chi_index: usize,
}

impl CharArgs {
    fn character(&self) -> anyhow::Result<DirichletCharacter> {
        Ok(primitive_character(self.chi_conductor, self.chi_index)?)
    }
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    level: u64,
    #[arg(long, default_value_t = 100)]
    precision: u64,
    #[arg(long, default_value_t = 50)]
    prime_bound: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, requires = "chi_index")]
    chi_conductor: Option<u64>,
    #[arg(long, requires = "chi_conductor")]
    chi_index: Option<usize>,
    /// Include per-configuration wall time (makes output run-dependent).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long)]
    level: u64,
    #[command(flatten)]
    chi: CharArgs,
    #[arg(long, default_value_t = 1)]
    mbar: u64,
    #[arg(long, default_value_t = 1)]
    lbar: u64,
    #[arg(long, default_value_t = 50)]
    precision: u64,
}

#[derive(Args)]
struct CongruenceArgs {
    #[arg(long)]
    table: PathBuf,
    #[arg(long)]
    level: u64,
    #[arg(long)]
    q: u64,
    #[command(flatten)]
    chi: CharArgs,
}

/// A check ran and did not pass (exit 1), as opposed to bad input (exit 2).
#[derive(Debug)]
struct CheckFailed(String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

/// Writes to stdout; a closed pipe is not an error.
fn write_stdout(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run_scan(a: ScanArgs) -> anyhow::Result<bool> {
    let format = match a.format {
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    };
    let config = ScanConfig {
        level: a.level,
        precision: a.precision,
        prime_bound: a.prime_bound,
        format,
        out: a.out.as_ref().map(|p| p.display().to_string()),
        chi_filter: a.chi_conductor.zip(a.chi_index),
        jobs: a.jobs,
        timing: a.timing,
    };
    let doc = scan(&config)?;
    match &a.out {
        Some(path) => emit(&doc, format, path)?,
        None => write_stdout(&render(&doc, format)?)?,
    }
    Ok(doc.passed())
}

fn run_expand(a: ExpandArgs) -> anyhow::Result<bool> {
    let s = EisensteinSeries::new(a.chi.character()?, a.mbar, a.lbar)?;
    if !a.level.is_multiple_of(s.level()) {
        return Err(anyhow!(
            "series level {} does not divide {}",
            s.level(),
            a.level
        ));
    }
    let (_, q) = match s.two_path(a.precision) {
        Ok(x) => x,
        Err(e @ SeriesError::Incompatible(_)) => return Err(CheckFailed(e.to_string()).into()),
        Err(e) => return Err(e.into()),
    };
    let q = q.with_level(a.level);
    write_stdout(&(serde_json::to_string_pretty(&expansion_json(&q))? + "\n"))?;
    Ok(true)
}

fn run_cusps(level: u64) -> anyhow::Result<bool> {
    if level == 0 {
        return Err(anyhow!("level must be positive"));
    }
    let cusps = enumerate_cusps(level);
    let records: Vec<_> = cusps.iter().map(|c| c.record()).collect();
    let width_sum: u64 = cusps.iter().map(|c| c.width()).sum();
    let out = serde_json::json!({
        "level": level,
        "count": cusps.len(),
        "width_sum": width_sum,
        "cusps": records,
    });
    write_stdout(&(serde_json::to_string_pretty(&out)? + "\n"))?;
    Ok(true)
}

fn run_congruence(a: CongruenceArgs) -> anyhow::Result<bool> {
    let table = EigenTable::from_path(&a.table)?;
    let chi = a.chi.character()?;
    let report = congruence_check(&table, &chi, a.q, a.level)
        .with_context(|| format!("table {}", a.table.display()))?;
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    write_stdout(&(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Scan(a) => run_scan(a),
        Command::Expand(a) => run_expand(a),
        Command::Cusps { level } => run_cusps(level),
        Command::Congruence(a) => run_congruence(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<CheckFailed>() => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
