//! The `pocketsim` command line.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use crate::tables::{read_ccdf, read_counts, write_ccdf, write_centrality, write_curve};
use crate::{import_contacts, load_config, read_trace, validate_trace, write_trace, ImportSpec};
use pocketsim_core::epidemic::{
    blacklist_experiment, centralities, start_time_experiment, BlacklistMode, BlacklistPolicy,
    ExperimentSpec,
};
use pocketsim_core::stats::{
    aggregate_ccdf, compare_ccdf, contact_count_comparison, periodicity_score,
    realized_zero_contact_fraction, ComparisonReport, GridSpec,
};
use pocketsim_core::{generate_trace, Trace, Variant};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "pocketsim", version, about = "Generate and study synthetic human contact traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a trace from a configuration file.
    Generate(GenerateArgs),
    /// Write the aggregate intercontact-time CCDF and print a summary.
    Analyze(AnalyzeArgs),
    /// Compare a trace against another trace or a reference CCDF.
    Compare(CompareArgs),
    /// Average epidemic broadcasts started at a fixed time of day.
    Epidemic(EpidemicArgs),
    /// Per-user centrality.
    Centrality(CentralityArgs),
    /// Broadcasts with centrality-based and random blacklists.
    Blacklist(BlacklistArgs),
    /// Broadcasts for several start times of day.
    StartTimes(StartTimesArgs),
    /// Check a trace file and list every invalid line.
    Validate(ValidateArgs),
    /// Convert a contact CSV into a trace file.
    Import(ImportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Piecewise,
    ExponentialPairwise,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    ReceiveOnly,
    Isolate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, env = "POCKETSIM_CONFIG")]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Drop the time-of-day term and whole-day gaps.
    #[arg(long)]
    no_periodic: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    trace: PathBuf,
    /// CCDF output; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Lower bound in seconds of the intercontact times scored for
    /// periodicity.
    #[arg(long, default_value_t = 6030.0)]
    threshold: f64,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Reference trace file.
    #[arg(long, conflicts_with = "reference_ccdf", required_unless_present = "reference_ccdf")]
    reference: Option<PathBuf>,
    /// Reference CCDF as a `t_seconds,ccdf` table.
    #[arg(long)]
    reference_ccdf: Option<PathBuf>,
    /// Reference contact counts as an `i,j,count` table.
    #[arg(long)]
    counts: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, default_value_t = 200)]
    runs: u32,
    /// Broadcast length in seconds.
    #[arg(long, default_value_t = 86_400)]
    horizon: u64,
    /// Seed of the random days and seed nodes; drawn at random if omitted.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "receive-only")]
    policy: PolicyArg,
}

#[derive(Args)]
struct EpidemicArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Start time of day as `HH:MM` or seconds.
    #[arg(long, default_value = "06:00", value_parser = time_of_day)]
    time_of_day: u64,
    #[command(flatten)]
    exp: ExperimentArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CentralityArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Horizon in seconds.
    #[arg(long, default_value_t = 6 * 86_400)]
    horizon: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BlacklistArgs {
    #[arg(long)]
    trace: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "06:00", value_parser = time_of_day)]
    time_of_day: u64,
    /// Centrality horizon in seconds.
    #[arg(long, default_value_t = 6 * 86_400)]
    centrality_horizon: u64,
    #[command(flatten)]
    exp: ExperimentArgs,
    #[arg(long)]
    out_centrality: PathBuf,
    #[arg(long)]
    out_random: PathBuf,
}

#[derive(Args)]
struct StartTimesArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Comma-separated times of day.
    #[arg(long, value_delimiter = ',', default_value = "06:00,18:00", value_parser = time_of_day)]
    times: Vec<u64>,
    #[command(flatten)]
    exp: ExperimentArgs,
    /// Receives one `start_HHMM.csv` per time.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    trace: PathBuf,
}

#[derive(Args)]
struct ImportArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 300)]
    granularity: u64,
    #[arg(long, default_value_t = 86_400)]
    day: u64,
    #[arg(long)]
    users: Option<u32>,
    #[arg(long)]
    days: Option<u32>,
    /// Names of the user, user, start and end columns.
    #[arg(long, value_delimiter = ',', default_value = "i,j,start,end")]
    columns: Vec<String>,
    /// Columns to skip.
    #[arg(long, value_delimiter = ',')]
    ignore: Vec<String>,
}

fn time_of_day(s: &str) -> Result<u64, String> {
    let secs = match s.split_once(':') {
        Some((h, m)) => {
            let h: u64 = h.parse().map_err(|_| format!("bad hour in `{s}`"))?;
            let m: u64 = m.parse().map_err(|_| format!("bad minute in `{s}`"))?;
            if m >= 60 {
                return Err(format!("bad minute in `{s}`"));
            }
            h * 3600 + m * 60
        }
        None => s.parse().map_err(|_| format!("`{s}` is neither HH:MM nor seconds"))?,
    };
    Ok(secs)
}

fn open_trace(path: &Path) -> Result<Trace> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_trace(BufReader::new(file)).with_context(|| format!("cannot read trace {}", path.display()))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("seed: {s}");
        s
    })
}

impl ExperimentArgs {
    fn spec(&self, time_of_day_s: u64) -> ExperimentSpec {
        ExperimentSpec {
            runs: self.runs,
            horizon_s: self.horizon,
            time_of_day_s,
            seed: seed_or_random(self.seed),
            policy: match self.policy {
                PolicyArg::ReceiveOnly => BlacklistPolicy::ReceiveOnly,
                PolicyArg::Isolate => BlacklistPolicy::Isolate,
            },
            ..ExperimentSpec::default()
        }
    }
}

fn generate(args: GenerateArgs) -> Result<()> {
    let mut config = load_config(&args.config)
        .with_context(|| format!("cannot load config {}", args.config.display()))?;
    if let Some(v) = args.variant {
        config.variant = match v {
            VariantArg::Piecewise => Variant::Piecewise,
            VariantArg::ExponentialPairwise => Variant::ExponentialPairwise,
        };
    }
    if args.no_periodic {
        config.periodic = false;
    }
    let seed = args.seed.or(config.seed).unwrap_or_else(rand::random);
    config.seed = Some(seed);

    let clock = Instant::now();
    let generated = generate_trace(&config)?;
    let mut out = output(Some(&args.out))?;
    let bytes = write_trace(&generated.trace, &mut out)?;
    drop(out);
    println!(
        "generated {} events ({bytes} bytes) for {} users over {} days in {:.3} s, seed {seed}",
        generated.trace.events().len(),
        config.n_users,
        config.d_sim_days,
        clock.elapsed().as_secs_f64()
    );
    Ok(())
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let trace = open_trace(&args.trace)?;
    let summary = |w: &mut dyn Write| -> io::Result<()> {
        writeln!(w, "events: {}", trace.events().len())?;
        writeln!(w, "zero-contact fraction: {:.4}", realized_zero_contact_fraction(&trace))?;
        match periodicity_score(&trace, args.threshold) {
            Ok(s) => writeln!(w, "periodicity score: {s:.4}"),
            Err(e) => writeln!(w, "periodicity score: n/a ({e})"),
        }
    };
    match aggregate_ccdf(&trace) {
        Ok(ccdf) => write_ccdf(&ccdf, output(args.out.as_deref())?)?,
        Err(e) => eprintln!("no CCDF written: {e}"),
    }
    // keep standard output clean when it carries the table
    if args.out.is_some() {
        summary(&mut io::stdout().lock())?;
    } else {
        summary(&mut io::stderr().lock())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ReportRow<'a> {
    metric: &'a str,
    avg_rel_error: f64,
    max_rel_error: f64,
    max_error_location: f64,
}

fn compare(args: CompareArgs) -> Result<()> {
    let trace = open_trace(&args.trace)?;
    let model = aggregate_ccdf(&trace)?;
    let (reference, reference_trace) = match (&args.reference, &args.reference_ccdf) {
        (Some(p), _) => {
            let r = open_trace(p)?;
            (aggregate_ccdf(&r)?, Some(r))
        }
        (None, Some(p)) => {
            let file = File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
            (read_ccdf(BufReader::new(file)).with_context(|| format!("cannot read {}", p.display()))?, None)
        }
        (None, None) => bail!("either --reference or --reference-ccdf is required"),
    };
    let mut reports: Vec<(&str, ComparisonReport)> =
        vec![("ccdf", compare_ccdf(&model, &reference, GridSpec { points: args.grid })?)];
    let counts = match (&args.counts, &reference_trace) {
        (Some(p), _) => {
            let file = File::open(p).with_context(|| format!("cannot open {}", p.display()))?;
            Some(read_counts(BufReader::new(file))?)
        }
        (None, Some(r)) => Some(r.pairs().map(|(i, j)| ((i, j), r.contact_count(i, j) as u64)).collect()),
        (None, None) => None,
    };
    if let Some(counts) = counts {
        reports.push(("contact_count", contact_count_comparison(&trace, &counts)?));
    }

    let rows = reports.iter().map(|(metric, r)| ReportRow {
        metric,
        avg_rel_error: r.avg_rel_error,
        max_rel_error: r.max_rel_error,
        max_error_location: r.max_error_location,
    });
    let mut out = output(args.out.as_deref())?;
    match args.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut out, &row)?;
                out.write_all(b"\n")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn epidemic(args: EpidemicArgs) -> Result<()> {
    let trace = open_trace(&args.trace)?;
    let spec = args.exp.spec(args.time_of_day);
    let curve = start_time_experiment(&trace, &[args.time_of_day], &spec)?.remove(0);
    write_curve(&curve, output(args.out.as_deref())?)?;
    Ok(())
}

fn centrality(args: CentralityArgs) -> Result<()> {
    let trace = open_trace(&args.trace)?;
    write_centrality(&centralities(&trace, args.horizon), output(args.out.as_deref())?)?;
    Ok(())
}

fn blacklist(args: BlacklistArgs) -> Result<()> {
    let trace = open_trace(&args.trace)?;
    let spec = ExperimentSpec {
        centrality_horizon_s: args.centrality_horizon,
        ..args.exp.spec(args.time_of_day)
    };
    let central = blacklist_experiment(&trace, args.k, BlacklistMode::Centrality, &spec)?;
    let random = blacklist_experiment(&trace, args.k, BlacklistMode::Random, &spec)?;
    write_curve(&central, output(Some(&args.out_centrality))?)?;
    write_curve(&random, output(Some(&args.out_random))?)?;
    Ok(())
}

fn start_times(args: StartTimesArgs) -> Result<()> {
    let trace = open_trace(&args.trace)?;
    let spec = args.exp.spec(0);
    let curves = start_time_experiment(&trace, &args.times, &spec)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("cannot create {}", args.out_dir.display()))?;
    for (tod, curve) in args.times.iter().zip(&curves) {
        let name = format!("start_{:02}{:02}.csv", tod / 3600, tod % 3600 / 60);
        write_curve(curve, output(Some(&args.out_dir.join(name)))?)?;
    }
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<()> {
    let file = File::open(&args.trace).with_context(|| format!("cannot open {}", args.trace.display()))?;
    let report = validate_trace(BufReader::new(file))?;
    for (line, message) in &report.issues {
        println!("line {line}: {message}");
    }
    if !report.is_valid() {
        bail!("{} invalid line(s) in {}", report.issues.len(), args.trace.display());
    }
    println!("ok: {} events", report.valid_rows);
    Ok(())
}

fn import(args: ImportArgs) -> Result<()> {
    let [i, j, start, end]: [String; 4] = args
        .columns
        .try_into()
        .map_err(|_| anyhow::anyhow!("--columns needs exactly four names"))?;
    let spec = ImportSpec {
        i_column: i,
        j_column: j,
        start_column: start,
        end_column: end,
        ignored_columns: args.ignore,
        granularity_s: args.granularity,
        d_day_s: args.day,
        n_users: args.users,
        d_sim_days: args.days,
    };
    let file = File::open(&args.input).with_context(|| format!("cannot open {}", args.input.display()))?;
    let trace = import_contacts(BufReader::new(file), &spec)?;
    write_trace(&trace, output(Some(&args.out))?)?;
    println!("imported {} events for {} users", trace.events().len(), trace.n_users());
    Ok(())
}

/// Parses `args` (program name first) and runs the command. Errors are
/// reported on standard error.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Analyze(a) => analyze(a),
        Command::Compare(a) => compare(a),
        Command::Epidemic(a) => epidemic(a),
        Command::Centrality(a) => centrality(a),
        Command::Blacklist(a) => blacklist(a),
        Command::StartTimes(a) => start_times(a),
        Command::Validate(a) => validate(a),
        Command::Import(a) => import(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
