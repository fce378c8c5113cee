use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use chipfire::experiments::io::{parse_divisor, read_graph};
use chipfire::experiments::{run_single, run_to_writer, ExperimentConfig, OutputFormat, Summary, SweepMode};
use chipfire::{rank, Divisor, Multigraph, ToricConfig, ToricMode, ToricRanker};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Chip-firing rank, toric rank and Riemann–Roch verification.
#[derive(Parser)]
#[command(name = "chipfire", version)]
struct Cli {
    /// Worker threads for sweeps (default: all cores). Reports do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Baker–Norine rank of a divisor.
    Rank(CaseArgs),
    /// Toric rank of a divisor on a generic graph curve.
    ToricRank {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        toric: ToricArgs,
    },
    /// Check graph Riemann–Roch for one divisor.
    RrCheck {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check graph and toric Riemann–Roch for one divisor.
    ToricRrCheck {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        toric: ToricArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Riemann–Roch over every divisor in range on every 2-core graph in range.
    Exhaustive(ExhaustiveArgs),
    /// Riemann–Roch on random graphs of large genus.
    RandomSweep(RandomSweepArgs),
}

#[derive(Args)]
struct CaseArgs {
    /// JSON graph file: {"n": N, "adj": [[...], ...]}.
    #[arg(long)]
    graph: PathBuf,
    /// Comma-separated coefficients, one per vertex, e.g. 1,-1,0.
    #[arg(long, allow_hyphen_values = true)]
    divisor: String,
}

#[derive(Args)]
struct ToricArgs {
    /// Field size; must be prime (default: smallest prime above 10^10).
    #[arg(long)]
    prime: Option<u64>,
    /// Independent matrix samples per test; the majority wins, ties fail.
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::BlockProjection)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OutArgs {
    /// Write the report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct ExhaustiveArgs {
    #[arg(long)]
    max_vertices: usize,
    #[arg(long, default_value_t = 1)]
    min_vertices: usize,
    #[arg(long)]
    genus_max: i64,
    #[arg(long, default_value_t = 0)]
    genus_min: i64,
    /// Divisor entries range over [-window, degree + window] (default: the genus).
    #[arg(long)]
    window: Option<i64>,
    /// Lowest degree swept (default 0; needs --degree-max).
    #[arg(long, allow_hyphen_values = true, requires = "degree_max")]
    degree_min: Option<i64>,
    /// Highest degree swept (default g - 1 per graph).
    #[arg(long, allow_hyphen_values = true)]
    degree_max: Option<i64>,
    /// Edge multiplicity cap (default: genus-max + 1).
    #[arg(long)]
    max_multiplicity: Option<u32>,
    /// Also check toric Riemann–Roch.
    #[arg(long)]
    toric: bool,
    #[command(flatten)]
    toric_args: ToricArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct RandomSweepArgs {
    #[arg(long)]
    cases: usize,
    #[arg(long, default_value_t = 4)]
    min_genus: i64,
    #[arg(long, default_value_t = 5)]
    min_vertices: usize,
    #[arg(long, default_value_t = 10)]
    max_vertices: usize,
    #[command(flatten)]
    toric_args: ToricArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    BlockProjection,
    RandomVector,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<ModeArg> for ToricMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::BlockProjection => ToricMode::BlockProjection,
            ModeArg::RandomVector => ToricMode::RandomVector,
        }
    }
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Csv => OutputFormat::Csv,
        }
    }
}

impl ToricArgs {
    fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(p) = self.prime {
            config.prime = p;
        }
        config.trials = self.trials;
        config.toric_mode = self.mode.into();
        config.seed = self.seed;
    }
}

/// Outcome of a subcommand that ran to completion.
enum Verdict {
    Pass,
    Violation,
}

fn load_case(case: &CaseArgs) -> Result<(Multigraph, Divisor)> {
    let g = read_graph(&case.graph).with_context(|| format!("reading graph {}", case.graph.display()))?;
    let d = parse_divisor(&case.divisor)?;
    g.check_divisor(&d)?;
    Ok((g, d))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn report_summary(summary: &Summary, started: Instant) -> Verdict {
    eprintln!(
        "cases {}  passed {}  failed {}  anomalous {}  wall clock {:.3}s",
        summary.cases,
        summary.passed,
        summary.failed,
        summary.anomalous_cases,
        started.elapsed().as_secs_f64()
    );
    if summary.has_violation() {
        Verdict::Violation
    } else {
        Verdict::Pass
    }
}

fn single_check(case: &CaseArgs, config: ExperimentConfig, out: &OutArgs) -> Result<Verdict> {
    let started = Instant::now();
    let (g, d) = load_case(case)?;
    let report = run_single(&config, &g, &d)?;
    let record = &report.records[0];
    print_json(record)?;
    if let Some(path) = &out.out {
        let mut w = create(path)?;
        report.write_to(&mut w, out.format.into())?;
        w.flush()?;
    }
    Ok(report_summary(&report.summary, started))
}

fn sweep(config: &ExperimentConfig, out: &OutArgs) -> Result<Verdict> {
    let started = Instant::now();
    config.validate()?;
    let summary = match &out.out {
        Some(path) => {
            let mut w = create(path)?;
            let s = run_to_writer(config, out.format.into(), &mut w)?;
            w.flush()?;
            s
        }
        None => run_to_writer(config, out.format.into(), std::io::stdout().lock())?,
    };
    Ok(report_summary(&summary, started))
}

fn execute(cli: Cli) -> Result<Verdict> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring worker threads")?;
    }
    match cli.command {
        Command::Rank(case) => {
            let (g, d) = load_case(&case)?;
            print_json(&rank(&g, &d))?;
            Ok(Verdict::Pass)
        }
        Command::ToricRank { case, toric } => {
            let (g, d) = load_case(&case)?;
            let mut config = ToricConfig::default().with_trials(toric.trials)?.with_mode(toric.mode.into()).with_seed(toric.seed);
            if let Some(p) = toric.prime {
                config = config.with_prime(p)?;
            }
            let mut ranker = ToricRanker::new(&g, config);
            let result = ranker.toric_rank(&d);
            print_json(&serde_json::json!({
                "rank": result.rank,
                "witness_failure": result.witness_failure,
                "anomalies": ranker.anomalies(),
            }))?;
            Ok(Verdict::Pass)
        }
        Command::RrCheck { case, out } => {
            let config = ExperimentConfig { toric: false, ..ExperimentConfig::single() };
            single_check(&case, config, &out)
        }
        Command::ToricRrCheck { case, toric, out } => {
            let mut config = ExperimentConfig::single();
            toric.apply(&mut config);
            single_check(&case, config, &out)
        }
        Command::Exhaustive(a) => {
            let mut config = ExperimentConfig {
                mode: SweepMode::Exhaustive,
                min_vertices: a.min_vertices,
                genus_min: a.genus_min,
                window: a.window,
                degree_range: a.degree_max.map(|hi| (a.degree_min.unwrap_or(0), hi)),
                max_multiplicity: a.max_multiplicity,
                toric: a.toric,
                ..ExperimentConfig::exhaustive(a.max_vertices, a.genus_max)
            };
            a.toric_args.apply(&mut config);
            sweep(&config, &a.out)
        }
        Command::RandomSweep(a) => {
            let mut config = ExperimentConfig {
                genus_min: a.min_genus,
                min_vertices: a.min_vertices,
                max_vertices: a.max_vertices,
                ..ExperimentConfig::random_sweep(a.cases)
            };
            a.toric_args.apply(&mut config);
            sweep(&config, &a.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
