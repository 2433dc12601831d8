use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mohillvallea::bench::fixtures::{export_fixture_comparison, read_fixtures, published_results};
use mohillvallea::bench::snapshot::export_clustering_snapshot;
use mohillvallea::bench::{
    compare_significance, read_runs_csv, run_experiment, summarize, write_summary_csv, Algorithm, ExperimentSpec,
    PopulationChoice, ResultTable, RunStatus,
};
use mohillvallea::gaussian::CoreConfig;
use mohillvallea::metrics::achievable_limits;
use mohillvallea::optimizer::{MultiStartConfig, TraceCadence};
use mohillvallea::problems::{Benchmark, Problem};
use mohillvallea::{Error, Result};

#[derive(Parser)]
#[command(name = "mohv", version, about = "MO-HillVallEA benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment matrix and write per-run, summary and trace CSVs.
    Run(RunArgs),
    /// Summarize per-run CSVs and mark significant differences.
    Compare(CompareArgs),
    /// Best IGD and IGDX attainable by any approximation set of the given size.
    Limits(LimitsArgs),
    /// Cluster uniform samples and write the clustering as CSV.
    ClusterSnapshot(SnapshotArgs),
    /// Write a sampled reference Pareto set with mode labels.
    ReferenceSet(ReferenceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PopulationKind {
    /// Size from the dimension rule with `--subsets` subsets.
    Scaled,
    /// `--pop-size` solutions and `--subsets` subsets.
    Fixed,
    MultiStart,
}

#[derive(Args)]
struct RunArgs {
    /// Problem names, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    problem: Vec<String>,
    /// Algorithms (mohv-mam, mohv-mamu, mohv-imam, mohv-imamu, mamalgam), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "mohv-mam")]
    algo: Vec<String>,
    #[arg(long, default_value_t = 31)]
    runs: usize,
    #[arg(long, default_value_t = 30_000)]
    budget: u64,
    /// Approximation set size.
    #[arg(long, default_value_t = 100)]
    na: usize,
    /// Archive size (default 1000 for two objectives, 2500 otherwise).
    #[arg(long)]
    ne: Option<usize>,
    /// Seed of the first run; run i uses seed + i.
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value = "scaled")]
    population: PopulationKind,
    #[arg(long, default_value_t = 20)]
    subsets: usize,
    #[arg(long)]
    pop_size: Option<usize>,
    /// Generations of an instance per generation of the next one.
    #[arg(long, default_value_t = 8)]
    interval: usize,
    #[arg(long, default_value_t = 5000)]
    reference_points: usize,
    /// Evaluation interval of extra trace rows; 0 disables them.
    #[arg(long, default_value_t = 1000)]
    checkpoint: u64,
    /// Only write checkpoint trace rows.
    #[arg(long)]
    sparse_trace: bool,
    /// TOML file with Gaussian core settings.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Per-run CSV files.
    #[arg(required = true)]
    runs: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    /// Number of tests for the Bonferroni correction (default: pairs tested).
    #[arg(long)]
    tests: Option<usize>,
    /// Add the shipped published results.
    #[arg(long)]
    fixtures: bool,
    /// Add published results from a CSV file.
    #[arg(long)]
    fixture_file: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    na: usize,
    #[arg(long, default_value_t = 5000)]
    reference_points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LimitsArgs {
    #[arg(long, value_delimiter = ',', default_value = "two-on-one,sym-part1,sym-part2,sym-part3,ssuf1,ssuf3")]
    problem: Vec<String>,
    #[arg(long, default_value_t = 5000)]
    reference_points: usize,
    #[arg(long, default_value_t = 100)]
    na: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SnapshotArgs {
    #[arg(long)]
    problem: String,
    /// Number of uniform samples.
    #[arg(long, default_value_t = 250)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReferenceArgs {
    #[arg(long)]
    problem: String,
    #[arg(long, default_value_t = 5000)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn run(args: RunArgs) -> Result<()> {
    let mut spec = ExperimentSpec::new(&args.out, args.seed);
    spec.problems = args.problem;
    spec.algorithms = args.algo.iter().map(|a| Algorithm::from_name(a)).collect::<Result<_>>()?;
    spec.runs = args.runs;
    spec.budget = args.budget;
    spec.approximation_size = args.na;
    spec.archive_size = args.ne;
    spec.jobs = args.jobs;
    spec.reference_points = args.reference_points;
    spec.population = match args.population {
        PopulationKind::Scaled => PopulationChoice::Scaled { subsets: args.subsets },
        PopulationKind::Fixed => PopulationChoice::Fixed {
            size: args.pop_size.ok_or_else(|| Error::InvalidConfig("--pop-size is required".into()))?,
            subsets: args.subsets,
        },
        PopulationKind::MultiStart => PopulationChoice::MultiStart(MultiStartConfig {
            base_size: args.pop_size,
            interval: args.interval,
            ..MultiStartConfig::default()
        }),
    };
    spec.trace = TraceCadence {
        every_generation: !args.sparse_trace,
        checkpoint: (args.checkpoint > 0).then_some(args.checkpoint),
    };
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)?;
        spec.core = toml::from_str::<CoreConfig>(&text)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    }
    let table = run_experiment(&spec)?;
    let failed = table.runs.iter().filter(|r| r.status != RunStatus::Ok).count();
    let mut out = io::stdout().lock();
    write_summary_csv(&table.cells, false, &mut out)?;
    if failed > 0 {
        eprintln!("{failed} run(s) failed; see {}", args.out.join("runs.csv").display());
    }
    Ok(())
}

fn compare(args: CompareArgs) -> Result<()> {
    let mut runs = Vec::new();
    for path in &args.runs {
        runs.extend(read_runs_csv(File::open(path)?, path)?);
    }
    let mut limits = Vec::new();
    for r in &runs {
        if limits.iter().any(|(p, _, _): &(String, f64, f64)| *p == r.problem) {
            continue;
        }
        if let Ok(problem) = Benchmark::from_name(&r.problem) {
            let reference = problem.reference_set(args.reference_points)?;
            let (igd, igdx) = achievable_limits(&reference, args.na);
            limits.push((r.problem.clone(), igd, igdx));
        }
    }
    let mut table = ResultTable { cells: summarize(&runs, &limits), runs, ..ResultTable::default() };
    compare_significance(&mut table, args.alpha, args.tests);
    let mut fixtures = Vec::new();
    if args.fixtures {
        fixtures.extend(published_results());
    }
    if let Some(path) = &args.fixture_file {
        fixtures.extend(read_fixtures(File::open(path)?, path)?);
    }
    let merged = export_fixture_comparison(&table, &fixtures);
    write_summary_csv(&merged.cells, true, output(args.out.as_deref())?)?;
    if let Some(alpha) = table.alpha {
        eprintln!("significance level {alpha:.6} over {} tests", table.comparisons.len());
    }
    Ok(())
}

fn limits(args: LimitsArgs) -> Result<()> {
    let mut w = csv::Writer::from_writer(output(args.out.as_deref())?);
    w.write_record(["problem", "igd_limit", "igdx_limit", "seconds"])?;
    for name in &args.problem {
        let start = Instant::now();
        let problem = Benchmark::from_name(name)?;
        let reference = problem.reference_set(args.reference_points)?;
        let (igd, igdx) = achievable_limits(&reference, args.na);
        let seconds = start.elapsed().as_secs_f64();
        w.write_record([problem.descriptor().name.clone(), format!("{igd:.6}"), format!("{igdx:.6}"), format!("{seconds:.3}")])?;
    }
    w.flush()?;
    Ok(())
}

fn snapshot(args: SnapshotArgs) -> Result<()> {
    let problem = Benchmark::from_name(&args.problem)?;
    let clustering = export_clustering_snapshot(&problem, args.size, args.seed, output(args.out.as_deref())?)?;
    eprintln!("{} clusters, {} evaluations", clustering.clusters.len(), clustering.evaluations);
    Ok(())
}

fn reference(args: ReferenceArgs) -> Result<()> {
    let problem = Benchmark::from_name(&args.problem)?;
    let set = problem.reference_set(args.points)?;
    set.write_csv(output(args.out.as_deref())?)?;
    eprintln!("{} points in {} modes", set.len(), set.mode_count());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a),
        Command::Compare(a) => compare(a),
        Command::Limits(a) => limits(a),
        Command::ClusterSnapshot(a) => snapshot(a),
        Command::ReferenceSet(a) => reference(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
