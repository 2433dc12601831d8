//! Experiment runner, result tables and significance testing.
//!
//! An experiment is a matrix of problems and algorithms, each cell run with
//! seeds `seed_base + i`. Output directory layout:
//!
//! ```text
//! runs.csv                  problem,algorithm,run,seed,igd,igdx,mode_ratio,evaluations,status
//! summary.csv               problem,algorithm,metric,mean,sd,limit,n_runs
//! traces/<problem>_<algorithm>_run<i>.csv
//! references/<problem>_<count>.csv
//! ```

pub mod fixtures;
pub mod snapshot;
pub mod stats;

use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::gaussian::{CoreConfig, CoreVariant};
use crate::metrics::achievable_limits;
use crate::optimizer::{fixed_population_size, multi_start_base, run, write_trace_csv, MultiStartConfig, PopulationMode, RunConfig, TraceCadence};
use crate::problems::{fmt17, Benchmark, Problem, ReferenceSet};
use crate::{Error, Result};

pub use stats::{bonferroni, rank_sum_test, RankSumTest};

/// An optimizer configuration that can fill a column of a result table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// MO-HillVallEA with the given Gaussian core.
    MoHv(CoreVariant),
    /// The core optimizer on the whole population without clustering.
    Mamalgam,
}

impl Algorithm {
    pub fn name(self) -> String {
        match self {
            Algorithm::MoHv(v) => format!("mohv-{}", v.name()),
            Algorithm::Mamalgam => "mamalgam".to_string(),
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        if lower == "mamalgam" {
            return Ok(Algorithm::Mamalgam);
        }
        lower
            .strip_prefix("mohv-")
            .and_then(|v| CoreVariant::from_name(v).ok())
            .map(Algorithm::MoHv)
            .ok_or_else(|| Error::UnknownAlgorithm(name.to_string()))
    }

    /// Applies this algorithm to a base run configuration.
    pub fn configure(self, base: &RunConfig) -> RunConfig {
        match self {
            Algorithm::MoHv(v) => RunConfig { core: CoreConfig { variant: v, ..base.core.clone() }, clustering: true, ..base.clone() },
            Algorithm::Mamalgam => RunConfig { clustering: false, ..base.clone() },
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Population sizing of every run in an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum PopulationChoice {
    /// Fixed population with `subsets` subsets and the size rule for `n`.
    Scaled { subsets: usize },
    Fixed { size: usize, subsets: usize },
    MultiStart(MultiStartConfig),
}

impl Default for PopulationChoice {
    fn default() -> Self {
        PopulationChoice::Scaled { subsets: 20 }
    }
}

impl PopulationChoice {
    pub fn resolve(&self, n: usize) -> PopulationMode {
        match self {
            PopulationChoice::Scaled { subsets } => {
                PopulationMode::Fixed { size: fixed_population_size(n, *subsets), subsets: *subsets }
            }
            PopulationChoice::Fixed { size, subsets } => PopulationMode::Fixed { size: *size, subsets: *subsets },
            PopulationChoice::MultiStart(ms) => PopulationMode::MultiStart(ms.clone()),
        }
    }

    /// Size of the first population a run starts with.
    pub fn initial_size(&self, n: usize, m: usize) -> usize {
        match self.resolve(n) {
            PopulationMode::Fixed { size, .. } => size,
            PopulationMode::MultiStart(ms) => ms.base_size.unwrap_or(multi_start_base(n, m).0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problems: Vec<String>,
    pub algorithms: Vec<Algorithm>,
    pub runs: usize,
    pub budget: u64,
    /// Approximation set size.
    pub approximation_size: usize,
    /// Archive size; 1000 for two objectives and 2500 otherwise when unset.
    pub archive_size: Option<usize>,
    pub seed_base: u64,
    pub out_dir: PathBuf,
    /// Worker threads for independent runs.
    pub jobs: usize,
    pub population: PopulationChoice,
    pub reference_points: usize,
    pub core: CoreConfig,
    pub trace: TraceCadence,
}

impl ExperimentSpec {
    pub fn new(out_dir: impl Into<PathBuf>, seed_base: u64) -> Self {
        Self {
            problems: vec!["sym-part1".to_string()],
            algorithms: vec![Algorithm::MoHv(CoreVariant::Mam)],
            runs: 31,
            budget: 30_000,
            approximation_size: 100,
            archive_size: None,
            seed_base,
            out_dir: out_dir.into(),
            jobs: 1,
            population: PopulationChoice::default(),
            reference_points: 5000,
            core: CoreConfig::default(),
            trace: TraceCadence::default(),
        }
    }

    pub fn default_archive_size(m: usize) -> usize {
        if m <= 2 {
            1000
        } else {
            2500
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: String| Err(Error::InvalidConfig(what));
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.problems.is_empty() || self.algorithms.is_empty() {
            return bad("an experiment needs at least one problem and one algorithm".into());
        }
        if self.reference_points == 0 || self.approximation_size == 0 {
            return bad("reference and approximation sizes must be positive".into());
        }
        self.core.validate()?;
        for name in &self.problems {
            let problem = Benchmark::from_name(name)?;
            let desc = problem.descriptor();
            let size = self.population.initial_size(desc.n, desc.m);
            if self.budget < size as u64 {
                return bad(format!("budget {} is below the population size {size} on {name}", self.budget));
            }
        }
        Ok(())
    }

    /// Run configuration of one cell and seed.
    pub fn run_config(&self, problem: &dyn Problem, algorithm: Algorithm, seed: u64) -> RunConfig {
        let desc = problem.descriptor();
        let base = RunConfig {
            core: self.core.clone(),
            population: self.population.resolve(desc.n),
            archive_size: self.archive_size.unwrap_or(Self::default_archive_size(desc.m)),
            approximation_size: self.approximation_size,
            budget: self.budget,
            seed,
            trace: self.trace.clone(),
            ..RunConfig::default()
        };
        algorithm.configure(&base)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Igd,
    Igdx,
    ModeRatio,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Igd, Metric::Igdx, Metric::ModeRatio];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Igd => "IGD",
            Metric::Igdx => "IGDX",
            Metric::ModeRatio => "MR",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_uppercase().as_str() {
            "IGD" => Ok(Metric::Igd),
            "IGDX" => Ok(Metric::Igdx),
            "MR" | "MODE_RATIO" => Ok(Metric::ModeRatio),
            _ => Err(Error::InvalidConfig(format!("unknown metric `{name}`"))),
        }
    }

    pub fn lower_is_better(self) -> bool {
        !matches!(self, Metric::ModeRatio)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Ok,
    Failed(String),
}

/// Final metrics of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub problem: String,
    pub algorithm: String,
    pub run: usize,
    pub seed: u64,
    pub igd: f64,
    pub igdx: f64,
    pub mode_ratio: f64,
    pub evaluations: u64,
    pub status: RunStatus,
}

impl RunRecord {
    pub fn value(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Igd => self.igd,
            Metric::Igdx => self.igdx,
            Metric::ModeRatio => self.mode_ratio,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Measured,
    Published,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Measured => "measured",
            Source::Published => "paper",
        }
    }
}

/// Aggregate of one metric over the runs of one (problem, algorithm) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub problem: String,
    pub algorithm: String,
    pub metric: Metric,
    pub mean: f64,
    pub sd: f64,
    pub limit: Option<f64>,
    pub n_runs: usize,
    /// Per-run values; empty for fixture rows.
    pub values: Vec<f64>,
    /// False when some run of the cell failed.
    pub complete: bool,
    pub source: Source,
    /// Not significantly worse than any other cell of the same problem and metric.
    pub best: bool,
}

/// Pairwise test between two cells of the same problem and metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub problem: String,
    pub metric: Metric,
    pub first: String,
    pub second: String,
    pub p_value: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub runs: Vec<RunRecord>,
    pub cells: Vec<CellSummary>,
    pub comparisons: Vec<Comparison>,
    /// Significance level of the last comparison.
    pub alpha: Option<f64>,
}

/// Sample mean and standard deviation (`n - 1` denominator; 0 for one value).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Groups successful runs into cells, in order of first appearance.
///
/// `limits` gives the (IGD, IGDX) limits per problem; the mode ratio limit is 1.
pub fn summarize(runs: &[RunRecord], limits: &[(String, f64, f64)]) -> Vec<CellSummary> {
    let mut keys: Vec<(String, String)> = Vec::new();
    for r in runs {
        let key = (r.problem.clone(), r.algorithm.clone());
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let mut cells = Vec::new();
    for (problem, algorithm) in keys {
        let cell: Vec<&RunRecord> = runs.iter().filter(|r| r.problem == problem && r.algorithm == algorithm).collect();
        let ok: Vec<&RunRecord> = cell.iter().copied().filter(|r| r.status == RunStatus::Ok).collect();
        let limit = limits.iter().find(|l| l.0 == problem);
        for metric in Metric::ALL {
            let values: Vec<f64> = ok.iter().map(|r| r.value(metric)).collect();
            let (mean, sd) = mean_sd(&values);
            let limit = match metric {
                Metric::Igd => limit.map(|l| l.1),
                Metric::Igdx => limit.map(|l| l.2),
                Metric::ModeRatio => Some(1.0),
            };
            cells.push(CellSummary {
                problem: problem.clone(),
                algorithm: algorithm.clone(),
                metric,
                mean,
                sd,
                limit,
                n_runs: values.len(),
                values,
                complete: ok.len() == cell.len(),
                source: Source::Measured,
                best: false,
            });
        }
    }
    cells
}

/// Pairwise two-sided rank-sum tests within every (problem, metric) group at
/// level `alpha_base / tests`; `tests` defaults to the number of pairs tested.
///
/// A cell is marked best when no other cell is significantly better. Cells
/// without per-run values take no part.
pub fn compare_significance(table: &mut ResultTable, alpha_base: f64, tests: Option<usize>) -> f64 {
    let mut groups: Vec<(String, Metric)> = Vec::new();
    for c in table.cells.iter().filter(|c| !c.values.is_empty()) {
        let key = (c.problem.clone(), c.metric);
        if !groups.contains(&key) {
            groups.push(key);
        }
    }
    let mut pairs = Vec::new();
    for (problem, metric) in &groups {
        let idx: Vec<usize> = (0..table.cells.len())
            .filter(|&i| {
                let c = &table.cells[i];
                !c.values.is_empty() && &c.problem == problem && c.metric == *metric
            })
            .collect();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                pairs.push((i, j));
            }
        }
    }
    let alpha = bonferroni(alpha_base, tests.unwrap_or(pairs.len()));
    let mut worse = vec![false; table.cells.len()];
    table.comparisons.clear();
    for (i, j) in pairs {
        let (a, b) = (&table.cells[i], &table.cells[j]);
        let test = rank_sum_test(&a.values, &b.values);
        let significant = test.p_value < alpha;
        if significant {
            let a_better = if a.metric.lower_is_better() { a.mean < b.mean } else { a.mean > b.mean };
            if a_better {
                worse[j] = true;
            } else {
                worse[i] = true;
            }
        }
        table.comparisons.push(Comparison {
            problem: a.problem.clone(),
            metric: a.metric,
            first: a.algorithm.clone(),
            second: b.algorithm.clone(),
            p_value: test.p_value,
            significant,
        });
    }
    for (cell, w) in table.cells.iter_mut().zip(worse) {
        cell.best = !cell.values.is_empty() && !w;
    }
    table.alpha = Some(alpha);
    alpha
}

/// Loads `references/<problem>_<count>.csv` under `dir`, generating and
/// saving it when missing.
pub fn cached_reference(problem: &dyn Problem, count: usize, dir: &Path) -> Result<ReferenceSet> {
    let path = dir.join("references").join(format!("{}_{count}.csv", problem.descriptor().name));
    if path.exists() {
        return ReferenceSet::load(&path);
    }
    let set = problem.reference_set(count)?;
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    set.save(&path)?;
    Ok(set)
}

struct Task<'a> {
    problem: &'a Benchmark,
    reference: &'a ReferenceSet,
    algorithm: Algorithm,
    run: usize,
}

/// Runs every cell of `spec`, writing runs, summary and traces under its
/// output directory.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultTable> {
    spec.validate()?;
    fs::create_dir_all(spec.out_dir.join("traces"))?;
    let mut problems = Vec::new();
    for name in &spec.problems {
        let problem = Benchmark::from_name(name)?;
        let reference = cached_reference(&problem, spec.reference_points, &spec.out_dir)?;
        let (igd, igdx) = achievable_limits(&reference, spec.approximation_size);
        problems.push((problem, reference, igd, igdx));
    }
    let mut tasks = Vec::new();
    for (problem, reference, _, _) in &problems {
        for &algorithm in &spec.algorithms {
            for run in 0..spec.runs {
                tasks.push(Task { problem, reference, algorithm, run });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let runs: Vec<RunRecord> = pool.install(|| {
        use rayon::prelude::*;
        tasks.par_iter().map(|t| execute(spec, t)).collect()
    });

    let limits: Vec<(String, f64, f64)> =
        problems.iter().map(|(p, _, igd, igdx)| (p.descriptor().name.clone(), *igd, *igdx)).collect();
    let table = ResultTable { cells: summarize(&runs, &limits), runs, ..ResultTable::default() };
    write_runs_csv(&table.runs, BufWriter::new(File::create(spec.out_dir.join("runs.csv"))?))?;
    write_summary_csv(&table.cells, false, BufWriter::new(File::create(spec.out_dir.join("summary.csv"))?))?;
    Ok(table)
}

fn execute(spec: &ExperimentSpec, task: &Task<'_>) -> RunRecord {
    let seed = spec.seed_base + task.run as u64;
    let problem_name = task.problem.descriptor().name.clone();
    let algorithm = task.algorithm.name();
    let mut record = RunRecord {
        problem: problem_name.clone(),
        algorithm: algorithm.clone(),
        run: task.run,
        seed,
        igd: f64::NAN,
        igdx: f64::NAN,
        mode_ratio: f64::NAN,
        evaluations: 0,
        status: RunStatus::Ok,
    };
    let config = spec.run_config(task.problem, task.algorithm, seed);
    let outcome = run(task.problem, Some(task.reference), &config).and_then(|result| {
        let path = spec.out_dir.join("traces").join(format!("{problem_name}_{algorithm}_run{}.csv", task.run));
        let mut file = BufWriter::new(File::create(path)?);
        write_trace_csv(&result.trace, &mut file)?;
        file.flush()?;
        Ok(result)
    });
    match outcome {
        Ok(result) => {
            record.evaluations = result.evaluations;
            match result.report {
                Some(r) => {
                    record.igd = r.igd;
                    record.igdx = r.igdx;
                    record.mode_ratio = r.mode_ratio;
                }
                None => record.status = RunStatus::Failed("no metric report".into()),
            }
        }
        Err(e) => record.status = RunStatus::Failed(e.to_string()),
    }
    record
}

pub fn write_runs_csv<W: Write>(runs: &[RunRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["problem", "algorithm", "run", "seed", "igd", "igdx", "mode_ratio", "evaluations", "status"])?;
    for r in runs {
        let status = match &r.status {
            RunStatus::Ok => "ok".to_string(),
            RunStatus::Failed(e) => format!("failed: {e}"),
        };
        w.write_record([
            r.problem.clone(),
            r.algorithm.clone(),
            r.run.to_string(),
            r.seed.to_string(),
            fmt17(r.igd),
            fmt17(r.igdx),
            fmt17(r.mode_ratio),
            r.evaluations.to_string(),
            status,
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_runs_csv<R: Read>(reader: R, source: &Path) -> Result<Vec<RunRecord>> {
    let bad = |reason: String| Error::Csv { path: source.to_path_buf(), reason };
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        if row.len() != 9 {
            return Err(bad(format!("row {}: expected 9 fields, found {}", line + 1, row.len())));
        }
        let num = |i: usize| row[i].parse::<f64>().map_err(|e| bad(format!("row {}: {e}", line + 1)));
        let int = |i: usize| row[i].parse::<u64>().map_err(|e| bad(format!("row {}: {e}", line + 1)));
        let status = match &row[8] {
            "ok" => RunStatus::Ok,
            s => RunStatus::Failed(s.strip_prefix("failed: ").unwrap_or(s).to_string()),
        };
        out.push(RunRecord {
            problem: row[0].to_string(),
            algorithm: row[1].to_string(),
            run: int(2)? as usize,
            seed: int(3)?,
            igd: num(4)?,
            igdx: num(5)?,
            mode_ratio: num(6)?,
            evaluations: int(7)?,
            status,
        });
    }
    Ok(out)
}

/// Writes `problem,algorithm,metric,mean,sd,limit,n_runs`, followed by
/// `source,best` columns when `annotated`.
pub fn write_summary_csv<W: Write>(cells: &[CellSummary], annotated: bool, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["problem", "algorithm", "metric", "mean", "sd", "limit", "n_runs"];
    if annotated {
        header.extend(["source", "best"]);
    }
    w.write_record(&header)?;
    for c in cells {
        let mut row = vec![
            c.problem.clone(),
            c.algorithm.clone(),
            c.metric.name().to_string(),
            fmt17(c.mean),
            fmt17(c.sd),
            c.limit.map(fmt17).unwrap_or_default(),
            c.n_runs.to_string(),
        ];
        if annotated {
            row.push(c.source.name().to_string());
            row.push(c.best.to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(problem: &str, algorithm: &str, run: usize, igdx: f64) -> RunRecord {
        RunRecord {
            problem: problem.into(),
            algorithm: algorithm.into(),
            run,
            seed: run as u64,
            igd: igdx / 2.0,
            igdx,
            mode_ratio: 1.0,
            evaluations: 100,
            status: RunStatus::Ok,
        }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in [Algorithm::Mamalgam]
            .into_iter()
            .chain(CoreVariant::ALL.into_iter().map(Algorithm::MoHv))
        {
            assert_eq!(Algorithm::from_name(&a.name()).unwrap(), a);
        }
        assert!(Algorithm::from_name("nsga-ii").is_err());
        assert!(!Algorithm::Mamalgam.configure(&RunConfig::default()).clustering);
    }

    #[test]
    fn spec_validation() {
        let mut spec = ExperimentSpec::new("/tmp/unused", 1);
        assert!(spec.validate().is_ok());
        spec.runs = 0;
        assert!(spec.validate().is_err());
        spec.runs = 1;
        spec.budget = 100;
        assert!(spec.validate().is_err());
        spec.budget = 250;
        assert!(spec.validate().is_ok());
        assert_eq!(ExperimentSpec::default_archive_size(3), 2500);
    }

    #[test]
    fn summary_statistics() {
        let runs: Vec<RunRecord> = (0..4).map(|i| record("p", "a", i, [1.0, 2.0, 3.0, 4.0][i])).collect();
        let cells = summarize(&runs, &[("p".into(), 0.1, 0.2)]);
        assert_eq!(cells.len(), 3);
        let igdx = cells.iter().find(|c| c.metric == Metric::Igdx).unwrap();
        assert_eq!(igdx.mean, 2.5);
        assert!((igdx.sd - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(igdx.limit, Some(0.2));
        assert!(igdx.complete);
        assert_eq!(mean_sd(&[3.0]), (3.0, 0.0));
    }

    #[test]
    fn failed_runs_mark_cell_incomplete() {
        let mut runs: Vec<RunRecord> = (0..3).map(|i| record("p", "a", i, 1.0)).collect();
        runs[1].status = RunStatus::Failed("boom".into());
        let cells = summarize(&runs, &[]);
        assert!(cells.iter().all(|c| !c.complete && c.n_runs == 2));
    }

    #[test]
    fn significance_marks_best() {
        let mut runs = Vec::new();
        for i in 0..31 {
            runs.push(record("p", "good", i, 1.0 + i as f64));
            runs.push(record("p", "bad", i, 101.0 + i as f64));
            runs.push(record("p", "same", i, 1.0 + i as f64));
        }
        let mut table = ResultTable { cells: summarize(&runs, &[]), runs, ..ResultTable::default() };
        let alpha = compare_significance(&mut table, 0.01, Some(60));
        assert!((alpha - 0.01 / 60.0).abs() < 1e-15);
        let best = |alg: &str, m: Metric| table.cells.iter().find(|c| c.algorithm == alg && c.metric == m).unwrap().best;
        assert!(best("good", Metric::Igdx) && best("same", Metric::Igdx) && !best("bad", Metric::Igdx));
        // identical mode ratios: everyone is best
        assert!(best("bad", Metric::ModeRatio));
        let c = table
            .comparisons
            .iter()
            .find(|c| c.metric == Metric::Igdx && c.first == "good" && c.second == "same")
            .unwrap();
        assert!(!c.significant);
    }

    #[test]
    fn runs_csv_round_trip() {
        let mut runs: Vec<RunRecord> = (0..3).map(|i| record("p", "a", i, 0.1 * (i as f64 + 1.0) / 3.0)).collect();
        runs[2].status = RunStatus::Failed("budget".into());
        let mut buf = Vec::new();
        write_runs_csv(&runs, &mut buf).unwrap();
        let back = read_runs_csv(buf.as_slice(), Path::new("mem")).unwrap();
        assert_eq!(back, runs);
    }

    #[test]
    fn smoke_experiment_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = ExperimentSpec::new(dir.path().join("a"), 7);
        spec.problems = vec!["mindist2".into()];
        spec.runs = 1;
        spec.budget = 5000;
        spec.reference_points = 500;
        let table = run_experiment(&spec).unwrap();
        assert_eq!(table.runs.len(), 1);
        assert_eq!(table.runs[0].status, RunStatus::Ok);
        assert!(table.runs[0].evaluations <= 5000);
        let summary = fs::read_to_string(dir.path().join("a/summary.csv")).unwrap();
        assert_eq!(summary.lines().count(), 1 + Metric::ALL.len());
        let traces: Vec<_> = fs::read_dir(dir.path().join("a/traces")).unwrap().collect();
        assert_eq!(traces.len(), 1);
        assert!(dir.path().join("a/references/mindist2_500.csv").exists());

        spec.out_dir = dir.path().join("b");
        let again = run_experiment(&spec).unwrap();
        assert_eq!(again.runs, table.runs);
        let runs_a = fs::read(dir.path().join("a/runs.csv")).unwrap();
        let runs_b = fs::read(dir.path().join("b/runs.csv")).unwrap();
        assert_eq!(runs_a, runs_b);

        // summary recomputed from the per-run file
        let runs = read_runs_csv(runs_a.as_slice(), Path::new("runs.csv")).unwrap();
        let cells = summarize(&runs, &[]);
        for (c, d) in cells.iter().zip(&table.cells) {
            assert!((c.mean - d.mean).abs() <= 1e-9 * d.mean.abs().max(1.0));
            assert!((c.sd - d.sd).abs() <= 1e-9);
        }
    }

    #[test]
    fn parallel_runs_keep_order_and_values() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = ExperimentSpec::new(dir.path().join("serial"), 3);
        spec.problems = vec!["mindist2".into()];
        spec.algorithms = vec![Algorithm::MoHv(CoreVariant::Mam), Algorithm::Mamalgam];
        spec.runs = 2;
        spec.budget = 2000;
        spec.reference_points = 300;
        spec.trace = TraceCadence::off();
        let serial = run_experiment(&spec).unwrap();
        spec.out_dir = dir.path().join("parallel");
        spec.jobs = 3;
        let parallel = run_experiment(&spec).unwrap();
        assert_eq!(serial.runs, parallel.runs);
        assert_eq!(serial.cells.len(), 6);
    }
}
