//! The generational loop, cluster linking and the multi-start scheme.
//!
//! A generation copies every elite into the population next to the offspring
//! of all clusters, clusters the result, rebuilds the niche-local archives and
//! strips the elites from the clusters again. Clusters inherit the model state
//! of the nearest cluster of the previous generation.
//!
//! Several instances with doubling population sizes share one archive. After
//! every `interval` generations of an instance, the next larger instance runs
//! one generation, creating it when needed.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::archive::{construct_local_archives, postprocess_approximation_set, ElitistArchive, Space};
use crate::gaussian::{core_opt_generation, ClusterModelState, CoreConfig};
use crate::hillvalley::{multi_objective_clustering, Cluster, ClusteringOptions, ElitePolicy, HvTestCache};
use crate::metrics::{default_epsilon, MetricReport};
use crate::problems::{fmt17, sample_uniform, Problem, ReferenceSet};
use crate::solution::{mean_vector, squared_euclidean};
use crate::{Error, Evaluator, Origin, RandomSource, Result, Solution};

/// Multi-start schedule parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MultiStartConfig {
    /// Population size of the first instance; derived from `n` and `m` when unset.
    pub base_size: Option<usize>,
    /// Subset count of the first instance; `1 + m` when unset.
    pub base_subsets: Option<usize>,
    /// Generations of an instance per generation of the next larger one.
    pub interval: usize,
    pub size_growth: usize,
    pub subset_growth: f64,
    /// Instances contributing less than this share of the total are stopped
    /// when a new instance starts.
    pub termination_share: f64,
}

impl Default for MultiStartConfig {
    fn default() -> Self {
        Self {
            base_size: None,
            base_subsets: None,
            interval: 8,
            size_growth: 2,
            subset_growth: 1.5,
            termination_share: 0.25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum PopulationMode {
    Fixed { size: usize, subsets: usize },
    MultiStart(MultiStartConfig),
}

impl Default for PopulationMode {
    fn default() -> Self {
        PopulationMode::MultiStart(MultiStartConfig::default())
    }
}

/// When trace records are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceCadence {
    pub every_generation: bool,
    /// Also record after the generation that crosses each multiple of this
    /// many evaluations.
    pub checkpoint: Option<u64>,
}

impl Default for TraceCadence {
    fn default() -> Self {
        Self { every_generation: true, checkpoint: Some(1000) }
    }
}

impl TraceCadence {
    pub fn off() -> Self {
        Self { every_generation: false, checkpoint: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub core: CoreConfig,
    pub population: PopulationMode,
    /// Target archive size.
    pub archive_size: usize,
    /// Size of the reported approximation set.
    pub approximation_size: usize,
    pub budget: u64,
    pub seed: u64,
    /// Hill-valley clustering; when off the whole population is one cluster
    /// with one subarchive.
    pub clustering: bool,
    /// Nearest better neighbors per clustering test; `n + 1` when unset.
    pub neighbors: Option<usize>,
    /// Mode-attainment threshold; chosen from `m` when unset.
    pub epsilon: Option<f64>,
    pub trace: TraceCadence,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            core: CoreConfig::default(),
            population: PopulationMode::default(),
            archive_size: 1000,
            approximation_size: 100,
            budget: 30_000,
            seed: 0,
            clustering: true,
            neighbors: None,
            epsilon: None,
            trace: TraceCadence::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.core.validate()?;
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        match &self.population {
            PopulationMode::Fixed { size, subsets } if *size == 0 || *subsets == 0 => {
                return bad("population size and subset count must be positive")
            }
            PopulationMode::MultiStart(ms) => {
                if ms.interval == 0 || ms.size_growth < 2 || ms.subset_growth < 1.0 {
                    return bad("multi-start needs interval >= 1, size growth >= 2 and subset growth >= 1");
                }
                if ms.base_size == Some(0) || ms.base_subsets == Some(0) {
                    return bad("multi-start base sizes must be positive");
                }
            }
            _ => {}
        }
        if self.archive_size == 0 || self.approximation_size == 0 {
            return bad("archive and approximation sizes must be positive");
        }
        Ok(())
    }

    /// Space used to thin the final approximation set.
    pub fn postprocess_space(&self) -> Space {
        if self.clustering { Space::Decision } else { Space::Objective }
    }
}

/// `k/2 * floor(17 + 3 n^1.5)`.
pub fn fixed_population_size(n: usize, k: usize) -> usize {
    let per_pair = (17.0 + 3.0 * (n as f64).powf(1.5)).floor() as usize;
    k * per_pair / 2
}

/// Population size and subset count of the first multi-start instance.
pub fn multi_start_base(n: usize, m: usize) -> (usize, usize) {
    let size = (10.0 * (1.0 + m as f64) * (1.0 + (n as f64).ln())).round() as usize;
    (size.max(1), 1 + m)
}

/// Offspring count and subset count per cluster.
pub fn distribute_budgets(cluster_sizes: &[usize], population_size: usize, subsets: usize) -> Vec<(usize, usize)> {
    if cluster_sizes.is_empty() {
        return Vec::new();
    }
    let offspring = (population_size / cluster_sizes.len()).max(1);
    let total: usize = cluster_sizes.iter().sum::<usize>().max(1);
    cluster_sizes
        .iter()
        .map(|&c| (offspring, (subsets * c / total).max(1)))
        .collect()
}

/// For every current mean, the index of the nearest previous mean.
pub fn link_clusters(current: &[Vec<f64>], previous: &[Vec<f64>]) -> Vec<Option<usize>> {
    current
        .iter()
        .map(|c| {
            previous
                .iter()
                .enumerate()
                .map(|(j, p)| (j, squared_euclidean(c, p)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(j, _)| j)
        })
        .collect()
}

/// A cluster with its model memory and the subarchive built from it.
#[derive(Debug, Clone)]
pub struct LinkedCluster {
    pub cluster: Cluster,
    pub model: ClusterModelState,
    pub subarchive: usize,
}

#[derive(Debug, Clone)]
pub struct InstanceState {
    pub population_size: usize,
    pub subset_count: usize,
    pub clusters: Vec<LinkedCluster>,
    pub generations_run: usize,
    /// Offspring of the last generation that entered the archive.
    pub contribution: usize,
    pub alive: bool,
    /// Archive rebuild the cluster-to-subarchive indices refer to.
    stamp: u64,
}

impl InstanceState {
    fn new(population_size: usize, subset_count: usize) -> Self {
        Self {
            population_size: population_size.max(1),
            subset_count: subset_count.max(1),
            clusters: Vec::new(),
            generations_run: 0,
            contribution: 0,
            alive: true,
            stamp: 0,
        }
    }
}

/// One row of a convergence trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub evaluations: u64,
    pub instance: usize,
    pub population_size: usize,
    pub clusters: usize,
    pub archive_size: usize,
    pub metrics: Option<MetricReport>,
}

pub fn write_trace_csv<W: Write>(trace: &[TraceRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["evals", "instance", "N", "clusters", "archive_size", "IGD", "IGDX", "MR"])?;
    for r in trace {
        let (igd, igdx, mr) = match &r.metrics {
            Some(m) => (fmt17(m.igd), fmt17(m.igdx), fmt17(m.mode_ratio)),
            None => (String::new(), String::new(), String::new()),
        };
        w.write_record([
            r.evaluations.to_string(),
            r.instance.to_string(),
            r.population_size.to_string(),
            r.clusters.to_string(),
            r.archive_size.to_string(),
            igd,
            igdx,
            mr,
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSummary {
    pub population_size: usize,
    pub subset_count: usize,
    pub generations: usize,
    pub alive: bool,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub approximation: Vec<Solution>,
    pub archive: ElitistArchive,
    pub report: Option<MetricReport>,
    pub trace: Vec<TraceRecord>,
    pub evaluations: u64,
    pub instances: Vec<InstanceSummary>,
    /// Instance index of every executed step, in order.
    pub schedule: Vec<usize>,
}

/// Runs the configured optimizer until the budget is spent.
pub fn run(problem: &dyn Problem, reference: Option<&ReferenceSet>, config: &RunConfig) -> Result<RunResult> {
    config.validate()?;
    let mut ctx = Context::new(problem, reference, config);
    match &config.population {
        PopulationMode::Fixed { size, subsets } => {
            ctx.instances.push(InstanceState::new(*size, *subsets));
            if ctx.initialize(0)? {
                while ctx.generation(0)? {}
            }
        }
        PopulationMode::MultiStart(ms) => {
            loop {
                let first = ctx.instances.iter().position(|i| i.alive).unwrap_or(0);
                if !ctx.step(first, ms)? {
                    break;
                }
            }
        }
    }
    Ok(ctx.finish())
}

/// Fixed population run with the given size and subset count.
pub fn fixed_population_run(
    problem: &dyn Problem,
    reference: Option<&ReferenceSet>,
    config: &RunConfig,
    size: usize,
    subsets: usize,
) -> Result<RunResult> {
    let cfg = RunConfig { population: PopulationMode::Fixed { size, subsets }, ..config.clone() };
    run(problem, reference, &cfg)
}

/// Multi-start run with the given schedule.
pub fn multi_start_run(
    problem: &dyn Problem,
    reference: Option<&ReferenceSet>,
    config: &RunConfig,
    schedule: MultiStartConfig,
) -> Result<RunResult> {
    let cfg = RunConfig { population: PopulationMode::MultiStart(schedule), ..config.clone() };
    run(problem, reference, &cfg)
}

struct Context<'a> {
    problem: &'a dyn Problem,
    reference: Option<&'a ReferenceSet>,
    config: &'a RunConfig,
    evaluator: Evaluator<'a>,
    rng: RandomSource,
    archive: ElitistArchive,
    stamp: u64,
    instances: Vec<InstanceState>,
    trace: Vec<TraceRecord>,
    schedule: Vec<usize>,
    next_checkpoint: u64,
    clustering: ClusteringOptions,
}

impl<'a> Context<'a> {
    fn new(problem: &'a dyn Problem, reference: Option<&'a ReferenceSet>, config: &'a RunConfig) -> Self {
        let mut clustering = ClusteringOptions::for_problem(problem).with_policy(ElitePolicy::SameSubarchiveShortcut);
        clustering.neighbors = config.neighbors;
        Self {
            problem,
            reference,
            config,
            evaluator: Evaluator::new(problem, Some(config.budget)),
            rng: RandomSource::new(config.seed),
            archive: ElitistArchive::new(config.archive_size),
            stamp: 0,
            instances: Vec::new(),
            trace: Vec::new(),
            schedule: Vec::new(),
            next_checkpoint: config.trace.checkpoint.unwrap_or(u64::MAX),
            clustering,
        }
    }

    /// One step of the recursive schedule rooted at instance `i`.
    fn step(&mut self, i: usize, ms: &MultiStartConfig) -> Result<bool> {
        if i == self.instances.len() {
            self.spawn(ms);
            return self.initialize(i);
        }
        if !self.generation(i)? {
            return Ok(false);
        }
        if self.instances[i].generations_run.is_multiple_of(ms.interval) {
            let next = (i + 1..self.instances.len())
                .find(|&j| self.instances[j].alive)
                .unwrap_or(self.instances.len());
            return self.step(next, ms);
        }
        Ok(true)
    }

    fn spawn(&mut self, ms: &MultiStartConfig) {
        let desc = self.problem.descriptor();
        let (size, subsets) = match self.instances.last() {
            None => {
                let (n0, k0) = multi_start_base(desc.n, desc.m);
                (ms.base_size.unwrap_or(n0), ms.base_subsets.unwrap_or(k0))
            }
            Some(prev) => (
                prev.population_size * ms.size_growth,
                prev.subset_count.max((ms.subset_growth * prev.subset_count as f64).round() as usize),
            ),
        };
        if let Some(latest) = self.instances.len().checked_sub(1) {
            let total: usize = self.instances.iter().filter(|s| s.alive).map(|s| s.contribution).sum();
            let limit = ms.termination_share * total as f64;
            for (j, inst) in self.instances.iter_mut().enumerate() {
                if j != latest && inst.alive && (inst.contribution as f64) < limit {
                    inst.alive = false;
                    inst.clusters.clear();
                }
            }
        }
        self.instances.push(InstanceState::new(size, subsets));
    }

    /// Samples a fresh population for instance `i` and builds its clusters.
    fn initialize(&mut self, i: usize) -> Result<bool> {
        self.schedule.push(i);
        let size = self.instances[i].population_size;
        let samples = match sample_uniform(&mut self.evaluator, size, &mut self.rng) {
            Ok(s) => s,
            Err(Error::BudgetExhausted { .. }) => return Ok(false),
            Err(e) => return Err(e),
        };
        let mut population = self.elites_as_population();
        population.extend(samples);
        self.instances[i].clusters.clear();
        self.rebuild(i, population)
    }

    /// One generation of instance `i`; false once the budget is spent.
    fn generation(&mut self, i: usize) -> Result<bool> {
        if self.instances[i].clusters.is_empty() {
            return self.initialize(i);
        }
        self.schedule.push(i);
        let inst = &self.instances[i];
        let sizes: Vec<usize> = inst.clusters.iter().map(|c| c.cluster.len()).collect();
        let budgets = distribute_budgets(&sizes, inst.population_size, inst.subset_count);
        let expected: usize = budgets.iter().map(|b| b.0).sum();
        let current = inst.stamp == self.stamp;
        let subarchive_means: Vec<Option<Vec<f64>>> = if current {
            Vec::new()
        } else {
            self.archive.subarchives.iter().map(|s| s.mean()).collect()
        };

        let mut clusters = std::mem::take(&mut self.instances[i].clusters);
        let mut offspring = Vec::with_capacity(expected);
        for (lc, (n_i, k_i)) in clusters.iter_mut().zip(budgets) {
            let which = if current { Some(lc.subarchive) } else { nearest_subarchive(&subarchive_means, &lc.cluster.mean) };
            let elites: &[Solution] = match which {
                Some(j) => &self.archive.subarchives[j].elites,
                None => &[],
            };
            let drawn = core_opt_generation(
                &lc.cluster.members,
                elites,
                &mut lc.model,
                n_i,
                k_i,
                &self.config.core,
                &mut self.evaluator,
                &mut self.rng,
            )?;
            offspring.extend(drawn);
            if self.evaluator.is_exhausted() {
                break;
            }
        }
        self.instances[i].clusters = clusters;
        if offspring.len() < expected {
            return Ok(false);
        }
        let mut population = self.elites_as_population();
        population.extend(offspring);
        self.rebuild(i, population)
    }

    fn elites_as_population(&self) -> Vec<Solution> {
        self.archive
            .subarchives
            .iter()
            .enumerate()
            .flat_map(|(j, sa)| sa.elites.iter().map(move |e| e.clone().with_origin(Origin::Elite(j))))
            .collect()
    }

    /// Clusters `population`, rebuilds the archive and relinks the clusters
    /// of instance `i`. Leaves everything untouched if the budget runs out.
    fn rebuild(&mut self, i: usize, population: Vec<Solution>) -> Result<bool> {
        let clusters = if self.config.clustering {
            let mut cache = HvTestCache::new();
            match multi_objective_clustering(&population, &self.clustering, &mut self.evaluator, &mut cache) {
                Ok(c) => c.clusters,
                Err(Error::BudgetExhausted { .. }) => return Ok(false),
                Err(e) => return Err(e),
            }
        } else {
            vec![Cluster::new(0, population)]
        };
        self.archive = construct_local_archives(&clusters, self.config.archive_size);
        self.stamp += 1;

        let inst = &mut self.instances[i];
        inst.contribution = self.archive.elites().filter(|s| s.origin == Origin::Fresh).count();
        let previous = std::mem::take(&mut inst.clusters);
        let mut next = Vec::new();
        for (j, c) in clusters.into_iter().enumerate() {
            let members: Vec<Solution> = c.members.into_iter().filter(|s| !s.is_elite()).collect();
            if !members.is_empty() {
                next.push((Cluster::new(c.id, members), j));
            }
        }
        let current_means: Vec<Vec<f64>> = next.iter().map(|(c, _)| c.mean.clone()).collect();
        let previous_means: Vec<Vec<f64>> = previous.iter().map(|p| p.cluster.mean.clone()).collect();
        let links = link_clusters(&current_means, &previous_means);
        inst.clusters = next
            .into_iter()
            .zip(links)
            .map(|((cluster, subarchive), link)| LinkedCluster {
                cluster,
                model: link.map(|l| previous[l].model.clone()).unwrap_or_default(),
                subarchive,
            })
            .collect();
        inst.stamp = self.stamp;
        inst.generations_run += 1;
        self.record(i);
        Ok(true)
    }

    fn record(&mut self, i: usize) {
        let used = self.evaluator.used();
        let crossed = used >= self.next_checkpoint;
        if crossed {
            let step = self.config.trace.checkpoint.unwrap_or(u64::MAX);
            while self.next_checkpoint <= used {
                self.next_checkpoint = self.next_checkpoint.saturating_add(step);
            }
        }
        if !(self.config.trace.every_generation || crossed) {
            return;
        }
        let metrics = self.reference.map(|r| {
            let approx = postprocess_approximation_set(&self.archive, self.config.approximation_size, self.config.postprocess_space());
            MetricReport::compute(&approx, r, self.epsilon())
        });
        let inst = &self.instances[i];
        self.trace.push(TraceRecord {
            evaluations: used,
            instance: i,
            population_size: inst.population_size,
            clusters: inst.clusters.len(),
            archive_size: self.archive.total_size(),
            metrics,
        });
    }

    fn epsilon(&self) -> f64 {
        self.config.epsilon.unwrap_or_else(|| default_epsilon(self.problem.descriptor().m))
    }

    fn finish(self) -> RunResult {
        let approximation =
            postprocess_approximation_set(&self.archive, self.config.approximation_size, self.config.postprocess_space());
        let report = self.reference.map(|r| MetricReport::compute(&approximation, r, self.epsilon()));
        RunResult {
            approximation,
            report,
            trace: self.trace,
            evaluations: self.evaluator.used(),
            instances: self
                .instances
                .iter()
                .map(|s| InstanceSummary {
                    population_size: s.population_size,
                    subset_count: s.subset_count,
                    generations: s.generations_run,
                    alive: s.alive,
                })
                .collect(),
            schedule: self.schedule,
            archive: self.archive,
        }
    }
}

fn nearest_subarchive(means: &[Option<Vec<f64>>], target: &[f64]) -> Option<usize> {
    means
        .iter()
        .enumerate()
        .filter_map(|(j, m)| m.as_ref().map(|m| (j, squared_euclidean(m, target))))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(j, _)| j)
}

/// Decision-space centroid of a set of solutions.
pub fn centroid(solutions: &[Solution]) -> Option<Vec<f64>> {
    let first = solutions.first()?;
    Some(mean_vector(solutions.iter().map(|s| s.x.as_slice()), first.x.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Benchmark, ProblemDescriptor};

    #[test]
    fn population_formulas() {
        assert_eq!(fixed_population_size(2, 20), 250);
        assert_eq!(fixed_population_size(10, 20), 1110);
        assert_eq!(multi_start_base(2, 2), (51, 3));
        assert_eq!(multi_start_base(1, 2).1, 3);
    }

    #[test]
    fn budgets() {
        assert_eq!(distribute_budgets(&[25; 4], 250, 20), vec![(62, 5); 4]);
        assert_eq!(distribute_budgets(&[40], 250, 20), vec![(250, 20)]);
        let mut sizes = vec![1];
        sizes.push(999);
        assert_eq!(distribute_budgets(&sizes, 250, 20)[0].1, 1);
        assert!(distribute_budgets(&[], 10, 2).is_empty());
    }

    #[test]
    fn linking() {
        let a = vec![vec![0.0, 0.0], vec![5.0, 5.0]];
        assert_eq!(link_clusters(&a, &a), vec![Some(0), Some(1)]);
        assert_eq!(link_clusters(&a, &[]), vec![None, None]);
        let three = vec![vec![0.0], vec![1.0], vec![2.0]];
        assert_eq!(link_clusters(&three, &[vec![7.0]]), vec![Some(0); 3]);
    }

    fn quick(budget: u64, seed: u64) -> RunConfig {
        RunConfig { budget, seed, ..RunConfig::default() }
    }

    #[test]
    fn schedule_interleaves_eight_to_one() {
        let p = Benchmark::from_name("mindist2").unwrap();
        let ms = MultiStartConfig { base_size: Some(10), termination_share: 0.0, ..Default::default() };
        let cfg = RunConfig { trace: TraceCadence::off(), ..quick(30_000, 1) };
        let r = multi_start_run(&p, None, &cfg, ms).unwrap();
        let mut expected = vec![0; 8];
        expected.push(1);
        expected.extend([0; 8]);
        expected.push(1);
        assert_eq!(&r.schedule[..18], &expected[..]);
        let first_two = r.schedule.iter().position(|&i| i == 2).unwrap();
        let ones_before = r.schedule[..first_two].iter().filter(|&&i| i == 1).count();
        assert_eq!(ones_before, 8);
        for (j, inst) in r.instances.iter().enumerate() {
            assert_eq!(inst.population_size, 10 << j);
        }
        assert!(r.instances.windows(2).all(|w| w[1].subset_count >= w[0].subset_count));
        assert_eq!(r.instances[1].subset_count, 5);
    }

    #[test]
    fn budget_is_a_hard_ceiling() {
        let p = Benchmark::from_name("sym-part1").unwrap();
        for budget in [1, 37, 2500] {
            let r = run(&p, None, &quick(budget, 3)).unwrap();
            assert!(r.evaluations <= budget);
            let fixed = fixed_population_run(&p, None, &quick(budget, 3), 250, 20).unwrap();
            assert!(fixed.evaluations <= budget);
        }
    }

    #[test]
    fn zero_budget_keeps_empty_archive() {
        let p = Benchmark::from_name("mindist2").unwrap();
        let r = run(&p, None, &quick(0, 1)).unwrap();
        assert_eq!(r.evaluations, 0);
        assert!(r.approximation.is_empty());
    }

    #[test]
    fn deterministic_trace() {
        let p = Benchmark::from_name("mindist2").unwrap();
        let reference = p.reference_set(200).unwrap();
        let once = || {
            let r = run(&p, Some(&reference), &quick(4000, 11)).unwrap();
            let mut buf = Vec::new();
            write_trace_csv(&r.trace, &mut buf).unwrap();
            buf
        };
        let a = once();
        assert_eq!(a, once());
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("evals,instance,N,clusters,archive_size,IGD,IGDX,MR\n"));
        assert!(text.lines().count() > 5);
    }

    /// Two objectives with a single joint niche.
    struct Bowl(ProblemDescriptor);

    impl Problem for Bowl {
        fn descriptor(&self) -> &ProblemDescriptor {
            &self.0
        }
        fn evaluate(&self, x: &[f64]) -> Vec<f64> {
            let a: f64 = x.iter().map(|v| v * v).sum();
            let b: f64 = x.iter().enumerate().map(|(i, v)| if i == 0 { (v - 1.0).powi(2) } else { v * v }).sum();
            vec![a, b]
        }
    }

    #[test]
    fn single_niche_keeps_one_linked_cluster() {
        let p = Bowl(ProblemDescriptor::cube("bowl", 2, 2, -3.0, 3.0));
        let cfg = RunConfig { trace: TraceCadence::off(), ..quick(5000, 2) };
        let mut ctx = Context::new(&p, None, &cfg);
        ctx.instances.push(InstanceState::new(60, 4));
        assert!(ctx.initialize(0).unwrap());
        for _ in 0..15 {
            if !ctx.generation(0).unwrap() {
                break;
            }
            let inst = &ctx.instances[0];
            let big = inst.clusters.iter().max_by_key(|c| c.cluster.len()).unwrap();
            assert!(big.cluster.len() * 2 >= inst.clusters.iter().map(|c| c.cluster.len()).sum::<usize>());
            assert!(big.model.generation > 0);
        }
        let r = ctx.finish();
        assert!(r.approximation.iter().all(|s| s.x[0] > -0.5 && s.x[0] < 1.5));
    }

    #[test]
    fn baseline_uses_one_subarchive() {
        let p = Benchmark::from_name("mindist2").unwrap();
        let cfg = RunConfig { clustering: false, ..quick(3000, 5) };
        let r = fixed_population_run(&p, None, &cfg, 100, 5).unwrap();
        assert_eq!(r.archive.subarchives.len(), 1);
        assert_eq!(r.evaluations, 3000);
    }

    #[test]
    fn config_from_toml() {
        let cfg: RunConfig = toml::from_str(
            "budget = 500\n[population]\nmode = \"fixed\"\nsize = 40\nsubsets = 3\n[core]\nvariant = \"mamu\"\n",
        )
        .unwrap();
        assert_eq!(cfg.population, PopulationMode::Fixed { size: 40, subsets: 3 });
        assert_eq!(cfg.core.variant, crate::gaussian::CoreVariant::Mamu);
        assert!(RunConfig { archive_size: 0, ..RunConfig::default() }.validate().is_err());
    }
}
