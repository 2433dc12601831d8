//! Hill-valley test and hill-valley clustering.
//!
//! Two solutions share a niche for objective `l` when no point on the segment
//! between them is worse than both endpoints. A population is clustered per
//! objective by testing every solution against its nearest better neighbors;
//! the multi-objective clusters are the non-empty intersections of the
//! per-objective clusterings.

use std::collections::HashMap;

use crate::problems::{Problem, ReferenceSet};
use crate::solution::{mean_vector, squared_euclidean};
use crate::{Evaluator, Origin, Result, Solution};

/// A set of solutions presumed to occupy one niche.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub id: usize,
    pub members: Vec<Solution>,
    /// Decision-space centroid of `members`.
    pub mean: Vec<f64>,
}

impl Cluster {
    pub fn new(id: usize, members: Vec<Solution>) -> Self {
        assert!(!members.is_empty(), "clusters are non-empty");
        let n = members[0].x.len();
        let mean = mean_vector(members.iter().map(|s| s.x.as_slice()), n);
        Self { id, members, mean }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn recompute_mean(&mut self) {
        if let Some(first) = self.members.first() {
            self.mean = mean_vector(self.members.iter().map(|s| s.x.as_slice()), first.x.len());
        }
    }
}

/// How pairs of elites are treated during clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ElitePolicy {
    /// Every pair is tested.
    #[default]
    AlwaysTest,
    /// Elites from the same subarchive share a niche without testing;
    /// elites from different subarchives are always tested.
    SameSubarchiveShortcut,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringOptions {
    /// Nearest better neighbors to test; `None` means `n + 1`.
    pub neighbors: Option<usize>,
    pub policy: ElitePolicy,
    /// Width used in place of a zero bounding-box extent (scaled by `1e-12`).
    pub domain_width: f64,
}

impl Default for ClusteringOptions {
    fn default() -> Self {
        Self { neighbors: None, policy: ElitePolicy::AlwaysTest, domain_width: 1.0 }
    }
}

impl ClusteringOptions {
    pub fn for_problem(problem: &dyn Problem) -> Self {
        Self { domain_width: problem.descriptor().max_width(), ..Self::default() }
    }

    pub fn with_policy(mut self, policy: ElitePolicy) -> Self {
        self.policy = policy;
        self
    }
}

type PairKey = (Vec<u64>, Vec<u64>, usize);

/// Interior test points per solution pair, shared across objectives.
///
/// Points are stored in evaluation order, so an entry is always a prefix of
/// the full set of `N_t` points; a later test on another objective only
/// evaluates the missing suffix.
#[derive(Debug, Default, Clone)]
pub struct HvTestCache {
    points: HashMap<PairKey, Vec<Solution>>,
}

impl HvTestCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.points.clear();
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn key(a: &[f64], b: &[f64], n_t: usize) -> (PairKey, bool) {
        let ka: Vec<u64> = a.iter().map(|v| v.to_bits()).collect();
        let kb: Vec<u64> = b.iter().map(|v| v.to_bits()).collect();
        if ka <= kb {
            ((ka, kb, n_t), false)
        } else {
            ((kb, ka, n_t), true)
        }
    }
}

/// Number of interior test points for a pair at distance `distance`.
pub fn test_point_count(distance: f64, edge: f64) -> usize {
    1 + (distance / edge).floor() as usize
}

/// Edge length of a hypercube with the population's share of the bounding
/// box volume: `(V / |P|)^(1/n)`.
///
/// A zero-extent coordinate is replaced by `1e-12 * domain_width`.
pub fn edge_length(population: &[Solution], domain_width: f64) -> f64 {
    assert!(!population.is_empty());
    let n = population[0].x.len();
    let mut log_volume = 0.0;
    for d in 0..n {
        let (lo, hi) = population
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.x[d]), hi.max(s.x[d])));
        let extent = if hi > lo { hi - lo } else { 1e-12 * domain_width };
        log_volume += extent.ln();
    }
    ((log_volume - (population.len() as f64).ln()) / n as f64).exp()
}

/// Hill-valley test on objective `objective` with `n_t` interior points.
///
/// Returns whether `x` and `y` share a niche together with every point it
/// evaluated. Evaluation stops at the first point worse than both endpoints.
pub fn hill_valley_test(
    x: &Solution,
    y: &Solution,
    n_t: usize,
    objective: usize,
    evaluator: &mut Evaluator<'_>,
) -> Result<(bool, Vec<Solution>)> {
    let mut cache = HvTestCache::new();
    let same = cached_test(x, y, n_t, objective, evaluator, &mut cache)?;
    let points = cache.points.into_values().next().unwrap_or_default();
    Ok((same, points))
}

fn cached_test(
    x: &Solution,
    y: &Solution,
    n_t: usize,
    objective: usize,
    evaluator: &mut Evaluator<'_>,
    cache: &mut HvTestCache,
) -> Result<bool> {
    if x.x == y.x {
        return Ok(true);
    }
    let threshold = x.f[objective].max(y.f[objective]);
    let (key, swapped) = HvTestCache::key(&x.x, &y.x, n_t);
    let (from, to) = if swapped { (&y.x, &x.x) } else { (&x.x, &y.x) };
    let stored = cache.points.entry(key).or_default();
    for k in 1..=n_t {
        if stored.len() < k {
            let t = k as f64 / (n_t + 1) as f64;
            let p: Vec<f64> = from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect();
            let f = evaluator.evaluate(&p)?;
            stored.push(Solution::new(p, f).with_origin(Origin::TestPoint));
        }
        if stored[k - 1].f[objective] > threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Labels from one single-objective clustering pass, plus the tested pairs.
struct ObjectivePass {
    labels: Vec<usize>,
    tested: Vec<(usize, usize, PairKey)>,
}

fn cluster_objective(
    population: &[Solution],
    objective: usize,
    edge: f64,
    opts: &ClusteringOptions,
    evaluator: &mut Evaluator<'_>,
    cache: &mut HvTestCache,
) -> Result<ObjectivePass> {
    let size = population.len();
    let mut labels = vec![usize::MAX; size];
    let mut tested = Vec::new();
    if size == 0 {
        return Ok(ObjectivePass { labels, tested });
    }
    let n = population[0].x.len();
    let neighbors = opts.neighbors.unwrap_or(n + 1).max(1);

    // stable sort keeps insertion order among ties
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| population[a].f[objective].total_cmp(&population[b].f[objective]));

    labels[order[0]] = 0;
    let mut next_label = 1;
    let mut dist: Vec<(f64, usize)> = Vec::with_capacity(size);
    for i in 1..size {
        let current = &population[order[i]];
        dist.clear();
        dist.extend(order[..i].iter().map(|&p| (squared_euclidean(&current.x, &population[p].x), p)));
        let take = neighbors.min(i);
        if take < dist.len() {
            dist.select_nth_unstable_by(take - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            dist.truncate(take);
        }
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        let mut joined = None;
        for &(d2, p) in &dist {
            let better = &population[p];
            if opts.policy == ElitePolicy::SameSubarchiveShortcut {
                if let (Origin::Elite(a), Origin::Elite(b)) = (better.origin, current.origin) {
                    if a == b {
                        joined = Some(labels[p]);
                        break;
                    }
                }
            }
            let n_t = test_point_count(d2.sqrt(), edge);
            let same = cached_test(better, current, n_t, objective, evaluator, cache)?;
            if better.x != current.x {
                tested.push((p, order[i], HvTestCache::key(&better.x, &current.x, n_t).0));
            }
            if same {
                joined = Some(labels[p]);
                break;
            }
        }
        labels[order[i]] = joined.unwrap_or_else(|| {
            next_label += 1;
            next_label - 1
        });
    }
    Ok(ObjectivePass { labels, tested })
}

/// Result of clustering a population.
#[derive(Debug, Clone)]
pub struct Clustering {
    pub clusters: Vec<Cluster>,
    /// Final cluster index of every input solution.
    pub labels: Vec<usize>,
    /// Evaluations spent on hill-valley tests.
    pub evaluations: u64,
}

/// Single-objective hill-valley clustering on objective `objective`.
pub fn single_objective_clustering(
    population: &[Solution],
    objective: usize,
    opts: &ClusteringOptions,
    evaluator: &mut Evaluator<'_>,
    cache: &mut HvTestCache,
) -> Result<Clustering> {
    cluster_objectives(population, &[objective], opts, evaluator, cache)
}

/// Multi-objective hill-valley clustering: intersections of the
/// single-objective clusterings of every objective.
pub fn multi_objective_clustering(
    population: &[Solution],
    opts: &ClusteringOptions,
    evaluator: &mut Evaluator<'_>,
    cache: &mut HvTestCache,
) -> Result<Clustering> {
    let m = population.first().map_or(0, |s| s.f.len());
    let objectives: Vec<usize> = (0..m).collect();
    cluster_objectives(population, &objectives, opts, evaluator, cache)
}

fn cluster_objectives(
    population: &[Solution],
    objectives: &[usize],
    opts: &ClusteringOptions,
    evaluator: &mut Evaluator<'_>,
    cache: &mut HvTestCache,
) -> Result<Clustering> {
    let start = evaluator.used();
    if population.is_empty() {
        return Ok(Clustering { clusters: Vec::new(), labels: Vec::new(), evaluations: 0 });
    }
    let edge = edge_length(population, opts.domain_width);
    let mut passes = Vec::with_capacity(objectives.len());
    for &l in objectives {
        passes.push(cluster_objective(population, l, edge, opts, evaluator, cache)?);
    }

    // intersect: final ids in order of first appearance
    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut labels = Vec::with_capacity(population.len());
    let mut members: Vec<Vec<Solution>> = Vec::new();
    for (i, s) in population.iter().enumerate() {
        let key: Vec<usize> = passes.iter().map(|p| p.labels[i]).collect();
        let next = ids.len();
        let id = *ids.entry(key).or_insert(next);
        if id == members.len() {
            members.push(Vec::new());
        }
        members[id].push(s.clone());
        labels.push(id);
    }

    // test points join their pair's cluster when both endpoints agree
    let mut attached = std::collections::HashSet::new();
    for pass in &passes {
        for (a, b, key) in &pass.tested {
            if labels[*a] == labels[*b] && attached.insert(key.clone()) {
                if let Some(points) = cache.points.get(key) {
                    members[labels[*a]].extend(points.iter().cloned());
                }
            }
        }
    }

    let clusters = members
        .into_iter()
        .enumerate()
        .map(|(id, m)| Cluster::new(id, m))
        .collect();
    Ok(Clustering { clusters, labels, evaluations: evaluator.used() - start })
}

/// Partitions sampled Pareto-optimal solutions into modes by hill-valley
/// clustering. The evaluations are not charged to any budget.
pub fn label_modes(problem: &dyn Problem, solutions: &[Solution]) -> ReferenceSet {
    let mut evaluator = Evaluator::new(problem, None);
    let mut cache = HvTestCache::new();
    let opts = ClusteringOptions::for_problem(problem);
    let clustering = multi_objective_clustering(solutions, &opts, &mut evaluator, &mut cache)
        .expect("unbudgeted clustering cannot run out of evaluations");
    let labels = merge_small_modes(solutions, clustering.labels, MIN_MODE_FRACTION);
    ReferenceSet::new(solutions.to_vec(), labels)
}

/// Reference-set clusters smaller than this fraction are boundary artifacts
/// and are merged into the nearest larger cluster.
pub const MIN_MODE_FRACTION: f64 = 0.01;

fn merge_small_modes(solutions: &[Solution], mut labels: Vec<usize>, fraction: f64) -> Vec<usize> {
    let k = labels.iter().copied().max().map_or(0, |l| l + 1);
    let mut sizes = vec![0usize; k];
    labels.iter().for_each(|&l| sizes[l] += 1);
    let min_size = (fraction * solutions.len() as f64).ceil() as usize;
    let large: Vec<usize> = (0..solutions.len()).filter(|&i| sizes[labels[i]] >= min_size).collect();
    if large.is_empty() {
        return labels;
    }
    let original = labels.clone();
    for i in 0..solutions.len() {
        if sizes[original[i]] < min_size {
            let nearest = large
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    squared_euclidean(&solutions[i].x, &solutions[a].x)
                        .total_cmp(&squared_euclidean(&solutions[i].x, &solutions[b].x))
                })
                .expect("non-empty");
            labels[i] = original[nearest];
        }
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{sample_uniform, Benchmark, ProblemDescriptor};
    use crate::RandomSource;

    fn mindist() -> Benchmark {
        Benchmark::from_name("mindist2").unwrap()
    }

    fn solution(p: &dyn Problem, x: &[f64]) -> Solution {
        Solution::new(x.to_vec(), p.evaluate(x))
    }

    struct Sphere(ProblemDescriptor);

    impl Problem for Sphere {
        fn descriptor(&self) -> &ProblemDescriptor {
            &self.0
        }
        fn evaluate(&self, x: &[f64]) -> Vec<f64> {
            vec![x.iter().map(|v| v * v).sum()]
        }
    }

    #[test]
    fn identical_endpoints_pass_without_evaluations() {
        let p = mindist();
        let mut ev = Evaluator::new(&p, None);
        let s = solution(&p, &[1.0, 1.0]);
        let (same, pts) = hill_valley_test(&s, &s, 3, 0, &mut ev).unwrap();
        assert!(same);
        assert!(pts.is_empty());
        assert_eq!(ev.used(), 0);
    }

    #[test]
    fn segment_within_valley_passes() {
        let p = mindist();
        let mut ev = Evaluator::new(&p, None);
        let a = solution(&p, &[-2.0, -1.0]);
        let b = solution(&p, &[-2.0, 1.0]);
        let (same, pts) = hill_valley_test(&a, &b, 3, 0, &mut ev).unwrap();
        assert!(same);
        assert_eq!(pts.len(), 3);
        assert_eq!(ev.used(), 3);
        // interior points at x2 = -0.5, 0, 0.5
        assert_eq!(pts[1].x, vec![-2.0, 0.0]);
        assert!(pts.iter().all(|t| t.f[0] <= 2.0));
    }

    #[test]
    fn hill_between_valleys_fails() {
        let p = mindist();
        let a = solution(&p, &[-2.0, 0.0]);
        let b = solution(&p, &[2.0, 0.0]);
        assert!((a.f[0] - 1.0).abs() < 1e-15 && (b.f[0] - 1.0).abs() < 1e-15);
        let mut ev = Evaluator::new(&p, None);
        let (same, pts) = hill_valley_test(&a, &b, 1, 0, &mut ev).unwrap();
        assert!(!same);
        assert_eq!(pts[0].x, vec![0.0, 0.0]);
        assert!((pts[0].f[0] - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn edge_length_examples() {
        let corners: Vec<Solution> = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]
            .iter()
            .map(|x| Solution::new(x.to_vec(), vec![0.0]))
            .collect();
        assert!((edge_length(&corners, 1.0) - 0.5).abs() < 1e-12);
        let doubled: Vec<Solution> = corners.iter().chain(&corners).cloned().collect();
        assert!((edge_length(&doubled, 1.0) - 0.5 * 2f64.powf(-0.5)).abs() < 1e-12);

        let mut cube: Vec<Solution> = Vec::new();
        for i in 0..8 {
            let x = vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64];
            cube.push(Solution::new(x, vec![0.0]));
        }
        cube.extend((0..12).map(|i| Solution::new(vec![0.5, 0.5, i as f64 / 12.0], vec![0.0])));
        assert!((edge_length(&cube, 1.0) - (1.0f64 / 20.0).powf(1.0 / 3.0)).abs() < 1e-12);

        // zero extent falls back to a tiny positive width
        let flat: Vec<Solution> = (0..4).map(|i| Solution::new(vec![i as f64, 2.0], vec![0.0])).collect();
        let e = edge_length(&flat, 8.0);
        assert!(e.is_finite() && e > 0.0);
    }

    #[test]
    fn test_point_counts() {
        assert_eq!(test_point_count(0.4, 0.5), 1);
        assert_eq!(test_point_count(0.5, 0.5), 2);
        assert_eq!(test_point_count(1.7, 0.5), 4);
    }

    #[test]
    fn convex_function_yields_one_cluster() {
        let p = Sphere(ProblemDescriptor::cube("sphere", 1, 3, -5.0, 5.0));
        // no interior point of a segment can exceed both endpoints
        let mut rng = RandomSource::new(11);
        let mut ev = Evaluator::new(&p, None);
        let pop = sample_uniform(&mut ev, 100, &mut rng).unwrap();
        for w in pop.windows(2) {
            let (same, _) = hill_valley_test(&w[0], &w[1], 5, 0, &mut ev).unwrap();
            assert!(same);
        }
        let c = multi_objective_clustering(&pop, &ClusteringOptions::for_problem(&p), &mut ev, &mut HvTestCache::new())
            .unwrap();
        assert_eq!(c.clusters.len(), 1);
    }

    #[test]
    fn singleton_population() {
        let p = mindist();
        let mut ev = Evaluator::new(&p, None);
        let pop = vec![solution(&p, &[0.5, 0.5])];
        let c = multi_objective_clustering(&pop, &ClusteringOptions::default(), &mut ev, &mut HvTestCache::new()).unwrap();
        assert_eq!(c.clusters.len(), 1);
        assert_eq!(ev.used(), 0);
    }

    #[test]
    fn duplicates_share_cluster() {
        let p = mindist();
        let mut ev = Evaluator::new(&p, None);
        let mut rng = RandomSource::new(5);
        let mut pop = sample_uniform(&mut ev, 50, &mut rng).unwrap();
        pop.push(pop[17].clone());
        let c = multi_objective_clustering(&pop, &ClusteringOptions::for_problem(&p), &mut ev, &mut HvTestCache::new())
            .unwrap();
        assert_eq!(c.labels[17], c.labels[50]);
    }

    #[test]
    fn partition_refinement_and_cache() {
        let p = mindist();
        let mut rng = RandomSource::new(2);
        let pop = sample_uniform(&mut Evaluator::new(&p, None), 400, &mut rng).unwrap();
        let opts = ClusteringOptions::for_problem(&p);
        let mut cache = HvTestCache::new();
        let mut ev = Evaluator::new(&p, None);
        let multi = multi_objective_clustering(&pop, &opts, &mut ev, &mut cache).unwrap();
        let spent = ev.used();
        assert!(spent >= pop.len() as u64 - 1);

        // partition: every population member appears in exactly its labelled cluster
        let total: usize = multi
            .clusters
            .iter()
            .map(|c| c.members.iter().filter(|s| s.origin != Origin::TestPoint).count())
            .sum();
        assert_eq!(total, pop.len());

        // refinement: each final cluster lies within one cluster per objective
        for l in 0..2 {
            let single = single_objective_clustering(&pop, l, &opts, &mut ev, &mut cache).unwrap();
            for c in 0..multi.clusters.len() {
                let parents: std::collections::HashSet<usize> = (0..pop.len())
                    .filter(|&i| multi.labels[i] == c)
                    .map(|i| single.labels[i])
                    .collect();
                assert_eq!(parents.len(), 1);
            }
        }

        // warm cache: no new evaluations
        let before = ev.used();
        let again = multi_objective_clustering(&pop, &opts, &mut ev, &mut cache).unwrap();
        assert_eq!(ev.used(), before);
        assert_eq!(again.labels, multi.labels);
    }

    #[test]
    fn elite_shortcut_skips_same_subarchive_pairs() {
        let p = mindist();
        // two elites from the same subarchive on opposite sides of a hill
        let a = solution(&p, &[-2.0, 0.0]).with_origin(Origin::Elite(3));
        let b = solution(&p, &[2.0, 0.0]).with_origin(Origin::Elite(3));
        let opts = ClusteringOptions::for_problem(&p).with_policy(ElitePolicy::SameSubarchiveShortcut);
        let mut ev = Evaluator::new(&p, None);
        let c = single_objective_clustering(&[a.clone(), b.clone()], 0, &opts, &mut ev, &mut HvTestCache::new()).unwrap();
        assert_eq!(c.clusters.len(), 1);
        assert_eq!(ev.used(), 0);

        let b_other = b.with_origin(Origin::Elite(4));
        let c = single_objective_clustering(&[a, b_other], 0, &opts, &mut ev, &mut HvTestCache::new()).unwrap();
        assert_eq!(c.clusters.len(), 2);
        assert!(ev.used() > 0);
    }

    #[test]
    fn budget_exhaustion_propagates() {
        let p = mindist();
        let mut rng = RandomSource::new(4);
        let pop = sample_uniform(&mut Evaluator::new(&p, None), 100, &mut rng).unwrap();
        let mut ev = Evaluator::new(&p, Some(5));
        let r = multi_objective_clustering(&pop, &ClusteringOptions::for_problem(&p), &mut ev, &mut HvTestCache::new());
        assert!(matches!(r, Err(crate::Error::BudgetExhausted { .. })));
        assert_eq!(ev.used(), 5);
    }
}
