//! Clustering snapshots of uniform samples for plotting.

use std::io::Write;

use crate::hillvalley::{multi_objective_clustering, Clustering, ClusteringOptions, HvTestCache};
use crate::problems::{fmt17, sample_uniform, Problem};
use crate::{Evaluator, Origin, RandomSource, Result};

/// Sample sizes of the two snapshot rows.
pub const SNAPSHOT_SIZES: [usize; 2] = [250, 10_000];

/// Clusters `count` uniform samples of `problem`.
pub fn clustering_snapshot(problem: &dyn Problem, count: usize, seed: u64) -> Result<Clustering> {
    let mut rng = RandomSource::new(seed);
    let mut evaluator = Evaluator::new(problem, None);
    let population = sample_uniform(&mut evaluator, count, &mut rng)?;
    let mut cache = HvTestCache::new();
    multi_objective_clustering(&population, &ClusteringOptions::for_problem(problem), &mut evaluator, &mut cache)
}

/// Writes `x0..,f0..,cluster_id,is_test_point` for every cluster member and
/// returns the clustering.
pub fn export_clustering_snapshot<W: Write>(
    problem: &dyn Problem,
    count: usize,
    seed: u64,
    writer: W,
) -> Result<Clustering> {
    let clustering = clustering_snapshot(problem, count, seed)?;
    let desc = problem.descriptor();
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (0..desc.n).map(|i| format!("x{i}")).collect();
    header.extend((0..desc.m).map(|i| format!("f{i}")));
    header.push("cluster_id".into());
    header.push("is_test_point".into());
    w.write_record(&header)?;
    for cluster in &clustering.clusters {
        for s in &cluster.members {
            let mut row: Vec<String> = s.x.iter().chain(&s.f).map(|v| fmt17(*v)).collect();
            row.push(cluster.id.to_string());
            row.push(u8::from(s.origin == Origin::TestPoint).to_string());
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(clustering)
}
