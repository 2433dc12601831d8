//! Gaussian core optimizer run inside every cluster.
//!
//! One generation reinjects a scattered sample of the cluster's elites, splits
//! the working population into subsets, fits one Gaussian per subset and
//! samples the cluster's share of offspring from those models.

mod model;
mod subsets;

use serde::{Deserialize, Serialize};

use crate::archive::{greedy_scattered_subset_selection, Space};
use crate::{Error, Evaluator, RandomSource, Result, Solution};

pub use model::{
    adapt_multiplier, estimate_model, improvements, sample_offspring, Covariance, Factor, SubsetModel,
};
pub use subsets::{form_subsets, rank_and_select, register_subsets, Subset, SubsetKind};

/// Covariance structure and estimation scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoreVariant {
    /// Full covariance.
    #[default]
    Mam,
    /// Diagonal covariance.
    Mamu,
    /// Full covariance, smoothed across generations.
    Imam,
    /// Diagonal covariance, smoothed across generations.
    Imamu,
}

impl CoreVariant {
    pub const ALL: [CoreVariant; 4] = [CoreVariant::Mam, CoreVariant::Mamu, CoreVariant::Imam, CoreVariant::Imamu];

    pub fn name(self) -> &'static str {
        match self {
            CoreVariant::Mam => "mam",
            CoreVariant::Mamu => "mamu",
            CoreVariant::Imam => "imam",
            CoreVariant::Imamu => "imamu",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        let lower = name.to_ascii_lowercase();
        Self::ALL
            .into_iter()
            .find(|v| v.name() == lower)
            .ok_or_else(|| Error::UnknownAlgorithm(name.to_string()))
    }

    pub fn is_univariate(self) -> bool {
        matches!(self, CoreVariant::Mamu | CoreVariant::Imamu)
    }

    pub fn is_incremental(self) -> bool {
        matches!(self, CoreVariant::Imam | CoreVariant::Imamu)
    }
}

/// Tunables of the core optimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoreConfig {
    pub variant: CoreVariant,
    /// Selection fraction.
    pub tau: f64,
    /// Lower bound on the size of single-objective subsets.
    pub min_subset_size: usize,
    /// Smoothing rate of the mean towards the new estimate (incremental variants).
    pub mean_rate: f64,
    /// Smoothing rate of the covariance towards the new estimate (incremental variants).
    pub covariance_rate: f64,
    /// Fraction of each subset's offspring moved along the mean displacement.
    pub ams_fraction: f64,
    /// Step length of that move in units of the displacement.
    pub ams_factor: f64,
    pub decrease_factor: f64,
    /// Improving fraction below which the multiplier shrinks.
    pub improvement_threshold: f64,
    pub multiplier_min: f64,
    pub multiplier_max: f64,
}

impl Default for CoreConfig {
    fn default() -> Self {
        Self {
            variant: CoreVariant::Mam,
            tau: 0.35,
            min_subset_size: 2,
            mean_rate: 0.8,
            covariance_rate: 0.6,
            ams_fraction: 0.1,
            ams_factor: 2.0,
            decrease_factor: 0.9,
            improvement_threshold: 0.1,
            multiplier_min: 1e-6,
            multiplier_max: 1e3,
        }
    }
}

impl CoreConfig {
    pub fn with_variant(variant: CoreVariant) -> Self {
        Self { variant, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return bad("tau must lie in (0, 1]");
        }
        if !(0.0..=1.0).contains(&self.mean_rate) || !(0.0..=1.0).contains(&self.covariance_rate) {
            return bad("smoothing rates must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.ams_fraction) {
            return bad("ams_fraction must lie in [0, 1]");
        }
        if !(self.decrease_factor > 0.0 && self.decrease_factor < 1.0) {
            return bad("decrease_factor must lie in (0, 1)");
        }
        if !(self.multiplier_min > 0.0 && self.multiplier_min <= self.multiplier_max) {
            return bad("multiplier bounds must satisfy 0 < min <= max");
        }
        Ok(())
    }
}

/// Model memory of one cluster across generations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ClusterModelState {
    pub subsets: Vec<SubsetModel>,
    pub generation: usize,
    /// Generations in which some full covariance had to fall back to its diagonal.
    pub diagonal_fallbacks: usize,
}

/// Size of the single-objective subsets for a working population of `size`.
pub fn single_objective_subset_size(size: usize, k: usize, config: &CoreConfig) -> usize {
    let selected = (config.tau * size as f64).floor() as usize;
    selected.div_ceil(k.max(1)).max(config.min_subset_size)
}

/// One core generation for a cluster.
///
/// Returns exactly `offspring_count` evaluated offspring unless the budget
/// runs out first, and updates `state` in place.
#[allow(clippy::too_many_arguments)]
pub fn core_opt_generation(
    cluster: &[Solution],
    elites: &[Solution],
    state: &mut ClusterModelState,
    offspring_count: usize,
    subset_count: usize,
    config: &CoreConfig,
    evaluator: &mut Evaluator<'_>,
    rng: &mut RandomSource,
) -> Result<Vec<Solution>> {
    let mut working: Vec<Solution> = cluster.to_vec();
    let reinjected = (config.tau * offspring_count as f64).floor() as usize;
    if reinjected > 0 && !elites.is_empty() {
        working.extend(greedy_scattered_subset_selection(elites, reinjected, Space::Objective));
    }
    if working.is_empty() || offspring_count == 0 {
        return Ok(Vec::new());
    }
    let width = evaluator.problem().descriptor().max_width();
    let k = subset_count.max(1);
    let n_c = single_objective_subset_size(working.len(), k, config);
    let subsets = form_subsets(&working, k, config.tau, n_c, rng);

    let members: Vec<Vec<Solution>> = subsets
        .iter()
        .map(|s| s.members.iter().map(|&i| working[i].clone()).collect())
        .collect();
    let current: Vec<(SubsetKind, Vec<f64>)> = subsets
        .iter()
        .zip(&members)
        .map(|(s, ms)| (s.kind, crate::solution::mean_vector(ms.iter().map(|m| m.f.as_slice()), ms[0].f.len())))
        .collect();
    let previous: Vec<(SubsetKind, Vec<f64>)> =
        state.subsets.iter().map(|m| (m.kind, m.objective_mean.clone())).collect();
    let mapping = register_subsets(&current, &previous);

    let mut models = Vec::with_capacity(subsets.len());
    let mut offspring = Vec::with_capacity(offspring_count);
    let mut fell_back = false;
    let share = offspring_count / subsets.len();
    let extra = offspring_count % subsets.len();
    for (i, (subset, ms)) in subsets.iter().zip(&members).enumerate() {
        let prev = mapping[i].map(|j| &state.subsets[j]);
        let mut model = estimate_model(ms, subset.kind, config.variant, prev, config);
        let factor = model.factor(width);
        fell_back |= factor.diagonal_fallback;
        let count = share + usize::from(i < extra);
        let ams = (config.ams_fraction * count as f64).floor() as usize;
        let drawn = sample_offspring(&model, &factor, count, ams, config, evaluator, rng)?;
        if !drawn.is_empty() {
            let improved = improvements(subset.kind, &drawn, ms, elites);
            model.multiplier = adapt_multiplier(&model, &factor, &drawn, &improved, config);
        }
        offspring.extend(drawn);
        models.push(model);
        if evaluator.is_exhausted() {
            break;
        }
    }
    state.subsets = models;
    state.generation += 1;
    state.diagonal_fallbacks += usize::from(fell_back);
    Ok(offspring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{sample_uniform, Benchmark, Problem, ProblemDescriptor};
    use crate::solution::nondominated_filter;

    #[test]
    fn variant_names_round_trip() {
        for v in CoreVariant::ALL {
            assert_eq!(CoreVariant::from_name(v.name()).unwrap(), v);
        }
        assert!(CoreVariant::from_name("cma").is_err());
        let cfg: CoreConfig = toml::from_str("variant = \"imamu\"\ntau = 0.5").unwrap();
        assert_eq!(cfg.variant, CoreVariant::Imamu);
        assert_eq!(cfg.mean_rate, 0.8);
        assert!(cfg.validate().is_ok());
        assert!(CoreConfig { tau: 0.0, ..CoreConfig::default() }.validate().is_err());
    }

    #[test]
    fn exact_offspring_accounting() {
        let p = Benchmark::from_name("mindist2").unwrap();
        let mut ev = Evaluator::new(&p, None);
        let mut rng = RandomSource::new(1);
        let cluster = sample_uniform(&mut ev, 30, &mut rng).unwrap();
        let before = ev.used();
        let mut state = ClusterModelState::default();
        let out = core_opt_generation(&cluster, &[], &mut state, 1, 1, &CoreConfig::default(), &mut ev, &mut rng).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(ev.used() - before, 1);
        for (n, k) in [(37, 5), (50, 3), (4, 7)] {
            let before = ev.used();
            let out = core_opt_generation(&cluster, &cluster[..5], &mut state, n, k, &CoreConfig::default(), &mut ev, &mut rng).unwrap();
            assert_eq!(out.len(), n);
            assert_eq!(ev.used() - before, n as u64);
        }
    }

    /// MinDist restricted to the box around its right niche.
    struct OneNiche(crate::problems::Benchmark, ProblemDescriptor);

    impl Problem for OneNiche {
        fn descriptor(&self) -> &ProblemDescriptor {
            &self.1
        }
        fn evaluate(&self, x: &[f64]) -> Vec<f64> {
            self.0.evaluate(x)
        }
    }

    #[test]
    fn converges_to_front_inside_one_niche() {
        for variant in CoreVariant::ALL {
            let p = OneNiche(
                Benchmark::from_name("mindist2").unwrap(),
                ProblemDescriptor::new("right", 2, vec![1.0, -0.9], vec![4.0, 0.9]),
            );
            let mut ev = Evaluator::new(&p, None);
            let mut rng = RandomSource::new(3);
            let config = CoreConfig::with_variant(variant);
            let mut pop = sample_uniform(&mut ev, 50, &mut rng).unwrap();
            let mut state = ClusterModelState::default();
            let mut elites: Vec<Solution> = nondominated_filter(&pop);
            for _ in 0..50 {
                let off = core_opt_generation(&pop, &elites, &mut state, 50, 5, &config, &mut ev, &mut rng).unwrap();
                let mut all = elites.clone();
                all.extend(off.iter().cloned());
                elites = nondominated_filter(&all);
                pop = off;
            }
            let best = elites.iter().map(|s| s.f[0] + s.f[1]).fold(f64::INFINITY, f64::min);
            assert!(best - 2.0 < 1e-2, "{variant:?}: {best}");
            for model in &state.subsets {
                if variant.is_univariate() {
                    assert!(matches!(model.covariance, Covariance::Diagonal(_)));
                }
            }
        }
    }

    #[test]
    fn generation_is_reproducible() {
        let p = Benchmark::from_name("sym-part1").unwrap();
        let run = || {
            let mut ev = Evaluator::new(&p, None);
            let mut rng = RandomSource::new(77);
            let pop = sample_uniform(&mut ev, 40, &mut rng).unwrap();
            let mut state = ClusterModelState::default();
            let a = core_opt_generation(&pop, &[], &mut state, 40, 4, &CoreConfig::default(), &mut ev, &mut rng).unwrap();
            let b = core_opt_generation(&a, &a[..3], &mut state, 40, 4, &CoreConfig::default(), &mut ev, &mut rng).unwrap();
            (a, b)
        };
        assert_eq!(run(), run());
    }
}
