//! Quality indicators against a reference Pareto set.
//!
//! None of these functions evaluate the problem, so they never touch an
//! evaluation budget.

use crate::archive::{greedy_scattered_subset_selection, Space};
use crate::problems::ReferenceSet;
use crate::solution::squared_euclidean;
use crate::Solution;

/// Mode-attainment threshold used for `m` objectives.
pub fn default_epsilon(m: usize) -> f64 {
    if m >= 3 { 0.1 } else { 0.05 }
}

/// Mean distance from every reference point to its nearest approximation
/// point, measured in `space`. Infinite when `approximation` is empty.
pub fn generational_distance(approximation: &[Solution], reference: &[Solution], space: Space) -> f64 {
    if approximation.is_empty() {
        return f64::INFINITY;
    }
    if reference.is_empty() {
        return 0.0;
    }
    let total: f64 = reference
        .iter()
        .map(|r| {
            approximation
                .iter()
                .map(|a| squared_euclidean(space.coords(a), space.coords(r)))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    total / reference.len() as f64
}

pub fn igd(approximation: &[Solution], reference: &ReferenceSet) -> f64 {
    generational_distance(approximation, reference.solutions(), Space::Objective)
}

pub fn igdx(approximation: &[Solution], reference: &ReferenceSet) -> f64 {
    generational_distance(approximation, reference.solutions(), Space::Decision)
}

/// IGDX against each reference mode separately.
pub fn per_mode_igdx(approximation: &[Solution], reference: &ReferenceSet) -> Vec<f64> {
    (0..reference.mode_count())
        .map(|j| generational_distance(approximation, &reference.mode(j), Space::Decision))
        .collect()
}

/// Fraction of reference modes whose IGDX is below `epsilon`.
pub fn mode_ratio(approximation: &[Solution], reference: &ReferenceSet, epsilon: f64) -> f64 {
    ratio_from(&per_mode_igdx(approximation, reference), epsilon)
}

fn ratio_from(per_mode: &[f64], epsilon: f64) -> f64 {
    if per_mode.is_empty() {
        return 0.0;
    }
    per_mode.iter().filter(|&&v| v < epsilon).count() as f64 / per_mode.len() as f64
}

/// Best IGD and IGDX any `size`-point subset can reach, approximated by
/// greedy scattered selection from the reference set itself.
pub fn achievable_limits(reference: &ReferenceSet, size: usize) -> (f64, f64) {
    let r = reference.solutions();
    let by_f = greedy_scattered_subset_selection(r, size, Space::Objective);
    let by_x = greedy_scattered_subset_selection(r, size, Space::Decision);
    (igd(&by_f, reference), igdx(&by_x, reference))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub igd: f64,
    pub igdx: f64,
    pub mode_ratio: f64,
    pub per_mode_igdx: Vec<f64>,
    /// Set when the approximation set was empty and the distances are infinite.
    pub empty_approximation: bool,
}

impl MetricReport {
    pub fn compute(approximation: &[Solution], reference: &ReferenceSet, epsilon: f64) -> Self {
        let per_mode = per_mode_igdx(approximation, reference);
        Self {
            igd: igd(approximation, reference),
            igdx: igdx(approximation, reference),
            mode_ratio: ratio_from(&per_mode, epsilon),
            per_mode_igdx: per_mode,
            empty_approximation: approximation.is_empty(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Benchmark, Problem};
    use crate::RandomSource;
    use rand::Rng;

    fn sol(x: &[f64], f: &[f64]) -> Solution {
        Solution::new(x.to_vec(), f.to_vec())
    }

    fn brute(a: &[Vec<f64>], r: &[Vec<f64>]) -> f64 {
        let mut total = 0.0;
        for y in r {
            let mut best = f64::INFINITY;
            for x in a {
                let d: f64 = x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
                if d < best {
                    best = d;
                }
            }
            total += best;
        }
        total / r.len() as f64
    }

    #[test]
    fn hand_computed_igd() {
        let r = ReferenceSet::new(vec![sol(&[0.0], &[0.0, 0.0]), sol(&[1.0], &[1.0, 1.0])], vec![0, 0]);
        let a = vec![sol(&[0.0], &[0.0, 0.0])];
        assert!((igd(&a, &r) - std::f64::consts::SQRT_2 / 2.0).abs() < 1e-12);
        assert_eq!(igd(r.solutions(), &r), 0.0);
        assert_eq!(igdx(r.solutions(), &r), 0.0);
        assert_eq!(mode_ratio(r.solutions(), &r, 0.05), 1.0);
        let empty = MetricReport::compute(&[], &r, 0.05);
        assert!(empty.empty_approximation && empty.igd.is_infinite());
        assert_eq!(empty.mode_ratio, 0.0);
    }

    #[test]
    fn one_of_two_mindist_segments() {
        let p = Benchmark::from_name("mindist2").unwrap();
        let r = p.reference_set(1000).unwrap();
        let a = r.mode(0);
        assert!(igd(&a, &r) < 1e-9);
        assert!((igdx(&a, &r) - 2.0).abs() < 0.01, "{}", igdx(&a, &r));
        assert_eq!(mode_ratio(&a, &r, 0.05), 0.5);
    }

    #[test]
    fn matches_brute_force_oracle() {
        let mut rng = RandomSource::new(3);
        for _ in 0..200 {
            let dim = rng.random_range(1..5);
            let na = rng.random_range(1..15);
            let nr = rng.random_range(1..15);
            let mut pts = |k: usize| -> Vec<Vec<f64>> {
                (0..k).map(|_| (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect()).collect()
            };
            let (ax, af, rx, rf) = (pts(na), pts(na), pts(nr), pts(nr));
            let a: Vec<Solution> = ax.iter().zip(&af).map(|(x, f)| sol(x, f)).collect();
            let r = ReferenceSet::new(rx.iter().zip(&rf).map(|(x, f)| sol(x, f)).collect(), vec![0; nr]);
            let (g, gx) = (igd(&a, &r), igdx(&a, &r));
            let (og, ogx) = (brute(&af, &rf), brute(&ax, &rx));
            assert!((g - og).abs() <= 1e-12 * og.max(1e-300));
            assert!((gx - ogx).abs() <= 1e-12 * ogx.max(1e-300));
        }
    }

    #[test]
    fn adding_points_is_monotone_and_ratio_quantized() {
        let p = Benchmark::from_name("sym-part1").unwrap();
        let r = p.reference_set(900).unwrap();
        let mut rng = RandomSource::new(5);
        let mut a: Vec<Solution> = Vec::new();
        let mut prev = (f64::INFINITY, f64::INFINITY, 0.0);
        for _ in 0..60 {
            a.push(r.solutions()[rng.random_range(0..r.len())].clone());
            let now = (igd(&a, &r), igdx(&a, &r), mode_ratio(&a, &r, 0.05));
            assert!(now.0 <= prev.0 && now.1 <= prev.1 && now.2 >= prev.2);
            let k = now.2 * r.mode_count() as f64;
            assert!((k - k.round()).abs() < 1e-12);
            prev = now;
        }
    }

    #[test]
    fn limits_vanish_for_large_budget() {
        let p = Benchmark::from_name("mindist2").unwrap();
        let r = p.reference_set(50).unwrap();
        assert_eq!(achievable_limits(&r, 50), (0.0, 0.0));
        assert_eq!(default_epsilon(2), 0.05);
        assert_eq!(default_epsilon(3), 0.1);
    }
}
