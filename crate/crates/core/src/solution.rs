//! Evaluated solutions and Pareto dominance.

/// Where a solution in a population came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// Sampled this generation (uniform initialization or offspring).
    Fresh,
    /// Copied from the subarchive with the given id.
    Elite(usize),
    /// Interior point evaluated by a hill-valley test.
    TestPoint,
}

/// A decision vector together with its objective vector.
///
/// A `Solution` only exists once it has been evaluated, so `f` is always
/// populated.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub origin: Origin,
}

impl Solution {
    pub fn new(x: Vec<f64>, f: Vec<f64>) -> Self {
        Self { x, f, origin: Origin::Fresh }
    }

    pub fn with_origin(mut self, origin: Origin) -> Self {
        self.origin = origin;
        self
    }

    pub fn dominates(&self, other: &Solution) -> bool {
        dominates(&self.f, &other.f)
    }

    pub fn is_elite(&self) -> bool {
        matches!(self.origin, Origin::Elite(_))
    }
}

/// Strict Pareto dominance for minimization: `a` is nowhere worse than `b`
/// and strictly better somewhere. Equal vectors do not dominate each other.
///
/// Panics if the vectors have different lengths.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    assert_eq!(a.len(), b.len(), "objective vectors differ in length");
    let mut strictly_better = false;
    for (&ai, &bi) in a.iter().zip(b) {
        if ai > bi {
            return false;
        }
        if ai < bi {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Indices of the members of `objectives` not dominated by any other member.
///
/// The result is in ascending index order.
pub fn nondominated_indices<T: AsRef<[f64]>>(objectives: &[T]) -> Vec<usize> {
    let n = objectives.len();
    if n == 0 {
        return Vec::new();
    }
    if objectives[0].as_ref().len() == 2 {
        return nondominated_indices_2d(objectives);
    }
    (0..n)
        .filter(|&i| {
            let fi = objectives[i].as_ref();
            !objectives.iter().any(|o| dominates(o.as_ref(), fi))
        })
        .collect()
}

// Sweep over (f0, f1)-sorted points; O(N log N).
fn nondominated_indices_2d<T: AsRef<[f64]>>(objectives: &[T]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..objectives.len()).collect();
    order.sort_by(|&a, &b| {
        let (fa, fb) = (objectives[a].as_ref(), objectives[b].as_ref());
        fa[0].total_cmp(&fb[0]).then(fa[1].total_cmp(&fb[1]))
    });
    let mut keep = Vec::new();
    let mut best_f1 = f64::INFINITY;
    let mut i = 0;
    while i < order.len() {
        // group of equal f0
        let f0 = objectives[order[i]].as_ref()[0];
        let mut j = i;
        while j < order.len() && objectives[order[j]].as_ref()[0] == f0 {
            j += 1;
        }
        let group_min = objectives[order[i]].as_ref()[1];
        if group_min < best_f1 {
            for &idx in &order[i..j] {
                if objectives[idx].as_ref()[1] == group_min {
                    keep.push(idx);
                }
            }
            best_f1 = group_min;
        }
        i = j;
    }
    keep.sort_unstable();
    keep
}

/// The members of `population` not dominated by any other member.
pub fn nondominated_filter(population: &[Solution]) -> Vec<Solution> {
    let f: Vec<&[f64]> = population.iter().map(|s| s.f.as_slice()).collect();
    nondominated_indices(&f)
        .into_iter()
        .map(|i| population[i].clone())
        .collect()
}

/// Non-dominated sorting into fronts of indices (front 0 is non-dominated).
pub fn nondominated_fronts<T: AsRef<[f64]>>(objectives: &[T]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (fi, fj) = (objectives[i].as_ref(), objectives[j].as_ref());
            if dominates(fi, fj) {
                dominated_by[i].push(j);
                count[j] += 1;
            } else if dominates(fj, fi) {
                dominated_by[j].push(i);
                count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

#[inline]
pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Arithmetic mean of a set of equal-length vectors.
pub fn mean_vector<'a, I>(vectors: I, dim: usize) -> Vec<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut mean = vec![0.0; dim];
    let mut count = 0usize;
    for v in vectors {
        for (m, x) in mean.iter_mut().zip(v) {
            *m += x;
        }
        count += 1;
    }
    if count > 0 {
        mean.iter_mut().for_each(|m| *m /= count as f64);
    }
    mean
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sol(f: &[f64]) -> Solution {
        Solution::new(vec![0.0], f.to_vec())
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[0.0, 0.0], &[1.0, 1.0]));
        assert!(!dominates(&[0.0, 0.0], &[0.0, 0.0]));
        assert!(!dominates(&[0.0, 1.0], &[1.0, 0.0]));
        assert!(dominates(&[0.0, 1.0], &[0.0, 2.0]));
    }

    #[test]
    #[should_panic]
    fn dominance_length_mismatch_panics() {
        dominates(&[0.0], &[0.0, 1.0]);
    }

    #[test]
    fn filter_examples() {
        let p = vec![sol(&[0.0, 1.0]), sol(&[1.0, 0.0]), sol(&[1.0, 1.0])];
        let nd = nondominated_filter(&p);
        assert_eq!(nd, vec![sol(&[0.0, 1.0]), sol(&[1.0, 0.0])]);
        assert_eq!(nondominated_filter(&[sol(&[0.0, 0.0])]).len(), 1);
        assert!(nondominated_filter(&[]).is_empty());
    }

    fn brute_force(f: &[Vec<f64>]) -> Vec<usize> {
        (0..f.len())
            .filter(|&i| (0..f.len()).all(|j| !dominates(&f[j], &f[i])))
            .collect()
    }

    #[test]
    fn filter_matches_pairwise_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let f: Vec<Vec<f64>> = (0..20)
                .map(|_| vec![rng.random_range(0..5) as f64, rng.random_range(0..5) as f64])
                .collect();
            assert_eq!(nondominated_indices(&f), brute_force(&f));
        }
    }

    #[test]
    fn fronts_match_peeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f: Vec<Vec<f64>> = (0..50)
            .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
            .collect();
        let fronts = nondominated_fronts(&f);
        let mut remaining: Vec<usize> = (0..f.len()).collect();
        for front in fronts {
            let sub: Vec<Vec<f64>> = remaining.iter().map(|&i| f[i].clone()).collect();
            let peeled: Vec<usize> = brute_force(&sub).into_iter().map(|k| remaining[k]).collect();
            assert_eq!(front, peeled);
            remaining.retain(|i| !front.contains(i));
        }
        assert!(remaining.is_empty());
    }

    proptest! {
        #[test]
        fn dominance_is_antisymmetric(a in prop::collection::vec(-3i32..3, 3), b in prop::collection::vec(-3i32..3, 3)) {
            let a: Vec<f64> = a.into_iter().map(f64::from).collect();
            let b: Vec<f64> = b.into_iter().map(f64::from).collect();
            prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
        }

        #[test]
        fn filter_is_idempotent(pts in prop::collection::vec((0i32..6, 0i32..6, 0i32..6), 0..30)) {
            let p: Vec<Solution> = pts.iter().map(|&(a, b, c)| sol(&[a as f64, b as f64, c as f64])).collect();
            let once = nondominated_filter(&p);
            prop_assert_eq!(nondominated_filter(&once), once);
        }
    }
}
