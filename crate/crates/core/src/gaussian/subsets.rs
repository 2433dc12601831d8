//! Truncation selection and subset formation inside one cluster.

use rand::seq::SliceRandom;

use crate::solution::{nondominated_fronts, squared_euclidean};
use crate::{RandomSource, Solution};

/// How a subset was formed; decides how improvements are judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetKind {
    /// The best solutions in objective `l`.
    SingleObjective(usize),
    /// A group of the rank-based selection.
    DominationRank,
}

/// Indices into the working population that make up one subset.
#[derive(Debug, Clone, PartialEq)]
pub struct Subset {
    pub kind: SubsetKind,
    pub members: Vec<usize>,
}

/// The `max(1, floor(tau * |population|))` best solutions by domination rank.
///
/// Whole fronts are taken in order; the front that does not fit is shuffled
/// and cut. Returned indices are in selection order.
pub fn rank_and_select(population: &[Solution], tau: f64, rng: &mut RandomSource) -> Vec<usize> {
    if population.is_empty() {
        return Vec::new();
    }
    let size = ((tau * population.len() as f64).floor() as usize).clamp(1, population.len());
    let fs: Vec<&[f64]> = population.iter().map(|s| s.f.as_slice()).collect();
    let mut selected = Vec::with_capacity(size);
    for mut front in nondominated_fronts(&fs) {
        let room = size - selected.len();
        if front.len() > room {
            front.shuffle(rng);
            front.truncate(room);
        }
        selected.extend(front);
        if selected.len() == size {
            break;
        }
    }
    selected
}

/// Splits the working population into `k` possibly overlapping subsets.
///
/// With more subsets than objectives, the first `m` subsets hold the `n_c`
/// best solutions of each single objective. The remaining subsets group the
/// rank-based selection around farthest-first leaders in normalized objective
/// space, each leader taking its `ceil(2 * |selection| / leaders)` nearest
/// selected solutions.
pub fn form_subsets(
    population: &[Solution],
    k: usize,
    tau: f64,
    n_c: usize,
    rng: &mut RandomSource,
) -> Vec<Subset> {
    let k = k.max(1);
    if population.is_empty() {
        return Vec::new();
    }
    let m = population[0].f.len();
    let mut subsets = Vec::with_capacity(k);
    let mut leaders = k;
    if k > m {
        for l in 0..m {
            let mut order: Vec<usize> = (0..population.len()).collect();
            order.sort_by(|&a, &b| population[a].f[l].total_cmp(&population[b].f[l]));
            order.truncate(n_c.max(1));
            subsets.push(Subset { kind: SubsetKind::SingleObjective(l), members: order });
        }
        leaders = k - m;
    }
    let selection = rank_and_select(population, tau, rng);
    for members in leader_groups(population, &selection, leaders) {
        subsets.push(Subset { kind: SubsetKind::DominationRank, members });
    }
    subsets
}

fn leader_groups(population: &[Solution], selection: &[usize], leaders: usize) -> Vec<Vec<usize>> {
    if leaders == 1 {
        return vec![selection.to_vec()];
    }
    let m = population[0].f.len();
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for &i in selection {
        for (j, v) in population[i].f.iter().enumerate() {
            lo[j] = lo[j].min(*v);
            hi[j] = hi[j].max(*v);
        }
    }
    let norm: Vec<Vec<f64>> = selection
        .iter()
        .map(|&i| {
            population[i]
                .f
                .iter()
                .enumerate()
                .map(|(j, v)| if hi[j] > lo[j] { (v - lo[j]) / (hi[j] - lo[j]) } else { 0.0 })
                .collect()
        })
        .collect();

    let s = selection.len();
    let mut chosen = vec![0usize];
    let mut nearest: Vec<f64> = norm.iter().map(|p| squared_euclidean(p, &norm[0])).collect();
    while chosen.len() < leaders.min(s) {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, &d) in nearest.iter().enumerate() {
            if d > best.1 && !chosen.contains(&i) {
                best = (i, d);
            }
        }
        chosen.push(best.0);
        for (i, p) in norm.iter().enumerate() {
            nearest[i] = nearest[i].min(squared_euclidean(p, &norm[best.0]));
        }
    }
    // Fewer distinct solutions than leaders: reuse leaders in order.
    while chosen.len() < leaders {
        chosen.push(chosen[chosen.len() % s]);
    }

    let group = (2 * s).div_ceil(leaders).min(s);
    chosen
        .iter()
        .map(|&leader| {
            let mut order: Vec<usize> = (0..s).collect();
            order.sort_by(|&a, &b| {
                squared_euclidean(&norm[a], &norm[leader])
                    .total_cmp(&squared_euclidean(&norm[b], &norm[leader]))
                    .then(a.cmp(&b))
            });
            order.truncate(group);
            order.into_iter().map(|i| selection[i]).collect()
        })
        .collect()
}

/// For every current subset, the index of the previous subset it continues.
///
/// Single-objective subsets continue the subset of the same objective when
/// one exists; all others continue the previous subset with the nearest
/// objective-space mean.
pub fn register_subsets(
    current: &[(SubsetKind, Vec<f64>)],
    previous: &[(SubsetKind, Vec<f64>)],
) -> Vec<Option<usize>> {
    current
        .iter()
        .map(|(kind, mean)| {
            if previous.is_empty() {
                return None;
            }
            if let SubsetKind::SingleObjective(l) = kind {
                if let Some(j) = previous.iter().position(|(k, _)| *k == SubsetKind::SingleObjective(*l)) {
                    return Some(j);
                }
            }
            let mut best = (0, f64::INFINITY);
            for (j, (_, m)) in previous.iter().enumerate() {
                let d = squared_euclidean(mean, m);
                if d < best.1 {
                    best = (j, d);
                }
            }
            Some(best.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::dominates;
    use rand::Rng;

    fn sol(f: &[f64]) -> Solution {
        Solution::new(vec![f[0]], f.to_vec())
    }

    #[test]
    fn mutually_nondominated_full_selection() {
        let pop: Vec<Solution> = (0..8).map(|i| sol(&[i as f64, 7.0 - i as f64])).collect();
        let mut rng = RandomSource::new(1);
        let mut sel = rank_and_select(&pop, 1.0, &mut rng);
        sel.sort_unstable();
        assert_eq!(sel, (0..8).collect::<Vec<_>>());
    }

    #[test]
    fn chain_keeps_its_top() {
        let pop: Vec<Solution> = (0..10).rev().map(|i| sol(&[i as f64, i as f64])).collect();
        let mut rng = RandomSource::new(1);
        let sel = rank_and_select(&pop, 0.3, &mut rng);
        assert_eq!(sel, vec![9, 8, 7]);
        assert_eq!(rank_and_select(&pop, 0.01, &mut rng), vec![9]);
    }

    #[test]
    fn selection_respects_rank_order() {
        let mut rng = RandomSource::new(4);
        for _ in 0..20 {
            let pop: Vec<Solution> = (0..50).map(|_| sol(&[rng.random(), rng.random()])).collect();
            let sel = rank_and_select(&pop, 0.35, &mut rng);
            assert_eq!(sel.len(), 17);
            // oracle: a solution outside the selection never dominates one inside
            let inside: std::collections::HashSet<usize> = sel.iter().copied().collect();
            for o in (0..50).filter(|i| !inside.contains(i)) {
                for &i in &sel {
                    assert!(!dominates(&pop[o].f, &pop[i].f));
                }
            }
        }
    }

    #[test]
    fn subset_counts() {
        let mut rng = RandomSource::new(2);
        let pop: Vec<Solution> = (0..100).map(|_| sol(&[rng.random(), rng.random()])).collect();
        let s = form_subsets(&pop, 5, 0.35, 14, &mut rng);
        assert_eq!(s.len(), 5);
        assert_eq!(s[0].kind, SubsetKind::SingleObjective(0));
        assert_eq!(s[1].kind, SubsetKind::SingleObjective(1));
        assert!(s[..2].iter().all(|x| x.members.len() == 14));
        assert!(s[2..].iter().all(|x| x.kind == SubsetKind::DominationRank));
        let best0 = (0..100).min_by(|&a, &b| pop[a].f[0].total_cmp(&pop[b].f[0])).unwrap();
        assert!(s[0].members.contains(&best0));

        let single = form_subsets(&pop, 1, 0.35, 14, &mut rng);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].members.len(), 35);

        let boundary = form_subsets(&pop, 2, 0.35, 14, &mut rng);
        assert!(boundary.iter().all(|x| x.kind == SubsetKind::DominationRank));
    }

    #[test]
    fn registration() {
        let a = vec![
            (SubsetKind::SingleObjective(0), vec![0.0, 5.0]),
            (SubsetKind::DominationRank, vec![1.0, 1.0]),
            (SubsetKind::DominationRank, vec![3.0, 0.0]),
        ];
        assert_eq!(register_subsets(&a, &a), vec![Some(0), Some(1), Some(2)]);
        assert_eq!(register_subsets(&a, &[]), vec![None, None, None]);
        let map = register_subsets(&a, &a[1..]);
        assert!(map.iter().all(Option::is_some));
        let mut used: Vec<usize> = map.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        assert!(used.len() < 3);
    }
}
