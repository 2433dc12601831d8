//! Niche-local elitist archives.
//!
//! Every cluster contributes one subarchive holding the solutions that are
//! non-dominated *within that cluster*; dominance across subarchives is
//! ignored so that local Pareto sets of other niches survive. When the total
//! size exceeds the target, all subarchives are thinned on one shared grid in
//! normalized objective space.

use std::collections::HashMap;
use std::io::Write;

use crate::hillvalley::Cluster;
use crate::problems::fmt17;
use crate::solution::{mean_vector, nondominated_filter, nondominated_indices, squared_euclidean};
use crate::{Result, Solution};

/// Space in which distances are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Decision,
    Objective,
}

impl Space {
    pub fn coords(self, s: &Solution) -> &[f64] {
        match self {
            Space::Decision => &s.x,
            Space::Objective => &s.f,
        }
    }
}

/// Elitist archive of one niche.
#[derive(Debug, Clone, PartialEq)]
pub struct Subarchive {
    pub id: usize,
    pub elites: Vec<Solution>,
    /// Cluster the subarchive was built from.
    pub linked_cluster: usize,
}

impl Subarchive {
    pub fn new(id: usize, linked_cluster: usize) -> Self {
        Self { id, elites: Vec::new(), linked_cluster }
    }

    pub fn len(&self) -> usize {
        self.elites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elites.is_empty()
    }

    /// Adds `s` unless a member dominates it or shares its decision vector;
    /// members dominated by `s` are dropped. Returns whether `s` was added.
    pub fn insert(&mut self, s: Solution) -> bool {
        if self.elites.iter().any(|e| e.dominates(&s) || e.x == s.x) {
            return false;
        }
        self.elites.retain(|e| !s.dominates(e));
        self.elites.push(s);
        true
    }

    /// Decision-space centroid.
    pub fn mean(&self) -> Option<Vec<f64>> {
        let first = self.elites.first()?;
        Some(mean_vector(self.elites.iter().map(|s| s.x.as_slice()), first.x.len()))
    }
}

/// The set of all subarchives with a shared size target.
#[derive(Debug, Clone, PartialEq)]
pub struct ElitistArchive {
    pub subarchives: Vec<Subarchive>,
    pub target_size: usize,
    /// Cell width of the last discretization in normalized objective units.
    pub grid_resolution: Option<f64>,
}

impl ElitistArchive {
    pub fn new(target_size: usize) -> Self {
        Self { subarchives: Vec::new(), target_size, grid_resolution: None }
    }

    pub fn total_size(&self) -> usize {
        self.subarchives.iter().map(Subarchive::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }

    pub fn elites(&self) -> impl Iterator<Item = &Solution> {
        self.subarchives.iter().flat_map(|s| s.elites.iter())
    }

    /// Union of all subarchives.
    pub fn all_elites(&self) -> Vec<Solution> {
        self.elites().cloned().collect()
    }

    /// Thins every subarchive on a shared objective-space grid when the total
    /// size exceeds the target.
    ///
    /// The grid starts at `1 / target` normalized units per cell, doubles until
    /// the thinned size fits, then tries one step back towards the previous
    /// width. Every non-empty subarchive keeps at least one elite.
    pub fn discretize_if_needed(&mut self) {
        if self.total_size() <= self.target_size || self.target_size == 0 {
            return;
        }
        let m = match self.elites().next() {
            Some(s) => s.f.len(),
            None => return,
        };
        let mut lo = vec![f64::INFINITY; m];
        let mut hi = vec![f64::NEG_INFINITY; m];
        for s in self.elites() {
            for (j, v) in s.f.iter().enumerate() {
                lo[j] = lo[j].min(*v);
                hi[j] = hi[j].max(*v);
            }
        }
        let range: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| if h > l { h - l } else { 1.0 }).collect();
        let normalized = |s: &Solution| -> Vec<f64> {
            s.f.iter().enumerate().map(|(j, v)| (v - lo[j]) / range[j]).collect()
        };
        let norm: Vec<Vec<Vec<f64>>> = self
            .subarchives
            .iter()
            .map(|sa| sa.elites.iter().map(normalized).collect())
            .collect();

        let target = self.target_size;
        let mut width = 1.0 / target as f64;
        let mut kept = representatives(&norm, width);
        let mut previous = None;
        while count(&kept) > target && width < 2.0 {
            previous = Some(width);
            width *= 2.0;
            kept = representatives(&norm, width);
        }
        if let Some(prev) = previous {
            let mid = 0.5 * (prev + width);
            let refined = representatives(&norm, mid);
            if count(&refined) <= target {
                width = mid;
                kept = refined;
            }
        }
        for (sa, keep) in self.subarchives.iter_mut().zip(kept) {
            let mut keep = keep;
            keep.sort_unstable();
            let old = std::mem::take(&mut sa.elites);
            sa.elites = keep.into_iter().map(|i| old[i].clone()).collect();
        }
        self.grid_resolution = Some(width);
    }

    /// Writes `subarchive_id,x...,f...`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        if let Some(s) = self.elites().next() {
            let mut header = vec!["subarchive_id".to_string()];
            header.extend((0..s.x.len()).map(|i| format!("x{i}")));
            header.extend((0..s.f.len()).map(|i| format!("f{i}")));
            w.write_record(&header)?;
        }
        for sa in &self.subarchives {
            for s in &sa.elites {
                let mut row = vec![sa.id.to_string()];
                row.extend(s.x.iter().chain(&s.f).map(|v| fmt17(*v)));
                w.write_record(&row)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn count(kept: &[Vec<usize>]) -> usize {
    kept.iter().map(Vec::len).sum()
}

/// Per subarchive, the indices of one representative per occupied cell: the
/// member with the smallest sum of normalized objectives.
fn representatives(norm: &[Vec<Vec<f64>>], width: f64) -> Vec<Vec<usize>> {
    norm.iter()
        .map(|members| {
            let mut cells: HashMap<Vec<i64>, usize> = HashMap::new();
            for (i, f) in members.iter().enumerate() {
                let cell: Vec<i64> = f.iter().map(|v| (v / width).floor() as i64).collect();
                let sum: f64 = f.iter().sum();
                cells
                    .entry(cell)
                    .and_modify(|best| {
                        let best_sum: f64 = members[*best].iter().sum();
                        if sum < best_sum {
                            *best = i;
                        }
                    })
                    .or_insert(i);
            }
            cells.into_values().collect()
        })
        .collect()
}

/// One subarchive per cluster holding that cluster's non-dominated members,
/// thinned to the target size.
pub fn construct_local_archives(clusters: &[Cluster], target_size: usize) -> ElitistArchive {
    let mut archive = ElitistArchive::new(target_size);
    for (id, c) in clusters.iter().enumerate() {
        let mut sa = Subarchive::new(id, c.id);
        sa.elites = nondominated_filter(&c.members);
        dedup_decisions(&mut sa.elites);
        archive.subarchives.push(sa);
    }
    archive.discretize_if_needed();
    archive
}

fn dedup_decisions(elites: &mut Vec<Solution>) {
    let mut seen = std::collections::HashSet::new();
    elites.retain(|s| seen.insert(s.x.iter().map(|v| v.to_bits()).collect::<Vec<u64>>()));
}

/// Greedy max-min subset selection.
///
/// Starts from the member farthest from the set's mean and repeatedly adds the
/// member with the largest distance to its nearest selected member. Ties go to
/// the lowest index. Returns indices into `set` in selection order.
pub fn greedy_scattered_indices(set: &[Solution], target: usize, space: Space) -> Vec<usize> {
    let n = set.len();
    if n <= target {
        return (0..n).collect();
    }
    if target == 0 {
        return Vec::new();
    }
    let dim = space.coords(&set[0]).len();
    let mean = mean_vector(set.iter().map(|s| space.coords(s)), dim);
    let first = argmax((0..n).map(|i| squared_euclidean(space.coords(&set[i]), &mean)));
    let mut selected = vec![first];
    let mut taken = vec![false; n];
    taken[first] = true;
    let mut nearest: Vec<f64> = (0..n)
        .map(|i| squared_euclidean(space.coords(&set[i]), space.coords(&set[first])))
        .collect();
    while selected.len() < target {
        let next = argmax((0..n).map(|i| if taken[i] { f64::NEG_INFINITY } else { nearest[i] }));
        taken[next] = true;
        selected.push(next);
        let c = space.coords(&set[next]);
        for i in 0..n {
            let d = squared_euclidean(space.coords(&set[i]), c);
            if d < nearest[i] {
                nearest[i] = d;
            }
        }
    }
    selected
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Greedy scattered subset of `set` with `min(target, |set|)` members.
pub fn greedy_scattered_subset_selection(set: &[Solution], target: usize, space: Space) -> Vec<Solution> {
    greedy_scattered_indices(set, target, space)
        .into_iter()
        .map(|i| set[i].clone())
        .collect()
}

/// Approximation set of at most `size` solutions: every subarchive with at
/// least one globally non-dominated member, reduced by greedy scattered
/// subset selection in `space` if still too large.
pub fn postprocess_approximation_set(archive: &ElitistArchive, size: usize, space: Space) -> Vec<Solution> {
    let all = archive.all_elites();
    if all.is_empty() {
        return Vec::new();
    }
    let fs: Vec<&[f64]> = all.iter().map(|s| s.f.as_slice()).collect();
    let global: std::collections::HashSet<usize> = nondominated_indices(&fs).into_iter().collect();
    let mut union = Vec::new();
    let mut offset = 0;
    for sa in &archive.subarchives {
        let range = offset..offset + sa.len();
        if range.clone().any(|i| global.contains(&i)) {
            union.extend(sa.elites.iter().cloned());
        }
        offset = range.end;
    }
    greedy_scattered_subset_selection(&union, size, space)
}

/// Writes `x...,f...` for an approximation set.
pub fn write_solutions_csv<W: Write>(solutions: &[Solution], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if let Some(s) = solutions.first() {
        let mut header: Vec<String> = (0..s.x.len()).map(|i| format!("x{i}")).collect();
        header.extend((0..s.f.len()).map(|i| format!("f{i}")));
        w.write_record(&header)?;
    }
    for s in solutions {
        w.write_record(s.x.iter().chain(&s.f).map(|v| fmt17(*v)))?;
    }
    w.flush()?;
    Ok(())
}
