use std::io::{Read, Write};
use std::path::Path;

use super::Problem;
use crate::{Error, Result, Solution};

/// Sampled global Pareto-optimal solutions partitioned into modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSet {
    solutions: Vec<Solution>,
    labels: Vec<usize>,
    mode_count: usize,
}

impl ReferenceSet {
    /// Builds a set from evaluated solutions and arbitrary labels; labels are
    /// renumbered to `0..mode_count` in order of first appearance.
    pub fn new(solutions: Vec<Solution>, labels: Vec<usize>) -> Self {
        assert_eq!(solutions.len(), labels.len());
        let mut map = std::collections::HashMap::new();
        let labels: Vec<usize> = labels
            .into_iter()
            .map(|l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Self { solutions, mode_count: map.len(), labels }
    }

    /// Evaluates decision vectors outside of any evaluation budget.
    pub fn from_decisions(problem: &dyn Problem, xs: Vec<Vec<f64>>, labels: Vec<usize>) -> Self {
        let solutions = xs
            .into_iter()
            .map(|x| {
                let f = problem.evaluate(&x);
                Solution::new(x, f)
            })
            .collect();
        Self::new(solutions, labels)
    }

    pub fn solutions(&self) -> &[Solution] {
        &self.solutions
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Members of one mode.
    pub fn mode(&self, mode: usize) -> Vec<Solution> {
        self.solutions
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| l == mode)
            .map(|(s, _)| s.clone())
            .collect()
    }

    /// Writes `x0..x{n-1},f0..f{m-1},mode` with 17 significant digits.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let (n, m) = match self.solutions.first() {
            Some(s) => (s.x.len(), s.f.len()),
            None => (0, 0),
        };
        let mut header: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        header.extend((0..m).map(|i| format!("f{i}")));
        header.push("mode".into());
        w.write_record(&header)?;
        for (s, l) in self.solutions.iter().zip(&self.labels) {
            let mut row: Vec<String> = s.x.iter().chain(&s.f).map(|v| fmt17(*v)).collect();
            row.push(l.to_string());
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R, source: &Path) -> Result<Self> {
        let bad = |reason: String| Error::Csv { path: source.to_path_buf(), reason };
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        let n = header.iter().filter(|h| h.starts_with('x')).count();
        let m = header.iter().filter(|h| h.starts_with('f')).count();
        if header.len() != n + m + 1 || header.get(n + m) != Some("mode") {
            return Err(bad(format!("unexpected header {header:?}")));
        }
        let mut solutions = Vec::new();
        let mut labels = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let vals: Vec<f64> = rec
                .iter()
                .take(n + m)
                .map(|v| v.parse::<f64>().map_err(|e| bad(format!("{v}: {e}"))))
                .collect::<Result<_>>()?;
            let mode = rec
                .get(n + m)
                .ok_or_else(|| bad("missing mode".into()))?
                .parse::<usize>()
                .map_err(|e| bad(e.to_string()))?;
            solutions.push(Solution::new(vals[..n].to_vec(), vals[n..].to_vec()));
            labels.push(mode);
        }
        Ok(Self::new(solutions, labels))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?, path)
    }
}

/// Panics if any member dominates another by more than `1e-9` in every
/// improving objective (congruent modes map to numerically equal fronts).
#[cfg(test)]
pub(crate) fn assert_mutually_nondominated(r: &ReferenceSet) {
    let eps = 1e-9;
    for a in r.solutions() {
        for b in r.solutions() {
            let no_worse = a.f.iter().zip(&b.f).all(|(x, y)| *x <= *y + eps);
            let better = a.f.iter().zip(&b.f).any(|(x, y)| *x < *y - eps);
            assert!(!(no_worse && better), "{:?} dominates {:?}", a.f, b.f);
        }
    }
}

/// A float printed with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}
