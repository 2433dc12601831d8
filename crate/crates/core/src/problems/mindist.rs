use super::{linspace, split_evenly, Problem, ProblemDescriptor, ReferenceSet};
use crate::solution::euclidean;
use crate::{Error, Result};

/// Minimum-distance problem: objective `i` is the distance to the nearer of
/// two centers.
#[derive(Debug, Clone)]
pub struct MinDist {
    desc: ProblemDescriptor,
    /// `centers[i]` holds the two centers of objective `i`.
    centers: Vec<[Vec<f64>; 2]>,
}

impl MinDist {
    /// `m = 2` needs `n >= 2`, `m = 3` needs `n >= 3`. Centers are zero-padded.
    pub fn new(m: usize, n: usize) -> Result<Self> {
        let raw: Vec<[&[f64]; 2]> = match m {
            2 => vec![[&[-2.0, -1.0], &[2.0, 1.0]], [&[-2.0, 1.0], &[2.0, -1.0]]],
            3 => vec![
                [&[-4.0, -4.0, 0.0], &[2.0, 2.0, 0.0]],
                [&[-2.0, -4.0, 0.0], &[4.0, 2.0, 0.0]],
                [&[-3.0, -2.0, 1.0], &[3.0, 4.0, 1.0]],
            ],
            _ => return Err(Error::InvalidConfig(format!("MinDist supports m in {{2,3}}, got {m}"))),
        };
        if n < m {
            return Err(Error::InvalidConfig(format!("MinDist with m={m} needs n >= {m}, got {n}")));
        }
        let pad = |c: &[f64]| {
            let mut v = c.to_vec();
            v.resize(n, 0.0);
            v
        };
        let centers = raw.iter().map(|[a, b]| [pad(a), pad(b)]).collect();
        let name = if n == m { format!("mindist{m}") } else { format!("mindist{m}-n{n}") };
        Ok(Self { desc: ProblemDescriptor::cube(name, m, n, -4.0, 4.0), centers })
    }

    pub fn centers(&self) -> &[[Vec<f64>; 2]] {
        &self.centers
    }

    /// Index of the nearer center for every objective.
    pub fn niche_of(&self, x: &[f64]) -> Vec<usize> {
        self.centers
            .iter()
            .map(|[a, b]| usize::from(euclidean(x, b) < euclidean(x, a)))
            .collect()
    }

    /// Vertices of global Pareto set `mode`: the simplex spanned by the
    /// `mode`-th center of every objective.
    pub fn mode_vertices(&self, mode: usize) -> Vec<&[f64]> {
        self.centers.iter().map(|c| c[mode].as_slice()).collect()
    }
}

impl Problem for MinDist {
    fn descriptor(&self) -> &ProblemDescriptor {
        &self.desc
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.centers
            .iter()
            .map(|[a, b]| euclidean(x, a).min(euclidean(x, b)))
            .collect()
    }

    fn reference_set(&self, count: usize) -> Result<ReferenceSet> {
        let mut xs = Vec::with_capacity(count);
        let mut labels = Vec::with_capacity(count);
        for (mode, share) in split_evenly(count, 2).into_iter().enumerate() {
            let verts = self.mode_vertices(mode);
            let pts = simplex_points(&verts, share);
            labels.extend(std::iter::repeat_n(mode, pts.len()));
            xs.extend(pts);
        }
        Ok(ReferenceSet::from_decisions(self, xs, labels))
    }
}

/// `count` points spread over the simplex spanned by `verts` (2 or 3 vertices).
fn simplex_points(verts: &[&[f64]], count: usize) -> Vec<Vec<f64>> {
    let n = verts[0].len();
    let combine = |w: &[f64]| -> Vec<f64> {
        (0..n).map(|d| verts.iter().zip(w).map(|(v, wi)| v[d] * wi).sum()).collect()
    };
    match verts.len() {
        2 => linspace(0.0, 1.0, count).map(|t| combine(&[1.0 - t, t])).collect(),
        3 => {
            // smallest triangular lattice with at least `count` nodes, thinned evenly
            let mut rows = 1usize;
            while rows * (rows + 1) / 2 < count {
                rows += 1;
            }
            let mut lattice = Vec::with_capacity(rows * (rows + 1) / 2);
            let steps = (rows - 1).max(1) as f64;
            for i in 0..rows {
                for j in 0..rows - i {
                    let a = i as f64 / steps;
                    let b = j as f64 / steps;
                    lattice.push(combine(&[1.0 - a - b, a, b]));
                }
            }
            let total = lattice.len();
            (0..count).map(|k| lattice[k * total / count].clone()).collect()
        }
        k => unreachable!("simplex with {k} vertices"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::reference::assert_mutually_nondominated;
    use crate::solution::{dominates, nondominated_indices};

    #[test]
    fn evaluate_examples() {
        let p = MinDist::new(2, 2).unwrap();
        assert_eq!(p.evaluate(&[-2.0, -1.0])[0], 0.0);
        let f = p.evaluate(&[0.0, 0.0]);
        assert!((f[0] - 5f64.sqrt()).abs() < 1e-15);
        assert!((f[1] - 5f64.sqrt()).abs() < 1e-15);
        let p3 = MinDist::new(3, 3).unwrap();
        assert_eq!(p3.evaluate(&[2.0, 2.0, 0.0])[0], 0.0);
        assert!(MinDist::new(3, 2).is_err());
    }

    #[test]
    fn sum_of_objectives_bounded_below_by_two() {
        // f0 + f1 >= 2 everywhere, with equality exactly on the two segments
        let p = MinDist::new(2, 2).unwrap();
        let k = 401;
        for i in 0..k {
            for j in 0..k {
                let x = [-4.0 + 8.0 * i as f64 / (k - 1) as f64, -4.0 + 8.0 * j as f64 / (k - 1) as f64];
                let f = p.evaluate(&x);
                let s = f[0] + f[1];
                assert!(s >= 2.0 - 1e-12);
                let on_set = (x[0].abs() - 2.0).abs() < 1e-12 && x[1].abs() <= 1.0 + 1e-12;
                assert_eq!((s - 2.0).abs() < 1e-9, on_set, "x={x:?} s={s}");
            }
        }
    }

    #[test]
    fn reference_set_lies_on_segments_and_is_nondominated() {
        let p = MinDist::new(2, 2).unwrap();
        let r = p.reference_set(200).unwrap();
        assert_eq!(r.len(), 200);
        assert_eq!(r.mode_count(), 2);
        for (s, &mode) in r.solutions().iter().zip(r.labels()) {
            let x1 = if mode == 0 { -2.0 } else { 2.0 };
            assert!((s.x[0] - x1).abs() < 1e-12 && s.x[1].abs() <= 1.0 + 1e-12);
        }
        // endpoints and interior points are not dominated by a dense grid sweep
        let grid: Vec<Vec<f64>> = (0..161)
            .flat_map(|i| (0..161).map(move |j| vec![-4.0 + i as f64 * 0.05, -4.0 + j as f64 * 0.05]))
            .map(|x| p.evaluate(&x))
            .collect();
        for s in r.solutions() {
            assert!(grid.iter().all(|g| !dominates(g, &s.f)));
        }
        let fs: Vec<&[f64]> = r.solutions().iter().map(|s| s.f.as_slice()).collect();
        assert_eq!(nondominated_indices(&fs).len(), r.len());
    }

    #[test]
    fn three_objective_reference_is_two_triangles() {
        let p = MinDist::new(3, 3).unwrap();
        let r = p.reference_set(1000).unwrap();
        assert_eq!(r.len(), 1000);
        assert_eq!(r.mode_count(), 2);
        assert_mutually_nondominated(&r);
        // each sample sits in the niche of its own triangle
        for (s, &mode) in r.solutions().iter().zip(r.labels()) {
            assert!(p.niche_of(&s.x).iter().all(|&c| c == mode));
        }
    }
}
