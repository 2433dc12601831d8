//! SS-UF problems with two symmetric or shifted Pareto sets.
//!
//! SSUF1 on `[1, 3] x [-1, 1]`:
//!
//! ```text
//! f1 = |x1 - 2|
//! f2 = 1 - sqrt(|x1 - 2|) + 2 (x2 - sin(6 pi |x1 - 2| + pi))^2
//! ```
//!
//! Pareto sets `x2 = sin(6 pi |x1 - 2| + pi)` left and right of `x1 = 2`.
//!
//! SSUF3 on `[0, 1] x [0, 2]`, with `y = x2 - sqrt(x1)` for `x2 <= 1` and
//! `y = x2 - 1 - sqrt(x1)` otherwise:
//!
//! ```text
//! f1 = x1
//! f2 = 1 - sqrt(x1) + 2 (4 y^2 - 2 cos(20 pi y / sqrt(2)) + 2)
//! ```
//!
//! Pareto sets `x2 = sqrt(x1)` and `x2 = sqrt(x1) + 1`; the cosine term adds
//! many local Pareto sets.

use std::f64::consts::{PI, SQRT_2};

use super::{linspace, split_evenly, Problem, ProblemDescriptor, ReferenceSet};
use crate::Result;

#[derive(Debug, Clone)]
pub struct Ssuf1 {
    desc: ProblemDescriptor,
}

impl Ssuf1 {
    pub fn new() -> Self {
        Self { desc: ProblemDescriptor::new("ssuf1", 2, vec![1.0, -1.0], vec![3.0, 1.0]) }
    }
}

impl Default for Ssuf1 {
    fn default() -> Self {
        Self::new()
    }
}

impl Problem for Ssuf1 {
    fn descriptor(&self) -> &ProblemDescriptor {
        &self.desc
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let t = (x[0] - 2.0).abs();
        let g = x[1] - (6.0 * PI * t + PI).sin();
        vec![t, 1.0 - t.sqrt() + 2.0 * g * g]
    }

    fn reference_set(&self, count: usize) -> Result<ReferenceSet> {
        let mut xs = Vec::with_capacity(count);
        let mut labels = Vec::with_capacity(count);
        for (mode, share) in split_evenly(count, 2).into_iter().enumerate() {
            let side = if mode == 0 { -1.0 } else { 1.0 };
            for t in linspace(0.0, 1.0, share) {
                xs.push(vec![2.0 + side * t, (6.0 * PI * t + PI).sin()]);
                labels.push(mode);
            }
        }
        Ok(ReferenceSet::from_decisions(self, xs, labels))
    }
}

#[derive(Debug, Clone)]
pub struct Ssuf3 {
    desc: ProblemDescriptor,
}

impl Ssuf3 {
    pub fn new() -> Self {
        Self { desc: ProblemDescriptor::new("ssuf3", 2, vec![0.0, 0.0], vec![1.0, 2.0]) }
    }
}

impl Default for Ssuf3 {
    fn default() -> Self {
        Self::new()
    }
}

impl Problem for Ssuf3 {
    fn descriptor(&self) -> &ProblemDescriptor {
        &self.desc
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let r = x[0].max(0.0).sqrt();
        let y = if x[1] <= 1.0 { x[1] - r } else { x[1] - 1.0 - r };
        let g = 4.0 * y * y - 2.0 * (20.0 * PI * y / SQRT_2).cos() + 2.0;
        vec![x[0], 1.0 - r + 2.0 * g]
    }

    /// Mode labels come from hill-valley clustering of the sampled set.
    fn reference_set(&self, count: usize) -> Result<ReferenceSet> {
        let mut xs = Vec::with_capacity(count);
        for (shift, share) in split_evenly(count, 2).into_iter().enumerate() {
            // x2 = 1 belongs to the lower branch, so the upper set starts just past x1 = 0
            let start = if shift == 0 { 0.0 } else { 1.0 / share as f64 };
            for t in linspace(start, 1.0, share) {
                xs.push(vec![t, t.sqrt() + shift as f64]);
            }
        }
        let placeholder = vec![0; xs.len()];
        let unlabeled = ReferenceSet::from_decisions(self, xs, placeholder);
        Ok(crate::hillvalley::label_modes(self, unlabeled.solutions()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solution::{dominates, nondominated_indices};

    #[test]
    fn ssuf1_pareto_sets() {
        let p = Ssuf1::new();
        let r = p.reference_set(500).unwrap();
        assert_eq!(r.mode_count(), 2);
        for s in r.solutions() {
            assert!(p.descriptor().contains(&s.x));
            assert!((s.f[1] - (1.0 - s.f[0].sqrt())).abs() < 1e-12);
        }
        let fs: Vec<&[f64]> = r.solutions().iter().map(|s| s.f.as_slice()).collect();
        assert_eq!(nondominated_indices(&fs).len(), r.len());
    }

    #[test]
    fn ssuf3_pareto_sets() {
        let p = Ssuf3::new();
        let r = p.reference_set(1000).unwrap();
        assert_eq!(r.mode_count(), 2);
        for s in r.solutions() {
            assert!(p.descriptor().contains(&s.x));
            assert!((s.f[1] - (1.0 - s.f[0].sqrt())).abs() < 1e-9);
        }
        // no grid point beats the front
        for i in 0..=100 {
            for j in 0..=200 {
                let f = p.evaluate(&[i as f64 / 100.0, j as f64 / 100.0]);
                assert!(r.solutions().iter().all(|s| !dominates(&f, &s.f)));
            }
        }
    }
}
