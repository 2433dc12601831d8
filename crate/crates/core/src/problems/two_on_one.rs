//! Two-On-One on `[-3, 3]^2`:
//!
//! ```text
//! f1 = x1^4 + x2^4 - x1^2 + x2^2 - 10 x1 x2 + 0.25 x1 + 20
//! f2 = (x1 - 1)^2 + x2^2
//! ```
//!
//! The Pareto set has no closed form; the reference set is the non-dominated
//! subset of a dense grid.

use super::{Problem, ProblemDescriptor, ReferenceSet};
use crate::solution::nondominated_indices;
use crate::Result;

/// Grid resolution per axis for the reference approximation.
pub const REFERENCE_GRID: usize = 2001;

#[derive(Debug, Clone)]
pub struct TwoOnOne {
    desc: ProblemDescriptor,
}

impl TwoOnOne {
    pub fn new() -> Self {
        Self { desc: ProblemDescriptor::cube("two-on-one", 2, 2, -3.0, 3.0) }
    }
}

impl Default for TwoOnOne {
    fn default() -> Self {
        Self::new()
    }
}

fn objectives(x1: f64, x2: f64) -> [f64; 2] {
    let f1 = x1.powi(4) + x2.powi(4) - x1 * x1 + x2 * x2 - 10.0 * x1 * x2 + 0.25 * x1 + 20.0;
    let f2 = (x1 - 1.0).powi(2) + x2 * x2;
    [f1, f2]
}

impl Problem for TwoOnOne {
    fn descriptor(&self) -> &ProblemDescriptor {
        &self.desc
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        objectives(x[0], x[1]).to_vec()
    }

    fn reference_set(&self, count: usize) -> Result<ReferenceSet> {
        let g = REFERENCE_GRID;
        let step = 6.0 / (g - 1) as f64;
        let coord = |i: usize| -3.0 + step * i as f64;
        let mut f = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in 0..g {
                f.push(objectives(coord(i), coord(j)));
            }
        }
        let mut front = nondominated_indices(&f);
        front.sort_by(|&a, &b| f[a][1].total_cmp(&f[b][1]).then(a.cmp(&b)));
        let picked: Vec<usize> = if front.len() <= count {
            front
        } else {
            (0..count).map(|k| front[k * front.len() / count]).collect()
        };
        let solutions: Vec<crate::Solution> = picked
            .into_iter()
            .map(|idx| {
                let x = vec![coord(idx / g), coord(idx % g)];
                let fx = self.evaluate(&x);
                crate::Solution::new(x, fx)
            })
            .collect();
        Ok(crate::hillvalley::label_modes(self, &solutions))
    }
}
