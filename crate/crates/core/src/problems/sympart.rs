//! SYM-PART problems: nine Pareto segments on a 3x3 tiling of `[-20, 20]^2`.
//!
//! With `a = 1`, `b = 10`, `c = 8` a point `u` (after the variant's
//! coordinate transform) is mapped into its tile
//!
//! ```text
//! t1 = sgn(u1) * min(ceil((|u1| - a - c/2) / (2a + c)), 1)
//! t2 = sgn(u2) * min(ceil((|u2| - b/2) / b), 1)
//! p  = (u1 - t1 (c + 2a), u2 - t2 b)
//! f  = ((p1 + a)^2 + p2^2, (p1 - a)^2 + p2^2)
//! ```
//!
//! so every tile holds the Pareto segment `p1 in [-a, a], p2 = 0`.
//!
//! * `Simple`: `u = x`.
//! * `Rotated`: `u = R(pi/4) x`.
//! * `Distorted`: `u = R(pi/4) D(x)` with `D(x) = (x1, x2 + 0.5 sin(pi x1 / 5))`,
//!   which bends the segments into curves.

use super::{linspace, split_evenly, Problem, ProblemDescriptor, ReferenceSet};
use crate::Result;

const A: f64 = 1.0;
const B: f64 = 10.0;
const C: f64 = 8.0;
const OMEGA: f64 = std::f64::consts::FRAC_PI_4;
const BEND_AMPLITUDE: f64 = 0.5;
const BEND_PERIOD: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymPartVariant {
    Simple,
    Rotated,
    Distorted,
}

#[derive(Debug, Clone)]
pub struct SymPart {
    variant: SymPartVariant,
    desc: ProblemDescriptor,
}

impl SymPart {
    pub fn new(variant: SymPartVariant) -> Self {
        let name = match variant {
            SymPartVariant::Simple => "sym-part1",
            SymPartVariant::Rotated => "sym-part2",
            SymPartVariant::Distorted => "sym-part3",
        };
        Self { variant, desc: ProblemDescriptor::cube(name, 2, 2, -20.0, 20.0) }
    }

    pub fn variant(&self) -> SymPartVariant {
        self.variant
    }

    fn bend(x1: f64) -> f64 {
        BEND_AMPLITUDE * (std::f64::consts::PI * x1 / (BEND_PERIOD / 2.0)).sin()
    }

    fn forward(&self, x: &[f64]) -> [f64; 2] {
        let (s, c) = OMEGA.sin_cos();
        match self.variant {
            SymPartVariant::Simple => [x[0], x[1]],
            SymPartVariant::Rotated => [c * x[0] - s * x[1], s * x[0] + c * x[1]],
            SymPartVariant::Distorted => {
                let y = [x[0], x[1] + Self::bend(x[0])];
                [c * y[0] - s * y[1], s * y[0] + c * y[1]]
            }
        }
    }

    fn inverse(&self, u: [f64; 2]) -> Vec<f64> {
        let (s, c) = OMEGA.sin_cos();
        match self.variant {
            SymPartVariant::Simple => u.to_vec(),
            SymPartVariant::Rotated => vec![c * u[0] + s * u[1], -s * u[0] + c * u[1]],
            SymPartVariant::Distorted => {
                let y = [c * u[0] + s * u[1], -s * u[0] + c * u[1]];
                vec![y[0], y[1] - Self::bend(y[0])]
            }
        }
    }

    /// Tile index of `x` in `{-1, 0, 1}^2`.
    pub fn tile(&self, x: &[f64]) -> (i32, i32) {
        let u = self.forward(x);
        let (t1, t2) = tile_of(u);
        (t1 as i32, t2 as i32)
    }
}

fn tile_of(u: [f64; 2]) -> (f64, f64) {
    let t1 = u[0].signum() * ((u[0].abs() - A - C / 2.0) / (2.0 * A + C)).ceil().min(1.0);
    let t2 = u[1].signum() * ((u[1].abs() - B / 2.0) / B).ceil().min(1.0);
    // ceil of a small negative number is -0.0; normalise
    (t1 + 0.0, t2 + 0.0)
}

impl Problem for SymPart {
    fn descriptor(&self) -> &ProblemDescriptor {
        &self.desc
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        let u = self.forward(x);
        let (t1, t2) = tile_of(u);
        let p1 = u[0] - t1 * (C + 2.0 * A);
        let p2 = u[1] - t2 * B;
        vec![(p1 + A).powi(2) + p2 * p2, (p1 - A).powi(2) + p2 * p2]
    }

    fn reference_set(&self, count: usize) -> Result<ReferenceSet> {
        let mut xs = Vec::with_capacity(count);
        let mut labels = Vec::with_capacity(count);
        let shares = split_evenly(count, 9);
        let mut mode = 0;
        for t2 in [-1.0, 0.0, 1.0] {
            for t1 in [-1.0, 0.0, 1.0] {
                for p1 in linspace(-A, A, shares[mode]) {
                    xs.push(self.inverse([p1 + t1 * (C + 2.0 * A), t2 * B]));
                    labels.push(mode);
                }
                mode += 1;
            }
        }
        Ok(ReferenceSet::from_decisions(self, xs, labels))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::reference::assert_mutually_nondominated;

    #[test]
    fn segments_are_optimal() {
        for v in [SymPartVariant::Simple, SymPartVariant::Rotated, SymPartVariant::Distorted] {
            let p = SymPart::new(v);
            let r = p.reference_set(900).unwrap();
            assert_eq!(r.mode_count(), 9);
            for s in r.solutions() {
                assert!(p.descriptor().contains(&s.x), "{:?} outside box", s.x);
                // on the front sqrt(f1) + sqrt(f2) = 2a
                assert!((s.f[0].sqrt() + s.f[1].sqrt() - 2.0).abs() < 1e-9, "{:?}", s.f);
            }
            assert_mutually_nondominated(&r);
        }
    }

    #[test]
    fn tiles_cover_grid() {
        let p = SymPart::new(SymPartVariant::Simple);
        assert_eq!(p.tile(&[0.0, 0.0]), (0, 0));
        assert_eq!(p.tile(&[10.0, -10.0]), (1, -1));
        assert_eq!(p.tile(&[-19.0, 19.0]), (-1, 1));
        assert_eq!(p.evaluate(&[9.0, 10.0]), vec![0.0, 4.0]);
    }

    #[test]
    fn transforms_invert() {
        for v in [SymPartVariant::Rotated, SymPartVariant::Distorted] {
            let p = SymPart::new(v);
            for x in [[1.0, 2.0], [-13.0, 4.5], [7.0, -19.0]] {
                let back = p.inverse(p.forward(&x));
                assert!((back[0] - x[0]).abs() < 1e-12 && (back[1] - x[1]).abs() < 1e-12);
            }
        }
    }
}
