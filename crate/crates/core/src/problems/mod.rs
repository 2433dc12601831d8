//! Benchmark problems, box handling and reference Pareto sets.

mod mindist;
mod reference;
mod ssuf;
mod sympart;
mod two_on_one;

use rand::Rng;

pub use mindist::MinDist;
pub use reference::{fmt17, ReferenceSet};
pub use ssuf::{Ssuf1, Ssuf3};
pub use sympart::{SymPart, SymPartVariant};
pub use two_on_one::TwoOnOne;

use crate::{Evaluator, RandomSource, Result, Solution};

/// Name, dimensions and box bounds of a problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDescriptor {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ProblemDescriptor {
    pub fn new(name: impl Into<String>, m: usize, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        assert!(lower.iter().zip(&upper).all(|(l, u)| l < u), "empty box");
        Self { name: name.into(), n: lower.len(), m, lower, upper }
    }

    pub fn cube(name: impl Into<String>, m: usize, n: usize, lo: f64, hi: f64) -> Self {
        Self::new(name, m, vec![lo; n], vec![hi; n])
    }

    /// Largest coordinate range of the box.
    pub fn max_width(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| u - l)
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.n
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *v >= *l && *v <= *u)
    }
}

/// A box-constrained multi-objective minimization problem.
///
/// `evaluate` is pure; budget accounting happens in [`Evaluator`].
pub trait Problem: Send + Sync {
    fn descriptor(&self) -> &ProblemDescriptor;

    fn evaluate(&self, x: &[f64]) -> Vec<f64>;

    /// Samples `count` points of the global Pareto set(s), labelled by mode.
    fn reference_set(&self, count: usize) -> Result<ReferenceSet> {
        let _ = count;
        Err(crate::Error::InvalidConfig(format!(
            "problem `{}` has no reference Pareto set",
            self.descriptor().name
        )))
    }
}

/// Clamps every coordinate into the box. In-bounds vectors are unchanged.
pub fn repair_to_bounds(desc: &ProblemDescriptor, x: &[f64]) -> Vec<f64> {
    let mut y = x.to_vec();
    repair_in_place(desc, &mut y);
    y
}

pub fn repair_in_place(desc: &ProblemDescriptor, x: &mut [f64]) {
    for ((v, l), u) in x.iter_mut().zip(&desc.lower).zip(&desc.upper) {
        *v = v.clamp(*l, *u);
    }
}

/// Draws `count` i.i.d. uniform points from the box and evaluates them.
pub fn sample_uniform(
    evaluator: &mut Evaluator<'_>,
    count: usize,
    rng: &mut RandomSource,
) -> Result<Vec<Solution>> {
    let desc = evaluator.problem().descriptor().clone();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let x: Vec<f64> = desc
            .lower
            .iter()
            .zip(&desc.upper)
            .map(|(l, u)| rng.random_range(*l..*u))
            .collect();
        out.push(evaluator.evaluate_solution(x)?);
    }
    Ok(out)
}

/// The shipped benchmark suite.
#[derive(Debug, Clone)]
pub enum Benchmark {
    MinDist(MinDist),
    TwoOnOne(TwoOnOne),
    SymPart(SymPart),
    Ssuf1(Ssuf1),
    Ssuf3(Ssuf3),
}

impl Benchmark {
    /// Parses a problem name.
    ///
    /// Accepted names: `mindist2`, `mindist3` (optionally suffixed with
    /// `-n<dim>`, e.g. `mindist2-n10`), `two-on-one`, `sym-part1`,
    /// `sym-part2`, `sym-part3`, `ssuf1`, `ssuf3`.
    pub fn from_name(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase().replace('_', "-");
        let (base, dim) = match lower.rsplit_once("-n") {
            Some((b, d)) if b.starts_with("mindist") => {
                let n = d
                    .parse::<usize>()
                    .map_err(|_| crate::Error::UnknownProblem(name.to_string()))?;
                (b.to_string(), Some(n))
            }
            _ => (lower.clone(), None),
        };
        let p = match base.as_str() {
            "mindist2" | "mindist-m2" => Benchmark::MinDist(MinDist::new(2, dim.unwrap_or(2))?),
            "mindist3" | "mindist-m3" => Benchmark::MinDist(MinDist::new(3, dim.unwrap_or(3))?),
            "two-on-one" | "twoonone" => Benchmark::TwoOnOne(TwoOnOne::new()),
            "sym-part1" | "sympart1" => Benchmark::SymPart(SymPart::new(SymPartVariant::Simple)),
            "sym-part2" | "sympart2" => Benchmark::SymPart(SymPart::new(SymPartVariant::Rotated)),
            "sym-part3" | "sympart3" => Benchmark::SymPart(SymPart::new(SymPartVariant::Distorted)),
            "ssuf1" | "ss-uf1" => Benchmark::Ssuf1(Ssuf1::new()),
            "ssuf3" | "ss-uf3" => Benchmark::Ssuf3(Ssuf3::new()),
            _ => return Err(crate::Error::UnknownProblem(name.to_string())),
        };
        Ok(p)
    }

    pub fn all_names() -> &'static [&'static str] {
        &[
            "mindist2", "mindist3", "two-on-one", "sym-part1", "sym-part2", "sym-part3", "ssuf1",
            "ssuf3",
        ]
    }

    fn inner(&self) -> &dyn Problem {
        match self {
            Benchmark::MinDist(p) => p,
            Benchmark::TwoOnOne(p) => p,
            Benchmark::SymPart(p) => p,
            Benchmark::Ssuf1(p) => p,
            Benchmark::Ssuf3(p) => p,
        }
    }
}

impl Problem for Benchmark {
    fn descriptor(&self) -> &ProblemDescriptor {
        self.inner().descriptor()
    }

    fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.inner().evaluate(x)
    }

    fn reference_set(&self, count: usize) -> Result<ReferenceSet> {
        self.inner().reference_set(count)
    }
}

/// Splits `count` into `parts` near-equal shares, larger shares first.
pub(crate) fn split_evenly(count: usize, parts: usize) -> Vec<usize> {
    (0..parts)
        .map(|i| count / parts + usize::from(i < count % parts))
        .collect()
}

/// `k` evenly spaced values covering `[lo, hi]` inclusive.
pub(crate) fn linspace(lo: f64, hi: f64, k: usize) -> impl Iterator<Item = f64> {
    (0..k).map(move |i| {
        if k == 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * i as f64 / (k - 1) as f64
        }
    })
}
