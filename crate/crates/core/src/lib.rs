//! Multi-objective hill-valley clustering and the MO-HillVallEA optimizer.
//!
//! The crate is organised bottom-up:
//!
//! * [`solution`], [`evaluation`], [`rng`]: shared domain types, Pareto
//!   dominance, budgeted evaluation and seeded randomness.
//! * [`problems`]: the benchmark suite with analytic reference Pareto sets.
//! * [`hillvalley`]: the hill-valley test and (multi-objective) hill-valley
//!   clustering.
//! * [`gaussian`]: the Gaussian core optimizer run inside every cluster.
//! * [`archive`]: niche-local elitist subarchives, discretization and
//!   greedy scattered subset selection.
//! * [`optimizer`]: the generational loop, cluster linking and the
//!   multi-start scheme.
//! * [`metrics`]: IGD, IGDX, mode ratio and achievable limits.
//! * [`bench`]: experiment runner, significance testing and CSV exports
//!   used by the `mohv` binary.

pub mod archive;
pub mod bench;
pub mod error;
pub mod evaluation;
pub mod gaussian;
pub mod hillvalley;
pub mod metrics;
pub mod optimizer;
pub mod problems;
pub mod rng;
pub mod solution;

pub use error::{Error, Result};
pub use evaluation::{EvaluationCounter, Evaluator};
pub use rng::RandomSource;
pub use solution::{dominates, nondominated_filter, Origin, Solution};
