//! Gaussian subset models: estimation, factorization, sampling and the
//! adaptive variance multiplier.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

use super::subsets::SubsetKind;
use super::{CoreConfig, CoreVariant};
use crate::problems::repair_in_place;
use crate::solution::mean_vector;
use crate::{Error, Evaluator, RandomSource, Result, Solution};

#[derive(Debug, Clone, PartialEq)]
pub enum Covariance {
    Full(DMatrix<f64>),
    Diagonal(DVector<f64>),
}

impl Covariance {
    pub fn dim(&self) -> usize {
        match self {
            Covariance::Full(c) => c.nrows(),
            Covariance::Diagonal(d) => d.len(),
        }
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        match self {
            Covariance::Full(c) => c.clone(),
            Covariance::Diagonal(d) => DMatrix::from_diagonal(d),
        }
    }

    fn trace(&self) -> f64 {
        match self {
            Covariance::Full(c) => c.trace(),
            Covariance::Diagonal(d) => d.sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetModel {
    pub kind: SubsetKind,
    pub mean: Vec<f64>,
    pub covariance: Covariance,
    pub multiplier: f64,
    /// Objective-space centroid of the subset, used for registration.
    pub objective_mean: Vec<f64>,
    /// Mean displacement since the registered previous model.
    pub mean_shift: Vec<f64>,
}

/// Lower-triangular square root of a covariance.
#[derive(Debug, Clone)]
pub struct Factor {
    pub lower: DMatrix<f64>,
    /// Set when the full factorization failed and the diagonal was used.
    pub diagonal_fallback: bool,
}

/// Maximum-likelihood model of `subset`, blended with `previous` for the
/// incremental variants.
pub fn estimate_model(
    subset: &[Solution],
    kind: SubsetKind,
    variant: CoreVariant,
    previous: Option<&SubsetModel>,
    config: &CoreConfig,
) -> SubsetModel {
    assert!(!subset.is_empty(), "cannot estimate a model from an empty subset");
    let n = subset[0].x.len();
    let m = subset[0].f.len();
    let estimate = mean_vector(subset.iter().map(|s| s.x.as_slice()), n);
    let objective_mean = mean_vector(subset.iter().map(|s| s.f.as_slice()), m);
    let mut cov = DMatrix::zeros(n, n);
    for s in subset {
        let d = DVector::from_iterator(n, s.x.iter().zip(&estimate).map(|(a, b)| a - b));
        cov += &d * d.transpose();
    }
    cov /= subset.len() as f64;

    let mut covariance = if variant.is_univariate() {
        Covariance::Diagonal(cov.diagonal())
    } else {
        Covariance::Full(cov)
    };
    let mut mean = estimate;
    if let (true, Some(prev)) = (variant.is_incremental(), previous) {
        let (a, b) = (config.mean_rate, config.covariance_rate);
        mean = prev.mean.iter().zip(&mean).map(|(p, e)| p + a * (e - p)).collect();
        covariance = match (&prev.covariance, covariance) {
            (Covariance::Full(p), Covariance::Full(e)) => Covariance::Full(p + (e - p) * b),
            (Covariance::Diagonal(p), Covariance::Diagonal(e)) => Covariance::Diagonal(p + (e - p) * b),
            (_, e) => e,
        };
    }
    let mean_shift = match previous {
        Some(p) => mean.iter().zip(&p.mean).map(|(a, b)| a - b).collect(),
        None => vec![0.0; n],
    };
    SubsetModel {
        kind,
        mean,
        covariance,
        multiplier: previous.map_or(1.0, |p| p.multiplier),
        objective_mean,
        mean_shift,
    }
}

impl SubsetModel {
    /// Square root of the covariance, regularized when singular.
    ///
    /// A failed Cholesky factorization is retried with `1e-10 * trace / n`
    /// added to the diagonal, or `(1e-6 * domain_width)^2` when the trace is
    /// zero. If that fails too, the diagonal is used instead.
    pub fn factor(&self, domain_width: f64) -> Factor {
        let n = self.covariance.dim();
        let trace = self.covariance.trace();
        let ridge = if trace > 0.0 && trace.is_finite() {
            1e-10 * trace / n as f64
        } else {
            (1e-6 * domain_width).powi(2)
        };
        let diagonal = |d: &DVector<f64>| {
            DMatrix::from_diagonal(&d.map(|v| if v > 0.0 && v.is_finite() { v.sqrt() } else { ridge.sqrt() }))
        };
        match &self.covariance {
            Covariance::Diagonal(d) => Factor { lower: diagonal(d), diagonal_fallback: false },
            Covariance::Full(c) => {
                if let Some(ch) = c.clone().cholesky() {
                    return Factor { lower: ch.unpack(), diagonal_fallback: false };
                }
                let regularized = c + DMatrix::identity(n, n) * ridge;
                match regularized.cholesky() {
                    Some(ch) => Factor { lower: ch.unpack(), diagonal_fallback: false },
                    None => Factor { lower: diagonal(&c.diagonal()), diagonal_fallback: true },
                }
            }
        }
    }
}

/// Draws `count` solutions from `model`, the first `ams_count` of them
/// shifted along the model's mean displacement. Stops early without error
/// when the evaluation budget runs out.
pub fn sample_offspring(
    model: &SubsetModel,
    factor: &Factor,
    count: usize,
    ams_count: usize,
    config: &CoreConfig,
    evaluator: &mut Evaluator<'_>,
    rng: &mut RandomSource,
) -> Result<Vec<Solution>> {
    let n = model.mean.len();
    let desc = evaluator.problem().descriptor().clone();
    let mean = DVector::from_column_slice(&model.mean);
    let shift = DVector::from_column_slice(&model.mean_shift) * config.ams_factor;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let z = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
        let mut x = &mean + &factor.lower * z * model.multiplier;
        if i < ams_count {
            x += &shift;
        }
        let mut x: Vec<f64> = x.iter().copied().collect();
        repair_in_place(&desc, &mut x);
        match evaluator.evaluate(&x) {
            Ok(f) => out.push(Solution::new(x, f)),
            Err(Error::BudgetExhausted { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Which of `offspring` improve on `subset`.
///
/// For a single-objective subset an improvement beats the subset's best value
/// in that objective. Otherwise it is not dominated by any of `elites`, or by
/// any subset member when there are no elites.
pub fn improvements(kind: SubsetKind, offspring: &[Solution], subset: &[Solution], elites: &[Solution]) -> Vec<bool> {
    match kind {
        SubsetKind::SingleObjective(l) => {
            let best = subset.iter().map(|s| s.f[l]).fold(f64::INFINITY, f64::min);
            offspring.iter().map(|o| o.f[l] < best).collect()
        }
        SubsetKind::DominationRank => {
            let guard = if elites.is_empty() { subset } else { elites };
            offspring.iter().map(|o| !guard.iter().any(|e| e.dominates(o))).collect()
        }
    }
}

/// Next variance multiplier.
///
/// Shrinks by the decrease factor when fewer than the threshold fraction of
/// offspring improved. Otherwise the multiplier is reset to at least 1 and
/// grows when some improving offspring lies more than one standard deviation
/// from the mean of the sampling distribution, else decays towards 1.
pub fn adapt_multiplier(
    model: &SubsetModel,
    factor: &Factor,
    offspring: &[Solution],
    improved: &[bool],
    config: &CoreConfig,
) -> f64 {
    let mut c = model.multiplier;
    let hits = improved.iter().filter(|&&b| b).count();
    let fraction = if offspring.is_empty() { 0.0 } else { hits as f64 / offspring.len() as f64 };
    if fraction < config.improvement_threshold {
        c *= config.decrease_factor;
    } else {
        let far = offspring.iter().zip(improved).filter(|(_, &b)| b).any(|(o, _)| {
            let d = DVector::from_iterator(o.x.len(), o.x.iter().zip(&model.mean).map(|(a, b)| a - b));
            factor
                .lower
                .solve_lower_triangular(&d)
                .is_some_and(|y| y.norm() > model.multiplier)
        });
        c = c.max(1.0);
        if far {
            c /= config.decrease_factor;
        } else {
            c = (c * config.decrease_factor).max(1.0);
        }
    }
    c.clamp(config.multiplier_min, config.multiplier_max)
}
