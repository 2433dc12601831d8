//! Budgeted objective evaluation.

use crate::problems::Problem;
use crate::{Error, Result, Solution};

/// Count of objective evaluations against an optional budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvaluationCounter {
    used: u64,
    budget: Option<u64>,
}

impl EvaluationCounter {
    pub fn new(budget: Option<u64>) -> Self {
        Self { used: 0, budget }
    }

    pub fn unlimited() -> Self {
        Self::new(None)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn budget(&self) -> Option<u64> {
        self.budget
    }

    pub fn remaining(&self) -> Option<u64> {
        self.budget.map(|b| b.saturating_sub(self.used))
    }

    pub fn is_exhausted(&self) -> bool {
        self.budget.is_some_and(|b| self.used >= b)
    }

    /// Reserves one evaluation, failing if the budget is spent.
    pub fn charge(&mut self) -> Result<()> {
        if let Some(budget) = self.budget {
            if self.used >= budget {
                return Err(Error::BudgetExhausted { budget });
            }
        }
        self.used += 1;
        Ok(())
    }
}

/// A problem bound to the evaluation counter of one run.
pub struct Evaluator<'a> {
    problem: &'a dyn Problem,
    counter: EvaluationCounter,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a dyn Problem, budget: Option<u64>) -> Self {
        Self { problem, counter: EvaluationCounter::new(budget) }
    }

    pub fn problem(&self) -> &'a dyn Problem {
        self.problem
    }

    pub fn counter(&self) -> &EvaluationCounter {
        &self.counter
    }

    pub fn used(&self) -> u64 {
        self.counter.used()
    }

    pub fn is_exhausted(&self) -> bool {
        self.counter.is_exhausted()
    }

    /// Evaluates `x`, counting exactly one evaluation.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.problem.descriptor().n;
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: x.len() });
        }
        self.counter.charge()?;
        Ok(self.problem.evaluate(x))
    }

    pub fn evaluate_solution(&mut self, x: Vec<f64>) -> Result<Solution> {
        let f = self.evaluate(&x)?;
        Ok(Solution::new(x, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_respects_budget() {
        let mut c = EvaluationCounter::new(Some(2));
        assert!(c.charge().is_ok());
        assert!(c.charge().is_ok());
        assert!(matches!(c.charge(), Err(Error::BudgetExhausted { budget: 2 })));
        assert_eq!(c.used(), 2);
        assert!(c.is_exhausted());
        assert_eq!(c.remaining(), Some(0));
    }

    #[test]
    fn unlimited_never_exhausts() {
        let mut c = EvaluationCounter::unlimited();
        for _ in 0..1000 {
            c.charge().unwrap();
        }
        assert!(!c.is_exhausted());
        assert_eq!(c.remaining(), None);
    }
}
