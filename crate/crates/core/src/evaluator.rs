//! Budgeted objective evaluation and best-so-far traces.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::BudgetExhausted;
use crate::rng::{RandomSource, RngStream};
use crate::space::SearchSpace;

/// A minimization objective over a box.
///
/// `evaluate` receives a random source for objectives with observation noise;
/// noiseless objectives ignore it.
pub trait Objective: Sync {
    fn space(&self) -> &SearchSpace;

    fn evaluate(&self, x: &[f64], rng: &mut dyn RandomSource) -> f64;
}

/// Adapts a plain closure to [`Objective`].
pub struct FnObjective<F> {
    space: SearchSpace,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pub fn new(space: SearchSpace, f: F) -> Self {
        Self { space, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn evaluate(&self, x: &[f64], _rng: &mut dyn RandomSource) -> f64 {
        (self.f)(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub eval: usize,
    pub best: f64,
}

/// Best-so-far fitness indexed by evaluation count.
///
/// A point is recorded at every strict improvement, plus one at the final
/// evaluation count when that differs from the last improvement.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunTrace {
    pub points: Vec<TracePoint>,
    pub final_evals: usize,
}

impl RunTrace {
    pub fn final_best(&self) -> Option<f64> {
        self.points.last().map(|p| p.best)
    }

    /// Best fitness known after `eval` evaluations.
    pub fn best_at(&self, eval: usize) -> Option<f64> {
        let n = self.points.partition_point(|p| p.eval <= eval);
        n.checked_sub(1).map(|i| self.points[i].best)
    }

    /// First evaluation count at which the best fitness is strictly below `target`.
    pub fn first_hit_below(&self, target: f64) -> Option<usize> {
        self.points.iter().find(|p| p.best < target).map(|p| p.eval)
    }

    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| {
            w[0].eval < w[1].eval && w[1].best.partial_cmp(&w[0].best) != Some(Ordering::Greater)
        })
    }
}

pub struct BudgetedEvaluator<'a> {
    objective: &'a dyn Objective,
    t_max: usize,
    used: usize,
    best_so_far: f64,
    trace: RunTrace,
    noise: RngStream,
}

impl<'a> BudgetedEvaluator<'a> {
    /// `noise` feeds objectives with observation noise and is independent of
    /// the optimizer's own stream.
    pub fn new(objective: &'a dyn Objective, t_max: usize, noise: RngStream) -> Self {
        Self {
            objective,
            t_max,
            used: 0,
            best_so_far: f64::INFINITY,
            trace: RunTrace::default(),
            noise,
        }
    }

    pub fn space(&self) -> &SearchSpace {
        self.objective.space()
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn remaining(&self) -> usize {
        self.t_max - self.used
    }

    pub fn best_so_far(&self) -> f64 {
        self.best_so_far
    }

    pub fn trace(&self) -> &RunTrace {
        &self.trace
    }

    /// Evaluates `x`, or refuses without side effects once the budget is spent.
    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64, BudgetExhausted> {
        debug_assert_eq!(x.len(), self.space().dim());
        if self.used >= self.t_max {
            return Err(BudgetExhausted { t_max: self.t_max });
        }
        let y = self.objective.evaluate(x, &mut self.noise);
        self.used += 1;
        if y < self.best_so_far {
            self.best_so_far = y;
            self.trace.points.push(TracePoint {
                eval: self.used,
                best: y,
            });
        }
        Ok(y)
    }

    /// Closes the trace at the current evaluation count.
    pub fn finish(mut self) -> RunTrace {
        if let Some(last) = self.trace.points.last().copied() {
            if last.eval < self.used {
                self.trace.points.push(TracePoint {
                    eval: self.used,
                    best: last.best,
                });
            }
        }
        self.trace.final_evals = self.used;
        self.trace
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(dim: usize) -> FnObjective<impl Fn(&[f64]) -> f64 + Sync> {
        FnObjective::new(SearchSpace::cube(dim, -5.0, 5.0).unwrap(), |x: &[f64]| {
            x.iter().map(|v| v * v).sum()
        })
    }

    #[test]
    fn single_budget_then_exhausted() {
        let f = sphere(2);
        let mut ev = BudgetedEvaluator::new(&f, 1, RngStream::new(0));
        assert_eq!(ev.evaluate(&[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(ev.used(), 1);
        assert_eq!(ev.evaluate(&[0.0, 0.0]), Err(BudgetExhausted { t_max: 1 }));
        assert_eq!(ev.used(), 1);
        assert_eq!(ev.best_so_far(), 2.0);
        assert_eq!(ev.trace().points.len(), 1);
    }

    #[test]
    fn optimum_sets_best_so_far() {
        let f = sphere(3);
        let mut ev = BudgetedEvaluator::new(&f, 10, RngStream::new(0));
        assert_eq!(ev.evaluate(&[0.0; 3]).unwrap(), 0.0);
        assert_eq!(ev.best_so_far(), 0.0);
    }

    #[test]
    fn trace_records_improvements_and_final_state() {
        let f = sphere(1);
        let mut ev = BudgetedEvaluator::new(&f, 10, RngStream::new(0));
        for x in [3.0, 4.0, 2.0, 2.0, 1.0, 5.0] {
            ev.evaluate(&[x]).unwrap();
        }
        let trace = ev.finish();
        let evals: Vec<_> = trace.points.iter().map(|p| p.eval).collect();
        let best: Vec<_> = trace.points.iter().map(|p| p.best).collect();
        assert_eq!(evals, vec![1, 3, 5, 6]);
        assert_eq!(best, vec![9.0, 4.0, 1.0, 1.0]);
        assert_eq!(trace.final_evals, 6);
        assert!(trace.is_monotone());
        assert_eq!(trace.best_at(4), Some(4.0));
        assert_eq!(trace.best_at(0), None);
        assert_eq!(trace.first_hit_below(4.0), Some(5));
    }
}
