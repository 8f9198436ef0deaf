//! Derivative-free optimization under tight evaluation budgets.
//!
//! The crate provides differential evolution with a fitness-weighted
//! stochastic quasi-gradient (SQG) mutation next to the classic `rand/1/exp`
//! and `best/2/bin` strategies, standalone SQG descent, a seeded suite of
//! shifted/rotated/composite test functions, and the fixed-budget measures
//! used to compare them: expected running time against a random-sampling
//! target, normalized best-value curves and the Wilcoxon signed rank test.

pub mod algos;
pub mod error;
pub mod evaluator;
pub mod harness;
pub mod metrics;
pub mod population;
pub mod rng;
pub mod space;
pub mod stats;
pub mod testfuncs;

pub use error::{BudgetExhausted, Error, Result};
pub use evaluator::{BudgetedEvaluator, FnObjective, Objective, RunTrace, TracePoint};
pub use population::{best_index, init_population, Individual, Population};
pub use rng::{RandomSource, RngStream};
pub use space::SearchSpace;
