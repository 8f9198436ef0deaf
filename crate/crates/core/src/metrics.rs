//! Fixed-budget performance measures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluator::{Objective, RunTrace};
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "snake_case")]
pub enum ErtValue {
    Finite(f64),
    /// No run succeeded; the true value exceeds this bound.
    LowerBound(f64),
}

impl ErtValue {
    /// The finite value, or the bound.
    pub fn value(self) -> f64 {
        match self {
            ErtValue::Finite(v) | ErtValue::LowerBound(v) => v,
        }
    }

    pub fn is_lower_bound(self) -> bool {
        matches!(self, ErtValue::LowerBound(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErtResult {
    pub value: ErtValue,
    pub success_rate: f64,
    pub n_success: usize,
    pub n_total: usize,
}

/// Expected running time to get strictly below `f_target`:
/// `mean(T_success) + ((1 - p_s) / p_s) · t_max`, or the lower bound
/// `t_max · n_total` when no run succeeds.
pub fn expected_running_time(traces: &[RunTrace], f_target: f64, t_max: usize) -> ErtResult {
    let hits: Vec<usize> = traces
        .iter()
        .filter_map(|t| t.first_hit_below(f_target))
        .collect();
    let n_total = traces.len();
    let n_success = hits.len();
    let success_rate = if n_total == 0 {
        0.0
    } else {
        n_success as f64 / n_total as f64
    };
    let value = if n_success == 0 {
        ErtValue::LowerBound((t_max * n_total) as f64)
    } else {
        let mean = hits.iter().sum::<usize>() as f64 / n_success as f64;
        ErtValue::Finite(mean + (1.0 - success_rate) / success_rate * t_max as f64)
    };
    ErtResult {
        value,
        success_rate,
        n_success,
        n_total,
    }
}

/// Expected best value of `budget` uniform random samples, estimated over
/// `reps` repetitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RseTarget {
    pub function_label: String,
    pub budget: usize,
    pub reps: usize,
    pub value: f64,
}

/// Estimates the random-sampling target of `objective`. Noisy objectives are
/// judged on their observed values.
pub fn estimate_rse_target(
    label: &str,
    objective: &dyn Objective,
    budget: usize,
    reps: usize,
    seed: u64,
) -> Result<RseTarget> {
    if budget == 0 || reps == 0 {
        return Err(Error::InvalidConfig(
            "budget and reps must be positive".into(),
        ));
    }
    let mut rng = RngStream::new(seed);
    let mut noise = rng.derive(0x0072_7365);
    let space = objective.space();
    let mut total = 0.0;
    for _ in 0..reps {
        let mut best = f64::INFINITY;
        for _ in 0..budget {
            let x = space.sample_uniform(&mut rng);
            best = best.min(objective.evaluate(&x, &mut noise));
        }
        total += best;
    }
    Ok(RseTarget {
        function_label: label.to_string(),
        budget,
        reps,
        value: total / reps as f64,
    })
}

/// Best-so-far values divided by the random-sampling target; 1.0 marks parity
/// with random search.
pub fn bnfv_curve(trace: &RunTrace, target: &RseTarget) -> Result<Vec<(usize, f64)>> {
    if target.value == 0.0 {
        return Err(Error::NormalizationUndefined);
    }
    Ok(trace
        .points
        .iter()
        .map(|p| (p.eval, p.best / target.value))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{FnObjective, TracePoint};
    use crate::space::SearchSpace;

    fn hit_at(eval: usize, t_max: usize) -> RunTrace {
        RunTrace {
            points: vec![
                TracePoint {
                    eval: 1,
                    best: 10.0,
                },
                TracePoint { eval, best: 0.0 },
                TracePoint {
                    eval: t_max,
                    best: 0.0,
                },
            ],
            final_evals: t_max,
        }
    }

    fn miss(t_max: usize) -> RunTrace {
        RunTrace {
            points: vec![
                TracePoint {
                    eval: 1,
                    best: 10.0,
                },
                TracePoint {
                    eval: t_max,
                    best: 10.0,
                },
            ],
            final_evals: t_max,
        }
    }

    #[test]
    fn all_successful() {
        let traces = [hit_at(100, 1000), hit_at(200, 1000), hit_at(300, 1000)];
        let r = expected_running_time(&traces, 1.0, 1000);
        assert_eq!(r.value, ErtValue::Finite(200.0));
        assert_eq!(r.success_rate, 1.0);
    }

    #[test]
    fn half_successful() {
        let traces = [hit_at(200, 1000), hit_at(400, 1000), miss(1000), miss(1000)];
        let r = expected_running_time(&traces, 1.0, 1000);
        assert_eq!(r.value, ErtValue::Finite(1300.0));
        assert_eq!(r.n_success, 2);
    }

    #[test]
    fn no_success_is_lower_bound() {
        let traces: Vec<_> = (0..100).map(|_| miss(1000)).collect();
        let r = expected_running_time(&traces, 1.0, 1000);
        assert_eq!(r.value, ErtValue::LowerBound(100_000.0));
        assert_eq!(r.success_rate, 0.0);
    }

    #[test]
    fn success_is_strict() {
        let r = expected_running_time(&[hit_at(5, 10)], 0.0, 10);
        assert!(r.value.is_lower_bound());
    }

    #[test]
    fn rse_constant_function() {
        let f = FnObjective::new(SearchSpace::cube(2, 0.0, 1.0).unwrap(), |_: &[f64]| 2.5);
        let t = estimate_rse_target("c", &f, 1, 10, 0).unwrap();
        assert_eq!(t.value, 2.5);
    }

    #[test]
    fn rse_is_deterministic() {
        let f = FnObjective::new(SearchSpace::cube(1, 0.0, 1.0).unwrap(), |x: &[f64]| x[0]);
        let a = estimate_rse_target("x", &f, 5, 100, 3).unwrap();
        let b = estimate_rse_target("x", &f, 5, 100, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bnfv_examples() {
        let target = RseTarget {
            function_label: "f".into(),
            budget: 1000,
            reps: 1,
            value: 25.0,
        };
        let trace = RunTrace {
            points: vec![
                TracePoint {
                    eval: 100,
                    best: 50.0,
                },
                TracePoint {
                    eval: 400,
                    best: 10.0,
                },
            ],
            final_evals: 400,
        };
        assert_eq!(
            bnfv_curve(&trace, &target).unwrap(),
            vec![(100, 2.0), (400, 0.4)]
        );

        let parity = RunTrace {
            points: vec![
                TracePoint {
                    eval: 3,
                    best: 25.0,
                },
                TracePoint { eval: 9, best: 0.0 },
            ],
            final_evals: 9,
        };
        assert_eq!(
            bnfv_curve(&parity, &target).unwrap(),
            vec![(3, 1.0), (9, 0.0)]
        );

        let zero = RseTarget {
            value: 0.0,
            ..target
        };
        assert!(matches!(
            bnfv_curve(&trace, &zero),
            Err(Error::NormalizationUndefined)
        ));
    }
}
