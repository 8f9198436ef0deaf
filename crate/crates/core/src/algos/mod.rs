//! Differential evolution with pluggable mutation and crossover, and
//! standalone stochastic quasi-gradient descent.

mod crossover;
mod de;
mod mutation;
mod sampling;
mod sqg;

pub use crossover::{crossover_binomial, crossover_exponential};
pub use de::{greedy_select, run_de, DEConfig, DifferentialEvolution, Strategy};
pub use mutation::{
    best2_donor, mutate_best2, mutate_rand1, mutate_sqg, rand1_donor, sqg_mutant, DifferencePair,
    SqgDonor,
};
pub use sampling::sample_distinct_indices;
pub use sqg::{run_sqg, sqg_gradient_estimate, sqg_gradient_estimate_at, SQGConfig};

use serde::{Deserialize, Serialize};

/// Relative tolerance used for degenerate difference pairs and for a vanishing
/// fitness-weighted sum, scaled by the mean bound range.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Any algorithm the harness can run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgorithmConfig {
    De(DEConfig),
    Sqg(SQGConfig),
}

impl AlgorithmConfig {
    pub fn validate(&self) -> crate::Result<()> {
        match self {
            AlgorithmConfig::De(c) => c.validate(),
            AlgorithmConfig::Sqg(c) => c.validate(),
        }
    }

    pub fn run(
        &self,
        objective: &dyn crate::Objective,
        t_max: usize,
        seed: u64,
    ) -> crate::Result<crate::RunTrace> {
        match self {
            AlgorithmConfig::De(c) => run_de(c, objective, t_max, seed),
            AlgorithmConfig::Sqg(c) => run_sqg(c, objective, t_max, seed),
        }
    }

    /// The four configurations compared in the default benchmark:
    /// `DE` (rand/1/exp), `DE2` (best/2/bin), `SQG` and `SQG-DE` (best/w/bin).
    pub fn presets() -> Vec<(String, AlgorithmConfig)> {
        vec![
            ("DE".into(), AlgorithmConfig::De(DEConfig::rand1_exp())),
            ("DE2".into(), AlgorithmConfig::De(DEConfig::best2_bin())),
            ("SQG".into(), AlgorithmConfig::Sqg(SQGConfig::default())),
            (
                "SQG-DE".into(),
                AlgorithmConfig::De(DEConfig::sqg_best_w_bin()),
            ),
        ]
    }

    pub fn preset(name: &str) -> Option<AlgorithmConfig> {
        Self::presets()
            .into_iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, c)| c)
    }
}
