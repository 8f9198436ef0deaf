use serde::{Deserialize, Serialize};

use crate::algos::crossover::{crossover_binomial, crossover_exponential};
use crate::algos::mutation::{mutate_best2, mutate_rand1, mutate_sqg};
use crate::error::{Error, Result};
use crate::evaluator::{BudgetedEvaluator, Objective, RunTrace};
use crate::population::{init_population, Individual, Population};
use crate::rng::RngStream;

/// Tag of the evaluator's noise stream, derived from the run seed.
pub(crate) const NOISE_STREAM: u64 = 0x006e_6f69_7365;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// DE/rand/1 mutation with exponential crossover.
    Rand1Exp,
    /// DE/best/2 mutation with binomial crossover.
    Best2Bin,
    /// SQG/best/w mutation with binomial crossover.
    SqgBestWBin,
}

impl Strategy {
    pub fn min_pop_size(self, w: usize) -> usize {
        match self {
            Strategy::Rand1Exp => 4,
            Strategy::Best2Bin => 6,
            Strategy::SqgBestWBin => 2 * w + 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DEConfig {
    pub strategy: Strategy,
    #[serde(default = "default_f")]
    pub f: f64,
    #[serde(default = "default_cr")]
    pub cr: f64,
    /// Number of difference pairs; used by the SQG strategy only.
    #[serde(default = "default_w")]
    pub w: usize,
    #[serde(default = "default_pop")]
    pub pop_size: usize,
}

fn default_f() -> f64 {
    0.8
}
fn default_cr() -> f64 {
    0.8
}
fn default_w() -> usize {
    5
}
fn default_pop() -> usize {
    100
}

impl DEConfig {
    pub fn new(strategy: Strategy) -> Self {
        Self {
            strategy,
            f: default_f(),
            cr: default_cr(),
            w: default_w(),
            pop_size: default_pop(),
        }
    }

    pub fn rand1_exp() -> Self {
        Self::new(Strategy::Rand1Exp)
    }

    pub fn best2_bin() -> Self {
        Self::new(Strategy::Best2Bin)
    }

    pub fn sqg_best_w_bin() -> Self {
        Self::new(Strategy::SqgBestWBin)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=2.0).contains(&self.f) {
            return Err(Error::InvalidConfig(format!(
                "F = {} outside [0, 2]",
                self.f
            )));
        }
        if !(0.0..=1.0).contains(&self.cr) {
            return Err(Error::InvalidConfig(format!(
                "CR = {} outside [0, 1]",
                self.cr
            )));
        }
        if self.w == 0 {
            return Err(Error::InvalidConfig("w must be at least 1".into()));
        }
        let needed = self.strategy.min_pop_size(self.w);
        if self.pop_size < needed {
            return Err(Error::InvalidConfig(format!(
                "{:?} needs pop_size >= {needed}, got {}",
                self.strategy, self.pop_size
            )));
        }
        Ok(())
    }
}

/// Trial survives when it is at least as good as the target.
pub fn greedy_select(target: Individual, trial: Individual) -> Result<Individual> {
    let t = target.fitness.ok_or(Error::PendingFitness(0))?;
    let u = trial.fitness.ok_or(Error::PendingFitness(1))?;
    Ok(if u <= t { trial } else { target })
}

/// A DE run that can be advanced one generation at a time.
///
/// Generations are synchronous: every donor of a generation is built from the
/// population as it stood at the start of that generation.
pub struct DifferentialEvolution<'a> {
    config: DEConfig,
    rng: RngStream,
    evaluator: BudgetedEvaluator<'a>,
    population: Population,
    exhausted: bool,
}

impl<'a> DifferentialEvolution<'a> {
    /// Validates `config` and evaluates the initial population (or as much of
    /// it as the budget allows).
    pub fn new(
        config: &DEConfig,
        objective: &'a dyn Objective,
        t_max: usize,
        seed: u64,
    ) -> Result<Self> {
        config.validate()?;
        let mut rng = RngStream::new(seed);
        let evaluator = BudgetedEvaluator::new(objective, t_max, rng.derive(NOISE_STREAM));
        let population = init_population(objective.space(), config.pop_size, &mut rng);
        let mut de = Self {
            config: config.clone(),
            rng,
            evaluator,
            population,
            exhausted: false,
        };
        for i in 0..de.population.len() {
            match de.evaluator.evaluate(&de.population.members[i].genome) {
                Ok(y) => de.population.members[i].fitness = Some(y),
                Err(_) => {
                    de.exhausted = true;
                    break;
                }
            }
        }
        Ok(de)
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn evaluations(&self) -> usize {
        self.evaluator.used()
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Runs one generation. Returns `false` once the budget ran out; trials
    /// already selected in the interrupted generation are kept.
    pub fn step(&mut self) -> Result<bool> {
        if self.exhausted {
            return Ok(false);
        }
        let space = self.evaluator.space().clone();
        let cfg = &self.config;
        let mut next = self.population.clone();
        for i in 0..self.population.len() {
            let pop = &self.population;
            let donor = match cfg.strategy {
                Strategy::Rand1Exp => mutate_rand1(pop, i, cfg.f, &space, &mut self.rng)?,
                Strategy::Best2Bin => mutate_best2(pop, i, cfg.f, &space, &mut self.rng)?,
                Strategy::SqgBestWBin => mutate_sqg(pop, i, cfg.f, cfg.w, &space, &mut self.rng)?,
            };
            let target = pop.genome(i);
            let trial = match cfg.strategy {
                Strategy::Rand1Exp => crossover_exponential(target, &donor, cfg.cr, &mut self.rng),
                Strategy::Best2Bin | Strategy::SqgBestWBin => {
                    crossover_binomial(target, &donor, cfg.cr, &mut self.rng)
                }
            };
            let y = match self.evaluator.evaluate(&trial) {
                Ok(y) => y,
                Err(_) => {
                    self.exhausted = true;
                    break;
                }
            };
            next.members[i] =
                greedy_select(pop.members[i].clone(), Individual::evaluated(trial, y))?;
        }
        if !self.exhausted {
            next.generation += 1;
        }
        self.population = next;
        Ok(!self.exhausted)
    }

    pub fn finish(self) -> RunTrace {
        self.evaluator.finish()
    }
}

/// Runs DE until `t_max` evaluations are spent.
pub fn run_de(
    config: &DEConfig,
    objective: &dyn Objective,
    t_max: usize,
    seed: u64,
) -> Result<RunTrace> {
    let mut de = DifferentialEvolution::new(config, objective, t_max, seed)?;
    while de.step()? {}
    Ok(de.finish())
}
