use crate::error::{Error, Result};
use crate::rng::RandomSource;
use crate::space::SearchSpace;

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Vec<f64>,
    /// `None` until the genome has been evaluated.
    pub fitness: Option<f64>,
}

impl Individual {
    pub fn pending(genome: Vec<f64>) -> Self {
        Self {
            genome,
            fitness: None,
        }
    }

    pub fn evaluated(genome: Vec<f64>, fitness: f64) -> Self {
        Self {
            genome,
            fitness: Some(fitness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Population {
    pub members: Vec<Individual>,
    pub generation: usize,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Self {
        Self {
            members,
            generation: 0,
        }
    }

    /// Builds an evaluated population from parallel genome and fitness lists.
    pub fn from_evaluated(genomes: Vec<Vec<f64>>, fitness: &[f64]) -> Self {
        Self::new(
            genomes
                .into_iter()
                .zip(fitness)
                .map(|(g, f)| Individual::evaluated(g, *f))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn genome(&self, i: usize) -> &[f64] {
        &self.members[i].genome
    }

    pub fn fitness(&self, i: usize) -> Result<f64> {
        self.members[i].fitness.ok_or(Error::PendingFitness(i))
    }

    pub fn best_fitness(&self) -> Result<f64> {
        let i = best_index(self)?;
        self.fitness(i)
    }
}

/// `size` genomes drawn uniformly inside `space`, all pending evaluation.
pub fn init_population(
    space: &SearchSpace,
    size: usize,
    rng: &mut impl RandomSource,
) -> Population {
    Population::new(
        (0..size)
            .map(|_| Individual::pending(space.sample_uniform(rng)))
            .collect(),
    )
}

/// Index of the lowest fitness; ties go to the lowest index.
pub fn best_index(pop: &Population) -> Result<usize> {
    if pop.is_empty() {
        return Err(Error::InsufficientPopulation {
            needed: 1,
            available: 0,
        });
    }
    let mut best = 0;
    let mut best_f = pop.fitness(0)?;
    for i in 1..pop.len() {
        let f = pop.fitness(i)?;
        if f < best_f {
            best = i;
            best_f = f;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn with_fitness(values: &[f64]) -> Population {
        Population::from_evaluated(values.iter().map(|_| vec![0.0]).collect(), values)
    }

    #[test]
    fn init_respects_bounds() {
        let space = SearchSpace::cube(2, 0.0, 1.0).unwrap();
        let pop = init_population(&space, 3, &mut RngStream::new(9));
        assert_eq!(pop.len(), 3);
        for m in &pop.members {
            assert!(space.contains(&m.genome));
            assert!(m.fitness.is_none());
        }
    }

    #[test]
    fn init_is_deterministic() {
        let space = SearchSpace::cube(4, -2.0, 3.0).unwrap();
        let a = init_population(&space, 10, &mut RngStream::new(42));
        let b = init_population(&space, 10, &mut RngStream::new(42));
        assert_eq!(a, b);
    }

    #[test]
    fn best_index_examples() {
        assert_eq!(best_index(&with_fitness(&[3.0, 1.0, 2.0])).unwrap(), 1);
        assert_eq!(best_index(&with_fitness(&[1.0, 1.0, 2.0])).unwrap(), 0);
        assert_eq!(best_index(&with_fitness(&[5.0])).unwrap(), 0);
    }

    #[test]
    fn best_index_rejects_pending() {
        let mut pop = with_fitness(&[1.0, 2.0]);
        pop.members[1].fitness = None;
        assert!(matches!(best_index(&pop), Err(Error::PendingFitness(1))));
    }
}
