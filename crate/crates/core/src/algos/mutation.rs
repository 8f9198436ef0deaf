//! Donor-vector construction.

use crate::algos::sampling::sample_distinct_indices;
use crate::algos::DEGENERACY_TOLERANCE;
use crate::error::{Error, Result};
use crate::population::{best_index, Population};
use crate::rng::RandomSource;
use crate::space::SearchSpace;

/// `x_a + F (x_b - x_c)`
pub fn rand1_donor(x_a: &[f64], x_b: &[f64], x_c: &[f64], f: f64) -> Vec<f64> {
    x_a.iter()
        .zip(x_b.iter().zip(x_c))
        .map(|(a, (b, c))| a + f * (b - c))
        .collect()
}

/// `x_best + F ((x_a - x_b) + (x_c - x_d))`
pub fn best2_donor(
    x_best: &[f64],
    x_a: &[f64],
    x_b: &[f64],
    x_c: &[f64],
    x_d: &[f64],
    f: f64,
) -> Vec<f64> {
    (0..x_best.len())
        .map(|j| x_best[j] + f * ((x_a[j] - x_b[j]) + (x_c[j] - x_d[j])))
        .collect()
}

fn require(pop: &Population, needed: usize) -> Result<()> {
    if pop.len() < needed {
        return Err(Error::InsufficientPopulation {
            needed,
            available: pop.len(),
        });
    }
    Ok(())
}

/// DE/rand/1 donor for `target`, clamped into `space`.
pub fn mutate_rand1(
    pop: &Population,
    target: usize,
    f: f64,
    space: &SearchSpace,
    rng: &mut impl RandomSource,
) -> Result<Vec<f64>> {
    require(pop, 4)?;
    let idx = sample_distinct_indices(pop.len(), 3, &[target], rng)?;
    let mut donor = rand1_donor(
        pop.genome(idx[0]),
        pop.genome(idx[1]),
        pop.genome(idx[2]),
        f,
    );
    space.clamp(&mut donor);
    Ok(donor)
}

/// DE/best/2 donor for `target`, clamped into `space`.
pub fn mutate_best2(
    pop: &Population,
    target: usize,
    f: f64,
    space: &SearchSpace,
    rng: &mut impl RandomSource,
) -> Result<Vec<f64>> {
    require(pop, 6)?;
    let best = best_index(pop)?;
    let idx = sample_distinct_indices(pop.len(), 4, &[target], rng)?;
    let mut donor = best2_donor(
        pop.genome(best),
        pop.genome(idx[0]),
        pop.genome(idx[1]),
        pop.genome(idx[2]),
        pop.genome(idx[3]),
        f,
    );
    space.clamp(&mut donor);
    Ok(donor)
}

/// Two evaluated population members whose difference enters the SQG mutation.
#[derive(Debug, Clone, Copy)]
pub struct DifferencePair<'a> {
    pub x_b: &'a [f64],
    pub y_b: f64,
    pub x_c: &'a [f64],
    pub y_c: f64,
}

impl DifferencePair<'_> {
    fn difference(&self) -> Vec<f64> {
        self.x_b.iter().zip(self.x_c).map(|(b, c)| b - c).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqgDonor {
    pub donor: Vec<f64>,
    /// `S = Σ_k ((y_b - y_c) / ‖x_b - x_c‖) (x_b - x_c)`
    pub weighted_sum: Vec<f64>,
    /// `(1/w) ‖Σ_k (x_b - x_c)‖ / ‖S‖`, absent on the fallback branch.
    pub phi: Option<f64>,
    pub fallback: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// SQG mutation: `x_best - F φ S`.
///
/// Each pair difference is weighted by its fitness slope, and `φ` rescales the
/// step to the length of the plain mean difference, so only the direction
/// depends on fitness. When `‖S‖ < min_weighted_norm` the donor falls back to
/// `x_best + F (1/w) Σ_k (x_b - x_c)`.
pub fn sqg_mutant(
    x_best: &[f64],
    pairs: &[DifferencePair<'_>],
    f: f64,
    min_weighted_norm: f64,
) -> SqgDonor {
    let dim = x_best.len();
    let w = pairs.len() as f64;
    let mut weighted_sum = vec![0.0; dim];
    let mut diff_sum = vec![0.0; dim];
    for pair in pairs {
        let diff = pair.difference();
        let len = norm(&diff);
        let slope = if len > 0.0 {
            (pair.y_b - pair.y_c) / len
        } else {
            0.0
        };
        for j in 0..dim {
            weighted_sum[j] += slope * diff[j];
            diff_sum[j] += diff[j];
        }
    }

    let s_norm = norm(&weighted_sum);
    if !(s_norm >= min_weighted_norm && s_norm > 0.0) {
        let donor = (0..dim).map(|j| x_best[j] + f * diff_sum[j] / w).collect();
        return SqgDonor {
            donor,
            weighted_sum,
            phi: None,
            fallback: true,
        };
    }
    let phi = (norm(&diff_sum) / w) / s_norm;
    let donor = (0..dim)
        .map(|j| x_best[j] - f * phi * weighted_sum[j])
        .collect();
    SqgDonor {
        donor,
        weighted_sum,
        phi: Some(phi),
        fallback: false,
    }
}

/// SQG/best/w donor for `target`, clamped into `space`.
///
/// Draws `2w` distinct members other than the target. A pair whose members
/// (nearly) coincide is redrawn up to `P` times; if it stays degenerate the
/// donor takes the unweighted fallback branch.
pub fn mutate_sqg(
    pop: &Population,
    target: usize,
    f: f64,
    w: usize,
    space: &SearchSpace,
    rng: &mut impl RandomSource,
) -> Result<Vec<f64>> {
    if w == 0 {
        return Err(Error::InvalidConfig("w must be at least 1".into()));
    }
    require(pop, 2 * w + 2)?;
    let best = best_index(pop)?;
    let tol = DEGENERACY_TOLERANCE * space.mean_range();
    let mut idx = sample_distinct_indices(pop.len(), 2 * w, &[target], rng)?;

    let mut degenerate = false;
    for k in 0..w {
        let mut retries = 0;
        while pair_distance(pop, idx[2 * k], idx[2 * k + 1]) <= tol {
            if retries == pop.len() {
                degenerate = true;
                break;
            }
            let mut taken: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|(i, _)| i / 2 != k)
                .map(|(_, v)| *v)
                .collect();
            taken.push(target);
            let fresh = sample_distinct_indices(pop.len(), 2, &taken, rng)?;
            idx[2 * k] = fresh[0];
            idx[2 * k + 1] = fresh[1];
            retries += 1;
        }
    }

    let mut pairs = Vec::with_capacity(w);
    for k in 0..w {
        let (b, c) = (idx[2 * k], idx[2 * k + 1]);
        pairs.push(DifferencePair {
            x_b: pop.genome(b),
            y_b: pop.fitness(b)?,
            x_c: pop.genome(c),
            y_c: pop.fitness(c)?,
        });
    }
    let threshold = if degenerate { f64::INFINITY } else { tol };
    let mut donor = sqg_mutant(pop.genome(best), &pairs, f, threshold).donor;
    space.clamp(&mut donor);
    Ok(donor)
}

fn pair_distance(pop: &Population, b: usize, c: usize) -> f64 {
    pop.genome(b)
        .iter()
        .zip(pop.genome(c))
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
