use crate::error::{Error, Result};
use crate::rng::RandomSource;

/// `k` distinct indices from `0..pop_size`, none of them in `exclude`, drawn
/// uniformly by a partial Fisher-Yates shuffle of the eligible set.
pub fn sample_distinct_indices(
    pop_size: usize,
    k: usize,
    exclude: &[usize],
    rng: &mut impl RandomSource,
) -> Result<Vec<usize>> {
    let mut pool: Vec<usize> = (0..pop_size).filter(|i| !exclude.contains(i)).collect();
    if k > pool.len() {
        return Err(Error::InsufficientPopulation {
            needed: k,
            available: pool.len(),
        });
    }
    for i in 0..k {
        let j = i + rng.index(pool.len() - i);
        pool.swap(i, j);
    }
    pool.truncate(k);
    Ok(pool)
}
