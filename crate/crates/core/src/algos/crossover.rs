use crate::rng::RandomSource;

/// Standard DE binomial crossover. One gene index, drawn first, always comes
/// from the donor; every other gene draws `u` and takes the donor gene when
/// `u < cr`.
pub fn crossover_binomial(
    target: &[f64],
    donor: &[f64],
    cr: f64,
    rng: &mut impl RandomSource,
) -> Vec<f64> {
    assert_eq!(target.len(), donor.len());
    let forced = rng.index(target.len());
    target
        .iter()
        .zip(donor)
        .enumerate()
        .map(|(j, (t, d))| {
            if j == forced || rng.uniform() < cr {
                *d
            } else {
                *t
            }
        })
        .collect()
}

/// Standard DE exponential crossover: starting at a uniform index, copy a
/// contiguous (cyclic) run of donor genes, extending while `u < cr`.
pub fn crossover_exponential(
    target: &[f64],
    donor: &[f64],
    cr: f64,
    rng: &mut impl RandomSource,
) -> Vec<f64> {
    assert_eq!(target.len(), donor.len());
    let d = target.len();
    let start = rng.index(d);
    let mut trial = target.to_vec();
    trial[start] = donor[start];
    let mut copied = 1;
    while copied < d && rng.uniform() < cr {
        let j = (start + copied) % d;
        trial[j] = donor[j];
        copied += 1;
    }
    trial
}
