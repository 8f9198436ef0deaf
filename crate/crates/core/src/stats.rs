//! Wilcoxon signed rank test for paired samples.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

/// Largest number of non-zero differences for which the null distribution is
/// computed exactly.
pub const EXACT_CUTOFF: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PValueMethod {
    ExactEnumeration,
    NormalApproximation,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Sum of the ranks of positive differences `a - b`.
    pub w_plus: f64,
    pub n_effective: usize,
    /// Two-sided p-value.
    pub p_value: f64,
    pub method: PValueMethod,
    pub significant: bool,
}

/// Two-sided Wilcoxon signed rank test of `a - b`.
///
/// Zero differences are dropped and tied magnitudes share their average rank.
/// Up to [`EXACT_CUTOFF`] non-zero differences, the p-value is exact over all
/// `2^n` sign assignments (with the observed, possibly tied, ranks); beyond
/// that a normal approximation with tie and continuity corrections is used.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::InvalidSample(format!(
            "paired samples differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::InvalidSample("need at least two pairs".into()));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    if diffs.iter().any(|d| d.is_nan()) {
        return Err(Error::InvalidSample("NaN difference".into()));
    }
    let n = diffs.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            w_plus: 0.0,
            n_effective: 0,
            p_value: 1.0,
            method: PValueMethod::ExactEnumeration,
            significant: false,
        });
    }

    let (ranks, tie_groups) = average_ranks(&diffs);
    let w_plus: f64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();

    let (p_value, method) = if n <= EXACT_CUTOFF {
        (exact_p(&ranks, w_plus), PValueMethod::ExactEnumeration)
    } else {
        (
            normal_p(n, &tie_groups, w_plus),
            PValueMethod::NormalApproximation,
        )
    };
    Ok(WilcoxonResult {
        w_plus,
        n_effective: n,
        p_value,
        method,
        significant: p_value < SIGNIFICANCE_LEVEL,
    })
}

/// Average ranks of `|d|` (1-based) and the sizes of tied groups.
fn average_ranks(diffs: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let n = diffs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diffs[i].abs().total_cmp(&diffs[j].abs()));
    let mut ranks = vec![0.0; n];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && diffs[order[end]].abs() == diffs[order[start]].abs() {
            end += 1;
        }
        let avg = (start + 1 + end) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = avg;
        }
        ties.push(end - start);
        start = end;
    }
    (ranks, ties)
}

/// Exact two-sided p-value: `min(1, 2 · min(P(W ≤ w), P(W ≥ w)))` under the
/// uniform distribution over sign assignments.
///
/// Ranks are half-integers, so doubled ranks are integers and the null
/// distribution is counted exactly by convolution over sign choices.
fn exact_p(ranks: &[f64], w_plus: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    let mut counts = vec![0u64; max_sum + 1];
    counts[0] = 1;
    let mut reach = 0;
    for &r in &doubled {
        for s in (0..=reach).rev() {
            if counts[s] > 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    let observed = (2.0 * w_plus).round() as usize;
    let total = 1u64 << ranks.len();
    let lower: u64 = counts[..=observed].iter().sum();
    let upper: u64 = counts[observed..].iter().sum();
    (2.0 * lower.min(upper) as f64 / total as f64).min(1.0)
}

fn normal_p(n: usize, tie_groups: &[usize], w_plus: f64) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let tie_term: f64 = tie_groups
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * t * t - t
        })
        .sum::<f64>()
        / 48.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::standard();
    (2.0 * normal.sf(z)).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{RandomSource, RngStream};

    #[test]
    fn all_positive_six() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let r = wilcoxon_signed_rank(&a, &[0.0; 6]).unwrap();
        assert_eq!(r.w_plus, 21.0);
        assert_eq!(r.p_value, 0.03125);
        assert!(r.significant);
        assert_eq!(r.method, PValueMethod::ExactEnumeration);
    }

    #[test]
    fn symmetric_tie() {
        let r = wilcoxon_signed_rank(&[1.0, -1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(r.w_plus, 1.5);
        assert_eq!(r.p_value, 1.0);
        assert!(!r.significant);
    }

    #[test]
    fn identical_samples() {
        let a = [3.0, 1.0, 4.0];
        let r = wilcoxon_signed_rank(&a, &a).unwrap();
        assert_eq!(r.n_effective, 0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn zero_differences_are_dropped() {
        let r = wilcoxon_signed_rank(&[1.0, 2.0, 5.0], &[1.0, 1.0, 3.0]).unwrap();
        assert_eq!(r.n_effective, 2);
        assert_eq!(r.w_plus, 3.0);
    }

    #[test]
    fn input_validation() {
        assert!(wilcoxon_signed_rank(&[1.0], &[2.0]).is_err());
        assert!(wilcoxon_signed_rank(&[1.0, 2.0], &[2.0]).is_err());
    }

    #[test]
    fn swapping_samples_mirrors_statistic() {
        let mut rng = RngStream::new(6);
        for n in [5, 12, 30] {
            let a: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.0, 10.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.uniform_in(0.0, 10.0)).collect();
            let ab = wilcoxon_signed_rank(&a, &b).unwrap();
            let ba = wilcoxon_signed_rank(&b, &a).unwrap();
            let nf = ab.n_effective as f64;
            assert_eq!(ab.w_plus + ba.w_plus, nf * (nf + 1.0) / 2.0);
            assert_eq!(ab.p_value, ba.p_value);
        }
    }

    #[test]
    fn extreme_normal_p_does_not_underflow_to_zero() {
        let a: Vec<f64> = (1..=100).map(f64::from).collect();
        let r = wilcoxon_signed_rank(&a, &[0.0; 100]).unwrap();
        assert_eq!(r.method, PValueMethod::NormalApproximation);
        assert!(r.p_value > 0.0 && r.p_value < 1e-15, "{}", r.p_value);
    }

    #[test]
    fn large_samples_use_normal_approximation() {
        let a: Vec<f64> = (1..=30).map(|i| i as f64).collect();
        let r = wilcoxon_signed_rank(&a, &[0.0; 30]).unwrap();
        assert_eq!(r.method, PValueMethod::NormalApproximation);
        assert!(r.p_value < 1e-5);
    }
}
