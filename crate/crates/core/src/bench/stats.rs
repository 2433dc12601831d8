//! Two-sided Wilcoxon rank-sum test.

use statrs::distribution::{ContinuousCDF, Normal};

/// Samples up to this size per group use the exact permutation distribution.
pub const EXACT_LIMIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumTest {
    /// Rank sum of the first sample (mid-ranks for ties).
    pub statistic: f64,
    pub p_value: f64,
    pub exact: bool,
}

/// Per-test significance level after Bonferroni correction.
pub fn bonferroni(alpha: f64, tests: usize) -> f64 {
    alpha / tests.max(1) as f64
}

/// Mid-ranks (1-based) of `values`.
pub fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Rank-sum test of `a` against `b`.
///
/// Exact (permutation distribution over the pooled mid-ranks) when both
/// samples have at most [`EXACT_LIMIT`] values, otherwise the normal
/// approximation with tie and continuity correction.
pub fn rank_sum_test(a: &[f64], b: &[f64]) -> RankSumTest {
    let (n1, n2) = (a.len(), b.len());
    if n1 == 0 || n2 == 0 {
        return RankSumTest { statistic: 0.0, p_value: 1.0, exact: false };
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = mid_ranks(&pooled);
    let w: f64 = ranks[..n1].iter().sum();
    if n1 <= EXACT_LIMIT && n2 <= EXACT_LIMIT {
        return RankSumTest { statistic: w, p_value: exact_p_value(&ranks, n1, w), exact: true };
    }
    let n = (n1 + n2) as f64;
    let mean = n1 as f64 * (n + 1.0) / 2.0;
    let mut ties = 0.0;
    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        ties += t * t * t - t;
        i = j + 1;
    }
    let var = n1 as f64 * n2 as f64 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if var <= 0.0 {
        return RankSumTest { statistic: w, p_value: 1.0, exact: false };
    }
    let diff = (w - mean).abs();
    let z = (diff - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let p = (2.0 * (1.0 - normal.cdf(z))).min(1.0);
    RankSumTest { statistic: w, p_value: p, exact: false }
}

/// Two-sided permutation p-value: the share of `n1`-subsets of the pooled
/// ranks whose sum lies at least as far from the mean as `w`.
fn exact_p_value(ranks: &[f64], n1: usize, w: f64) -> f64 {
    // doubled mid-ranks are integers
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    // counts[k][s]: subsets of size k with doubled sum s
    let mut counts = vec![vec![0f64; total + 1]; n1 + 1];
    counts[0][0] = 1.0;
    for &r in &doubled {
        for k in (1..=n1).rev() {
            for s in (r..=total).rev() {
                let add = counts[k - 1][s - r];
                if add != 0.0 {
                    counts[k][s] += add;
                }
            }
        }
    }
    let n = ranks.len() as f64;
    let mean2 = n1 as f64 * (n + 1.0);
    let observed = (2.0 * w - mean2).abs();
    let all: f64 = counts[n1].iter().sum();
    let extreme: f64 = counts[n1]
        .iter()
        .enumerate()
        .filter(|(s, _)| (*s as f64 - mean2).abs() >= observed - 1e-9)
        .map(|(_, c)| c)
        .sum();
    (extreme / all).min(1.0)
}
