//! Jump-pair laws: distributions on ordered rank pairs
//! `{(i, j) : 1 <= i < j <= k}` selecting, inside a sampled k-set, which
//! rank jumps onto which.

use std::collections::BTreeMap;

use crate::{Error, Result};

/// A probability on `{(i, j) : 1 <= i < j <= k}`. Stored as the support
/// with weights, sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDistribution {
    k: usize,
    weights: Vec<(usize, usize, f64)>,
}

const WEIGHT_TOLERANCE: f64 = 1e-9;

impl PairDistribution {
    /// Builds and validates a law from `(i, j, weight)` triples.
    pub fn new(k: usize, weights: Vec<(usize, usize, f64)>) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidPairs(msg));
        if k < 2 {
            return invalid(format!("set size k = {k} must be at least 2"));
        }
        let mut seen = BTreeMap::new();
        for &(i, j, w) in &weights {
            if !(1 <= i && i < j && j <= k) {
                return invalid(format!("pair ({i}, {j}) outside 1 <= i < j <= {k}"));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return invalid(format!("weight {w} for ({i}, {j}) negative or non-finite"));
            }
            if seen.insert((i, j), w).is_some() {
                return invalid(format!("duplicate pair ({i}, {j})"));
            }
        }
        let total: f64 = seen.values().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return invalid(format!("weights sum to {total}, not 1"));
        }
        let weights = seen.into_iter().map(|((i, j), w)| (i, j, w)).collect();
        Ok(Self { k, weights })
    }

    /// The size of the rank sets this law acts inside.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Support with weights, sorted by `(i, j)`.
    pub fn weights(&self) -> &[(usize, usize, f64)] {
        &self.weights
    }

    /// Probability that the jumping rank is at most `r` while the target
    /// rank exceeds `r`: the mass crossing the cut after rank `r`.
    pub fn cut_crossing_mass(&self, r: usize) -> Result<f64> {
        if !(1 <= r && r < self.k) {
            return Err(Error::PairRankOutOfRange {
                rank: r,
                max: self.k - 1,
            });
        }
        Ok(self
            .weights
            .iter()
            .filter(|&&(i, j, _)| i <= r && r < j)
            .map(|&(_, _, w)| w)
            .sum())
    }

    /// Draws a pair from the uniform `u in [0, 1)` by cumulative scan.
    pub fn sample(&self, u: f64) -> (usize, usize) {
        let mut cum = 0.0;
        for &(i, j, w) in &self.weights {
            cum += w;
            if u < cum {
                return (i, j);
            }
        }
        let &(i, j, _) = self.weights.last().expect("weights sum to 1, never empty");
        (i, j)
    }

    /// Point mass on a single pair.
    pub fn delta(k: usize, i: usize, j: usize) -> Result<Self> {
        Self::new(k, vec![(i, j, 1.0)])
    }

    /// Point mass on `(k-1, k)`: the second-highest rank jumps onto the
    /// highest.
    pub fn adjacent_top(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidPairs(format!("k = {k} must be at least 2")));
        }
        Self::delta(k, k - 1, k)
    }

    /// Point mass on `(1, k)`: the lowest rank jumps onto the highest.
    pub fn spread(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidPairs(format!("k = {k} must be at least 2")));
        }
        Self::delta(k, 1, k)
    }

    /// Uniform over all `k (k-1) / 2` pairs.
    pub fn uniform_all(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidPairs(format!("k = {k} must be at least 2")));
        }
        let n_pairs = k * (k - 1) / 2;
        let w = 1.0 / n_pairs as f64;
        let weights = (1..k)
            .flat_map(|i| ((i + 1)..=k).map(move |j| (i, j, w)))
            .collect();
        Self::new(k, weights)
    }

    /// Adjacent-pair law realizing a target profile: the total rate
    /// `lambda = sum_{r=1}^{k-1} h(r/k)` and weights
    /// `p(r, r+1) = h(r/k) / lambda`. Requires `h >= 0` at the sample
    /// points with a positive sum.
    pub fn bernstein(k: usize, h: impl Fn(f64) -> f64) -> Result<(f64, Self)> {
        if k < 2 {
            return Err(Error::InvalidPairs(format!("k = {k} must be at least 2")));
        }
        let samples: Vec<f64> = (1..k).map(|r| h(r as f64 / k as f64)).collect();
        if samples.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::InvalidPairs(
                "profile negative or non-finite at a sample point".into(),
            ));
        }
        let lambda: f64 = samples.iter().sum();
        if lambda <= 0.0 {
            return Err(Error::InvalidPairs(
                "profile vanishes at every sample point".into(),
            ));
        }
        let weights = samples
            .iter()
            .enumerate()
            .map(|(idx, &v)| (idx + 1, idx + 2, v / lambda))
            .collect();
        Ok((lambda, Self::new(k, weights)?))
    }
}
