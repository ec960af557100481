//! Particle configurations and the rank operators acting on them.
//!
//! A configuration stores `(label, position)` pairs in insertion order; all
//! rank queries go through [`ParticleConfig::sort_permutation`], which sorts
//! by `(position, label)`. Positions at `-inf` sort before every finite
//! position. `-0.0` is canonicalized to `+0.0` at construction so exact ties
//! are always resolved by the label rule, never by the sign bit.

use crate::{Error, Result};

/// Stable particle identity. Labels are unique within a configuration and
/// fresh labels grow monotonically, so a particle appended at an existing
/// position always becomes the higher quantile of the tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u64);

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Slot {
    label: Label,
    position: f64,
}

/// Finitely many labeled particles on `{-inf} union R`.
///
/// Invariants: at least one particle; labels unique; every position finite or
/// exactly `f64::NEG_INFINITY` (never `NaN`, never `+inf`, never `-0.0`).
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleConfig {
    slots: Vec<Slot>,
    next_label: u64,
}

fn canonical_position(x: f64) -> Result<f64> {
    if x.is_nan() || x == f64::INFINITY {
        return Err(Error::InvalidPosition(x));
    }
    // Maps -0.0 to +0.0; leaves every other value untouched.
    Ok(if x == 0.0 { 0.0 } else { x })
}

impl ParticleConfig {
    /// Builds a configuration with labels `1..=n` in the given order.
    pub fn from_positions(positions: &[f64]) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::EmptyConfig);
        }
        let slots = positions
            .iter()
            .enumerate()
            .map(|(idx, &x)| {
                Ok(Slot {
                    label: Label(idx as u64 + 1),
                    position: canonical_position(x)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            next_label: slots.len() as u64 + 1,
            slots,
        })
    }

    /// Builds a configuration from explicit `(label, position)` pairs.
    pub fn from_labeled(pairs: &[(u64, f64)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptyConfig);
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut slots = Vec::with_capacity(pairs.len());
        let mut max_label = 0;
        for &(label, x) in pairs {
            if !seen.insert(label) {
                return Err(Error::DuplicateLabel(label));
            }
            max_label = max_label.max(label);
            slots.push(Slot {
                label: Label(label),
                position: canonical_position(x)?,
            });
        }
        Ok(Self {
            slots,
            next_label: max_label + 1,
        })
    }

    /// Number of particles.
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    /// Always false: configurations are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Iterates over `(label, position)` pairs in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (Label, f64)> + '_ {
        self.slots.iter().map(|s| (s.label, s.position))
    }

    /// Position of the particle with the given label, if present.
    pub fn position_of(&self, label: Label) -> Option<f64> {
        self.slots
            .iter()
            .find(|s| s.label == label)
            .map(|s| s.position)
    }

    /// Number of particles at `-inf`.
    pub fn minus_inf_count(&self) -> usize {
        self.slots
            .iter()
            .filter(|s| s.position == f64::NEG_INFINITY)
            .count()
    }

    /// The sorting permutation `sigma`: storage indices ordered so that
    /// `sigma[0]` is quantile 1. Particles are compared by position, ties by
    /// label ascending; `-inf` positions sort first.
    pub fn sort_permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.slots.len()).collect();
        perm.sort_unstable_by(|&a, &b| {
            let sa = &self.slots[a];
            let sb = &self.slots[b];
            sa.position
                .partial_cmp(&sb.position)
                .expect("positions are never NaN")
                .then(sa.label.cmp(&sb.label))
        });
        perm
    }

    /// Positions in quantile order (the order statistics `zeta[1..=N]`).
    pub fn order_statistics(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.slots.iter().map(|s| s.position).collect();
        xs.sort_unstable_by(|a, b| a.partial_cmp(b).expect("positions are never NaN"));
        xs
    }

    /// The `i`-th order statistic, `i` 1-based.
    pub fn quantile(&self, i: usize) -> Result<f64> {
        if i == 0 || i > self.len() {
            return Err(Error::QuantileOutOfRange {
                quantile: i,
                len: self.len(),
            });
        }
        let perm = self.sort_permutation();
        Ok(self.slots[perm[i - 1]].position)
    }

    /// Label currently holding quantile `i` (1-based).
    pub fn quantile_label(&self, i: usize) -> Result<Label> {
        if i == 0 || i > self.len() {
            return Err(Error::QuantileOutOfRange {
                quantile: i,
                len: self.len(),
            });
        }
        let perm = self.sort_permutation();
        Ok(self.slots[perm[i - 1]].label)
    }

    /// The jump operator: the particle at quantile `i` takes the position of
    /// the particle at quantile `j`; every other particle is unchanged.
    pub fn gamma_jump(&self, i: usize, j: usize) -> Result<Self> {
        let n = self.len();
        for q in [i, j] {
            if q == 0 || q > n {
                return Err(Error::QuantileOutOfRange {
                    quantile: q,
                    len: n,
                });
            }
        }
        let perm = self.sort_permutation();
        let target = self.slots[perm[j - 1]].position;
        let mut out = self.clone();
        out.slots[perm[i - 1]].position = target;
        Ok(out)
    }

    /// Appends a particle at `x` under a fresh label strictly larger than all
    /// existing labels, so it becomes the higher quantile of any exact tie.
    pub fn append(&self, x: f64) -> Result<Self> {
        let position = canonical_position(x)?;
        let mut out = self.clone();
        out.slots.push(Slot {
            label: Label(out.next_label),
            position,
        });
        out.next_label += 1;
        Ok(out)
    }

    /// Removes the particle at quantile `j` (1-based).
    pub fn trim(&self, j: usize) -> Result<Self> {
        if self.len() < 2 {
            return Err(Error::TrimSingleton);
        }
        if j == 0 || j > self.len() {
            return Err(Error::QuantileOutOfRange {
                quantile: j,
                len: self.len(),
            });
        }
        let perm = self.sort_permutation();
        let mut out = self.clone();
        out.slots.remove(perm[j - 1]);
        Ok(out)
    }

    /// Empirical CDF `F(x) = #\{i: zeta(i) <= x\} / N` for finite `x`.
    /// Particles at `-inf` count for every finite `x`.
    pub fn empirical_cdf(&self, x: f64) -> f64 {
        let count = self.slots.iter().filter(|s| s.position <= x).count();
        count as f64 / self.len() as f64
    }
}

/// The mass-transport partial order: `lower` is dominated by `upper` iff
/// `N <= N'` and `zeta[i] <= zeta'[i + N' - N]` for every `i`, i.e. each
/// order statistic of `lower` sits below the corresponding top-aligned order
/// statistic of `upper`.
pub fn dominates(lower: &ParticleConfig, upper: &ParticleConfig) -> bool {
    first_violation(lower, upper).is_none()
}

/// Like [`dominates`], but returns the smallest 1-based quantile of `lower`
/// that breaks the order, if any. Used by coupling audits for diagnostics.
pub fn first_violation(lower: &ParticleConfig, upper: &ParticleConfig) -> Option<usize> {
    let n = lower.len();
    let m = upper.len();
    if n > m {
        return Some(1);
    }
    let off = m - n;
    let lo = lower.order_statistics();
    let hi = upper.order_statistics();
    (0..n).find(|&i| lo[i] > hi[i + off]).map(|i| i + 1)
}
