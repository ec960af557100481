//! Labeled particle configurations on `{-inf} union R` and the deterministic
//! algebra rank-driven particle systems are built from.
//!
//! The pieces fit together as follows:
//!
//! - [`ParticleConfig`]: finitely many particles, each a `(label, position)`
//!   pair. Positions are finite or exactly `-inf`; labels are stable unique
//!   integers. Sorting is by `(position, label)`, so exact ties are broken
//!   deterministically by label.
//! - Rank operators on configurations: [`ParticleConfig::gamma_jump`] (the
//!   quantile-`i`-onto-quantile-`j` jump), [`ParticleConfig::append`] (new
//!   particle with a fresh label), [`ParticleConfig::trim`] (remove a
//!   quantile), and the mass-transport partial order [`dominates`].
//! - [`KillMeasure`]: a probability on `{-inf} union [0,1)` written as an
//!   atom at `-inf`, a finite atom list, and a piecewise-polynomial density.
//!   Supports exact CDF evaluation, left limits, generalized inverses, and
//!   kill-quantile sampling.
//! - [`BirthFunction`]: a bounded rate profile on `[0,1]` evaluated at
//!   quantile fractions.
//! - [`KillSchedule`]: one `KillMeasure` per branching-quantile index.
//! - [`PairDistribution`]: a jump law on ordered pairs `1 <= i < j <= k`.
//!
//! Everything here is immutable after construction and free of interior
//! mutability, so values can be shared across worker threads.

#![forbid(unsafe_code)]

mod birth;
mod combin;
mod config;
mod measure;
mod pairs;
mod presets;
mod schedule;

pub use birth::BirthFunction;
pub use combin::{choose_f64, choose_u128};
pub use config::{dominates, first_violation, Label, ParticleConfig};
pub use measure::{DensityPiece, KillDecision, KillMeasure};
pub use pairs::PairDistribution;
pub use presets::{parse_birth_preset, parse_kill_preset, parse_pair_preset};
pub use schedule::KillSchedule;

/// Errors produced by constructors and rank operators.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("position must be finite or -inf, got {0}")]
    InvalidPosition(f64),
    #[error("a configuration needs at least one particle")]
    EmptyConfig,
    #[error("duplicate label {0}")]
    DuplicateLabel(u64),
    #[error("quantile {quantile} out of range 1..={len}")]
    QuantileOutOfRange { quantile: usize, len: usize },
    #[error("cannot trim a singleton configuration")]
    TrimSingleton,
    #[error("kill measure invalid: {0}")]
    InvalidMeasure(String),
    #[error("generalized inverse needs y in (0,1], got {0}")]
    InverseArgOutOfRange(f64),
    #[error("kill sampling needs branching quantile j >= 2, got {0}")]
    KillQuantileTooSmall(usize),
    #[error("kill schedule has no measure for index {index} (table length {len})")]
    ScheduleIndexOutOfRange { index: usize, len: usize },
    #[error("birth function invalid: {0}")]
    InvalidBirth(String),
    #[error("pair distribution invalid: {0}")]
    InvalidPairs(String),
    #[error("pair-weight rank {rank} out of range 1..={max}")]
    PairRankOutOfRange { rank: usize, max: usize },
    #[error("unknown preset \"{0}\"")]
    UnknownPreset(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
