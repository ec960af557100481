//! Reaction-diffusion front machinery: the scalar equation
//! `dU/dt = 1/2 d2U/dx2 - h(U) + g` on a truncated line with Dirichlet
//! boundaries, the reaction terms induced by rank-jump particle dynamics,
//! hydrodynamic tail sources built from birth rates and kill measures,
//! traveling-wave profiles, and minimal front speeds.
//!
//! The crate is organized around three layers:
//!
//! * [`Source`]: evaluable reaction terms with exact endpoint derivatives —
//!   the mean-field jump source in Bernstein form, its finite-population
//!   counterpart, symbolic birth/kill tail fluxes, and custom closures.
//! * [`solve_fkpp`] / [`solve_tail_hydro`]: a monotone second-order scheme
//!   (Strang-split Heun reaction around Crank-Nicolson diffusion, Rannacher
//!   start) producing [`ScalarField`] snapshots, plus [`median_track`] and
//!   [`stability_gap`] built on it.
//! * [`wavefront`] / [`minimal_speed`]: shooting classification of monotone
//!   profiles and bisection for the minimal admissible speed, cross-checked
//!   against direct front tracking.

#![forbid(unsafe_code)]

mod grid;
mod logpoly;
mod solver;
mod source;
mod wave;

pub use grid::{Grid1d, ScalarField};
pub use solver::{
    median_track, solve_fkpp, solve_tail_hydro, stability_gap, BoundaryCheck, Forcing,
    SolverOptions,
};
pub use source::{
    finite_weight_rational, hypergeometric_ratio_rational, jump_source_finite,
    jump_source_limit, tail_sources, Source, SourceKind, TailSources,
};
pub use wave::{
    front_speed_from_tracking, minimal_speed, wavefront, MinimalSpeedOptions, WaveProfile,
};

/// Errors from grid construction, solving, and wave analysis.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("invalid source: {0}")]
    InvalidSource(String),
    #[error(
        "solution at t = {time} deviates from the {side} boundary value by {deviation:.3e} \
         (tolerance {tolerance:.1e}); widen the domain on that side"
    )]
    BoundaryContamination {
        time: f64,
        side: &'static str,
        deviation: f64,
        tolerance: f64,
    },
    #[error("reaction term is not monostable: {0}")]
    NonMonostable(String),
    #[error("minimal-speed bracket failure: {0}")]
    BracketFailure(String),
    #[error("speed estimates disagree: bisection {bisection:.4} vs front tracking {tracking:.4}")]
    SpeedMismatch { bisection: f64, tracking: f64 },
    #[error("field does not cross 1/2 at stored time {0}")]
    NoCrossing(f64),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
