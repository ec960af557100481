//! Uniform 1-d grids and time-stamped scalar fields on them.

use crate::{Error, Result};

/// Uniform grid `x_i = x_min + i * dx`, `i = 0 .. n-1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1d {
    x_min: f64,
    dx: f64,
    n: usize,
}

const MAX_NODES: usize = 4_000_000;

impl Grid1d {
    /// Grid covering `[x_min, x_max]` with spacing `dx`. The right endpoint
    /// is snapped to the nearest node.
    pub fn new(x_min: f64, x_max: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::InvalidGrid(format!("spacing {dx} must be positive")));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "domain [{x_min}, {x_max}] is empty or non-finite"
            )));
        }
        let n = ((x_max - x_min) / dx).round() as usize + 1;
        if n < 3 {
            return Err(Error::InvalidGrid(format!(
                "only {n} nodes; need at least 3 for an interior"
            )));
        }
        if n > MAX_NODES {
            return Err(Error::InvalidGrid(format!(
                "{n} nodes exceeds the {MAX_NODES} cap"
            )));
        }
        Ok(Self { x_min, dx, n })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    /// Evaluates a function at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.n).map(|i| f(self.x(i))).collect()
    }
}

/// Scalar values on a [`Grid1d`] at a list of stored times, with the time
/// step used by the solver and the Dirichlet boundary pair.
#[derive(Debug, Clone)]
pub struct ScalarField {
    grid: Grid1d,
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
    dt: f64,
    boundary: (f64, f64),
}

impl ScalarField {
    pub(crate) fn new(
        grid: Grid1d,
        times: Vec<f64>,
        values: Vec<Vec<f64>>,
        dt: f64,
        boundary: (f64, f64),
    ) -> Self {
        debug_assert_eq!(times.len(), values.len());
        debug_assert!(values.iter().all(|v| v.len() == grid.len()));
        Self {
            grid,
            times,
            values,
            dt,
            boundary,
        }
    }

    pub fn grid(&self) -> &Grid1d {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Values at the `idx`-th stored time.
    pub fn values_at(&self, idx: usize) -> &[f64] {
        &self.values[idx]
    }

    /// Values at the last stored time.
    pub fn final_values(&self) -> &[f64] {
        self.values.last().expect("at least one stored time")
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// The Dirichlet pair `(left, right)` the solve was pinned to.
    pub fn boundary(&self) -> (f64, f64) {
        self.boundary
    }

    /// Linear interpolation in `x` at stored time `idx`; clamps outside the
    /// domain to the end values.
    pub fn interp(&self, idx: usize, x: f64) -> f64 {
        let v = &self.values[idx];
        let pos = (x - self.grid.x_min()) / self.grid.dx();
        if pos <= 0.0 {
            return v[0];
        }
        let last = (self.grid.len() - 1) as f64;
        if pos >= last {
            return v[self.grid.len() - 1];
        }
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        v[i] * (1.0 - frac) + v[i + 1] * frac
    }

    /// Supremum over nodes and stored times of `|self - other|`; the two
    /// fields must share grid and times.
    pub fn sup_diff(&self, other: &ScalarField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::FieldMismatch("grids differ".into()));
        }
        if self.times != other.times {
            return Err(Error::FieldMismatch("stored times differ".into()));
        }
        let mut sup = 0.0_f64;
        for (a, b) in self.values.iter().zip(&other.values) {
            for (x, y) in a.iter().zip(b) {
                sup = sup.max((x - y).abs());
            }
        }
        Ok(sup)
    }
}
