//! Traveling waves `U(t, x) = W(x - c t)` of the front equation
//! `dU/dt = 1/2 d2U/dx2 - h(U)`: profile construction by shooting, the
//! minimal admissible speed by bisection, and an independent speed estimate
//! from median tracking of the initial-value problem.
//!
//! A profile at speed `c` solves `1/2 W'' + c W' - h(W) = 0` with
//! `W(-inf) = 0`, `W(+inf) = 1`, `W` nondecreasing. Shooting works in the
//! complement `V = 1 - W`, integrating the phase-plane system
//! `V' = P`, `P' = -2 (c P + h(1 - V))` out of the saddle at `(1, 0)` along
//! its unstable direction and watching whether `V` reaches 0 without ever
//! undershooting: monostable sources admit profiles exactly for `c` at or
//! above a critical speed, so admissibility is monotone in `c` and the
//! critical value is a bisection root.

use crate::grid::Grid1d;
use crate::solver::{median_track, solve_fkpp, SolverOptions};
use crate::source::Source;
use crate::{Error, Result};

/// Integration step for the shooting integrator.
const SHOOT_STEP: f64 = 1e-3;
/// Offset from the saddle at which shooting starts.
const SHOOT_OFFSET: f64 = 1e-8;
/// `V` at or below this value counts as having reached the far state.
const ARRIVAL_BAND: f64 = 1e-9;
/// `V` below this value counts as an undershoot (no profile at this speed).
const UNDERSHOOT_BAND: f64 = -1e-12;
/// Shooting window; trajectories that neither arrive nor undershoot by this
/// length are classified by their final monotone descent.
const MAX_SHOOT_LENGTH: f64 = 2_000.0;
/// Grid resolution for positivity and slope scans of the source.
const SCAN_POINTS: usize = 10_000;

/// A traveling-wave profile on a uniform grid, normalized so that the
/// interpolated profile crosses 1/2 at the origin.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    xi0: f64,
    dxi: f64,
    values: Vec<f64>,
    speed: f64,
}

impl WaveProfile {
    /// Leftmost grid coordinate.
    pub fn xi_min(&self) -> f64 {
        self.xi0
    }

    /// Grid spacing.
    pub fn dxi(&self) -> f64 {
        self.dxi
    }

    /// Coordinate of node `i`.
    pub fn xi(&self, i: usize) -> f64 {
        self.xi0 + i as f64 * self.dxi
    }

    /// Profile values `W(xi(i))`, nondecreasing from near 0 to near 1.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Linear interpolation, clamped to 0 left of the grid and 1 right of it.
    pub fn eval(&self, xi: f64) -> f64 {
        let pos = (xi - self.xi0) / self.dxi;
        if pos <= 0.0 {
            return 0.0;
        }
        let last = self.values.len() - 1;
        if pos >= last as f64 {
            return 1.0;
        }
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }
}

/// Requires `h(0) = h(1) = 0` (within 1e-12) and `h > 0` on a fine interior
/// grid; anything else cannot carry a monostable invasion front.
fn check_monostable(h: &Source) -> Result<()> {
    let at0 = h.eval(0.0);
    let at1 = h.eval(1.0);
    if at0.abs() > 1e-12 || at1.abs() > 1e-12 {
        return Err(Error::NonMonostable(format!(
            "source must vanish at 0 and 1; got h(0) = {at0:e}, h(1) = {at1:e}"
        )));
    }
    for i in 1..SCAN_POINTS {
        let v = i as f64 / SCAN_POINTS as f64;
        let hv = h.eval(v);
        if hv <= 0.0 {
            return Err(Error::NonMonostable(format!(
                "source must be positive between the rest states; h({v}) = {hv:e}"
            )));
        }
    }
    Ok(())
}

enum Shot {
    /// Reached `V = 0` monotonically; holds `(W_values, steps_used)`.
    Admissible(Vec<f64>),
    Undershoot,
}

/// Integrates the phase-plane system from the saddle at speed `c` and
/// classifies the trajectory. `keep_profile` controls whether the `W`
/// samples are recorded (bisection only needs the verdict).
fn shoot(h: &Source, c: f64, keep_profile: bool) -> Result<Shot> {
    let d0 = h.derivative_at_zero();
    if !d0.is_finite() || d0 < -1e-12 {
        return Err(Error::NonMonostable(format!(
            "slope at 0 must be finite and nonnegative for shooting; got {d0:e}"
        )));
    }
    let mu = -c + (c * c + 2.0 * d0.max(0.0)).sqrt();
    // A healthy unstable eigenvalue admits a tiny linear seed. When the
    // slope at 0 (nearly) vanishes the departure from the saddle is a slow
    // center-manifold drift, so start farther out with the manifold slope
    // w' = w (-c + sqrt(c^2 + 2 h(w)/w)) to keep the traversal inside the
    // shooting window.
    let eps = if mu >= 0.02 { SHOOT_OFFSET } else { 1e-2 };
    let slope = eps * (-c + (c * c + 2.0 * h.eval(eps) / eps).sqrt());
    let mut v = 1.0 - eps;
    let mut p = -slope;
    let dx = SHOOT_STEP;
    let steps = (MAX_SHOOT_LENGTH / dx) as usize;

    let rhs = |v: f64, p: f64| -> (f64, f64) { (p, -2.0 * (c * p + h.eval(1.0 - v))) };

    let mut profile = if keep_profile {
        let mut w = Vec::with_capacity(65_536);
        w.push(1.0 - v);
        w
    } else {
        Vec::new()
    };

    for _ in 0..steps {
        let (k1v, k1p) = rhs(v, p);
        let (k2v, k2p) = rhs(v + 0.5 * dx * k1v, p + 0.5 * dx * k1p);
        let (k3v, k3p) = rhs(v + 0.5 * dx * k2v, p + 0.5 * dx * k2p);
        let (k4v, k4p) = rhs(v + dx * k3v, p + dx * k3p);
        v += dx / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        p += dx / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if keep_profile {
            profile.push(1.0 - v);
        }
        if v < UNDERSHOOT_BAND {
            return Ok(Shot::Undershoot);
        }
        if v <= ARRIVAL_BAND {
            return Ok(Shot::Admissible(profile));
        }
    }
    // Window exhausted. An inadmissible speed always undershoots, so a
    // trajectory still descending inside (0, 1) is a profile with a slow
    // (weakly decaying) tail; anything that made no real progress is
    // reported as a failure rather than guessed at.
    if v < 1e-4 && p <= 0.0 {
        return Ok(Shot::Admissible(profile));
    }
    Err(Error::BracketFailure(format!(
        "shooting at speed {c} stalled at V = {v:e} after length {MAX_SHOOT_LENGTH}"
    )))
}

/// Builds the traveling-wave profile at speed `c`, or `None` when no
/// profile exists at that speed (speeds below critical). The profile is
/// shifted so the interpolated crossing of 1/2 sits at the origin. Errors
/// when the source is not monostable.
pub fn wavefront(h: &Source, c: f64) -> Result<Option<WaveProfile>> {
    check_monostable(h)?;
    match shoot(h, c, true)? {
        Shot::Undershoot => Ok(None),
        Shot::Admissible(values) => {
            let half_index = values
                .iter()
                .position(|&w| w >= 0.5)
                .expect("profile spans (0, 1), so it crosses 1/2");
            debug_assert!(half_index > 0, "profile starts near 0");
            let (lo, hi) = (values[half_index - 1], values[half_index]);
            let frac = (0.5 - lo) / (hi - lo);
            let xi_half = (half_index as f64 - 1.0 + frac) * SHOOT_STEP;
            Ok(Some(WaveProfile {
                xi0: -xi_half,
                dxi: SHOOT_STEP,
                values,
                speed: c,
            }))
        }
    }
}

#[derive(Debug, Clone)]
pub struct MinimalSpeedOptions {
    /// Verify the bisection answer against [`front_speed_from_tracking`]
    /// and error on disagreement beyond `agreement_tolerance`.
    pub cross_check: bool,
    /// Width of the final bisection bracket.
    pub bisection_tolerance: f64,
    /// Maximum allowed gap between the bisection speed and the tracking
    /// estimate when `cross_check` is on.
    pub agreement_tolerance: f64,
    /// Horizon for the tracking solve.
    pub tracking_horizon: f64,
    /// Grid spacing for the tracking solve.
    pub tracking_dx: f64,
}

impl Default for MinimalSpeedOptions {
    fn default() -> Self {
        Self {
            cross_check: true,
            bisection_tolerance: 1e-3,
            agreement_tolerance: 2e-2,
            tracking_horizon: 40.0,
            tracking_dx: 0.025,
        }
    }
}

/// The smallest speed carrying a traveling-wave profile, found by bisection
/// on shooting admissibility. The bracket starts at
/// `[sqrt(-2 h'(1)), sqrt(2 sup h(v) / (v (1 - v)))]`; the lower endpoint
/// is returned immediately when it is itself admissible (sources dominated
/// by their linearization at 1). With `cross_check` on, the result is
/// validated against the independent median-tracking estimate.
pub fn minimal_speed(h: &Source, opts: &MinimalSpeedOptions) -> Result<f64> {
    check_monostable(h)?;
    let d1 = h.derivative_at_one();
    if !d1.is_finite() {
        return Err(Error::NonMonostable(format!(
            "slope at 1 must be finite; got {d1:e}"
        )));
    }
    let mut ratio_sup = h.derivative_at_zero().max(-d1).max(0.0);
    for i in 1..SCAN_POINTS {
        let v = i as f64 / SCAN_POINTS as f64;
        ratio_sup = ratio_sup.max(h.eval(v) / (v * (1.0 - v)));
    }
    if !ratio_sup.is_finite() || ratio_sup <= 0.0 {
        return Err(Error::NonMonostable(format!(
            "sup of h(v) / (v (1 - v)) must be positive and finite; got {ratio_sup:e}"
        )));
    }
    let mut lo = (-2.0 * d1.min(0.0)).sqrt();
    let mut hi = (2.0 * ratio_sup).sqrt();

    let speed = if lo > 0.0 && matches!(shoot(h, lo, false)?, Shot::Admissible(_)) {
        lo
    } else {
        // The upper endpoint bounds the critical speed mathematically, but
        // give the classifier numerical headroom before declaring failure.
        let mut attempts = 0;
        while !matches!(shoot(h, hi, false)?, Shot::Admissible(_)) {
            attempts += 1;
            if attempts > 4 {
                return Err(Error::BracketFailure(format!(
                    "no admissible speed found up to {hi}"
                )));
            }
            hi *= 1.5;
        }
        while hi - lo > opts.bisection_tolerance {
            let mid = 0.5 * (lo + hi);
            match shoot(h, mid, false)? {
                Shot::Admissible(_) => hi = mid,
                Shot::Undershoot => lo = mid,
            }
        }
        0.5 * (lo + hi)
    };

    if opts.cross_check {
        let tracked =
            front_speed_from_tracking(h, speed, opts.tracking_horizon, opts.tracking_dx)?;
        if (tracked - speed).abs() > opts.agreement_tolerance {
            return Err(Error::SpeedMismatch {
                bisection: speed,
                tracking: tracked,
            });
        }
    }
    Ok(speed)
}

/// Independent front-speed estimate: solve the initial-value problem from a
/// centered step datum on a domain sized by `c_hint`, track the median over
/// the second half of the horizon, and regress the median path on
/// `(t, ln t, 1)`. The coefficient on `t` is the speed; the `ln t`
/// regressor absorbs the slowly decaying logarithmic drift of pulled
/// fronts, which a plain slope over a finite window would fold into the
/// answer.
pub fn front_speed_from_tracking(h: &Source, c_hint: f64, horizon: f64, dx: f64) -> Result<f64> {
    if !(c_hint > 0.0) || !(horizon > 4.0) || !(dx > 0.0) {
        return Err(Error::InvalidOptions(format!(
            "need positive hint, dx, and a horizon above 4; got c_hint = {c_hint}, \
             horizon = {horizon}, dx = {dx}"
        )));
    }
    // The leading tail of the front decays like exp(-c xi) with a linear
    // prefactor, so 20 units of headroom past the predicted front position
    // keep the invaded side clean over the horizon. The contamination
    // check stays off: sources with a vanishing slope at 0 relax behind
    // the front only algebraically, so the wake sits above any fixed
    // tolerance at the left edge forever, yet its influence is confined to
    // a diffusive layer that cannot reach the median region over the
    // horizon.
    let grid = Grid1d::new(-12.0, c_hint * horizon + 20.0, dx)?;
    let first = (horizon / 2.0).ceil();
    let mut store_times = Vec::new();
    let mut t = first;
    while t <= horizon + 1e-9 {
        store_times.push(t);
        t += 1.0;
    }
    let step = |x: f64| {
        if x < 0.0 {
            0.0
        } else if x == 0.0 {
            0.5
        } else {
            1.0
        }
    };
    let opts = SolverOptions {
        boundary_check: crate::solver::BoundaryCheck::Never,
        ..SolverOptions::default()
    };
    let field = solve_fkpp(h, None, &step, grid, &store_times, &opts)?;
    let medians = median_track(&field)?;

    // Least squares for M(t) = a t + b ln t + c via the 3x3 normal
    // equations.
    let mut ata = [[0.0_f64; 3]; 3];
    let mut atb = [0.0_f64; 3];
    for &(t, m) in &medians {
        let row = [t, t.ln(), 1.0];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * m;
        }
    }
    for pivot in 0..3 {
        let mut best = pivot;
        for r in pivot + 1..3 {
            if ata[r][pivot].abs() > ata[best][pivot].abs() {
                best = r;
            }
        }
        ata.swap(pivot, best);
        atb.swap(pivot, best);
        let p = ata[pivot][pivot];
        if p.abs() < 1e-12 {
            return Err(Error::InvalidOptions(
                "median regression is singular; widen the horizon".into(),
            ));
        }
        for r in 0..3 {
            if r == pivot {
                continue;
            }
            let f = ata[r][pivot] / p;
            for cidx in 0..3 {
                ata[r][cidx] -= f * ata[pivot][cidx];
            }
            atb[r] -= f * atb[pivot];
        }
    }
    Ok(atb[0] / ata[0][0])
}
