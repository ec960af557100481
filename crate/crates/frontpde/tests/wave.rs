//! Speed selection checks: the three reference sources, the scaling law,
//! agreement between the two independent speed routes, and median tracking
//! against known front motion.

use frontpde::{
    front_speed_from_tracking, median_track, minimal_speed, solve_fkpp, wavefront, Grid1d,
    MinimalSpeedOptions, SolverOptions, Source,
};
use particles::PairDistribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn ols_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut st, mut sm, mut stt, mut stm) = (0.0, 0.0, 0.0, 0.0);
    for &(t, m) in points {
        st += t;
        sm += m;
        stt += t * t;
        stm += t * m;
    }
    (n * stm - st * sm) / (n * stt - st * st)
}

#[test]
fn minimal_speed_of_the_logistic_source_is_sqrt_two() {
    let h = Source::logistic(1.0);
    let c = minimal_speed(&h, &MinimalSpeedOptions::default()).expect("finds speed");
    assert!((c - SQRT2).abs() <= 2e-2, "got {c}");
}

#[test]
fn minimal_speed_with_degenerate_slope_at_zero() {
    // h(v) = v^2 (1 - v): substituting u = 1 - v turns the profile
    // equation into the pulled case u (1 - u)^2, so the speed is sqrt(2).
    let h = Source::custom(|v| v * v * (1.0 - v), 0.0, -1.0);
    let c = minimal_speed(&h, &MinimalSpeedOptions::default()).expect("finds speed");
    assert!((c - SQRT2).abs() <= 2e-2, "got {c}");
}

#[test]
fn minimal_speed_scales_with_the_source_amplitude() {
    let h = Source::logistic(2.0);
    let c = minimal_speed(&h, &MinimalSpeedOptions::default()).expect("finds speed");
    assert!((c - 2.0).abs() <= 2e-2, "got {c}");

    let opts = MinimalSpeedOptions {
        cross_check: false,
        ..MinimalSpeedOptions::default()
    };
    for amp in [0.5, 2.0] {
        let scaled = Source::logistic(1.0).scaled(amp);
        let cs = minimal_speed(&scaled, &opts).expect("finds speed");
        assert!(
            (cs - amp.sqrt() * SQRT2).abs() <= 2e-2,
            "amplitude {amp}: got {cs}"
        );
    }
}

#[test]
fn bisection_and_tracking_agree_on_the_logistic_speed() {
    let h = Source::logistic(1.0);
    let opts = MinimalSpeedOptions {
        cross_check: false,
        ..MinimalSpeedOptions::default()
    };
    let by_bisection = minimal_speed(&h, &opts).expect("finds speed");
    let by_tracking =
        front_speed_from_tracking(&h, by_bisection, 40.0, 0.025).expect("tracks front");
    assert!(
        (by_bisection - by_tracking).abs() <= 2e-2,
        "bisection {by_bisection} vs tracking {by_tracking}"
    );
}

/// Randomized jump models: the selected speed always sits inside the
/// analytic bracket, and at least the linearized lower bound.
#[test]
fn random_jump_sources_respect_the_speed_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let opts = MinimalSpeedOptions {
        cross_check: false,
        ..MinimalSpeedOptions::default()
    };
    for _ in 0..20 {
        let k = rng.gen_range(2usize..=5);
        let mut weights = vec![(1usize, k, rng.gen_range(0.3f64..1.0))];
        for _ in 0..rng.gen_range(0usize..=2) {
            let i = rng.gen_range(1..k);
            let j = rng.gen_range(i + 1..=k);
            if !weights.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
                weights.push((i, j, rng.gen_range(0.1f64..1.0)));
            }
        }
        let total: f64 = weights.iter().map(|w| w.2).sum();
        for w in &mut weights {
            w.2 /= total;
        }
        let lambda = rng.gen_range(0.3f64..1.5);
        let pairs = PairDistribution::new(k, weights).expect("valid pairs");
        let h = frontpde::jump_source_limit(lambda, &pairs).expect("valid source");

        let c = minimal_speed(&h, &opts).expect("finds speed");
        let lower = (-2.0 * h.derivative_at_one()).sqrt();
        let sup = (1..10_000)
            .map(|i| {
                let v = i as f64 / 10_000.0;
                h.eval(v) / (v * (1.0 - v))
            })
            .fold(0.0_f64, f64::max)
            .max(h.derivative_at_zero())
            .max(-h.derivative_at_one());
        let upper = (2.0 * sup).sqrt();
        assert!(
            c >= lower - 1e-3 && c <= upper + 1e-3,
            "k = {k}, lambda = {lambda}: speed {c} outside [{lower}, {upper}]"
        );
    }
}

/// A translated profile is an exact traveling solution, so its median
/// moves at the wave speed.
#[test]
fn median_of_a_translated_profile_moves_at_the_wave_speed() {
    let h = Source::logistic(1.0);
    let c = SQRT2 + 0.2;
    let profile = wavefront(&h, c)
        .expect("monostable")
        .expect("supercritical speed is admissible");
    // A supercritical wave approaches 1 at the slow rate
    // c - sqrt(c^2 + 2 h'(1)), about 0.84 here, so the right margin must be
    // generous for the tail to stay below the contamination threshold.
    let grid = Grid1d::new(-40.0, 35.0, 0.05).expect("valid grid");
    let times: Vec<f64> = (0..=12).map(|i| 0.5 * i as f64).collect();
    let field = solve_fkpp(
        &h,
        None,
        &|x| profile.eval(x),
        grid,
        &times,
        &SolverOptions::default(),
    )
    .expect("solves");
    let medians = median_track(&field).expect("crossings exist");
    let slope = ols_slope(&medians);
    assert!((slope - c).abs() <= 1e-2, "slope {slope} vs speed {c}");
}

/// From a step datum the median advances at the minimal speed, up to the
/// slowly decaying logarithmic lag of pulled fronts: a plain slope over
/// times 20..40 lands within 5e-2 of sqrt(2).
#[test]
fn median_of_a_step_datum_approaches_sqrt_two() {
    let h = Source::logistic(1.0);
    let grid = Grid1d::new(-12.0, SQRT2 * 40.0 + 20.0, 0.025).expect("valid grid");
    let times: Vec<f64> = (20..=40).map(|i| i as f64).collect();
    let step = |x: f64| {
        if x < 0.0 {
            0.0
        } else if x == 0.0 {
            0.5
        } else {
            1.0
        }
    };
    let field = solve_fkpp(&h, None, &step, grid, &times, &SolverOptions::default())
        .expect("solves");
    let medians = median_track(&field).expect("crossings exist");
    let slope = ols_slope(&medians);
    assert!((slope - SQRT2).abs() <= 5e-2, "slope {slope}");
}
