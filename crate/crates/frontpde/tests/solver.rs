//! Accuracy and structure checks for the front-equation solver: the exact
//! heat kernel, second-order self-convergence, the complement relation
//! between the tail and CDF forms, pointwise source domination, forcing
//! sensitivity, and order/range preservation on randomized inputs.

use frontpde::{
    median_track, solve_fkpp, solve_tail_hydro, stability_gap, BoundaryCheck, Grid1d,
    SolverOptions, Source,
};
use particles::{BirthFunction, KillMeasure, PairDistribution};
use proptest::prelude::*;
use statrs::function::erf::erf;

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn std_normal_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / std::f64::consts::SQRT_2))
}

fn centered_step(x: f64) -> f64 {
    match x.partial_cmp(&0.0).expect("finite") {
        std::cmp::Ordering::Less => 0.0,
        std::cmp::Ordering::Equal => 0.5,
        std::cmp::Ordering::Greater => 1.0,
    }
}

/// With no reaction the solve is the heat semigroup: from a centered step,
/// the solution at time t is the Gaussian CDF with variance t.
#[test]
fn heat_kernel_from_step_datum() {
    let zero = Source::custom(|_| 0.0, 0.0, 0.0);
    let grid = Grid1d::new(-8.0, 8.0, 0.01).expect("valid grid");
    let field = solve_fkpp(
        &zero,
        None,
        &centered_step,
        grid,
        &[1.0],
        &SolverOptions::default(),
    )
    .expect("solves");
    let mut worst = 0.0_f64;
    for (i, &v) in field.final_values().iter().enumerate() {
        worst = worst.max((v - std_normal_cdf(grid.x(i))).abs());
    }
    assert!(worst <= 1e-3, "sup error vs heat kernel: {worst:e}");
}

/// Halving both steps multiplies the error of a second-order scheme by
/// about 4; measured by self-convergence on nested grids with dt
/// proportional to dx.
#[test]
fn self_convergence_is_second_order() {
    let h = Source::logistic(1.0);
    let t = 1.0;
    let solve_at = |dx: f64| {
        let grid = Grid1d::new(-22.0, 22.0, dx).expect("valid grid");
        let opts = SolverOptions {
            dt: Some(0.05 * dx),
            ..SolverOptions::default()
        };
        solve_fkpp(&h, None, &logistic, grid, &[t], &opts).expect("solves")
    };
    let coarse = solve_at(0.2);
    let mid = solve_at(0.1);
    let fine = solve_at(0.05);

    // Compare on the coarse nodes, which the finer grids contain.
    let sup_on_coarse = |a: &frontpde::ScalarField, b: &frontpde::ScalarField, refine: usize| {
        a.final_values()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v - b.final_values()[refine * i]).abs())
            .fold(0.0_f64, f64::max)
    };
    let e1 = sup_on_coarse(&coarse, &mid, 2);
    let e2 = {
        let mid_vals = mid.final_values();
        let fine_vals = fine.final_values();
        mid_vals
            .iter()
            .enumerate()
            .map(|(i, &v)| (v - fine_vals[2 * i]).abs())
            .fold(0.0_f64, f64::max)
    };
    let ratio = e1 / e2;
    assert!(
        (3.0..=5.0).contains(&ratio),
        "errors {e1:e} -> {e2:e}, ratio {ratio}"
    );
}

/// For the linear birth profile with uniform kill, the tail equation is the
/// exact complement of the logistic front equation: V = 1 - U.
#[test]
fn tail_equation_complements_the_cdf_equation() {
    let grid = Grid1d::new(-22.0, 22.0, 0.05).expect("valid grid");
    let times = [0.5, 1.0, 2.0];

    let b = BirthFunction::linear();
    let d = KillMeasure::uniform();
    let tail = solve_tail_hydro(
        &b,
        &d,
        &|x| 1.0 - logistic(x),
        grid,
        &times,
        &SolverOptions::default(),
    )
    .expect("solves");

    let h = Source::logistic(1.0);
    let cdf = solve_fkpp(&h, None, &logistic, grid, &times, &SolverOptions::default())
        .expect("solves");

    let mut worst = 0.0_f64;
    for idx in 0..times.len() {
        for (v, u) in tail.values_at(idx).iter().zip(cdf.values_at(idx)) {
            worst = worst.max((v - (1.0 - u)).abs());
        }
    }
    assert!(worst <= 1e-6, "complement mismatch {worst:e}");
}

/// Raising the branch-size parameter k weakens the kill flux, so the tail
/// front for k = 8 dominates the k = 4 front pointwise at every time.
#[test]
fn larger_branch_parameter_gives_a_dominating_tail_front() {
    let grid = Grid1d::new(-18.0, 18.0, 0.05).expect("valid grid");
    let times = [0.5, 1.0, 2.0];
    let b = BirthFunction::one();
    let datum = |x: f64| 1.0 - centered_step(x);
    let solve_k = |k: usize| {
        let d = KillMeasure::dk(k).expect("valid");
        solve_tail_hydro(&b, &d, &datum, grid, &times, &SolverOptions::default())
            .expect("solves")
    };
    let v4 = solve_k(4);
    let v8 = solve_k(8);
    for idx in 0..times.len() {
        for (lo, hi) in v4.values_at(idx).iter().zip(v8.values_at(idx)) {
            assert!(hi - lo >= -1e-10, "domination fails: {lo} vs {hi}");
        }
    }
}

/// The response to a constant forcing is linear at small amplitude: gaps
/// under eps and eps/10 differ by a factor near 10.
#[test]
fn forcing_response_scales_linearly() {
    let h = Source::logistic(1.0);
    let grid = Grid1d::new(-20.0, 20.0, 0.05).expect("valid grid");
    let zero: frontpde::Forcing = &|_, _| 0.0;
    let gap_at = |eps: f64| {
        let bump: Box<dyn Fn(f64, f64) -> f64 + Sync> = Box::new(move |_, _| eps);
        stability_gap(
            &h,
            &logistic,
            &logistic,
            Some(zero),
            Some(&*bump),
            grid,
            1.0,
            &SolverOptions::default(),
        )
        .expect("solves")
    };
    let big = gap_at(1e-2);
    let small = gap_at(1e-3);
    let ratio = big / small;
    assert!(
        (8.0..=12.0).contains(&ratio),
        "gaps {big:e} / {small:e} = {ratio}"
    );
}

/// A shifted copy of the same datum keeps a positive gap bounded by the
/// sup distance of the data (the comparison principle caps growth).
#[test]
fn shifted_datum_gap_is_positive_and_bounded() {
    let h = Source::logistic(1.0);
    let grid = Grid1d::new(-22.0, 22.0, 0.05).expect("valid grid");
    let shifted = |x: f64| logistic(x - 0.5);
    let opts = SolverOptions {
        boundary_check: BoundaryCheck::Never,
        ..SolverOptions::default()
    };
    let gap = stability_gap(&h, &logistic, &shifted, None, None, grid, 1.0, &opts)
        .expect("solves");
    let datum_gap = grid
        .points()
        .into_iter()
        .map(|x| (logistic(x) - shifted(x)).abs())
        .fold(0.0_f64, f64::max);
    assert!(gap > 0.01, "gap {gap} unexpectedly small");
    // Gronwall: the gap grows at most like exp(t sup |h'|) with t = 1.
    let bound = datum_gap * 1.0_f64.exp() + 1e-12;
    assert!(gap <= bound, "gap {gap} exceeds Gronwall bound {bound}");
}

/// Median tracking on an antisymmetric datum with no crossings errors out.
#[test]
fn median_track_reports_missing_crossings() {
    let h = Source::custom(|_| 0.0, 0.0, 0.0);
    let grid = Grid1d::new(-5.0, 5.0, 0.1).expect("valid grid");
    let opts = SolverOptions {
        boundary_check: BoundaryCheck::Never,
        ..SolverOptions::default()
    };
    let field = solve_fkpp(&h, None, &|x| 0.2 * logistic(x), grid, &[0.5], &opts)
        .expect("solves");
    assert!(matches!(
        median_track(&field),
        Err(frontpde::Error::NoCrossing(_))
    ));
}

fn random_limit_source(k: usize, lambda: f64, extra: Vec<(usize, usize, f64)>) -> Source {
    let mut weights = vec![(1usize, k, 1.0_f64)];
    for (i, j, w) in extra {
        if i < j && j <= k && !weights.iter().any(|&(a, b, _)| (a, b) == (i, j)) {
            weights.push((i, j, w));
        }
    }
    let total: f64 = weights.iter().map(|w| w.2).sum();
    for w in &mut weights {
        w.2 /= total;
    }
    let pairs = PairDistribution::new(k, weights).expect("valid pairs");
    frontpde::jump_source_limit(lambda, &pairs).expect("valid source")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Ordered initial data stay ordered at every stored time: the scheme
    /// is monotone, so the discrete comparison principle holds to roundoff.
    #[test]
    fn ordered_data_stay_ordered(
        k in 2usize..=5,
        lambda in 0.3f64..1.5,
        extra in proptest::collection::vec((1usize..=5, 1usize..=5, 0.1f64..1.0), 0..3),
        shift in 0.1f64..2.0,
    ) {
        let h = random_limit_source(k, lambda, extra);
        let grid = Grid1d::new(-15.0, 15.0, 0.1).expect("valid grid");
        let opts = SolverOptions {
            boundary_check: BoundaryCheck::Never,
            ..SolverOptions::default()
        };
        let lower = move |x: f64| logistic(x - shift);
        let upper = logistic;
        let times = [0.25, 0.5];
        let lo = solve_fkpp(&h, None, &lower, grid, &times, &opts).expect("solves");
        let hi = solve_fkpp(&h, None, &upper, grid, &times, &opts).expect("solves");
        for idx in 0..times.len() {
            for (a, b) in lo.values_at(idx).iter().zip(hi.values_at(idx)) {
                prop_assert!(a - b <= 1e-12, "ordering violated: {a} > {b}");
            }
        }
    }

    /// CDF-type data produce CDF-type solutions: values in [0, 1] and
    /// nondecreasing in x at every stored time. The domain is wide enough
    /// that the datum sits below the check tolerance at the pinned edges;
    /// on narrower domains the frozen boundary value itself caps the
    /// monotonicity defect.
    #[test]
    fn cdf_shape_is_preserved(
        k in 2usize..=5,
        lambda in 0.3f64..1.5,
        extra in proptest::collection::vec((1usize..=5, 1usize..=5, 0.1f64..1.0), 0..3),
        steepness in 0.7f64..2.0,
    ) {
        let h = random_limit_source(k, lambda, extra);
        let grid = Grid1d::new(-45.0, 45.0, 0.1).expect("valid grid");
        let opts = SolverOptions {
            boundary_check: BoundaryCheck::Never,
            ..SolverOptions::default()
        };
        let datum = move |x: f64| logistic(steepness * x);
        let field = solve_fkpp(&h, None, &datum, grid, &[0.25, 0.5], &opts).expect("solves");
        for idx in 0..field.times().len() {
            let v = field.values_at(idx);
            for w in v.windows(2) {
                prop_assert!(w[1] - w[0] >= -1e-12, "not nondecreasing: {} > {}", w[0], w[1]);
            }
            for &u in v {
                prop_assert!((-1e-12..=1.0 + 1e-12).contains(&u), "out of range: {u}");
            }
        }
    }
}
