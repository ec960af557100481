//! Checks of the partial order on configurations against an independent
//! matching oracle, plus randomized structural properties of the rank
//! operators.

use particles::{dominates, first_violation, ParticleConfig};
use proptest::prelude::*;

const NEG_INF: f64 = f64::NEG_INFINITY;

/// Independent oracle for the order: does an injection kappa from lower
/// indices into upper indices exist with `lower[i] <= upper[kappa(i)]`?
/// Plain backtracking over all injections.
fn injection_exists(lower: &[f64], upper: &[f64], used: &mut Vec<bool>) -> bool {
    let depth = used.iter().filter(|&&u| u).count();
    if depth == lower.len() {
        return true;
    }
    let x = lower[depth];
    for (slot, y) in upper.iter().enumerate() {
        if !used[slot] && x <= *y {
            used[slot] = true;
            if injection_exists(lower, upper, used) {
                return true;
            }
            used[slot] = false;
        }
    }
    false
}

fn oracle(lower: &[f64], upper: &[f64]) -> bool {
    if lower.len() > upper.len() {
        return false;
    }
    let mut used = vec![false; upper.len()];
    injection_exists(lower, upper, &mut used)
}

/// All nondecreasing position vectors of length `n` over the alphabet.
fn multisets(alphabet: &[f64], n: usize) -> Vec<Vec<f64>> {
    fn extend(alphabet: &[f64], start: usize, n: usize, acc: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if acc.len() == n {
            out.push(acc.clone());
            return;
        }
        for (idx, &a) in alphabet.iter().enumerate().skip(start) {
            acc.push(a);
            extend(alphabet, idx, n, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    extend(alphabet, 0, n, &mut Vec::new(), &mut out);
    out
}

fn config(positions: &[f64]) -> ParticleConfig {
    ParticleConfig::from_positions(positions).expect("valid positions")
}

/// The order predicate agrees with the injection oracle on every pair of
/// small configurations. The order ignores labels, so enumerating sorted
/// position multisets covers all cases; a separate randomized test checks
/// label invariance.
#[test]
fn order_matches_injection_oracle_exhaustively() {
    let alphabet = [NEG_INF, 0.0, 1.0, 2.0];
    let mut all: Vec<Vec<f64>> = Vec::new();
    for n in 1..=5 {
        all.extend(multisets(&alphabet, n));
    }
    let mut checked = 0usize;
    for lower in &all {
        for upper in &all {
            let got = dominates(&config(lower), &config(upper));
            let want = oracle(lower, upper);
            assert_eq!(
                got, want,
                "order disagrees with matching oracle: {lower:?} vs {upper:?}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 125 * 125);
}

#[test]
fn first_violation_pinpoints_the_failing_rank() {
    let lower = config(&[0.0, 3.0]);
    let upper = config(&[1.0, 2.0]);
    assert_eq!(first_violation(&lower, &upper), Some(2));
    assert_eq!(first_violation(&upper, &upper), None);
    // A longer lower configuration fails at the first rank by convention.
    let long = config(&[0.0, 0.0, 0.0]);
    assert_eq!(first_violation(&long, &upper), Some(1));
}

fn position_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![
        3 => -10.0..10.0f64,
        1 => Just(NEG_INF),
        1 => (-3i32..4).prop_map(f64::from),
    ]
}

fn config_strategy(max_len: usize) -> impl Strategy<Value = ParticleConfig> {
    prop::collection::vec(position_strategy(), 1..=max_len)
        .prop_map(|positions| config(&positions))
}

proptest! {
    /// Appending a particle anywhere produces a configuration above the
    /// original.
    #[test]
    fn append_moves_up((zeta, x) in (config_strategy(8), position_strategy())) {
        let bigger = zeta.append(x).expect("append never fails");
        prop_assert!(dominates(&zeta, &bigger));
    }

    /// A rank jump onto a higher quantile produces a configuration above
    /// the original (one particle teleports rightward).
    #[test]
    fn upward_jump_moves_up(zeta in config_strategy(8), seed in 0u64..1000) {
        let n = zeta.len();
        prop_assume!(n >= 2);
        let i = (seed as usize % (n - 1)) + 1;
        let j = i + 1 + (seed as usize / (n - 1)) % (n - i);
        let jumped = zeta.gamma_jump(i, j).expect("ranks in range");
        prop_assert!(dominates(&zeta, &jumped));
    }

    /// Removing any quantile produces a configuration below the original.
    #[test]
    fn trim_moves_down(zeta in config_strategy(8), seed in 0u64..1000) {
        prop_assume!(zeta.len() >= 2);
        let j = (seed as usize % zeta.len()) + 1;
        let smaller = zeta.trim(j).expect("quantile in range");
        prop_assert!(dominates(&smaller, &zeta));
    }

    /// The order is preserved by appending the same point on both sides,
    /// and by trimming the lowest quantile on both sides.
    #[test]
    fn order_survives_synchronized_edits(
        (lower, extra, x) in (
            config_strategy(6),
            prop::collection::vec(position_strategy(), 0..3),
            position_strategy(),
        )
    ) {
        // Build an upper configuration by lifting positions and appending.
        let lifted: Vec<f64> = lower
            .order_statistics()
            .iter()
            .map(|&p| if p == NEG_INF { p } else { p + 1.0 })
            .collect();
        let mut upper = config(&lifted);
        for &e in &extra {
            upper = upper.append(e).expect("append never fails");
        }
        prop_assert!(dominates(&lower, &upper));

        let lower2 = lower.append(x).expect("append never fails");
        let upper2 = upper.append(x).expect("append never fails");
        prop_assert!(dominates(&lower2, &upper2));

        if lower.len() >= 2 && upper.len() >= 2 {
            // Trimming the lowest on both sides keeps the sandwich: the
            // upper keeps at least as many particles as the lower.
            let lower3 = lower.trim(1).expect("len >= 2");
            let upper3 = upper.trim(1).expect("len >= 2");
            prop_assert!(dominates(&lower3, &upper3));
        }
    }

    /// The sort permutation is a bijection and sorting is idempotent: order
    /// statistics are nondecreasing and invariant under re-wrapping.
    #[test]
    fn sort_is_a_bijection(zeta in config_strategy(10)) {
        let perm = zeta.sort_permutation();
        let mut seen = vec![false; perm.len()];
        for &s in &perm {
            prop_assert!(!seen[s], "index {s} repeated in sort permutation");
            seen[s] = true;
        }
        let stats = zeta.order_statistics();
        for w in stats.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        let rewrapped = config(&stats);
        prop_assert_eq!(rewrapped.order_statistics(), stats);
    }

    /// The order depends only on positions, never on labels.
    #[test]
    fn order_ignores_labels(
        (a, b, offset) in (config_strategy(6), config_strategy(6), 1u64..100)
    ) {
        let relabel = |c: &ParticleConfig, shift: u64| {
            let pairs: Vec<(u64, f64)> = c
                .iter()
                .map(|(label, pos)| (label.0 * 7 + shift, pos))
                .collect();
            ParticleConfig::from_labeled(&pairs).expect("relabeling keeps labels distinct")
        };
        let a2 = relabel(&a, offset);
        let b2 = relabel(&b, offset + 1);
        prop_assert_eq!(dominates(&a, &b), dominates(&a2, &b2));
        prop_assert_eq!(dominates(&b, &a), dominates(&b2, &a2));
    }

    /// The empirical CDF is the normalized rank count: stepping across the
    /// sorted positions one particle at a time.
    #[test]
    fn empirical_cdf_counts_ranks(zeta in config_strategy(8)) {
        let stats = zeta.order_statistics();
        let n = stats.len() as f64;
        for (idx, &p) in stats.iter().enumerate() {
            if p == NEG_INF {
                continue;
            }
            let below: usize = stats.iter().filter(|&&q| q <= p).count();
            prop_assert_eq!(zeta.empirical_cdf(p), below as f64 / n);
            let _ = idx;
        }
        prop_assert_eq!(zeta.empirical_cdf(f64::INFINITY), 1.0);
    }
}
