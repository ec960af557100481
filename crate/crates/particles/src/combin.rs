//! Exact small-combinatorics helpers shared by the simulators and their
//! rate-identity tests.

/// Binomial coefficient `C(n, k)` computed exactly in `u128`, or `None` on
/// overflow. Each intermediate product is divisible by the running index, so
/// the division below is exact.
pub fn choose_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for step in 1..=k {
        result = result.checked_mul((n - k + step) as u128)? / step as u128;
    }
    Some(result)
}

/// Binomial coefficient as `f64`, falling back to a multiplicative product
/// when the exact value overflows `u128`.
pub fn choose_f64(n: u64, k: u64) -> f64 {
    if let Some(v) = choose_u128(n, k) {
        return v as f64;
    }
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (1..=k).fold(1.0, |acc, step| {
        acc * (n - k + step) as f64 / step as f64
    })
}
