//! Binomial coefficients and factorials, exact.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` as `u128`; panics on overflow, which cannot happen for `n <= 64`.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for step in 0..k {
        // acc * (n - step) is divisible by (step + 1) after the multiply.
        acc = acc * (n - step) as u128 / (step + 1) as u128;
    }
    acc
}

/// `C(n, k)` as `u64`. Exact for every `n <= 64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    u64::try_from(binomial_u128(n, k)).expect("binomial coefficient exceeds u64")
}

/// `C(n, k)` as an arbitrary-precision integer.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for step in 0..k {
        acc *= n - step;
        acc /= step + 1;
    }
    acc
}
