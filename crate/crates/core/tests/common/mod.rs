//! Independent oracles shared by the integration tests. None of these call
//! into the library's counting or enumeration code.

#![allow(dead_code)]

use fairvote::enumerate::random_rule;
use fairvote::VotingRule;
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Truth tables (bit `m` = f(m)) of every monotone, neutral, resolute rule on
/// `n <= 4` voters, by filtering all `2^(2^n)` boolean functions.
pub fn brute_force_rules(n: usize) -> Vec<u128> {
    assert!(n <= 4);
    let size = 1usize << n;
    let full = size - 1;
    let mut out = Vec::new();
    for bits in 0u128..(1u128 << size) {
        let f = |m: usize| bits >> m & 1 == 1;
        let neutral = (0..size).all(|m| f(m) != f(full ^ m));
        let monotone = (0..size).all(|m| (0..n).all(|i| !f(m) || f(m | 1 << i)));
        if neutral && monotone {
            out.push(bits);
        }
    }
    out
}

/// Monotone boolean functions on `k` variables as truth tables, built from
/// pairs `f0 <= f1` on `k - 1` variables (`f = f0` off variable `k`, `f1` on).
pub fn monotone_functions(k: usize) -> Vec<u64> {
    assert!(k <= 5);
    if k == 0 {
        return vec![0, 1];
    }
    let prev = monotone_functions(k - 1);
    let half = 1u32 << (k - 1);
    let mut out = Vec::new();
    for &f0 in &prev {
        for &f1 in &prev {
            if f0 & !f1 == 0 {
                out.push(f0 | f1 << half);
            }
        }
    }
    out
}

/// Self-dual monotone functions on `n <= 6` variables. Such an `f` is fixed
/// by its restriction `g` to sets without voter `n`: on sets containing `n`
/// it equals the dual `g*(S) = 1 - g([n-1] \ S)`, and it is monotone iff
/// `g <= g*`.
pub fn self_dual_rules(n: usize) -> Vec<u128> {
    assert!((1..=6).contains(&n));
    let k = n - 1;
    let size = 1usize << k;
    let full = size - 1;
    let mut out = Vec::new();
    for g in monotone_functions(k) {
        let at = |m: usize| g >> m & 1 == 1;
        let dual = |m: usize| !at(full ^ m);
        if (0..size).any(|m| at(m) && !dual(m)) {
            continue;
        }
        let mut bits = 0u128;
        for m in 0..size {
            if at(m) {
                bits |= 1 << m;
            }
            if dual(m) {
                bits |= 1 << (m | size);
            }
        }
        out.push(bits);
    }
    out.sort_unstable();
    out
}

pub fn table_rule(n: usize, bits: u128) -> VotingRule {
    VotingRule::from_fn(n, |m| bits >> m & 1 == 1).unwrap()
}

/// Rows `0..=max` of Pascal's triangle by repeated addition.
pub fn pascal(max: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::from(1u32)]];
    for m in 1..=max {
        let prev = &rows[m - 1];
        let mut row = Vec::with_capacity(m + 1);
        row.push(BigUint::from(1u32));
        for r in 1..m {
            row.push(&prev[r - 1] + &prev[r]);
        }
        row.push(BigUint::from(1u32));
        rows.push(row);
    }
    rows
}

/// Deterministic random valid rules on `n` voters.
pub fn random_rules(n: usize, count: usize, seed: u64) -> Vec<VotingRule> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32));
    (0..count).map(|_| random_rule(n, &mut rng).unwrap()).collect()
}

/// Per-size winning counts by direct iteration: `w[k][i]`.
pub fn direct_winning_counts(rule: &VotingRule) -> Vec<Vec<u64>> {
    let n = rule.n();
    let mut w = vec![vec![0; n]; n + 1];
    for m in 0..1u64 << n {
        if rule.wins(m) {
            for (i, count) in w[m.count_ones() as usize].iter_mut().enumerate() {
                if m >> i & 1 == 1 {
                    *count += 1;
                }
            }
        }
    }
    w
}
