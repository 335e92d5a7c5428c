//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fairvote::construct::{
    appendix_b_family, central_binom_div4, example_rule, lucas_parity, prism_witness, representative_democracy,
    unbiased_rule, ExampleRule,
};
use fairvote::counts::{pivotal_counts, winning_counts, winning_without_counts};
use fairvote::enumerate::{enumerate_rules, for_each_rule, power_of_two_obstruction};
use fairvote::indices::{
    banzhaf, is_banzhaf_fair, is_ss_fair, is_unbiased, ratio, shapley_shubik, unbiasedness_routes, Method,
};
use fairvote::symmetry::{find_symmetry, intersection_profile, is_equitable, is_symmetry};
use fairvote::{Error, VotingRule};
use num_bigint::BigUint;
use num_traits::{One, Zero};

use common::{brute_force_rules, pascal, random_rules, table_rule};

fn fig3_reproduction() {
    let rule = example_rule(ExampleRule::Fig3).unwrap();
    let phi = [ratio(1, 2), ratio(1, 6), ratio(1, 6), ratio(1, 6)];
    let beta = [ratio(3, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4)];
    for method in [Method::Pivotal, Method::WinningCount] {
        assert_eq!(shapley_shubik(&rule, method).unwrap().values(), &phi);
        assert_eq!(banzhaf(&rule, method).unwrap().values(), &beta);
    }
}

fn unbiased_construction() {
    for n in [1, 3, 5, 6, 7, 9, 10, 11, 12, 13, 14] {
        let rule = unbiased_rule(n).unwrap();
        assert!(rule.validate().unwrap().is_valid(), "n={n} invalid");
        assert!(is_unbiased(&rule).unwrap().unbiased, "n={n} biased");
        assert!(is_ss_fair(&rule).unwrap(), "n={n} not SS-fair");
        assert!(is_banzhaf_fair(&rule).unwrap(), "n={n} not Banzhaf-fair");
        let phi = shapley_shubik(&rule, Method::WinningCount).unwrap();
        assert!(phi.values().iter().all(|v| *v == ratio(1, n as i64)), "n={n}: φ = {phi}");
    }
    for n in [2, 4, 8] {
        assert_eq!(unbiased_rule(n).unwrap_err(), Error::PowerOfTwo(n));
    }
}

fn small_n_nonexistence() {
    let two = enumerate_rules(2).unwrap();
    assert_eq!(two.total_rules, 2);
    assert_eq!((two.ss_fair, two.banzhaf_fair), (0, 0));
    let mut seen = Vec::new();
    for_each_rule(2, |t| seen.push(t.bits)).unwrap();
    seen.sort_unstable();
    // f(S) = [1 ∈ S] and f(S) = [2 ∈ S]
    let dictators: Vec<u128> = {
        let mut d: Vec<u128> = (0..2)
            .map(|i| (0u128..4).filter(|m| m >> i & 1 == 1).fold(0, |acc, m| acc | 1 << m))
            .collect();
        d.sort_unstable();
        d
    };
    assert_eq!(seen, dictators);

    let four = enumerate_rules(4).unwrap();
    assert_eq!((four.ss_fair, four.banzhaf_fair), (0, 0));

    for n in 1..=4 {
        let mut visited = Vec::new();
        for_each_rule(n, |t| visited.push(t.bits)).unwrap();
        visited.sort_unstable();
        let oracle = brute_force_rules(n);
        assert_eq!(visited, oracle, "n={n}");
        assert_eq!(enumerate_rules(n).unwrap().total_rules, oracle.len() as u64);
    }
}

/// Enumerated rules for `n <= 5`, the constructed fair rules, and 1000
/// random rules for each `n` in `6..=12`.
fn corpus() -> Vec<VotingRule> {
    let mut rules = Vec::new();
    for n in 1..=5 {
        for_each_rule(n, |t| rules.push(table_rule(n, t.bits))).unwrap();
    }
    for n in [6, 7, 9, 10, 11, 12] {
        rules.push(unbiased_rule(n).unwrap());
    }
    for n in 6..=12 {
        rules.extend(random_rules(n, 1000, 0xfa1e));
    }
    rules
}

fn equivalence_suite(corpus: &[VotingRule]) {
    let mut unbiased = 0;
    for rule in corpus {
        let n = rule.n();
        let routes = unbiasedness_routes(rule).unwrap();
        assert!(routes.agree(), "routes disagree on {rule:?}: {routes:?}");
        unbiased += routes.winning as usize;

        let w = winning_counts(rule).unwrap();
        let (a, b) = pivotal_counts(rule).unwrap();
        let without = winning_without_counts(rule).unwrap();
        for i in 1..=n {
            for k in 0..=n {
                let b_next = if k < n { b.get(k + 1, i) } else { 0 };
                assert_eq!(a.get(k, i), b.get(k, i) + b_next, "A chain at k={k}, i={i}");
                let w_prev = if k > 0 { without.get(k - 1, i) } else { 0 };
                assert_eq!(w.get(k, i), b.get(k, i) + w_prev, "W chain at k={k}, i={i}");
            }
        }
    }
    // the corpus includes the fair constructions, so both verdicts occur
    assert!(unbiased > 0 && unbiased < corpus.len());
}

fn formula_cross_check(corpus: &[VotingRule]) {
    for rule in corpus {
        let phi = shapley_shubik(rule, Method::Pivotal).unwrap();
        assert_eq!(phi, shapley_shubik(rule, Method::WinningCount).unwrap(), "{rule:?}");
        assert_eq!(banzhaf(rule, Method::Pivotal).unwrap(), banzhaf(rule, Method::WinningCount).unwrap(), "{rule:?}");
        assert!(phi.sum().is_one(), "Σφ = {} for {rule:?}", phi.sum());
    }
}

fn nine_voter_verdicts() {
    let b = example_rule(ExampleRule::AppendixB).unwrap();
    assert!(is_unbiased(&b).unwrap().unbiased);
    let verdict = is_equitable(&b).unwrap();
    assert!(!verdict.equitable);
    assert!(!verdict.orbits.iter().any(|o| o.contains(&1) && o.contains(&2)));
    assert_eq!(find_symmetry(&b, 1, 2).unwrap(), None);
    let family = appendix_b_family();
    assert_eq!(intersection_profile(&family, 1), vec![1, 2, 2, 2, 2, 3]);
    assert_eq!(intersection_profile(&family, 2), vec![1, 1, 1, 2, 2, 3]);

    let prism = example_rule(ExampleRule::Prism).unwrap();
    assert!(is_equitable(&prism).unwrap().equitable);
    let sigma = prism_witness();
    assert_eq!(sigma.to_string(), "(1 4)(2 6)(3 5)(7 8)");
    assert!(is_symmetry(&prism, &sigma).unwrap());

    assert!(is_equitable(&representative_democracy(3, 3).unwrap()).unwrap().equitable);
}

fn number_theory() {
    let rows = pascal(1024);
    for (m, row) in rows.iter().enumerate() {
        for (r, value) in row.iter().enumerate() {
            let parity = u8::from(value.bit(0));
            assert_eq!(lucas_parity(m as u64, r as u64).unwrap(), parity, "C({m},{r})");
        }
    }
    // C(2m, m) = C(2m-2, m-1)·(2m-1)·2m / m²
    let four = BigUint::from(4u32);
    let mut central = BigUint::one();
    for m in 1..=4096u64 {
        central = central * BigUint::from(2 * m - 1) * BigUint::from(2 * m) / BigUint::from(m * m);
        let divisible = (&central % &four).is_zero();
        assert_eq!(central_binom_div4(m), divisible, "m={m}");
        assert_eq!(!divisible, m.is_power_of_two(), "m={m}");
    }
}

fn parity_obstruction() {
    for n in [2usize, 4, 8, 16, 32, 64] {
        let parities = power_of_two_obstruction(n).unwrap();
        assert_eq!(parities, vec![1; n], "n={n}");
        let row = &pascal(n - 1)[n - 1];
        assert!(row.iter().all(|c| c.bit(0)), "row {} of Pascal's triangle", n - 1);
    }
}

fn run(label: &str, budget: Duration, check: impl FnOnce()) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(check));
    let elapsed = start.elapsed();
    let (ok, note) = match outcome {
        Ok(()) if elapsed <= budget => (true, String::new()),
        Ok(()) => (false, format!(" (over budget of {budget:?})")),
        Err(_) => (false, " (assertion failed, see above)".to_string()),
    };
    println!("{} {label} [{:.2?}]{note}", if ok { "PASS" } else { "FAIL" }, elapsed);
    ok
}

fn main() -> ExitCode {
    let corpus = corpus();
    let results = [
        run("1 fig3 indices", Duration::from_secs(1), fig3_reproduction),
        run("2 unbiased construction for non-powers of two", Duration::from_secs(60), unbiased_construction),
        run("3 small-n non-existence by enumeration", Duration::from_secs(300), small_n_nonexistence),
        run("4 unbiasedness criteria and chain identities", Duration::from_secs(120), || equivalence_suite(&corpus)),
        run("5 pivotal and winning-count formulas agree", Duration::from_secs(120), || formula_cross_check(&corpus)),
        run("6 nine-voter equitability verdicts", Duration::from_secs(10), nine_voter_verdicts),
        run("7 binomial parity and divisibility by 4", Duration::from_secs(30), number_theory),
        run("8 power-of-two parity obstruction", Duration::from_secs(30), parity_obstruction),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
