mod common;

use fairvote::coalition::check_intersecting;
use fairvote::construct::{appendix_b_family, example_rule, majority_rule, ExampleRule};
use fairvote::counts::{pivotal_counts, winning_counts};
use fairvote::rule::upward_closure;
use fairvote::{Coalition, Error, VotingRule};

use common::{direct_winning_counts, random_rules};

fn ids(sets: &[&[usize]], n: usize) -> Vec<Coalition> {
    sets.iter().map(|s| Coalition::from_ids(s, n).unwrap()).collect()
}

#[test]
fn coalition_encoding() {
    assert_eq!(Coalition::from_ids(&[], 4).unwrap().bits(), 0);
    assert_eq!(Coalition::from_ids(&[1, 2, 3, 4], 4).unwrap().bits(), 0b1111);
    let s4 = Coalition::from_ids(&[1, 4, 5, 7], 9).unwrap();
    assert_eq!(s4.bits(), 0b001011001);
    assert_eq!(s4.len(), 4);
    assert_eq!(s4.to_string(), "{1,4,5,7}");
    assert_eq!(Coalition::from_ids(&[5], 4), Err(Error::VoterOutOfRange { id: 5, n: 4 }));
    assert_eq!(Coalition::from_ids(&[2, 2], 4), Err(Error::DuplicateVoter(2)));
}

#[test]
fn fig3_evaluation_and_structure() {
    let rule = example_rule(ExampleRule::Fig3).unwrap();
    let eval = |s: &[usize]| rule.evaluate(&Coalition::from_ids(s, 4).unwrap()).unwrap();
    assert!(!eval(&[1]));
    assert!(eval(&[1, 2]));
    assert!(eval(&[2, 3, 4]));
    assert!(eval(&[1, 2, 3, 4]));
    assert!(rule.evaluate(&Coalition::grand(5)).is_err());
    let report = rule.validate().unwrap();
    assert!(report.is_monotone() && report.is_neutral_resolute());
    assert_eq!(rule.minimal_winning_coalitions().unwrap(), ids(&[&[1, 2], &[1, 3], &[1, 4], &[2, 3, 4]], 4));
    assert_eq!(rule.winning_count().unwrap(), 8);
}

#[test]
fn everything_wins_is_not_neutral() {
    let rule = VotingRule::from_fn(3, |_| true).unwrap();
    let report = rule.validate().unwrap();
    assert!(report.is_monotone());
    let v = report.neutral_resolute.unwrap();
    assert!(v.wins);
    assert!(v.coalition.is_empty());
}

#[test]
fn monotonicity_counterexample() {
    // {1} wins but {1,2} loses
    let rule = VotingRule::from_fn(2, |m| m == 0b01 || m == 0b10).unwrap();
    let m = rule.validate().unwrap().monotone.unwrap();
    assert!(m.smaller.is_subset_of(&m.larger));
    assert!(rule.wins(m.smaller.bits()) && !rule.wins(m.larger.bits()));
}

#[test]
fn intersecting_families() {
    assert_eq!(check_intersecting(&appendix_b_family()), None);
    let disjoint = ids(&[&[1, 3], &[2, 4]], 4);
    assert_eq!(check_intersecting(&disjoint), Some((disjoint[0], disjoint[1])));
    for rule in random_rules(6, 20, 1) {
        assert_eq!(check_intersecting(&rule.winning_coalitions().unwrap()), None);
    }
}

#[test]
fn closures_and_mwcs() {
    let fig3 = ids(&[&[1, 2], &[1, 3], &[1, 4], &[2, 3, 4]], 4);
    assert_eq!(upward_closure(4, &fig3).unwrap().count(), 8);
    let pairs = ids(&[&[1, 2], &[1, 3], &[2, 3]], 3);
    assert_eq!(upward_closure(3, &pairs).unwrap(), *majority_rule(3).unwrap().table().unwrap());
    assert_eq!(example_rule(ExampleRule::AppendixB).unwrap().winning_count().unwrap(), 256);

    let dictator = VotingRule::from_fn(3, |m| m & 1 == 1).unwrap();
    assert_eq!(dictator.minimal_winning_coalitions().unwrap(), ids(&[&[1]], 3));
    let triples = majority_rule(5).unwrap().minimal_winning_coalitions().unwrap().to_vec();
    assert_eq!(triples.len(), 10);
    assert!(triples.iter().all(|s| s.len() == 3));

    for rule in random_rules(7, 20, 2) {
        let mwcs = rule.minimal_winning_coalitions().unwrap();
        for a in mwcs {
            for b in mwcs {
                assert!(a == b || !a.is_subset_of(b));
            }
        }
        assert_eq!(upward_closure(7, mwcs).unwrap(), *rule.table().unwrap());
    }
}

#[test]
fn mwc_list_rejects_nested_sets() {
    let nested = ids(&[&[1], &[1, 2]], 3);
    assert!(matches!(VotingRule::from_mwcs(3, nested), Err(Error::NotAntichain(..))));
    let twice = ids(&[&[1], &[1]], 3);
    assert!(matches!(VotingRule::from_mwcs(3, twice), Err(Error::DuplicateSet(_))));
}

#[test]
fn count_examples() {
    let fig3 = example_rule(ExampleRule::Fig3).unwrap();
    let w = winning_counts(&fig3).unwrap();
    assert_eq!(w.column(1), vec![0, 0, 3, 3, 1]);
    assert_eq!(w.column(2), vec![0, 0, 1, 3, 1]);
    let (_, b) = pivotal_counts(&fig3).unwrap();
    assert_eq!(b.get(2, 1), 3);

    let dictator = VotingRule::from_fn(2, |m| m & 1 == 1).unwrap();
    assert_eq!(pivotal_counts(&dictator).unwrap().0.column(1), vec![1, 2, 1]);

    let maj = majority_rule(3).unwrap();
    let (_, b) = pivotal_counts(&maj).unwrap();
    for i in 1..=3 {
        assert_eq!(winning_counts(&maj).unwrap().column(i), vec![0, 0, 2, 1]);
        assert_eq!((b.get(2, i), b.get(3, i)), (2, 0));
    }
}

#[test]
fn counts_match_direct_iteration() {
    for n in [5, 8, 11] {
        for rule in random_rules(n, 10, 3) {
            let w = winning_counts(&rule).unwrap();
            let direct = direct_winning_counts(&rule);
            for (k, row) in direct.iter().enumerate() {
                assert_eq!(w.row(k), row.as_slice());
            }
        }
    }
}

#[test]
fn table_cap() {
    let big = majority_rule(25).unwrap();
    assert!(matches!(big.table(), Err(Error::TooLarge { .. })));
    // half-layer rules still validate structurally
    assert!(big.validate().unwrap().is_valid());
}
