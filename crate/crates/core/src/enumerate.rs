//! Exhaustive enumeration of monotone, neutral, resolute rules for small
//! electorates, and random sampling of such rules for larger ones.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::coalition::{full_mask, masks_of_size};
use crate::construct::parity::lucas_parity;
use crate::counts::winning_counts;
use crate::error::{Error, Result};
use crate::indices::fairness_from_counts;
use crate::rule::VotingRule;
use crate::symmetry::is_equitable;

/// Largest electorate the enumerator accepts. Tables fit in a `u128`.
pub const MAX_ENUMERATION_N: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    ShapleyShubik,
    Banzhaf,
    Unbiased,
    Equitable,
}

impl Predicate {
    pub const ALL: [Predicate; 4] = [Predicate::ShapleyShubik, Predicate::Banzhaf, Predicate::Unbiased, Predicate::Equitable];

    pub fn name(self) -> &'static str {
        match self {
            Predicate::ShapleyShubik => "ss",
            Predicate::Banzhaf => "banzhaf",
            Predicate::Unbiased => "unbiased",
            Predicate::Equitable => "equitable",
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Predicate {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Predicate::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown predicate {s:?} (expected ss, banzhaf, unbiased or equitable)"))
    }
}

/// One enumerated rule as a truth table: bit `m` is `f(m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    pub n: usize,
    pub bits: u128,
}

impl TruthTable {
    pub fn wins(&self, mask: u64) -> bool {
        self.bits >> mask & 1 == 1
    }

    pub fn to_rule(&self) -> VotingRule {
        VotingRule::from_fn(self.n, |m| self.wins(m)).expect("enumerated n is within table limits")
    }
}

/// Predicate verdicts for one rule. Equitability is only searched for
/// unbiased rules, since every equitable rule is unbiased.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuleVerdicts {
    pub ss_fair: bool,
    pub banzhaf_fair: bool,
    pub unbiased: bool,
    pub equitable: bool,
}

impl RuleVerdicts {
    pub fn holds(&self, predicate: Predicate) -> bool {
        match predicate {
            Predicate::ShapleyShubik => self.ss_fair,
            Predicate::Banzhaf => self.banzhaf_fair,
            Predicate::Unbiased => self.unbiased,
            Predicate::Equitable => self.equitable,
        }
    }
}

pub fn verdicts(rule: &VotingRule) -> Result<RuleVerdicts> {
    let fair = fairness_from_counts(&winning_counts(rule)?);
    let equitable = fair.unbiased && is_equitable(rule)?.equitable;
    Ok(RuleVerdicts { ss_fair: fair.ss_fair, banzhaf_fair: fair.banzhaf_fair, unbiased: fair.unbiased, equitable })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationReport {
    pub n: usize,
    pub total_rules: u64,
    pub ss_fair: u64,
    pub banzhaf_fair: u64,
    pub unbiased: u64,
    pub equitable: u64,
}

impl EnumerationReport {
    pub fn count(&self, predicate: Predicate) -> u64 {
        match predicate {
            Predicate::ShapleyShubik => self.ss_fair,
            Predicate::Banzhaf => self.banzhaf_fair,
            Predicate::Unbiased => self.unbiased,
            Predicate::Equitable => self.equitable,
        }
    }

    fn record(&mut self, v: &RuleVerdicts) {
        self.total_rules += 1;
        self.ss_fair += v.ss_fair as u64;
        self.banzhaf_fair += v.banzhaf_fair as u64;
        self.unbiased += v.unbiased as u64;
        self.equitable += v.equitable as u64;
    }

    fn merge(mut self, other: EnumerationReport) -> Self {
        self.total_rules += other.total_rules;
        self.ss_fair += other.ss_fair;
        self.banzhaf_fair += other.banzhaf_fair;
        self.unbiased += other.unbiased;
        self.equitable += other.equitable;
        self
    }
}

/// A free decision of the backtracking search.
#[derive(Clone, Copy, Debug)]
enum Slot {
    /// A set of size below `n/2`.
    Lower(u64),
    /// A size-`n/2` complement pair, keyed by the member containing voter 1.
    Middle(u64),
}

/// Backtracking state. The winners below the middle layer determine the
/// rest: they must be closed upward within the lower layers and pairwise
/// intersecting; a middle set is forced winning if it contains a lower
/// winner and losing if its complement does; upper sets are the
/// complements of the losers below.
struct Enumerator {
    n: usize,
    slots: Vec<Slot>,
    winners: Vec<u64>,
    // win flag per lower mask
    lower_wins: Vec<bool>,
    middle_wins: Vec<u64>,
}

impl Enumerator {
    fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyElectorate);
        }
        if n > MAX_ENUMERATION_N {
            return Err(Error::TooLarge { n, limit: MAX_ENUMERATION_N, what: "rule enumeration" });
        }
        let mut slots = Vec::new();
        for k in 1..n.div_ceil(2) {
            slots.extend(masks_of_size(n, k).map(Slot::Lower));
        }
        if n.is_multiple_of(2) {
            slots.extend(masks_of_size(n, n / 2).filter(|m| m & 1 == 1).map(Slot::Middle));
        }
        Ok(Enumerator { n, slots, winners: Vec::new(), lower_wins: vec![false; 1 << n], middle_wins: Vec::new() })
    }

    fn leaf(&self) -> TruthTable {
        let full = full_mask(self.n);
        let mut bits = 0u128;
        for mask in 0..=full {
            let twice = 2 * mask.count_ones() as usize;
            let wins = if twice < self.n {
                self.lower_wins[mask as usize]
            } else if twice == self.n {
                self.middle_wins.contains(&mask)
            } else {
                !self.lower_wins[(full ^ mask) as usize]
            };
            if wins {
                bits |= 1 << mask;
            }
        }
        TruthTable { n: self.n, bits }
    }

    /// Choices available at `slot` given the decisions so far: `Some(mask)`
    /// names the set that wins, `None` leaves a lower set losing.
    fn options(&self, slot: Slot) -> Vec<Option<u64>> {
        match slot {
            Slot::Lower(mask) => {
                let forced = {
                    let mut rest = mask;
                    let mut any = false;
                    while rest != 0 && mask.count_ones() > 1 {
                        let bit = rest & rest.wrapping_neg();
                        if self.lower_wins[(mask ^ bit) as usize] {
                            any = true;
                            break;
                        }
                        rest ^= bit;
                    }
                    any
                };
                let can_win = self.winners.iter().all(|&w| w & mask != 0);
                match (forced, can_win) {
                    (true, true) => vec![Some(mask)],
                    (true, false) => vec![],
                    (false, true) => vec![None, Some(mask)],
                    (false, false) => vec![None],
                }
            }
            Slot::Middle(mask) => {
                let other = full_mask(self.n) ^ mask;
                if self.winners.iter().any(|&w| w & !mask == 0) {
                    vec![Some(mask)]
                } else if self.winners.iter().any(|&w| w & !other == 0) {
                    vec![Some(other)]
                } else {
                    vec![Some(other), Some(mask)]
                }
            }
        }
    }

    fn apply(&mut self, slot: Slot, choice: Option<u64>) {
        match (slot, choice) {
            (Slot::Lower(_), Some(mask)) => {
                self.lower_wins[mask as usize] = true;
                self.winners.push(mask);
            }
            (Slot::Middle(_), Some(mask)) => self.middle_wins.push(mask),
            (_, None) => {}
        }
    }

    fn undo(&mut self, slot: Slot, choice: Option<u64>) {
        match (slot, choice) {
            (Slot::Lower(_), Some(mask)) => {
                self.lower_wins[mask as usize] = false;
                self.winners.pop();
            }
            (Slot::Middle(_), Some(_)) => {
                self.middle_wins.pop();
            }
            (_, None) => {}
        }
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(TruthTable)) {
        if depth == self.slots.len() {
            visit(self.leaf());
            return;
        }
        let slot = self.slots[depth];
        for choice in self.options(slot) {
            self.apply(slot, choice);
            self.run(depth + 1, visit);
            self.undo(slot, choice);
        }
    }

    /// Decision prefixes of length `depth` that admit a completion, for
    /// splitting the tree across workers.
    fn prefixes(&mut self, depth: usize) -> Vec<Vec<Option<u64>>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_prefixes(0, depth.min(self.slots.len()), &mut path, &mut out);
        out
    }

    fn collect_prefixes(
        &mut self,
        at: usize,
        depth: usize,
        path: &mut Vec<Option<u64>>,
        out: &mut Vec<Vec<Option<u64>>>,
    ) {
        if at == depth {
            out.push(path.clone());
            return;
        }
        let slot = self.slots[at];
        for choice in self.options(slot) {
            self.apply(slot, choice);
            path.push(choice);
            self.collect_prefixes(at + 1, depth, path, out);
            path.pop();
            self.undo(slot, choice);
        }
    }

    fn replay(&mut self, prefix: &[Option<u64>]) {
        for (at, &choice) in prefix.iter().enumerate() {
            self.apply(self.slots[at], choice);
        }
    }
}

/// Visits every monotone, neutral, resolute rule on `n` voters exactly once,
/// in a fixed order (`1 <= n <= 7`).
pub fn for_each_rule(n: usize, mut visit: impl FnMut(TruthTable)) -> Result<()> {
    let mut search = Enumerator::new(n)?;
    search.run(0, &mut visit);
    Ok(())
}

// Prefix depth for parallel splitting.
const SPLIT_DEPTH: usize = 24;

/// Runs `work` over every rule in parallel and folds the results with
/// `merge`; partitions the search tree at a fixed depth.
fn par_fold<T: Send>(
    n: usize,
    init: impl Fn() -> T + Sync,
    work: impl Fn(&mut T, TruthTable) + Sync,
    merge: impl Fn(T, T) -> T + Sync + Send,
) -> Result<T> {
    let prefixes = Enumerator::new(n)?.prefixes(SPLIT_DEPTH);
    let results: Result<Vec<T>> = prefixes
        .into_par_iter()
        .map(|prefix| {
            let mut search = Enumerator::new(n)?;
            search.replay(&prefix);
            let mut acc = init();
            search.run(prefix.len(), &mut |table| work(&mut acc, table));
            Ok(acc)
        })
        .collect();
    Ok(results?.into_iter().fold(init(), merge))
}

/// Totals and per-predicate counts over every rule on `n` voters.
pub fn enumerate_rules(n: usize) -> Result<EnumerationReport> {
    let report = par_fold(
        n,
        || Ok(EnumerationReport { n, ..Default::default() }),
        |acc: &mut Result<EnumerationReport>, table| {
            if let Ok(report) = acc {
                match verdicts(&table.to_rule()) {
                    Ok(v) => report.record(&v),
                    Err(e) => *acc = Err(e),
                }
            }
        },
        |a, b| Ok(a?.merge(b?)),
    )??;
    Ok(report)
}

/// Number of rules on `n` voters satisfying `predicate`.
pub fn count_fair(n: usize, predicate: Predicate) -> Result<u64> {
    Ok(enumerate_rules(n)?.count(predicate))
}

/// Every rule on `n` voters satisfying `predicate`, in ascending truth-table
/// order.
pub fn satisfying_rules(n: usize, predicate: Predicate) -> Result<Vec<TruthTable>> {
    let mut found = par_fold(
        n,
        || Ok(Vec::new()),
        |acc: &mut Result<Vec<TruthTable>>, table| {
            if let Ok(list) = acc {
                match verdicts(&table.to_rule()) {
                    Ok(v) if v.holds(predicate) => list.push(table),
                    Ok(_) => {}
                    Err(e) => *acc = Err(e),
                }
            }
        },
        |a, b| {
            let mut a = a?;
            a.extend(b?);
            Ok(a)
        },
    )??;
    found.sort();
    Ok(found)
}

/// Parities of `C(n-1, k-1)` for `k = 1..=n` when `n` is a power of two; all
/// of them are 1, which rules out Shapley-Shubik-fair rules at `n`.
pub fn power_of_two_obstruction(n: usize) -> Result<Vec<u8>> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let parities = (1..=n as u64).map(|k| lucas_parity(n as u64 - 1, k - 1)).collect::<Result<Vec<u8>>>()?;
    debug_assert!(parities.iter().all(|&p| p == 1));
    Ok(parities)
}

/// A random monotone, neutral, resolute rule on `n <= 24` voters.
///
/// Complement pairs are visited in random order; each undecided pair gets a
/// random winning side (never the empty set), whose supersets then win.
/// Winners stay upward closed and losers are their complements, so no later
/// choice can conflict.
pub fn random_rule<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<VotingRule> {
    if n == 0 {
        return Err(Error::EmptyElectorate);
    }
    crate::error::check_table_cap(n, "random rules")?;
    let full = full_mask(n);
    let mut pairs: Vec<u64> = (0..1u64 << (n - 1)).collect();
    pairs.shuffle(rng);
    let mut wins = vec![false; 1 << n];
    let mut stack = Vec::new();
    for low in pairs {
        let high = full ^ low;
        if wins[low as usize] || wins[high as usize] {
            continue;
        }
        let pick = if low == 0 || rng.gen::<bool>() { high } else { low };
        stack.push(pick);
        wins[pick as usize] = true;
        while let Some(mask) = stack.pop() {
            let mut missing = full ^ mask;
            while missing != 0 {
                let up = mask | (missing & missing.wrapping_neg());
                if !wins[up as usize] {
                    wins[up as usize] = true;
                    stack.push(up);
                }
                missing &= missing - 1;
            }
        }
    }
    VotingRule::from_fn(n, |m| wins[m as usize])
}
