//! Voting rules: representations, evaluation, axiom validation and the
//! winning-family conversions (upward closure, minimal winning coalitions).

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use crate::coalition::{full_mask, masks_of_size, Coalition};
use crate::error::{check_table_cap, Error, Result, MAX_MASK_VOTERS};

/// Explicit `2^n`-bit membership table of the winning family.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WinTable {
    n: usize,
    words: Vec<u64>,
}

// Bit patterns selecting the positions whose bit `i` is clear, i < 6.
const LOW_HALVES: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

impl WinTable {
    pub fn empty(n: usize) -> Result<Self> {
        check_table_cap(n, "membership tables")?;
        let words = if n <= 6 { 1 } else { 1usize << (n - 6) };
        Ok(WinTable { n, words: vec![0; words] })
    }

    /// Table of the winners of `f` over all `2^n` masks.
    pub fn from_fn(n: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        let mut table = WinTable::empty(n)?;
        for mask in 0..1u64 << n {
            if f(mask) {
                table.insert(mask);
            }
        }
        Ok(table)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, mask: u64) -> bool {
        self.words[(mask >> 6) as usize] >> (mask & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, mask: u64) {
        self.words[(mask >> 6) as usize] |= 1 << (mask & 63);
    }

    #[inline]
    pub fn remove(&mut self, mask: u64) {
        self.words[(mask >> 6) as usize] &= !(1 << (mask & 63));
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Winning masks in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(idx, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as u64;
                    rest &= rest - 1;
                    Some(((idx as u64) << 6) | tz)
                }
            })
        })
    }

    /// In-place closure under supersets (superset zeta transform over OR).
    fn close_upward(&mut self) {
        for (bit, &low) in LOW_HALVES.iter().enumerate().take(self.n) {
            let shift = 1u32 << bit;
            for word in &mut self.words {
                *word |= (*word & low) << shift;
            }
        }
        for bit in 6..self.n {
            let stride = 1usize << (bit - 6);
            for block in self.words.chunks_mut(stride * 2) {
                let (lo, hi) = block.split_at_mut(stride);
                for (h, l) in hi.iter_mut().zip(lo.iter()) {
                    *h |= *l;
                }
            }
        }
    }
}

impl fmt::Debug for WinTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WinTable").field("n", &self.n).field("winning", &self.count()).finish()
    }
}

/// Table marking exactly the supersets of members of `family`.
pub fn upward_closure(n: usize, family: &[Coalition]) -> Result<WinTable> {
    let mut table = WinTable::empty(n)?;
    for set in family {
        if set.n() != n {
            return Err(Error::SizeMismatch { expected: n, got: set.n() });
        }
        table.insert(set.bits());
    }
    table.close_upward();
    Ok(table)
}

/// Minimal elements of a winning table.
fn minimal_from_table(table: &WinTable) -> Vec<Coalition> {
    let n = table.n();
    table
        .iter()
        .filter(|&mask| {
            let mut rest = mask;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if table.contains(mask ^ bit) {
                    return false;
                }
                rest ^= bit;
            }
            true
        })
        .map(|mask| Coalition::raw(mask, n))
        .collect()
}

/// How a rule's winning family is stored.
#[derive(Clone, Debug)]
pub enum Repr {
    /// Minimal winning coalitions; membership is the upward closure.
    Mwc(Vec<Coalition>),
    /// Explicit membership table.
    Table(WinTable),
    /// Winning iff `|S| > n/2`, or `|S| = n/2` and `S` is listed.
    /// Listed masks are sorted. With odd `n` the list is empty and this is
    /// majority rule.
    HalfLayer(Vec<u64>),
}

/// A two-candidate voting rule `f : 2^N -> {0,1}` given by its winning family.
///
/// Construction does not enforce the axioms; call [`VotingRule::validate`].
#[derive(Clone)]
pub struct VotingRule {
    n: usize,
    repr: Repr,
    table: OnceLock<WinTable>,
    mwcs: OnceLock<Vec<Coalition>>,
}

/// First violation of monotonicity: `smaller ⊂ larger`, `smaller` wins and
/// `larger` loses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonotoneViolation {
    pub smaller: Coalition,
    pub larger: Coalition,
}

/// First complement pair with equal outcomes; `coalition` is the smaller mask
/// of the pair and `wins` the shared outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeutralityViolation {
    pub coalition: Coalition,
    pub wins: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub monotone: Option<MonotoneViolation>,
    pub neutral_resolute: Option<NeutralityViolation>,
}

impl ValidationReport {
    pub fn is_monotone(&self) -> bool {
        self.monotone.is_none()
    }

    pub fn is_neutral_resolute(&self) -> bool {
        self.neutral_resolute.is_none()
    }

    pub fn is_valid(&self) -> bool {
        self.is_monotone() && self.is_neutral_resolute()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.monotone, &self.neutral_resolute) {
            (None, None) => write!(f, "valid"),
            (Some(m), _) => write!(f, "not monotone: {} wins but {} loses", m.smaller, m.larger),
            (None, Some(v)) => {
                let outcome = if v.wins { "win" } else { "lose" };
                write!(f, "not neutral: {} and its complement both {}", v.coalition, outcome)
            }
        }
    }
}

impl VotingRule {
    /// Rule whose minimal winning coalitions are `sets`. Sets are stored in
    /// mask order; nested or repeated sets are rejected.
    pub fn from_mwcs(n: usize, mut sets: Vec<Coalition>) -> Result<Self> {
        check_electorate(n)?;
        for set in &sets {
            if set.n() != n {
                return Err(Error::SizeMismatch { expected: n, got: set.n() });
            }
        }
        sets.sort();
        for pair in sets.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateSet(pair[0].to_string()));
            }
        }
        for a in &sets {
            for b in &sets {
                if a != b && a.is_subset_of(b) {
                    return Err(Error::NotAntichain(a.to_string(), b.to_string()));
                }
            }
        }
        Ok(Self::with_repr(n, Repr::Mwc(sets)))
    }

    pub fn from_table(table: WinTable) -> Self {
        Self::with_repr(table.n(), Repr::Table(table))
    }

    /// Table-backed rule winning exactly where `f` is true.
    pub fn from_fn(n: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        check_electorate(n)?;
        Ok(Self::from_table(WinTable::from_fn(n, f)?))
    }

    /// Rule winning on every set larger than `n/2` and on the listed
    /// `n/2`-sized sets. For odd `n`, `sets` must be empty (majority rule).
    pub fn from_half_layer(n: usize, sets: &[Coalition]) -> Result<Self> {
        check_electorate(n)?;
        if n > MAX_MASK_VOTERS {
            return Err(Error::TooLarge { n, limit: MAX_MASK_VOTERS, what: "coalition masks" });
        }
        if n % 2 == 1 && !sets.is_empty() {
            return Err(Error::OddElectorate(n));
        }
        let mut masks = Vec::with_capacity(sets.len());
        for set in sets {
            if set.n() != n {
                return Err(Error::SizeMismatch { expected: n, got: set.n() });
            }
            if 2 * set.len() != n {
                return Err(Error::WrongSetSize { set: set.to_string(), got: set.len(), expected: n / 2 });
            }
            masks.push(set.bits());
        }
        masks.sort_unstable();
        for pair in masks.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateSet(Coalition::raw(pair[0], n).to_string()));
            }
        }
        Ok(Self::with_repr(n, Repr::HalfLayer(masks)))
    }

    fn with_repr(n: usize, repr: Repr) -> Self {
        VotingRule { n, repr, table: OnceLock::new(), mwcs: OnceLock::new() }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    /// The listed middle layer for half-layer rules.
    pub fn half_layer(&self) -> Option<Vec<Coalition>> {
        match &self.repr {
            Repr::HalfLayer(masks) => Some(masks.iter().map(|&m| Coalition::raw(m, self.n)).collect()),
            _ => None,
        }
    }

    pub fn evaluate(&self, coalition: &Coalition) -> Result<bool> {
        if coalition.n() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: coalition.n() });
        }
        Ok(self.wins(coalition.bits()))
    }

    /// `f(S)` on a mask known to fit in `n` bits.
    #[inline]
    pub fn wins(&self, mask: u64) -> bool {
        if let Some(table) = self.table.get() {
            return table.contains(mask);
        }
        match &self.repr {
            Repr::Table(table) => table.contains(mask),
            Repr::Mwc(sets) => sets.iter().any(|s| s.bits() & !mask == 0),
            Repr::HalfLayer(masks) => {
                let twice = 2 * mask.count_ones() as usize;
                if twice > self.n {
                    true
                } else if twice == self.n {
                    masks.binary_search(&mask).is_ok()
                } else {
                    false
                }
            }
        }
    }

    /// Membership table, materialized on first use (`n <= 24`).
    pub fn table(&self) -> Result<&WinTable> {
        if let Repr::Table(table) = &self.repr {
            return Ok(table);
        }
        if let Some(table) = self.table.get() {
            return Ok(table);
        }
        check_table_cap(self.n, "membership tables")?;
        let table = match &self.repr {
            Repr::Mwc(sets) => upward_closure(self.n, sets)?,
            Repr::HalfLayer(masks) => {
                let mut table = WinTable::empty(self.n)?;
                for k in (self.n / 2 + 1)..=self.n {
                    for mask in masks_of_size(self.n, k) {
                        table.insert(mask);
                    }
                }
                for &mask in masks {
                    table.insert(mask);
                }
                table
            }
            Repr::Table(_) => unreachable!(),
        };
        Ok(self.table.get_or_init(|| table))
    }

    /// Exhaustive monotonicity and neutrality check. Half-layer rules are
    /// checked structurally, without the table cap.
    pub fn validate(&self) -> Result<ValidationReport> {
        if let Repr::HalfLayer(masks) = &self.repr {
            return Ok(self.validate_half_layer(masks));
        }
        let table = self.table()?;
        let n = self.n;
        let full = full_mask(n);

        let mut monotone = None;
        'outer: for larger in 0..=full {
            if table.contains(larger) {
                continue;
            }
            let mut rest = larger;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                if table.contains(larger ^ bit) {
                    monotone = Some(MonotoneViolation {
                        smaller: Coalition::raw(larger ^ bit, n),
                        larger: Coalition::raw(larger, n),
                    });
                    break 'outer;
                }
                rest ^= bit;
            }
        }

        let mut neutral_resolute = None;
        for mask in 0..1u64 << (n - 1) {
            let wins = table.contains(mask);
            if wins == table.contains(full ^ mask) {
                neutral_resolute = Some(NeutralityViolation { coalition: Coalition::raw(mask, n), wins });
                break;
            }
        }
        Ok(ValidationReport { monotone, neutral_resolute })
    }

    fn validate_half_layer(&self, masks: &[u64]) -> ValidationReport {
        // Sizes are fixed at construction, so the family is monotone; only
        // complementarity of the middle layer can fail.
        let n = self.n;
        let mut neutral_resolute = None;
        if n.is_multiple_of(2) {
            let full = full_mask(n);
            let listed: HashSet<u64> = masks.iter().copied().collect();
            let clash = masks.iter().any(|m| listed.contains(&(full ^ m)));
            let expected = crate::binomial::binomial_u128(n as u64, (n / 2) as u64) / 2;
            if clash || masks.len() as u128 != expected {
                let top = 1u64 << (n - 1);
                for mask in masks_of_size(n, n / 2) {
                    if mask & top != 0 {
                        continue;
                    }
                    let wins = listed.contains(&mask);
                    if wins == listed.contains(&(full ^ mask)) {
                        neutral_resolute = Some(NeutralityViolation { coalition: Coalition::raw(mask, n), wins });
                        break;
                    }
                }
            }
        }
        ValidationReport { monotone: None, neutral_resolute }
    }

    /// Minimal winning coalitions in mask order.
    pub fn minimal_winning_coalitions(&self) -> Result<&[Coalition]> {
        if let Repr::Mwc(sets) = &self.repr {
            return Ok(sets);
        }
        if let Some(sets) = self.mwcs.get() {
            return Ok(sets);
        }
        let sets = minimal_from_table(self.table()?);
        Ok(self.mwcs.get_or_init(|| sets))
    }

    /// All winning coalitions in mask order (`n <= 24`).
    pub fn winning_coalitions(&self) -> Result<Vec<Coalition>> {
        let table = self.table()?;
        Ok(table.iter().map(|m| Coalition::raw(m, self.n)).collect())
    }

    /// Number of winning coalitions (`n <= 24`).
    pub fn winning_count(&self) -> Result<u64> {
        Ok(self.table()?.count())
    }
}

impl fmt::Debug for VotingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VotingRule").field("n", &self.n).field("repr", &self.repr).finish()
    }
}

/// Two rules are equal when they have the same winning family.
impl PartialEq for VotingRule {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        match (self.table(), other.table()) {
            (Ok(a), Ok(b)) => a == b,
            _ => (0..=full_mask(self.n)).all(|m| self.wins(m) == other.wins(m)),
        }
    }
}

fn check_electorate(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyElectorate);
    }
    if n > MAX_MASK_VOTERS {
        return Err(Error::TooLarge { n, limit: MAX_MASK_VOTERS, what: "coalition masks" });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalition::check_intersecting;

    fn sets(n: usize, lists: &[&[usize]]) -> Vec<Coalition> {
        lists.iter().map(|ids| Coalition::from_ids(ids, n).unwrap()).collect()
    }

    fn fig3() -> VotingRule {
        VotingRule::from_mwcs(4, sets(4, &[&[1, 2], &[1, 3], &[1, 4], &[2, 3, 4]])).unwrap()
    }

    #[test]
    fn evaluate_fig3() {
        let rule = fig3();
        let c = |ids: &[usize]| Coalition::from_ids(ids, 4).unwrap();
        assert!(!rule.evaluate(&c(&[1])).unwrap());
        assert!(rule.evaluate(&c(&[2, 3, 4])).unwrap());
        assert!(rule.evaluate(&c(&[1, 2])).unwrap());
        assert!(rule.evaluate(&Coalition::grand(4)).unwrap());
        assert!(!rule.evaluate(&Coalition::empty(4)).unwrap());
        assert_eq!(
            rule.evaluate(&Coalition::empty(3)),
            Err(Error::SizeMismatch { expected: 4, got: 3 })
        );
    }

    #[test]
    fn validate_fig3_and_broken_rules() {
        assert!(fig3().validate().unwrap().is_valid());

        let everything = VotingRule::from_fn(3, |_| true).unwrap();
        let report = everything.validate().unwrap();
        assert!(report.is_monotone());
        assert_eq!(
            report.neutral_resolute,
            Some(NeutralityViolation { coalition: Coalition::empty(3), wins: true })
        );

        let disjoint = VotingRule::from_mwcs(4, sets(4, &[&[1, 3], &[2, 4]])).unwrap();
        let report = disjoint.validate().unwrap();
        assert!(report.is_monotone());
        assert!(!report.is_neutral_resolute());

        // anti-monotone: only the empty set wins
        let anti = VotingRule::from_fn(2, |m| m == 0).unwrap();
        let report = anti.validate().unwrap();
        assert_eq!(
            report.monotone,
            Some(MonotoneViolation { smaller: Coalition::empty(2), larger: Coalition::raw(1, 2) })
        );
    }

    #[test]
    fn upward_closure_counts() {
        let t = upward_closure(4, &sets(4, &[&[1, 2], &[1, 3], &[1, 4], &[2, 3, 4]])).unwrap();
        assert_eq!(t.count(), 8);
        let maj = upward_closure(3, &sets(3, &[&[1, 2], &[1, 3], &[2, 3]])).unwrap();
        assert_eq!(maj.count(), 4);
        assert!(upward_closure(25, &[]).is_err());
    }

    #[test]
    fn closure_matches_naive_superset_test() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in 1..=9usize {
            for _ in 0..20 {
                let family: Vec<Coalition> = (0..rng.gen_range(0..6))
                    .map(|_| Coalition::raw(rng.gen_range(0..1u64 << n), n))
                    .collect();
                let table = upward_closure(n, &family).unwrap();
                for mask in 0..1u64 << n {
                    let naive = family.iter().any(|s| s.bits() & !mask == 0);
                    assert_eq!(table.contains(mask), naive);
                }
            }
        }
    }

    #[test]
    fn minimal_coalitions() {
        let rule = VotingRule::from_table(fig3().table().unwrap().clone());
        let mwcs = rule.minimal_winning_coalitions().unwrap();
        assert_eq!(mwcs, &sets(4, &[&[1, 2], &[1, 3], &[1, 4], &[2, 3, 4]])[..]);

        let dictator = VotingRule::from_fn(3, |m| m & 1 == 1).unwrap();
        assert_eq!(dictator.minimal_winning_coalitions().unwrap(), &sets(3, &[&[1]])[..]);

        let maj5 = VotingRule::from_half_layer(5, &[]).unwrap();
        let mwcs = maj5.minimal_winning_coalitions().unwrap();
        assert_eq!(mwcs.len(), 10);
        assert!(mwcs.iter().all(|s| s.len() == 3));
    }

    #[test]
    fn antichain_is_enforced() {
        let err = VotingRule::from_mwcs(3, sets(3, &[&[1], &[1, 2]])).unwrap_err();
        assert!(matches!(err, Error::NotAntichain(..)));
        let err = VotingRule::from_mwcs(3, sets(3, &[&[1], &[1]])).unwrap_err();
        assert!(matches!(err, Error::DuplicateSet(..)));
    }

    #[test]
    fn half_layer_rules() {
        let t = sets(4, &[&[1, 2], &[1, 3], &[1, 4]]);
        let rule = VotingRule::from_half_layer(4, &t).unwrap();
        assert!(rule.validate().unwrap().is_valid());
        assert_eq!(rule.winning_count().unwrap(), 8);

        let bad = VotingRule::from_half_layer(4, &sets(4, &[&[1, 2], &[3, 4], &[1, 3]])).unwrap();
        let report = bad.validate().unwrap();
        let table_report = VotingRule::from_table(bad.table().unwrap().clone()).validate().unwrap();
        assert_eq!(report, table_report);

        let short = VotingRule::from_half_layer(4, &sets(4, &[&[1, 2]])).unwrap();
        let report = short.validate().unwrap();
        let table_report = VotingRule::from_table(short.table().unwrap().clone()).validate().unwrap();
        assert_eq!(report, table_report);
        assert!(!report.is_valid());

        assert!(VotingRule::from_half_layer(4, &sets(4, &[&[1]])).is_err());
        assert!(VotingRule::from_half_layer(3, &sets(3, &[&[1]])).is_err());
    }

    #[test]
    fn winning_coalitions_intersect() {
        let rule = fig3();
        let all = rule.winning_coalitions().unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(check_intersecting(&all), None);
    }
}
