//! Per-voter, per-size coalition counts: winning (`W`), pivotal (`A`),
//! pivotal-winning (`B`) and winning-without-voter (`W¬`).

use rayon::prelude::*;

use crate::binomial::binomial;
use crate::coalition::full_mask;
use crate::error::Result;
use crate::rule::{Repr, VotingRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CountKind {
    /// Winning coalitions of size `k` containing `i`.
    Winning,
    /// Sets `S` of size `k` (containing `i` or not) with `f(S ∪ {i}) = 1`
    /// and `f(S \ {i}) = 0`.
    Pivotal,
    /// Winning `S ∋ i` of size `k` with `f(S \ {i}) = 0`.
    PivotalWinning,
    /// Winning coalitions of size `k` not containing `i`.
    WinningWithout,
}

/// `(n + 1) × n` grid of counts indexed by coalition size `k` and voter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountMatrix {
    n: usize,
    kind: CountKind,
    entries: Vec<Vec<u64>>,
}

impl CountMatrix {
    fn zeros(n: usize, kind: CountKind) -> Self {
        CountMatrix { n, kind, entries: vec![vec![0; n]; n + 1] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> CountKind {
        self.kind
    }

    /// Count for size `k` and 1-based `voter`.
    pub fn get(&self, k: usize, voter: usize) -> u64 {
        self.entries[k][voter - 1]
    }

    /// Counts of every voter at size `k`.
    pub fn row(&self, k: usize) -> &[u64] {
        &self.entries[k]
    }

    /// Counts of 1-based `voter` for `k = 0..=n`.
    pub fn column(&self, voter: usize) -> Vec<u64> {
        self.entries.iter().map(|row| row[voter - 1]).collect()
    }

    /// First `(i, j, k)` (1-based voters, smallest `k`, then `i`, then `j`)
    /// with differing counts, or `None` when every row is constant.
    pub fn first_difference(&self) -> Option<(usize, usize, usize)> {
        for (k, row) in self.entries.iter().enumerate() {
            for i in 0..self.n {
                for j in (i + 1)..self.n {
                    if row[i] != row[j] {
                        return Some((i + 1, j + 1, k));
                    }
                }
            }
        }
        None
    }

    pub fn rows_constant(&self) -> bool {
        self.entries.iter().all(|row| row.windows(2).all(|p| p[0] == p[1]))
    }

    fn add(mut self, other: &CountMatrix) -> Self {
        for (row, other_row) in self.entries.iter_mut().zip(&other.entries) {
            for (a, b) in row.iter_mut().zip(other_row) {
                *a += b;
            }
        }
        self
    }
}

// Masks per parallel work item.
const CHUNK: u64 = 1 << 14;

/// Runs `visit` over every mask in `0..2^n`, accumulating into one matrix per
/// kind. Splits into mask ranges for large `n`; sums are order-independent.
fn tally<const K: usize>(
    n: usize,
    kinds: [CountKind; K],
    visit: impl Fn(u64, &mut [CountMatrix; K]) + Sync,
) -> [CountMatrix; K] {
    let total = 1u64 << n;
    let fresh = || kinds.map(|kind| CountMatrix::zeros(n, kind));
    if total <= CHUNK {
        let mut acc = fresh();
        for mask in 0..total {
            visit(mask, &mut acc);
        }
        return acc;
    }
    (0..total / CHUNK)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = fresh();
            for mask in chunk * CHUNK..(chunk + 1) * CHUNK {
                visit(mask, &mut acc);
            }
            acc
        })
        .reduce(fresh, |a, b| {
            let mut pairs = a.into_iter().zip(b.iter());
            std::array::from_fn(|_| {
                let (x, y) = pairs.next().unwrap();
                x.add(y)
            })
        })
}

/// `w_i^(k)`: winning coalitions of size `k` containing voter `i`.
///
/// Half-layer rules are counted analytically outside the middle layer, so
/// they are not limited by the table cap.
pub fn winning_counts(rule: &VotingRule) -> Result<CountMatrix> {
    let n = rule.n();
    if let Repr::HalfLayer(masks) = rule.repr() {
        let mut out = CountMatrix::zeros(n, CountKind::Winning);
        for k in 1..=n {
            if 2 * k > n {
                out.entries[k].fill(binomial(n as u64 - 1, k as u64 - 1));
            }
        }
        if n.is_multiple_of(2) {
            for &mask in masks {
                for (i, slot) in out.entries[n / 2].iter_mut().enumerate() {
                    *slot += mask >> i & 1;
                }
            }
        }
        return Ok(out);
    }
    let table = rule.table()?;
    let [w] = tally(n, [CountKind::Winning], |mask, [w]| {
        if table.contains(mask) {
            let row = &mut w.entries[mask.count_ones() as usize];
            for (i, slot) in row.iter_mut().enumerate() {
                *slot += mask >> i & 1;
            }
        }
    });
    Ok(w)
}

/// The `A` (pivotal) and `B` (pivotal winning) matrices, each computed
/// directly from its definition.
pub fn pivotal_counts(rule: &VotingRule) -> Result<(CountMatrix, CountMatrix)> {
    let n = rule.n();
    let table = rule.table()?;
    let [a, b] = tally(n, [CountKind::Pivotal, CountKind::PivotalWinning], |mask, [a, b]| {
        let k = mask.count_ones() as usize;
        let wins = table.contains(mask);
        for i in 0..n {
            let bit = 1u64 << i;
            if table.contains(mask | bit) && !table.contains(mask & !bit) {
                a.entries[k][i] += 1;
            }
            if wins && mask & bit != 0 && !table.contains(mask ^ bit) {
                b.entries[k][i] += 1;
            }
        }
    });
    Ok((a, b))
}

/// `|W¬_i^(k)|`: winning coalitions of size `k` without voter `i`.
pub fn winning_without_counts(rule: &VotingRule) -> Result<CountMatrix> {
    let n = rule.n();
    let table = rule.table()?;
    let outside = full_mask(n);
    let [w] = tally(n, [CountKind::WinningWithout], |mask, [w]| {
        if table.contains(mask) {
            let missing = outside & !mask;
            let row = &mut w.entries[mask.count_ones() as usize];
            for (i, slot) in row.iter_mut().enumerate() {
                *slot += missing >> i & 1;
            }
        }
    });
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalition::Coalition;

    fn fig3() -> VotingRule {
        let sets = [&[1, 2][..], &[1, 3], &[1, 4], &[2, 3, 4]]
            .iter()
            .map(|ids| Coalition::from_ids(ids, 4).unwrap())
            .collect();
        VotingRule::from_mwcs(4, sets).unwrap()
    }

    #[test]
    fn fig3_winning_counts() {
        // Supersets of the four MWCs, enumerated by hand:
        // size 2: {a,b} {a,c} {a,d}; size 3: {a,b,c} {a,b,d} {a,c,d} {b,c,d}; size 4: N.
        let w = winning_counts(&fig3()).unwrap();
        assert_eq!(w.column(1), vec![0, 0, 3, 3, 1]);
        assert_eq!(w.column(2), vec![0, 0, 1, 3, 1]);
        assert_eq!(w.first_difference(), Some((1, 2, 2)));
    }

    #[test]
    fn majority_counts() {
        let maj = VotingRule::from_half_layer(3, &[]).unwrap();
        let w = winning_counts(&maj).unwrap();
        let via_table = winning_counts(&VotingRule::from_table(maj.table().unwrap().clone())).unwrap();
        assert_eq!(w, via_table);
        for voter in 1..=3 {
            assert_eq!(w.column(voter), vec![0, 0, 2, 1]);
        }
        let (a, b) = pivotal_counts(&maj).unwrap();
        for voter in 1..=3 {
            assert_eq!(b.get(2, voter), 2);
            assert_eq!(b.get(3, voter), 0);
            assert_eq!(a.column(voter), vec![0, 2, 2, 0]);
        }
    }

    #[test]
    fn dictator_pivotal() {
        let dictator = VotingRule::from_fn(2, |m| m & 1 == 1).unwrap();
        let (a, _) = pivotal_counts(&dictator).unwrap();
        assert_eq!(a.column(1), vec![1, 2, 1]);
        assert_eq!(a.column(2), vec![0, 0, 0]);
    }

    #[test]
    fn fig3_pivotal() {
        let (_, b) = pivotal_counts(&fig3()).unwrap();
        assert_eq!(b.get(2, 1), 3);
    }

    #[test]
    fn parallel_tally_matches_serial() {
        // n = 16 exceeds one chunk; compare against a direct count.
        let n = 16;
        let rule = VotingRule::from_half_layer(15, &[]).unwrap();
        let w = winning_counts(&VotingRule::from_table(rule.table().unwrap().clone())).unwrap();
        assert_eq!(w, winning_counts(&rule).unwrap());
        let lopsided = VotingRule::from_fn(n, |m| m & 3 != 0 && (m & 1 == 1 || m.count_ones() > 8)).unwrap();
        let w = winning_counts(&lopsided).unwrap();
        for k in 0..=n {
            for voter in 1..=n {
                let direct = (0..1u64 << n)
                    .filter(|&m| m.count_ones() as usize == k && m >> (voter - 1) & 1 == 1)
                    .filter(|&m| lopsided.wins(m))
                    .count() as u64;
                assert_eq!(w.get(k, voter), direct);
            }
        }
    }
}
