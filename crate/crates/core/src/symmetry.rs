//! Voter permutations preserving a rule, the automorphism group and
//! equitability (transitivity of that group).

use std::fmt;

use crate::coalition::Coalition;
use crate::error::{Error, Result};
use crate::rule::VotingRule;

/// Largest electorate for which the whole automorphism group is listed.
pub const MAX_GROUP_VOTERS: usize = 10;

/// Largest electorate for the backtracking symmetry search.
pub const MAX_SYMMETRY_VOTERS: usize = 16;

/// A bijection on `{1, .., n}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    // 0-based images
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    /// From 1-based images: `images[i - 1] = σ(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut image = Vec::with_capacity(n);
        for &j in images {
            if j == 0 || j > n || seen[j - 1] {
                return Err(Error::BadPermutation(n));
            }
            seen[j - 1] = true;
            image.push(j - 1);
        }
        Ok(Permutation { image })
    }

    /// From disjoint cycles of 1-based ids; unlisted voters are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut moved = vec![false; n];
        for cycle in cycles {
            for (pos, &id) in cycle.iter().enumerate() {
                if id == 0 || id > n || moved[id - 1] {
                    return Err(Error::BadPermutation(n));
                }
                moved[id - 1] = true;
                image[id - 1] = cycle[(pos + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { image })
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] + 1
    }

    /// 1-based image array.
    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|&j| j + 1).collect()
    }

    pub fn apply_mask(&self, mask: u64) -> u64 {
        let mut out = 0;
        let mut rest = mask;
        while rest != 0 {
            out |= 1 << self.image[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        out
    }

    pub fn apply_coalition(&self, set: &Coalition) -> Result<Coalition> {
        if set.n() != self.n() {
            return Err(Error::SizeMismatch { expected: self.n(), got: set.n() });
        }
        Ok(Coalition::raw(self.apply_mask(set.bits()), self.n()))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation { image: other.image.iter().map(|&j| self.image[j]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.n()];
        for (i, &j) in self.image.iter().enumerate() {
            image[j] = i;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Cycle notation with 1-based ids, fixed points omitted; `()` for identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.n()];
        let mut any = false;
        for start in 0..self.n() {
            if seen[start] || self.image[start] == start {
                continue;
            }
            any = true;
            write!(f, "({}", start + 1)?;
            seen[start] = true;
            let mut next = self.image[start];
            while next != start {
                write!(f, " {}", next + 1)?;
                seen[next] = true;
                next = self.image[next];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Whether `sigma` maps the winning family onto itself.
///
/// Checked on minimal winning coalitions: if every MWC maps to a winning
/// set then by upward closure `σ` maps winners into winners, and an
/// injective map of a finite family into itself is onto.
pub fn is_symmetry(rule: &VotingRule, sigma: &Permutation) -> Result<bool> {
    if sigma.n() != rule.n() {
        return Err(Error::SizeMismatch { expected: rule.n(), got: sigma.n() });
    }
    let mwcs = rule.minimal_winning_coalitions()?;
    Ok(mwcs.iter().all(|s| rule.wins(sigma.apply_mask(s.bits()))))
}

/// Sorted sizes `|S ∩ T|` over unordered pairs of distinct family members
/// both containing 1-based `voter`.
pub fn intersection_profile(family: &[Coalition], voter: usize) -> Vec<usize> {
    let holding: Vec<&Coalition> = family.iter().filter(|s| s.contains(voter)).collect();
    let mut profile = Vec::new();
    for (idx, a) in holding.iter().enumerate() {
        for b in &holding[idx + 1..] {
            profile.push(a.intersection_len(b));
        }
    }
    profile.sort_unstable();
    profile
}

/// Backtracking over `σ(0), σ(1), ..` with voter invariants as filters.
struct Search<'a> {
    rule: &'a VotingRule,
    n: usize,
    /// MWC masks grouped by their highest member; checkable once that
    /// position is assigned.
    by_last: Vec<Vec<u64>>,
    /// Voters with different signatures cannot be swapped by a symmetry.
    signature: Vec<(Vec<usize>, Vec<usize>)>,
}

impl<'a> Search<'a> {
    fn new(rule: &'a VotingRule) -> Result<Self> {
        let n = rule.n();
        if n > MAX_SYMMETRY_VOTERS {
            return Err(Error::TooLarge { n, limit: MAX_SYMMETRY_VOTERS, what: "symmetry search" });
        }
        rule.table()?;
        let mwcs = rule.minimal_winning_coalitions()?;
        let mut by_last = vec![Vec::new(); n];
        for s in mwcs {
            by_last[63 - s.bits().leading_zeros() as usize].push(s.bits());
        }
        let signature = (1..=n)
            .map(|voter| {
                let mut degrees = vec![0; n + 1];
                for s in mwcs.iter().filter(|s| s.contains(voter)) {
                    degrees[s.len()] += 1;
                }
                (degrees, intersection_profile(mwcs, voter))
            })
            .collect();
        Ok(Search { rule, n, by_last, signature })
    }

    /// Visits symmetries in lexicographic order of their image arrays,
    /// optionally pinning `σ(from) = to` (0-based). Stops when `visit`
    /// returns false.
    fn run(&self, pin: Option<(usize, usize)>, visit: &mut dyn FnMut(&Permutation) -> bool) {
        let mut image = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        self.extend(0, pin, &mut image, &mut used, visit);
    }

    fn extend(
        &self,
        pos: usize,
        pin: Option<(usize, usize)>,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&Permutation) -> bool,
    ) -> bool {
        if pos == self.n {
            return visit(&Permutation { image: image.clone() });
        }
        for target in 0..self.n {
            if used[target] || self.signature[target] != self.signature[pos] {
                continue;
            }
            if let Some((from, to)) = pin {
                if pos == from && target != to {
                    continue;
                }
            }
            image[pos] = target;
            let consistent = self.by_last[pos].iter().all(|&mask| {
                let mut mapped = 0u64;
                let mut rest = mask;
                while rest != 0 {
                    mapped |= 1 << image[rest.trailing_zeros() as usize];
                    rest &= rest - 1;
                }
                self.rule.wins(mapped)
            });
            if consistent {
                used[target] = true;
                let keep_going = self.extend(pos + 1, pin, image, used, visit);
                used[target] = false;
                if !keep_going {
                    image[pos] = usize::MAX;
                    return false;
                }
            }
        }
        image[pos] = usize::MAX;
        true
    }
}

/// Every symmetry of `rule`, sorted by image array (`n <= 10`).
pub fn automorphism_group(rule: &VotingRule) -> Result<Vec<Permutation>> {
    if rule.n() > MAX_GROUP_VOTERS {
        return Err(Error::TooLarge { n: rule.n(), limit: MAX_GROUP_VOTERS, what: "automorphism groups" });
    }
    let search = Search::new(rule)?;
    let mut group = Vec::new();
    search.run(None, &mut |sigma| {
        group.push(sigma.clone());
        true
    });
    Ok(group)
}

/// The lexicographically first symmetry with `σ(from) = to`, if any
/// (1-based ids, `n <= 16`).
pub fn find_symmetry(rule: &VotingRule, from: usize, to: usize) -> Result<Option<Permutation>> {
    let n = rule.n();
    for id in [from, to] {
        if id == 0 || id > n {
            return Err(Error::VoterOutOfRange { id, n });
        }
    }
    let search = Search::new(rule)?;
    let mut found = None;
    search.run(Some((from - 1, to - 1)), &mut |sigma| {
        found = Some(sigma.clone());
        false
    });
    Ok(found)
}

/// Equitability verdict with the orbit partition of the voters (1-based,
/// each orbit sorted, orbits ordered by smallest member).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equitability {
    pub equitable: bool,
    pub orbits: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = x;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Whether the symmetry group acts transitively on the voters (`n <= 16`).
///
/// Orbits are built by union-find: every symmetry found merges each voter
/// with its image, and a pair still apart is separated only after a search
/// pinned to map one onto the other fails.
pub fn is_equitable(rule: &VotingRule) -> Result<Equitability> {
    let n = rule.n();
    let search = Search::new(rule)?;
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            let mut found = None;
            search.run(Some((i, j)), &mut |sigma| {
                found = Some(sigma.clone());
                false
            });
            if let Some(sigma) = found {
                for (v, &w) in sigma.image.iter().enumerate() {
                    union(&mut parent, v, w);
                }
            }
        }
    }
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for v in 0..n {
        let root = find(&mut parent, v);
        if slot[root] == usize::MAX {
            slot[root] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[slot[root]].push(v + 1);
    }
    Ok(Equitability { equitable: orbits.len() == 1, orbits })
}
