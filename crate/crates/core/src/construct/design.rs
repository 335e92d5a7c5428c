//! Balanced half-measure designs from cyclic orbits, and the complementary
//! balanced families of `n/2`-sets built from them.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::binomial::binomial;
use crate::coalition::{full_mask, masks_of_size, Coalition};
use crate::construct::parity::{central_binom_div4, lucas_parity};
use crate::error::{Error, Result};
use crate::rule::VotingRule;

/// Largest ground set `2k + 1` the orbit enumeration accepts.
pub const MAX_DESIGN_GROUND: usize = 31;

/// Lexicographic order of the sorted element tuples of two equal-size masks:
/// the first differing element decides, so the mask owning the lowest bit of
/// the symmetric difference is smaller.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        Ordering::Equal
    } else if a & diff & diff.wrapping_neg() != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn rotate(mask: u64, width: usize) -> u64 {
    ((mask << 1) | (mask >> (width - 1))) & full_mask(width)
}

/// A family of `k`-subsets of `{1, .., 2k+1}` containing half of all such
/// subsets, with every element in the same number of sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignFamily {
    k: usize,
    sets: Vec<Coalition>,
}

impl DesignFamily {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ground_size(&self) -> usize {
        2 * self.k + 1
    }

    /// Sets in orbit order: orbits by key, each orbit by successive shifts.
    pub fn sets(&self) -> &[Coalition] {
        &self.sets
    }

    /// Number of sets containing each element `1..=2k+1`.
    pub fn occurrences(&self) -> Vec<usize> {
        occurrences(self.ground_size(), &self.sets)
    }
}

fn occurrences(n: usize, sets: &[Coalition]) -> Vec<usize> {
    let mut counts = vec![0; n];
    for set in sets {
        for id in set.members() {
            counts[id - 1] += 1;
        }
    }
    counts
}

/// Orbits of the `k`-subsets of `Z/(2k+1)` under cyclic shift, each keyed by
/// its lexicographically smallest member and returned in key order.
pub fn cyclic_orbits(k: usize) -> Result<Vec<Vec<u64>>> {
    let width = 2 * k + 1;
    if width > MAX_DESIGN_GROUND {
        return Err(Error::TooLarge { n: width, limit: MAX_DESIGN_GROUND, what: "cyclic designs" });
    }
    let mut keys: Vec<u64> = masks_of_size(width, k)
        .filter(|&mask| {
            let mut shifted = mask;
            (1..width).all(|_| {
                shifted = rotate(shifted, width);
                lex_cmp(mask, shifted) != Ordering::Greater
            })
        })
        .collect();
    keys.sort_by(|&a, &b| lex_cmp(a, b));
    Ok(keys
        .into_iter()
        .map(|key| {
            let mut orbit = Vec::with_capacity(width);
            let mut shifted = key;
            for _ in 0..width {
                orbit.push(shifted);
                shifted = rotate(shifted, width);
            }
            orbit
        })
        .collect())
}

/// Union of the first half of the cyclic orbits of `k`-subsets of
/// `Z/(2k+1)`; element `g` of the group is voter `g + 1`.
///
/// Requires `C(2k+1, k)` even. Every orbit has exactly `2k + 1` members
/// because `gcd(k, 2k+1) = 1`, so the orbit count is even as well.
pub fn design_half_family(k: usize) -> Result<DesignFamily> {
    let width = 2 * k + 1;
    if k == 0 || lucas_parity(width as u64, k as u64)? == 1 {
        return Err(Error::OddDesign(k));
    }
    let orbits = cyclic_orbits(k)?;
    let chosen = orbits.len() / 2;
    let sets = orbits[..chosen]
        .iter()
        .flatten()
        .map(|&mask| Coalition::raw(mask, width))
        .collect();
    Ok(DesignFamily { k, sets })
}

/// A family of `n/2`-sized coalitions on an even electorate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfFamily {
    n: usize,
    sets: Vec<Coalition>,
}

impl HalfFamily {
    /// Checks sizes only; complementarity and balance are separate queries.
    pub fn new(n: usize, mut sets: Vec<Coalition>) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::OddElectorate(n));
        }
        for set in &sets {
            if set.n() != n {
                return Err(Error::SizeMismatch { expected: n, got: set.n() });
            }
            if 2 * set.len() != n {
                return Err(Error::WrongSetSize { set: set.to_string(), got: set.len(), expected: n / 2 });
            }
        }
        sets.sort();
        Ok(HalfFamily { n, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sets in mask order.
    pub fn sets(&self) -> &[Coalition] {
        &self.sets
    }

    /// `|T_i|` for each voter.
    pub fn occurrences(&self) -> Vec<usize> {
        occurrences(self.n, &self.sets)
    }

    pub fn is_balanced(&self) -> bool {
        self.occurrences().windows(2).all(|p| p[0] == p[1])
    }

    /// The first `n/2`-set (mask order, among those without voter `n`) for
    /// which not exactly one of it and its complement is listed.
    pub fn complementary_violation(&self) -> Option<Coalition> {
        let full = full_mask(self.n);
        let listed: HashSet<u64> = self.sets.iter().map(|s| s.bits()).collect();
        if listed.len() != self.sets.len() {
            let dup = self.sets.windows(2).find(|p| p[0] == p[1]).map(|p| p[0]);
            return dup.map(|s| if s.contains(self.n) { s.complement() } else { s });
        }
        let top = 1u64 << (self.n - 1);
        masks_of_size(self.n, self.n / 2)
            .filter(|mask| mask & top == 0)
            .find(|mask| listed.contains(mask) == listed.contains(&(full ^ mask)))
            .map(|mask| Coalition::raw(mask, self.n))
    }

    pub fn is_complementary(&self) -> bool {
        self.complementary_violation().is_none()
    }
}

/// A complementary balanced family of `n/2`-sets, for even `n` with
/// `C(n, n/2)` divisible by 4.
///
/// With `m = n/2` and a half design `D` on `{1, .., 2m-1}` of `(m-1)`-sets,
/// the family is `{S ∪ {n} : S ∈ D}` together with the `m`-subsets of
/// `{1, .., 2m-1}` whose complement there is not in `D`. Each voter lies in
/// exactly `C(n, n/2)/4` sets.
pub fn complementary_balanced_family(n: usize) -> Result<HalfFamily> {
    if n == 0 || n % 2 == 1 {
        return Err(Error::OddElectorate(n));
    }
    let m = n / 2;
    if !central_binom_div4(m as u64) {
        return Err(Error::NotDivisible(n));
    }
    let design = design_half_family(m - 1)?;
    let ground = 2 * m - 1;
    let ground_mask = full_mask(ground);
    let distinguished = 1u64 << (n - 1);
    let in_design: HashSet<u64> = design.sets().iter().map(|s| s.bits()).collect();

    let mut sets: Vec<Coalition> =
        design.sets().iter().map(|s| Coalition::raw(s.bits() | distinguished, n)).collect();
    sets.extend(
        masks_of_size(ground, m - 1)
            .filter(|mask| !in_design.contains(mask))
            .map(|mask| Coalition::raw(ground_mask ^ mask, n)),
    );
    debug_assert_eq!(sets.len() as u64, binomial(n as u64, m as u64) / 2);
    HalfFamily::new(n, sets)
}

/// The rule winning on every set larger than `n/2` and on the members of a
/// complementary family.
pub fn rule_from_half_family(family: &HalfFamily) -> Result<VotingRule> {
    if let Some(bad) = family.complementary_violation() {
        return Err(Error::NotComplementary(format!("{bad} and its complement")));
    }
    VotingRule::from_half_layer(family.n(), family.sets())
}
