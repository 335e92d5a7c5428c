//! Named rule families and the worked examples.

use std::fmt;
use std::str::FromStr;

use crate::coalition::{check_intersecting, full_mask, Coalition};
use crate::construct::design::{complementary_balanced_family, rule_from_half_family};
use crate::error::{check_table_cap, Error, Result};
use crate::rule::VotingRule;
use crate::symmetry::Permutation;

/// Simple majority on an odd electorate.
pub fn majority_rule(n: usize) -> Result<VotingRule> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenElectorate(n));
    }
    VotingRule::from_half_layer(n, &[])
}

/// An unbiased rule on `n` voters: majority for odd `n`, the design-based
/// half-layer rule for even `n`. Fails exactly when `n` is a power of two.
pub fn unbiased_rule(n: usize) -> Result<VotingRule> {
    if n == 0 {
        return Err(Error::EmptyElectorate);
    }
    if n % 2 == 1 {
        return majority_rule(n);
    }
    if n.is_power_of_two() {
        return Err(Error::PowerOfTwo(n));
    }
    rule_from_half_family(&complementary_balanced_family(n)?)
}

/// Majority of block majorities over `groups` consecutive blocks of `size`
/// voters each.
pub fn representative_democracy(groups: usize, size: usize) -> Result<VotingRule> {
    for value in [groups, size] {
        if value % 2 == 0 {
            return Err(Error::EvenElectorate(value));
        }
    }
    let n = groups * size;
    check_table_cap(n, "representative democracy")?;
    let block = full_mask(size);
    VotingRule::from_fn(n, |mask| {
        let carried = (0..groups)
            .filter(|g| 2 * (mask >> (g * size) & block).count_ones() as usize > size)
            .count();
        2 * carried > groups
    })
}

/// Tie-break construction on `n = 2r + 1` voters from a pairwise-intersecting
/// family of `r`-sets: a coalition wins if it contains a family member, loses
/// if its complement does, and otherwise wins iff it is a strict majority.
pub fn rule_from_intersecting_family(n: usize, family: &[Coalition]) -> Result<VotingRule> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenElectorate(n));
    }
    let r = (n - 1) / 2;
    for set in family {
        if set.n() != n {
            return Err(Error::SizeMismatch { expected: n, got: set.n() });
        }
        if set.len() != r {
            return Err(Error::WrongSetSize { set: set.to_string(), got: set.len(), expected: r });
        }
    }
    if let Some((a, b)) = check_intersecting(family) {
        return Err(Error::NotIntersecting(a.to_string(), b.to_string()));
    }
    check_table_cap(n, "tie-break rules")?;
    let full = full_mask(n);
    let masks: Vec<u64> = family.iter().map(|s| s.bits()).collect();
    VotingRule::from_fn(n, |mask| {
        if masks.iter().any(|&w| w & !mask == 0) {
            true
        } else if masks.iter().any(|&w| w & mask == 0 && w & (full ^ mask) == w) {
            false
        } else {
            mask.count_ones() as usize > r
        }
    })
}

/// The worked example rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExampleRule {
    /// Four voters `a..d`; `a` with anyone wins, else `{b,c,d}` decides.
    Fig3,
    /// Majority of three majorities of three.
    Maj3x3,
    /// Nine voters, unbiased but not equitable.
    AppendixB,
    /// Edge neighborhoods of the triangular prism; equitable.
    Prism,
}

impl ExampleRule {
    pub const ALL: [ExampleRule; 4] = [ExampleRule::Fig3, ExampleRule::Maj3x3, ExampleRule::AppendixB, ExampleRule::Prism];

    pub fn name(self) -> &'static str {
        match self {
            ExampleRule::Fig3 => "fig3",
            ExampleRule::Maj3x3 => "maj3x3",
            ExampleRule::AppendixB => "appendixB",
            ExampleRule::Prism => "prism",
        }
    }

    /// Letter labels of voters `1..=n`, where the example uses letters.
    pub fn labels(self) -> Option<&'static [&'static str]> {
        match self {
            ExampleRule::Fig3 => Some(&FIG3_LABELS),
            ExampleRule::Prism => Some(&PRISM_LABELS),
            _ => None,
        }
    }
}

impl fmt::Display for ExampleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleRule::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

pub const FIG3_LABELS: [&str; 4] = ["a", "b", "c", "d"];
pub const PRISM_LABELS: [&str; 9] = ["a", "b", "c", "x", "y", "z", "u", "v", "w"];

const FIG3_MWCS: [&[usize]; 4] = [&[1, 2], &[1, 3], &[1, 4], &[2, 3, 4]];

const APPENDIX_B_SETS: [[usize; 4]; 9] = [
    [1, 2, 3, 4],
    [4, 5, 6, 9],
    [3, 7, 8, 9],
    [1, 4, 5, 7],
    [2, 5, 6, 8],
    [3, 6, 7, 9],
    [1, 2, 5, 9],
    [2, 6, 7, 8],
    [1, 3, 4, 8],
];

/// `N(e)` for `e = a, b, c, x, y, z, u, v, w`.
const PRISM_NEIGHBORHOODS: [[&str; 4]; 9] = [
    ["b", "c", "x", "y"],
    ["a", "c", "y", "z"],
    ["a", "b", "x", "z"],
    ["a", "c", "u", "w"],
    ["a", "b", "u", "v"],
    ["b", "c", "v", "w"],
    ["x", "y", "v", "w"],
    ["y", "z", "u", "w"],
    ["x", "z", "u", "v"],
];

fn prism_id(label: &str) -> usize {
    PRISM_LABELS.iter().position(|&l| l == label).expect("prism label") + 1
}

/// The nine 4-sets `S_1..S_9` of the unbiased, non-equitable example.
pub fn appendix_b_family() -> Vec<Coalition> {
    APPENDIX_B_SETS.iter().map(|ids| Coalition::from_ids(ids, 9).expect("static family")).collect()
}

/// The nine edge neighborhoods `N(a)..N(w)` of the triangular prism.
pub fn prism_family() -> Vec<Coalition> {
    PRISM_NEIGHBORHOODS
        .iter()
        .map(|labels| {
            let ids: Vec<usize> = labels.iter().map(|l| prism_id(l)).collect();
            Coalition::from_ids(&ids, 9).expect("static family")
        })
        .collect()
}

/// `(a,x)(b,z)(c,y)(u,v)(w)`, a symmetry of the prism rule moving `a` to `x`.
pub fn prism_witness() -> Permutation {
    let cycles: Vec<Vec<usize>> = [["a", "x"], ["b", "z"], ["c", "y"], ["u", "v"]]
        .iter()
        .map(|pair| pair.iter().map(|l| prism_id(l)).collect())
        .collect();
    let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
    Permutation::from_cycles(9, &refs).expect("static permutation")
}

/// Builds a named example and validates it.
pub fn example_rule(which: ExampleRule) -> Result<VotingRule> {
    let rule = match which {
        ExampleRule::Fig3 => {
            let sets = FIG3_MWCS.iter().map(|ids| Coalition::from_ids(ids, 4)).collect::<Result<_>>()?;
            VotingRule::from_mwcs(4, sets)?
        }
        ExampleRule::Maj3x3 => representative_democracy(3, 3)?,
        ExampleRule::AppendixB => rule_from_intersecting_family(9, &appendix_b_family())?,
        ExampleRule::Prism => rule_from_intersecting_family(9, &prism_family())?,
    };
    let report = rule.validate()?;
    if !report.is_valid() {
        return Err(Error::InvalidRule(format!("{which}: {report}")));
    }
    Ok(rule)
}

/// [`example_rule`] by name.
pub fn example_rule_by_name(name: &str) -> Result<VotingRule> {
    example_rule(name.parse()?)
}
