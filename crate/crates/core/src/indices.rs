//! Exact Shapley-Shubik, Banzhaf and p-biased influence, and the fairness
//! predicates built on them.
//!
//! Each index has two independent routes: the pivotal definition (counts of
//! coalitions where the voter flips the outcome) and the closed form in the
//! per-size winning counts `w_i^(k)`. Both must agree exactly on every valid
//! rule.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::binomial::{binomial, binomial_big};
use crate::counts::{pivotal_counts, winning_counts, CountMatrix};
use crate::error::{Error, Result};
use crate::rule::VotingRule;

/// Which formula computes an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Sum over coalitions in which the voter is pivotal.
    Pivotal,
    /// Closed form in the winning counts `w_i^(k)`.
    WinningCount,
}

/// One exact rational index per voter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexVector {
    values: Vec<BigRational>,
}

impl IndexVector {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Index of 1-based `voter`.
    pub fn get(&self, voter: usize) -> &BigRational {
        &self.values[voter - 1]
    }

    pub fn sum(&self) -> BigRational {
        self.values.iter().fold(BigRational::zero(), |acc, v| acc + v)
    }

    pub fn all_equal(&self) -> bool {
        self.values.windows(2).all(|p| p[0] == p[1])
    }

    /// Values as `"p/q"` strings in lowest terms.
    pub fn to_strings(&self) -> Vec<String> {
        self.values.iter().map(format_rational).collect()
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

/// `p/q` with `q > 0`, always including the denominator.
pub fn format_rational(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `"p/q"` or a bare integer.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim().parse::<BigInt>().ok()?, q.trim().parse::<BigInt>().ok()?),
        None => (text.trim().parse::<BigInt>().ok()?, BigInt::one()),
    };
    if denom.is_zero() {
        return None;
    }
    Some(BigRational::new(numer, denom))
}

pub fn ratio(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

fn big(value: u64) -> BigInt {
    BigInt::from(value)
}

fn ensure_valid(rule: &VotingRule) -> Result<()> {
    let report = rule.validate()?;
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidRule(report.to_string()))
    }
}

/// `(k-1)!(n-k)!/n!`, written as `1 / (n·C(n-1, k-1))`.
fn order_weight(n: usize, k: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(binomial_big(n as u64 - 1, k as u64 - 1) * n))
}

fn shapley_from_pivotal_winning(b: &CountMatrix) -> IndexVector {
    let n = b.n();
    let weights: Vec<BigRational> = (0..=n).map(|k| if k == 0 { BigRational::zero() } else { order_weight(n, k) }).collect();
    let values = (1..=n)
        .map(|voter| {
            (1..=n).fold(BigRational::zero(), |acc, k| acc + &weights[k] * big(b.get(k, voter)))
        })
        .collect();
    IndexVector { values }
}

fn shapley_from_winning(w: &CountMatrix) -> IndexVector {
    let n = w.n();
    let two = BigRational::from_integer(BigInt::from(2));
    let values = (1..=n)
        .map(|voter| {
            let sum = (1..=n).fold(BigRational::zero(), |acc, k| acc + order_weight(n, k) * big(w.get(k, voter)));
            &two * sum - BigRational::one()
        })
        .collect();
    IndexVector { values }
}

/// Shapley-Shubik index of every voter.
pub fn shapley_shubik(rule: &VotingRule, method: Method) -> Result<IndexVector> {
    ensure_valid(rule)?;
    match method {
        Method::Pivotal => Ok(shapley_from_pivotal_winning(&pivotal_counts(rule)?.1)),
        Method::WinningCount => Ok(shapley_from_winning(&winning_counts(rule)?)),
    }
}

/// Banzhaf index of every voter.
pub fn banzhaf(rule: &VotingRule, method: Method) -> Result<IndexVector> {
    ensure_valid(rule)?;
    let n = rule.n();
    let two_pow_n = BigInt::from(BigUint::one() << n);
    let values = match method {
        Method::Pivotal => {
            let (_, b) = pivotal_counts(rule)?;
            // sum / 2^(n-1) = 2·sum / 2^n
            (1..=n)
                .map(|voter| {
                    let total: u64 = (1..=n).map(|k| b.get(k, voter)).sum();
                    BigRational::new(big(total) * 2, two_pow_n.clone())
                })
                .collect()
        }
        Method::WinningCount => {
            let w = winning_counts(rule)?;
            // -1 + sum / 2^(n-2) = -1 + 4·sum / 2^n
            (1..=n)
                .map(|voter| {
                    let total: u64 = (1..=n).map(|k| w.get(k, voter)).sum();
                    BigRational::new(big(total) * 4, two_pow_n.clone()) - BigRational::one()
                })
                .collect()
        }
    };
    Ok(IndexVector { values })
}

/// `β_i^(p) = Σ_k c_k p^k (1-p)^(n-k)` with `c_k = |A_i^(k)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotPolynomial {
    coefficients: Vec<u64>,
}

impl PivotPolynomial {
    pub fn n(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn evaluate(&self, p: &BigRational) -> BigRational {
        let q = BigRational::one() - p;
        let n = self.n();
        self.coefficients
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (k, &c)| {
                acc + Pow::pow(p, k as u32) * Pow::pow(&q, (n - k) as u32) * big(c)
            })
    }

    /// `b^n · β(a/b)`, an integer, for `0 <= a <= b`.
    pub fn evaluate_scaled(&self, a: u64, b: u64) -> BigInt {
        let n = self.n() as u32;
        let (a, rest) = (BigInt::from(a), BigInt::from(b - a));
        self.coefficients
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (k, &c)| {
                acc + Pow::pow(&a, k as u32) * Pow::pow(&rest, n - k as u32) * big(c)
            })
    }
}

/// p-biased pivot polynomial of 1-based `voter`.
pub fn p_biased_polynomial(rule: &VotingRule, voter: usize) -> Result<PivotPolynomial> {
    if voter == 0 || voter > rule.n() {
        return Err(Error::VoterOutOfRange { id: voter, n: rule.n() });
    }
    ensure_valid(rule)?;
    let (a, _) = pivotal_counts(rule)?;
    Ok(PivotPolynomial { coefficients: a.column(voter) })
}

/// Verdict of the unbiasedness test with the smallest `(k, i, j)` at which
/// `w_i^(k) != w_j^(k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnbiasedVerdict {
    pub unbiased: bool,
    pub witness: Option<(usize, usize, usize)>,
}

/// Unbiasedness read off each of the four equivalent characterizations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnbiasednessRoutes {
    /// Equal `w_i^(k)` rows.
    pub winning: bool,
    /// Equal `|A_i^(k)|` rows.
    pub pivotal: bool,
    /// Equal `|B_i^(k)|` rows.
    pub pivotal_winning: bool,
    /// Equal `β_i^(p)` at the `n + 1` points `p = t/n`, which pins down a
    /// polynomial of degree `n`.
    pub polynomial: bool,
}

impl UnbiasednessRoutes {
    pub fn agree(&self) -> bool {
        self.winning == self.pivotal && self.pivotal == self.pivotal_winning && self.pivotal_winning == self.polynomial
    }
}

pub fn unbiasedness_routes(rule: &VotingRule) -> Result<UnbiasednessRoutes> {
    ensure_valid(rule)?;
    let n = rule.n() as u64;
    let w = winning_counts(rule)?;
    let (a, b) = pivotal_counts(rule)?;
    let polys: Vec<PivotPolynomial> =
        (1..=rule.n()).map(|voter| PivotPolynomial { coefficients: a.column(voter) }).collect();
    let polynomial = (0..=n).all(|t| {
        let first = polys[0].evaluate_scaled(t, n);
        polys[1..].iter().all(|p| p.evaluate_scaled(t, n) == first)
    });
    Ok(UnbiasednessRoutes {
        winning: w.rows_constant(),
        pivotal: a.rows_constant(),
        pivotal_winning: b.rows_constant(),
        polynomial,
    })
}

/// Unbiasedness via equal winning counts, cross-checked against the `A`- and
/// `B`-count characterizations whenever the rule fits in a table.
pub fn is_unbiased(rule: &VotingRule) -> Result<UnbiasedVerdict> {
    ensure_valid(rule)?;
    let w = winning_counts(rule)?;
    let witness = w.first_difference();
    let unbiased = witness.is_none();
    if rule.table().is_ok() {
        let (a, b) = pivotal_counts(rule)?;
        if a.rows_constant() != unbiased || b.rows_constant() != unbiased {
            return Err(Error::InconsistentVerdicts(format!(
                "W: {unbiased}, A: {}, B: {}",
                a.rows_constant(),
                b.rows_constant()
            )));
        }
    }
    Ok(UnbiasedVerdict { unbiased, witness })
}

pub fn is_ss_fair(rule: &VotingRule) -> Result<bool> {
    Ok(shapley_shubik(rule, Method::WinningCount)?.all_equal())
}

pub fn is_banzhaf_fair(rule: &VotingRule) -> Result<bool> {
    Ok(banzhaf(rule, Method::WinningCount)?.all_equal())
}

/// Checks `2·Σ_k w_i^(k) / C(n-1, k-1) = n + 1` for every voter of a
/// Shapley-Shubik-fair rule.
pub fn ss_fair_identity_check(rule: &VotingRule) -> Result<bool> {
    if !is_ss_fair(rule)? {
        return Err(Error::NotShapleyFair);
    }
    let n = rule.n();
    let w = winning_counts(rule)?;
    let target = BigRational::from_integer(BigInt::from(n + 1));
    Ok((1..=n).all(|voter| {
        let sum = (1..=n).fold(BigRational::zero(), |acc, k| {
            acc + BigRational::new(big(w.get(k, voter)), BigInt::from(binomial_big(n as u64 - 1, k as u64 - 1)))
        });
        sum * BigInt::from(2) == target
    }))
}

/// Fairness verdicts read from a winning-count matrix with integer
/// arithmetic only. Valid for `n <= 33`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CountFairness {
    pub ss_fair: bool,
    pub banzhaf_fair: bool,
    pub unbiased: bool,
}

/// Integer form of the closed-form indices: `φ_i` is affine in
/// `Σ_k w_i^(k)·(k-1)!(n-k)!` and `β_i` in `Σ_k w_i^(k)`.
pub fn fairness_from_counts(w: &CountMatrix) -> CountFairness {
    let n = w.n();
    assert!(n <= 33, "integer fairness path overflows beyond n = 33");
    let fact: Vec<u128> = (0..=n).scan(1u128, |acc, k| {
        if k > 0 {
            *acc *= k as u128;
        }
        Some(*acc)
    }).collect();
    let ss: Vec<u128> = (1..=n)
        .map(|voter| (1..=n).map(|k| w.get(k, voter) as u128 * fact[k - 1] * fact[n - k]).sum())
        .collect();
    let bz: Vec<u64> = (1..=n).map(|voter| (1..=n).map(|k| w.get(k, voter)).sum()).collect();
    CountFairness {
        ss_fair: ss.windows(2).all(|p| p[0] == p[1]),
        banzhaf_fair: bz.windows(2).all(|p| p[0] == p[1]),
        unbiased: w.rows_constant(),
    }
}

/// `C(n-1, k-1)`, the offset in `w_i^(k) + w_i^(n-k+1) = C(n-1, k-1) + |B_i^(k)|`,
/// which follows from neutrality.
pub fn duality_target(n: usize, k: usize) -> u64 {
    binomial(n as u64 - 1, k as u64 - 1)
}
