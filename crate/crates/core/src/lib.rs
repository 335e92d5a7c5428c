//! Exact fairness analysis of two-candidate voting rules: Shapley-Shubik and
//! Banzhaf indices, unbiasedness and equitability, constructions of fair
//! rules and exhaustive enumeration for small electorates.
//!
//! Voters are `1..=n`; a coalition is an `n`-bit mask with voter `i` at bit
//! `i - 1`.

pub mod binomial;
pub mod coalition;
pub mod construct;
pub mod counts;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod indices;
pub mod rule;
pub mod symmetry;

pub use coalition::Coalition;
pub use error::{Error, Result};
pub use indices::{banzhaf, is_banzhaf_fair, is_ss_fair, is_unbiased, shapley_shubik, IndexVector, Method};
pub use rule::{ValidationReport, VotingRule, WinTable};
pub use symmetry::{automorphism_group, is_equitable, is_symmetry, Permutation};
