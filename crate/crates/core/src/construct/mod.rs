//! Constructions of fair rules, the number theory behind them, and the
//! worked examples.

pub mod design;
pub mod parity;
pub mod rules;

pub use design::{
    complementary_balanced_family, cyclic_orbits, design_half_family, rule_from_half_family, DesignFamily, HalfFamily,
};
pub use parity::{central_binom_div4, lucas_parity};
pub use rules::{
    appendix_b_family, example_rule, example_rule_by_name, majority_rule, prism_family, prism_witness,
    representative_democracy, rule_from_intersecting_family, unbiased_rule, ExampleRule, FIG3_LABELS, PRISM_LABELS,
};
