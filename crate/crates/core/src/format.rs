//! The `.vr` rule file format.
//!
//! ```text
//! # comment
//! n 4
//! kind mwc
//! set 1 2
//! set 2 3 4
//! ```
//!
//! `kind mwc` lists minimal winning coalitions; `kind half` (even `n`) lists
//! the winning `n/2`-sets, every larger set winning.

use std::fmt::Write as _;

use thiserror::Error;

use crate::coalition::Coalition;
use crate::rule::{Repr, VotingRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Mwc,
    Half,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Mwc => "mwc",
            Kind::Half => "half",
        }
    }
}

/// Parsed contents of a rule file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleFile {
    pub n: usize,
    pub kind: Kind,
    pub sets: Vec<Coalition>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based; 0 for problems with the file as a whole.
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

pub fn parse(text: &str) -> Result<RuleFile, ParseError> {
    let mut n: Option<usize> = None;
    let mut kind: Option<Kind> = None;
    let mut sets: Vec<(usize, Coalition)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let keyword = words.next().unwrap_or("");
        let args: Vec<&str> = words.collect();
        match keyword {
            "n" => {
                if n.is_some() {
                    return Err(err(line, "duplicate `n` line"));
                }
                let [value] = args[..] else {
                    return Err(err(line, "expected `n <int>`"));
                };
                let value: usize = value.parse().map_err(|_| err(line, format!("invalid voter count {value:?}")))?;
                if value == 0 || value > crate::error::MAX_MASK_VOTERS {
                    return Err(err(line, format!("voter count must be in 1..={}", crate::error::MAX_MASK_VOTERS)));
                }
                n = Some(value);
            }
            "kind" => {
                if kind.is_some() {
                    return Err(err(line, "duplicate `kind` line"));
                }
                kind = Some(match args[..] {
                    ["mwc"] => Kind::Mwc,
                    ["half"] => Kind::Half,
                    _ => return Err(err(line, "expected `kind mwc` or `kind half`")),
                });
            }
            "set" => {
                let Some(n) = n else {
                    return Err(err(line, "`set` before `n`"));
                };
                if kind.is_none() {
                    return Err(err(line, "`set` before `kind`"));
                }
                let mut ids = Vec::with_capacity(args.len());
                for word in &args {
                    let id: usize = word.parse().map_err(|_| err(line, format!("invalid voter id {word:?}")))?;
                    if id == 0 || id > n {
                        return Err(err(line, format!("voter id {id} out of range 1..={n}")));
                    }
                    if ids.last().is_some_and(|&prev| prev >= id) {
                        return Err(err(line, "voter ids must be strictly increasing"));
                    }
                    ids.push(id);
                }
                let set = Coalition::from_ids(&ids, n).map_err(|e| err(line, e.to_string()))?;
                sets.push((line, set));
            }
            other => return Err(err(line, format!("unknown keyword {other:?}"))),
        }
    }

    let n = n.ok_or_else(|| err(0, "missing `n` line"))?;
    let kind = kind.ok_or_else(|| err(0, "missing `kind` line"))?;

    for (pos, (line, set)) in sets.iter().enumerate() {
        if let Some((_, earlier)) = sets[..pos].iter().find(|(_, s)| s == set) {
            return Err(err(*line, format!("coalition {earlier} is listed twice")));
        }
        match kind {
            Kind::Half => {
                if n % 2 == 1 {
                    return Err(err(*line, format!("`kind half` needs an even voter count, got {n}")));
                }
                if 2 * set.len() != n {
                    return Err(err(*line, format!("coalition {set} has size {}, expected {}", set.len(), n / 2)));
                }
            }
            Kind::Mwc => {
                if let Some((_, other)) = sets[..pos].iter().find(|(_, s)| s.is_subset_of(set) || set.is_subset_of(s)) {
                    return Err(err(*line, format!("coalitions {other} and {set} are nested")));
                }
            }
        }
    }
    Ok(RuleFile { n, kind, sets: sets.into_iter().map(|(_, s)| s).collect() })
}

impl RuleFile {
    pub fn to_rule(&self) -> crate::error::Result<VotingRule> {
        match self.kind {
            Kind::Mwc => VotingRule::from_mwcs(self.n, self.sets.clone()),
            Kind::Half => VotingRule::from_half_layer(self.n, &self.sets),
        }
    }
}

/// Parses a rule file into a (not yet validated) rule.
pub fn parse_rule(text: &str) -> Result<VotingRule, ParseError> {
    parse(text)?.to_rule().map_err(|e| err(0, e.to_string()))
}

/// Serializes a rule: half-layer rules on even `n` as `kind half`, all
/// others as `kind mwc` with sets in mask order.
pub fn serialize(rule: &VotingRule) -> crate::error::Result<String> {
    let n = rule.n();
    let (kind, sets): (Kind, Vec<Coalition>) = match rule.repr() {
        Repr::HalfLayer(_) if n.is_multiple_of(2) => (Kind::Half, rule.half_layer().unwrap_or_default()),
        _ => (Kind::Mwc, rule.minimal_winning_coalitions()?.to_vec()),
    };
    let mut out = format!("n {n}\nkind {}\n", kind.name());
    for set in sets {
        out.push_str("set");
        for id in set.members() {
            let _ = write!(out, " {id}");
        }
        out.push('\n');
    }
    Ok(out)
}
