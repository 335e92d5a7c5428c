use thiserror::Error;

/// Largest electorate for which a full `2^n` membership table is built.
pub const MAX_TABLE_VOTERS: usize = 24;

/// Largest electorate a coalition mask can hold.
pub const MAX_MASK_VOTERS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("voter id {id} out of range 1..={n}")]
    VoterOutOfRange { id: usize, n: usize },
    #[error("duplicate voter id {0}")]
    DuplicateVoter(usize),
    #[error("coalition has {got} voters but the rule has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("n={n} exceeds the limit of {limit} for {what}")]
    TooLarge { n: usize, limit: usize, what: &'static str },
    #[error("electorate must have at least one voter")]
    EmptyElectorate,
    #[error("listed coalitions {0} and {1} are nested; minimal winning coalitions must form an antichain")]
    NotAntichain(String, String),
    #[error("coalitions {0} and {1} are disjoint")]
    NotIntersecting(String, String),
    #[error("coalition {set} has size {got}, expected {expected}")]
    WrongSetSize { set: String, got: usize, expected: usize },
    #[error("coalition {0} is listed twice")]
    DuplicateSet(String),
    #[error("family is not complementary: {0}")]
    NotComplementary(String),
    #[error("rule is not a valid voting rule: {0}")]
    InvalidRule(String),
    #[error("binomial({m}, {r}) is undefined for r > m")]
    BadBinomial { m: u64, r: u64 },
    #[error("binomial(2k+1, k) is odd for k={0}; no half design exists")]
    OddDesign(usize),
    #[error("binomial(n, n/2) is not divisible by 4 for n={0}")]
    NotDivisible(usize),
    #[error("no fair rule exists for n={0} (power of two)")]
    PowerOfTwo(usize),
    #[error("n={0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("n={0} must be odd")]
    EvenElectorate(usize),
    #[error("n={0} must be even")]
    OddElectorate(usize),
    #[error("rule is not Shapley-Shubik-fair")]
    NotShapleyFair,
    #[error("unknown example rule {0:?}")]
    UnknownExample(String),
    #[error("unbiasedness verdicts disagree: {0}")]
    InconsistentVerdicts(String),
    #[error("permutation is not a bijection on 1..={0}")]
    BadPermutation(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_table_cap(n: usize, what: &'static str) -> Result<()> {
    if n > MAX_TABLE_VOTERS {
        Err(Error::TooLarge { n, limit: MAX_TABLE_VOTERS, what })
    } else {
        Ok(())
    }
}
