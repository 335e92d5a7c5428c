//! Coalitions as `n`-bit masks. Voter `i` (1-based) lives in bit `i - 1`.

use std::fmt;

use crate::error::{Error, Result, MAX_MASK_VOTERS};

/// Mask with the low `n` bits set.
#[inline]
pub fn full_mask(n: usize) -> u64 {
    debug_assert!(n <= MAX_MASK_VOTERS);
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A set of voters drawn from `{1, .., n}`.
///
/// Ordering is by mask value first, which is the "lexicographic mask order"
/// used for every deterministic diagnostic in the crate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coalition {
    bits: u64,
    n: u8,
}

impl Coalition {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_MASK_VOTERS);
        Coalition { bits: 0, n: n as u8 }
    }

    pub fn grand(n: usize) -> Self {
        assert!(n <= MAX_MASK_VOTERS);
        Coalition { bits: full_mask(n), n: n as u8 }
    }

    /// Builds a coalition from 1-based voter ids.
    pub fn from_ids(ids: &[usize], n: usize) -> Result<Self> {
        if n > MAX_MASK_VOTERS {
            return Err(Error::TooLarge { n, limit: MAX_MASK_VOTERS, what: "coalition masks" });
        }
        let mut bits = 0u64;
        for &id in ids {
            if id == 0 || id > n {
                return Err(Error::VoterOutOfRange { id, n });
            }
            let bit = 1u64 << (id - 1);
            if bits & bit != 0 {
                return Err(Error::DuplicateVoter(id));
            }
            bits |= bit;
        }
        Ok(Coalition { bits, n: n as u8 })
    }

    /// Builds a coalition from a raw mask; bits at or above `n` are rejected.
    pub fn from_bits(bits: u64, n: usize) -> Result<Self> {
        if n > MAX_MASK_VOTERS {
            return Err(Error::TooLarge { n, limit: MAX_MASK_VOTERS, what: "coalition masks" });
        }
        if bits & !full_mask(n) != 0 {
            let id = 64 - (bits & !full_mask(n)).leading_zeros() as usize;
            return Err(Error::VoterOutOfRange { id, n });
        }
        Ok(Coalition { bits, n: n as u8 })
    }

    /// Unchecked constructor for masks already known to fit.
    #[inline]
    pub(crate) fn raw(bits: u64, n: usize) -> Self {
        debug_assert!(bits & !full_mask(n) == 0);
        Coalition { bits, n: n as u8 }
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// Whether voter `id` (1-based) belongs to the coalition.
    #[inline]
    pub fn contains(&self, id: usize) -> bool {
        id >= 1 && id <= self.n() && self.bits >> (id - 1) & 1 == 1
    }

    #[inline]
    pub fn complement(&self) -> Self {
        Coalition { bits: !self.bits & full_mask(self.n()), n: self.n }
    }

    #[inline]
    pub fn is_subset_of(&self, other: &Coalition) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn intersects(&self, other: &Coalition) -> bool {
        self.bits & other.bits != 0
    }

    #[inline]
    pub fn intersection_len(&self, other: &Coalition) -> usize {
        (self.bits & other.bits).count_ones() as usize
    }

    /// Sorted 1-based ids of the members.
    pub fn ids(&self) -> Vec<usize> {
        self.members().collect()
    }

    /// Iterates the 1-based ids of the members in increasing order.
    pub fn members(&self) -> impl Iterator<Item = usize> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(tz + 1)
            }
        })
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, id) in self.members().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{id}")?;
        }
        write!(f, "}}")
    }
}

/// Iterates all `k`-element masks over `n` bits in increasing numeric order
/// (Gosper's hack).
pub(crate) fn masks_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = if n == 64 { None } else { Some(1u64 << n) };
    let mut next = if k > n {
        None
    } else if k == 0 {
        Some(0u64)
    } else {
        Some(full_mask(k))
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.wrapping_add(c);
            if r == 0 {
                None
            } else {
                let succ = (((r ^ cur) >> 2) / c) | r;
                match limit {
                    Some(l) if succ >= l => None,
                    _ => Some(succ),
                }
            }
        };
        Some(cur)
    })
}

/// Pairwise-intersection test returning the first disjoint pair (by position
/// in `family`).
pub fn check_intersecting(family: &[Coalition]) -> Option<(Coalition, Coalition)> {
    for (pos, a) in family.iter().enumerate() {
        for b in &family[pos..] {
            if !a.intersects(b) {
                return Some((*a, *b));
            }
        }
    }
    None
}
