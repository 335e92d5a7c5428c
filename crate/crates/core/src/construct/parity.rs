//! Binomial parity via Lucas's theorem for the prime 2.

use crate::error::{Error, Result};

/// `C(m, r) mod 2`.
///
/// By Lucas, `C(m, r)` is odd iff every binary digit of `r` is at most the
/// matching digit of `m`, i.e. iff no digit pair is `(0, 1)`.
pub fn lucas_parity(m: u64, r: u64) -> Result<u8> {
    if r > m {
        return Err(Error::BadBinomial { m, r });
    }
    let (mut m, mut r) = (m, r);
    while r != 0 {
        if r & 1 == 1 && m & 1 == 0 {
            return Ok(0);
        }
        m >>= 1;
        r >>= 1;
    }
    Ok(1)
}

/// Whether `C(2m, m)` is divisible by 4, which holds exactly when `m` is not
/// a power of two.
pub fn central_binom_div4(m: u64) -> bool {
    m != 0 && !m.is_power_of_two()
}
