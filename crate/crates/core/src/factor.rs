//! Trial-division factorization with an explicit work bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;
pub const FACTOR_BOUND_ENV: &str = "ENVRAD_FACTOR_BOUND";

/// Trial-division bound, honoring `ENVRAD_FACTOR_BOUND` when set.
pub fn factor_bound_from_env() -> u64 {
    std::env::var(FACTOR_BOUND_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_FACTOR_BOUND)
}

/// Prime factorization of `n ≥ 1`, primes ascending.
///
/// Trial division stops at `bound`; if a composite-or-prime cofactor larger
/// than `bound²` survives, the factorization is refused rather than guessed.
pub fn factor_int(n: &BigInt, bound: u64) -> Result<Vec<(BigInt, u32)>> {
    if !n.is_positive() {
        return Err(Error::Unsupported(format!("factor_int requires n >= 1, got {n}")));
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut d = BigInt::from(2u32);
    let mut dv: u64 = 2;
    while &d * &d <= rest {
        if dv > bound {
            return Err(Error::FactorLimit { cofactor: rest.to_string(), bound });
        }
        let mut e = 0u32;
        loop {
            let (q, r) = rest.div_rem(&d);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        let step = if dv == 2 { 1u32 } else { 2 };
        d += step;
        dv += u64::from(step);
    }
    if !rest.is_one() {
        out.push((rest, 1));
    }
    Ok(out)
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: &BigInt, bound: u64) -> Result<BigInt> {
    Ok(factor_int(n, bound)?.into_iter().map(|(p, _)| p).product())
}

pub fn prime_divisors(n: &BigInt, bound: u64) -> Result<Vec<BigInt>> {
    Ok(factor_int(n, bound)?.into_iter().map(|(p, _)| p).collect())
}

pub fn is_prime(n: &BigInt, bound: u64) -> Result<bool> {
    if n <= &BigInt::one() {
        return Ok(false);
    }
    let f = factor_int(n, bound)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}
