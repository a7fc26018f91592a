//! Small integer helpers shared by the p-adic, series and factor modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn pow(p: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

pub fn divides(p: u64, v: &BigInt) -> bool {
    (v % BigInt::from(p)).is_zero()
}

/// Non-negative residue of `v` modulo `m` (`m > 0`).
pub fn modulo(v: &BigInt, m: &BigInt) -> BigInt {
    v.mod_floor(m)
}

/// Inverse of `c` modulo `m`, in `[0, m)`; `None` when `gcd(c, m) != 1`.
pub fn mod_inverse(c: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let ext = c.mod_floor(m).extended_gcd(m);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(ext.x.mod_floor(m))
}

/// `num / den`, failing loudly when the division is not exact.
pub fn exact_div(num: &BigInt, den: &BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::Internal(format!(
            "{what}: {num} is not divisible by {den}"
        )))
    }
}

/// Exact integer square root of a non-negative perfect square.
pub fn exact_sqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    if &(&r * &r) == v {
        Some(r)
    } else {
        None
    }
}

/// Smallest prime factor of `|v|` found by trial division up to `limit`.
/// Returns the prime-power factorization found so far plus the unfactored
/// cofactor (1 when fully factored).
pub fn trial_factor(v: &BigInt, limit: u64) -> (Vec<(BigInt, u32)>, BigInt) {
    let mut rest = v.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= limit {
        let bd = BigInt::from(d);
        if &bd * &bd > rest {
            break;
        }
        if (&rest % &bd).is_zero() {
            let mut e = 0u32;
            while (&rest % &bd).is_zero() {
                rest /= &bd;
                e += 1;
            }
            out.push((bd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let r_sq_bound = BigInt::from(limit) * BigInt::from(limit);
        if rest <= r_sq_bound {
            out.push((rest, 1));
            rest = BigInt::one();
        }
    }
    (out, rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(require_prime(1).is_err());
    }

    #[test]
    fn inverse_and_modulo() {
        assert_eq!(mod_inverse(&big(-4), &big(5)), Some(big(1)));
        assert_eq!(mod_inverse(&big(6), &big(9)), None);
        assert_eq!(modulo(&big(-7), &big(5)), big(3));
    }

    #[test]
    fn factoring() {
        let (f, rest) = trial_factor(&big(-360), 1000);
        assert_eq!(f, vec![(big(2), 3), (big(3), 2), (big(5), 1)]);
        assert_eq!(rest, big(1));
        let (f, rest) = trial_factor(&big(1_000_003 * 2), 100);
        assert_eq!(f, vec![(big(2), 1)]);
        assert_eq!(rest, big(1_000_003));
    }
}
