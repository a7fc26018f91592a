//! Brute-force cross-checks.
//!
//! Nothing here calls into `padics`, `series` or `factor`: squares and roots
//! come from full scans, products from a plain double loop. Agreement with the
//! fast paths is therefore independent evidence.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::classify::QuadInput;
use crate::error::{Error, Result};
use crate::serial;
use crate::series::TruncSeries;

pub const SCAN_LIMIT: u64 = 1_000_000;
pub const PROBE_LIMIT: u64 = 10_000;
pub const PROBE_MAX_DEPTH: usize = 4;

fn scan_modulus(p: u64, k: u32, limit: u64) -> Result<u64> {
    let mut m: u64 = 1;
    for _ in 0..k {
        m = m
            .checked_mul(p)
            .filter(|&m| m <= limit)
            .ok_or_else(|| Error::ModulusTooLarge(format!("{p}^{k}")))?;
    }
    Ok(m)
}

fn residue(v: &BigInt, m: u64) -> u64 {
    let bm = BigInt::from(m);
    let r = ((v % &bm) + &bm) % &bm;
    r.to_u64().expect("residue below modulus")
}

/// Whether `d` is a square modulo `p^k`, by checking every `y ∈ [0, p^k)`.
pub fn brute_square_mod(d: &BigInt, p: u64, k: u32) -> Result<bool> {
    let m = scan_modulus(p, k, SCAN_LIMIT)?;
    let target = residue(d, m) as u128;
    let m128 = m as u128;
    Ok((0..m as u128).any(|y| y * y % m128 == target))
}

/// Every `y ∈ [0, p^k)` with `A y² + B y + C ≡ 0 (mod p^k)`, ascending.
pub fn brute_roots_mod(a: &BigInt, b: &BigInt, c: &BigInt, p: u64, k: u32) -> Result<Vec<u64>> {
    let m = scan_modulus(p, k, SCAN_LIMIT)?;
    let (a, b, c) = (residue(a, m) as u128, residue(b, m) as u128, residue(c, m) as u128);
    let m128 = m as u128;
    Ok((0..m)
        .filter(|&y| {
            let y = y as u128;
            (a * (y * y % m128) + b * y + c).is_multiple_of(m128)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub order: usize,
    /// `f_k − (a·b)_k` for `k = 0..=order`.
    #[serde(with = "serial::vec_bigint")]
    pub residuals: Vec<BigInt>,
    /// Highest order through which every residual vanishes; `None` if `k = 0`
    /// already fails.
    pub residuals_zero_through: Option<usize>,
    pub a_proper: bool,
    pub b_proper: bool,
    pub passed: bool,
}

/// Checks `f ≡ a·b` through the order of `f`.
pub fn verify_factorization(
    f: &TruncSeries,
    a: &TruncSeries,
    b: &TruncSeries,
) -> Result<VerificationReport> {
    let order = f.order();
    if a.order() < order || b.order() < order {
        return Err(Error::OrderMismatch(format!(
            "target has order {order}, factors have {} and {}",
            a.order(),
            b.order()
        )));
    }
    let (fa, fb) = (a.coeffs(), b.coeffs());
    let mut residuals = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut product = BigInt::zero();
        for i in 0..=k {
            product += &fa[i] * &fb[k - i];
        }
        residuals.push(&f.coeffs()[k] - product);
    }
    let first_bad = residuals.iter().position(|r| !r.is_zero());
    let residuals_zero_through = match first_bad {
        None => Some(order),
        Some(0) => None,
        Some(k) => Some(k - 1),
    };
    let proper = |c: &BigInt| !c.abs().is_one();
    let a_proper = proper(&fa[0]);
    let b_proper = proper(&fb[0]);
    Ok(VerificationReport {
        order,
        residuals,
        residuals_zero_through,
        a_proper,
        b_proper,
        passed: first_bad.is_none() && a_proper && b_proper,
    })
}

/// Residues of the target coefficients `f_0..=f_depth` modulo `modulus`.
fn target_residues(q: &QuadInput, depth: usize, modulus: i128) -> Result<Vec<i128>> {
    let p = q.p as i128;
    let pow = |e: u32| -> Result<i128> {
        p.checked_pow(e)
            .ok_or_else(|| Error::ModulusTooLarge(format!("{p}^{e}")))
    };
    let to_i = |v: &BigInt| -> i128 {
        let bm = BigInt::from(modulus);
        (((v % &bm) + &bm) % &bm).to_i128().expect("residue fits")
    };
    let mut f = vec![0i128; depth + 1];
    f[0] = pow(q.n)?.rem_euclid(modulus);
    if depth >= 1 {
        if let Some(m) = q.m {
            f[1] = to_i(&(num_traits::pow(BigInt::from(q.p), m as usize) * &q.beta));
        }
    }
    if depth >= 2 {
        f[2] = to_i(&q.alpha);
    }
    for k in 3..=depth {
        f[k] = q.tail.get(k - 3).map(to_i).unwrap_or(0);
    }
    Ok(f)
}

/// One-sided irreducibility evidence.
///
/// Searches for `a = ±p^s + a₁x + ⋯`, `b = ±p^t + b₁x + ⋯` with
/// `s, t ≥ 1`, `s + t = n`, satisfying the product equations through order
/// `depth` modulo `M = p^e`. Every integer solution reduces to a residue
/// solution, so `true` (nothing found) rules out factorizations with non-unit
/// constant terms; `false` proves nothing.
///
/// `e` is `max(n, m) + 1`, lowered until `p^e ≤ bound` (but never below
/// `min(s,t) + 1`). With the full `e`, depth 2 is exactly as strong as
/// integer solvability of the first two orders.
pub fn exhaustive_irreducibility_probe(q: &QuadInput, depth: usize, bound: u64) -> Result<bool> {
    let p = q.p;
    scan_modulus(p, q.n, PROBE_LIMIT)?;
    if depth == 0 || depth > PROBE_MAX_DEPTH {
        return Err(Error::InvalidArgument(format!(
            "probe depth must be in 1..={PROBE_MAX_DEPTH}"
        )));
    }
    let full = q.n.max(q.m.unwrap_or(0)) + 1;
    for s in 1..q.n {
        let t = q.n - s;
        let floor = s.min(t) + 1;
        let e = (floor..=full)
            .rev()
            .find(|&e| scan_modulus(p, e, bound).is_ok())
            .unwrap_or(floor);
        let modulus = scan_modulus(p, e, u64::MAX)?;
        let m = modulus as i128;
        let f = target_residues(q, depth, m)?;
        let ps = (p as i128).pow(s).rem_euclid(m);
        let pt = (p as i128).pow(t).rem_euclid(m);
        for sign in [1i128, -1] {
            let a0 = (sign * ps).rem_euclid(m);
            let b0 = (sign * pt).rem_euclid(m);
            let mut search = Probe {
                m,
                a: vec![a0],
                b: vec![b0],
                f: &f,
                depth,
            };
            if search.extend() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

struct Probe<'a> {
    m: i128,
    a: Vec<i128>,
    b: Vec<i128>,
    f: &'a [i128],
    depth: usize,
}

fn inverse(c: i128, m: i128) -> i128 {
    if m == 1 {
        return 0;
    }
    let c = c.rem_euclid(m);
    (1..m).find(|&y| c * y % m == 1).expect("unit modulo m")
}

fn gcd(mut x: i128, mut y: i128) -> i128 {
    x = x.abs();
    y = y.abs();
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

impl Probe<'_> {
    /// Order `k` equation: `a₀ b_k + b₀ a_k ≡ f_k − Σ_{0<i<k} a_i b_{k−i}`.
    fn rhs(&self, k: usize) -> i128 {
        let mut r = self.f[k];
        for i in 1..k {
            r -= self.a[i] * self.b[k - i] % self.m;
        }
        r.rem_euclid(self.m)
    }

    fn extend(&mut self) -> bool {
        let k = self.a.len();
        if k > self.depth {
            return true;
        }
        let rhs = self.rhs(k);
        let (a0, b0) = (self.a[0], self.b[0]);
        if k == self.depth {
            // Last order: only solvability matters.
            let g = gcd(gcd(a0, b0), self.m);
            return rhs % g == 0;
        }
        // a₀ = ±p^s, so a₀ b_k ≡ r has gcd(a₀, M) solutions b_k or none.
        let g = gcd(a0, self.m);
        let step = self.m / g;
        let inv = inverse(a0 / g, step);
        for ak in 0..self.m {
            let r = (rhs - b0 * ak).rem_euclid(self.m);
            if r % g != 0 {
                continue;
            }
            let base = (r / g) * inv % step;
            for j in 0..g {
                let bk = base + j * step;
                self.a.push(ak);
                self.b.push(bk);
                let found = self.extend();
                self.a.pop();
                self.b.pop();
                if found {
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;

    #[test]
    fn square_scans() {
        assert!(brute_square_mod(&big(-20), 3, 5).unwrap());
        assert!(!brute_square_mod(&big(-20), 2, 6).unwrap());
        assert!(brute_square_mod(&big(0), 5, 4).unwrap());
        assert!(brute_square_mod(&big(1), 7, 8).is_err());
    }

    #[test]
    fn root_scans() {
        assert_eq!(brute_roots_mod(&big(1), &big(-3), &big(2), 7, 3).unwrap(), vec![1, 2]);
        assert_eq!(brute_roots_mod(&big(1), &big(0), &big(1), 5, 2).unwrap(), vec![7, 18]);
        assert!(brute_roots_mod(&big(1), &big(0), &big(1), 3, 1).unwrap().is_empty());
    }

    #[test]
    fn verification_examples() {
        let r = verify_factorization(
            &TruncSeries::from_i64(&[49, 21, 2]),
            &TruncSeries::from_i64(&[7, 2, 0]),
            &TruncSeries::from_i64(&[7, 1, 0]),
        )
        .unwrap();
        assert!(r.passed);
        assert_eq!(r.residuals_zero_through, Some(2));

        let r = verify_factorization(
            &TruncSeries::from_i64(&[4, 2, 1]),
            &TruncSeries::from_i64(&[2, 1, 0]),
            &TruncSeries::from_i64(&[2, 1, 0]),
        )
        .unwrap();
        assert!(!r.passed);
        assert_eq!(r.residuals, vec![big(0), big(-2), big(0)]);
        assert_eq!(r.residuals_zero_through, Some(0));

        let r = verify_factorization(
            &TruncSeries::from_i64(&[25, 0, -1]),
            &TruncSeries::from_i64(&[5, -1, 0]),
            &TruncSeries::from_i64(&[5, 1, 0]),
        )
        .unwrap();
        assert!(r.passed);

        assert!(verify_factorization(
            &TruncSeries::from_i64(&[25, 0, -1]),
            &TruncSeries::from_i64(&[5, -1]),
            &TruncSeries::from_i64(&[5, 1, 0]),
        )
        .is_err());
    }

    #[test]
    fn probe_examples() {
        let q = |p, n, m, beta, alpha| QuadInput::new(p, n, Some(m), big(beta), big(alpha));
        assert!(exhaustive_irreducibility_probe(&q(2, 2, 1, 1, 1), 2, 1000).unwrap());
        assert!(exhaustive_irreducibility_probe(&q(3, 3, 2, 1, 1), 2, 1000).unwrap());
        assert!(!exhaustive_irreducibility_probe(&q(7, 2, 1, 3, 2), 2, 1000).unwrap());
        assert!(exhaustive_irreducibility_probe(&q(2, 20, 1, 1, 1), 2, 1000).is_err());
        assert!(exhaustive_irreducibility_probe(&q(2, 2, 1, 1, 1), 5, 1000).is_err());
    }
}
