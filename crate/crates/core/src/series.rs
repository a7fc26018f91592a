//! Truncated formal power series over Z.
//!
//! A [`TruncSeries`] of order `N` knows the coefficients of `x^0..=x^N`;
//! anything past `N` is unknown rather than zero.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, modulo, pow};
use crate::error::{Error, Result};
use crate::serial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncSeries {
    #[serde(with = "serial::vec_bigint")]
    coeffs: Vec<BigInt>,
}

impl TruncSeries {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a series needs at least a constant term".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    /// Polynomial `coeffs` viewed as a series known through `order`
    /// (zero-padded). Fails if the polynomial has a nonzero term past `order`.
    pub fn from_poly(coeffs: &[BigInt], order: usize) -> Result<Self> {
        if coeffs.iter().skip(order + 1).any(|c| !c.is_zero()) {
            return Err(Error::InvalidArgument(format!(
                "polynomial has terms beyond order {order}"
            )));
        }
        let mut out = vec![BigInt::zero(); order + 1];
        for (slot, c) in out.iter_mut().zip(coeffs) {
            *slot = c.clone();
        }
        Ok(Self { coeffs: out })
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self {
            coeffs: if coeffs.is_empty() {
                vec![BigInt::zero()]
            } else {
                coeffs.iter().map(|&c| BigInt::from(c)).collect()
            },
        }
    }

    pub fn constant(c: BigInt, order: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigInt::one(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient `k`; `None` past the known order.
    pub fn get(&self, k: usize) -> Option<&BigInt> {
        self.coeffs.get(k)
    }

    pub fn constant_term(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        self.require_order(order)?;
        Ok(Self {
            coeffs: self.coeffs[..=order].to_vec(),
        })
    }

    pub fn require_order(&self, needed: usize) -> Result<()> {
        if self.order() < needed {
            Err(Error::InsufficientOrder {
                needed,
                have: self.order(),
            })
        } else {
            Ok(())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0].abs().is_one()
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self {
            coeffs: (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(),
        }
    }

    /// Coefficients with trailing zeros removed (at least the constant term).
    pub fn trimmed(&self) -> Vec<BigInt> {
        let mut out = self.coeffs.clone();
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// Cauchy product through order `n`.
pub fn mul_trunc(a: &TruncSeries, b: &TruncSeries, n: usize) -> Result<TruncSeries> {
    a.require_order(n)?;
    b.require_order(n)?;
    let coeffs = (0..=n)
        .map(|j| {
            (0..=j).fold(BigInt::zero(), |acc, i| acc + &a.coeffs[i] * &b.coeffs[j - i])
        })
        .collect();
    Ok(TruncSeries { coeffs })
}

/// Inverse of a unit (`a₀ = ±1`) through order `n`.
pub fn invert_unit(a: &TruncSeries, n: usize) -> Result<TruncSeries> {
    a.require_order(n)?;
    let a0 = a.constant_term().clone();
    if !a0.abs().is_one() {
        return Err(Error::NotAUnit(a0.to_string()));
    }
    // a₀ = ±1 is its own inverse.
    let mut inv: Vec<BigInt> = Vec::with_capacity(n + 1);
    inv.push(a0.clone());
    for j in 1..=n {
        let acc = (1..=j).fold(BigInt::zero(), |acc, i| acc + &a.coeffs[i] * &inv[j - i]);
        inv.push(-(&a0 * acc));
    }
    Ok(TruncSeries { coeffs: inv })
}

/// Result of replacing a series `a` (with `a₀ = p`, `p ∤ a₁`) by the associate
/// `q = u·a` whose coefficients `2..=t` vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeadNormalization {
    /// `u = 1 + u₁x + … + u_t x^t`.
    pub unit: TruncSeries,
    /// `q = u·a`, known through the order of `a`.
    pub associate: TruncSeries,
    #[serde(with = "serial::bigint")]
    pub lambda: BigInt,
}

/// Forward substitution for `u₁..u_t` in
///
/// ```text
/// λ = a₁ + p·u₁
/// 0 = a_j + Σ_{i=1}^{j-1} a_i u_{j-i} + p·u_j      (2 ≤ j ≤ t)
/// ```
///
/// Returns `None` as soon as some `u_j` fails to be an integer.
pub fn solve_head_system(
    a: &TruncSeries,
    p: u64,
    lambda: &BigInt,
    t: usize,
) -> Result<Option<Vec<BigInt>>> {
    a.require_order(t)?;
    let bp = BigInt::from(p);
    let mut u: Vec<BigInt> = Vec::with_capacity(t);
    for j in 1..=t {
        let numerator = if j == 1 {
            lambda - &a.coeffs[1]
        } else {
            -head_residual(a, &u, j)
        };
        let (q, r) = numerator.div_rem(&bp);
        if !r.is_zero() {
            return Ok(None);
        }
        u.push(q);
    }
    Ok(Some(u))
}

/// `a_j + Σ_{i=1}^{j-1} a_i u_{j-i}` with `u` holding `u₁..u_{j-1}` (or more).
fn head_residual(a: &TruncSeries, u: &[BigInt], j: usize) -> BigInt {
    (1..j).fold(a.coeffs[j].clone(), |acc, i| acc + &a.coeffs[i] * &u[j - i - 1])
}

/// Finds a unit `u` of degree `t` such that `u·a = p + λx + O(x^{t+1})` with
/// `λ ≡ a₁ (mod p)`.
///
/// `λ` starts at the residue of `a₁` in `[0, p)`. At stage `j` the next
/// residual `R = a_{j+1} + Σ a_i u_{j+1-i}` must be divisible by `p`; when it
/// is not, `λ` moves by `k·p^j` with `R + (−1)^{j+1}·k·a₁^j ≡ 0 (mod p)`,
/// `k` taken in the symmetric range `(−p/2, p/2]`, and the system is re-solved.
pub fn normalize_head(a: &TruncSeries, p: u64, t: usize) -> Result<HeadNormalization> {
    arith::require_prime(p)?;
    if t == 0 {
        return Err(Error::InvalidArgument("target index t must be at least 1".into()));
    }
    a.require_order(t)?;
    let bp = BigInt::from(p);
    if a.coeffs[0] != bp {
        return Err(Error::InvalidArgument(format!(
            "constant term must be {p}, got {}",
            a.coeffs[0]
        )));
    }
    let a1 = a.coeffs[1].clone();
    if modulo(&a1, &bp).is_zero() {
        return Err(Error::NotCoprime {
            value: a1.to_string(),
            p,
        });
    }

    let mut lambda = modulo(&a1, &bp);
    let mut u = solve_head_system(a, p, &lambda, 1)?
        .ok_or_else(|| Error::Internal("u₁ not integral for λ ≡ a₁".into()))?;
    for j in 1..t {
        let residual = head_residual(a, &u, j + 1);
        if !modulo(&residual, &bp).is_zero() {
            let sign = if (j + 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let coef = sign * num_traits::pow(a1.clone(), j);
            let inv = arith::mod_inverse(&coef, &bp)
                .ok_or_else(|| Error::Internal("a₁ not invertible mod p".into()))?;
            let mut k = modulo(&(-&residual * inv), &bp);
            if &k * 2 > bp {
                k -= &bp;
            }
            lambda += k * pow(p, j as u32);
            u = solve_head_system(a, p, &lambda, j)?.ok_or_else(|| {
                Error::Internal(format!("stage {j}: refined λ lost integrality"))
            })?;
        }
        let residual = head_residual(a, &u, j + 1);
        let next = arith::exact_div(&-residual, &bp, "head normalization")?;
        u.push(next);
    }

    let mut unit_coeffs = Vec::with_capacity(a.order() + 1);
    unit_coeffs.push(BigInt::one());
    unit_coeffs.extend(u);
    let unit = TruncSeries::from_poly(&unit_coeffs, a.order().max(t))?;
    let associate = mul_trunc(&unit, a, a.order())?;
    Ok(HeadNormalization {
        unit: unit.truncate(t)?,
        associate,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;

    fn s(c: &[i64]) -> TruncSeries {
        TruncSeries::from_i64(c)
    }

    #[test]
    fn products() {
        assert_eq!(mul_trunc(&s(&[1, 1, 0]), &s(&[1, -1, 0]), 2).unwrap(), s(&[1, 0, -1]));
        assert_eq!(mul_trunc(&s(&[2, 3, 0]), &s(&[2, 1, 0]), 2).unwrap(), s(&[4, 8, 3]));
        assert_eq!(
            mul_trunc(&TruncSeries::constant(big(5), 4), &TruncSeries::constant(big(5), 4), 4)
                .unwrap(),
            TruncSeries::constant(big(25), 4)
        );
        assert!(matches!(
            mul_trunc(&s(&[1, 1]), &s(&[1, 1, 1]), 2),
            Err(Error::InsufficientOrder { needed: 2, have: 1 })
        ));
    }

    #[test]
    fn inverses() {
        assert_eq!(invert_unit(&s(&[1, 1, 0, 0]), 3).unwrap(), s(&[1, -1, 1, -1]));
        assert_eq!(invert_unit(&TruncSeries::one(5), 5).unwrap(), TruncSeries::one(5));
        assert_eq!(invert_unit(&s(&[-1, 1, 0]), 2).unwrap(), s(&[-1, -1, -1]));
        assert_eq!(invert_unit(&s(&[2, 1]), 1), Err(Error::NotAUnit("2".into())));
    }

    #[test]
    fn head_already_normal() {
        for p in [2u64, 3, 5, 7] {
            let a = TruncSeries::from_poly(&[big(p as i64), big(1)], 4).unwrap();
            let h = normalize_head(&a, p, 4).unwrap();
            assert_eq!(h.unit, TruncSeries::one(4));
            assert_eq!(h.associate, a);
        }
    }

    #[test]
    fn head_three_plus_x_plus_x2() {
        let a = TruncSeries::from_poly(&[big(3), big(1), big(1)], 4).unwrap();
        let h = normalize_head(&a, 3, 2).unwrap();
        assert_eq!(h.unit.trimmed(), vec![big(1), big(-1)]);
        assert_eq!(h.associate.trimmed(), vec![big(3), big(-2), big(0), big(-1)]);
        assert_eq!(h.lambda, big(-2));
    }

    #[test]
    fn head_five_plus_cubic() {
        let a = TruncSeries::from_poly(&[big(5), big(2), big(1), big(1)], 6).unwrap();
        let h = normalize_head(&a, 5, 3).unwrap();
        let q = mul_trunc(&TruncSeries::from_poly(h.unit.coeffs(), 6).unwrap(), &a, 6).unwrap();
        assert_eq!(q, h.associate);
        assert_eq!(q.coeffs()[0], big(5));
        assert_eq!(modulo(&q.coeffs()[1], &big(5)), big(2));
        assert!(q.coeffs()[2].is_zero() && q.coeffs()[3].is_zero());
    }

    #[test]
    fn head_rejects_bad_input() {
        let a = s(&[3, 3, 1]);
        assert!(normalize_head(&a, 3, 2).is_err());
        let a = s(&[5, 1, 1]);
        assert!(normalize_head(&a, 3, 2).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(s(&[3, -2, 0, -1]).to_string(), "3 - 2x - x^3 + O(x^4)");
    }
}
