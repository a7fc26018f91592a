//! Exact p-adic arithmetic on integers embedded in Z_p.
//!
//! Everything here works on exact integers; residues are only taken when a
//! residue is what the caller asked for. Squares in Z_p are recognized by the
//! usual criterion: `d = p^t u` with `gcd(p, u) = 1` is a square iff `t` is
//! even and `u` is a quadratic residue mod `p` (odd `p`) or `u ≡ 1 mod 8`
//! (`p = 2`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{self, modulo, pow};
use crate::error::{Error, Result};
use crate::serial;

/// `d = p^t · u` with `gcd(p, u) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Valuation {
    pub t: u32,
    #[serde(with = "serial::bigint")]
    pub u: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareClass {
    pub is_square: bool,
    pub is_zero: bool,
    pub valuation: Option<u32>,
    /// `u mod p` for odd `p`, `u mod 8` for `p = 2`; non-negative.
    #[serde(with = "serial::opt_bigint")]
    pub unit_residue: Option<BigInt>,
}

/// A root `a` of `g(y) = y² − βy + α` modulo `p^k`, with the exact
/// decompositions `g(a) = p^mu · r` and `β − 2a = p^ell · t_unit`.
///
/// `mu = None` means `g(a) = 0` in Z (then `r = 0`); `ell = None` means
/// `β = 2a` (then `t_unit = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootCertificate {
    #[serde(with = "serial::bigint")]
    pub a: BigInt,
    pub k: u32,
    pub mu: Option<u32>,
    #[serde(with = "serial::bigint")]
    pub r: BigInt,
    pub ell: Option<u32>,
    #[serde(with = "serial::bigint")]
    pub t_unit: BigInt,
}

pub fn valuation(d: &BigInt, p: u64) -> Result<Valuation> {
    arith::require_prime(p)?;
    if d.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let bp = BigInt::from(p);
    let mut t = 0u32;
    let mut u = d.clone();
    loop {
        let (q, r) = u.div_rem(&bp);
        if !r.is_zero() {
            break;
        }
        u = q;
        t += 1;
    }
    Ok(Valuation { t, u })
}

/// Euler's criterion: `u^((p−1)/2) ≡ 1 (mod p)`.
pub fn is_qr_mod_p(u: &BigInt, p: u64) -> Result<bool> {
    arith::require_prime(p)?;
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let bp = BigInt::from(p);
    let r = modulo(u, &bp);
    if r.is_zero() {
        return Err(Error::NotCoprime {
            value: u.to_string(),
            p,
        });
    }
    let e = BigInt::from((p - 1) / 2);
    Ok(r.modpow(&e, &bp).is_one())
}

pub fn is_square_zp(d: &BigInt, p: u64) -> Result<SquareClass> {
    arith::require_prime(p)?;
    if d.is_zero() {
        return Ok(SquareClass {
            is_square: true,
            is_zero: true,
            valuation: None,
            unit_residue: None,
        });
    }
    let Valuation { t, u } = valuation(d, p)?;
    let (residue, unit_ok) = if p == 2 {
        let r = modulo(&u, &BigInt::from(8));
        let ok = r.is_one();
        (r, ok)
    } else {
        let r = modulo(&u, &BigInt::from(p));
        let ok = is_qr_mod_p(&u, p)?;
        (r, ok)
    };
    Ok(SquareClass {
        is_square: t % 2 == 0 && unit_ok,
        is_zero: false,
        valuation: Some(t),
        unit_residue: Some(residue),
    })
}

fn eval_quadratic(a: &BigInt, b: &BigInt, c: &BigInt, y: &BigInt) -> BigInt {
    (a * y + b) * y + c
}

/// All `y ∈ [0, p^k)` with `A·y² + B·y + C ≡ 0 (mod p^k)`, ascending.
///
/// Roots are lifted one base-p digit at a time: the roots mod `p^(j+1)` are
/// exactly those among the `p` extensions of each root mod `p^j`. Unlike
/// Newton iteration this also handles `p = 2` and repeated roots.
pub fn lift_roots_mod_pk(
    a: &BigInt,
    b: &BigInt,
    c: &BigInt,
    p: u64,
    k: u32,
) -> Result<Vec<BigInt>> {
    arith::require_prime(p)?;
    if k == 0 {
        return Err(Error::InvalidArgument("precision k must be positive".into()));
    }
    let modulus = pow(p, k);
    if [a, b, c].iter().all(|v| modulo(v, &modulus).is_zero()) {
        return Err(Error::InvalidArgument(format!(
            "every coefficient vanishes mod {p}^{k}"
        )));
    }
    let bp = BigInt::from(p);
    let mut roots: Vec<BigInt> = Vec::new();
    let mut digit = BigInt::zero();
    while digit < bp {
        if modulo(&eval_quadratic(a, b, c, &digit), &bp).is_zero() {
            roots.push(digit.clone());
        }
        digit += 1;
    }
    let mut step = bp.clone();
    for _ in 1..k {
        let next_mod = &step * &bp;
        let mut next = Vec::new();
        for r in &roots {
            let mut i = BigInt::zero();
            while i < bp {
                let y = r + &i * &step;
                if modulo(&eval_quadratic(a, b, c, &y), &next_mod).is_zero() {
                    next.push(y);
                }
                i += 1;
            }
        }
        roots = next;
        step = next_mod;
        if roots.is_empty() {
            break;
        }
    }
    roots.sort();
    Ok(roots)
}

/// `p`-adic valuation that maps 0 to `None` instead of failing.
fn split_off(v: &BigInt, p: u64) -> Result<(Option<u32>, BigInt)> {
    if v.is_zero() {
        Ok((None, BigInt::zero()))
    } else {
        let val = valuation(v, p)?;
        Ok((Some(val.t), val.u))
    }
}

/// Builds the certificate for a chosen representative `a` of a root mod `p^k`.
pub fn certify_root(beta: &BigInt, alpha: &BigInt, p: u64, k: u32, a: BigInt) -> Result<RootCertificate> {
    let g = &a * &a - beta * &a + alpha;
    if !modulo(&g, &pow(p, k)).is_zero() {
        return Err(Error::InvalidArgument(format!(
            "{a} is not a root of y^2 - ({beta})y + ({alpha}) mod {p}^{k}"
        )));
    }
    let (mu, r) = split_off(&g, p)?;
    let (ell, t_unit) = split_off(&(beta - &a * 2), p)?;
    Ok(RootCertificate {
        a,
        k,
        mu,
        r,
        ell,
        t_unit,
    })
}

/// Root certificate for `g(y) = y² − βy + α` modulo `p^k`.
///
/// Picks the smallest residue in `[0, p^k)` whose value `g(a)` is nonzero;
/// when every lifted residue is an exact integer root, the smallest one is
/// returned with `mu = None`. `None` when `g` has no root mod `p^k`.
pub fn root_certificate(
    beta: &BigInt,
    alpha: &BigInt,
    p: u64,
    k: u32,
) -> Result<Option<RootCertificate>> {
    let roots = lift_roots_mod_pk(&BigInt::one(), &-beta, alpha, p, k)?;
    let Some(first) = roots.first().cloned() else {
        return Ok(None);
    };
    let chosen = roots
        .iter()
        .find(|a| !(*a * *a - beta * *a + alpha).is_zero())
        .cloned()
        .unwrap_or(first);
    certify_root(beta, alpha, p, k, chosen).map(Some)
}

/// Smallest `a + p^k·j` (`j ≥ 0`) at which `g(y) = y² − βy + α` is nonzero.
/// Exists because `g` has at most two integer roots.
pub fn nonvanishing_lift(beta: &BigInt, alpha: &BigInt, p: u64, k: u32, a: &BigInt) -> BigInt {
    let step = pow(p, k);
    let mut y = a.clone();
    while (&y * &y - beta * &y + alpha).is_zero() {
        y += &step;
    }
    y
}

/// Integer roots of `A·y² + B·y + C` (`A ≠ 0`), ascending.
pub fn integer_roots(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<BigInt> {
    let disc: BigInt = b * b - a * c * 4;
    let Some(s) = arith::exact_sqrt(&disc) else {
        return Vec::new();
    };
    let den: BigInt = a * 2;
    let mut out: Vec<BigInt> = [-b + &s, -b - &s]
        .into_iter()
        .filter(|num| (num % &den).is_zero())
        .map(|num| num / &den)
        .collect();
    out.sort();
    out.dedup();
    out
}

impl SquareClass {
    pub fn describe(&self, p: u64) -> String {
        let yes = if self.is_square { "yes" } else { "no" };
        if self.is_zero {
            return format!("square in Z_{p}: {yes} (zero)");
        }
        let modulus = if p == 2 { 8 } else { p };
        format!(
            "square in Z_{p}: {yes} (val {}, unit ≡ {} mod {modulus})",
            self.valuation.unwrap_or(0),
            self.unit_residue.as_ref().map(|r| r.to_string()).unwrap_or_default()
        )
    }
}

impl RootCertificate {
    pub fn is_exact_root(&self) -> bool {
        self.mu.is_none()
    }

    /// Recomputes both decompositions from scratch.
    pub fn check(&self, beta: &BigInt, alpha: &BigInt, p: u64) -> bool {
        let g = &self.a * &self.a - beta * &self.a + alpha;
        if !modulo(&g, &pow(p, self.k)).is_zero() {
            return false;
        }
        let bp = BigInt::from(p);
        let g_ok = match self.mu {
            None => g.is_zero() && self.r.is_zero(),
            Some(mu) => {
                mu >= self.k && pow(p, mu) * &self.r == g && !modulo(&self.r, &bp).is_zero()
            }
        };
        let d: BigInt = beta - &self.a * 2;
        let t_ok = match self.ell {
            None => d.is_zero() && self.t_unit.is_zero(),
            Some(ell) => pow(p, ell) * &self.t_unit == d && !modulo(&self.t_unit, &bp).is_zero(),
        };
        g_ok && t_ok
    }
}
