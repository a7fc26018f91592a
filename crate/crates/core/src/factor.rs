//! Constructive factorization engines.
//!
//! Every engine produces `f = a·b` coefficient by coefficient. The
//! factors' constant terms are fixed first, the first-order terms come from a
//! root of an auxiliary quadratic, and each later order is obtained by
//! solving one linear congruence of the shape
//!
//! ```text
//! target = modulus·s_next + c·x + v        (gcd(c, modulus) = 1)
//! ```
//!
//! for the canonical `x ∈ [0, modulus)`. In the double-root cases the
//! unknowns are rescaled by powers of `p` so that the step coefficient `c`
//! becomes a unit. Each emitted coefficient pair is checked against the target
//! on the spot by [`FactorState::push`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, exact_div, modulo, pow};
use crate::classify::QuadInput;
use crate::error::{Error, Result};
use crate::padics;
use crate::series::TruncSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    TwoMLtN,
    MGtNu,
    MEqNu,
    BetaZero,
    P2MGtNu1,
    P2MEqNu1,
    CoprimeConstant,
    Tail,
    SimpleRootTail,
    ContentP,
    XFactor,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::TwoMLtN => "2m-lt-n",
            Engine::MGtNu => "m-gt-nu",
            Engine::MEqNu => "m-eq-nu",
            Engine::BetaZero => "beta-zero",
            Engine::P2MGtNu1 => "p2-m-gt-nu1",
            Engine::P2MEqNu1 => "p2-m-eq-nu1",
            Engine::CoprimeConstant => "coprime-constant",
            Engine::Tail => "tail",
            Engine::SimpleRootTail => "simple-root-tail",
            Engine::ContentP => "content-p",
            Engine::XFactor => "x-factor",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorPair {
    pub a: TruncSeries,
    pub b: TruncSeries,
    pub order: usize,
    pub engine: Engine,
    /// The pair came from an exact integer root of the auxiliary quadratic.
    pub shortcut: bool,
}

/// Running state of one engine invocation.
#[derive(Debug)]
pub struct FactorState {
    target: TruncSeries,
    a: Vec<BigInt>,
    b: Vec<BigInt>,
    engine: Engine,
}

impl FactorState {
    pub fn new(target: TruncSeries, engine: Engine) -> Self {
        Self {
            target,
            a: Vec::new(),
            b: Vec::new(),
            engine,
        }
    }

    pub fn step(&self) -> usize {
        self.a.len()
    }

    /// Appends `(a_k, b_k)` and checks `Σ_{j≤k} a_j b_{k−j} = f_k`.
    pub fn push(&mut self, ak: BigInt, bk: BigInt) -> Result<()> {
        self.a.push(ak);
        self.b.push(bk);
        let k = self.a.len() - 1;
        let Some(fk) = self.target.get(k) else {
            return Ok(());
        };
        let product = (0..=k).fold(BigInt::zero(), |acc, j| acc + &self.a[j] * &self.b[k - j]);
        if &product != fk {
            return Err(Error::Internal(format!(
                "{} engine: coefficient {k} is {product}, expected {fk}",
                self.engine.name()
            )));
        }
        Ok(())
    }

    fn finish(self, order: usize, shortcut: bool) -> Result<FactorPair> {
        let a = TruncSeries::new(self.a)?.truncate(order)?;
        let b = TruncSeries::new(self.b)?.truncate(order)?;
        Ok(FactorPair {
            a,
            b,
            order,
            engine: self.engine,
            shortcut,
        })
    }
}

/// Solves `target = modulus·s_next + c·x + v` for `x ∈ [0, modulus)`.
pub fn solve_unit_step(
    modulus: &BigInt,
    c: &BigInt,
    v: &BigInt,
    target: &BigInt,
) -> Result<(BigInt, BigInt)> {
    let inv = arith::mod_inverse(c, modulus).ok_or_else(|| {
        Error::Internal(format!("step coefficient {c} is not a unit mod {modulus}"))
    })?;
    let rhs = target - v;
    let x = modulo(&(&rhs * inv), modulus);
    let s_next = exact_div(&(rhs - c * &x), modulus, "unit step")?;
    Ok((x, s_next))
}

fn target_at(target: &TruncSeries, k: usize) -> BigInt {
    target.get(k).cloned().unwrap_or_default()
}

fn require_terms(n_terms: usize) -> Result<()> {
    if n_terms < 2 {
        Err(Error::InvalidArgument(
            "factorization order must be at least 2".into(),
        ))
    } else {
        Ok(())
    }
}

fn mismatch(msg: impl Into<String>) -> Error {
    Error::EngineMismatch(msg.into())
}

fn sum_range<F: Fn(usize) -> BigInt>(lo: usize, hi_inclusive: usize, f: F) -> BigInt {
    if lo > hi_inclusive {
        return BigInt::zero();
    }
    (lo..=hi_inclusive).fold(BigInt::zero(), |acc, k| acc + f(k))
}

/// Recurrence with a unit step coefficient.
///
/// `a₀ = p^e`, `b₀ = p^(n−e)`, `d = p^(n−2e)` and `t_k = b_k + d·a_k`. With
/// `t₁ = f₁/p^e` and `a₁` a root of `d y² − t₁ y + f₂ (mod p^e)`, order `N+1`
/// reads
///
/// ```text
/// f_{N+1} = p^e t_{N+1} + (t₁ − 2d a₁) a_N + v_N,
/// v_N = a₁ t_N + Σ_{k=2}^{N−1} a_k (t_{N+1−k} − d a_{N+1−k}).
/// ```
#[allow(clippy::too_many_arguments)]
fn unit_recurrence(
    engine: Engine,
    target: TruncSeries,
    p: u64,
    e: u32,
    n: u32,
    a1: BigInt,
    n_terms: usize,
) -> Result<FactorPair> {
    let modulus = pow(p, e);
    let d = pow(p, n - 2 * e);
    let t1 = exact_div(target.coeffs().get(1).unwrap_or(&BigInt::zero()), &modulus, "t₁")?;
    let f2 = target_at(&target, 2);
    let t2 = exact_div(&(&f2 - &a1 * &t1 + &d * &a1 * &a1), &modulus, "t₂ (a₁ is not a root)")?;
    let c = &t1 - &d * &a1 * 2;

    let mut state = FactorState::new(target, engine);
    state.push(modulus.clone(), pow(p, n - e))?;
    state.push(a1.clone(), &t1 - &d * &a1)?;

    let mut a: Vec<BigInt> = vec![modulus.clone(), a1.clone()];
    let mut t: Vec<BigInt> = vec![BigInt::zero(), t1, t2];
    for big_n in 2..=n_terms {
        let v = &a1 * &t[big_n]
            + sum_range(2, big_n - 1, |k| {
                &a[k] * (&t[big_n + 1 - k] - &d * &a[big_n + 1 - k])
            });
        let goal = target_at(&state.target, big_n + 1);
        let (an, t_next) = solve_unit_step(&modulus, &c, &v, &goal)?;
        let bn = &t[big_n] - &d * &an;
        state.push(an.clone(), bn)?;
        a.push(an);
        t.push(t_next);
    }
    state.finish(n_terms, false)
}

fn smallest_root(a: &BigInt, b: &BigInt, c: &BigInt, p: u64, k: u32) -> Result<Option<BigInt>> {
    Ok(padics::lift_roots_mod_pk(a, b, c, p, k)?.into_iter().next())
}

/// Emits `(p^e + a₁x)(p^(n−e) + b₁x)` for an exact integer root.
fn polynomial_pair(
    engine: Engine,
    target: TruncSeries,
    p: u64,
    e: u32,
    n: u32,
    a1: BigInt,
    b1: BigInt,
    n_terms: usize,
) -> Result<FactorPair> {
    let mut state = FactorState::new(target, engine);
    state.push(pow(p, e), pow(p, n - e))?;
    state.push(a1, b1)?;
    for _ in 2..=n_terms {
        state.push(BigInt::zero(), BigInt::zero())?;
    }
    state.finish(n_terms, true)
}

fn beta_term(q: &QuadInput) -> Result<(u32, BigInt)> {
    match q.m {
        Some(m) => Ok((m, q.beta.clone())),
        None => Err(mismatch("engine needs a nonzero linear term")),
    }
}

/// `2m < n`, any prime.
pub fn factor_2m_lt_n(q: &QuadInput, n_terms: usize) -> Result<FactorPair> {
    require_terms(n_terms)?;
    let (m, beta) = beta_term(q)?;
    if 2 * m >= q.n {
        return Err(mismatch(format!("needs 2m < n, got m = {m}, n = {}", q.n)));
    }
    let d = pow(q.p, q.n - 2 * m);
    let a1 = smallest_root(&d, &-&beta, &q.alpha, q.p, m)?
        .ok_or_else(|| Error::Internal("auxiliary quadratic has no root mod p^m".into()))?;
    unit_recurrence(Engine::TwoMLtN, q.series(n_terms + 1)?, q.p, m, q.n, a1, n_terms)
}

fn even_half(q: &QuadInput) -> Result<u32> {
    if !q.n.is_multiple_of(2) {
        return Err(mismatch(format!("needs even n, got {}", q.n)));
    }
    Ok(q.n / 2)
}

/// Odd `p`, `n = 2ν`, `m > ν`.
pub fn factor_m_gt_nu(q: &QuadInput, n_terms: usize) -> Result<FactorPair> {
    require_terms(n_terms)?;
    let (m, beta) = beta_term(q)?;
    let nu = even_half(q)?;
    if q.p == 2 || m <= nu {
        return Err(mismatch("needs odd p and m > n/2"));
    }
    let s1 = pow(q.p, m - nu) * &beta;
    let a1 = smallest_root(&BigInt::one(), &-s1, &q.alpha, q.p, nu)?
        .ok_or_else(|| mismatch("y² − p^(m−ν)βy + α has no root mod p^ν"))?;
    unit_recurrence(Engine::MGtNu, q.series(n_terms + 1)?, q.p, nu, q.n, a1, n_terms)
}

/// `β = 0`, `n = 2ν`.
pub fn factor_beta_zero(q: &QuadInput, n_terms: usize) -> Result<FactorPair> {
    require_terms(n_terms)?;
    if q.m.is_some() {
        return Err(mismatch("engine handles the β = 0 family only"));
    }
    let nu = even_half(q)?;
    if q.p == 2 {
        if modulo(&q.alpha, &BigInt::from(8)) != BigInt::from(7) {
            return Err(mismatch("p = 2 needs α ≡ 7 mod 8"));
        }
        return p2_scaled(Engine::BetaZero, q, nu, None, n_terms);
    }
    let a1 = smallest_root(&BigInt::one(), &BigInt::zero(), &q.alpha, q.p, nu)?
        .ok_or_else(|| mismatch("−α is not a square mod p"))?;
    unit_recurrence(Engine::BetaZero, q.series(n_terms + 1)?, q.p, nu, q.n, a1, n_terms)
}

/// Odd `p`, `n = 2m` (so `m = ν`).
pub fn factor_m_eq_nu(q: &QuadInput, n_terms: usize) -> Result<FactorPair> {
    require_terms(n_terms)?;
    let (m, beta) = beta_term(q)?;
    let nu = even_half(q)?;
    if q.p == 2 || m != nu {
        return Err(mismatch("needs odd p and n = 2m"));
    }
    let p = q.p;
    let alpha = &q.alpha;
    let target = q.series(n_terms + 1)?;

    if let Some(a1) = padics::integer_roots(&BigInt::one(), &-&beta, alpha).pop() {
        let b1 = &beta - &a1;
        return polynomial_pair(Engine::MEqNu, target, p, nu, q.n, a1, b1, n_terms);
    }

    let disc = &beta * &beta - alpha * 4;
    let val = padics::valuation(&disc, p)?;
    if val.t % 2 != 0 || !padics::is_qr_mod_p(&val.u, p)? {
        return Err(mismatch("β² − 4α is not a square in Z_p"));
    }
    let ell = val.t / 2;
    let k = 3 * ell.max(nu);
    let cert = padics::root_certificate(&beta, alpha, p, k)?
        .ok_or_else(|| Error::Internal(format!("no root of y² − βy + α mod {p}^{k}")))?;
    if cert.mu.is_none() || cert.ell != Some(ell) {
        return Err(Error::Internal(format!(
            "root certificate inconsistent with disc valuation: {cert:?}"
        )));
    }
    let t = cert.t_unit.clone();
    if nu > ell {
        m_eq_nu_shallow(target, p, nu, ell, &beta, cert.a, t, n_terms)
    } else {
        double_root_scaled(Engine::MEqNu, target, p, nu, ell, cert.a, t, n_terms)
    }
}

/// `ν > ℓ`: `a_k = p^(ν−ℓ) ã_k` and `s_{k+1} = u_k − t ã_k` for `k ≥ 2`,
/// with `a₂ = 0`. Order `N+2` then reads
///
/// ```text
/// 0 = p^ν u_{N+1} + [p^(ν−ℓ) s₂ − t a₁] ã_N + a₁ u_N + Σ_{k=3}^{N−1} a_k b_{N+2−k}
/// ```
///
/// and the bracket is a unit mod `p` because `p ∤ t·a₁`.
#[allow(clippy::too_many_arguments)]
fn m_eq_nu_shallow(
    target: TruncSeries,
    p: u64,
    nu: u32,
    ell: u32,
    beta: &BigInt,
    a1: BigInt,
    t: BigInt,
    n_terms: usize,
) -> Result<FactorPair> {
    let pnu = pow(p, nu);
    let scale = pow(p, nu - ell);
    let f2 = target_at(&target, 2);
    let b1 = beta - &a1;
    let s2 = exact_div(&(&f2 - &a1 * &b1), &pnu, "s₂")?;

    let mut state = FactorState::new(target, Engine::MEqNu);
    state.push(pnu.clone(), pnu.clone())?;
    state.push(a1.clone(), b1)?;
    state.push(BigInt::zero(), s2.clone())?;

    // u[k] and ã[k]; index 0 unused, ã₁ = ã₂ = 0.
    let mut u: Vec<BigInt> = vec![BigInt::zero(), s2.clone()];
    u.push(exact_div(&(-&a1 * &s2), &pnu, "u₂")?);
    u.push(exact_div(&(-&a1 * &u[2]), &pnu, "u₃")?);
    let mut at: Vec<BigInt> = vec![BigInt::zero(); 3];
    let mut a: Vec<BigInt> = vec![pnu.clone(), a1.clone(), BigInt::zero()];
    let mut b: Vec<BigInt> = vec![pnu.clone(), beta - &a1, s2.clone()];

    let bracket = &scale * &s2 - &t * &a1;
    for big_n in 3..=n_terms {
        let v = &a1 * &u[big_n] + sum_range(3, big_n - 1, |k| &a[k] * &b[big_n + 2 - k]);
        let (an_t, u_next) = solve_unit_step(&pnu, &bracket, &v, &BigInt::zero())?;
        let an = &scale * &an_t;
        let sn = &u[big_n - 1] - &t * &at[big_n - 1];
        let bn = sn - &an;
        state.push(an.clone(), bn.clone())?;
        at.push(an_t);
        u.push(u_next);
        a.push(an);
        b.push(bn);
    }
    state.finish(n_terms, false)
}

/// Double-root recurrence with `a_k = p^ℓ ã_k`, `s_k = p^(3ℓ−ν) s̃_k` for
/// `k ≥ 2` (requires `ℓ ≥ ν`). Dividing order `N+1` by `p^(2ℓ)` gives
///
/// ```text
/// f_{N+1}/p^(2ℓ) = p^ℓ s̃_{N+1} + t ã_N + a₁ p^(ℓ−ν) s̃_N
///                  + Σ_{k=2}^{N−1} ã_k (p^(2ℓ−ν) s̃_{N+1−k} − ã_{N+1−k}).
/// ```
#[allow(clippy::too_many_arguments)]
fn double_root_scaled(
    engine: Engine,
    target: TruncSeries,
    p: u64,
    nu: u32,
    ell: u32,
    a1: BigInt,
    t: BigInt,
    n_terms: usize,
) -> Result<FactorPair> {
    let pnu = pow(p, nu);
    let pl = pow(p, ell);
    let p2l = pow(p, 2 * ell);
    let s_scale = pow(p, 3 * ell - nu);
    let cross = pow(p, ell - nu);
    let inner = pow(p, 2 * ell - nu);

    let s1 = exact_div(&target_at(&target, 1), &pnu, "s₁")?;
    let b1 = &s1 - &a1;
    let s2 = exact_div(&(target_at(&target, 2) - &a1 * &b1), &pnu, "s₂")?;
    let st2 = exact_div(&s2, &s_scale, "s̃₂")?;

    let mut state = FactorState::new(target, engine);
    state.push(pnu.clone(), pnu.clone())?;
    state.push(a1.clone(), b1)?;

    let mut at: Vec<BigInt> = vec![BigInt::zero(), BigInt::zero()];
    let mut st: Vec<BigInt> = vec![BigInt::zero(), BigInt::zero(), st2];
    for big_n in 2..=n_terms {
        let v = &a1 * &cross * &st[big_n]
            + sum_range(2, big_n - 1, |k| {
                &at[k] * (&inner * &st[big_n + 1 - k] - &at[big_n + 1 - k])
            });
        let goal = target_at(&state.target, big_n + 1);
        let (goal_scaled, rem) = goal.div_rem(&p2l);
        if !rem.is_zero() {
            return Err(mismatch(format!(
                "coefficient {} = {goal} is not divisible by {p2l}",
                big_n + 1
            )));
        }
        let (an_t, s_next) = solve_unit_step(&pl, &t, &v, &goal_scaled)?;
        let an = &pl * &an_t;
        let bn = &s_scale * &st[big_n] - &an;
        state.push(an, bn)?;
        at.push(an_t);
        st.push(s_next);
    }
    state.finish(n_terms, false)
}

/// `p = 2` recurrence with `a_k = 2^ν ã_k`, `s_k = 2^(ν+1) t_k` (`k ≥ 2`):
///
/// ```text
/// 0 = 2^ν t_{N+1} + (s₁/2 − a₁) ã_N + a₁ t_N
///     + 2^(ν−1) Σ_{k=2}^{N−1} ã_k (2 t_{N+1−k} − ã_{N+1−k}).
/// ```
///
/// `linear = None` is the `β = 0` family.
fn p2_scaled(
    engine: Engine,
    q: &QuadInput,
    nu: u32,
    linear: Option<(u32, &BigInt)>,
    n_terms: usize,
) -> Result<FactorPair> {
    let alpha = &q.alpha;
    let s1 = match linear {
        Some((m, beta)) => pow(2, m - nu) * beta,
        None => BigInt::zero(),
    };
    let a1 = smallest_root(&BigInt::one(), &-&s1, alpha, 2, 2 * nu + 1)?
        .ok_or_else(|| mismatch("y² − s₁y + α has no root mod 2^(2ν+1)"))?;
    let t2 = exact_div(&(&a1 * &a1 - &s1 * &a1 + alpha), &pow(2, 2 * nu + 1), "t₂")?;
    let half_s1 = exact_div(&s1, &BigInt::from(2), "s₁/2")?;
    let bracket = &half_s1 - &a1;
    let pnu = pow(2, nu);
    let s_scale = pow(2, nu + 1);
    let half = pow(2, nu - 1);

    let mut state = FactorState::new(q.series(n_terms + 1)?, engine);
    state.push(pnu.clone(), pnu.clone())?;
    state.push(a1.clone(), &s1 - &a1)?;

    let mut at: Vec<BigInt> = vec![BigInt::zero(), BigInt::zero()];
    let mut t: Vec<BigInt> = vec![BigInt::zero(), BigInt::zero(), t2];
    for big_n in 2..=n_terms {
        let w = &a1 * &t[big_n]
            + &half
                * sum_range(2, big_n - 1, |k| {
                    &at[k] * (&t[big_n + 1 - k] * 2 - &at[big_n + 1 - k])
                });
        let (an_t, t_next) = solve_unit_step(&pnu, &bracket, &w, &BigInt::zero())?;
        let an = &pnu * &an_t;
        let bn = &s_scale * &t[big_n] - &an;
        state.push(an, bn)?;
        at.push(an_t);
        t.push(t_next);
    }
    state.finish(n_terms, false)
}

/// `p = 2`, `n = 2ν`, `m > ν + 1`.
pub fn factor_p2_m_gt_nu1(q: &QuadInput, n_terms: usize) -> Result<FactorPair> {
    require_terms(n_terms)?;
    let (m, beta) = beta_term(q)?;
    let nu = even_half(q)?;
    if q.p != 2 || m <= nu + 1 {
        return Err(mismatch("needs p = 2 and m > n/2 + 1"));
    }
    let a8 = modulo(&q.alpha, &BigInt::from(8));
    let ok = if m - nu > 2 { a8 == BigInt::from(7) } else { a8 == BigInt::from(3) };
    if !ok {
        return Err(mismatch(format!("α ≡ {a8} mod 8 does not give a square discriminant")));
    }
    p2_scaled(Engine::P2MGtNu1, q, nu, Some((m, &beta)), n_terms)
}

/// `p = 2`, `n = 2ν`, `m = ν + 1`.
///
/// With `β² − α = 2^(2ℓ) q`, `q ≡ 1 (mod 8)`, a root `ã₁` of
/// `y² − 2βy + α` mod `2^(2ℓ+ν+2)` and `β − ã₁ = 2^ℓ u`, set
/// `a_k = 2^(ℓ+1) ã_k`, `s_k = 2^(2ℓ+2) t_k` and step with
///
/// ```text
/// 0 = 2^ν t_{N+1} + u ã_N + a₁ t_N + Σ_{k=2}^{N−1} ã_k (2^(ℓ+1) t_{N+1−k} − ã_{N+1−k}).
/// ```
pub fn factor_p2_m_eq_nu1(q: &QuadInput, n_terms: usize) -> Result<FactorPair> {
    require_terms(n_terms)?;
    let (m, beta) = beta_term(q)?;
    let nu = even_half(q)?;
    if q.p != 2 || m != nu + 1 {
        return Err(mismatch("needs p = 2 and m = n/2 + 1"));
    }
    let alpha = &q.alpha;
    let target = q.series(n_terms + 1)?;
    let s1 = &beta * 2;

    if let Some(a1) = padics::integer_roots(&BigInt::one(), &-&s1, alpha).pop() {
        let b1 = &s1 - &a1;
        return polynomial_pair(Engine::P2MEqNu1, target, 2, nu, q.n, a1, b1, n_terms);
    }

    let d = &beta * &beta - alpha;
    let val = padics::valuation(&d, 2)?;
    if val.t % 2 != 0 || modulo(&val.u, &BigInt::from(8)) != BigInt::one() {
        return Err(mismatch("β² − α is not 2^(2ℓ)·q with q ≡ 1 mod 8"));
    }
    let ell = val.t / 2;
    let k = 2 * ell + nu + 2;
    let a1 = smallest_root(&BigInt::one(), &-&s1, alpha, 2, k)?
        .ok_or_else(|| Error::Internal(format!("no root of y² − 2βy + α mod 2^{k}")))?;
    let t2 = exact_div(&(&a1 * &a1 - &s1 * &a1 + alpha), &pow(2, k), "t₂")?;
    let u = exact_div(&(&beta - &a1), &pow(2, ell), "u")?;
    if u.is_even() {
        return Err(Error::Internal(format!("β − ã₁ = 2^{ell}·{u} with u even")));
    }

    let pnu = pow(2, nu);
    let a_scale = pow(2, ell + 1);
    let s_scale = pow(2, 2 * ell + 2);

    let mut state = FactorState::new(target, Engine::P2MEqNu1);
    state.push(pnu.clone(), pnu.clone())?;
    state.push(a1.clone(), &s1 - &a1)?;

    let mut at: Vec<BigInt> = vec![BigInt::zero(), BigInt::zero()];
    let mut t: Vec<BigInt> = vec![BigInt::zero(), BigInt::zero(), t2];
    for big_n in 2..=n_terms {
        let w = &a1 * &t[big_n]
            + sum_range(2, big_n - 1, |k| {
                &at[k] * (&a_scale * &t[big_n + 1 - k] - &at[big_n + 1 - k])
            });
        let (an_t, t_next) = solve_unit_step(&pnu, &u, &w, &BigInt::zero())?;
        let an = &a_scale * &an_t;
        let bn = &s_scale * &t[big_n] - &an;
        state.push(an, bn)?;
        at.push(an_t);
        t.push(t_next);
    }
    state.finish(n_terms, false)
}

/// Splits `f` with `f₀ = u·v`, `gcd(u, v) = 1`, `|u|, |v| ≥ 2`.
pub fn factor_coprime_constant(
    f: &TruncSeries,
    u: &BigInt,
    v: &BigInt,
    n_terms: usize,
) -> Result<FactorPair> {
    f.require_order(n_terms)?;
    if u.abs() < BigInt::from(2) || v.abs() < BigInt::from(2) {
        return Err(mismatch("both constant factors must be non-units"));
    }
    if !u.gcd(v).is_one() {
        return Err(Error::InvalidArgument(format!("gcd({u}, {v}) ≠ 1")));
    }
    if &(u * v) != f.constant_term() {
        return Err(mismatch(format!("{u}·{v} ≠ f₀ = {}", f.constant_term())));
    }
    let modulus = u.abs();
    let v_inv = arith::mod_inverse(v, &modulus)
        .ok_or_else(|| Error::Internal("v not invertible mod u".into()))?;
    let mut state = FactorState::new(f.clone(), Engine::CoprimeConstant);
    state.push(u.clone(), v.clone())?;
    for k in 1..=n_terms {
        let r = &f.coeffs()[k] - sum_range(1, k - 1, |j| &state.a[j] * &state.b[k - j]);
        let ak = modulo(&(&r * &v_inv), &modulus);
        let bk = exact_div(&(&r - v * &ak), u, "coprime split")?;
        state.push(ak, bk)?;
    }
    state.finish(n_terms, false)
}

/// `f = p² + pβx + αx² + Σ c_k x^k` with `β² − 4α = p² q` (`q` a unit square
/// mod `p`) and `p² | c_k` for every `k ≥ 3`.
pub fn factor_tail(q: &QuadInput, n_terms: usize) -> Result<FactorPair> {
    require_terms(n_terms)?;
    let (m, beta) = beta_term(q)?;
    let p = q.p;
    if p == 2 || q.n != 2 || m != 1 {
        return Err(mismatch("needs odd p and head p² + pβx + αx²"));
    }
    let alpha = &q.alpha;
    let p2 = pow(p, 2);
    let disc: BigInt = &beta * &beta - alpha * 4;
    let (qq, rem) = disc.div_rem(&p2);
    if !rem.is_zero() || arith::divides(p, &qq) {
        return Err(mismatch(format!("β² − 4α = {disc} is not p²·q with p ∤ q")));
    }
    if !padics::is_qr_mod_p(&qq, p)? {
        return Err(mismatch(format!("q = {qq} is not a quadratic residue mod {p}")));
    }
    if let Some((k, c)) = q
        .tail
        .iter()
        .enumerate()
        .find(|(_, c)| !(*c % &p2).is_zero())
    {
        return Err(mismatch(format!("c_{} = {c} is not divisible by p²", k + 3)));
    }
    let first = smallest_root(&BigInt::one(), &-&beta, alpha, p, 3)?
        .ok_or_else(|| Error::Internal("no root of y² − βy + α mod p³".into()))?;
    let a1 = padics::nonvanishing_lift(&beta, alpha, p, 3, &first);
    let t = exact_div(&(&beta - &a1 * 2), &BigInt::from(p), "t")?;
    if arith::divides(p, &t) {
        return Err(Error::Internal(format!("β − 2a = p·{t} with p | t")));
    }
    double_root_scaled(Engine::Tail, q.series(n_terms + 1)?, p, 1, 1, a1, t, n_terms)
}

/// `f = p^(2m) + p^m βx + αx² + tail` where `y² − βy + α` has a simple root
/// mod `p^m`.
pub fn factor_simple_root_tail(q: &QuadInput, n_terms: usize) -> Result<FactorPair> {
    require_terms(n_terms)?;
    let (m, beta) = beta_term(q)?;
    if q.n != 2 * m {
        return Err(mismatch("needs n = 2m"));
    }
    let p = q.p;
    let bp = BigInt::from(p);
    let roots = padics::lift_roots_mod_pk(&BigInt::one(), &-&beta, &q.alpha, p, m)?;
    let a1 = roots
        .into_iter()
        .find(|a| !modulo(&(a * 2 - &beta), &bp).is_zero())
        .ok_or_else(|| mismatch("y² − βy + α has no simple root mod p^m"))?;
    unit_recurrence(Engine::SimpleRootTail, q.series(n_terms + 1)?, p, m, q.n, a1, n_terms)
}

/// `f = p·(f/p)` when `p` divides every known coefficient.
pub fn factor_content(f: &TruncSeries, p: u64) -> Result<FactorPair> {
    let bp = BigInt::from(p);
    let order = f.order();
    let mut state = FactorState::new(f.clone(), Engine::ContentP);
    for (k, c) in f.coeffs().iter().enumerate() {
        let quotient = exact_div(c, &bp, "content")?;
        let ak = if k == 0 { bp.clone() } else { BigInt::zero() };
        // b is pushed against a's constant only: (p·b)_k = p·b_k.
        state.push(ak, quotient)?;
    }
    state.finish(order, false)
}

/// `f = x·(f/x)` for `f₀ = 0`.
pub fn factor_x(f: &TruncSeries) -> Result<FactorPair> {
    if !f.constant_term().is_zero() {
        return Err(mismatch("x divides f only when f₀ = 0"));
    }
    let order = f.order();
    let mut state = FactorState::new(f.clone(), Engine::XFactor);
    for k in 0..=order {
        let ak = if k == 1 { BigInt::one() } else { BigInt::zero() };
        let bk = f.get(k + 1).cloned().unwrap_or_default();
        state.push(ak, bk)?;
    }
    state.finish(order, false)
}

/// Picks the engine for a quadratic input that classifies reducible.
pub fn factor_quadratic(q: &QuadInput, n_terms: usize) -> Result<FactorPair> {
    let Some(m) = q.m else {
        return factor_beta_zero(q, n_terms);
    };
    if 2 * m < q.n {
        return factor_2m_lt_n(q, n_terms);
    }
    if !q.n.is_multiple_of(2) || (q.p == 2 && 2 * m == q.n) {
        return Err(mismatch("no factorization: this case is irreducible"));
    }
    let nu = q.n / 2;
    match (q.p == 2, m.cmp(&nu)) {
        (false, std::cmp::Ordering::Greater) => factor_m_gt_nu(q, n_terms),
        (false, _) => factor_m_eq_nu(q, n_terms),
        (true, _) if m == nu + 1 => factor_p2_m_eq_nu1(q, n_terms),
        (true, _) => factor_p2_m_gt_nu1(q, n_terms),
    }
}

impl FactorPair {
    /// Both constant terms are non-units of Z.
    pub fn is_proper(&self) -> bool {
        !self.a.constant_term().abs().is_one() && !self.b.constant_term().abs().is_one()
    }

    pub fn negate_first(mut self) -> Self {
        self.a = self.a.neg();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;
    use crate::series::mul_trunc;

    fn quad(p: u64, n: u32, m: u32, beta: i64, alpha: i64) -> QuadInput {
        QuadInput::new(p, n, Some(m), big(beta), big(alpha))
    }

    fn assert_factors(q: &QuadInput, pair: &FactorPair) {
        let f = q.series(pair.order).unwrap();
        assert_eq!(mul_trunc(&pair.a, &pair.b, pair.order).unwrap(), f);
        assert!(pair.is_proper());
    }

    fn same_pair(pair: &FactorPair, x: &[i64], y: &[i64]) -> bool {
        let a = pair.a.trimmed();
        let b = pair.b.trimmed();
        let x: Vec<BigInt> = x.iter().map(|&c| big(c)).collect();
        let y: Vec<BigInt> = y.iter().map(|&c| big(c)).collect();
        (a == x && b == y) || (a == y && b == x)
    }

    #[test]
    fn unit_step_examples() {
        assert_eq!(
            solve_unit_step(&big(5), &big(3), &big(0), &big(0)).unwrap(),
            (big(0), big(0))
        );
        assert_eq!(
            solve_unit_step(&big(5), &big(-4), &big(2), &big(0)).unwrap(),
            (big(3), big(2))
        );
        assert_eq!(
            solve_unit_step(&big(3), &big(1), &big(3), &big(0)).unwrap(),
            (big(0), big(-1))
        );
        assert!(solve_unit_step(&big(9), &big(3), &big(1), &big(0)).is_err());
    }

    #[test]
    fn two_m_lt_n_seed() {
        let q = quad(5, 3, 1, 1, 1);
        let pair = factor_2m_lt_n(&q, 2).unwrap();
        assert_eq!(pair.a.coeffs()[..2], [big(5), big(1)]);
        assert_eq!(pair.b.coeffs()[..2], [big(25), big(-4)]);
        assert_factors(&q, &pair);
        for (q, n) in [(quad(2, 3, 1, 1, 1), 8), (quad(3, 5, 2, 2, 1), 16)] {
            assert_factors(&q, &factor_2m_lt_n(&q, n).unwrap());
        }
    }

    #[test]
    fn m_gt_nu_examples() {
        let q = quad(3, 2, 2, 1, 2);
        let pair = factor_m_gt_nu(&q, 6).unwrap();
        assert!(same_pair(&pair, &[3, 1], &[3, 2]));

        let q = quad(3, 2, 2, 1, 11);
        let pair = factor_m_gt_nu(&q, 3).unwrap();
        assert_eq!(pair.a.coeffs(), &[big(3), big(1), big(0), pair.a.coeffs()[3].clone()]);
        assert_eq!(pair.b.coeffs()[..3], [big(3), big(2), big(3)]);
        assert_factors(&q, &pair);
    }

    #[test]
    fn m_eq_nu_examples() {
        let q = quad(7, 2, 1, 3, 2);
        let pair = factor_m_eq_nu(&q, 8).unwrap();
        assert!(pair.shortcut);
        assert!(same_pair(&pair, &[7, 2], &[7, 1]));

        let q = quad(7, 2, 1, 3, 51);
        let pair = factor_m_eq_nu(&q, 32).unwrap();
        assert!(!pair.shortcut);
        assert_eq!(pair.a.coeffs()[1], big(50));
        assert_factors(&q, &pair);

        assert!(matches!(
            factor_m_eq_nu(&quad(5, 2, 1, 2, -1), 16),
            Err(Error::EngineMismatch(_))
        ));
    }

    #[test]
    fn beta_zero_examples() {
        let q = QuadInput::new(5, 2, None, big(0), big(-1));
        assert!(same_pair(&factor_beta_zero(&q, 4).unwrap(), &[5, -1], &[5, 1]));

        let q = QuadInput::new(5, 2, None, big(0), big(1));
        let pair = factor_beta_zero(&q, 3).unwrap();
        assert_eq!(pair.a.coeffs()[..3], [big(5), big(2), big(3)]);
        assert_eq!(pair.b.coeffs()[..3], [big(5), big(-2), big(-2)]);

        let q = QuadInput::new(2, 4, None, big(0), big(7));
        assert_factors(&q, &factor_beta_zero(&q, 16).unwrap());
    }

    #[test]
    fn p2_examples() {
        let q = quad(2, 2, 3, 1, 3);
        let pair = factor_p2_m_gt_nu1(&q, 8).unwrap();
        assert!(same_pair(&pair, &[2, 1], &[2, 3]));
        for q in [quad(2, 2, 4, 1, 7), quad(2, 4, 4, 3, 3)] {
            assert_factors(&q, &factor_p2_m_gt_nu1(&q, 16).unwrap());
        }

        let q = quad(2, 2, 2, 1, -3);
        let pair = factor_p2_m_eq_nu1(&q, 4).unwrap();
        assert!(same_pair(&pair, &[2, 3], &[2, -1]));
        assert!(factor_p2_m_eq_nu1(&quad(2, 2, 2, 3, 1), 16).is_err());
        let q = quad(2, 4, 3, 3, -7);
        assert_factors(&q, &factor_p2_m_eq_nu1(&q, 16).unwrap());
    }

    #[test]
    fn coprime_constant_examples() {
        let f = TruncSeries::from_i64(&[6, 2, 1]);
        let pair = factor_coprime_constant(&f, &big(2), &big(3), 2).unwrap();
        assert_eq!(pair.a, TruncSeries::from_i64(&[2, 0, 1]));
        assert_eq!(pair.b, TruncSeries::from_i64(&[3, 1, -1]));

        let f = TruncSeries::constant(big(15), 2);
        let pair = factor_coprime_constant(&f, &big(3), &big(5), 2).unwrap();
        assert_eq!(pair.a, TruncSeries::constant(big(3), 2));

        let f = TruncSeries::from_poly(&[big(10), big(1)], 4).unwrap();
        let pair = factor_coprime_constant(&f, &big(2), &big(5), 4).unwrap();
        assert_eq!(mul_trunc(&pair.a, &pair.b, 4).unwrap(), f);
        assert!(factor_coprime_constant(&f, &big(2), &big(4), 4).is_err());
    }

    #[test]
    fn tail_examples() {
        let mut q = quad(3, 2, 1, 1, -2);
        q.tail = vec![big(9)];
        let pair = factor_tail(&q, 2).unwrap();
        assert_eq!(pair.a.coeffs(), &[big(3), big(29), big(6)]);
        assert_eq!(pair.b.coeffs(), &[big(3), big(-28), big(264)]);
        assert_factors(&q, &factor_tail(&q, 32).unwrap());

        q.tail = vec![big(3)];
        assert!(matches!(factor_tail(&q, 8), Err(Error::EngineMismatch(_))));

        let mut q = quad(5, 2, 1, 1, -6);
        q.tail = vec![big(25)];
        assert_factors(&q, &factor_tail(&q, 8).unwrap());
    }

    #[test]
    fn simple_root_tail_examples() {
        let mut q = quad(7, 2, 1, 3, 2);
        q.tail = vec![big(7)];
        assert_factors(&q, &factor_simple_root_tail(&q, 8).unwrap());

        let q = quad(3, 2, 1, 1, -2);
        assert!(factor_simple_root_tail(&q, 8).is_err());
        let q = quad(5, 4, 2, 2, 1);
        assert!(factor_simple_root_tail(&q, 8).is_err());
    }

    #[test]
    fn content_and_x() {
        let f = TruncSeries::from_i64(&[9, 3, 6]);
        let pair = factor_content(&f, 3).unwrap();
        assert_eq!(pair.b, TruncSeries::from_i64(&[3, 1, 2]));
        let f = TruncSeries::from_i64(&[0, 2, 5]);
        let pair = factor_x(&f).unwrap();
        assert_eq!(pair.b, TruncSeries::from_i64(&[2, 5, 0]));
    }
}
