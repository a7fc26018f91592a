//! Reducibility verdicts for `p^n + p^m βx + αx² (+ tail)` and for general
//! truncated series.
//!
//! Tailed series are read as "known through order N". Rules whose proof only
//! looks at orders ≤ 2 are unconditional. Rules that need the whole tail carry
//! an `assumption` string naming what was assumed about the unseen
//! coefficients, and cases no rule covers come back as [`VerdictKind::Unknown`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, divides, modulo, pow};
use crate::error::{Error, Result};
use crate::factor::{self, FactorPair};
use crate::padics::{self, RootCertificate, SquareClass};
use crate::serial;
use crate::series::TruncSeries;

pub const DEFAULT_TERMS: usize = 64;
pub const MAX_TERMS: usize = 256;
const TRIAL_LIMIT: u64 = 1_000_000;

/// `p^n + p^m βx + αx² + Σ_{k≥3} c_k x^k`; `m = None` encodes `β = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadInput {
    pub p: u64,
    pub n: u32,
    pub m: Option<u32>,
    #[serde(with = "serial::bigint")]
    pub beta: BigInt,
    #[serde(with = "serial::bigint")]
    pub alpha: BigInt,
    #[serde(with = "serial::vec_bigint")]
    pub tail: Vec<BigInt>,
}

impl QuadInput {
    pub fn new(p: u64, n: u32, m: Option<u32>, beta: BigInt, alpha: BigInt) -> Self {
        let beta = if m.is_some() { beta } else { BigInt::zero() };
        Self {
            p,
            n,
            m,
            beta,
            alpha,
            tail: Vec::new(),
        }
    }

    pub fn beta_zero(p: u64, n: u32, alpha: BigInt) -> Self {
        Self::new(p, n, None, BigInt::zero(), alpha)
    }

    pub fn with_tail(mut self, tail: Vec<BigInt>) -> Self {
        self.tail = tail;
        self
    }

    pub fn validate(&self) -> Result<()> {
        arith::require_prime(self.p)?;
        if self.n == 0 {
            return Err(Error::OutsideHypotheses("n must be at least 1".into()));
        }
        if self.m == Some(0) {
            return Err(Error::OutsideHypotheses(
                "m = 0 is not covered; use classify_general".into(),
            ));
        }
        if divides(self.p, &self.alpha) {
            return Err(Error::OutsideHypotheses(format!(
                "gcd(p, α) ≠ 1 for p = {}, α = {}",
                self.p, self.alpha
            )));
        }
        if self.m.is_some() && divides(self.p, &self.beta) {
            return Err(Error::OutsideHypotheses(format!(
                "gcd(p, β) ≠ 1 for p = {}, β = {}",
                self.p, self.beta
            )));
        }
        Ok(())
    }

    pub fn linear_coefficient(&self) -> BigInt {
        match self.m {
            Some(m) => pow(self.p, m) * &self.beta,
            None => BigInt::zero(),
        }
    }

    /// `p^(2m) β² − 4α p^n`, the discriminant of the quadratic head.
    pub fn discriminant(&self) -> BigInt {
        let lin = self.linear_coefficient();
        &lin * &lin - &self.alpha * pow(self.p, self.n) * 4
    }

    /// The series through `order`; tail entries past `order` are dropped and
    /// missing ones are zero.
    pub fn series(&self, order: usize) -> Result<TruncSeries> {
        if order < 2 {
            return Err(Error::InvalidArgument("series order must be at least 2".into()));
        }
        let mut coeffs = vec![BigInt::zero(); order + 1];
        coeffs[0] = pow(self.p, self.n);
        coeffs[1] = self.linear_coefficient();
        coeffs[2] = self.alpha.clone();
        for (k, c) in self.tail.iter().enumerate().take(order - 2) {
            coeffs[k + 3] = c.clone();
        }
        TruncSeries::new(coeffs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Unit,
    Irreducible,
    Reducible,
    ZeroSeries,
    Unknown,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Unit => "unit",
            VerdictKind::Irreducible => "irreducible",
            VerdictKind::Reducible => "reducible",
            VerdictKind::ZeroSeries => "zero_series",
            VerdictKind::Unknown => "unknown",
        }
    }
}

macro_rules! rules {
    ($($variant:ident => $tag:literal, $cite:literal;)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum Rule { $($variant),* }

        impl Rule {
            pub const ALL: &'static [Rule] = &[$(Rule::$variant),*];

            pub fn tag(self) -> &'static str {
                match self { $(Rule::$variant => $tag),* }
            }

            pub fn citation(self) -> &'static str {
                match self { $(Rule::$variant => $cite),* }
            }
        }
    };
}

rules! {
    Unit => "S2.unit", "a series is invertible exactly when its constant term is ±1";
    PrimeConstant => "S2.prime-constant", "a series with prime constant term is irreducible";
    ZeroSeries => "S2.zero-series", "the zero series";
    XDivides => "S2.x-divides", "x divides the series and the cofactor is not a unit";
    XTimesUnit => "S2.x-times-unit", "x times a unit is an associate of the prime x";
    CompositeConstant => "S2.composite-constant", "a constant term that is not a prime power splits into coprime factors";
    UnfactoredConstant => "S2.unfactored-constant", "the constant term could not be factored";
    LinearCoprime => "S2.linear-coprime", "p^n + βx + ⋯ with p ∤ β is irreducible";
    ContentP => "S2.content-p", "p divides every coefficient, so the series is p times a non-unit";
    HeadOutside => "S2.head-outside-criteria", "prime-power constant term whose head is not p^n + p^m βx + αx² with p ∤ αβ";
    OddTwoMLtN => "S3.2m-lt-n", "odd p, 2m < n: reducible in Z_p[x] and in Z[[x]]";
    OddTwoMGtNOdd => "S3.2m-gt-n-odd", "odd p, 2m > n with n odd: irreducible in Z_p[x] and in Z[[x]]";
    OddMGtNu => "S3.m-gt-nu", "odd p, n = 2ν, m > ν: reducible iff the discriminant is a square in Z_p";
    OddMEqNu => "S3.m-eq-nu", "odd p, n = 2m: reducible iff β² − 4α is a square in Z_p";
    OddBetaZero => "S3.beta-zero", "odd p, β = 0: reducible iff n is even and −α is a square mod p";
    TwoTwoMLtN => "S4.2m-lt-n", "p = 2, 2m < n: reducible in Z_2[x] and in Z[[x]]";
    TwoTwoMGtNOdd => "S4.2m-gt-n-odd", "p = 2, 2m > n with n odd: irreducible in Z_2[x] and in Z[[x]]";
    TwoNEqTwoM => "S4.n-eq-2m", "p = 2, n = 2m: irreducible in Z_2[x] and in Z[[x]]";
    TwoMGtNu1 => "S4.m-gt-nu1", "p = 2, n = 2ν, m > ν + 1: reducible iff α satisfies the mod-8 condition";
    TwoMEqNu1 => "S4.m-eq-nu1", "p = 2, n = 2ν, m = ν + 1: reducible iff β² − α = 4^ℓ q with q ≡ 1 mod 8";
    TwoBetaZero => "S4.beta-zero", "p = 2, β = 0: reducible iff n is even and −α ≡ 1 mod 8";
    TailTwoMLtN => "S5.2m-lt-n", "tailed series with 2m < n are reducible";
    TailTwoMGtNOdd => "S5.2m-gt-n-odd", "tailed series with 2m > n and n odd are irreducible";
    TailTwoMGtNEven => "S5.2m-gt-n-even", "tailed series with 2m > n, n even: reducible iff −α is a square mod p";
    TailNoRoot => "S5.no-root", "tailed series with n = 2m and no root of y² − βy + α mod p^m are irreducible";
    TailSimpleRoot => "S5.simple-root", "tailed series with n = 2m and a simple root of y² − βy + α mod p^m are reducible";
    TailDoubleRootC3 => "S5.double-root-c3", "double-root head p² + pβx + αx² with p ∤ c₃ is irreducible";
    TailDoubleRootP2 => "S5.double-root-p2-tail", "double-root head p² + pβx + αx² with p² dividing every c_k is reducible";
    TailBetaZero => "S5.beta-zero", "tailed series with β = 0: reducible iff n is even and −α is a square mod p";
    TailUnresolved => "S5.unresolved", "no criterion decides this head and tail";
}

impl Rule {
    pub fn from_tag(tag: &str) -> Option<Rule> {
        Rule::ALL.iter().copied().find(|r| r.tag() == tag)
    }
}

impl Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    Square(SquareClass),
    Root(RootCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub rule: Rule,
    /// Reducibility of the quadratic head over Z_p, when there is one.
    pub zp_reducible: Option<bool>,
    #[serde(with = "serial::opt_bigint")]
    pub discriminant: Option<BigInt>,
    pub certificate: Option<Certificate>,
    pub factors: Option<FactorPair>,
    pub verified_order: Option<usize>,
    /// What the verdict takes for granted about coefficients past the known
    /// order, or the hypothesis left open for `Unknown`.
    pub assumption: Option<String>,
}

impl Verdict {
    pub fn new(kind: VerdictKind, rule: Rule) -> Self {
        Self {
            kind,
            rule,
            zp_reducible: None,
            discriminant: None,
            certificate: None,
            factors: None,
            verified_order: None,
            assumption: None,
        }
    }

    fn with_factors(mut self, pair: FactorPair) -> Self {
        self.verified_order = Some(pair.order);
        self.factors = Some(pair);
        self
    }

    fn with_assumption(mut self, text: impl Into<String>) -> Self {
        self.assumption = Some(text.into());
        self
    }

    fn with_square(mut self, disc: BigInt, class: SquareClass) -> Self {
        self.zp_reducible = Some(class.is_square);
        self.discriminant = Some(disc);
        self.certificate = Some(Certificate::Square(class));
        self
    }

    fn reducible(rule: Rule, pair: FactorPair) -> Self {
        Verdict::new(VerdictKind::Reducible, rule).with_factors(pair)
    }

    fn unknown(rule: Rule, why: impl Into<String>) -> Self {
        Verdict::new(VerdictKind::Unknown, rule).with_assumption(why)
    }

    pub fn is_decided(&self) -> bool {
        self.kind != VerdictKind::Unknown
    }
}

fn check_terms(n_terms: usize) -> Result<()> {
    if !(2..=MAX_TERMS).contains(&n_terms) {
        return Err(Error::InvalidArgument(format!(
            "order must lie in [2, {MAX_TERMS}], got {n_terms}"
        )));
    }
    Ok(())
}

fn minus_alpha_is_square(alpha: &BigInt, p: u64) -> Result<bool> {
    let neg = -alpha;
    if p == 2 {
        Ok(modulo(&neg, &BigInt::from(8)).is_one())
    } else {
        padics::is_qr_mod_p(&neg, p)
    }
}

pub fn classify_quadratic(q: &QuadInput) -> Result<Verdict> {
    classify_quadratic_at(q, DEFAULT_TERMS)
}

/// Decides a tail-free quadratic and attaches factors through `n_terms`.
pub fn classify_quadratic_at(q: &QuadInput, n_terms: usize) -> Result<Verdict> {
    q.validate()?;
    check_terms(n_terms)?;
    if !q.tail.is_empty() {
        return Err(Error::OutsideHypotheses(
            "classify_quadratic takes no tail; use classify_general".into(),
        ));
    }
    let disc = q.discriminant();
    let class = padics::is_square_zp(&disc, q.p)?;
    let (reducible, rule) = quadratic_rule(q, &class)?;
    let kind = if reducible {
        VerdictKind::Reducible
    } else {
        VerdictKind::Irreducible
    };
    let mut verdict = Verdict::new(kind, rule).with_square(disc, class);
    if reducible {
        verdict = verdict.with_factors(factor::factor_quadratic(q, n_terms)?);
    }
    Ok(verdict)
}

fn quadratic_rule(q: &QuadInput, class: &SquareClass) -> Result<(bool, Rule)> {
    let odd = q.p != 2;
    let pick = |odd_rule, two_rule| if odd { odd_rule } else { two_rule };
    let Some(m) = q.m else {
        let rule = pick(Rule::OddBetaZero, Rule::TwoBetaZero);
        let red = q.n.is_multiple_of(2) && minus_alpha_is_square(&q.alpha, q.p)?;
        return Ok((red, rule));
    };
    let n = q.n;
    if 2 * m < n {
        return Ok((true, pick(Rule::OddTwoMLtN, Rule::TwoTwoMLtN)));
    }
    if n % 2 == 1 {
        return Ok((false, pick(Rule::OddTwoMGtNOdd, Rule::TwoTwoMGtNOdd)));
    }
    let nu = n / 2;
    let rule = match (odd, m) {
        (true, m) if m > nu => Rule::OddMGtNu,
        (true, _) => Rule::OddMEqNu,
        (false, m) if m == nu => return Ok((false, Rule::TwoNEqTwoM)),
        (false, m) if m == nu + 1 => Rule::TwoMEqNu1,
        (false, _) => Rule::TwoMGtNu1,
    };
    Ok((class.is_square, rule))
}

enum ConstantShape {
    Zero,
    Unit,
    Prime(u64),
    PrimePower(u64, u32),
    Composite(BigInt, BigInt),
    Unfactored,
}

fn constant_shape(f0: &BigInt, p_hint: Option<u64>) -> ConstantShape {
    if f0.is_zero() {
        return ConstantShape::Zero;
    }
    let abs = f0.abs();
    if abs.is_one() {
        return ConstantShape::Unit;
    }
    if let Some(p) = p_hint.filter(|&p| arith::is_prime(p)) {
        let (mut rest, mut n) = (abs.clone(), 0u32);
        let bp = BigInt::from(p);
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            n += 1;
        }
        if rest.is_one() {
            return if n == 1 {
                ConstantShape::Prime(p)
            } else {
                ConstantShape::PrimePower(p, n)
            };
        }
    }
    let (found, rest) = arith::trial_factor(&abs, TRIAL_LIMIT);
    match (found.as_slice(), rest.is_one()) {
        ([], _) => ConstantShape::Unfactored,
        ([(p, e)], true) => match u64::try_from(p) {
            Ok(p) if *e == 1 => ConstantShape::Prime(p),
            Ok(p) => ConstantShape::PrimePower(p, *e),
            Err(_) => ConstantShape::Unfactored,
        },
        ([(p, e), ..], _) => {
            let u = num_traits::pow(p.clone(), *e as usize);
            let v = f0 / &u;
            ConstantShape::Composite(u, v)
        }
    }
}

fn head_zp_reducible(f: &TruncSeries, p: u64) -> Result<Option<(BigInt, SquareClass)>> {
    if f.order() < 2 || f.coeffs()[2].is_zero() {
        return Ok(None);
    }
    let c = f.coeffs();
    let disc: BigInt = &c[1] * &c[1] - &c[0] * &c[2] * 4;
    Ok(Some((disc.clone(), padics::is_square_zp(&disc, p)?)))
}

/// Rule cascade for an arbitrary series known through `f.order()`.
pub fn classify_general(f: &TruncSeries, p_hint: Option<u64>) -> Result<Verdict> {
    let order = f.order();
    match constant_shape(f.constant_term(), p_hint) {
        ConstantShape::Unit => Ok(Verdict::new(VerdictKind::Unit, Rule::Unit)),
        ConstantShape::Zero => classify_x_divisible(f),
        ConstantShape::Prime(p) => {
            let mut v = Verdict::new(VerdictKind::Irreducible, Rule::PrimeConstant);
            if let Some((disc, class)) = head_zp_reducible(f, p)? {
                v = v.with_square(disc, class);
            }
            Ok(v)
        }
        ConstantShape::Composite(u, v) => {
            let pair = factor::factor_coprime_constant(f, &u, &v, order)?;
            Ok(Verdict::reducible(Rule::CompositeConstant, pair))
        }
        ConstantShape::Unfactored => Ok(Verdict::unknown(
            Rule::UnfactoredConstant,
            format!(
                "|f₀| = {} has no prime factor below {TRIAL_LIMIT}; its shape is undetermined",
                f.constant_term().abs()
            ),
        )),
        ConstantShape::PrimePower(p, n) => {
            if f.constant_term().is_negative() {
                let mut v = classify_prime_power(&f.neg(), p, n)?;
                v.factors = v.factors.map(FactorPair::negate_first);
                return Ok(v);
            }
            classify_prime_power(f, p, n)
        }
    }
}

fn classify_x_divisible(f: &TruncSeries) -> Result<Verdict> {
    let Some(k) = f.coeffs().iter().position(|c| !c.is_zero()) else {
        return Ok(Verdict::new(VerdictKind::ZeroSeries, Rule::ZeroSeries));
    };
    if k == 1 && f.coeffs()[1].abs().is_one() {
        return Ok(Verdict::new(VerdictKind::Irreducible, Rule::XTimesUnit));
    }
    Ok(Verdict::reducible(Rule::XDivides, factor::factor_x(f)?))
}

/// `f₀ = p^n`, `n ≥ 2`.
fn classify_prime_power(f: &TruncSeries, p: u64, n: u32) -> Result<Verdict> {
    let c = f.coeffs();
    let with_zp = |v: Verdict| -> Result<Verdict> {
        Ok(match head_zp_reducible(f, p)? {
            Some((disc, class)) if v.zp_reducible.is_none() => {
                let cert = v.certificate.clone();
                let mut out = v.with_square(disc, class);
                if cert.is_some() {
                    out.certificate = cert;
                }
                out
            }
            _ => v,
        })
    };
    if f.order() == 0 {
        return Ok(Verdict::unknown(
            Rule::HeadOutside,
            "only the constant term is known",
        ));
    }
    if !divides(p, &c[1]) {
        return with_zp(Verdict::new(VerdictKind::Irreducible, Rule::LinearCoprime));
    }
    if c.iter().all(|x| divides(p, x)) {
        let pair = factor::factor_content(f, p)?;
        return with_zp(
            Verdict::reducible(Rule::ContentP, pair).with_assumption(format!(
                "coefficients past order {} are divisible by {p}",
                f.order()
            )),
        );
    }
    if f.order() < 2 || divides(p, &c[2]) {
        return with_zp(Verdict::unknown(
            Rule::HeadOutside,
            format!("head is not p^n + p^m βx + αx² with {p} ∤ α"),
        ));
    }
    let q = head_input(f, p, n)?;
    with_zp(classify_head(&q, f.order())?)
}

fn head_input(f: &TruncSeries, p: u64, n: u32) -> Result<QuadInput> {
    let c = f.coeffs();
    let tail = c[3..].to_vec();
    if c[1].is_zero() {
        return Ok(QuadInput::beta_zero(p, n, c[2].clone()).with_tail(tail));
    }
    let v = padics::valuation(&c[1], p)?;
    Ok(QuadInput::new(p, n, Some(v.t), v.u, c[2].clone()).with_tail(tail))
}

fn tail_is_zero(q: &QuadInput) -> bool {
    q.tail.iter().all(Zero::is_zero)
}

fn polynomial_assumption(order: usize) -> String {
    format!("coefficients past order {order} vanish")
}

/// Falls back to the tail-free classifier when every known tail coefficient
/// is zero, otherwise reports the case as open.
fn delegate_or_unknown(q: &QuadInput, order: usize, why: &str) -> Result<Verdict> {
    if tail_is_zero(q) {
        let head = QuadInput { tail: Vec::new(), ..q.clone() };
        let v = classify_quadratic_at(&head, order)?;
        return Ok(v.with_assumption(polynomial_assumption(order)));
    }
    Ok(Verdict::unknown(Rule::TailUnresolved, why))
}

fn classify_head(q: &QuadInput, order: usize) -> Result<Verdict> {
    let p = q.p;
    let n = q.n;
    let Some(m) = q.m else {
        if n % 2 == 1 {
            return Ok(Verdict::new(VerdictKind::Irreducible, Rule::TailBetaZero));
        }
        if p == 2 {
            return delegate_or_unknown(q, order, "p = 2, β = 0, n even with a nonzero tail");
        }
        if !minus_alpha_is_square(&q.alpha, p)? {
            return Ok(Verdict::new(VerdictKind::Irreducible, Rule::TailBetaZero));
        }
        let pair = factor::factor_beta_zero(q, order)?;
        return Ok(Verdict::reducible(Rule::TailBetaZero, pair));
    };
    if 2 * m < n {
        let pair = factor::factor_2m_lt_n(q, order)?;
        return Ok(Verdict::reducible(Rule::TailTwoMLtN, pair));
    }
    if 2 * m > n && n % 2 == 1 {
        return Ok(Verdict::new(VerdictKind::Irreducible, Rule::TailTwoMGtNOdd));
    }
    if p == 2 {
        if n == 2 * m {
            return Ok(Verdict::new(VerdictKind::Irreducible, Rule::TwoNEqTwoM));
        }
        return delegate_or_unknown(q, order, "p = 2, 2m > n, n even with a nonzero tail");
    }
    if 2 * m > n {
        if !minus_alpha_is_square(&q.alpha, p)? {
            return Ok(Verdict::new(VerdictKind::Irreducible, Rule::TailTwoMGtNEven));
        }
        let pair = factor::factor_m_gt_nu(q, order)?;
        return Ok(Verdict::reducible(Rule::TailTwoMGtNEven, pair));
    }
    classify_equal_head(q, m, order)
}

/// Odd `p`, `n = 2m`.
fn classify_equal_head(q: &QuadInput, m: u32, order: usize) -> Result<Verdict> {
    let p = q.p;
    let bp = BigInt::from(p);
    let roots = padics::lift_roots_mod_pk(&BigInt::one(), &-&q.beta, &q.alpha, p, m)?;
    if roots.is_empty() {
        return Ok(Verdict::new(VerdictKind::Irreducible, Rule::TailNoRoot));
    }
    if roots
        .iter()
        .any(|a| !modulo(&(a * 2 - &q.beta), &bp).is_zero())
    {
        let pair = factor::factor_simple_root_tail(q, order)?;
        return Ok(Verdict::reducible(Rule::TailSimpleRoot, pair));
    }

    let d: BigInt = &q.beta * &q.beta - &q.alpha * 4;
    let p2 = &bp * &bp;
    let (qq, rem) = d.div_rem(&p2);
    let c3_family = m == 1 && rem.is_zero() && !divides(p, &qq) && padics::is_qr_mod_p(&qq, p)?;
    if !c3_family {
        return delegate_or_unknown(
            q,
            order,
            "double root of y² − βy + α mod p^m outside the p² + pβx + αx² family",
        );
    }
    let Some(c3) = q.tail.first() else {
        return delegate_or_unknown(q, order, "c₃ is not known");
    };
    if !divides(p, c3) {
        return Ok(Verdict::new(VerdictKind::Irreducible, Rule::TailDoubleRootC3));
    }
    if q.tail.iter().all(|c| (c % &p2).is_zero()) {
        let pair = factor::factor_tail(q, order)?;
        return Ok(Verdict::reducible(Rule::TailDoubleRootP2, pair)
            .with_assumption(format!("p² = {p2} divides every coefficient past order {order}")));
    }
    Ok(Verdict::unknown(
        Rule::TailUnresolved,
        format!("{p} | c₃ but {p2} ∤ c_k for some k ≥ 3; neither p ∤ c₃ nor p² | c_k for all k holds"),
    ))
}
