//! Serializable classification reports shared by the CLI and the tests.

use num_bigint::BigInt;
use serde::Serialize;

use crate::classify::{Certificate, QuadInput, Verdict};
use crate::error::Result;
use crate::oracle::{self, VerificationReport};
use crate::padics::{self, SquareClass};
use crate::serial;

#[derive(Clone, Debug, Serialize)]
pub struct InputReport {
    pub p: u64,
    pub n: u32,
    pub m: Option<u32>,
    #[serde(with = "serial::opt_bigint")]
    pub beta: Option<BigInt>,
    #[serde(with = "serial::bigint")]
    pub alpha: BigInt,
    #[serde(with = "serial::vec_bigint")]
    pub tail: Vec<BigInt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZpReport {
    #[serde(with = "serial::bigint")]
    pub discriminant: BigInt,
    pub square: bool,
    pub valuation: Option<u32>,
    #[serde(with = "serial::opt_bigint")]
    pub unit_residue: Option<BigInt>,
    #[serde(skip)]
    class: SquareClass,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub kind: &'static str,
    pub rule: &'static str,
    pub citation: &'static str,
    pub assumption: Option<String>,
    pub zp_reducible: Option<bool>,
    pub verified_order: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorsReport {
    #[serde(with = "serial::vec_bigint")]
    pub a: Vec<BigInt>,
    #[serde(with = "serial::vec_bigint")]
    pub b: Vec<BigInt>,
    pub order: usize,
    pub engine: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationSummary {
    pub residuals_zero_through: Option<usize>,
    pub a_proper: bool,
    pub b_proper: bool,
    pub passed: bool,
}

impl From<&VerificationReport> for VerificationSummary {
    fn from(r: &VerificationReport) -> Self {
        Self {
            residuals_zero_through: r.residuals_zero_through,
            a_proper: r.a_proper,
            b_proper: r.b_proper,
            passed: r.passed,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub input: InputReport,
    pub zp: ZpReport,
    pub verdict: VerdictReport,
    pub certificate: Option<Certificate>,
    pub factors: Option<FactorsReport>,
    pub verification: Option<VerificationSummary>,
}

impl ClassifyReport {
    /// Builds the report and re-checks any factors with the brute-force
    /// verifier.
    pub fn new(q: &QuadInput, v: &Verdict) -> Result<Self> {
        let disc = q.discriminant();
        let class = padics::is_square_zp(&disc, q.p)?;
        let zp = ZpReport {
            discriminant: disc,
            square: class.is_square,
            valuation: class.valuation,
            unit_residue: class.unit_residue.clone(),
            class,
        };
        let (factors, verification) = match &v.factors {
            Some(pair) => {
                let target = q.series(pair.order)?;
                let check = oracle::verify_factorization(&target, &pair.a, &pair.b)?;
                let factors = FactorsReport {
                    a: pair.a.coeffs().to_vec(),
                    b: pair.b.coeffs().to_vec(),
                    order: pair.order,
                    engine: pair.engine.name(),
                };
                (Some(factors), Some(VerificationSummary::from(&check)))
            }
            None => (None, None),
        };
        Ok(Self {
            input: InputReport {
                p: q.p,
                n: q.n,
                m: q.m,
                beta: q.m.map(|_| q.beta.clone()),
                alpha: q.alpha.clone(),
                tail: q.tail.clone(),
            },
            zp,
            verdict: VerdictReport {
                kind: v.kind.as_str(),
                rule: v.rule.tag(),
                citation: v.rule.citation(),
                assumption: v.assumption.clone(),
                zp_reducible: v.zp_reducible,
                verified_order: v.verified_order,
            },
            certificate: v.certificate.clone(),
            factors,
            verification,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (rule {})\n", self.verdict.kind, self.verdict.rule);
        out.push_str(&format!("  {}\n", self.verdict.citation));
        out.push_str(&format!(
            "  discriminant {}: {}\n",
            self.zp.discriminant,
            self.zp.class.describe(self.input.p)
        ));
        if let Some(a) = &self.verdict.assumption {
            out.push_str(&format!("  assumption: {a}\n"));
        }
        if let (Some(f), Some(v)) = (&self.factors, &self.verification) {
            out.push_str(&format!("  a = {}\n", join(&f.a)));
            out.push_str(&format!("  b = {}\n", join(&f.b)));
            out.push_str(&format!(
                "  verified through order {} ({})\n",
                f.order,
                if v.passed { "pass" } else { "FAIL" }
            ));
        }
        out
    }
}

pub fn join(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;
    use crate::classify::classify_quadratic_at;

    #[test]
    fn report_shape() {
        let q = QuadInput::new(7, 2, Some(1), big(3), big(2));
        let v = classify_quadratic_at(&q, 4).unwrap();
        let r = ClassifyReport::new(&q, &v).unwrap();
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["verdict"]["kind"], "reducible");
        assert_eq!(json["input"]["beta"], "3");
        assert_eq!(json["zp"]["discriminant"], "49");
        assert_eq!(json["factors"]["order"], 4);
        assert_eq!(json["verification"]["passed"], true);
        assert!(r.to_text().starts_with("reducible (rule S3.m-eq-nu)"));
    }
}
