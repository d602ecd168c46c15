//! Sufficient-condition certificates for the twelve mapping theorems.
//!
//! A certificate records the theorem's preconditions with their margins,
//! the closed-form left-hand side, the right-hand side and the
//! resulting verdict. [`cross_validate`] then sums the weighted coefficient
//! series directly and checks that every `Holds` verdict really keeps the
//! sum within its budget.
//!
//! The closed forms are written in terms of
//!
//! ```text
//! P   = Γ(c)Γ(c-|a|-|b|) / (Γ(c-|a|)Γ(c-|b|))
//! H0  = 2F1(|a|, |b|; c-|a|; -1)
//! Xk  = (|a|)_k (|b|)_2k / ((c-|a|)_k (c-|a|-|b|-k)_k) 2F1(|a|+k, |b|+2k; c-|a|+k; -1)
//! KH4 = (c-|a|-1)(c-|a|-|b|) / ((|a|-1)(|b|-1)(|b|-2)) 2F1(|a|-1, |b|-2; c-|a|-1; -1)
//! D   = (c-1)(c-2) / ((|a|-1)(|b|-1)(|b|-2))
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::lemma::{base_gauss, part4_gauss, shifted_gauss};
use crate::operator::{worst_case_t, ClassSpec, OperatorParams, SourceSpec};
use crate::specfun::gamma_prefactor;
use crate::summation::SeriesValue;

/// Slack allowed between the brute-force sum and the budget.
pub const ORACLE_SLACK: f64 = 1e-8;

/// Relative width of the band in which a margin is too thin to call.
pub const RESOLUTION: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    T2_1,
    T2_2,
    Cor2,
    T2_3,
    T3_1,
    T3_2,
    T3_3,
    T4_1,
    T4_2,
    T5_1,
    T5_2,
    T5_3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClassKind {
    Starlike,
    Convex,
    Ucv,
    Sp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SourceKind {
    Direct,
    RBeta,
    ClassS,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::T2_1,
        TheoremId::T2_2,
        TheoremId::Cor2,
        TheoremId::T2_3,
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::T3_3,
        TheoremId::T4_1,
        TheoremId::T4_2,
        TheoremId::T5_1,
        TheoremId::T5_2,
        TheoremId::T5_3,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TheoremId::T2_1 => "T2.1",
            TheoremId::T2_2 => "T2.2",
            TheoremId::Cor2 => "COR2",
            TheoremId::T2_3 => "T2.3",
            TheoremId::T3_1 => "T3.1",
            TheoremId::T3_2 => "T3.2",
            TheoremId::T3_3 => "T3.3",
            TheoremId::T4_1 => "T4.1",
            TheoremId::T4_2 => "T4.2",
            TheoremId::T5_1 => "T5.1",
            TheoremId::T5_2 => "T5.2",
            TheoremId::T5_3 => "T5.3",
        }
    }

    fn kinds(self) -> (ClassKind, SourceKind) {
        use ClassKind::*;
        use SourceKind::*;
        match self {
            TheoremId::T2_1 => (Starlike, Direct),
            TheoremId::T2_2 | TheoremId::Cor2 => (Starlike, RBeta),
            TheoremId::T2_3 => (Starlike, ClassS),
            TheoremId::T3_1 => (Convex, Direct),
            TheoremId::T3_2 => (Convex, RBeta),
            TheoremId::T3_3 => (Convex, ClassS),
            TheoremId::T4_1 => (Ucv, Direct),
            TheoremId::T4_2 => (Ucv, RBeta),
            TheoremId::T5_1 => (Sp, Direct),
            TheoremId::T5_2 => (Sp, RBeta),
            TheoremId::T5_3 => (Sp, ClassS),
        }
    }

    /// Whether the theorem takes a free `lambda` (the corollary fixes it to 1).
    pub fn needs_lambda(self) -> bool {
        self != TheoremId::Cor2 && matches!(self.kinds().0, ClassKind::Starlike | ClassKind::Convex)
    }

    pub fn needs_beta(self) -> bool {
        self.kinds().1 == SourceKind::RBeta
    }

    pub fn class(self, lambda: Option<f64>) -> Result<ClassSpec> {
        let lambda = if self == TheoremId::Cor2 {
            Some(1.0)
        } else {
            lambda
        };
        let need = || lambda.ok_or_else(|| self.missing("lambda"));
        match self.kinds().0 {
            ClassKind::Starlike => ClassSpec::starlike(need()?),
            ClassKind::Convex => ClassSpec::convex(need()?),
            ClassKind::Ucv => Ok(ClassSpec::Ucv),
            ClassKind::Sp => Ok(ClassSpec::Sp),
        }
    }

    fn missing(self, name: &'static str) -> Error {
        Error::MissingParameter {
            theorem: self.label().to_string(),
            name,
        }
    }

    pub fn source(self, beta: Option<f64>) -> Result<SourceSpec> {
        match self.kinds().1 {
            SourceKind::Direct => Ok(SourceSpec::SelfFunction),
            SourceKind::ClassS => Ok(SourceSpec::FullClassS),
            SourceKind::RBeta => {
                let beta = beta.ok_or_else(|| self.missing("beta"))?;
                SourceSpec::r_beta(beta)
            }
        }
    }

    /// Human-readable hypotheses, as used in usage messages.
    pub fn precondition_table(self) -> Vec<String> {
        let mut rows = vec![
            "a, b complex and non-zero (only |a|, |b| are used)".to_string(),
            "c > 0".to_string(),
        ];
        if self.needs_lambda() {
            rows.push("0 < lambda <= 1".into());
        }
        if self.needs_beta() {
            rows.push("0 <= beta < 1".into());
        }
        rows.extend(
            condition_specs(self)
                .into_iter()
                .map(|c| c.name.to_string()),
        );
        rows
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('_', ".");
        let key = key
            .strip_prefix("THM")
            .or_else(|| key.strip_prefix('T'))
            .unwrap_or(&key);
        let id = match key {
            "2.1" => TheoremId::T2_1,
            "2.2" => TheoremId::T2_2,
            "COR2" | "COR" | "COR.2" | "OR2" => TheoremId::Cor2,
            "2.3" => TheoremId::T2_3,
            "3.1" => TheoremId::T3_1,
            "3.2" => TheoremId::T3_2,
            "3.3" => TheoremId::T3_3,
            "4.1" => TheoremId::T4_1,
            "4.2" => TheoremId::T4_2,
            "5.1" => TheoremId::T5_1,
            "5.2" => TheoremId::T5_2,
            "5.3" => TheoremId::T5_3,
            _ => return Err(Error::UnsupportedTheorem(s.to_string())),
        };
        Ok(id)
    }
}

impl Serialize for TheoremId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Holds,
    Fails,
    PreconditionViolated,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "Holds",
            Verdict::Fails => "Fails",
            Verdict::PreconditionViolated => "PreconditionViolated",
            Verdict::Inconclusive => "Inconclusive",
        }
    }

    /// Classifies a margin `rhs - lhs`.
    pub fn from_margin(margin: f64, rhs: f64) -> Self {
        if !margin.is_finite() {
            if margin == f64::INFINITY {
                return Verdict::Holds;
            }
            return Verdict::Inconclusive;
        }
        if margin.abs() <= RESOLUTION * rhs.abs().max(1.0) {
            Verdict::Inconclusive
        } else if margin > 0.0 {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// One hypothesis with its measured distance from the boundary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Precondition {
    pub name: String,
    pub required: String,
    pub margin: f64,
    pub pass: bool,
}

/// `T5_2` with the opposite sign on the `2F1(|a|-1, |b|-2; ...)` term.
/// With a plus sign the condition is not sufficient (the weighted sum can
/// exceed 1 while it holds); with a minus sign it is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProofSignForm {
    pub lhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
    /// Set by [`cross_validate`]: whether a `Holds` verdict of this form is
    /// borne out by the brute-force sum.
    pub consistent: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum OracleStatus {
    /// `Holds` and the weighted sum is within budget.
    Consistent,
    /// `Holds` but the weighted sum exceeds the budget.
    Violation { excess: f64 },
    /// `Fails`: a failed sufficient condition constrains nothing.
    Unconstrained,
    /// The brute-force sum did not converge.
    NotConverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleCheck {
    pub budget: f64,
    #[serde(flatten)]
    pub status: OracleStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub theorem: TheoremId,
    #[serde(flatten, serialize_with = "ser_params")]
    pub params: OperatorParams,
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    pub preconditions: Vec<Precondition>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub verdict: Verdict,
    #[serde(rename = "oracle_T")]
    pub oracle_t: Option<SeriesValue>,
    pub oracle_check: Option<OracleCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proof_sign: Option<ProofSignForm>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn ser_params<S: Serializer>(p: &OperatorParams, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Flat {
        a: f64,
        b: f64,
        c: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        raw_a: Option<[f64; 2]>,
        #[serde(skip_serializing_if = "Option::is_none")]
        raw_b: Option<[f64; 2]>,
    }
    Flat {
        a: p.a_mod,
        b: p.b_mod,
        c: p.c,
        raw_a: p.raw_a.map(|z| [z.re, z.im]),
        raw_b: p.raw_b.map(|z| [z.re, z.im]),
    }
    .serialize(s)
}

impl Certificate {
    pub fn class(&self) -> ClassSpec {
        self.theorem
            .class(self.lambda)
            .expect("validated at construction")
    }

    pub fn source(&self) -> SourceSpec {
        self.theorem
            .source(self.beta)
            .expect("validated at construction")
    }
}

#[derive(Debug, Clone, Copy)]
enum Cond {
    /// `c > |a| + |b| + k`
    CAbove(f64),
    /// `c > max(|a| + 1, |a| + |b| - 1)`
    CAboveMax,
    /// `|a| != 1`
    ANotOne,
    /// `|b| != k`
    BNot(f64),
}

struct CondSpec {
    name: &'static str,
    cond: Cond,
}

fn condition_specs(id: TheoremId) -> Vec<CondSpec> {
    let above = |k: f64, name: &'static str| CondSpec {
        name,
        cond: Cond::CAbove(k),
    };
    match id {
        TheoremId::T2_1 | TheoremId::T3_2 | TheoremId::T4_2 | TheoremId::T5_1 => {
            vec![above(1.0, "c > |a|+|b|+1")]
        }
        TheoremId::T2_3 | TheoremId::T3_1 | TheoremId::T4_1 | TheoremId::T5_3 => {
            vec![above(2.0, "c > |a|+|b|+2")]
        }
        TheoremId::T3_3 => vec![above(3.0, "c > |a|+|b|+3")],
        TheoremId::Cor2 => vec![above(0.0, "c > |a|+|b|")],
        TheoremId::T2_2 | TheoremId::T5_2 => vec![
            CondSpec {
                name: "|a| != 1",
                cond: Cond::ANotOne,
            },
            CondSpec {
                name: "|b| != 1",
                cond: Cond::BNot(1.0),
            },
            CondSpec {
                name: "|b| != 2",
                cond: Cond::BNot(2.0),
            },
            CondSpec {
                name: "c > max{|a|+1, |a|+|b|-1}",
                cond: Cond::CAboveMax,
            },
            // Γ(c-|a|-|b|) in the prefactor and convergence of the
            // unweighted Clausen sum both need this.
            above(0.0, "c > |a|+|b|"),
        ],
    }
}

fn evaluate_conditions(id: TheoremId, p: &OperatorParams, cfg: &EvalConfig) -> Vec<Precondition> {
    let (a, b, c) = (p.a_mod, p.b_mod, p.c);
    condition_specs(id)
        .into_iter()
        .map(|spec| {
            let (required, margin) = match spec.cond {
                Cond::CAbove(0.0) => ("c - |a| - |b| > delta".to_string(), c - a - b),
                Cond::CAbove(k) => (format!("c - |a| - |b| - {k} > delta"), c - a - b - k),
                Cond::CAboveMax => (
                    "c - max{|a|+1, |a|+|b|-1} > delta".to_string(),
                    c - (a + 1.0).max(a + b - 1.0),
                ),
                Cond::ANotOne => ("| |a| - 1 | > delta".to_string(), (a - 1.0).abs()),
                Cond::BNot(k) => (format!("| |b| - {k} | > delta"), (b - k).abs()),
            };
            Precondition {
                name: spec.name.to_string(),
                required,
                margin,
                pass: margin > cfg.margin,
            }
        })
        .collect()
}

/// Closed-form pieces shared by the theorem inequalities.
struct Pieces {
    pre: f64,
    h0: f64,
    x: [f64; 4],
}

impl Pieces {
    fn new(p: &OperatorParams, max_shift: usize, cfg: &EvalConfig) -> Result<Self> {
        let (a, b, c) = (p.a_mod, p.b_mod, p.c);
        let mut x = [0.0; 4];
        for (k, slot) in x.iter_mut().enumerate().take(max_shift + 1).skip(1) {
            *slot = shifted_gauss(k, a, b, c, cfg)?;
        }
        Ok(Pieces {
            pre: gamma_prefactor(a, b, c, cfg)?,
            h0: base_gauss(a, b, c, cfg)?,
            x,
        })
    }
}

fn r_beta_term(beta: f64) -> f64 {
    1.0 / (2.0 * (1.0 - beta))
}

/// `(lhs, rhs, alternative lhs)` for each theorem.
fn sides(
    id: TheoremId,
    p: &OperatorParams,
    lambda: f64,
    beta: f64,
    cfg: &EvalConfig,
) -> Result<(f64, f64, Option<f64>)> {
    let (a, b, c) = (p.a_mod, p.b_mod, p.c);
    let shift = match id {
        TheoremId::T3_3 => 3,
        TheoremId::T2_3 | TheoremId::T3_1 | TheoremId::T4_1 | TheoremId::T5_3 => 2,
        TheoremId::T2_1 | TheoremId::T3_2 | TheoremId::T4_2 | TheoremId::T5_1 => 1,
        TheoremId::T2_2 | TheoremId::Cor2 | TheoremId::T5_2 => 0,
    };
    let q = Pieces::new(p, shift, cfg)?;
    let [_, x1, x2, x3] = q.x;
    let d = || (c - 1.0) * (c - 2.0) / ((a - 1.0) * (b - 1.0) * (b - 2.0));
    let out = match id {
        TheoremId::T2_1 => (q.pre * (x1 + lambda * q.h0), 2.0 * lambda, None),
        TheoremId::T2_2 => {
            let kh4 = part4_gauss(a, b, c, cfg)? / q.pre;
            let lhs = q.pre * ((lambda - 1.0) * kh4 + q.h0);
            let rhs = lambda * (1.0 + r_beta_term(beta)) + (lambda - 1.0) * d();
            (lhs, rhs, None)
        }
        TheoremId::Cor2 => (q.pre * q.h0, 1.0 + r_beta_term(beta), None),
        TheoremId::T2_3 | TheoremId::T3_1 => (
            q.pre * (x2 + (lambda + 2.0) * x1 + lambda * q.h0),
            2.0 * lambda,
            None,
        ),
        TheoremId::T3_2 => (
            q.pre * (x1 + lambda * q.h0),
            lambda * (r_beta_term(beta) + 1.0),
            None,
        ),
        TheoremId::T3_3 => {
            let bracket = x3 + (lambda + 5.0) * x2 + (3.0 * lambda + 4.0) * x1 + lambda * q.h0;
            (q.pre * bracket, 2.0 * lambda, None)
        }
        TheoremId::T4_1 | TheoremId::T5_3 => (q.pre * (2.0 * x2 + 5.0 * x1 + q.h0), 2.0, None),
        TheoremId::T4_2 => (q.pre * (2.0 * x1 + q.h0), r_beta_term(beta) + 1.0, None),
        TheoremId::T5_1 => (q.pre * (2.0 * x1 + q.h0), 2.0, None),
        TheoremId::T5_2 => {
            let kh4 = part4_gauss(a, b, c, cfg)? / q.pre;
            let stated = q.pre * (2.0 * q.h0 + kh4) + d();
            let proof = q.pre * (2.0 * q.h0 - kh4) + d();
            (stated, r_beta_term(beta) + 1.0, Some(proof))
        }
    };
    Ok(out)
}

/// Evaluates a theorem's certificate. `lambda` and `beta` are required
/// exactly when the theorem takes them (the corollary fixes `lambda = 1`).
pub fn evaluate(
    id: TheoremId,
    params: &OperatorParams,
    lambda: Option<f64>,
    beta: Option<f64>,
    cfg: &EvalConfig,
) -> Result<Certificate> {
    cfg.validate()?;
    if id == TheoremId::Cor2 && lambda.is_some_and(|l| l != 1.0) {
        return Err(Error::domain(
            "lambda",
            lambda.unwrap(),
            "the corollary is the case lambda = 1",
        ));
    }
    let class = id.class(lambda)?;
    let source = id.source(beta)?;
    let lambda = class.lambda();
    let beta = match source {
        SourceSpec::RBeta { beta } => Some(beta),
        _ => None,
    };

    let preconditions = evaluate_conditions(id, params, cfg);
    let mut cert = Certificate {
        theorem: id,
        params: *params,
        lambda,
        beta,
        preconditions,
        lhs: None,
        rhs: None,
        margin: None,
        verdict: Verdict::PreconditionViolated,
        oracle_t: None,
        oracle_check: None,
        proof_sign: None,
        notes: Vec::new(),
    };
    if cert.preconditions.iter().any(|p| !p.pass) {
        return Ok(cert);
    }

    match sides(id, params, lambda.unwrap_or(1.0), beta.unwrap_or(0.0), cfg) {
        Ok((lhs, rhs, proof)) => {
            let margin = rhs - lhs;
            cert.lhs = Some(lhs);
            cert.rhs = Some(rhs);
            cert.margin = Some(margin);
            cert.verdict = if lhs.is_finite() {
                Verdict::from_margin(margin, rhs)
            } else {
                Verdict::Inconclusive
            };
            cert.proof_sign = proof.map(|lhs| ProofSignForm {
                lhs,
                margin: rhs - lhs,
                verdict: Verdict::from_margin(rhs - lhs, rhs),
                consistent: None,
            });
        }
        Err(e) => {
            cert.verdict = Verdict::Inconclusive;
            cert.notes.push(format!("numerical evaluation failed: {e}"));
        }
    }
    Ok(cert)
}

fn theorem_for(class: &ClassSpec, source: SourceKind) -> Result<TheoremId> {
    let kind = match class {
        ClassSpec::StarlikeLambda { .. } => ClassKind::Starlike,
        ClassSpec::ConvexLambda { .. } => ClassKind::Convex,
        ClassSpec::Ucv => ClassKind::Ucv,
        ClassSpec::Sp => ClassKind::Sp,
    };
    TheoremId::ALL
        .into_iter()
        .filter(|&id| id != TheoremId::Cor2)
        .find(|id| id.kinds() == (kind, source))
        .ok_or_else(|| {
            Error::UnsupportedTheorem(format!("no theorem maps S into {}", class.name()))
        })
}

/// Membership of `z 3F2(...; z)` itself in `class` (`T2_1`, `T3_1`, `T4_1`, `T5_1`).
pub fn check_direct(
    class: &ClassSpec,
    params: &OperatorParams,
    cfg: &EvalConfig,
) -> Result<Certificate> {
    evaluate(
        theorem_for(class, SourceKind::Direct)?,
        params,
        class.lambda(),
        None,
        cfg,
    )
}

/// The operator maps `R(beta)` into `class` (`T2_2`, `T3_2`, `T4_2`, `T5_2`).
pub fn check_from_r_beta(
    class: &ClassSpec,
    beta: f64,
    params: &OperatorParams,
    cfg: &EvalConfig,
) -> Result<Certificate> {
    evaluate(
        theorem_for(class, SourceKind::RBeta)?,
        params,
        class.lambda(),
        Some(beta),
        cfg,
    )
}

/// `COR2`, the `lambda = 1` case of `T2_2`.
pub fn check_corollary(
    beta: f64,
    params: &OperatorParams,
    cfg: &EvalConfig,
) -> Result<Certificate> {
    evaluate(TheoremId::Cor2, params, None, Some(beta), cfg)
}

/// The operator maps `S` into `class` (`T2_3`, `T3_3`, `T5_3`). No such
/// result exists for UCV.
pub fn check_from_s(
    class: &ClassSpec,
    params: &OperatorParams,
    cfg: &EvalConfig,
) -> Result<Certificate> {
    evaluate(
        theorem_for(class, SourceKind::ClassS)?,
        params,
        class.lambda(),
        None,
        cfg,
    )
}

/// Attaches the brute-force weighted sum to a decided certificate and
/// checks the sufficiency chain `Holds => T <= budget + ORACLE_SLACK`.
///
/// Certificates without a `Holds`/`Fails` verdict are returned unchanged.
pub fn cross_validate(cert: &Certificate, cfg: &EvalConfig) -> Certificate {
    let mut out = cert.clone();
    if !matches!(cert.verdict, Verdict::Holds | Verdict::Fails) {
        return out;
    }
    let class = cert.class();
    let budget = class.budget();
    let oracle = match worst_case_t(&class, &cert.source(), &cert.params, cfg) {
        Ok(v) => v,
        Err(e) => {
            out.verdict = Verdict::Inconclusive;
            out.notes.push(format!("oracle unavailable: {e}"));
            out.oracle_check = Some(OracleCheck {
                budget,
                status: OracleStatus::NotConverged,
            });
            return out;
        }
    };
    out.oracle_t = Some(oracle);
    let within = oracle.value <= budget + ORACLE_SLACK;
    let status = if !oracle.converged {
        out.verdict = Verdict::Inconclusive;
        out.notes.push(format!(
            "oracle did not converge: {} terms, tail estimate {:e}",
            oracle.terms_used, oracle.tail_bound
        ));
        OracleStatus::NotConverged
    } else if cert.verdict == Verdict::Fails {
        OracleStatus::Unconstrained
    } else if within {
        OracleStatus::Consistent
    } else {
        let excess = oracle.value - budget;
        out.notes.push(format!(
            "soundness violation: weighted coefficient sum {} exceeds budget {budget} by {excess:e}",
            oracle.value
        ));
        OracleStatus::Violation { excess }
    };
    out.oracle_check = Some(OracleCheck { budget, status });
    if let Some(alt) = out.proof_sign.as_mut() {
        if oracle.converged {
            alt.consistent = Some(alt.verdict != Verdict::Holds || within);
        }
    }
    out
}
