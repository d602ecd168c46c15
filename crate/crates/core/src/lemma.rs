//! Closed forms of the weighted Clausen sums
//!
//! ```text
//! part 1:  sum (n+1)   t_n        part 3:  sum (n+1)^3 t_n
//! part 2:  sum (n+1)^2 t_n        part 4:  sum t_n / (n+1)
//! ```
//!
//! with `t_n = (a)_n (b/2)_n ((b+1)/2)_n / ((c/2)_n ((c+1)/2)_n n!)`, each
//! paired with a brute-force summation of the same series.
//!
//! Parts 1-3 expand `(n+1)^k` in falling factorials and shift the
//! summation index, which turns every piece into a Driver–Johnston sum with
//! parameters `(a+k, b+2k, c+2k)`. Part 4 shifts the other way, to
//! `(a-1, b-2, c-2)`.

use std::fmt;

use serde::Serialize;

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::specfun::{
    clausen_3f2_at_one, clausen_weighted_sum, gamma_prefactor, gauss_2f1_at_minus_one, pochhammer,
    signed_gamma_ratio,
};
use crate::summation::SeriesValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LemmaPart {
    One = 1,
    Two = 2,
    Three = 3,
    Four = 4,
}

impl LemmaPart {
    pub const ALL: [LemmaPart; 4] = [
        LemmaPart::One,
        LemmaPart::Two,
        LemmaPart::Three,
        LemmaPart::Four,
    ];

    pub fn index(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for LemmaPart {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(LemmaPart::One),
            2 => Ok(LemmaPart::Two),
            3 => Ok(LemmaPart::Three),
            4 => Ok(LemmaPart::Four),
            _ => Err(Error::domain(
                "part",
                f64::from(v),
                "lemma parts are 1, 2, 3, 4",
            )),
        }
    }
}

impl fmt::Display for LemmaPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Two algebraically equal spellings of the part 4 constant term:
/// `(c-2)_2 / ((a-1)(b-2)_2)` and `(c-2)(c-1) / ((a-1)(b-1)(b-2))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Part4Form {
    Statement,
    Proof,
}

fn require(condition: impl Into<String>, margin: f64, cfg: &EvalConfig) -> Result<()> {
    if margin > cfg.margin {
        Ok(())
    } else {
        Err(Error::PoleProximity {
            condition: condition.into(),
            margin,
            required: cfg.margin,
        })
    }
}

/// Checks the admissible region of a part, naming the first violated
/// factor.
pub fn lemma_preconditions(
    part: LemmaPart,
    a: f64,
    b: f64,
    c: f64,
    cfg: &EvalConfig,
) -> Result<()> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::domain("a", a, "must be >= 0"));
    }
    if !(b >= 0.0 && b.is_finite()) {
        return Err(Error::domain("b", b, "must be >= 0"));
    }
    match part {
        LemmaPart::One => require("c - a - b - 1", c - a - b - 1.0, cfg),
        LemmaPart::Two => require("c - a - b - 2", c - a - b - 2.0, cfg),
        LemmaPart::Three => require("c - a - b - 3", c - a - b - 3.0, cfg),
        LemmaPart::Four => {
            require("|a - 1|", (a - 1.0).abs(), cfg)?;
            require("|b - 1|", (b - 1.0).abs(), cfg)?;
            require("|b - 2|", (b - 2.0).abs(), cfg)?;
            require(
                "c - max(a + 1, a + b - 1)",
                c - (a + 1.0).max(a + b - 1.0),
                cfg,
            )
        }
    }
}

/// `2F1(a, b; c - a; -1)`, the base term of every closed form.
pub(crate) fn base_gauss(a: f64, b: f64, c: f64, cfg: &EvalConfig) -> Result<f64> {
    converged(
        gauss_2f1_at_minus_one(a, b, c - a, cfg)?,
        "2F1(a, b; c-a; -1)",
    )
}

/// `(a)_k (b)_{2k} / ((c-a)_k (c-a-b-k)_k) * 2F1(a+k, b+2k; c-a+k; -1)`.
pub(crate) fn shifted_gauss(k: usize, a: f64, b: f64, c: f64, cfg: &EvalConfig) -> Result<f64> {
    let kf = k as f64;
    let coef = pochhammer(a, k) * pochhammer(b, 2 * k)
        / (pochhammer(c - a, k) * pochhammer(c - a - b - kf, k));
    if coef == 0.0 {
        return Ok(0.0);
    }
    let g = gauss_2f1_at_minus_one(a + kf, b + 2.0 * kf, c - a + kf, cfg)?;
    Ok(coef * converged(g, "2F1(a+k, b+2k; c-a+k; -1)")?)
}

/// `(c-a-1)(c-a-b) Γ(c)Γ(c-a-b) / ((a-1)(b-1)(b-2) Γ(c-b)Γ(c-a)) * 2F1(a-1, b-2; c-a-1; -1)`.
///
/// Below `c = a + b` the product `(c-a-b) Γ(c-a-b)` is evaluated as
/// `Γ(c-a-b+1)`, which stays finite down to `c = a + b - 1`.
pub(crate) fn part4_gauss(a: f64, b: f64, c: f64, cfg: &EvalConfig) -> Result<f64> {
    let g = gauss_2f1_at_minus_one(a - 1.0, b - 2.0, c - a - 1.0, cfg)?;
    let g = converged(g, "2F1(a-1, b-2; c-a-1; -1)")?;
    let denom = (a - 1.0) * (b - 1.0) * (b - 2.0);
    let gamma = if c - a - b > cfg.margin {
        (c - a - b) * gamma_prefactor(a, b, c, cfg)?
    } else {
        signed_gamma_ratio(&[c, c - a - b + 1.0], &[c - b, c - a], cfg)?
    };
    Ok((c - a - 1.0) * gamma / denom * g)
}

/// The constant subtracted in part 4, in either spelling.
pub fn part4_constant(form: Part4Form, a: f64, b: f64, c: f64) -> f64 {
    match form {
        Part4Form::Statement => pochhammer(c - 2.0, 2) / ((a - 1.0) * pochhammer(b - 2.0, 2)),
        Part4Form::Proof => (c - 2.0) * (c - 1.0) / ((a - 1.0) * (b - 1.0) * (b - 2.0)),
    }
}

fn converged(v: SeriesValue, what: &str) -> Result<f64> {
    if v.converged {
        Ok(v.value)
    } else {
        Err(Error::NonConvergence {
            series: what.to_string(),
            terms: v.terms_used,
            tail: v.tail_bound,
        })
    }
}

/// Closed form of a part; part 4 uses the `Statement` spelling.
pub fn lemma_sum_closed(part: LemmaPart, a: f64, b: f64, c: f64, cfg: &EvalConfig) -> Result<f64> {
    match part {
        LemmaPart::Four => lemma_part4_closed(Part4Form::Statement, a, b, c, cfg),
        _ => {
            lemma_preconditions(part, a, b, c, cfg)?;
            let pre = gamma_prefactor(a, b, c, cfg)?;
            let h0 = base_gauss(a, b, c, cfg)?;
            let x1 = shifted_gauss(1, a, b, c, cfg)?;
            let bracket = match part {
                LemmaPart::One => x1 + h0,
                LemmaPart::Two => shifted_gauss(2, a, b, c, cfg)? + 3.0 * x1 + h0,
                _ => {
                    shifted_gauss(3, a, b, c, cfg)?
                        + 6.0 * shifted_gauss(2, a, b, c, cfg)?
                        + 7.0 * x1
                        + h0
                }
            };
            Ok(pre * bracket)
        }
    }
}

/// Part 4 closed form with the chosen constant term.
pub fn lemma_part4_closed(
    form: Part4Form,
    a: f64,
    b: f64,
    c: f64,
    cfg: &EvalConfig,
) -> Result<f64> {
    lemma_preconditions(LemmaPart::Four, a, b, c, cfg)?;
    Ok(part4_gauss(a, b, c, cfg)? - part4_constant(form, a, b, c))
}

/// Direct summation of the left-hand series of a part.
pub fn lemma_sum_brute(
    part: LemmaPart,
    a: f64,
    b: f64,
    c: f64,
    cfg: &EvalConfig,
) -> Result<SeriesValue> {
    lemma_preconditions(part, a, b, c, cfg)?;
    let k = match part {
        LemmaPart::One => 1,
        LemmaPart::Two => 2,
        LemmaPart::Three => 3,
        LemmaPart::Four => {
            return clausen_weighted_sum(a, b, c, |n| 1.0 / (n as f64 + 1.0), -1, cfg);
        }
    };
    clausen_weighted_sum(a, b, c, |n| (n as f64 + 1.0).powi(k), k, cfg)
}

/// `Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b)) * 2F1(a, b; c-a; -1)`.
pub fn driver_johnston_rhs(a: f64, b: f64, c: f64, cfg: &EvalConfig) -> Result<f64> {
    Ok(gamma_prefactor(a, b, c, cfg)? * base_gauss(a, b, c, cfg)?)
}

/// The left-hand side of the Driver–Johnston summation, for comparison.
pub fn driver_johnston_lhs(a: f64, b: f64, c: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    clausen_3f2_at_one(a, b, c, cfg)
}
