//! The Clausen convolution operator on coefficient sequences and the
//! brute-force evaluation of the weighted coefficient sums that certify
//! membership in each subclass.
//!
//! For `f(z) = z + sum a_n z^n` the operator image has coefficients
//! `A_n = B_n a_n` with
//!
//! ```text
//! B_n = (a)_{n-1} (b/2)_{n-1} ((b+1)/2)_{n-1} / ((c/2)_{n-1} ((c+1)/2)_{n-1} (n-1)!)
//! ```
//!
//! evaluated on the moduli `|a|`, `|b|`.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::specfun::clausen_ratio;
use crate::summation::{sum_algebraic, SeriesValue, TermRatio};

/// The `(a, b, c)` triple of the operator, reduced to moduli.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorParams {
    pub a_mod: f64,
    pub b_mod: f64,
    pub c: f64,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_complex"
    )]
    pub raw_a: Option<Complex64>,
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_complex"
    )]
    pub raw_b: Option<Complex64>,
}

fn ser_complex<S: serde::Serializer>(
    v: &Option<Complex64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(z) => [z.re, z.im].serialize(s),
        None => s.serialize_none(),
    }
}

impl OperatorParams {
    pub fn new(a_mod: f64, b_mod: f64, c: f64) -> Result<Self> {
        if !(a_mod > 0.0 && a_mod.is_finite()) {
            return Err(Error::domain(
                "|a|",
                a_mod,
                "a must be a finite non-zero parameter",
            ));
        }
        if !(b_mod > 0.0 && b_mod.is_finite()) {
            return Err(Error::domain(
                "|b|",
                b_mod,
                "b must be a finite non-zero parameter",
            ));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::domain("c", c, "must be a finite c > 0"));
        }
        Ok(OperatorParams {
            a_mod,
            b_mod,
            c,
            raw_a: None,
            raw_b: None,
        })
    }

    /// Builds parameters from complex `a`, `b`; only their moduli are used.
    pub fn from_complex(a: Complex64, b: Complex64, c: f64) -> Result<Self> {
        let mut p = Self::new(a.norm(), b.norm(), c)?;
        p.raw_a = Some(a);
        p.raw_b = Some(b);
        Ok(p)
    }

    /// Term ratio of `t_m = B_{m+1}`.
    pub(crate) fn ratio(&self) -> TermRatio {
        clausen_ratio(self.a_mod, self.b_mod, self.c)
    }
}

/// Geometric subclass targeted by a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum ClassSpec {
    StarlikeLambda { lambda: f64 },
    ConvexLambda { lambda: f64 },
    Ucv,
    Sp,
}

impl ClassSpec {
    pub fn starlike(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(ClassSpec::StarlikeLambda { lambda })
    }

    pub fn convex(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(ClassSpec::ConvexLambda { lambda })
    }

    pub fn lambda(&self) -> Option<f64> {
        match *self {
            ClassSpec::StarlikeLambda { lambda } | ClassSpec::ConvexLambda { lambda } => {
                Some(lambda)
            }
            _ => None,
        }
    }

    /// Right-hand side of the coefficient condition `sum w(n)|a_n| <= budget`.
    pub fn budget(&self) -> f64 {
        self.lambda().unwrap_or(1.0)
    }

    /// Weight `w(n)` of the sufficient coefficient condition.
    pub fn weight(&self, n: f64) -> f64 {
        match *self {
            ClassSpec::StarlikeLambda { lambda } => n + lambda - 1.0,
            ClassSpec::ConvexLambda { lambda } => n * (n + lambda - 1.0),
            ClassSpec::Ucv => n * (2.0 * n - 1.0),
            ClassSpec::Sp => 2.0 * n - 1.0,
        }
    }

    fn degree(&self) -> i32 {
        match self {
            ClassSpec::StarlikeLambda { .. } | ClassSpec::Sp => 1,
            ClassSpec::ConvexLambda { .. } | ClassSpec::Ucv => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassSpec::StarlikeLambda { .. } => "S*_lambda",
            ClassSpec::ConvexLambda { .. } => "C_lambda",
            ClassSpec::Ucv => "UCV",
            ClassSpec::Sp => "S_p",
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "lambda",
            lambda,
            "must satisfy 0 < lambda <= 1",
        ))
    }
}

/// Family of input functions `f` the operator is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum SourceSpec {
    /// `f(z) = z / (1 - z)`, so the image is `z 3F2(...; z)` itself.
    SelfFunction,
    /// `R(beta)`: `|a_n| <= 2(1 - beta)/n`.
    RBeta { beta: f64 },
    /// The univalent class `S`: `|a_n| <= n`.
    FullClassS,
}

impl SourceSpec {
    pub fn r_beta(beta: f64) -> Result<Self> {
        if (0.0..1.0).contains(&beta) {
            Ok(SourceSpec::RBeta { beta })
        } else {
            Err(Error::domain("beta", beta, "must satisfy 0 <= beta < 1"))
        }
    }

    /// Worst-case `|a_n|` over the family.
    pub fn bound(&self, n: f64) -> f64 {
        match *self {
            SourceSpec::SelfFunction => 1.0,
            SourceSpec::RBeta { beta } => 2.0 * (1.0 - beta) / n,
            SourceSpec::FullClassS => n,
        }
    }

    fn degree(&self) -> i32 {
        match self {
            SourceSpec::SelfFunction => 0,
            SourceSpec::RBeta { .. } => -1,
            SourceSpec::FullClassS => 1,
        }
    }
}

/// Truncated coefficients `A_1..A_N` of the operator image.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSeries {
    pub coefficients: Vec<f64>,
    pub params: OperatorParams,
}

impl CoefficientSeries {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// `A_n`, 1-based.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1)
            .and_then(|i| self.coefficients.get(i))
            .copied()
    }
}

/// Incremental generator of `B_1, B_2, ...`.
///
/// The running product is kept in linear form while it stays inside
/// `[1e-300, 1e300]` and switches to log form outside that range.
#[derive(Debug, Clone)]
pub struct Multipliers {
    ratio: TermRatio,
    next_n: usize,
    linear: f64,
    log: Option<f64>,
    sign: f64,
}

impl Multipliers {
    pub fn new(params: &OperatorParams) -> Self {
        Multipliers {
            ratio: params.ratio(),
            next_n: 1,
            linear: 1.0,
            log: None,
            sign: 1.0,
        }
    }

    /// `ln |B_n|` of the coefficient about to be yielded.
    fn current_ln(&self) -> f64 {
        self.log.unwrap_or_else(|| self.linear.abs().ln())
    }

    /// Whether the coefficient about to be yielded is held as a plain
    /// `f64` rather than only by its logarithm.
    pub fn in_linear_range(&self) -> bool {
        self.log.is_none()
    }

    /// Next `(n, B_n)` pair, with `B_n` possibly over- or underflowing to
    /// `inf`/`0` when only the logarithm is representable; see
    /// [`Multipliers::next_log`].
    pub fn next_value(&mut self) -> (usize, f64) {
        let linear = self.log.is_none().then_some(self.linear);
        let (n, ln, sign) = self.next_log();
        (n, linear.unwrap_or_else(|| sign * ln.exp()))
    }

    /// Next `(n, ln|B_n|, sign B_n)`.
    pub fn next_log(&mut self) -> (usize, f64, f64) {
        let n = self.next_n;
        let out = match self.log {
            None => (n, self.linear.abs().ln(), self.linear.signum()),
            Some(l) => (n, l, self.sign),
        };
        let r = self.ratio.at(n - 1);
        match self.log {
            None => {
                let v = self.linear * r;
                let m = v.abs();
                if m != 0.0 && !(1e-300..=1e300).contains(&m) || !m.is_finite() {
                    self.log = Some(self.current_ln() + r.abs().ln());
                    self.sign = self.linear.signum() * r.signum();
                } else {
                    self.linear = v;
                }
            }
            Some(l) => {
                self.log = Some(l + r.abs().ln());
                self.sign *= r.signum();
            }
        }
        self.next_n += 1;
        out
    }
}

impl Iterator for Multipliers {
    type Item = f64;
    fn next(&mut self) -> Option<f64> {
        Some(self.next_value().1)
    }
}

/// `B_n`, the factor multiplying `a_n` in the operator image.
pub fn hyper_coefficient(params: &OperatorParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "coefficients are indexed from 1"));
    }
    let mut it = Multipliers::new(params);
    Ok(it.nth(n - 1).expect("infinite iterator"))
}

/// Applies the operator to `f = z + sum_{n>=2} a_n z^n` given as
/// `[a_1, a_2, ...]` with `a_1 = 1`, truncated at order `order`.
pub fn apply_operator(
    params: &OperatorParams,
    f_coeffs: &[f64],
    order: usize,
) -> Result<CoefficientSeries> {
    match f_coeffs.first() {
        Some(&1.0) => {}
        Some(&a1) => return Err(Error::Normalization(a1)),
        None => return Err(Error::Normalization(f64::NAN)),
    }
    if order == 0 || order > f_coeffs.len() {
        return Err(Error::domain(
            "N",
            order as f64,
            format!("truncation order must lie in 1..={}", f_coeffs.len()),
        ));
    }
    let coefficients = Multipliers::new(params)
        .zip(&f_coeffs[..order])
        .map(|(b, a)| b * a)
        .collect();
    Ok(CoefficientSeries {
        coefficients,
        params: *params,
    })
}

/// Worst-case `|A_n|` over the source family.
pub fn coefficient_bound(source: &SourceSpec, params: &OperatorParams, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(
            "n",
            n as f64,
            "bounds are defined for n >= 2",
        ));
    }
    Ok(hyper_coefficient(params, n)? * source.bound(n as f64))
}

/// Growth degree of the summand `w(n) |a_n| B_n / B_n`, i.e. the power of
/// `n` the class weight and source bound contribute together.
pub fn oracle_degree(class: &ClassSpec, source: &SourceSpec) -> i32 {
    class.degree() + source.degree()
}

/// Brute-force `T = sum_{n>=2} w(n) bound(n) B_n`, summed term by term.
///
/// This is the oracle that closed-form certificates are checked against: a
/// certificate's sufficient condition holding means `T <= budget`.
pub fn worst_case_t(
    class: &ClassSpec,
    source: &SourceSpec,
    params: &OperatorParams,
    cfg: &EvalConfig,
) -> Result<SeriesValue> {
    let degree = oracle_degree(class, source);
    let (a, b, c) = (params.a_mod, params.b_mod, params.c);
    let margin = c - a - b - f64::from(degree);
    if !(margin > cfg.margin) {
        return Err(Error::PoleProximity {
            condition: format!("c - |a| - |b| - {degree} (convergence of the weighted sum)"),
            margin,
            required: cfg.margin,
        });
    }
    // Summation index m = n - 1 runs over t_m = B_{m+1}; m = 0 is excluded.
    let weight = |m: usize| {
        if m == 0 {
            0.0
        } else {
            let n = (m + 1) as f64;
            class.weight(n) * source.bound(n)
        }
    };
    let decay = c + 1.0 - a - b - f64::from(degree);
    sum_algebraic(&params.ratio(), weight, decay, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, b: f64, c: f64) -> OperatorParams {
        OperatorParams::new(a, b, c).unwrap()
    }

    #[test]
    fn first_coefficients() {
        let q = p(1.0, 1.0, 4.0);
        assert_eq!(hyper_coefficient(&q, 1).unwrap(), 1.0);
        assert!((hyper_coefficient(&q, 2).unwrap() - 0.1).abs() < 1e-16);
        assert!(hyper_coefficient(&q, 0).is_err());
    }

    #[test]
    fn rejects_zero_parameters() {
        assert!(OperatorParams::new(0.0, 1.0, 2.0).is_err());
        assert!(OperatorParams::new(1.0, 0.0, 2.0).is_err());
        assert!(OperatorParams::new(1.0, 1.0, -2.0).is_err());
        assert!(ClassSpec::starlike(0.0).is_err());
        assert!(ClassSpec::convex(1.5).is_err());
        assert!(SourceSpec::r_beta(1.0).is_err());
        assert!(SourceSpec::r_beta(-0.1).is_err());
    }

    #[test]
    fn identity_and_scaling() {
        let q = p(1.0, 1.0, 4.0);
        let id = apply_operator(&q, &[1.0, 0.0, 0.0, 0.0], 4).unwrap();
        assert_eq!(id.coefficients, vec![1.0, 0.0, 0.0, 0.0]);
        let f = apply_operator(&q, &[1.0, 2.0], 2).unwrap();
        assert!((f.get(2).unwrap() - 0.2).abs() < 1e-16);
        assert!(matches!(
            apply_operator(&q, &[0.5, 1.0], 2),
            Err(Error::Normalization(_))
        ));
        assert!(apply_operator(&q, &[1.0, 1.0], 3).is_err());
    }

    #[test]
    fn bounds_by_source() {
        let q = p(1.0, 1.0, 4.0);
        let b2 = hyper_coefficient(&q, 2).unwrap();
        let b4 = hyper_coefficient(&q, 4).unwrap();
        assert_eq!(
            coefficient_bound(&SourceSpec::FullClassS, &q, 2).unwrap(),
            2.0 * b2
        );
        assert_eq!(
            coefficient_bound(&SourceSpec::RBeta { beta: 0.5 }, &q, 4).unwrap(),
            b4 * 0.25
        );
        assert!((coefficient_bound(&SourceSpec::SelfFunction, &q, 2).unwrap() - 0.1).abs() < 1e-16);
    }

    #[test]
    fn log_fallback_keeps_growth() {
        // Large a, b against small c: B_n leaves the f64 range near n = 7000.
        let q = p(60.0, 60.0, 1.0);
        let mut it = Multipliers::new(&q);
        let mut last = f64::NEG_INFINITY;
        for _ in 0..10_000 {
            let (_, ln, sign) = it.next_log();
            assert_eq!(sign, 1.0);
            assert!(ln.is_finite() && ln >= last);
            last = ln;
        }
        // ln B_10000, mpmath at 40 digits
        let reference = 758.901_478_056_910_5;
        assert!((last - reference).abs() < 1e-9 * reference, "{last}");
        assert_eq!(hyper_coefficient(&q, 10_000).unwrap(), f64::INFINITY);
    }

    #[test]
    fn oracle_rejects_divergent_regime() {
        let q = p(1.0, 1.0, 4.0);
        let e = worst_case_t(
            &ClassSpec::Ucv,
            &SourceSpec::SelfFunction,
            &q,
            &EvalConfig::default(),
        );
        assert!(matches!(e, Err(Error::PoleProximity { .. })));
    }
}
