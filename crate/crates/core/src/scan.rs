//! Parameter-grid sweeps over a theorem's certificate.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::certificate::{cross_validate, evaluate, TheoremId, Verdict};
use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::operator::OperatorParams;

pub const CSV_HEADER: &str = "theorem,a,b,c,lambda,beta,lhs,rhs,margin,verdict,oracle_T";

/// Upper limit on the number of grid points in one request.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamName {
    A,
    B,
    C,
    Lambda,
    Beta,
}

impl ParamName {
    pub const ALL: [ParamName; 5] = [
        ParamName::A,
        ParamName::B,
        ParamName::C,
        ParamName::Lambda,
        ParamName::Beta,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParamName::A => "a",
            ParamName::B => "b",
            ParamName::C => "c",
            ParamName::Lambda => "lambda",
            ParamName::Beta => "beta",
        }
    }

    /// Parameters the theorem takes, in column order.
    pub fn required_by(id: TheoremId) -> Vec<ParamName> {
        let mut v = vec![ParamName::A, ParamName::B, ParamName::C];
        if id.needs_lambda() {
            v.push(ParamName::Lambda);
        }
        if id.needs_beta() {
            v.push(ParamName::Beta);
        }
        v
    }

    fn check(self, value: f64) -> Result<()> {
        let ok = match self {
            ParamName::A | ParamName::B | ParamName::C => value > 0.0 && value.is_finite(),
            ParamName::Lambda => value > 0.0 && value <= 1.0,
            ParamName::Beta => (0.0..1.0).contains(&value),
        };
        let reason = match self {
            ParamName::A | ParamName::B | ParamName::C => "must be positive and finite",
            ParamName::Lambda => "must lie in (0, 1]",
            ParamName::Beta => "must lie in [0, 1)",
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(self.as_str(), value, reason))
        }
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "jsonl" | "json-lines" | "ndjson" => Ok(OutputFormat::Jsonl),
            _ => Err(Error::Config(format!(
                "unknown output format {s:?} (expected csv or jsonl)"
            ))),
        }
    }
}

/// A closed range `start, start + step, ...` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub name: ParamName,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn len(&self) -> usize {
        // Tolerate `stop` landing a few ulps short of the last step.
        ((self.stop - self.start) / self.step * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `i`-th value, computed directly rather than by accumulation.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.len()
            && ((self.start + i as f64 * self.step) - self.stop).abs() <= 1e-9 * self.step
        {
            return self.stop;
        }
        self.start + i as f64 * self.step
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRequest {
    pub theorem: TheoremId,
    pub fixed: BTreeMap<ParamName, f64>,
    /// Swept dimensions, outermost first.
    pub swept: Vec<Sweep>,
    pub format: OutputFormat,
}

impl ScanRequest {
    pub fn validate(&self) -> Result<()> {
        if self.swept.is_empty() || self.swept.len() > 3 {
            return Err(Error::Config(format!(
                "a scan sweeps 1 to 3 parameters, got {}",
                self.swept.len()
            )));
        }
        let required = ParamName::required_by(self.theorem);
        let mut seen = BTreeMap::new();
        for name in self
            .fixed
            .keys()
            .copied()
            .chain(self.swept.iter().map(|s| s.name))
        {
            if !required.contains(&name) {
                return Err(Error::Config(format!(
                    "{} does not take parameter {name}",
                    self.theorem
                )));
            }
            if seen.insert(name, ()).is_some() {
                return Err(Error::Config(format!(
                    "parameter {name} is given more than once"
                )));
            }
        }
        if let Some(missing) = required.iter().find(|n| !seen.contains_key(n)) {
            return Err(Error::Config(format!(
                "{} needs parameter {missing}",
                self.theorem
            )));
        }
        for (&name, &v) in &self.fixed {
            name.check(v)?;
        }
        let mut points = 1usize;
        for s in &self.swept {
            if !(s.step > 0.0) || !s.step.is_finite() {
                return Err(Error::domain("step", s.step, "must be positive"));
            }
            if !(s.start < s.stop) {
                return Err(Error::Config(format!(
                    "sweep of {} needs start < stop",
                    s.name
                )));
            }
            s.name.check(s.start)?;
            s.name.check(s.stop)?;
            points = points.saturating_mul(s.len());
        }
        if points > MAX_POINTS {
            return Err(Error::Config(format!(
                "{points} grid points exceed the limit of {MAX_POINTS}"
            )));
        }
        Ok(())
    }

    /// Grid points in lexicographic order of the swept dimensions.
    pub fn points(&self) -> Vec<BTreeMap<ParamName, f64>> {
        let dims: Vec<usize> = self.swept.iter().map(Sweep::len).collect();
        let total: usize = dims.iter().product();
        (0..total)
            .map(|mut flat| {
                let mut point = self.fixed.clone();
                for (s, &len) in self.swept.iter().zip(&dims).rev() {
                    point.insert(s.name, s.value(flat % len));
                    flat /= len;
                }
                point
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub theorem: TheoremId,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub verdict: Verdict,
    #[serde(rename = "oracle_T")]
    pub oracle_t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
}

fn evaluate_point(id: TheoremId, point: &BTreeMap<ParamName, f64>, cfg: &EvalConfig) -> ScanRow {
    let get = |n| point.get(&n).copied();
    let (a, b, c) = (
        point[&ParamName::A],
        point[&ParamName::B],
        point[&ParamName::C],
    );
    let (lambda, beta) = (get(ParamName::Lambda), get(ParamName::Beta));
    let mut row = ScanRow {
        theorem: id,
        a,
        b,
        c,
        lambda,
        beta,
        lhs: None,
        rhs: None,
        margin: None,
        verdict: Verdict::Inconclusive,
        oracle_t: None,
    };
    let cert = OperatorParams::new(a, b, c).and_then(|p| evaluate(id, &p, lambda, beta, cfg));
    if let Ok(cert) = cert {
        let cert = cross_validate(&cert, cfg);
        row.lambda = cert.lambda.filter(|_| lambda.is_some());
        row.lhs = cert.lhs;
        row.rhs = cert.rhs;
        row.margin = cert.margin;
        row.verdict = cert.verdict;
        row.oracle_t = cert.oracle_t.map(|o| o.value);
    }
    row
}

/// Evaluates every grid point, on `workers` threads when given (otherwise
/// the global pool). Row order does not depend on the thread count.
pub fn run_scan(req: &ScanRequest, cfg: &EvalConfig, workers: Option<usize>) -> Result<ScanResult> {
    req.validate()?;
    cfg.validate()?;
    let points = req.points();
    let work = || {
        points
            .par_iter()
            .map(|p| evaluate_point(req.theorem, p, cfg))
            .collect::<Vec<_>>()
    };
    let rows = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(ScanResult { rows })
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

impl ScanResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.theorem,
                format_float(r.a),
                format_float(r.b),
                format_float(r.c),
                opt(r.lambda),
                opt(r.beta),
                opt(r.lhs),
                opt(r.rhs),
                opt(r.margin),
                r.verdict,
                opt(r.oracle_t)
            );
        }
        out
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&serde_json::to_string(r).expect("rows serialize"));
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Jsonl => self.to_jsonl(),
        }
    }
}
