//! Special-function kernel: log-Gamma, Pochhammer products, Gauss 2F1 at
//! z = -1 and Clausen 3F2 at z = 1.
//!
//! Every argument here is real. Complex parameters are reduced to moduli by
//! the certificate layer before they reach this module.

use crate::config::EvalConfig;
use crate::error::{Error, Result};
use crate::summation::{sum_algebraic, sum_geometric, CompensatedSum, SeriesValue, TermRatio};

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("x", x, "log_gamma requires a finite x > 0"));
    }
    Ok(libm::lgamma(x))
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`, `(x)_0 = 1`.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |p, k| p * (x + k as f64))
}

/// `Γ(c) Γ(c-a-b) / (Γ(c-a) Γ(c-b))`, the Gamma ratio in front of the
/// Driver–Johnston summation.
pub fn gamma_prefactor(a: f64, b: f64, c: f64, cfg: &EvalConfig) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(Error::domain("a", a, "must be >= 0"));
    }
    if !(b >= 0.0) {
        return Err(Error::domain("b", b, "must be >= 0"));
    }
    let margin = c - a - b;
    if !(margin > cfg.margin) {
        return Err(Error::PoleProximity {
            condition: "c - a - b".into(),
            margin,
            required: cfg.margin,
        });
    }
    let num = log_gamma(c)? + log_gamma(c - a - b)?;
    let den = log_gamma(c - a)? + log_gamma(c - b)?;
    Ok((num - den).exp())
}

/// `prod Γ(num_i) / prod Γ(den_i)` for arguments that may be negative,
/// provided none lies within `margin` of a pole.
pub(crate) fn signed_gamma_ratio(num: &[f64], den: &[f64], cfg: &EvalConfig) -> Result<f64> {
    let mut log = 0.0;
    let mut sign = 1.0;
    for (&x, s) in num
        .iter()
        .map(|x| (x, 1.0))
        .chain(den.iter().map(|x| (x, -1.0)))
    {
        if x <= 0.0 {
            let dist = (x - x.round()).abs();
            if !(dist > cfg.margin) {
                return Err(Error::PoleProximity {
                    condition: format!("Gamma argument {x} near a non-positive integer"),
                    margin: dist,
                    required: cfg.margin,
                });
            }
        }
        let (lg, sg) = libm::lgamma_r(x);
        log += s * lg;
        if sg < 0 {
            sign = -sign;
        }
    }
    Ok(sign * log.exp())
}

/// Gauss `2F1(a, b; c; -1)`.
///
/// The value is computed from the Euler transform of the alternating
/// series, `2F1(a, b; c; -1) = 2^-a 2F1(a, c-b; c; 1/2)`, whose terms decay
/// geometrically and whose tail is bounded by a ratio majorant. Where the
/// alternating series converges the two agree (Abel's theorem); where it
/// does not, the transform supplies the analytic continuation that the
/// Gamma-ratio summation formulas rely on.
///
/// The roles of `a` and `b` are chosen so that the transformed terms keep a
/// constant sign whenever possible; the choice depends only on the unordered
/// pair, so the function is exactly symmetric in `a`, `b`.
pub fn gauss_2f1_at_minus_one(a: f64, b: f64, c: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !v.is_finite() {
            return Err(Error::domain(name, v, "must be finite"));
        }
    }
    if !(c > cfg.margin) {
        return Err(Error::PoleProximity {
            condition: "lower parameter c > 0".into(),
            margin: c,
            required: cfg.margin,
        });
    }
    if a == 0.0 || b == 0.0 {
        return Ok(SeriesValue::exact(1.0));
    }
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let quality = |p: f64, q: f64| p.min(c - q);
    let (pulled, other) = if quality(lo, hi) >= quality(hi, lo) {
        (lo, hi)
    } else {
        (hi, lo)
    };
    let ratio = TermRatio::new(vec![pulled, c - other], vec![c, 1.0], 0.5);
    Ok(sum_geometric(&ratio, (-pulled).exp2(), cfg))
}

/// Direct summation of the alternating series `sum (a)_n (b)_n / ((c)_n n!) (-1)^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingSum {
    pub series: SeriesValue,
    /// The last two partial sums; once term magnitudes decrease they bracket
    /// the limit.
    pub bracket: (f64, f64),
    /// First index from which term magnitudes are non-increasing.
    pub monotone_from: usize,
}

/// Term-by-term alternating summation of `2F1(a, b; c; -1)` with the
/// Leibniz bracket as stopping rule. Requires `a, b >= 0`, `c > 0` and
/// `c - a - b > -1` (conditional convergence); practical only when the
/// terms decay quickly.
pub fn gauss_2f1_at_minus_one_direct(
    a: f64,
    b: f64,
    c: f64,
    cfg: &EvalConfig,
) -> Result<AlternatingSum> {
    if !(a >= 0.0) {
        return Err(Error::domain("a", a, "must be >= 0"));
    }
    if !(b >= 0.0) {
        return Err(Error::domain("b", b, "must be >= 0"));
    }
    if !(c > cfg.margin) {
        return Err(Error::domain("c", c, "must be > 0"));
    }
    let slope = a + b - c - 1.0;
    if !(slope < -cfg.margin) {
        return Err(Error::PoleProximity {
            condition: "c - a - b > -1".into(),
            margin: -slope,
            required: cfg.margin,
        });
    }
    // |t_{m+1}| <= |t_m| iff m (a + b - c - 1) + ab - c <= 0.
    let monotone_from = ((a * b - c) / -slope).ceil().max(0.0) as usize;

    let mut acc = CompensatedSum::new();
    let mut mag = 1.0_f64;
    acc.add(1.0);
    let mut prev = 0.0;
    let mut n = 0usize;
    loop {
        let next = mag * (n as f64 + a) * (n as f64 + b) / ((n as f64 + c) * (n as f64 + 1.0));
        let value = acc.value();
        if n >= monotone_from && (next <= 0.5 * cfg.threshold(value) || next == 0.0) {
            return Ok(AlternatingSum {
                series: SeriesValue {
                    value,
                    terms_used: n + 1,
                    tail_bound: next,
                    converged: true,
                },
                bracket: (prev, value),
                monotone_from,
            });
        }
        if n + 1 >= cfg.max_terms {
            return Ok(AlternatingSum {
                series: SeriesValue {
                    value,
                    terms_used: n + 1,
                    tail_bound: if n >= monotone_from {
                        next
                    } else {
                        f64::INFINITY
                    },
                    converged: false,
                },
                bracket: (prev, value),
                monotone_from,
            });
        }
        prev = value;
        mag = next;
        n += 1;
        acc.add(if n.is_multiple_of(2) { mag } else { -mag });
    }
}

/// Terms of `3F2(a, b/2, (b+1)/2; c/2, (c+1)/2; 1)`.
pub(crate) fn clausen_ratio(a: f64, b: f64, c: f64) -> TermRatio {
    TermRatio::new(
        vec![a, 0.5 * b, 0.5 * (b + 1.0)],
        vec![0.5 * c, 0.5 * (c + 1.0), 1.0],
        1.0,
    )
}

fn check_clausen_args(a: f64, b: f64, c: f64, shift: f64, cfg: &EvalConfig) -> Result<()> {
    if !(a >= 0.0) {
        return Err(Error::domain("a", a, "must be >= 0"));
    }
    if !(b >= 0.0) {
        return Err(Error::domain("b", b, "must be >= 0"));
    }
    let margin = c - a - b - shift;
    if !(margin > cfg.margin) {
        let condition = match shift {
            0.0 => "c - a - b".to_string(),
            s if s < 0.0 => format!("c - a - b + {}", -s),
            s => format!("c - a - b - {s}"),
        };
        return Err(Error::PoleProximity {
            condition,
            margin,
            required: cfg.margin,
        });
    }
    Ok(())
}

/// Clausen `3F2(a, b/2, (b+1)/2; c/2, (c+1)/2; 1)` by direct summation.
pub fn clausen_3f2_at_one(a: f64, b: f64, c: f64, cfg: &EvalConfig) -> Result<SeriesValue> {
    clausen_weighted_sum(a, b, c, |_| 1.0, 0, cfg)
}

/// `sum_n w(n) t_n` with `t_n` the Clausen 3F2 terms at `z = 1` and `w` a
/// weight growing like `n^degree` (negative degrees allowed).
pub fn clausen_weighted_sum<W>(
    a: f64,
    b: f64,
    c: f64,
    weight: W,
    degree: i32,
    cfg: &EvalConfig,
) -> Result<SeriesValue>
where
    W: Fn(usize) -> f64,
{
    check_clausen_args(a, b, c, f64::from(degree), cfg)?;
    let decay = c + 1.0 - a - b - f64::from(degree);
    if a == 0.0 || b == 0.0 {
        return Ok(SeriesValue::exact(weight(0)));
    }
    sum_algebraic(&clausen_ratio(a, b, c), weight, decay, cfg)
}
