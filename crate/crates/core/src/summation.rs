//! Series summation machinery: compensated accumulation, hypergeometric
//! term ratios, and the two stopping rules used throughout the crate.
//!
//! * Geometrically convergent series stop on a ratio majorant: once every
//!   later term ratio is bounded by `rho < 1`, the tail after term `t_n`
//!   is at most `|t_n| rho / (1 - rho)`.
//! * Algebraically convergent series (terms `~ n^-s`, `s > 1`) are summed
//!   to a ladder of checkpoints `N0, 2 N0, 4 N0, ...` and the partial sums
//!   are extrapolated with Richardson elimination of the known tail powers
//!   `N^(1-s-j)`.

use serde::Serialize;

use crate::config::EvalConfig;
use crate::error::{Error, Result};

/// A numerically summed series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub terms_used: usize,
    /// Absolute bound (geometric series) or estimate (algebraic series) of
    /// the distance between `value` and the limit.
    pub tail_bound: f64,
    pub converged: bool,
}

impl SeriesValue {
    pub(crate) fn exact(value: f64) -> Self {
        SeriesValue {
            value,
            terms_used: 1,
            tail_bound: 0.0,
            converged: true,
        }
    }

    /// `factor * self`, with the tail scaled accordingly.
    pub fn scaled(self, factor: f64) -> Self {
        SeriesValue {
            value: self.value * factor,
            tail_bound: self.tail_bound * factor.abs(),
            ..self
        }
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Ratio `t_{n+1} / t_n = z * prod(n + u_i) / prod(n + l_i)` of a
/// hypergeometric term. The `n!` denominator is written explicitly as a
/// lower parameter equal to 1.
///
/// Parameters are kept sorted, so the product is formed in a canonical
/// order regardless of how the caller listed them.
#[derive(Debug, Clone, PartialEq)]
pub struct TermRatio {
    upper: Vec<f64>,
    lower: Vec<f64>,
    z: f64,
}

impl TermRatio {
    pub fn new(mut upper: Vec<f64>, mut lower: Vec<f64>, z: f64) -> Self {
        upper.sort_by(f64::total_cmp);
        lower.sort_by(f64::total_cmp);
        TermRatio { upper, lower, z }
    }

    #[inline]
    pub fn at(&self, n: usize) -> f64 {
        let m = n as f64;
        let num = self.upper.iter().fold(self.z, |p, u| p * (m + u));
        let den = self.lower.iter().fold(1.0, |p, l| p * (m + l));
        num / den
    }

    /// Largest parameter magnitude, used to size the extrapolation ladder.
    fn scale(&self) -> f64 {
        self.upper
            .iter()
            .chain(&self.lower)
            .fold(1.0_f64, |m, v| m.max(v.abs()))
    }

    /// Bound on `|ratio(m)|` valid for every `m >= n`, if one can be
    /// certified at `n`.
    ///
    /// Each factor `(m + u) / (m + l)` with `m + u >= 0` and `m + l > 0`
    /// moves monotonically toward 1, so its supremum over `m >= n` is
    /// `max(1, (n + u) / (n + l))`. Unequal parameter counts are handled by
    /// padding the short side with the factor `m`.
    fn majorant(&self, n: usize) -> Option<f64> {
        let m = n as f64;
        let k = self.upper.len().max(self.lower.len());
        let mut rho = self.z.abs();
        for i in 0..k {
            let u = self.upper.get(i).copied().unwrap_or(0.0);
            let l = self.lower.get(i).copied().unwrap_or(0.0);
            if m + u < 0.0 || m + l <= 0.0 {
                return None;
            }
            rho *= ((m + u) / (m + l)).max(1.0);
        }
        if self.upper.len() > self.lower.len() && n == 0 {
            return None;
        }
        Some(rho)
    }
}

/// Sums `prefactor * sum_n t_n` with `t_0 = 1` and ratios `ratio`, for a
/// series whose ratios tend to `|z| < 1`.
pub fn sum_geometric(ratio: &TermRatio, prefactor: f64, cfg: &EvalConfig) -> SeriesValue {
    let mut acc = CompensatedSum::new();
    let mut t = 1.0_f64;
    acc.add(t);
    let mut n = 0usize;
    let mut tail = f64::INFINITY;
    loop {
        if t == 0.0 {
            tail = 0.0;
            break;
        }
        if let Some(rho) = ratio.majorant(n) {
            if rho < 1.0 {
                tail = t.abs() * rho / (1.0 - rho);
                // Go to working precision; the series is cheap.
                let value = prefactor * acc.value();
                let target = (0.25 * cfg.threshold(value)).min(f64::EPSILON * value.abs());
                if tail * prefactor.abs() <= target.max(f64::MIN_POSITIVE) {
                    break;
                }
            }
        }
        if n + 1 >= cfg.max_terms {
            break;
        }
        t *= ratio.at(n);
        n += 1;
        acc.add(t);
    }
    let value = prefactor * acc.value();
    let tail_bound = tail * prefactor.abs();
    SeriesValue {
        value,
        terms_used: n + 1,
        tail_bound,
        converged: tail_bound.is_finite() && tail_bound <= cfg.threshold(value),
    }
}

/// Sums `sum_n weight(n) t_n` where `t_0 = 1`, `t_n` follows `ratio` with
/// `z = 1`, and the weighted terms decay like `n^-decay`.
pub fn sum_algebraic<W>(
    ratio: &TermRatio,
    weight: W,
    decay: f64,
    cfg: &EvalConfig,
) -> Result<SeriesValue>
where
    W: Fn(usize) -> f64,
{
    if !(decay > 1.0) || !decay.is_finite() {
        return Err(Error::domain(
            "decay",
            decay,
            "weighted series diverges (terms must decay faster than 1/n)",
        ));
    }
    let first_power = 1.0 - decay;

    let min_start = ((8.0 * ratio.scale()).ceil() as usize).max(64);
    let mut checkpoint = min_start.next_power_of_two();
    while checkpoint > cfg.max_terms && checkpoint > 16 {
        checkpoint /= 2;
    }

    let mut acc = CompensatedSum::new();
    let mut partials: Vec<f64> = Vec::new();
    let mut previous: Option<f64> = None;
    let mut t = 1.0_f64;
    let mut n = 0usize;
    let mut last_u = 0.0_f64;
    let mut best = (f64::NAN, f64::INFINITY);

    loop {
        let u = weight(n) * t;
        acc.add(u);
        last_u = if u != 0.0 { u } else { last_u };
        n += 1;

        if n == checkpoint {
            let s = acc.value();
            partials.push(s);

            // Plain truncation suffices when the tail is already negligible.
            let direct = 2.0 * u.abs() * n as f64 / (decay - 1.0);
            if direct <= 0.01 * cfg.threshold(s) {
                return Ok(SeriesValue {
                    value: s,
                    terms_used: n,
                    tail_bound: direct,
                    converged: true,
                });
            }

            if partials.len() >= 3 {
                let (v, e) = richardson(&partials, first_power);
                let agree = previous.map_or(f64::INFINITY, |p: f64| (p - v).abs());
                let err = e.max(agree);
                if err < best.1 || !best.0.is_finite() {
                    best = (v, err);
                }
                if err <= cfg.threshold(v) {
                    return Ok(SeriesValue {
                        value: v,
                        terms_used: n,
                        tail_bound: err,
                        converged: true,
                    });
                }
                previous = Some(v);
            }
            if checkpoint.saturating_mul(2) > cfg.max_terms {
                break;
            }
            checkpoint *= 2;
        }
        t *= ratio.at(n - 1);
    }

    if best.0.is_finite() {
        Ok(SeriesValue {
            value: best.0,
            terms_used: n,
            tail_bound: best.1,
            converged: false,
        })
    } else {
        let s = acc.value();
        Ok(SeriesValue {
            value: s,
            terms_used: n,
            tail_bound: 2.0 * last_u.abs() * n as f64 / (decay - 1.0),
            converged: false,
        })
    }
}

/// Richardson extrapolation of partial sums taken at `N0 * 2^i`, assuming
/// the tail expands in powers `N^(p0 - j)`, `j = 0, 1, 2, ...`.
///
/// Returns the most self-consistent diagonal entry and the size of its last
/// correction.
pub fn richardson(partials: &[f64], p0: f64) -> (f64, f64) {
    let mut col = partials.to_vec();
    let mut diag = vec![*partials.last().expect("at least one partial sum")];
    for j in 0..partials.len() - 1 {
        let f = (p0 - j as f64).exp2();
        col = col
            .windows(2)
            .map(|w| (w[1] - f * w[0]) / (1.0 - f))
            .collect();
        diag.push(*col.last().unwrap());
    }
    let mut best = (diag[0], f64::INFINITY);
    for j in 1..diag.len() {
        let e = (diag[j] - diag[j - 1]).abs();
        if e < best.1 {
            best = (diag[j], e);
        }
    }
    best
}
