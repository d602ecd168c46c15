//! Grid verification of the lemma closed forms against brute-force sums.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::EvalConfig;
use crate::error::Error;
use crate::lemma::{
    driver_johnston_lhs, driver_johnston_rhs, lemma_part4_closed, lemma_preconditions,
    lemma_sum_brute, lemma_sum_closed, LemmaPart, Part4Form,
};

/// Minimum distance from every excluded boundary in default grids.
pub const GRID_MARGIN: f64 = 0.25;

pub const DEFAULT_SEED: u64 = 0x05ee_d2f1;

/// Which identity a grid is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    DriverJohnston,
    Lemma(LemmaPart),
}

fn admissible(id: Identity, a: f64, b: f64, c: f64, m: f64) -> bool {
    match id {
        Identity::DriverJohnston => c - a - b >= m,
        Identity::Lemma(LemmaPart::Four) => {
            (a - 1.0).abs() >= m
                && (b - 1.0).abs() >= m
                && (b - 2.0).abs() >= m
                && c - (a + 1.0).max(a + b - 1.0) >= m
        }
        Identity::Lemma(p) => c - a - b - f64::from(p.index()) >= m,
    }
}

/// Latin-hypercube sample of `n` admissible `(a, b, c)` triples with
/// `a, b` in `[0.1, 3]` and the binding margin in `[0.25, 4]`.
pub fn stratified_grid(id: Identity, n: usize, seed: u64) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perm = |rng: &mut ChaCha8Rng| {
        let mut p: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            p.swap(i, rng.gen_range(0..=i));
        }
        p
    };
    let (pa, pb, pm) = (perm(&mut rng), perm(&mut rng), perm(&mut rng));
    let cell = |k: usize, rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        lo + (k as f64 + rng.gen::<f64>()) * (hi - lo) / n as f64
    };
    (0..n)
        .map(|i| {
            let mut a = cell(pa[i], &mut rng, 0.1, 3.0);
            let mut b = cell(pb[i], &mut rng, 0.1, 3.0);
            let m = cell(pm[i], &mut rng, GRID_MARGIN, 4.0);
            let base = |a: f64, b: f64| match id {
                Identity::DriverJohnston => a + b,
                Identity::Lemma(LemmaPart::Four) => (a + 1.0).max(a + b - 1.0),
                Identity::Lemma(p) => a + b + f64::from(p.index()),
            };
            // Strata that straddle an excluded value are redrawn uniformly.
            while !admissible(id, a, b, base(a, b) + m, GRID_MARGIN) {
                a = rng.gen_range(0.1..3.0);
                b = rng.gen_range(0.1..3.0);
            }
            (a, b, base(a, b) + m)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub closed: Option<f64>,
    /// Part 4 only: the closed form with the alternative constant term.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_proof_form: Option<f64>,
    pub brute: Option<f64>,
    pub tail_bound: Option<f64>,
    pub rel_err: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub identity: String,
    pub tolerance: f64,
    pub points: Vec<PointReport>,
    pub evaluated: usize,
    pub skipped: usize,
    pub worst: Option<PointReport>,
    pub all_pass: bool,
}

fn skipped(a: f64, b: f64, c: f64, why: String) -> PointReport {
    PointReport {
        a,
        b,
        c,
        closed: None,
        closed_proof_form: None,
        brute: None,
        tail_bound: None,
        rel_err: None,
        pass: true,
        skipped: Some(why),
    }
}

fn verify_point(
    id: Identity,
    (a, b, c): (f64, f64, f64),
    tol: f64,
    cfg: &EvalConfig,
) -> PointReport {
    let pre = match id {
        Identity::Lemma(p) => lemma_preconditions(p, a, b, c, cfg),
        Identity::DriverJohnston if !(c - a - b > cfg.margin) => Err(Error::PoleProximity {
            condition: "c - a - b".into(),
            margin: c - a - b,
            required: cfg.margin,
        }),
        Identity::DriverJohnston => Ok(()),
    };
    if let Err(e) = pre {
        return skipped(a, b, c, e.to_string());
    }
    let pair = match id {
        Identity::DriverJohnston => driver_johnston_rhs(a, b, c, cfg)
            .and_then(|cl| Ok((cl, None, driver_johnston_lhs(a, b, c, cfg)?))),
        Identity::Lemma(LemmaPart::Four) => lemma_part4_closed(Part4Form::Statement, a, b, c, cfg)
            .and_then(|cl| {
                let alt = lemma_part4_closed(Part4Form::Proof, a, b, c, cfg)?;
                Ok((
                    cl,
                    Some(alt),
                    lemma_sum_brute(LemmaPart::Four, a, b, c, cfg)?,
                ))
            }),
        Identity::Lemma(p) => lemma_sum_closed(p, a, b, c, cfg)
            .and_then(|cl| Ok((cl, None, lemma_sum_brute(p, a, b, c, cfg)?))),
    };
    match pair {
        Ok((closed, alt, brute)) => {
            let rel = (closed - brute.value).abs() / closed.abs().max(1.0);
            PointReport {
                a,
                b,
                c,
                closed: Some(closed),
                closed_proof_form: alt,
                brute: Some(brute.value),
                tail_bound: Some(brute.tail_bound),
                rel_err: Some(rel),
                pass: rel <= tol && brute.converged,
                skipped: None,
            }
        }
        Err(e) => skipped(a, b, c, e.to_string()),
    }
}

/// Compares closed and brute-force values at each point. Inadmissible
/// points are skipped with a note rather than failing the run.
pub fn verify_identity(
    id: Identity,
    points: &[(f64, f64, f64)],
    tol: f64,
    cfg: &EvalConfig,
) -> VerifyReport {
    let points: Vec<PointReport> = points
        .iter()
        .map(|&p| verify_point(id, p, tol, cfg))
        .collect();
    let evaluated = points.iter().filter(|p| p.skipped.is_none()).count();
    let worst = points
        .iter()
        .filter(|p| p.rel_err.is_some())
        .max_by(|x, y| x.rel_err.partial_cmp(&y.rel_err).expect("finite errors"))
        .cloned();
    VerifyReport {
        identity: match id {
            Identity::DriverJohnston => "driver-johnston".to_string(),
            Identity::Lemma(p) => format!("lemma part {p}"),
        },
        tolerance: tol,
        all_pass: points.iter().all(|p| p.pass),
        skipped: points.len() - evaluated,
        evaluated,
        points,
        worst,
    }
}
