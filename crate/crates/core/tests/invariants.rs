//! Property tests over randomly drawn admissible parameters.

use clausen_cert::certificate::{cross_validate, evaluate, OracleStatus, TheoremId, Verdict};
use clausen_cert::lemma::{
    driver_johnston_lhs, driver_johnston_rhs, lemma_part4_closed, lemma_sum_brute, part4_constant,
    LemmaPart, Part4Form,
};
use clausen_cert::operator::{apply_operator, hyper_coefficient, Multipliers, OperatorParams};
use clausen_cert::specfun::{
    clausen_weighted_sum, gauss_2f1_at_minus_one, gauss_2f1_at_minus_one_direct, pochhammer,
};
use clausen_cert::summation::TermRatio;
use clausen_cert::EvalConfig;
use proptest::prelude::*;

fn cfg() -> EvalConfig {
    EvalConfig::default()
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_is_symmetric(a in 0.0f64..4.0, b in 0.0f64..4.0, c in 0.05f64..6.0) {
        let x = gauss_2f1_at_minus_one(a, b, c, &cfg()).unwrap().value;
        let y = gauss_2f1_at_minus_one(b, a, c, &cfg()).unwrap().value;
        prop_assert!(close(x, y, 1e-12), "{x} vs {y}");
    }

    #[test]
    fn leibniz_bracket_contains_transformed_value(a in 0.05f64..2.0, b in 0.05f64..2.0, m in 1.0f64..4.0) {
        let c = a + b + m;
        let direct = gauss_2f1_at_minus_one_direct(a, b, c, &cfg()).unwrap();
        // Slowly decaying cases stop at the term cap, but the last two
        // partial sums still bracket the limit.
        prop_assert!(direct.series.terms_used > direct.monotone_from + 1);
        let v = gauss_2f1_at_minus_one(a, b, c, &cfg()).unwrap().value;
        let (lo, hi) = if direct.bracket.0 < direct.bracket.1 { direct.bracket } else { (direct.bracket.1, direct.bracket.0) };
        let slack = 1e-14 * v.abs().max(1.0);
        prop_assert!(lo - slack <= v && v <= hi + slack, "{v} outside [{lo}, {hi}]");
    }

    #[test]
    fn driver_johnston(a in 0.05f64..3.0, b in 0.05f64..3.0, m in 0.25f64..4.0) {
        let c = a + b + m;
        let lhs = driver_johnston_lhs(a, b, c, &cfg()).unwrap();
        let rhs = driver_johnston_rhs(a, b, c, &cfg()).unwrap();
        prop_assert!(lhs.converged);
        prop_assert!(close(lhs.value, rhs, 1e-8), "{} vs {rhs}", lhs.value);
    }

    #[test]
    fn part_dominance(a in 0.05f64..2.5, b in 0.05f64..2.5, m in 0.25f64..3.0) {
        let c = a + b + 3.0 + m;
        let s: Vec<f64> = [LemmaPart::One, LemmaPart::Two, LemmaPart::Three]
            .iter()
            .map(|&p| lemma_sum_brute(p, a, b, c, &cfg()).unwrap().value)
            .collect();
        prop_assert!(1.0 <= s[0] && s[0] <= s[1] && s[1] <= s[2], "{s:?}");
    }

    #[test]
    fn part2_expansion(a in 0.05f64..2.5, b in 0.05f64..2.5, m in 0.25f64..3.0) {
        let c = a + b + 2.0 + m;
        let w = |f: fn(f64) -> f64, d| clausen_weighted_sum(a, b, c, move |n| f(n as f64), d, &cfg()).unwrap().value;
        let whole = lemma_sum_brute(LemmaPart::Two, a, b, c, &cfg()).unwrap().value;
        let pieces = w(|n| n * (n - 1.0), 2) + 3.0 * w(|n| n, 1) + w(|_| 1.0, 0);
        prop_assert!(close(whole, pieces, 1e-10), "{whole} vs {pieces}");
    }

    #[test]
    fn part4_forms_agree(a in 0.1f64..3.0, b in 0.1f64..3.0, m in 0.25f64..3.0) {
        prop_assume!((a - 1.0).abs() > 0.05 && (b - 1.0).abs() > 0.05 && (b - 2.0).abs() > 0.05);
        let c = (a + 1.0).max(a + b - 1.0) + m;
        let s = lemma_part4_closed(Part4Form::Statement, a, b, c, &cfg()).unwrap();
        let p = lemma_part4_closed(Part4Form::Proof, a, b, c, &cfg()).unwrap();
        // Both constants are the same rational function. Their rounding
        // differs, most visibly in `b - 1` formed as `(b - 2) + 1`.
        let cond = 1.0 + 1.0 / (b - 1.0).abs() + 1.0 / (b - 2.0).abs();
        let scale = part4_constant(Part4Form::Proof, a, b, c).abs().max(1.0) * cond;
        prop_assert!((s - p).abs() <= 8.0 * f64::EPSILON * scale, "{s} vs {p}");
    }

    #[test]
    fn upper_parameter_order_is_irrelevant(a in 0.01f64..5.0, b in 0.01f64..5.0, c in 0.01f64..5.0) {
        let fwd = TermRatio::new(vec![a, b / 2.0, (b + 1.0) / 2.0], vec![c / 2.0, (c + 1.0) / 2.0, 1.0], 1.0);
        let rev = TermRatio::new(vec![(b + 1.0) / 2.0, b / 2.0, a], vec![1.0, (c + 1.0) / 2.0, c / 2.0], 1.0);
        for n in 0..50 {
            prop_assert_eq!(fwd.at(n).to_bits(), rev.at(n).to_bits());
        }
    }

    #[test]
    fn multipliers_positive_and_normalized(a in 0.01f64..5.0, b in 0.01f64..5.0, c in 0.01f64..5.0) {
        let p = OperatorParams::new(a, b, c).unwrap();
        let mut it = Multipliers::new(&p);
        prop_assert_eq!(it.next_value(), (1, 1.0));
        for _ in 0..200 {
            let (_, ln, sign) = it.next_log();
            prop_assert!(ln.is_finite() && sign == 1.0);
        }
    }

    #[test]
    fn collapse_identity(a in 0.01f64..4.0, c in 0.01f64..6.0, n in 1usize..31) {
        let p = OperatorParams::new(a, c, c).unwrap();
        let bn = hyper_coefficient(&p, n).unwrap();
        let fact: f64 = (1..n).map(|k| k as f64).product();
        let want = pochhammer(a, n - 1);
        prop_assert!(close(bn * fact, want, 1e-12) || (bn * fact - want).abs() <= 1e-12 * want.abs(), "{} vs {want}", bn * fact);
    }

    #[test]
    fn operator_is_coefficientwise(a in 0.1f64..3.0, b in 0.1f64..3.0, c in 0.1f64..4.0,
                                   f in prop::collection::vec(-3.0f64..3.0, 1..40)) {
        let p = OperatorParams::new(a, b, c).unwrap();
        let mut coeffs = vec![1.0];
        coeffs.extend(f);
        let img = apply_operator(&p, &coeffs, coeffs.len()).unwrap();
        for (n, &an) in coeffs.iter().enumerate() {
            prop_assert_eq!(img.get(n + 1).unwrap(), hyper_coefficient(&p, n + 1).unwrap() * an);
        }
    }

    #[test]
    fn gating_and_soundness(idx in 0usize..12, a in 0.05f64..3.0, b in 0.05f64..3.0, m in -0.5f64..5.0,
                            lambda in 0.01f64..=1.0, beta in 0.0f64..0.99) {
        let id = TheoremId::ALL[idx];
        let c = a + b + m;
        prop_assume!(c > 0.0);
        let p = OperatorParams::new(a, b, c).unwrap();
        let cert = evaluate(id, &p, id.needs_lambda().then_some(lambda), id.needs_beta().then_some(beta), &cfg()).unwrap();
        let gated = cert.preconditions.iter().any(|p| !p.pass);
        prop_assert_eq!(gated, cert.verdict == Verdict::PreconditionViolated);
        if gated {
            prop_assert!(cert.lhs.is_none() && cert.rhs.is_none() && cert.margin.is_none());
        }
        let checked = cross_validate(&cert, &cfg());
        if let Some(check) = checked.oracle_check {
            if id != TheoremId::T5_2 {
                prop_assert!(!matches!(check.status, OracleStatus::Violation { .. }), "{id} at ({a}, {b}, {c}): {:?}", checked.notes);
            }
        }
        if let Some(alt) = checked.proof_sign {
            prop_assert_ne!(alt.consistent, Some(false));
        }
    }

    #[test]
    fn closed_forms_track_the_weighted_sum(a in 0.05f64..3.0, b in 0.05f64..3.0, m in 0.3f64..5.0,
                                           lambda in 0.01f64..=1.0, beta in 0.0f64..0.99) {
        // Where the derivation is an equality the oracle is an affine image
        // of the certificate left-hand side.
        let c = a + b + 1.0 + m;
        let p = OperatorParams::new(a, b, c).unwrap();
        let t21 = cross_validate(&evaluate(TheoremId::T2_1, &p, Some(lambda), None, &cfg()).unwrap(), &cfg());
        prop_assert!(close(t21.oracle_t.unwrap().value, t21.lhs.unwrap() - lambda, 1e-8));
        let t51 = cross_validate(&evaluate(TheoremId::T5_1, &p, None, None, &cfg()).unwrap(), &cfg());
        prop_assert!(close(t51.oracle_t.unwrap().value, t51.lhs.unwrap() - 1.0, 1e-8));
        prop_assume!((a - 1.0).abs() > 0.05 && (b - 1.0).abs() > 0.05 && (b - 2.0).abs() > 0.05);
        let t22 = cross_validate(&evaluate(TheoremId::T2_2, &p, Some(lambda), Some(beta), &cfg()).unwrap(), &cfg());
        let d = (c - 1.0) * (c - 2.0) / ((a - 1.0) * (b - 1.0) * (b - 2.0));
        let affine = 2.0 * (1.0 - beta) * (t22.lhs.unwrap() - (lambda - 1.0) * d - lambda);
        let scale = 2.0 * (1.0 - beta) * (1.0 + d.abs());
        prop_assert!((t22.oracle_t.unwrap().value - affine).abs() <= 1e-8 * scale.max(1.0));
    }
}

#[test]
fn margin_tends_to_grow_with_c() {
    // Not a theorem: logged for inspection, only gross failure is fatal.
    let cfg = cfg();
    let mut rays = 0;
    let mut monotone = 0;
    for (i, id) in TheoremId::ALL.into_iter().enumerate() {
        for j in 0..8 {
            let (a, b) = (0.2 + 0.31 * j as f64, 0.15 + 0.23 * ((i + j) % 9) as f64);
            let (lambda, beta) = (
                id.needs_lambda().then_some(0.5 + 0.05 * j as f64),
                id.needs_beta().then_some(0.1 * j as f64),
            );
            let margins: Vec<f64> = (0..40)
                .map(|k| a + b + 0.1 + 0.25 * k as f64)
                .filter_map(|c| {
                    let cert = evaluate(
                        id,
                        &OperatorParams::new(a, b, c).unwrap(),
                        lambda,
                        beta,
                        &cfg,
                    )
                    .unwrap();
                    cert.margin
                        .filter(|_| {
                            cert.verdict == Verdict::Holds || cert.verdict == Verdict::Fails
                        })
                        .map(|m| (m, cert.verdict))
                })
                .skip_while(|&(_, v)| v != Verdict::Holds)
                .map(|(m, _)| m)
                .collect();
            if margins.is_empty() {
                continue;
            }
            rays += 1;
            if margins
                .windows(2)
                .all(|w| w[1] >= w[0] - 1e-12 * w[0].abs().max(1.0))
            {
                monotone += 1;
            } else {
                println!("non-monotone margin: {id} a={a} b={b} lambda={lambda:?} beta={beta:?}");
            }
        }
    }
    println!("monotone rays: {monotone}/{rays}");
    assert!(rays > 0 && monotone * 2 >= rays);
}
