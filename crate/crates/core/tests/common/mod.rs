//! Reference tables shared by several test targets.

#![allow(clippy::excessive_precision)]

/// `2F1(a, b; 1+a-b; -1)` from its gamma-function evaluation.
pub const KUMMER: [(f64, f64, f64); 20] = [
    (0.2, 0.11, 0.9842099185884577322),
    (0.35, 0.375, 0.90518483954010571515),
    (0.5, 0.7, 0.73678380350383772658),
    (0.65, 1.085, 0.41331526807634894489),
    (0.8, 1.53, -0.37836207186517977914),
    (0.95, 0.185, 0.92750872220691198292),
    (1.1, 0.6, 0.72979258447973361996),
    (1.25, 1.075, 0.45301735668340465034),
    (1.4, 1.61, 0.081006633617383476952),
    (1.55, 2.205, -0.47760178960293115564),
    (1.7, 0.26, 0.87498334818585871366),
    (1.85, 0.825, 0.58949729743460576056),
    (2.0, 1.45, 0.275),
    (2.15, 2.135, -0.025681152168339794983),
    (2.3, 2.88, -0.18429086367772421253),
    (2.45, 0.335, 0.82601225211759865204),
    (2.6, 1.05, 0.47710760291232481301),
    (2.75, 1.825, 0.16595911122348407143),
    (2.9, 2.66, -0.039326848532988741659),
    (3.05, 3.555, 0.011500941693087592659),
];
