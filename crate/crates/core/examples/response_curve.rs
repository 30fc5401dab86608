// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-perceptron response after an adiabatic passage, compared with the
//! algebraic sigmoid, for an ideal and a degraded control ramp.

use qperceptron::control::{default_faquad, perturbed_schedule};
use qperceptron::dynamics::{response_curve, symmetric_grid};
use qperceptron::ActivationKind;

fn main() -> qperceptron::Result<()> {
    let faq = default_faquad(100.0, 1.0, 10.0)?;
    let degraded = perturbed_schedule(&faq, 0.5)?;
    let grid = symmetric_grid(5.0, 11);
    let ideal = response_curve(&faq, &grid)?;
    let flat = response_curve(&degraded, &grid)?;
    println!("{:>6} {:>10} {:>10} {:>10}", "x", "g(x)", "FAQUAD", "eps=0.5");
    for ((x, p), (_, q)) in ideal.iter().zip(&flat) {
        println!("{x:>6} {:>10.5} {p:>10.5} {q:>10.5}", ActivationKind::Algebraic.f(*x)?);
    }
    Ok(())
}
