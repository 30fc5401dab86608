// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Embedding a classical sum of sigmoids in the linear regime of an output perceptron.

use qperceptron::network::{all_inputs, build_universal_approximator, forward, ClassicalSum, NetworkMode};
use qperceptron::ActivationKind;

fn main() -> qperceptron::Result<()> {
    let kind = ActivationKind::Algebraic;
    let classical = ClassicalSum {
        alpha: vec![0.7, -0.4, 0.9],
        w: vec![vec![1.2, -0.5], vec![0.3, 0.8], vec![-1.0, 0.6]],
        theta: vec![0.2, -0.3, 0.1],
    };
    for lambda in [0.04, 0.02, 0.01] {
        let ua = build_universal_approximator(&classical, 2, lambda, kind)?;
        let mut worst: f64 = 0.0;
        for bits in all_inputs(2) {
            let p = forward(&ua.net, &bits, &NetworkMode::Ideal)?.1;
            worst = worst.max((ua.readout(p) - classical.eval(kind, &bits)?).abs());
        }
        println!("lambda {lambda}: max readout error {worst:.3e}");
    }
    Ok(())
}
