// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Forward pass of a layered network, checked against the classical mixture of
//! hidden configurations, and a JSON round trip of its parameters.

use qperceptron::network::{all_inputs, classical_mixture_oracle, forward, NetworkMode, NetworkSpec};
use qperceptron::ActivationKind;

fn main() -> qperceptron::Result<()> {
    let mut net = NetworkSpec::layered(2, &[2, 1], ActivationKind::Algebraic)?;
    net.j[0][0] = 2.0;
    net.j[0][1] = 2.0;
    net.b[0] = 1.5;
    net.j[1][0] = -2.0;
    net.j[1][1] = -2.0;
    net.b[1] = 1.5;
    net.j[2][2] = -3.0;
    net.j[2][3] = -3.0;
    net.b[2] = 3.0;
    for bits in all_inputs(2) {
        let (_, p) = forward(&net, &bits, &NetworkMode::Ideal)?;
        println!("{bits}: p_out = {p:.6}, mixture = {:.6}", classical_mixture_oracle(&net, &bits)?);
    }
    let json = net.to_json()?;
    assert_eq!(NetworkSpec::from_json(&json)?, net);
    println!("{json}");
    Ok(())
}
