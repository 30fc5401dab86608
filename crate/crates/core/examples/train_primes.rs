// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Trains a 3-bit prime classifier with one hidden layer of four perceptrons.

use qperceptron::network::NetworkSpec;
use qperceptron::training::{predict, prime_dataset, random_init, train, TrainConfig};
use qperceptron::ActivationKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qperceptron::Result<()> {
    let data = prime_dataset(3)?;
    let template = NetworkSpec::layered(3, &[4, 1], ActivationKind::Algebraic)?;
    let config = TrainConfig::default();
    let net0 = random_init(&template, config.init_scale, &mut ChaCha8Rng::seed_from_u64(config.seed));
    let report = train(&net0, &data, &config)?;
    println!("accuracy {} after {} iterations", report.accuracy, report.cost_trace.len() - 1);
    for ((x, y), p) in data.pairs.iter().zip(predict(&report.params, &data)?) {
        println!("{x} -> p = {p:.4} (label {y})");
    }
    Ok(())
}
