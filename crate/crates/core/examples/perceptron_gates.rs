// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Ideal and hardware perceptron gates on a small register.

use qperceptron::control::default_faquad;
use qperceptron::{PerceptronGateSpec, QuantumRegister};

fn main() -> qperceptron::Result<()> {
    // two inputs in superposition feed qubit 2
    let mut reg = QuantumRegister::zeros(3)?;
    reg.apply_hadamard(0)?;
    reg.apply_hadamard(1)?;
    let weights = vec![(0, 1.5), (1, 1.5)];
    let mut ideal = reg.clone();
    ideal.apply_perceptron(&PerceptronGateSpec::ideal(2, weights.clone(), 1.0, Default::default()))?;
    let mut hardware = reg.clone();
    hardware.apply_perceptron(&PerceptronGateSpec::hardware(2, weights, 1.0, default_faquad(100.0, 1.0, 10.0)?))?;
    println!("inputs  ideal    hardware");
    for bits in ["00", "10", "01", "11"] {
        println!(
            "{bits}      {:.5}  {:.5}",
            ideal.conditional_probability(&[0, 1], bits, 2)?,
            hardware.conditional_probability(&[0, 1], bits, 2)?
        );
    }
    println!("<sigma_z> on the output: ideal {:.5}, hardware {:.5}", ideal.z_expectation(2)?, hardware.z_expectation(2)?);
    Ok(())
}
