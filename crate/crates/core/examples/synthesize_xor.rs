// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Generalized XOR from two conditional-rotation cycles, used as a CNOT and as
//! a three-control window gate.

use qperceptron::network::all_inputs;
use qperceptron::synthesis::{apply_composition, synthesize, SynthesisOptions, TargetResponse};
use qperceptron::QuantumRegister;

fn main() -> qperceptron::Result<()> {
    for (m1, m2, n) in [(0.5, 1.5, 1usize), (0.5, 2.5, 3)] {
        let target = TargetResponse::rectangle(m1, m2)?;
        let fit = synthesize(&target, 2, &target.default_grid(), &SynthesisOptions::default())?;
        println!("window ({m1}, {m2}): rms residual {:.2e}, cycles {:?}", fit.residual, fit.spec.cycles);
        let controls: Vec<(usize, f64)> = (0..n).map(|k| (k, 1.0)).collect();
        for bits in all_inputs(n) {
            let mut reg = QuantumRegister::init_basis(n + 1, &format!("{bits}0"))?;
            apply_composition(&mut reg, &fit.spec, n, &controls)?;
            println!("  controls {bits}: target excited with p = {:.4}", reg.excitation_probability(n)?);
        }
    }
    Ok(())
}
