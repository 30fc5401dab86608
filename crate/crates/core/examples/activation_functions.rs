// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Excitation profiles and rotation angles of the supported activations.

use qperceptron::ActivationKind;

fn main() -> qperceptron::Result<()> {
    let kinds = [ActivationKind::Algebraic, ActivationKind::Logistic, ActivationKind::Step];
    println!("{:>6} {:>12} {:>12} {:>12}", "x", "algebraic", "logistic", "step");
    for i in -4..=4 {
        let x = i as f64;
        let row: Vec<String> = kinds.iter().map(|k| k.f(x).map(|f| format!("{f:>12.6}"))).collect::<Result<_, _>>()?;
        println!("{x:>6} {}", row.join(" "));
    }
    for k in [ActivationKind::Algebraic, ActivationKind::Logistic] {
        println!("{k:?}: f'(0) = {}, chi(1) = {:.6} rad", k.slope_at_origin()?, k.chi(1.0)?);
    }
    // the arctan family is only defined on |x| <= pi/4
    let cao = ActivationKind::CaoArctan(2);
    println!("CaoArctan(2): f(0.5) = {:.6}, f(1.0) -> {:?}", cao.f(0.5)?, cao.f(1.0).err());
    Ok(())
}
