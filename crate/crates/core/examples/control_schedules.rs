// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Linear and FAQUAD transverse-field ramps and their adiabatic parameter.

use qperceptron::control::{adiabatic_diagnostics, default_faquad, linear_schedule, optimal_design_field};

fn main() -> qperceptron::Result<()> {
    let x_ref = optimal_design_field(1.0)?;
    println!("worst-case design field x/Omega_f = {x_ref:.6}");
    let (omega0, tf) = (100.0, 10.0);
    let lin = linear_schedule(omega0, 1.0, tf)?;
    let faq = default_faquad(omega0, 1.0, tf)?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "t", "Omega_lin", "mu_lin", "Omega_faq", "mu_faq");
    let dl = adiabatic_diagnostics(&lin, x_ref, 11);
    let df = adiabatic_diagnostics(&faq, x_ref, 11);
    for (((t, wl), (_, wf)), ((_, ml), (_, mf))) in lin.tabulate(11).into_iter().zip(faq.tabulate(11)).zip(dl.mu_trace.iter().zip(&df.mu_trace)) {
        println!("{t:>6.1} {wl:>12.4} {ml:>12.3e} {wf:>12.4} {mf:>12.3e}");
    }
    println!("relative spread of mu: linear {:.3}, FAQUAD {:.1e}", dl.relative_spread(), df.relative_spread());
    faq.write_csv(&mut std::io::sink(), 101)?;
    Ok(())
}
