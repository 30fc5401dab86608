// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Average infidelity of linear and FAQUAD passages versus duration, with the
//! stretched-exponential fit of the FAQUAD curve. A coarse grid keeps it quick;
//! the `benchmark` subcommand runs the full sweep.

use qperceptron::dynamics::{benchmark_ramps, crossing_duration, BenchmarkConfig};

fn main() -> qperceptron::Result<()> {
    let config = BenchmarkConfig { tf_grid: BenchmarkConfig::log_grid(0.3, 30.0, 7), n_points: 41, ..Default::default() };
    let report = benchmark_ramps(&config)?;
    report.write_csv(&mut std::io::stdout())?;
    let fit = report.fit();
    println!("fit: c0 = {:.3}, c1 = {:.3}, c2 = {:.3}", fit.c0, fit.c1, fit.c2);
    for (name, curve) in [("linear", &report.infidelity_linear), ("FAQUAD", &report.infidelity_faquad)] {
        println!("{name} reaches 1e-2 at tf = {:?}", crossing_duration(&report.tf_grid, curve, 1e-2));
    }
    Ok(())
}
