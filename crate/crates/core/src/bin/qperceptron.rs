// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(qperceptron::cli::run(std::env::args_os()));
}
