// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input {0}")]
    NonFinite(f64),
    #[error("input {x} outside the activation domain [-{bound}, {bound}]")]
    OutOfDomain { x: f64, bound: f64 },
    #[error("activation is not differentiable at x = {x}")]
    NotDifferentiable { x: f64 },
    #[error("invalid control schedule: {0}")]
    InvalidSchedule(String),
    #[error("eigensystem undefined: transverse and longitudinal fields both vanish")]
    DegenerateEigensystem,
    #[error("state is not normalized (norm^2 = {0})")]
    Unnormalized(f64),
    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitIndex { index: usize, n_qubits: usize },
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("register of {requested} qubits exceeds the cap of {cap}")]
    TooManyQubits { requested: usize, cap: usize },
    #[error("invalid bitstring {0:?}")]
    InvalidBitstring(String),
    #[error("invalid perceptron gate: {0}")]
    InvalidGate(String),
    #[error("conditioning event has zero probability")]
    ZeroProbabilityCondition,
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("fit failed: {0}")]
    FitFailure(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
