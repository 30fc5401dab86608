// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

pub mod activation;
pub mod cli;
pub mod control;
pub mod dynamics;
pub mod error;
pub mod network;
pub mod register;
pub mod synthesis;
pub mod training;

pub use activation::ActivationKind;
pub use control::{ControlSchedule, EigenSystem, ScheduleKind};
pub use error::{Error, Result};
pub use register::{GateMode, PerceptronGateSpec, QuantumRegister};
