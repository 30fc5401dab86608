// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Feed-forward networks of perceptron gates.
//!
//! Qubits are ordered inputs first, then the perceptrons layer by layer, with
//! the single output perceptron last. Perceptron `p` lives on qubit
//! `n_inputs + p` and sees the field `x_p = sum_k mask[p][k] J[p][k] z_k - b[p]`
//! with `z_k = +1` for an excited source and `-1` otherwise.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::activation::ActivationKind;
use crate::control::ControlSchedule;
use crate::error::{Error, Result};
use crate::register::{hardware_sector_table, parse_bits, PerceptronGateSpec, QuantumRegister, MAX_QUBITS};

/// Default linear-regime scale of the universal approximator.
pub const DEFAULT_LAMBDA: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub n_inputs: usize,
    /// Perceptrons per layer; the last layer holds only the output.
    pub layer_sizes: Vec<usize>,
    /// `mask[p][k] = 1` when perceptron `p` reads qubit `k`.
    pub mask: Vec<Vec<u8>>,
    #[serde(rename = "J")]
    pub j: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    #[serde(default)]
    pub activation: ActivationKind,
}

/// How the perceptron gates of a network are realized.
#[derive(Debug, Clone, PartialEq)]
pub enum NetworkMode {
    Ideal,
    Hardware(ControlSchedule),
}

impl NetworkSpec {
    /// All-zero network in which every perceptron of a layer reads the whole previous layer.
    pub fn layered(n_inputs: usize, layer_sizes: &[usize], activation: ActivationKind) -> Result<Self> {
        let p = layer_sizes.iter().sum::<usize>();
        let width = n_inputs + p;
        let mut mask = vec![vec![0u8; width]; p];
        let mut prev = 0..n_inputs;
        let mut start = n_inputs;
        for &size in layer_sizes {
            for row in &mut mask[start - n_inputs..start - n_inputs + size] {
                for k in prev.clone() {
                    row[k] = 1;
                }
            }
            prev = start..start + size;
            start += size;
        }
        let net = NetworkSpec {
            n_inputs,
            layer_sizes: layer_sizes.to_vec(),
            mask,
            j: vec![vec![0.0; width]; p],
            b: vec![0.0; p],
            activation,
        };
        net.validate()?;
        Ok(net)
    }

    /// All-zero network of `n_perceptrons` in a chain, each reading every earlier qubit.
    pub fn cascade(n_inputs: usize, n_perceptrons: usize, activation: ActivationKind) -> Result<Self> {
        let width = n_inputs + n_perceptrons;
        let mask = (0..n_perceptrons)
            .map(|p| (0..width).map(|k| u8::from(k < n_inputs + p)).collect())
            .collect();
        let net = NetworkSpec {
            n_inputs,
            layer_sizes: vec![1; n_perceptrons],
            mask,
            j: vec![vec![0.0; width]; n_perceptrons],
            b: vec![0.0; n_perceptrons],
            activation,
        };
        net.validate()?;
        Ok(net)
    }

    pub fn n_perceptrons(&self) -> usize {
        self.b.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_inputs + self.n_perceptrons()
    }

    pub fn output_qubit(&self) -> usize {
        self.n_qubits() - 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidNetwork(m));
        if self.n_inputs == 0 {
            return bad("need at least one input".into());
        }
        if self.layer_sizes.is_empty() || self.layer_sizes.contains(&0) {
            return bad("layer sizes must be positive".into());
        }
        if *self.layer_sizes.last().unwrap() != 1 {
            return bad("the last layer must hold exactly one output perceptron".into());
        }
        let p = self.layer_sizes.iter().sum::<usize>();
        if self.b.len() != p || self.mask.len() != p || self.j.len() != p {
            return bad(format!("expected {p} rows in mask, J and b"));
        }
        let width = self.n_inputs + p;
        if width > MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: width, cap: MAX_QUBITS });
        }
        for (row, (m, j)) in self.mask.iter().zip(&self.j).enumerate() {
            if m.len() != width || j.len() != width {
                return bad(format!("row {row} of mask/J must have {width} columns"));
            }
            for (k, &v) in m.iter().enumerate() {
                if v > 1 {
                    return bad(format!("mask entries must be 0 or 1, found {v}"));
                }
                if v == 1 && k >= self.n_inputs + row {
                    return bad(format!("perceptron {row} may not read qubit {k}"));
                }
            }
            if j.iter().any(|v| !v.is_finite()) {
                return bad(format!("row {row} of J is not finite"));
            }
        }
        if self.b.iter().any(|v| !v.is_finite()) {
            return bad("biases must be finite".into());
        }
        Ok(())
    }

    /// Effective `(source, weight)` pairs of perceptron `p`.
    pub fn sources(&self, p: usize) -> Vec<(usize, f64)> {
        self.mask[p]
            .iter()
            .zip(&self.j[p])
            .enumerate()
            .filter(|(_, (m, _))| **m == 1)
            .map(|(k, (_, w))| (k, *w))
            .collect()
    }

    pub fn gate(&self, p: usize, mode: &NetworkMode) -> PerceptronGateSpec {
        let target = self.n_inputs + p;
        match mode {
            NetworkMode::Ideal => PerceptronGateSpec::ideal(target, self.sources(p), self.b[p], self.activation),
            NetworkMode::Hardware(s) => PerceptronGateSpec::hardware(target, self.sources(p), self.b[p], s.clone()),
        }
    }

    /// Layer index of every qubit; inputs are layer 0.
    pub fn layer_of_qubit(&self) -> Vec<usize> {
        let mut out = vec![0; self.n_inputs];
        for (l, &size) in self.layer_sizes.iter().enumerate() {
            out.extend(std::iter::repeat_n(l + 1, size));
        }
        out
    }

    /// `|bits, 0...0>`.
    pub fn input_register(&self, input_bits: &str) -> Result<QuantumRegister> {
        if input_bits.len() != self.n_inputs {
            return Err(Error::SizeMismatch { expected: self.n_inputs, found: input_bits.len() });
        }
        let bits = format!("{input_bits}{}", "0".repeat(self.n_perceptrons()));
        QuantumRegister::init_basis(self.n_qubits(), &bits)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let net: NetworkSpec = serde_json::from_str(text)?;
        net.validate()?;
        Ok(net)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Applies every perceptron gate of `net` in qubit order to `reg`.
pub fn apply_network(net: &NetworkSpec, reg: &mut QuantumRegister, mode: &NetworkMode) -> Result<()> {
    net.validate()?;
    if reg.n_qubits() != net.n_qubits() {
        return Err(Error::SizeMismatch { expected: net.n_qubits(), found: reg.n_qubits() });
    }
    for p in 0..net.n_perceptrons() {
        reg.apply_perceptron(&net.gate(p, mode))?;
    }
    Ok(())
}

/// Runs the network on one input and returns the register and the output excitation.
pub fn forward(net: &NetworkSpec, input_bits: &str, mode: &NetworkMode) -> Result<(QuantumRegister, f64)> {
    net.validate()?;
    let mut reg = net.input_register(input_bits)?;
    apply_network(net, &mut reg, mode)?;
    let p = reg.excitation_probability(net.output_qubit())?;
    Ok((reg, p))
}

/// Output excitation as a classical mixture over hidden configurations.
///
/// Each perceptron fires with probability `f(x)` given the already-sampled
/// states of its sources; the output probability is averaged over every
/// hidden configuration.
pub fn classical_mixture_oracle(net: &NetworkSpec, input_bits: &str) -> Result<f64> {
    net.validate()?;
    if input_bits.len() != net.n_inputs {
        return Err(Error::SizeMismatch { expected: net.n_inputs, found: input_bits.len() });
    }
    let inputs = parse_bits(input_bits)?;
    let hidden = net.n_perceptrons() - 1;
    if hidden > 20 {
        return Err(Error::InvalidNetwork(format!("{hidden} hidden perceptrons is too many to enumerate")));
    }
    let field = |p: usize, state: usize| -> f64 {
        net.sources(p)
            .iter()
            .map(|&(k, w)| if state >> k & 1 == 1 { w } else { -w })
            .sum::<f64>()
            - net.b[p]
    };
    let mut total = 0.0;
    for z in 0..1usize << hidden {
        let state = inputs | z << net.n_inputs;
        let mut weight = 1.0;
        for p in 0..hidden {
            let f = net.activation.f(field(p, state))?;
            weight *= if z >> p & 1 == 1 { f } else { 1.0 - f };
        }
        if weight > 0.0 {
            total += weight * net.activation.f(field(hidden, state))?;
        }
    }
    Ok(total)
}

/// Result of [`layer_hamiltonian_forward`].
#[derive(Debug, Clone)]
pub struct LayerRun {
    pub register: QuantumRegister,
    pub p_out: f64,
    /// Simulated protocol time, one passage per layer.
    pub protocol_time: f64,
}

/// Evolves each layer as one simultaneous passage under the shared control.
///
/// Terms of one layer act on distinct targets and are diagonal in the
/// previous layer, so they commute and the layer propagator factorizes into
/// per-target sector unitaries.
pub fn layer_hamiltonian_forward(net: &NetworkSpec, input_bits: &str, schedule: &ControlSchedule) -> Result<LayerRun> {
    net.validate()?;
    let layer = net.layer_of_qubit();
    for p in 0..net.n_perceptrons() {
        let target = net.n_inputs + p;
        if let Some(&(k, _)) = net.sources(p).iter().find(|&&(k, _)| layer[k] + 1 != layer[target]) {
            return Err(Error::InvalidNetwork(format!(
                "perceptron {p} reads qubit {k}, which is not in the preceding layer"
            )));
        }
    }
    let mut reg = net.input_register(input_bits)?;
    let mode = NetworkMode::Hardware(schedule.clone());
    let mut first = 0;
    for &size in &net.layer_sizes {
        let tables = (first..first + size)
            .map(|p| {
                let g = net.gate(p, &mode);
                hardware_sector_table(&g, reg.n_qubits()).map(|t| (g, t))
            })
            .collect::<Result<Vec<_>>>()?;
        for (g, table) in &tables {
            reg.apply_sector_unitaries(g.target, &g.sources(), table)?;
        }
        first += size;
    }
    let p_out = reg.excitation_probability(net.output_qubit())?;
    Ok(LayerRun { register: reg, p_out, protocol_time: net.layer_sizes.len() as f64 * schedule.tf })
}

/// Classical sum `q(z) = sum_j alpha_j f(sum_k w_jk z_k - theta_j)` with `z = +-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalSum {
    pub alpha: Vec<f64>,
    pub w: Vec<Vec<f64>>,
    pub theta: Vec<f64>,
}

impl ClassicalSum {
    pub fn eval(&self, kind: ActivationKind, input_bits: &str) -> Result<f64> {
        let s = parse_bits(input_bits)?;
        let mut q = 0.0;
        for ((a, w), t) in self.alpha.iter().zip(&self.w).zip(&self.theta) {
            let x: f64 = w.iter().enumerate().map(|(k, w)| if s >> k & 1 == 1 { *w } else { -w }).sum::<f64>() - t;
            q += a * kind.f(x)?;
        }
        Ok(q)
    }
}

/// A three-layer network whose output reads a classical sum in its linear regime.
#[derive(Debug, Clone, PartialEq)]
pub struct UniversalApproximator {
    pub net: NetworkSpec,
    pub lambda: f64,
    /// Output bias before scaling, fixed by `1 + theta_out + sum(alpha) = 0`.
    pub theta_out: f64,
    /// `p_out ~ offset + slope * q`.
    pub slope: f64,
    pub offset: f64,
}

impl UniversalApproximator {
    /// Estimate of the classical sum from an output excitation probability.
    pub fn readout(&self, p_out: f64) -> f64 {
        (p_out - self.offset) / self.slope
    }
}

/// Builds the approximator network for `classical` with output scale `lambda`.
///
/// With the output field `x = lambda (sum_j alpha_j z_j - theta_out)` and the
/// constraint on `theta_out`, `<x> = lambda (1 + 2 q)`, so to leading order
/// `p_out = 1/2 + f'(0) lambda (1 + 2 q)`.
pub fn build_universal_approximator(
    classical: &ClassicalSum,
    n_inputs: usize,
    lambda: f64,
    activation: ActivationKind,
) -> Result<UniversalApproximator> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidConfig(format!("lambda must be positive, got {lambda}")));
    }
    let m = classical.alpha.len();
    if m == 0 || classical.theta.len() != m || classical.w.len() != m {
        return Err(Error::InvalidNetwork("alpha, w and theta must have the same nonzero length".into()));
    }
    if classical.w.iter().any(|row| row.len() != n_inputs) {
        return Err(Error::InvalidNetwork(format!("every row of w needs {n_inputs} entries")));
    }
    let mut net = NetworkSpec::layered(n_inputs, &[m, 1], activation)?;
    for j in 0..m {
        net.j[j][..n_inputs].copy_from_slice(&classical.w[j]);
        net.b[j] = classical.theta[j];
    }
    let theta_out = -1.0 - classical.alpha.iter().sum::<f64>();
    for (j, a) in classical.alpha.iter().enumerate() {
        net.j[m][n_inputs + j] = lambda * a;
    }
    net.b[m] = lambda * theta_out;
    net.validate()?;
    let d = activation.slope_at_origin()?;
    Ok(UniversalApproximator {
        net,
        lambda,
        theta_out,
        slope: 2.0 * d * lambda,
        offset: 0.5 + d * lambda,
    })
}

/// Every bitstring of length `n`, qubit 0 first, in index order.
pub fn all_inputs(n: usize) -> Vec<String> {
    (0..1usize << n)
        .map(|i| (0..n).map(|k| if i >> k & 1 == 1 { '1' } else { '0' }).collect())
        .collect()
}
