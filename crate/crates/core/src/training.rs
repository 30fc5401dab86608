// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Classical training of perceptron networks on labelled bitstrings.
//!
//! With ideal gates every amplitude stays real and the input qubits stay in
//! their basis state, so a sample is simulated on the `2^P` perceptron
//! subspace alone. Gradients come from one forward and one reverse sweep over
//! the gate sequence.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activation::ActivationKind;
use crate::error::{Error, Result};
use crate::network::{forward, ClassicalSum, NetworkMode, NetworkSpec};
use crate::register::{parse_bits, QuantumRegister};

/// Probabilities are clamped to at least this before taking logs.
pub const PROB_CLAMP: f64 = 1e-300;
const MAX_HALVINGS: u32 = 30;

/// Labelled inputs; `x_bits[k]` is the state of input qubit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub n_bits: usize,
    pub pairs: Vec<(String, f64)>,
}

impl Dataset {
    pub fn new(n_bits: usize, pairs: Vec<(String, f64)>) -> Result<Self> {
        let ds = Dataset { n_bits, pairs };
        ds.validate()?;
        Ok(ds)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::InvalidDataset("dataset is empty".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for (x, y) in &self.pairs {
            if x.len() != self.n_bits {
                return Err(Error::InvalidDataset(format!("{x:?} does not have {} bits", self.n_bits)));
            }
            parse_bits(x)?;
            if !(0.0..=1.0).contains(y) {
                return Err(Error::InvalidDataset(format!("label {y} outside [0, 1]")));
            }
            if !seen.insert(x.as_str()) {
                return Err(Error::InvalidDataset(format!("duplicate input {x}")));
            }
        }
        Ok(())
    }

    /// Writes `x_bits,y` rows.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "x_bits,y")?;
        for (x, y) in &self.pairs {
            writeln!(out, "{x},{y}")?;
        }
        Ok(())
    }

    /// Reads `x_bits,y` rows; blank lines and `#` comments are skipped.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut header = false;
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if !header {
                if line.replace(' ', "") != "x_bits,y" {
                    return Err(Error::InvalidDataset(format!("unexpected header {line:?}")));
                }
                header = true;
                continue;
            }
            let (x, y) = line
                .split_once(',')
                .ok_or_else(|| Error::InvalidDataset(format!("malformed row {line:?}")))?;
            let y: f64 = y
                .trim()
                .parse()
                .map_err(|_| Error::InvalidDataset(format!("bad label in {line:?}")))?;
            pairs.push((x.trim().to_string(), y));
        }
        let n_bits = pairs.first().map(|(x, _)| x.len()).unwrap_or(0);
        Dataset::new(n_bits, pairs)
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Every `n_bits` integer labelled 1 iff prime; bitstrings are written most significant bit first.
pub fn prime_dataset(n_bits: usize) -> Result<Dataset> {
    if !(2..=8).contains(&n_bits) {
        return Err(Error::InvalidConfig(format!("n_bits must be in 2..=8, got {n_bits}")));
    }
    let pairs = (0..1u32 << n_bits)
        .map(|v| (format!("{v:0n_bits$b}"), if is_prime(v) { 1.0 } else { 0.0 }))
        .collect();
    Dataset::new(n_bits, pairs)
}

/// Gate data of one perceptron restricted to the perceptron subspace.
struct LocalGate {
    /// Earlier perceptrons this one reads, as local bit positions.
    hidden_sources: Vec<usize>,
    /// Field of each sector, inputs folded in.
    fields: Vec<f64>,
    angles: Vec<f64>,
}

fn input_signs(bits: &str) -> Vec<f64> {
    bits.chars().map(|c| if c == '1' { 1.0 } else { -1.0 }).collect()
}

fn local_gates(net: &NetworkSpec, z_in: &[f64]) -> Result<Vec<LocalGate>> {
    let n = net.n_inputs;
    (0..net.n_perceptrons())
        .map(|q| {
            let mut x0 = -net.b[q];
            for k in 0..n {
                if net.mask[q][k] == 1 {
                    x0 += net.j[q][k] * z_in[k];
                }
            }
            let hidden_sources: Vec<usize> = (0..q).filter(|&r| net.mask[q][n + r] == 1).collect();
            let fields: Vec<f64> = (0..1usize << hidden_sources.len())
                .map(|s| {
                    hidden_sources.iter().enumerate().fold(x0, |x, (i, &r)| {
                        let w = net.j[q][n + r];
                        if s >> i & 1 == 1 {
                            x + w
                        } else {
                            x - w
                        }
                    })
                })
                .collect();
            let angles = fields.iter().map(|&x| net.activation.chi(x)).collect::<Result<Vec<f64>>>()?;
            Ok(LocalGate { hidden_sources, fields, angles })
        })
        .collect()
}

fn local_sector(index: usize, sources: &[usize]) -> usize {
    sources.iter().enumerate().fold(0, |s, (i, &r)| s | (index >> r & 1) << i)
}

/// Rotates every amplitude pair of local qubit `q` by its sector angle times `sign`.
fn rotate(psi: &mut [f64], q: usize, gate: &LocalGate, sign: f64) {
    let bit = 1usize << q;
    for i in 0..psi.len() {
        if i & bit != 0 {
            continue;
        }
        let (s, c) = (sign * gate.angles[local_sector(i, &gate.hidden_sources)]).sin_cos();
        let (a0, a1) = (psi[i], psi[i | bit]);
        psi[i] = c * a0 - s * a1;
        psi[i | bit] = s * a0 + c * a1;
    }
}

fn forward_local(gates: &[LocalGate]) -> Vec<f64> {
    let mut psi = vec![0.0; 1 << gates.len()];
    psi[0] = 1.0;
    for (q, g) in gates.iter().enumerate() {
        rotate(&mut psi, q, g, 1.0);
    }
    psi
}

/// `(P(out = 1), P(out = 0))` of a local state.
fn output_split(psi: &[f64]) -> (f64, f64) {
    let bit = psi.len() >> 1;
    let (mut p1, mut p0) = (0.0, 0.0);
    for (i, a) in psi.iter().enumerate() {
        if i & bit != 0 {
            p1 += a * a;
        } else {
            p0 += a * a;
        }
    }
    (p1, p0)
}

fn sample_cost(y: f64, p1: f64, p0: f64) -> f64 {
    -(y * p1.max(PROB_CLAMP).ln() + (1.0 - y) * p0.max(PROB_CLAMP).ln())
}

/// Output probabilities of an ideal-mode network for every dataset input.
fn ideal_outputs(net: &NetworkSpec, data: &Dataset) -> Result<Vec<(f64, f64)>> {
    data.pairs
        .par_iter()
        .map(|(x, _)| Ok(output_split(&forward_local(&local_gates(net, &input_signs(x))?))))
        .collect()
}

fn check_inputs(net: &NetworkSpec, data: &Dataset) -> Result<()> {
    net.validate()?;
    data.validate()?;
    if data.n_bits != net.n_inputs {
        return Err(Error::SizeMismatch { expected: net.n_inputs, found: data.n_bits });
    }
    Ok(())
}

/// Mean cross entropy `-(1/S) sum [Y log p + (1 - Y) log(1 - p)]`.
pub fn cross_entropy_cost(net: &NetworkSpec, data: &Dataset, mode: &NetworkMode) -> Result<f64> {
    check_inputs(net, data)?;
    let splits: Vec<(f64, f64)> = match mode {
        NetworkMode::Ideal => ideal_outputs(net, data)?,
        NetworkMode::Hardware(_) => data
            .pairs
            .par_iter()
            .map(|(x, _)| forward(net, x, mode).map(|(_, p)| (p, 1.0 - p)))
            .collect::<Result<_>>()?,
    };
    let total: f64 = data.pairs.iter().zip(&splits).map(|((_, y), &(p1, p0))| sample_cost(*y, p1, p0)).sum();
    Ok(total / data.len() as f64)
}

/// `p(X_i)` for every dataset input under ideal gates.
pub fn predict(net: &NetworkSpec, data: &Dataset) -> Result<Vec<f64>> {
    check_inputs(net, data)?;
    Ok(ideal_outputs(net, data)?.into_iter().map(|(p1, _)| p1).collect())
}

/// Fraction of inputs whose decision `p >= 1/2` matches `Y >= 1/2`.
pub fn accuracy(net: &NetworkSpec, data: &Dataset) -> Result<f64> {
    let p = predict(net, data)?;
    let hits = p.iter().zip(&data.pairs).filter(|(p, (_, y))| (**p >= 0.5) == (*y >= 0.5)).count();
    Ok(hits as f64 / data.len() as f64)
}

/// Cost gradient with respect to `J` (same shape, zero where masked) and `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub d_j: Vec<Vec<f64>>,
    pub d_b: Vec<f64>,
}

/// One sample's cost and gradient by a forward sweep and a reverse adjoint sweep.
fn sample_gradient(net: &NetworkSpec, x: &str, y: f64, scale: f64) -> Result<(f64, Gradient)> {
    let n = net.n_inputs;
    let p_count = net.n_perceptrons();
    let z_in = input_signs(x);
    let gates = local_gates(net, &z_in)?;
    let mut psi = forward_local(&gates);
    let (p1, p0) = output_split(&psi);
    let cost = scale * sample_cost(y, p1, p0);
    // d cost / d psi
    let out = 1usize << (p_count - 1);
    let (w1, w0) = (-2.0 * scale * y / p1.max(PROB_CLAMP), -2.0 * scale * (1.0 - y) / p0.max(PROB_CLAMP));
    let mut adj: Vec<f64> = psi.iter().enumerate().map(|(i, a)| a * if i & out != 0 { w1 } else { w0 }).collect();
    let mut grad = Gradient { d_j: vec![vec![0.0; n + p_count]; p_count], d_b: vec![0.0; p_count] };
    for q in (0..p_count).rev() {
        let g = &gates[q];
        rotate(&mut psi, q, g, -1.0);
        let bit = 1usize << q;
        let mut sector_sum = vec![0.0; g.angles.len()];
        for i in 0..psi.len() {
            if i & bit != 0 {
                continue;
            }
            let s_idx = local_sector(i, &g.hidden_sources);
            let (s, c) = g.angles[s_idx].sin_cos();
            let (a0, a1) = (psi[i], psi[i | bit]);
            sector_sum[s_idx] += adj[i] * (-s * a0 - c * a1) + adj[i | bit] * (c * a0 - s * a1);
        }
        rotate(&mut adj, q, g, -1.0);
        for (s_idx, sum) in sector_sum.iter().enumerate() {
            let d_x = sum * net.activation.dchi_dx(g.fields[s_idx])?;
            grad.d_b[q] -= d_x;
            for k in 0..n {
                if net.mask[q][k] == 1 {
                    grad.d_j[q][k] += d_x * z_in[k];
                }
            }
            for (i, &r) in g.hidden_sources.iter().enumerate() {
                grad.d_j[q][n + r] += if s_idx >> i & 1 == 1 { d_x } else { -d_x };
            }
        }
    }
    Ok((cost, grad))
}

fn cost_and_gradient(net: &NetworkSpec, data: &Dataset) -> Result<(f64, Gradient)> {
    check_inputs(net, data)?;
    if !net.activation.is_differentiable() {
        return Err(Error::InvalidConfig("the step activation has no gradient".into()));
    }
    let scale = 1.0 / data.len() as f64;
    let parts = data
        .pairs
        .par_iter()
        .map(|(x, y)| sample_gradient(net, x, *y, scale))
        .collect::<Result<Vec<_>>>()?;
    let mut total = Gradient {
        d_j: vec![vec![0.0; net.n_qubits()]; net.n_perceptrons()],
        d_b: vec![0.0; net.n_perceptrons()],
    };
    let mut cost = 0.0;
    for (c, g) in &parts {
        cost += c;
        for (row, grow) in total.d_j.iter_mut().zip(&g.d_j) {
            for (a, b) in row.iter_mut().zip(grow) {
                *a += b;
            }
        }
        for (a, b) in total.d_b.iter_mut().zip(&g.d_b) {
            *a += b;
        }
    }
    Ok((cost, total))
}

/// Analytic gradient of [`cross_entropy_cost`] under ideal gates.
pub fn cost_gradient(net: &NetworkSpec, data: &Dataset) -> Result<Gradient> {
    Ok(cost_and_gradient(net, data)?.1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Initial step of every line search.
    pub learning_rate: f64,
    pub max_iters: usize,
    pub seed: u64,
    /// Random restarts draw parameters uniformly from `[-init_scale, init_scale]`.
    pub init_scale: f64,
    /// Total number of runs; the first starts from the given network.
    pub restarts: usize,
    /// Stop once the gradient norm falls below this.
    pub grad_tol: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { learning_rate: 2.0, max_iters: 5000, seed: 0, init_scale: 0.5, restarts: 10, grad_tol: 1e-9 }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::InvalidConfig(format!("learning_rate must be positive, got {}", self.learning_rate)));
        }
        if !(self.init_scale >= 0.0) || !self.init_scale.is_finite() {
            return Err(Error::InvalidConfig(format!("init_scale must be non-negative, got {}", self.init_scale)));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("need at least one run".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub cost_trace: Vec<f64>,
    pub accuracy: f64,
    pub params: NetworkSpec,
}

impl TrainReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn step_net(net: &NetworkSpec, grad: &Gradient, step: f64) -> NetworkSpec {
    let mut out = net.clone();
    for (row, g) in out.j.iter_mut().zip(&grad.d_j) {
        for (v, d) in row.iter_mut().zip(g) {
            *v -= step * d;
        }
    }
    for (v, d) in out.b.iter_mut().zip(&grad.d_b) {
        *v -= step * d;
    }
    out
}

fn grad_norm(grad: &Gradient) -> f64 {
    grad.d_j.iter().flatten().chain(&grad.d_b).map(|v| v * v).sum::<f64>().sqrt()
}

/// Gradient descent with backtracking from `net`; `None` if the cost diverges.
fn descend(net: NetworkSpec, data: &Dataset, config: &TrainConfig) -> Result<Option<TrainReport>> {
    let mut net = net;
    let (mut cost, mut grad) = cost_and_gradient(&net, data)?;
    if !cost.is_finite() {
        return Ok(None);
    }
    let mut trace = vec![cost];
    for _ in 0..config.max_iters {
        if accuracy(&net, data)? == 1.0 || grad_norm(&grad) < config.grad_tol {
            break;
        }
        let mut step = config.learning_rate;
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let trial = step_net(&net, &grad, step);
            let trial_cost = cross_entropy_cost(&trial, data, &NetworkMode::Ideal)?;
            if trial_cost.is_finite() && trial_cost < cost {
                accepted = Some(trial);
                break;
            }
            step *= 0.5;
        }
        let Some(next) = accepted else { break };
        net = next;
        (cost, grad) = cost_and_gradient(&net, data)?;
        if !cost.is_finite() {
            return Ok(None);
        }
        trace.push(cost);
    }
    let accuracy = accuracy(&net, data)?;
    Ok(Some(TrainReport { cost_trace: trace, accuracy, params: net }))
}

/// Random parameters on the mask of `template`.
pub fn random_init(template: &NetworkSpec, scale: f64, rng: &mut ChaCha8Rng) -> NetworkSpec {
    let mut net = template.clone();
    for (row, m) in net.j.iter_mut().zip(&template.mask) {
        for (v, &on) in row.iter_mut().zip(m) {
            *v = if on == 1 && scale > 0.0 { rng.gen_range(-scale..=scale) } else { 0.0 };
        }
    }
    for v in &mut net.b {
        *v = if scale > 0.0 { rng.gen_range(-scale..=scale) } else { 0.0 };
    }
    net
}

/// Trains `net0` on `data`, keeping the best of `config.restarts` runs.
///
/// Runs are ranked by accuracy, then by final cost. Training stops early once
/// every input is classified correctly.
pub fn train(net0: &NetworkSpec, data: &Dataset, config: &TrainConfig) -> Result<TrainReport> {
    config.validate()?;
    check_inputs(net0, data)?;
    if !net0.activation.is_differentiable() {
        return Err(Error::InvalidConfig("the step activation has no gradient".into()));
    }
    let mut best: Option<TrainReport> = None;
    for run in 0..config.restarts {
        let start = if run == 0 {
            net0.clone()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(run as u64));
            random_init(net0, config.init_scale, &mut rng)
        };
        let Some(report) = descend(start, data, config)? else { continue };
        let better = match &best {
            None => true,
            Some(b) => {
                report.accuracy > b.accuracy
                    || (report.accuracy == b.accuracy && report.cost_trace.last() < b.cost_trace.last())
            }
        };
        if better {
            best = Some(report);
        }
        if best.as_ref().is_some_and(|b| b.accuracy == 1.0) {
            break;
        }
    }
    best.ok_or_else(|| Error::FitFailure("every run diverged".into()))
}

/// `p(X_i)` for all inputs from a single pass over the superposition of every input.
pub fn batch_state_forward(net: &NetworkSpec, data: &Dataset) -> Result<Vec<f64>> {
    check_inputs(net, data)?;
    let n = net.n_qubits();
    if n > crate::register::MAX_QUBITS {
        return Err(Error::TooManyQubits { requested: n, cap: crate::register::MAX_QUBITS });
    }
    let amp = 1.0 / (data.len() as f64).sqrt();
    let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 1 << n];
    for (x, _) in &data.pairs {
        amps[parse_bits(x)?] = num_complex::Complex64::new(amp, 0.0);
    }
    let mut reg = QuantumRegister::from_amplitudes(amps)?;
    crate::network::apply_network(net, &mut reg, &NetworkMode::Ideal)?;
    let inputs: Vec<usize> = (0..net.n_inputs).collect();
    data.pairs
        .iter()
        .map(|(x, _)| reg.conditional_probability(&inputs, x, net.output_qubit()))
        .collect()
}

/// Least-squares fit of a classical sigmoid sum with `m` terms to `targets`.
///
/// Returns the fitted sum and its largest absolute error over the targets.
pub fn fit_classical_sum(
    targets: &Dataset,
    m: usize,
    activation: ActivationKind,
    config: &TrainConfig,
) -> Result<(ClassicalSum, f64)> {
    config.validate()?;
    targets.validate()?;
    if m == 0 {
        return Err(Error::InvalidConfig("need at least one term".into()));
    }
    let n = targets.n_bits;
    let signs: Vec<Vec<f64>> = targets.pairs.iter().map(|(x, _)| input_signs(x)).collect();
    let ys: Vec<f64> = targets.pairs.iter().map(|(_, y)| *y).collect();
    // parameters packed as [alpha (m), w (m*n), theta (m)]
    let dim = m * (n + 2);
    let unpack = |p: &[f64]| ClassicalSum {
        alpha: p[..m].to_vec(),
        w: (0..m).map(|j| p[m + j * n..m + (j + 1) * n].to_vec()).collect(),
        theta: p[m + m * n..].to_vec(),
    };
    let loss_grad = |p: &[f64]| -> Result<(f64, Vec<f64>, f64)> {
        let mut loss = 0.0;
        let mut worst: f64 = 0.0;
        let mut g = vec![0.0; dim];
        for (z, y) in signs.iter().zip(&ys) {
            let mut q = 0.0;
            let mut terms = Vec::with_capacity(m);
            for j in 0..m {
                let x = (0..n).map(|k| p[m + j * n + k] * z[k]).sum::<f64>() - p[m + m * n + j];
                let f = activation.f(x)?;
                let df = activation.cs(x)?.1 * activation.dchi_dx(x)?;
                q += p[j] * f;
                terms.push((f, df));
            }
            let r = q - y;
            loss += r * r;
            worst = worst.max(r.abs());
            for (j, &(f, df)) in terms.iter().enumerate() {
                g[j] += 2.0 * r * f;
                for k in 0..n {
                    g[m + j * n + k] += 2.0 * r * p[j] * df * z[k];
                }
                g[m + m * n + j] -= 2.0 * r * p[j] * df;
            }
        }
        Ok((loss, g, worst))
    };
    let mut best: Option<(Vec<f64>, f64, f64)> = None;
    for run in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(run as u64));
        let mut p: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..=2.0)).collect();
        let (mut loss, mut g, mut worst) = loss_grad(&p)?;
        for _ in 0..config.max_iters {
            if g.iter().map(|v| v * v).sum::<f64>().sqrt() < config.grad_tol {
                break;
            }
            let mut step = config.learning_rate;
            let mut moved = false;
            for _ in 0..=MAX_HALVINGS {
                let trial: Vec<f64> = p.iter().zip(&g).map(|(a, d)| a - step * d).collect();
                let (tl, tg, tw) = loss_grad(&trial)?;
                if tl < loss {
                    (p, loss, g, worst) = (trial, tl, tg, tw);
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| loss < b.1) {
            best = Some((p, loss, worst));
        }
    }
    let (p, _, worst) = best.unwrap();
    Ok((unpack(&p), worst))
}
