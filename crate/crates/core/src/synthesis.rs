// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Conditional rotations built from several perceptron passages.
//!
//! Passages that rotate the same qubit about `y` add their angles, so a
//! composition of `n` cycles realizes `angle(x) = sum_n o_n chi(w_n x - theta_n)`
//! where `o_n = -1` stands for a passage run with reversed fields. Here `x`
//! counts excited controls: `x = sum_k w_k s_k` with `s_k` in `{0, 1}`.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activation::ActivationKind;
use crate::error::{Error, Result};
use crate::register::QuantumRegister;

const MAX_HALVINGS: u32 = 30;

/// Target rotation angle as a function of the control field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetResponse {
    /// `pi/2` strictly inside `(m1, m2)`, zero elsewhere.
    Rectangle { m1: f64, m2: f64 },
    /// Triangular tent of height `pi/2` and half-width `width`.
    Peak { center: f64, width: f64 },
    /// Piecewise-linear through `(x, angle)` points sorted by `x`.
    Sampled(Vec<(f64, f64)>),
}

impl TargetResponse {
    pub fn rectangle(m1: f64, m2: f64) -> Result<Self> {
        let t = TargetResponse::Rectangle { m1, m2 };
        t.validate()?;
        Ok(t)
    }

    pub fn peak(center: f64, width: f64) -> Result<Self> {
        let t = TargetResponse::Peak { center, width };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TargetResponse::Rectangle { m1, m2 } => {
                if !m1.is_finite() || !m2.is_finite() || !(m1 < m2) {
                    return Err(Error::InvalidConfig(format!("rectangle needs m1 < m2, got ({m1}, {m2})")));
                }
            }
            TargetResponse::Peak { center, width } => {
                if !center.is_finite() || !(*width > 0.0) || !width.is_finite() {
                    return Err(Error::InvalidConfig(format!("peak needs a positive width, got {width}")));
                }
            }
            TargetResponse::Sampled(points) => {
                if points.is_empty() {
                    return Err(Error::InvalidConfig("sampled target has no points".into()));
                }
                if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return Err(Error::InvalidConfig("sampled target must be sorted by x".into()));
                }
                if points.iter().any(|&(x, a)| !x.is_finite() || !(0.0..=FRAC_PI_2).contains(&a)) {
                    return Err(Error::InvalidConfig("sampled angles must lie in [0, pi/2]".into()));
                }
            }
        }
        Ok(())
    }

    pub fn angle(&self, x: f64) -> f64 {
        match self {
            TargetResponse::Rectangle { m1, m2 } => {
                if *m1 < x && x < *m2 {
                    FRAC_PI_2
                } else {
                    0.0
                }
            }
            TargetResponse::Peak { center, width } => FRAC_PI_2 * (1.0 - (x - center).abs() / width).max(0.0),
            TargetResponse::Sampled(points) => {
                let i = points.partition_point(|p| p.0 < x);
                if i == 0 {
                    points[0].1
                } else if i == points.len() {
                    points[i - 1].1
                } else {
                    let ((x0, a0), (x1, a1)) = (points[i - 1], points[i]);
                    a0 + (a1 - a0) * (x - x0) / (x1 - x0)
                }
            }
        }
    }

    /// Grid the fitter uses when none is given: integer control counts
    /// around a rectangle, 61 points across a peak, the sample abscissae otherwise.
    pub fn default_grid(&self) -> Vec<f64> {
        match self {
            TargetResponse::Rectangle { m1, m2 } => {
                let lo = m1.floor() as i64 - 3;
                let hi = m2.ceil() as i64 + 3;
                (lo..=hi).map(|v| v as f64).collect()
            }
            TargetResponse::Peak { center, width } => {
                (0..61).map(|i| center - 3.0 * width + 6.0 * width * i as f64 / 60.0).collect()
            }
            TargetResponse::Sampled(points) => points.iter().map(|p| p.0).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cycle {
    pub w: f64,
    pub theta: f64,
    /// `+1` for a forward passage, `-1` for one with reversed fields.
    pub orientation: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionSpec {
    pub cycles: Vec<Cycle>,
    #[serde(default)]
    pub activation: ActivationKind,
}

impl CompositionSpec {
    pub fn validate(&self) -> Result<()> {
        if self.cycles.is_empty() {
            return Err(Error::InvalidConfig("a composition needs at least one cycle".into()));
        }
        for c in &self.cycles {
            if c.orientation != 1 && c.orientation != -1 {
                return Err(Error::InvalidConfig(format!("orientation must be +1 or -1, got {}", c.orientation)));
            }
            if !c.w.is_finite() || !c.theta.is_finite() {
                return Err(Error::InvalidConfig("cycle parameters must be finite".into()));
            }
        }
        Ok(())
    }

    /// Cycles of `self` followed by those of `other`.
    pub fn concat(&self, other: &CompositionSpec) -> CompositionSpec {
        CompositionSpec {
            cycles: self.cycles.iter().chain(&other.cycles).copied().collect(),
            activation: self.activation,
        }
    }
}

/// Total rotation angle `sum_n o_n chi(w_n x - theta_n)`.
pub fn composition_angle(spec: &CompositionSpec, x: f64) -> Result<f64> {
    spec.cycles.iter().try_fold(0.0, |acc, c| {
        Ok(acc + f64::from(c.orientation) * spec.activation.chi(c.w * x - c.theta)?)
    })
}

/// Two opposite passages with thresholds at `m1` and `m2` and common steepness `w`.
pub fn rectangle_spec(m1: f64, m2: f64, w: f64, activation: ActivationKind) -> CompositionSpec {
    CompositionSpec {
        cycles: vec![
            Cycle { w, theta: w * m1, orientation: 1 },
            Cycle { w, theta: w * m2, orientation: -1 },
        ],
        activation,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisOptions {
    /// Random starts per orientation pattern.
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Fits with an RMS angle error above this are reported as not converged.
    pub tolerance: f64,
    pub activation: ActivationKind,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions { restarts: 8, max_iters: 4000, seed: 0, tolerance: 0.05, activation: ActivationKind::Algebraic }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub spec: CompositionSpec,
    /// RMS angle error over the fit grid, in radians.
    pub residual: f64,
    pub converged: bool,
}

fn rms_residual(spec: &CompositionSpec, grid: &[f64], targets: &[f64]) -> Result<f64> {
    let mut sse = 0.0;
    for (&x, &t) in grid.iter().zip(targets) {
        sse += (composition_angle(spec, x)? - t).powi(2);
    }
    Ok((sse / grid.len() as f64).sqrt())
}

/// Gradient descent with a warm-started backtracking step from one starting point.
fn descend(mut spec: CompositionSpec, grid: &[f64], targets: &[f64], max_iters: usize) -> Result<(CompositionSpec, f64)> {
    let kind = spec.activation;
    let loss_grad = |s: &CompositionSpec| -> Result<(f64, Vec<f64>)> {
        let mut loss = 0.0;
        let mut g = vec![0.0; 2 * s.cycles.len()];
        for (&x, &t) in grid.iter().zip(targets) {
            let r = composition_angle(s, x)? - t;
            loss += r * r;
            for (n, c) in s.cycles.iter().enumerate() {
                let d = 2.0 * r * f64::from(c.orientation) * kind.dchi_dx(c.w * x - c.theta)?;
                g[2 * n] += d * x;
                g[2 * n + 1] -= d;
            }
        }
        Ok((loss, g))
    };
    let (mut loss, mut g) = loss_grad(&spec)?;
    let mut step = 1.0;
    for _ in 0..max_iters {
        if g.iter().all(|v| v.abs() < 1e-14) {
            break;
        }
        step *= 2.0;
        let mut moved = false;
        for _ in 0..=MAX_HALVINGS {
            let mut trial = spec.clone();
            for (n, c) in trial.cycles.iter_mut().enumerate() {
                c.w -= step * g[2 * n];
                c.theta -= step * g[2 * n + 1];
            }
            let (tl, tg) = loss_grad(&trial)?;
            if tl < loss {
                (spec, loss, g) = (trial, tl, tg);
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    Ok((spec, loss))
}

/// Least-squares fit of a `cycles`-cycle composition to `target` on `x_grid`.
///
/// Every orientation pattern is tried from `options.restarts` random starts;
/// the lowest residual wins, ties going to the earliest start.
pub fn synthesize(target: &TargetResponse, cycles: usize, x_grid: &[f64], options: &SynthesisOptions) -> Result<SynthesisResult> {
    target.validate()?;
    if cycles == 0 || cycles > 8 {
        return Err(Error::InvalidConfig(format!("cycles must be in 1..=8, got {cycles}")));
    }
    if x_grid.is_empty() || x_grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidConfig("fit grid must be nonempty and finite".into()));
    }
    if options.restarts == 0 {
        return Err(Error::InvalidConfig("need at least one restart".into()));
    }
    let targets: Vec<f64> = x_grid.iter().map(|&x| target.angle(x)).collect();
    let (lo, hi) = x_grid.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    let span = (hi - lo).max(1.0);
    let starts: Vec<CompositionSpec> = (0..1usize << cycles)
        .flat_map(|pattern| {
            (0..options.restarts).map(move |r| (pattern, r))
        })
        .map(|(pattern, r)| {
            let mut rng = ChaCha8Rng::seed_from_u64(options.seed.wrapping_add((pattern * options.restarts + r) as u64));
            let cycles = (0..cycles)
                .map(|n| {
                    let w = rng.gen_range(0.5..4.0) / span * 4.0;
                    let centre = rng.gen_range(lo..=hi);
                    Cycle { w, theta: w * centre, orientation: if pattern >> n & 1 == 1 { -1 } else { 1 } }
                })
                .collect();
            CompositionSpec { cycles, activation: options.activation }
        })
        .collect();
    let fits = starts
        .into_par_iter()
        .map(|s| descend(s, x_grid, &targets, options.max_iters))
        .collect::<Result<Vec<_>>>()?;
    let (spec, _) = fits
        .into_iter()
        .reduce(|best, next| if next.1 < best.1 { next } else { best })
        .unwrap();
    let residual = rms_residual(&spec, x_grid, &targets)?;
    Ok(SynthesisResult { converged: residual <= options.tolerance, spec, residual })
}

/// Rotates `target_qubit` by the composition angle at `x = sum_k w_k s_k`.
pub fn apply_composition(
    reg: &mut QuantumRegister,
    spec: &CompositionSpec,
    target_qubit: usize,
    source_weights: &[(usize, f64)],
) -> Result<()> {
    spec.validate()?;
    let sources: Vec<usize> = source_weights.iter().map(|&(k, _)| k).collect();
    let angles = (0..1usize << sources.len())
        .map(|sector| {
            let x: f64 = source_weights
                .iter()
                .enumerate()
                .filter(|(i, _)| sector >> i & 1 == 1)
                .map(|(_, &(_, w))| w)
                .sum();
            composition_angle(spec, x)
        })
        .collect::<Result<Vec<f64>>>()?;
    reg.apply_conditional_ry(target_qubit, &sources, &angles)
}

/// Writes `x,target_angle,fitted_angle,fitted_excitation` rows.
pub fn write_csv<W: Write>(out: &mut W, target: &TargetResponse, spec: &CompositionSpec, x_grid: &[f64]) -> Result<()> {
    writeln!(out, "x,target_angle,fitted_angle,fitted_excitation")?;
    for &x in x_grid {
        let a = composition_angle(spec, x)?;
        writeln!(out, "{x},{},{a},{}", target.angle(x), a.sin().powi(2))?;
    }
    Ok(())
}
