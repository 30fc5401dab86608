// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Transverse-field controls `Omega(t)` for the two-level perceptron
//! Hamiltonian `H = -(Omega sigma_x + x sigma_z) / 2` (hbar = 1).
//!
//! Frequencies are measured in units of the final field `Omega_f` and times in
//! units of `1 / Omega_f`. The two ramps of interest are the linear ramp and
//! the fast quasi-adiabatic (FAQUAD) ramp, which keeps the adiabatic parameter
//! constant for one design field `x_ref`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default initial transverse field, in units of `Omega_f`.
pub const DEFAULT_OMEGA0: f64 = 100.0;
/// Default final transverse field; the global frequency unit.
pub const DEFAULT_OMEGAF: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Linear,
    Faquad,
    /// FAQUAD ramp with a superimposed linear degradation `eps [Omega0 + (Omegaf - Omega0) t/tf]`.
    Perturbed,
    /// Piecewise-linear interpolation of stored samples.
    Tabulated,
}

/// Immutable transverse-field waveform on `[0, tf]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlSchedule {
    pub kind: ScheduleKind,
    pub omega0: f64,
    pub omegaf: f64,
    pub tf: f64,
    /// Design field of the FAQUAD ramp (unused by linear ramps).
    pub x_ref: f64,
    pub epsilon_ctrl: f64,
    /// Sample grid for tabulated schedules, increasing in `t`.
    pub samples: Vec<(f64, f64)>,
    /// `Omega(t)` is multiplied by this sign (reversed-field passages use -1).
    sign: f64,
    /// When set, the waveform is traversed from `tf` back to `0`.
    reversed: bool,
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSchedule(format!("{name} must be finite, got {v}")))
    }
}

fn check_ramp(omega0: f64, omegaf: f64, tf: f64) -> Result<()> {
    check_finite("omega0", omega0)?;
    check_finite("omegaf", omegaf)?;
    check_finite("tf", tf)?;
    if !(omegaf > 0.0) {
        return Err(Error::InvalidSchedule(format!("omegaf must be positive, got {omegaf}")));
    }
    if !(omega0 > omegaf) {
        return Err(Error::InvalidSchedule(format!(
            "omega0 ({omega0}) must exceed omegaf ({omegaf})"
        )));
    }
    if !(tf > 0.0) {
        return Err(Error::InvalidSchedule(format!("tf must be positive, got {tf}")));
    }
    Ok(())
}

/// `1 - Omega / sqrt(Omega^2 + x^2)` without cancellation, for `Omega > 0`.
fn one_minus_v(omega: f64, x: f64) -> f64 {
    let r = omega.hypot(x);
    x * x / (r * (r + omega))
}

/// Linear ramp `Omega(t) = Omega0 (1 - t/tf) + Omegaf t/tf`.
pub fn linear_schedule(omega0: f64, omegaf: f64, tf: f64) -> Result<ControlSchedule> {
    check_ramp(omega0, omegaf, tf)?;
    Ok(ControlSchedule {
        kind: ScheduleKind::Linear,
        omega0,
        omegaf,
        tf,
        x_ref: 0.0,
        epsilon_ctrl: 0.0,
        samples: Vec::new(),
        sign: 1.0,
        reversed: false,
    })
}

/// Constant-adiabatic-parameter ramp designed for the field `x_ref`.
///
/// With `v = Omega / sqrt(Omega^2 + x_ref^2)` the ramp is linear in `v`, so
/// `mu(t)` evaluated at `x_ref` does not depend on `t`.
pub fn faquad_schedule(omega0: f64, omegaf: f64, tf: f64, x_ref: f64) -> Result<ControlSchedule> {
    check_ramp(omega0, omegaf, tf)?;
    check_finite("x_ref", x_ref)?;
    if x_ref == 0.0 {
        return Err(Error::InvalidSchedule(
            "x_ref = 0 has no avoided crossing; FAQUAD is undefined".into(),
        ));
    }
    Ok(ControlSchedule {
        kind: ScheduleKind::Faquad,
        omega0,
        omegaf,
        tf,
        x_ref,
        epsilon_ctrl: 0.0,
        samples: Vec::new(),
        sign: 1.0,
        reversed: false,
    })
}

/// FAQUAD ramp with the design field set by [`optimal_design_field`].
pub fn default_faquad(omega0: f64, omegaf: f64, tf: f64) -> Result<ControlSchedule> {
    let x_ref = optimal_design_field(omegaf)?;
    faquad_schedule(omega0, omegaf, tf, x_ref)
}

/// Superimposes the degradation ramp `eps [Omega0 + (Omegaf - Omega0) t/tf]` on a FAQUAD base.
pub fn perturbed_schedule(base: &ControlSchedule, epsilon_ctrl: f64) -> Result<ControlSchedule> {
    if base.kind != ScheduleKind::Faquad {
        return Err(Error::InvalidSchedule(format!(
            "perturbation requires a FAQUAD base, got {:?}",
            base.kind
        )));
    }
    check_finite("epsilon_ctrl", epsilon_ctrl)?;
    if epsilon_ctrl < 0.0 {
        return Err(Error::InvalidSchedule(format!(
            "epsilon_ctrl must be non-negative, got {epsilon_ctrl}"
        )));
    }
    Ok(ControlSchedule {
        kind: ScheduleKind::Perturbed,
        epsilon_ctrl,
        ..base.clone()
    })
}

impl ControlSchedule {
    /// Constant field `omega` held for `tf`. Not a ramp; endpoints coincide.
    pub fn constant(omega: f64, tf: f64) -> Result<Self> {
        check_finite("omega", omega)?;
        check_finite("tf", tf)?;
        if !(tf > 0.0) {
            return Err(Error::InvalidSchedule(format!("tf must be positive, got {tf}")));
        }
        Ok(ControlSchedule {
            kind: ScheduleKind::Linear,
            omega0: omega,
            omegaf: omega,
            tf,
            x_ref: 0.0,
            epsilon_ctrl: 0.0,
            samples: Vec::new(),
            sign: 1.0,
            reversed: false,
        })
    }

    /// Schedule interpolating `(t, Omega)` samples; the first sample must sit at `t = 0`.
    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidSchedule("need at least two samples".into()));
        }
        if samples[0].0 != 0.0 {
            return Err(Error::InvalidSchedule("first sample must be at t = 0".into()));
        }
        for pair in samples.windows(2) {
            if !(pair[1].0 > pair[0].0) {
                return Err(Error::InvalidSchedule("sample times must increase".into()));
            }
        }
        if samples.iter().any(|(t, w)| !t.is_finite() || !w.is_finite()) {
            return Err(Error::InvalidSchedule("non-finite sample".into()));
        }
        let (tf, omegaf) = *samples.last().unwrap();
        Ok(ControlSchedule {
            kind: ScheduleKind::Tabulated,
            omega0: samples[0].1,
            omegaf,
            tf,
            x_ref: 0.0,
            epsilon_ctrl: 0.0,
            samples,
            sign: 1.0,
            reversed: false,
        })
    }

    /// The waveform `t -> -Omega(tf - t)`. Evolving with it under the field
    /// `-x` undoes an evolution under `Omega(t)` and `x`.
    pub fn time_reversed(&self) -> Self {
        ControlSchedule {
            sign: -self.sign,
            reversed: !self.reversed,
            ..self.clone()
        }
    }

    /// The same waveform with the sign of the transverse field flipped.
    pub fn negated(&self) -> Self {
        ControlSchedule {
            sign: -self.sign,
            ..self.clone()
        }
    }

    fn local_time(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.tf);
        if self.reversed {
            self.tf - t
        } else {
            t
        }
    }

    fn degradation(&self, t: f64) -> f64 {
        self.epsilon_ctrl * (self.omega0 + (self.omegaf - self.omega0) * t / self.tf)
    }

    fn faquad_w(&self, t: f64) -> f64 {
        let w0 = one_minus_v(self.omega0, self.x_ref);
        let wf = one_minus_v(self.omegaf, self.x_ref);
        w0 + (t / self.tf) * (wf - w0)
    }

    fn faquad_omega(&self, t: f64) -> f64 {
        let w = self.faquad_w(t);
        self.x_ref.abs() * (1.0 - w) / (w * (2.0 - w)).sqrt()
    }

    fn faquad_rate(&self, t: f64) -> f64 {
        let w = self.faquad_w(t);
        let dv_dt = (one_minus_v(self.omega0, self.x_ref) - one_minus_v(self.omegaf, self.x_ref))
            / self.tf;
        self.x_ref.abs() * dv_dt / (w * (2.0 - w)).powf(1.5)
    }

    fn base_omega(&self, t: f64) -> f64 {
        match self.kind {
            ScheduleKind::Linear => {
                let s = t / self.tf;
                self.omega0 * (1.0 - s) + self.omegaf * s
            }
            ScheduleKind::Faquad => self.faquad_omega(t),
            ScheduleKind::Perturbed => self.faquad_omega(t) + self.degradation(t),
            ScheduleKind::Tabulated => interpolate(&self.samples, t),
        }
    }

    fn base_rate(&self, t: f64) -> f64 {
        match self.kind {
            ScheduleKind::Linear => (self.omegaf - self.omega0) / self.tf,
            ScheduleKind::Faquad => self.faquad_rate(t),
            ScheduleKind::Perturbed => {
                self.faquad_rate(t) + self.epsilon_ctrl * (self.omegaf - self.omega0) / self.tf
            }
            ScheduleKind::Tabulated => tabulated_rate(&self.samples, t),
        }
    }

    /// `Omega(t)`, with `t` clamped into `[0, tf]`.
    pub fn omega(&self, t: f64) -> f64 {
        self.sign * self.base_omega(self.local_time(t))
    }

    /// `dOmega/dt`: analytic for ramps, central differences for tabulated schedules.
    pub fn domega_dt(&self, t: f64) -> f64 {
        let rate = self.sign * self.base_rate(self.local_time(t));
        if self.reversed {
            -rate
        } else {
            rate
        }
    }

    /// `n` equally spaced samples `(t, Omega(t))` including both endpoints.
    pub fn tabulate(&self, n: usize) -> Vec<(f64, f64)> {
        match n {
            0 => Vec::new(),
            1 => vec![(0.0, self.omega(0.0))],
            _ => (0..n)
                .map(|i| {
                    let t = if i + 1 == n { self.tf } else { self.tf * i as f64 / (n - 1) as f64 };
                    (t, self.omega(t))
                })
                .collect(),
        }
    }

    /// Writes `n` samples as CSV with a `t,omega` header.
    pub fn write_csv<W: Write>(&self, out: &mut W, n: usize) -> Result<()> {
        writeln!(out, "t,omega")?;
        for (t, w) in self.tabulate(n) {
            writeln!(out, "{t},{w}")?;
        }
        Ok(())
    }
}

fn interpolate(samples: &[(f64, f64)], t: f64) -> f64 {
    let i = samples.partition_point(|(ts, _)| *ts <= t);
    if i == 0 {
        return samples[0].1;
    }
    if i >= samples.len() {
        return samples[samples.len() - 1].1;
    }
    let (t0, w0) = samples[i - 1];
    let (t1, w1) = samples[i];
    w0 + (w1 - w0) * (t - t0) / (t1 - t0)
}

fn node_rate(samples: &[(f64, f64)], i: usize) -> f64 {
    let last = samples.len() - 1;
    let (lo, hi) = match i {
        0 => (0, 1),
        _ if i == last => (last - 1, last),
        _ => (i - 1, i + 1),
    };
    (samples[hi].1 - samples[lo].1) / (samples[hi].0 - samples[lo].0)
}

fn tabulated_rate(samples: &[(f64, f64)], t: f64) -> f64 {
    let i = samples.partition_point(|(ts, _)| *ts <= t);
    if i == 0 {
        return node_rate(samples, 0);
    }
    if i >= samples.len() {
        return node_rate(samples, samples.len() - 1);
    }
    let (t0, _) = samples[i - 1];
    let (t1, _) = samples[i];
    let (d0, d1) = (node_rate(samples, i - 1), node_rate(samples, i));
    d0 + (d1 - d0) * (t - t0) / (t1 - t0)
}

/// Instantaneous eigensystem of `H = -(Omega sigma_x + x sigma_z) / 2`.
///
/// Eigenvectors are stored as `[amplitude on |1>, amplitude on |0>]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    /// Mixing angle `theta = arccos(-x / sqrt(Omega^2 + x^2))`.
    pub theta_bloch: f64,
    pub e0: f64,
    pub e1: f64,
    pub phi0: [f64; 2],
    pub phi1: [f64; 2],
}

impl EigenSystem {
    pub fn gap(&self) -> f64 {
        self.e1 - self.e0
    }

    /// Population of the active state `|1>` in the ground state.
    pub fn ground_excitation(&self) -> f64 {
        self.phi0[0] * self.phi0[0]
    }
}

/// Ground state tends to `|1>` as `x -> +inf`, to `|+>` as `Omega -> +inf`.
pub fn eigensystem(omega: f64, x: f64) -> Result<EigenSystem> {
    if !omega.is_finite() || !x.is_finite() {
        return Err(Error::NonFinite(if omega.is_finite() { x } else { omega }));
    }
    if omega == 0.0 && x == 0.0 {
        return Err(Error::DegenerateEigensystem);
    }
    let r = omega.hypot(x);
    let theta = (-x / r).clamp(-1.0, 1.0).acos();
    let (s, c) = (0.5 * theta).sin_cos();
    let sgn = if omega < 0.0 { -1.0 } else { 1.0 };
    Ok(EigenSystem {
        theta_bloch: theta,
        e0: -0.5 * r,
        e1: 0.5 * r,
        phi0: [s, sgn * c],
        phi1: [c, -sgn * s],
    })
}

/// Adiabatic parameter `mu = |x dOmega/dt| / (2 (Omega^2 + x^2)^(3/2))` at time `t`.
pub fn adiabatic_mu(schedule: &ControlSchedule, x: f64, t: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let omega = schedule.omega(t);
    let r2 = omega * omega + x * x;
    (x * schedule.domega_dt(t)).abs() / (2.0 * r2 * r2.sqrt())
}

/// Rescaled FAQUAD constant `c~ = c tf` for a passage from `omega0` to `omegaf` at field `x`:
/// `|1/sqrt(1 + x^2/omega0^2) - 1/sqrt(1 + x^2/omegaf^2)| / (2 |x|)`.
pub fn faquad_c_tilde(omega0: f64, omegaf: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let v0 = 1.0 / (1.0 + x * x / (omega0 * omega0)).sqrt();
    let vf = 1.0 / (1.0 + x * x / (omegaf * omegaf)).sqrt();
    ((v0 - vf) / (2.0 * x)).abs()
}

/// Trace of the adiabatic parameter along a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct AdiabaticDiagnostics {
    pub mu_trace: Vec<(f64, f64)>,
    /// Constant a FAQUAD passage between the same endpoints would hold at this `x`, times `tf`.
    pub c_tilde: f64,
}

impl AdiabaticDiagnostics {
    pub fn max_mu(&self) -> (f64, f64) {
        self.mu_trace
            .iter()
            .copied()
            .fold((0.0, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best })
    }

    /// `(max - min) / mean` of the trace.
    pub fn relative_spread(&self) -> f64 {
        let (mut lo, mut hi, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for &(_, mu) in &self.mu_trace {
            lo = lo.min(mu);
            hi = hi.max(mu);
            sum += mu;
        }
        (hi - lo) / (sum / self.mu_trace.len() as f64)
    }
}

pub fn adiabatic_diagnostics(schedule: &ControlSchedule, x: f64, n: usize) -> AdiabaticDiagnostics {
    let mu_trace = schedule
        .tabulate(n)
        .into_iter()
        .map(|(t, _)| (t, adiabatic_mu(schedule, x, t)))
        .collect();
    AdiabaticDiagnostics {
        mu_trace,
        c_tilde: faquad_c_tilde(schedule.omega0.abs(), schedule.omegaf.abs(), x),
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut a = hi - GOLDEN * (hi - lo);
    let mut b = lo + GOLDEN * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol * (1.0 + lo.abs() + hi.abs()) {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + GOLDEN * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - GOLDEN * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}

/// Field `x > 0` that maximizes the FAQUAD constant between `omega0` and `omegaf`.
pub fn optimal_design_field_between(omega0: f64, omegaf: f64) -> Result<f64> {
    check_ramp(omega0, omegaf, 1.0)?;
    // work in units of omegaf so the tolerance is scale free
    let ratio = omega0 / omegaf;
    let y = golden_section_max(|y| faquad_c_tilde(ratio, 1.0, y), 1e-3, 1e3, 1e-14);
    Ok(y * omegaf)
}

/// Worst-case FAQUAD design field for `omega0 >> omegaf`, found numerically.
pub fn optimal_design_field(omegaf: f64) -> Result<f64> {
    check_finite("omegaf", omegaf)?;
    if !(omegaf > 0.0) {
        return Err(Error::InvalidSchedule(format!("omegaf must be positive, got {omegaf}")));
    }
    // limit omega0 -> inf of faquad_c_tilde, in units of omegaf
    let objective = |y: f64| (1.0 - 1.0 / (1.0 + y * y).sqrt()) / y;
    Ok(golden_section_max(objective, 1e-3, 1e3, 1e-14) * omegaf)
}
