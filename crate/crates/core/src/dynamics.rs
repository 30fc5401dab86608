// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Time-dependent two-level dynamics of the perceptron qubit.
//!
//! The qubit evolves under `H(t) = -(Omega(t) sigma_x + x sigma_z) / 2` with
//! `sigma_z |1> = +|1>`. Each step is a product of exact 2x2 exponentials,
//! so every propagator is unitary and the norm is conserved to rounding.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activation::ActivationKind;
use crate::control::{default_faquad, linear_schedule, ControlSchedule, DEFAULT_OMEGA0, DEFAULT_OMEGAF};
use crate::error::{Error, Result};

/// Default half-width of the input-field window, in units of `Omega_f`.
pub const DEFAULT_X_MAX: f64 = 10.0;
/// Default number of field samples for averaged fidelities.
pub const DEFAULT_POINTS: usize = 201;
/// Infidelities at or below this floor are excluded from fits.
pub const INFIDELITY_FLOOR: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Amplitudes on the resting `|0>` and active `|1>` states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelState {
    pub amp0: Complex64,
    pub amp1: Complex64,
}

impl TwoLevelState {
    pub fn new(amp0: Complex64, amp1: Complex64) -> Self {
        TwoLevelState { amp0, amp1 }
    }

    pub fn resting() -> Self {
        TwoLevelState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn active() -> Self {
        TwoLevelState::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// `|+> = H|0>`.
    pub fn plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        TwoLevelState::new(h, h)
    }

    /// Instantaneous ground state `sqrt(1 - g)|0> + sqrt(g)|1>` at field ratio `x / Omega`.
    pub fn ideal(x_over_omega: f64) -> Result<Self> {
        let chi = ActivationKind::Algebraic.chi(x_over_omega)?;
        let (s, c) = chi.sin_cos();
        Ok(TwoLevelState::new(Complex64::new(c, 0.0), Complex64::new(s, 0.0)))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amp0.norm_sqr() + self.amp1.norm_sqr()
    }

    /// Population of `|1>`.
    pub fn excitation(&self) -> f64 {
        self.amp1.norm_sqr()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &TwoLevelState) -> f64 {
        (self.amp0.conj() * other.amp0 + self.amp1.conj() * other.amp1).norm_sqr()
    }

    fn distance(&self, other: &TwoLevelState) -> f64 {
        ((self.amp0 - other.amp0).norm_sqr() + (self.amp1 - other.amp1).norm_sqr()).sqrt()
    }
}

/// 2x2 propagator in the `(|0>, |1>)` basis, row-major.
pub type Propagator = [[Complex64; 2]; 2];

pub(crate) fn apply(u: &Propagator, psi: &TwoLevelState) -> TwoLevelState {
    TwoLevelState::new(
        u[0][0] * psi.amp0 + u[0][1] * psi.amp1,
        u[1][0] * psi.amp0 + u[1][1] * psi.amp1,
    )
}

fn matmul(a: &Propagator, b: &Propagator) -> Propagator {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Step-size control for [`evolve_two_level`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    /// Upper bound on `dt * sqrt(Omega^2 + x^2)` for the coarsest pass.
    pub gap_step: f64,
    /// The coarsest pass takes at least this many steps.
    pub min_steps: usize,
    /// Successive halvings stop once the final state moves by less than this.
    pub tolerance: f64,
    pub max_halvings: u32,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            gap_step: 0.01,
            min_steps: 1000,
            tolerance: 1e-9,
            max_halvings: 16,
        }
    }
}

/// Exact propagator of `-(omega sigma_x + x sigma_z) dt / 2`.
#[inline]
fn step_propagator(omega: f64, x: f64, dt: f64) -> Propagator {
    let r = omega.hypot(x);
    if r == 0.0 {
        return [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
    }
    let (s, c) = (0.5 * dt * r).sin_cos();
    let (nx, nz) = (omega / r, x / r);
    // exp(i phi n.sigma) with sigma_z = diag(-1, 1)
    let off = I * (s * nx);
    [
        [Complex64::new(c, -s * nz), off],
        [off, Complex64::new(c, s * nz)],
    ]
}

// Gauss-Legendre nodes and mixing weights of the fourth-order commutator-free product.
const GAUSS_LO: f64 = 0.5 - 0.288_675_134_594_812_9;
const GAUSS_HI: f64 = 0.5 + 0.288_675_134_594_812_9;
const CF_A: f64 = 0.25 + 0.288_675_134_594_812_9;
const CF_B: f64 = 0.25 - 0.288_675_134_594_812_9;

/// Visits the substep propagators of one pass with step bound divided by `2^halvings`.
///
/// Each substep is `exp(-i dt Hb) exp(-i dt Ha)` where `Ha`, `Hb` mix the
/// Hamiltonian at the two Gauss nodes; since `x sigma_z` is constant only the
/// transverse field is mixed. Both factors are exact and unitary.
fn for_each_step<F: FnMut(&Propagator)>(
    schedule: &ControlSchedule,
    x: f64,
    opts: &IntegratorOptions,
    halvings: u32,
    mut visit: F,
) {
    let tf = schedule.tf;
    let scale = 0.5f64.powi(halvings as i32);
    let max_dt = tf / opts.min_steps as f64;
    let mut t = 0.0;
    while t < tf {
        let r = schedule.omega(t).hypot(x);
        let mut dt = (opts.gap_step / r).min(max_dt) * scale;
        if t + dt >= tf {
            dt = tf - t;
        }
        let w1 = schedule.omega(t + GAUSS_LO * dt);
        let w2 = schedule.omega(t + GAUSS_HI * dt);
        let first = step_propagator((CF_A * w1 + CF_B * w2) * 2.0, x, 0.5 * dt);
        let second = step_propagator((CF_B * w1 + CF_A * w2) * 2.0, x, 0.5 * dt);
        visit(&matmul(&second, &first));
        t += dt;
    }
}

fn validate(schedule: &ControlSchedule, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    if !(schedule.tf > 0.0) || !schedule.tf.is_finite() {
        return Err(Error::InvalidSchedule(format!("tf must be positive, got {}", schedule.tf)));
    }
    Ok(())
}

/// Integrates `psi0` from `0` to `tf` with explicit integrator options.
pub fn evolve_two_level_with(
    schedule: &ControlSchedule,
    x: f64,
    psi0: &TwoLevelState,
    opts: &IntegratorOptions,
) -> Result<TwoLevelState> {
    validate(schedule, x)?;
    let n2 = psi0.norm_sqr();
    if (n2 - 1.0).abs() > 1e-10 {
        return Err(Error::Unnormalized(n2));
    }
    let run = |halvings| {
        let mut psi = *psi0;
        for_each_step(schedule, x, opts, halvings, |u| psi = apply(u, &psi));
        psi
    };
    let mut prev = run(0);
    for k in 1..=opts.max_halvings {
        let next = run(k);
        let change = next.distance(&prev);
        prev = next;
        if change < opts.tolerance {
            break;
        }
    }
    Ok(prev)
}

/// Solves `i d psi/dt = -(Omega(t) sigma_x + x sigma_z) psi / 2` on `[0, tf]`.
pub fn evolve_two_level(schedule: &ControlSchedule, x: f64, psi0: &TwoLevelState) -> Result<TwoLevelState> {
    evolve_two_level_with(schedule, x, psi0, &IntegratorOptions::default())
}

/// Full 2x2 propagator of the passage at field `x`, converged like [`evolve_two_level`].
pub fn passage_propagator(schedule: &ControlSchedule, x: f64) -> Result<Propagator> {
    validate(schedule, x)?;
    let opts = IntegratorOptions::default();
    let run = |halvings| {
        let mut u = [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]];
        for_each_step(schedule, x, &opts, halvings, |step| u = matmul(step, &u));
        u
    };
    let mut prev = run(0);
    for k in 1..=opts.max_halvings {
        let next = run(k);
        let change = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (next[i][j] - prev[i][j]).norm())
            .fold(0.0, f64::max);
        prev = next;
        if change < opts.tolerance {
            break;
        }
    }
    Ok(prev)
}

/// Hadamard on `|0>` followed by the passage: the hardware perceptron acting on a resting qubit.
pub fn perceptron_protocol(schedule: &ControlSchedule, x: f64) -> Result<TwoLevelState> {
    evolve_two_level(schedule, x, &TwoLevelState::plus())
}

/// `(x, P_excite(x))` for every field in `x_grid`.
pub fn response_curve(schedule: &ControlSchedule, x_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    x_grid
        .par_iter()
        .map(|&x| Ok((x, perceptron_protocol(schedule, x)?.excitation())))
        .collect()
}

/// `n` equally spaced points on `[-x_max, x_max]`.
pub fn symmetric_grid(x_max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    x_max
                } else {
                    -x_max + 2.0 * x_max * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Trapezoid mean of `values` sampled on a uniform grid, summed in index order.
fn trapezoid_mean(values: &[f64]) -> f64 {
    let n = values.len();
    let mut sum = 0.0;
    for (i, v) in values.iter().enumerate() {
        let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        sum += w * v;
    }
    sum / (n - 1) as f64
}

fn check_window(x_max: f64, n_points: usize) -> Result<()> {
    if !(x_max > 0.0) || !x_max.is_finite() {
        return Err(Error::InvalidConfig(format!("x_max must be positive, got {x_max}")));
    }
    if n_points < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 field points, got {n_points}")));
    }
    Ok(())
}

/// Per-point fidelities `|<Phi(x/Omega_f)|phi(tf, x)>|^2` on the symmetric grid.
pub fn fidelity_profile(schedule: &ControlSchedule, x_max: f64, n_points: usize) -> Result<Vec<(f64, f64)>> {
    check_window(x_max, n_points)?;
    let omegaf = schedule.omegaf.abs();
    symmetric_grid(x_max, n_points)
        .par_iter()
        .map(|&x| {
            let target = TwoLevelState::ideal(x / omegaf)?;
            let reached = perceptron_protocol(schedule, x)?;
            Ok((x, target.fidelity(&reached)))
        })
        .collect()
}

/// Mean fidelity over `x in [-x_max, x_max]`, normalized by `2 x_max`.
pub fn average_fidelity(schedule: &ControlSchedule, x_max: f64, n_points: usize) -> Result<f64> {
    let values: Vec<f64> = fidelity_profile(schedule, x_max, n_points)?
        .into_iter()
        .map(|(_, f)| f)
        .collect();
    Ok(trapezoid_mean(&values))
}

/// Sweep parameters for [`benchmark_ramps`].
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub omega0: f64,
    pub omegaf: f64,
    pub tf_grid: Vec<f64>,
    pub x_max: f64,
    pub n_points: usize,
}

impl BenchmarkConfig {
    /// Logarithmic grid of `n` durations between `tf_min` and `tf_max`.
    pub fn log_grid(tf_min: f64, tf_max: f64, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![tf_min],
            _ => (0..n)
                .map(|i| {
                    let s = i as f64 / (n - 1) as f64;
                    (tf_min.ln() + s * (tf_max.ln() - tf_min.ln())).exp()
                })
                .collect(),
        }
    }
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        BenchmarkConfig {
            omega0: DEFAULT_OMEGA0,
            omegaf: DEFAULT_OMEGAF,
            tf_grid: Self::log_grid(0.1, 50.0, 12),
            x_max: DEFAULT_X_MAX,
            n_points: DEFAULT_POINTS,
        }
    }
}

/// `c0 exp(-c1 (Omega_f tf)^c2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StretchedExpFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl StretchedExpFit {
    pub fn eval(&self, omegaf_tf: f64) -> f64 {
        self.c0 * (-self.c1 * omegaf_tf.powf(self.c2)).exp()
    }
}

/// Infidelity curves of the linear and FAQUAD ramps plus the FAQUAD fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    pub tf_grid: Vec<f64>,
    pub infidelity_linear: Vec<f64>,
    pub infidelity_faquad: Vec<f64>,
    pub fit_c0: f64,
    pub fit_c1: f64,
    pub fit_c2: f64,
}

impl FidelityReport {
    pub fn fit(&self) -> StretchedExpFit {
        StretchedExpFit { c0: self.fit_c0, c1: self.fit_c1, c2: self.fit_c2 }
    }

    /// Writes `tf,infid_linear,infid_faquad` rows.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "tf,infid_linear,infid_faquad")?;
        for ((tf, lin), faq) in self.tf_grid.iter().zip(&self.infidelity_linear).zip(&self.infidelity_faquad) {
            writeln!(out, "{tf},{lin},{faq}")?;
        }
        Ok(())
    }

    pub fn fit_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.fit())?)
    }
}

/// Duration at which a decreasing curve first crosses `level`, by log-log interpolation.
pub fn crossing_duration(tf_grid: &[f64], curve: &[f64], level: f64) -> Option<f64> {
    tf_grid
        .windows(2)
        .zip(curve.windows(2))
        .find(|(_, c)| c[0] > level && c[1] <= level)
        .map(|(t, c)| {
            let (lt0, lt1) = (t[0].ln(), t[1].ln());
            let (lc0, lc1) = (c[0].ln(), c[1].ln());
            (lt0 + (level.ln() - lc0) * (lt1 - lt0) / (lc1 - lc0)).exp()
        })
}

/// Least-squares fit of `ln eps = ln c0 - c1 s^c2` for `s = Omega_f tf`.
///
/// For fixed `c2` the problem is linear in `(ln c0, c1)`; the remaining
/// exponent is found by a bracketed one-dimensional search.
pub fn fit_stretched_exponential(omegaf_tf: &[f64], infidelity: &[f64]) -> Result<StretchedExpFit> {
    let points: Vec<(f64, f64)> = omegaf_tf
        .iter()
        .zip(infidelity)
        .filter(|(s, e)| **e > INFIDELITY_FLOOR && e.is_finite() && **s > 0.0)
        .map(|(s, e)| (*s, e.ln()))
        .collect();
    if points.len() < 4 {
        return Err(Error::FitFailure(format!(
            "only {} usable infidelity points (need 4)",
            points.len()
        )));
    }
    let linear_part = |c2: f64| {
        let n = points.len() as f64;
        let (mut su, mut sy, mut suu, mut suy) = (0.0, 0.0, 0.0, 0.0);
        for &(s, y) in &points {
            let u = s.powf(c2);
            su += u;
            sy += y;
            suu += u * u;
            suy += u * y;
        }
        let slope = (n * suy - su * sy) / (n * suu - su * su);
        let intercept = (sy - slope * su) / n;
        let sse: f64 = points
            .iter()
            .map(|&(s, y)| (y - intercept - slope * s.powf(c2)).powi(2))
            .sum();
        (intercept, -slope, sse)
    };
    // scan a coarse log grid, then refine around the best cell
    let grid: Vec<f64> = (0..=120).map(|i| 10f64.powf(-3.0 + 4.0 * i as f64 / 120.0)).collect();
    let best = (0..grid.len())
        .min_by(|&a, &b| linear_part(grid[a]).2.total_cmp(&linear_part(grid[b]).2))
        .unwrap();
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let c2 = crate::control::golden_section_max(|c| -linear_part(c).2, lo, hi, 1e-12);
    let (ln_c0, c1, _) = linear_part(c2);
    Ok(StretchedExpFit { c0: ln_c0.exp(), c1, c2 })
}

/// Average infidelity of linear and FAQUAD ramps across `config.tf_grid`.
pub fn benchmark_ramps(config: &BenchmarkConfig) -> Result<FidelityReport> {
    if config.tf_grid.is_empty() {
        return Err(Error::InvalidConfig("empty tf grid".into()));
    }
    if config.tf_grid.windows(2).any(|w| !(w[1] > w[0])) || !(config.tf_grid[0] > 0.0) {
        return Err(Error::InvalidConfig("tf grid must be positive and strictly increasing".into()));
    }
    check_window(config.x_max, config.n_points)?;
    let mut infidelity_linear = Vec::with_capacity(config.tf_grid.len());
    let mut infidelity_faquad = Vec::with_capacity(config.tf_grid.len());
    for &tf in &config.tf_grid {
        let lin = linear_schedule(config.omega0, config.omegaf, tf)?;
        let faq = default_faquad(config.omega0, config.omegaf, tf)?;
        infidelity_linear.push((1.0 - average_fidelity(&lin, config.x_max, config.n_points)?).clamp(0.0, 1.0));
        infidelity_faquad.push((1.0 - average_fidelity(&faq, config.x_max, config.n_points)?).clamp(0.0, 1.0));
    }
    let scaled: Vec<f64> = config.tf_grid.iter().map(|t| t * config.omegaf).collect();
    let fit = fit_stretched_exponential(&scaled, &infidelity_faquad)?;
    Ok(FidelityReport {
        tf_grid: config.tf_grid.clone(),
        infidelity_linear,
        infidelity_faquad,
        fit_c0: fit.c0,
        fit_c1: fit.c1,
        fit_c2: fit.c2,
    })
}

/// Writes `x,p_excite,g_ideal` rows for a response curve.
pub fn write_response_csv<W: Write>(out: &mut W, curve: &[(f64, f64)], omegaf: f64) -> Result<()> {
    writeln!(out, "x,p_excite,g_ideal")?;
    for &(x, p) in curve {
        writeln!(out, "{x},{p},{}", ActivationKind::Algebraic.f(x / omegaf)?)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::faquad_schedule;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rabi_rotation() {
        let omega = 2.0;
        for tf in [0.3, 1.0, 2.5] {
            let s = ControlSchedule::constant(omega, tf).unwrap();
            let psi = evolve_two_level(&s, 0.0, &TwoLevelState::resting()).unwrap();
            assert_abs_diff_eq!(psi.excitation(), (omega * tf / 2.0).sin().powi(2), epsilon = 1e-12);
            assert_abs_diff_eq!(psi.norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn diagonal_hamiltonian_only_adds_phase() {
        let (x, tf) = (1.7, 3.0);
        let s = ControlSchedule::constant(0.0, tf).unwrap();
        let psi = evolve_two_level(&s, x, &TwoLevelState::plus()).unwrap();
        assert_abs_diff_eq!(psi.amp0.norm_sqr(), 0.5, epsilon = 1e-12);
        let rel = psi.amp1 / psi.amp0;
        let expected = Complex64::from_polar(1.0, x * tf);
        assert_abs_diff_eq!((rel - expected).norm(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn faquad_passage_reaches_sigmoid() {
        let s = faquad_schedule(100.0, 1.0, 10.0, crate::control::optimal_design_field(1.0).unwrap()).unwrap();
        let p = perceptron_protocol(&s, 1.0).unwrap().excitation();
        assert!((p - 0.853_553_390_593_273_8).abs() <= 0.01, "p = {p}");
        assert!(perceptron_protocol(&s, 10.0).unwrap().excitation() >= 0.98);
        let p0 = perceptron_protocol(&s, 0.0).unwrap().excitation();
        assert_abs_diff_eq!(p0, 0.5, epsilon = 1e-9);
        let plus = perceptron_protocol(&s, 3.0).unwrap().excitation();
        let minus = perceptron_protocol(&s, -3.0).unwrap().excitation();
        assert!((plus + minus - 1.0).abs() <= 2e-2);
    }

    #[test]
    fn unnormalized_input_rejected() {
        let s = ControlSchedule::constant(1.0, 1.0).unwrap();
        let bad = TwoLevelState::new(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        assert!(matches!(evolve_two_level(&s, 0.0, &bad), Err(Error::Unnormalized(_))));
    }

    #[test]
    fn empty_response_curve() {
        let s = ControlSchedule::constant(1.0, 1.0).unwrap();
        assert!(response_curve(&s, &[]).unwrap().is_empty());
    }

    #[test]
    fn fidelity_window_validation() {
        let s = ControlSchedule::constant(1.0, 1.0).unwrap();
        assert!(average_fidelity(&s, 0.0, 11).is_err());
        assert!(average_fidelity(&s, 1.0, 1).is_err());
    }

    #[test]
    fn sudden_limit_matches_overlap_with_plus() {
        // tf -> 0 leaves |+>; |<Phi|+>|^2 = (1 + S(x/Omega_f)) / 2
        let s = faquad_schedule(100.0, 1.0, 1e-9, 1.272).unwrap();
        let (x_max, n) = (10.0, 41);
        let expected: Vec<f64> = symmetric_grid(x_max, n)
            .iter()
            .map(|&x| 0.5 * (1.0 + ActivationKind::Algebraic.cs(x).unwrap().1))
            .collect();
        let got = average_fidelity(&s, x_max, n).unwrap();
        assert_abs_diff_eq!(got, trapezoid_mean(&expected), epsilon = 1e-8);
    }

    #[test]
    fn stretched_exponential_fit_recovers_parameters() {
        let truth = StretchedExpFit { c0: 26.838, c1: 6.577, c2: 0.150 };
        let s: Vec<f64> = BenchmarkConfig::log_grid(0.1, 50.0, 10);
        let e: Vec<f64> = s.iter().map(|&v| truth.eval(v)).collect();
        let fit = fit_stretched_exponential(&s, &e).unwrap();
        assert!((fit.c2 - truth.c2).abs() < 1e-4, "{fit:?}");
        assert!((fit.c1 - truth.c1).abs() / truth.c1 < 1e-3);
        assert!((fit.c0 - truth.c0).abs() / truth.c0 < 1e-3);
        assert!(fit_stretched_exponential(&s[..3], &e[..3]).is_err());
        let floor = vec![1e-13; 10];
        assert!(fit_stretched_exponential(&s, &floor).is_err());
    }

    #[test]
    fn crossing_interpolates_in_log_space() {
        let t = [1.0, 10.0, 100.0];
        let c = [1.0, 0.1, 0.01];
        assert_abs_diff_eq!(crossing_duration(&t, &c, 0.1).unwrap(), 10.0, epsilon = 1e-12);
        assert_abs_diff_eq!(crossing_duration(&t, &c, 0.0316227766).unwrap(), 31.6227766, epsilon = 1e-6);
        assert!(crossing_duration(&t, &c, 1e-3).is_none());
    }

    #[test]
    fn benchmark_rejects_bad_grids() {
        let mut cfg = BenchmarkConfig { tf_grid: vec![], ..Default::default() };
        assert!(benchmark_ramps(&cfg).is_err());
        cfg.tf_grid = vec![2.0, 1.0];
        assert!(benchmark_ramps(&cfg).is_err());
    }
    #[test]
    fn time_reversal_returns_initial_state() {
        let s = faquad_schedule(100.0, 1.0, 4.0, 1.272).unwrap();
        let back = s.time_reversed();
        for x in [-3.0, 0.0, 0.7, 5.0] {
            for psi0 in [TwoLevelState::plus(), TwoLevelState::resting()] {
                let fwd = evolve_two_level(&s, x, &psi0).unwrap();
                let ret = evolve_two_level(&back, -x, &fwd).unwrap();
                assert!(1.0 - ret.fidelity(&psi0) < 1e-8, "x = {x}");
                assert_abs_diff_eq!(fwd.norm_sqr(), 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn halving_the_step_is_below_tolerance() {
        let s = faquad_schedule(100.0, 1.0, 10.0, 1.272).unwrap();
        let base = IntegratorOptions::default();
        let fine = IntegratorOptions { gap_step: base.gap_step / 2.0, min_steps: 2 * base.min_steps, ..base };
        for x in [-8.0, -1.0, 0.3, 2.0, 10.0] {
            let a = evolve_two_level_with(&s, x, &TwoLevelState::plus(), &base).unwrap().excitation();
            let b = evolve_two_level_with(&s, x, &TwoLevelState::plus(), &fine).unwrap().excitation();
            assert!((a - b).abs() < 1e-8, "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn gap_never_below_transverse_field() {
        let s = faquad_schedule(100.0, 1.0, 10.0, 1.272).unwrap();
        for x in symmetric_grid(10.0, 41) {
            for k in 0..=200 {
                let omega = s.omega(10.0 * k as f64 / 200.0);
                let gap = crate::control::eigensystem(omega, x).unwrap().gap();
                assert!(gap >= omega.abs());
            }
        }
    }

    #[test]
    fn short_passage_flattens_response() {
        let slow = faquad_schedule(100.0, 1.0, 10.0, 1.272).unwrap();
        let fast = faquad_schedule(100.0, 1.0, 0.25, 1.272).unwrap();
        let grid = symmetric_grid(10.0, 41);
        let curve = response_curve(&fast, &grid).unwrap();
        assert!(curve.windows(2).all(|w| w[1].1 >= w[0].1));
        let span = |s: &ControlSchedule| {
            perceptron_protocol(s, 10.0).unwrap().excitation() - perceptron_protocol(s, -10.0).unwrap().excitation()
        };
        assert!(span(&fast) < span(&slow));
    }

    #[test]
    fn faquad_beats_linear_at_moderate_durations() {
        for tf in [1.0, 3.0, 10.0, 30.0] {
            let lin = linear_schedule(100.0, 1.0, tf).unwrap();
            let faq = default_faquad(100.0, 1.0, tf).unwrap();
            let (fl, ff) = (average_fidelity(&lin, 10.0, 41).unwrap(), average_fidelity(&faq, 10.0, 41).unwrap());
            assert!(ff > fl, "tf = {tf}: faquad {ff} linear {fl}");
        }
    }
}
