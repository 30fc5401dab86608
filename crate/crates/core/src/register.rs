// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense n-qubit statevector and the perceptron gates acting on it.
//!
//! Qubit `k` is bit `k` of the amplitude index (little-endian), and character
//! `k` of a bitstring is the state of qubit `k`. `sigma_z |1> = +|1>`, so the
//! active probability of a qubit is `(1 + <sigma_z>) / 2`.

use std::collections::HashMap;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::activation::ActivationKind;
use crate::control::ControlSchedule;
use crate::dynamics::{passage_propagator, Propagator};
use crate::error::{Error, Result};

/// Largest register this crate will allocate.
pub const MAX_QUBITS: usize = 24;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRegister {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// How a perceptron gate is realized.
#[derive(Debug, Clone, PartialEq)]
pub enum GateMode {
    /// The exact rotation `exp(i chi(x) sigma_y)` per control sector.
    Ideal,
    /// Hadamard followed by an adiabatic passage under the given control.
    Hardware(ControlSchedule),
}

/// Perceptron gate on `target` with input field `x = sum_k w_k z_k - bias`, `z_k = +-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronGateSpec {
    pub target: usize,
    /// `(source qubit, weight)` pairs.
    pub weights: Vec<(usize, f64)>,
    pub bias: f64,
    pub activation: ActivationKind,
    pub mode: GateMode,
}

impl PerceptronGateSpec {
    pub fn ideal(target: usize, weights: Vec<(usize, f64)>, bias: f64, activation: ActivationKind) -> Self {
        PerceptronGateSpec { target, weights, bias, activation, mode: GateMode::Ideal }
    }

    pub fn hardware(target: usize, weights: Vec<(usize, f64)>, bias: f64, schedule: ControlSchedule) -> Self {
        PerceptronGateSpec {
            target,
            weights,
            bias,
            activation: ActivationKind::Algebraic,
            mode: GateMode::Hardware(schedule),
        }
    }

    pub fn sources(&self) -> Vec<usize> {
        self.weights.iter().map(|&(k, _)| k).collect()
    }

    /// Field seen by the target in control sector `sector` (bit `i` = state of source `i`).
    pub fn sector_field(&self, sector: usize) -> f64 {
        let mut x = -self.bias;
        for (i, &(_, w)) in self.weights.iter().enumerate() {
            x += if sector >> i & 1 == 1 { w } else { -w };
        }
        x
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        check_qubit(self.target, n_qubits)?;
        for (i, &(k, w)) in self.weights.iter().enumerate() {
            check_qubit(k, n_qubits)?;
            if k == self.target {
                return Err(Error::InvalidGate(format!("qubit {k} is both target and source")));
            }
            if self.weights[..i].iter().any(|&(j, _)| j == k) {
                return Err(Error::InvalidGate(format!("source {k} listed twice")));
            }
            if !w.is_finite() {
                return Err(Error::NonFinite(w));
            }
        }
        if !self.bias.is_finite() {
            return Err(Error::NonFinite(self.bias));
        }
        Ok(())
    }
}

fn check_qubit(index: usize, n_qubits: usize) -> Result<()> {
    if index < n_qubits {
        Ok(())
    } else {
        Err(Error::QubitIndex { index, n_qubits })
    }
}

/// Real rotation taking `|0>` to `cos(angle)|0> + sin(angle)|1>`.
pub fn ry(angle: f64) -> Propagator {
    let (s, c) = angle.sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

pub fn hadamard() -> Propagator {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Packs the bits of `index` at positions `sources` into a sector number.
#[inline]
fn sector_of(index: usize, sources: &[usize]) -> usize {
    let mut s = 0;
    for (i, &k) in sources.iter().enumerate() {
        s |= (index >> k & 1) << i;
    }
    s
}

impl QuantumRegister {
    /// `|0...0>` on `n` qubits.
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::SizeMismatch { expected: 1, found: 0 });
        }
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: n, cap: MAX_QUBITS });
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(QuantumRegister { n_qubits: n, amps })
    }

    /// Computational basis state; `bits[k]` is the state of qubit `k`.
    pub fn init_basis(n: usize, bits: &str) -> Result<Self> {
        let index = parse_bits(bits)?;
        if bits.len() != n {
            return Err(Error::SizeMismatch { expected: n, found: bits.len() });
        }
        let mut reg = Self::zeros(n)?;
        reg.amps[0] = ZERO;
        reg.amps[index] = ONE;
        Ok(reg)
    }

    /// Register with the given amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::SizeMismatch { expected: len.next_power_of_two().max(2), found: len });
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::TooManyQubits { requested: n, cap: MAX_QUBITS });
        }
        let reg = QuantumRegister { n_qubits: n, amps };
        let n2 = reg.norm_sqr();
        if (n2 - 1.0).abs() > 1e-10 {
            return Err(Error::Unnormalized(n2));
        }
        Ok(reg)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bitstring of basis index `index`, qubit 0 first.
    pub fn bitstring(&self, index: usize) -> String {
        (0..self.n_qubits).map(|k| if index >> k & 1 == 1 { '1' } else { '0' }).collect()
    }

    /// Applies `u` to `target`, choosing the 2x2 block by the control sector of `sources`.
    ///
    /// `table` has one entry per sector, `2^sources.len()` in total.
    pub fn apply_sector_unitaries(&mut self, target: usize, sources: &[usize], table: &[Propagator]) -> Result<()> {
        check_qubit(target, self.n_qubits)?;
        for &k in sources {
            check_qubit(k, self.n_qubits)?;
            if k == target {
                return Err(Error::InvalidGate(format!("qubit {k} is both target and source")));
            }
        }
        if table.len() != 1 << sources.len() {
            return Err(Error::SizeMismatch { expected: 1 << sources.len(), found: table.len() });
        }
        let half = 1usize << target;
        self.amps
            .par_chunks_mut(2 * half)
            .enumerate()
            .with_min_len((4096 / (2 * half)).max(1))
            .for_each(|(block, chunk)| {
                let base = block * 2 * half;
                let (lo, hi) = chunk.split_at_mut(half);
                for (i, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let u = &table[sector_of(base + i, sources)];
                    let (b0, b1) = (*a0, *a1);
                    *a0 = u[0][0] * b0 + u[0][1] * b1;
                    *a1 = u[1][0] * b0 + u[1][1] * b1;
                }
            });
        Ok(())
    }

    /// Single-qubit unitary on `target`.
    pub fn apply_single(&mut self, target: usize, u: &Propagator) -> Result<()> {
        self.apply_sector_unitaries(target, &[], std::slice::from_ref(u))
    }

    pub fn apply_hadamard(&mut self, target: usize) -> Result<()> {
        self.apply_single(target, &hadamard())
    }

    /// Rotation by `angles[sector]` on `target`, conditioned on the computational state of `sources`.
    pub fn apply_conditional_ry(&mut self, target: usize, sources: &[usize], angles: &[f64]) -> Result<()> {
        let table: Vec<Propagator> = angles.iter().map(|&a| ry(a)).collect();
        self.apply_sector_unitaries(target, sources, &table)
    }

    /// Applies the gate in whichever mode it specifies.
    pub fn apply_perceptron(&mut self, gate: &PerceptronGateSpec) -> Result<()> {
        match gate.mode {
            GateMode::Ideal => self.apply_ideal_perceptron(gate),
            GateMode::Hardware(_) => self.apply_hardware_perceptron(gate),
        }
    }

    /// `|0>` on the target goes to `sqrt(1 - f(x))|0> + sqrt(f(x))|1>` in every sector.
    pub fn apply_ideal_perceptron(&mut self, gate: &PerceptronGateSpec) -> Result<()> {
        if gate.mode != GateMode::Ideal {
            return Err(Error::InvalidGate("expected an ideal-mode gate".into()));
        }
        gate.validate(self.n_qubits)?;
        let angles = (0..1usize << gate.weights.len())
            .map(|s| gate.activation.chi(gate.sector_field(s)))
            .collect::<Result<Vec<f64>>>()?;
        self.apply_conditional_ry(gate.target, &gate.sources(), &angles)
    }

    /// Hadamard then the adiabatic passage at each sector's field, dynamical phases included.
    pub fn apply_hardware_perceptron(&mut self, gate: &PerceptronGateSpec) -> Result<()> {
        let table = hardware_sector_table(gate, self.n_qubits)?;
        self.apply_sector_unitaries(gate.target, &gate.sources(), &table)
    }

    /// `<sigma_z>` of `qubit`.
    pub fn z_expectation(&self, qubit: usize) -> Result<f64> {
        Ok(2.0 * self.excitation_probability(qubit)? - 1.0)
    }

    /// Probability of finding `qubit` in `|1>`.
    pub fn excitation_probability(&self, qubit: usize) -> Result<f64> {
        check_qubit(qubit, self.n_qubits)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i >> qubit & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// `P(query = 1 | condition_qubits = condition_bits)`.
    pub fn conditional_probability(&self, condition_qubits: &[usize], condition_bits: &str, query_qubit: usize) -> Result<f64> {
        check_qubit(query_qubit, self.n_qubits)?;
        for &k in condition_qubits {
            check_qubit(k, self.n_qubits)?;
        }
        let bits = parse_bits(condition_bits)?;
        if condition_bits.len() != condition_qubits.len() {
            return Err(Error::SizeMismatch { expected: condition_qubits.len(), found: condition_bits.len() });
        }
        let (mut mask, mut want) = (0usize, 0usize);
        for (i, &k) in condition_qubits.iter().enumerate() {
            mask |= 1 << k;
            want |= (bits >> i & 1) << k;
        }
        let (mut joint, mut marginal) = (0.0, 0.0);
        for (i, a) in self.amps.iter().enumerate() {
            if i & mask == want {
                let p = a.norm_sqr();
                marginal += p;
                if i >> query_qubit & 1 == 1 {
                    joint += p;
                }
            }
        }
        if marginal <= 0.0 {
            return Err(Error::ZeroProbabilityCondition);
        }
        Ok(joint / marginal)
    }

    /// Probability of every basis state, by index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Writes `index,bitstring,re,im` rows.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "index,bitstring,re,im")?;
        for (i, a) in self.amps.iter().enumerate() {
            writeln!(out, "{i},{},{},{}", self.bitstring(i), a.re, a.im)?;
        }
        Ok(())
    }
}

/// Bitstring to basis index, character `k` giving bit `k`.
pub fn parse_bits(bits: &str) -> Result<usize> {
    if bits.len() > MAX_QUBITS {
        return Err(Error::InvalidBitstring(bits.to_string()));
    }
    bits.chars().enumerate().try_fold(0usize, |acc, (k, c)| match c {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << k),
        _ => Err(Error::InvalidBitstring(bits.to_string())),
    })
}

/// Per-sector propagators `U(x(z)) H` of a hardware gate.
///
/// Sectors sharing a field value share one integration.
pub(crate) fn hardware_sector_table(gate: &PerceptronGateSpec, n_qubits: usize) -> Result<Vec<Propagator>> {
    let schedule = match &gate.mode {
        GateMode::Hardware(s) => s,
        GateMode::Ideal => return Err(Error::InvalidGate("expected a hardware-mode gate".into())),
    };
    gate.validate(n_qubits)?;
    let fields: Vec<f64> = (0..1usize << gate.weights.len()).map(|s| gate.sector_field(s)).collect();
    let mut distinct: Vec<f64> = Vec::new();
    let mut slot: HashMap<u64, usize> = HashMap::new();
    for &x in &fields {
        slot.entry(x.to_bits()).or_insert_with(|| {
            distinct.push(x);
            distinct.len() - 1
        });
    }
    let props = distinct
        .par_iter()
        .map(|&x| passage_propagator(schedule, x))
        .collect::<Result<Vec<Propagator>>>()?;
    let h = hadamard();
    Ok(fields
        .iter()
        .map(|x| {
            let u = &props[slot[&x.to_bits()]];
            let mut out = [[ZERO; 2]; 2];
            for (i, row) in out.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = u[i][0] * h[0][j] + u[i][1] * h[1][j];
                }
            }
            out
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{default_faquad, faquad_schedule};
    use crate::dynamics::{perceptron_protocol, TwoLevelState};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_register(n: usize, rng: &mut ChaCha8Rng) -> QuantumRegister {
        let mut amps: Vec<Complex64> = (0..1 << n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        QuantumRegister::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn basis_states() {
        let r = QuantumRegister::init_basis(1, "0").unwrap();
        assert_eq!(r.amplitudes(), &[ONE, ZERO]);
        let r = QuantumRegister::init_basis(2, "10").unwrap();
        assert_eq!(r.amplitudes()[1], ONE);
        assert_abs_diff_eq!(r.norm_sqr(), 1.0);
        assert_eq!(r.bitstring(1), "10");
        assert!(matches!(QuantumRegister::init_basis(3, "10"), Err(Error::SizeMismatch { .. })));
        assert!(matches!(QuantumRegister::init_basis(2, "1x"), Err(Error::InvalidBitstring(_))));
        assert!(matches!(QuantumRegister::zeros(MAX_QUBITS + 1), Err(Error::TooManyQubits { .. })));
    }

    #[test]
    fn hadamard_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut r = QuantumRegister::zeros(1).unwrap();
        r.apply_hadamard(0).unwrap();
        assert_abs_diff_eq!(r.amplitudes()[1].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        let r0 = random_register(3, &mut rng);
        let mut r = r0.clone();
        r.apply_hadamard(1).unwrap();
        r.apply_hadamard(1).unwrap();
        for (a, b) in r.amplitudes().iter().zip(r0.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        assert!(matches!(r.apply_hadamard(3), Err(Error::QubitIndex { .. })));
    }

    #[test]
    fn ideal_gate_examples() {
        let mut r = QuantumRegister::zeros(1).unwrap();
        r.apply_ideal_perceptron(&PerceptronGateSpec::ideal(0, vec![], 0.0, ActivationKind::Algebraic)).unwrap();
        assert_abs_diff_eq!(r.amplitudes()[0].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(r.amplitudes()[1].re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);

        let mut r = QuantumRegister::init_basis(2, "10").unwrap();
        r.apply_ideal_perceptron(&PerceptronGateSpec::ideal(1, vec![(0, 5.0)], 0.0, ActivationKind::Algebraic))
            .unwrap();
        let f5 = 0.5 * (1.0 + 5.0 / 26f64.sqrt());
        assert_abs_diff_eq!(r.excitation_probability(1).unwrap(), f5, epsilon = 1e-14);
        assert_abs_diff_eq!(r.excitation_probability(1).unwrap(), 0.990290, epsilon = 1e-6);

        let mut r = QuantumRegister::zeros(1).unwrap();
        r.apply_ideal_perceptron(&PerceptronGateSpec::ideal(0, vec![], -1.0, ActivationKind::Algebraic)).unwrap();
        assert_abs_diff_eq!(r.excitation_probability(0).unwrap(), 0.853553, epsilon = 1e-6);
    }

    #[test]
    fn invalid_gates_rejected() {
        let mut r = QuantumRegister::zeros(2).unwrap();
        let g = PerceptronGateSpec::ideal(0, vec![(0, 1.0)], 0.0, ActivationKind::Algebraic);
        assert!(matches!(r.apply_ideal_perceptron(&g), Err(Error::InvalidGate(_))));
        let g = PerceptronGateSpec::ideal(0, vec![(2, 1.0)], 0.0, ActivationKind::Algebraic);
        assert!(matches!(r.apply_ideal_perceptron(&g), Err(Error::QubitIndex { .. })));
        let g = PerceptronGateSpec::ideal(0, vec![(1, 1.0), (1, 2.0)], 0.0, ActivationKind::Algebraic);
        assert!(r.apply_ideal_perceptron(&g).is_err());
        let s = default_faquad(100.0, 1.0, 1.0).unwrap();
        let g = PerceptronGateSpec::hardware(0, vec![], 0.0, s);
        assert!(r.apply_ideal_perceptron(&g).is_err());
    }

    #[test]
    fn observables_follow_convention() {
        let r = QuantumRegister::init_basis(1, "1").unwrap();
        assert_eq!(r.z_expectation(0).unwrap(), 1.0);
        assert_eq!(r.excitation_probability(0).unwrap(), 1.0);
        let mut r = QuantumRegister::zeros(1).unwrap();
        r.apply_hadamard(0).unwrap();
        assert_abs_diff_eq!(r.excitation_probability(0).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn conditional_probabilities() {
        let mut r = QuantumRegister::zeros(2).unwrap();
        r.apply_single(0, &ry(0.3)).unwrap();
        r.apply_single(1, &ry(1.1)).unwrap();
        let p = r.excitation_probability(1).unwrap();
        assert_abs_diff_eq!(r.conditional_probability(&[0], "1", 1).unwrap(), p, epsilon = 1e-14);
        assert_abs_diff_eq!(r.conditional_probability(&[0], "0", 1).unwrap(), p, epsilon = 1e-14);
        let r = QuantumRegister::init_basis(2, "00").unwrap();
        assert!(matches!(r.conditional_probability(&[0], "1", 1), Err(Error::ZeroProbabilityCondition)));
    }

    #[test]
    fn hardware_gate_single_sector_matches_protocol() {
        let s = default_faquad(100.0, 1.0, 3.0).unwrap();
        for x in [-2.0, 0.4, 1.5] {
            let mut r = QuantumRegister::zeros(1).unwrap();
            r.apply_hardware_perceptron(&PerceptronGateSpec::hardware(0, vec![], -x, s.clone())).unwrap();
            let psi = perceptron_protocol(&s, x).unwrap();
            assert!((r.amplitudes()[0] - psi.amp0).norm() < 1e-9);
            assert!((r.amplitudes()[1] - psi.amp1).norm() < 1e-9);
        }
    }

    /// Heisenberg relations of the ideal gate checked on the full register.
    #[test]
    fn heisenberg_identities_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let kind = ActivationKind::Algebraic;
        for _ in 0..200 {
            let gate = PerceptronGateSpec::ideal(
                2,
                vec![(0, rng.gen_range(-3.0..3.0)), (1, rng.gen_range(-3.0..3.0))],
                rng.gen_range(-2.0..2.0),
                kind,
            );
            let psi = random_register(3, &mut rng);
            let mut out = psi.clone();
            out.apply_ideal_perceptron(&gate).unwrap();
            // <psi| C sigma_z + S sigma_x |psi> and <psi| -S sigma_z + C sigma_x |psi>, sector by sector
            let (mut rhs_z, mut rhs_x) = (0.0, 0.0);
            let a = psi.amplitudes();
            for i in 0..8usize {
                if i >> 2 & 1 == 1 {
                    continue;
                }
                let (c, s) = kind.cs(gate.sector_field(sector_of(i, &[0, 1]))).unwrap();
                let (a0, a1) = (a[i], a[i | 4]);
                let z = a1.norm_sqr() - a0.norm_sqr();
                let x = 2.0 * (a0.conj() * a1).re;
                rhs_z += c * z + s * x;
                rhs_x += -s * z + c * x;
            }
            let b = out.amplitudes();
            let lhs_x: f64 = (0..8usize).filter(|i| i >> 2 & 1 == 0).map(|i| 2.0 * (b[i].conj() * b[i | 4]).re).sum();
            assert_abs_diff_eq!(out.z_expectation(2).unwrap(), rhs_z, epsilon = 1e-10);
            assert_abs_diff_eq!(lhs_x, rhs_x, epsilon = 1e-10);
            assert_abs_diff_eq!(out.norm_sqr(), 1.0, epsilon = 1e-10);
        }
    }

    /// Fourth-order Runge-Kutta on the full 16-dimensional Hamiltonian.
    fn dense_evolution(schedule: &ControlSchedule, gate: &PerceptronGateSpec, psi: &[Complex64], steps: usize) -> Vec<Complex64> {
        let dim = psi.len();
        let t_bit = 1usize << gate.target;
        let sources = gate.sources();
        let field: Vec<f64> = (0..dim).map(|i| gate.sector_field(sector_of(i, &sources))).collect();
        // H = -(Omega sigma_x^t + x(z) sigma_z^t) / 2, applied as -i H psi
        let deriv = |t: f64, v: &[Complex64]| -> Vec<Complex64> {
            let omega = schedule.omega(t);
            (0..dim)
                .map(|i| {
                    let sz = if i & t_bit != 0 { 1.0 } else { -1.0 };
                    let h = -0.5 * (omega * v[i ^ t_bit] + field[i] * sz * v[i]);
                    Complex64::new(0.0, -1.0) * h
                })
                .collect()
        };
        let mut v = psi.to_vec();
        let dt = schedule.tf / steps as f64;
        for n in 0..steps {
            let t = n as f64 * dt;
            let k1 = deriv(t, &v);
            let y: Vec<_> = v.iter().zip(&k1).map(|(a, k)| a + k * (0.5 * dt)).collect();
            let k2 = deriv(t + 0.5 * dt, &y);
            let y: Vec<_> = v.iter().zip(&k2).map(|(a, k)| a + k * (0.5 * dt)).collect();
            let k3 = deriv(t + 0.5 * dt, &y);
            let y: Vec<_> = v.iter().zip(&k3).map(|(a, k)| a + k * dt).collect();
            let k4 = deriv(t + dt, &y);
            for i in 0..dim {
                v[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
            }
        }
        v
    }

    #[test]
    fn sector_decomposition_matches_dense_integration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let schedule = faquad_schedule(8.0, 1.0, 4.0, 1.272).unwrap();
        let gate = PerceptronGateSpec::hardware(
            2,
            vec![(0, 0.8), (1, -1.3), (3, 0.45)],
            0.2,
            schedule.clone(),
        );
        // sources in an arbitrary state, target resting
        let mut psi = random_register(4, &mut rng);
        let amps: Vec<Complex64> = psi.amplitudes().iter().enumerate().map(|(i, a)| if i & 4 != 0 { ZERO } else { *a }).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        psi = QuantumRegister::from_amplitudes(amps.iter().map(|a| a / norm).collect()).unwrap();
        let mut start = psi.clone();
        start.apply_hadamard(2).unwrap();
        let dense = dense_evolution(&schedule, &gate, start.amplitudes(), 40_000);
        let mut sector = psi.clone();
        sector.apply_hardware_perceptron(&gate).unwrap();
        let err = sector.amplitudes().iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-8, "max amplitude error {err}");
    }

    #[test]
    fn sector_phases_do_not_change_z_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let schedule = default_faquad(20.0, 1.0, 2.0).unwrap();
        for _ in 0..5 {
            // inputs 0, 1 in superposition; hidden 2 reads both; output 3 reads all three
            let gates = [
                PerceptronGateSpec::hardware(2, vec![(0, rng.gen_range(-2.0..2.0)), (1, rng.gen_range(-2.0..2.0))], rng.gen_range(-1.0..1.0), schedule.clone()),
                PerceptronGateSpec::hardware(
                    3,
                    vec![(0, rng.gen_range(-2.0..2.0)), (1, rng.gen_range(-2.0..2.0)), (2, rng.gen_range(-2.0..2.0))],
                    rng.gen_range(-1.0..1.0),
                    schedule.clone(),
                ),
            ];
            let mut with_phase = QuantumRegister::zeros(4).unwrap();
            with_phase.apply_single(0, &ry(rng.gen_range(0.0..1.5))).unwrap();
            with_phase.apply_single(1, &ry(rng.gen_range(0.0..1.5))).unwrap();
            let mut stripped = with_phase.clone();
            for g in &gates {
                with_phase.apply_hardware_perceptron(g).unwrap();
                let table: Vec<Propagator> = hardware_sector_table(g, 4)
                    .unwrap()
                    .iter()
                    .map(|u| ry(u[1][0].norm().atan2(u[0][0].norm())))
                    .collect();
                stripped.apply_sector_unitaries(g.target, &g.sources(), &table).unwrap();
            }
            for (p, q) in with_phase.probabilities().iter().zip(stripped.probabilities()) {
                assert_abs_diff_eq!(*p, q, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn state_dump_csv() {
        let r = QuantumRegister::init_basis(2, "01").unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,bitstring,re,im");
        assert_eq!(lines[3], "2,01,1,0");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn plus_state_agrees_with_two_level_type() {
        let mut r = QuantumRegister::zeros(1).unwrap();
        r.apply_hadamard(0).unwrap();
        let p = TwoLevelState::plus();
        assert_abs_diff_eq!((r.amplitudes()[1] - p.amp1).norm(), 0.0, epsilon = 1e-15);
    }

    proptest::proptest! {
        #[test]
        fn gates_preserve_norm(seed in 0u64..1000, w0 in -4.0f64..4.0, w1 in -4.0f64..4.0, b in -3.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut r = random_register(3, &mut rng);
            r.apply_ideal_perceptron(&PerceptronGateSpec::ideal(1, vec![(0, w0), (2, w1)], b, ActivationKind::Logistic)).unwrap();
            proptest::prop_assert!((r.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }
}
