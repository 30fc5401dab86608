// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

//! Sigmoid-like excitation profiles and the quantities derived from them.
//!
//! Every activation maps a real field `x` to an excitation probability
//! `f(x)` in `[0, 1]`. The perceptron gate rotates its target by the angle
//! `chi(x) = arcsin(sqrt(f(x)))`, and in the Heisenberg picture the target's
//! `sigma_z` picks up the coefficients `C = 1 - 2f` and `S = 2 sqrt(f (1 - f))`.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `k` accepted by [`ActivationKind::CaoArctan`]; `2^k` must fit an `i32` exponent.
pub const MAX_CAO_ORDER: u32 = 30;

/// Family of excitation profiles.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivationKind {
    /// `f(x) = (1 + x / sqrt(1 + x^2)) / 2`, the ground-state excitation of the Ising passage.
    #[default]
    Algebraic,
    /// `f(x) = 1 / (1 + e^-x)`.
    Logistic,
    /// McCulloch-Pitts step with `f(0) = 1/2`.
    Step,
    /// Repeat-until-success angle `arctan(tan(x)^(2^k))`, only defined on `|x| <= pi/4`.
    CaoArctan(u32),
}

impl ActivationKind {
    fn check(self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        if let ActivationKind::CaoArctan(k) = self {
            if k == 0 || k > MAX_CAO_ORDER {
                return Err(Error::InvalidConfig(format!(
                    "CaoArctan order must be in 1..={MAX_CAO_ORDER}, got {k}"
                )));
            }
            if x.abs() > FRAC_PI_4 {
                return Err(Error::OutOfDomain { x, bound: FRAC_PI_4 });
            }
        }
        Ok(())
    }

    /// Returns `(f, 1 - f)`, each computed without cancellation.
    fn probabilities(self, x: f64) -> Result<(f64, f64)> {
        self.check(x)?;
        let pair = match self {
            ActivationKind::Algebraic => {
                let r = x.hypot(1.0);
                // 1 - |x|/r = 1 / (r (r + |x|))
                let small = 0.5 / (r * (r + x.abs()));
                let large = 0.5 * (1.0 + x.abs() / r);
                if x >= 0.0 {
                    (large, small)
                } else {
                    (small, large)
                }
            }
            ActivationKind::Logistic => (1.0 / (1.0 + (-x).exp()), 1.0 / (1.0 + x.exp())),
            ActivationKind::Step => {
                if x > 0.0 {
                    (1.0, 0.0)
                } else if x < 0.0 {
                    (0.0, 1.0)
                } else {
                    (0.5, 0.5)
                }
            }
            ActivationKind::CaoArctan(k) => {
                let angle = cao_angle(k, x);
                let (s, c) = angle.sin_cos();
                (s * s, c * c)
            }
        };
        Ok(pair)
    }

    /// Excitation probability `f(x)`.
    pub fn f(self, x: f64) -> Result<f64> {
        Ok(self.probabilities(x)?.0)
    }

    /// Heisenberg coefficients `(C, S) = (1 - 2f, 2 sqrt(f (1 - f)))`.
    pub fn cs(self, x: f64) -> Result<(f64, f64)> {
        let (f, g) = self.probabilities(x)?;
        Ok((g - f, 2.0 * (f * g).sqrt()))
    }

    /// Rotation angle `chi(x) = arcsin(sqrt(f(x)))`, in `[0, pi/2]`.
    pub fn chi(self, x: f64) -> Result<f64> {
        let (f, g) = self.probabilities(x)?;
        Ok(f.sqrt().atan2(g.sqrt()))
    }

    /// Analytic derivative of [`chi`](Self::chi).
    ///
    /// Where `f` saturates at 0 or 1 the analytic limit is returned. The step
    /// activation has no derivative at the origin.
    pub fn dchi_dx(self, x: f64) -> Result<f64> {
        self.check(x)?;
        let d = match self {
            // chi = pi/4 + atan(x)/2
            ActivationKind::Algebraic => 0.5 / (1.0 + x * x),
            ActivationKind::Logistic => {
                let (f, g) = self.probabilities(x)?;
                0.5 * (f * g).sqrt()
            }
            ActivationKind::Step => {
                if x == 0.0 {
                    return Err(Error::NotDifferentiable { x });
                }
                0.0
            }
            ActivationKind::CaoArctan(k) => {
                let n = 1i32 << k;
                let t = x.tan();
                let tn = t.powi(n);
                f64::from(n) * t.powi(n - 1) * (1.0 + t * t) / (1.0 + tn * tn)
            }
        };
        Ok(d)
    }

    /// Slope of `f` at the origin, used by the linear-regime readout.
    pub fn slope_at_origin(self) -> Result<f64> {
        match self {
            ActivationKind::Algebraic => Ok(0.5),
            ActivationKind::Logistic => Ok(0.25),
            ActivationKind::Step => Err(Error::NotDifferentiable { x: 0.0 }),
            ActivationKind::CaoArctan(_) => Ok(0.0),
        }
    }

    pub fn is_differentiable(self) -> bool {
        !matches!(self, ActivationKind::Step)
    }
}

fn cao_angle(k: u32, x: f64) -> f64 {
    x.tan().powi(1i32 << k).atan()
}

/// `f(x)` for `kind`; see [`ActivationKind::f`].
pub fn eval_f(kind: ActivationKind, x: f64) -> Result<f64> {
    kind.f(x)
}

/// `(C, S)` for `kind`; see [`ActivationKind::cs`].
pub fn eval_cs(kind: ActivationKind, x: f64) -> Result<(f64, f64)> {
    kind.cs(x)
}

pub fn chi(kind: ActivationKind, x: f64) -> Result<f64> {
    kind.chi(x)
}

pub fn dchi_dx(kind: ActivationKind, x: f64) -> Result<f64> {
    kind.dchi_dx(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const ALL: [ActivationKind; 4] = [
        ActivationKind::Algebraic,
        ActivationKind::Logistic,
        ActivationKind::Step,
        ActivationKind::CaoArctan(2),
    ];

    #[test]
    fn algebraic_values() {
        assert_eq!(eval_f(ActivationKind::Algebraic, 0.0).unwrap(), 0.5);
        // 0.5 * (1 + 1/sqrt(2)) to 16 digits
        assert_abs_diff_eq!(
            eval_f(ActivationKind::Algebraic, 1.0).unwrap(),
            0.853_553_390_593_273_8,
            epsilon = 1e-15
        );
        assert_eq!(eval_f(ActivationKind::Step, -3.0).unwrap(), 0.0);
        assert_eq!(eval_f(ActivationKind::Step, 0.0).unwrap(), 0.5);
        assert_eq!(eval_f(ActivationKind::Step, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn cs_values() {
        let (c, s) = eval_cs(ActivationKind::Algebraic, 0.0).unwrap();
        assert_abs_diff_eq!(c, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-15);
        let (c, s) = eval_cs(ActivationKind::Algebraic, 1e12).unwrap();
        assert_abs_diff_eq!(c, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-11);
        let (c, s) = eval_cs(ActivationKind::Algebraic, 1.0).unwrap();
        assert_abs_diff_eq!(c, -std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(s, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn chi_values() {
        assert_abs_diff_eq!(chi(ActivationKind::Algebraic, 0.0).unwrap(), PI / 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(chi(ActivationKind::Step, 5.0).unwrap(), FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn dchi_matches_central_difference() {
        let h = 1e-5;
        for kind in [ActivationKind::Algebraic, ActivationKind::Logistic] {
            for x in [-2.0, -1.0, 0.0, 1.0, 2.0] {
                let fd = (kind.chi(x + h).unwrap() - kind.chi(x - h).unwrap()) / (2.0 * h);
                let an = kind.dchi_dx(x).unwrap();
                assert!(((an - fd) / an).abs() <= 1e-8, "{kind:?} x={x}: {an} vs {fd}");
            }
        }
        let kind = ActivationKind::CaoArctan(1);
        for x in [-0.6, -0.2, 0.3, 0.7] {
            let fd = (kind.chi(x + h).unwrap() - kind.chi(x - h).unwrap()) / (2.0 * h);
            let an = kind.dchi_dx(x).unwrap();
            assert!(((an - fd) / an).abs() <= 1e-7, "cao x={x}: {an} vs {fd}");
        }
    }

    #[test]
    fn saturated_derivatives_are_finite() {
        assert_eq!(ActivationKind::Logistic.dchi_dx(800.0).unwrap(), 0.0);
        assert!(ActivationKind::Algebraic.dchi_dx(1e200).unwrap() >= 0.0);
        assert_eq!(ActivationKind::Step.dchi_dx(3.0).unwrap(), 0.0);
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            ActivationKind::CaoArctan(2).f(1.0),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(ActivationKind::Algebraic.f(f64::NAN), Err(Error::NonFinite(_))));
        assert!(matches!(
            ActivationKind::Logistic.chi(f64::INFINITY),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            ActivationKind::Step.dchi_dx(0.0),
            Err(Error::NotDifferentiable { .. })
        ));
        assert!(ActivationKind::CaoArctan(0).f(0.1).is_err());
    }

    #[test]
    fn cao_matches_rus_angle() {
        // q_k(x) = 2 arctan(tan(x)^(2^k)); the rotation angle is q_k / 2.
        for x in [-0.7f64, -0.3, 0.0, 0.2, 0.6] {
            let q: f64 = 2.0 * x.tan().powi(4).atan();
            let f = ActivationKind::CaoArctan(2).f(x).unwrap();
            assert_abs_diff_eq!(f, (q / 2.0).sin().powi(2), epsilon = 1e-15);
        }
    }

    proptest! {
        #[test]
        fn algebraic_antisymmetry(x in -1e6f64..1e6) {
            let a = ActivationKind::Algebraic;
            prop_assert!((a.f(-x).unwrap() - (1.0 - a.f(x).unwrap())).abs() <= 1e-15);
        }

        #[test]
        fn unit_interval_and_pythagoras(x in -50f64..50.0) {
            for kind in ALL {
                let x = if let ActivationKind::CaoArctan(_) = kind { x * FRAC_PI_4 / 50.0 } else { x };
                let f = kind.f(x).unwrap();
                prop_assert!((0.0..=1.0).contains(&f));
                let (c, s) = kind.cs(x).unwrap();
                prop_assert!((c * c + s * s - 1.0).abs() <= 1e-12);
            }
        }

        #[test]
        fn monotone(a in -40f64..40.0, b in -40f64..40.0) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            for kind in [ActivationKind::Algebraic, ActivationKind::Logistic] {
                prop_assert!(kind.f(lo).unwrap() <= kind.f(hi).unwrap());
            }
        }

        #[test]
        fn algebraic_round_trip_through_chi(x in -1e3f64..1e3) {
            // independent closed form of the Ising ground-state excitation
            let g = (1.0 + x * (1.0 + x * x).powf(-0.5)) / 2.0;
            let chi = ActivationKind::Algebraic.chi(x).unwrap();
            prop_assert!((chi.sin().powi(2) - g).abs() <= 1e-12);
            prop_assert!((chi - (PI / 4.0 + 0.5 * x.atan())).abs() <= 1e-12);
        }
    }
}
