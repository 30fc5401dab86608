// Copyright 2026 The qperceptron Authors
// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use qperceptron::network::{all_inputs, classical_mixture_oracle, forward, NetworkMode, NetworkSpec};
use qperceptron::synthesis::{composition_angle, CompositionSpec, Cycle};
use qperceptron::training::random_init;
use qperceptron::ActivationKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outputs_are_probabilities(seed in 0u64..10_000, scale in 0.0f64..6.0) {
        let template = NetworkSpec::layered(3, &[2, 1], ActivationKind::Logistic).unwrap();
        let net = random_init(&template, scale, &mut ChaCha8Rng::seed_from_u64(seed));
        for bits in all_inputs(3) {
            let (reg, p) = forward(&net, &bits, &NetworkMode::Ideal).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
            prop_assert!((reg.norm_sqr() - 1.0).abs() < 1e-12);
            prop_assert!((p - classical_mixture_oracle(&net, &bits).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn input_qubits_are_untouched(seed in 0u64..10_000) {
        let template = NetworkSpec::cascade(2, 3, ActivationKind::Algebraic).unwrap();
        let net = random_init(&template, 2.0, &mut ChaCha8Rng::seed_from_u64(seed));
        for bits in all_inputs(2) {
            let (reg, _) = forward(&net, &bits, &NetworkMode::Ideal).unwrap();
            for (k, c) in bits.chars().enumerate() {
                let expected = if c == '1' { 1.0 } else { 0.0 };
                prop_assert!((reg.excitation_probability(k).unwrap() - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn opposite_cycles_cancel(w in -5.0f64..5.0, theta in -5.0f64..5.0, x in -10.0f64..10.0) {
        let spec = CompositionSpec {
            cycles: vec![Cycle { w, theta, orientation: 1 }, Cycle { w, theta, orientation: -1 }],
            activation: ActivationKind::Algebraic,
        };
        prop_assert_eq!(composition_angle(&spec, x).unwrap(), 0.0);
    }

    #[test]
    fn network_json_round_trips(seed in 0u64..10_000) {
        let template = NetworkSpec::layered(2, &[3, 2, 1], ActivationKind::Algebraic).unwrap();
        let net = random_init(&template, 3.0, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(NetworkSpec::from_json(&net.to_json().unwrap()).unwrap(), net);
    }
}
