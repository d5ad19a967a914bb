//! Property-based invariants over randomized inputs.
//!
//! Structured instances (measures, kernels, circuits) are derived from
//! proptest-generated primitives, so shrinking still produces readable
//! counterexamples.

use proptest::prelude::*;

use fdiv::bounds::{check_gradient_bound, check_moment_bound};
use fdiv::divergence::{
    binary_divergence, f_divergence, invert_binary_divergence, structural_divergence,
    symmetric_f_divergence, symmetrized, total_variation,
};
use fdiv::measure::{binary_pair, pushforward, PushforwardOptions};
use fdiv::random::{random_instance, random_kernel, random_point_pair, rng_from_seed};
use fdiv::{DiscreteMeasure, GeneratorSpec};

fn normalized(raw: Vec<f64>) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn labeled_measure(weights: &[f64]) -> DiscreteMeasure {
    DiscreteMeasure::from_labeled(
        weights
            .iter()
            .enumerate()
            .map(|(i, w)| (format!("x{i}"), *w))
            .collect(),
    )
    .expect("normalized positive weights form a measure")
}

fn weight_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(1e-3..1.0f64, len).prop_map(normalized)
}

fn measure_pair() -> impl Strategy<Value = (DiscreteMeasure, DiscreteMeasure)> {
    (2usize..8).prop_flat_map(|len| {
        (weight_vec(len), weight_vec(len))
            .prop_map(|(wp, wq)| (labeled_measure(&wp), labeled_measure(&wq)))
    })
}

proptest! {
    #[test]
    fn profile_inversion_round_trips(s in 0.0..0.99f64) {
        for g in GeneratorSpec::registry() {
            let y = binary_divergence(&g, s).unwrap();
            let back = invert_binary_divergence(&g, y).unwrap();
            prop_assert!((back - s).abs() <= 1e-10, "{}: {s} -> {back}", g.name());
        }
    }

    #[test]
    fn swapped_pairs_recover_their_bias(r in 0.01..1.0f64) {
        let (p, q) = binary_pair(r, "lo", "hi").unwrap();
        prop_assert!((total_variation(&p, &q).unwrap() - r).abs() <= 1e-12);
        for g in GeneratorSpec::registry() {
            let d = structural_divergence(&g, &p, &q).unwrap();
            prop_assert!((d - r).abs() <= 1e-10, "{}: {d} vs bias {r}", g.name());
        }
    }

    #[test]
    fn structural_divergence_is_a_symmetric_normalized_score(
        (p, q) in measure_pair()
    ) {
        let tv = total_variation(&p, &q).unwrap();
        for g in GeneratorSpec::registry() {
            let pq = structural_divergence(&g, &p, &q).unwrap();
            let qp = structural_divergence(&g, &q, &p).unwrap();
            prop_assert!((0.0..=1.0).contains(&pq));
            prop_assert!((pq - qp).abs() <= 1e-10);
            // Two-point pairs minimize the symmetric divergence at fixed
            // distance, so no pair scores below its total variation.
            prop_assert!(pq >= tv - 1e-10, "{}: {pq} < tv {tv}", g.name());
            let self_d = structural_divergence(&g, &p, &p).unwrap();
            prop_assert!(self_d <= 1e-10);
        }
    }

    #[test]
    fn symmetrized_generator_reproduces_the_symmetric_divergence(
        (p, q) in measure_pair()
    ) {
        for g in GeneratorSpec::registry() {
            let sym = symmetric_f_divergence(&g, &p, &q).unwrap();
            let via_generator = f_divergence(&symmetrized(&g).unwrap(), &p, &q).unwrap();
            match (sym.is_finite(), via_generator.is_finite()) {
                (true, true) => {
                    let a = sym.finite().unwrap();
                    let b = via_generator.finite().unwrap();
                    prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
                }
                (a, b) => prop_assert_eq!(a, b),
            }
        }
    }

    #[test]
    fn kernels_preserve_mass_and_never_increase_divergence(
        (p, q) in measure_pair(),
        target in 2usize..6,
        seed in 0u64..1000
    ) {
        let mut rng = rng_from_seed(seed);
        let kernel = random_kernel(&mut rng, p.support_size(), target).unwrap();
        let kp = kernel.apply(&p).unwrap();
        let kq = kernel.apply(&q).unwrap();
        prop_assert!((kp.total_mass() - 1.0).abs() <= 1e-12);
        prop_assert!((kq.total_mass() - 1.0).abs() <= 1e-12);
        for g in GeneratorSpec::registry() {
            let before = structural_divergence(&g, &p, &q).unwrap();
            let after = structural_divergence(&g, &kp, &kq).unwrap();
            prop_assert!(after <= before + 1e-12, "{}: {before} -> {after}", g.name());
        }
    }
}

proptest! {
    // Circuit-backed cases cost a simulation each; keep the case count low.
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn push_forward_preserves_mass_and_divergence_order(seed in 0u64..10_000) {
        let mut rng = rng_from_seed(seed);
        let inst = random_instance(&mut rng, 3, 2, 2).unwrap();
        let (p, q) = random_point_pair(&mut rng, inst.circuit.arity(), 5).unwrap();
        let opts = PushforwardOptions::default();
        let pu = pushforward(&p, &inst.circuit, opts).unwrap();
        let qu = pushforward(&q, &inst.circuit, opts).unwrap();
        prop_assert!((pu.total_mass() - 1.0).abs() <= 1e-12);
        prop_assert!((qu.total_mass() - 1.0).abs() <= 1e-12);
        for g in GeneratorSpec::registry() {
            let before = structural_divergence(&g, &p, &q).unwrap();
            let after = structural_divergence(&g, &pu, &qu).unwrap();
            prop_assert!(after <= before + 1e-12, "{}: {before} -> {after}", g.name());
        }
    }

    #[test]
    fn random_instances_satisfy_gradient_and_moment_bounds(seed in 0u64..10_000) {
        let mut rng = rng_from_seed(seed);
        let inst = random_instance(&mut rng, 3, 2, 2).unwrap();
        let (p, q) = random_point_pair(&mut rng, inst.circuit.arity(), 6).unwrap();
        for g in GeneratorSpec::registry() {
            // These return an error when a bound is violated.
            let grad = check_gradient_bound(
                &g, &p, &q, &inst.circuit, 0, &inst.init, &inst.observable,
            ).unwrap();
            prop_assert!(grad.satisfied);
            for k in [1u32, 3, 4] {
                let m = check_moment_bound(
                    &g, &p, &q, Some(&inst.circuit), k, &inst.init, &inst.observable,
                ).unwrap();
                prop_assert!(m.satisfied);
            }
        }
    }
}
