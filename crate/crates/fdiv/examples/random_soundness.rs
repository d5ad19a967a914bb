//! Randomized soundness sweep.
//!
//! The gradient and moment inequalities are theorems, so no random instance
//! can violate them; a sweep over random circuits, observables, states and
//! measure pairs is therefore a sharp regression test for every numerical
//! layer at once (simulation, expectation, divergence, inversion).  Each
//! instance is checked in the parameter space and, for moments, again after
//! pushing both measures through the circuit, where the bound must not
//! loosen.
//!
//! Run with `cargo run --example random_soundness`.

use fdiv::bounds::{check_gradient_bound, moment_bound_both_spaces, SATISFIED_TOL};
use fdiv::random::{random_instance, random_point_pair, rng_from_seed};
use fdiv::{GeneratorSpec, Result};
use rand::Rng;

fn main() -> Result<()> {
    let registry = GeneratorSpec::registry();
    let mut rng = rng_from_seed(20240817);
    let trials = 300;

    let mut tightest_grad = f64::INFINITY;
    let mut tightest_moment = f64::INFINITY;
    for i in 0..trials {
        let inst = random_instance(&mut rng, 3, 2, 2)?;
        let support = rng.random_range(2..=8);
        let (p, q) = random_point_pair(&mut rng, inst.circuit.arity(), support)?;
        let j = rng.random_range(0..inst.circuit.arity());
        let g = &registry[i % registry.len()];

        let grad = check_gradient_bound(g, &p, &q, &inst.circuit, j, &inst.init, &inst.observable)?;
        assert!(grad.satisfied);
        tightest_grad = tightest_grad.min(grad.slack);

        for k in 1..=4 {
            let (theta, unitary) =
                moment_bound_both_spaces(g, &p, &q, &inst.circuit, k, &inst.init, &inst.observable)?;
            assert!(theta.satisfied && unitary.satisfied);
            assert!(unitary.rhs <= theta.rhs + 1e-12);
            tightest_moment = tightest_moment.min(theta.slack.min(unitary.slack));
        }
    }

    println!("{trials} random instances, all bounds satisfied");
    println!("smallest gradient slack observed: {tightest_grad:.3e}");
    println!("smallest moment slack observed:   {tightest_moment:.3e}");
    // Slack can touch zero up to rounding: a random gate generator that is a
    // multiple of the identity does nothing, so both sides vanish together.
    assert!(tightest_grad >= -SATISFIED_TOL && tightest_moment >= -SATISFIED_TOL);
    Ok(())
}
