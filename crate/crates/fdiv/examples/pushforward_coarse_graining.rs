//! Push-forwards and the data-processing inequality.
//!
//! A measure over circuit parameters induces a measure over unitaries; any
//! stochastic coarse-graining of labels is post-processing too.  Both maps
//! can only destroy distinguishability, so every f-divergence and hence the
//! structural divergence must shrink or stay put.  This example pushes a
//! parameter pair through a circuit (two distinct angles produce the same
//! unitary, so atoms merge) and applies a random-looking stochastic map to a
//! labeled pair, checking the inequality each time.
//!
//! Run with `cargo run --example pushforward_coarse_graining`.

use std::f64::consts::TAU;

use fdiv::circuit::minimal_tight_ansatz;
use fdiv::divergence::structural_divergence;
use fdiv::measure::{pushforward, PushforwardOptions};
use fdiv::{DiscreteMeasure, GeneratorSpec, ParameterPoint, Result, StochasticMap};

fn main() -> Result<()> {
    let (circuit, _init, _obs) = minimal_tight_ansatz();

    // theta and theta + 2 pi generate the same rotation, so the push-forward
    // merges those two atoms into one.
    let p = DiscreteMeasure::from_points(vec![
        (ParameterPoint::new(vec![0.4])?, 0.3),
        (ParameterPoint::new(vec![0.4 + TAU])?, 0.3),
        (ParameterPoint::new(vec![2.0])?, 0.4),
    ])?;
    let q = DiscreteMeasure::from_points(vec![
        (ParameterPoint::new(vec![0.4])?, 0.1),
        (ParameterPoint::new(vec![2.0])?, 0.5),
        (ParameterPoint::new(vec![5.0])?, 0.4),
    ])?;

    let opts = PushforwardOptions::default();
    let pu = pushforward(&p, &circuit, opts)?;
    let qu = pushforward(&q, &circuit, opts)?;
    println!(
        "parameter support {} -> unitary support {} (P), {} -> {} (Q)",
        p.support_size(),
        pu.support_size(),
        q.support_size(),
        qu.support_size()
    );
    assert_eq!(pu.support_size(), 2, "coinciding unitaries should merge");

    println!("\n{:>12}  {:>14}  {:>14}", "generator", "theta", "unitary");
    for g in GeneratorSpec::registry() {
        let before = structural_divergence(&g, &p, &q)?;
        let after = structural_divergence(&g, &pu, &qu)?;
        println!("{:>12}  {before:>14.10}  {after:>14.10}", g.name());
        assert!(
            after <= before + 1e-12,
            "{}: push-forward increased the divergence",
            g.name()
        );
    }

    // Coarse-graining three labels into two by a column-stochastic kernel.
    let a = DiscreteMeasure::from_labeled(vec![
        ("a".into(), 0.6),
        ("b".into(), 0.3),
        ("c".into(), 0.1),
    ])?;
    let b = DiscreteMeasure::from_labeled(vec![
        ("a".into(), 0.1),
        ("b".into(), 0.2),
        ("c".into(), 0.7),
    ])?;
    let kernel = StochasticMap::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec!["coarse0".into(), "coarse1".into()],
        vec![vec![0.9, 0.1], vec![0.5, 0.5], vec![0.2, 0.8]],
    )?;
    let ka = kernel.apply(&a)?;
    let kb = kernel.apply(&b)?;
    println!("\n{:>12}  {:>14}  {:>14}", "generator", "fine", "coarse");
    for g in GeneratorSpec::registry() {
        let before = structural_divergence(&g, &a, &b)?;
        let after = structural_divergence(&g, &ka, &kb)?;
        println!("{:>12}  {before:>14.10}  {after:>14.10}", g.name());
        assert!(after <= before + 1e-12);
    }
    println!("\ndata processing never increased a structural divergence");
    Ok(())
}
