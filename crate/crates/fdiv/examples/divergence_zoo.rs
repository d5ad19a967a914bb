//! Divergence summary for one measure pair.
//!
//! Builds two measures over the same labels, evaluates the directed and
//! symmetrized f-divergences for every built-in generator, and reduces each
//! to its structural divergence in `[0, 1]`.  The squared-Hellinger and
//! triangular generators have closed-form structural divergences, which the
//! example verifies against the generic bisection path.
//!
//! Run with `cargo run --example divergence_zoo`.

use fdiv::divergence::{
    f_divergence, structural_divergence, symmetric_f_divergence, total_variation,
    triangular_discrimination,
};
use fdiv::{DiscreteMeasure, GeneratorSpec, Result};

fn labeled(weights: &[(&str, f64)]) -> Result<DiscreteMeasure> {
    DiscreteMeasure::from_labeled(
        weights
            .iter()
            .map(|(l, w)| (l.to_string(), *w))
            .collect(),
    )
}

fn main() -> Result<()> {
    let p = labeled(&[("a", 0.5), ("b", 0.3), ("c", 0.2)])?;
    let q = labeled(&[("a", 0.2), ("b", 0.2), ("c", 0.6)])?;

    let tv = total_variation(&p, &q)?;
    let tri = triangular_discrimination(&p, &q)?;
    println!("total variation          {tv:.12}");
    println!("triangular discrimination {tri:.12}\n");

    println!(
        "{:>12}  {:>14}  {:>14}  {:>14}  {:>12}",
        "generator", "D(P||Q)", "D(Q||P)", "symmetric", "structural"
    );
    for g in GeneratorSpec::registry() {
        let fwd = f_divergence(&g, &p, &q)?;
        let bwd = f_divergence(&g, &q, &p)?;
        let sym = symmetric_f_divergence(&g, &p, &q)?;
        let dstr = structural_divergence(&g, &p, &q)?;
        println!("{:>12}  {fwd:>14.10}  {bwd:>14.10}  {sym:>14.10}  {dstr:>12.10}", g.name());
        assert!((0.0..=1.0).contains(&dstr));
        // Structural divergence can never undercut the total variation
        // profile evaluated at the same pair.
        assert!(dstr >= tv - 1e-12, "{}: {dstr} < tv {tv}", g.name());
    }

    // Closed forms: sqrt of triangular discrimination, and sqrt(1 - BC^2)
    // where BC is the Bhattacharyya coefficient.
    let tri_gen = GeneratorSpec::triangular();
    let d_tri = structural_divergence(&tri_gen, &p, &q)?;
    assert!((d_tri - tri.sqrt()).abs() < 1e-10);

    let hel = GeneratorSpec::squared_hellinger();
    let d_hel = structural_divergence(&hel, &p, &q)?;
    let bc: f64 = [("a", 0.5_f64, 0.2_f64), ("b", 0.3, 0.2), ("c", 0.2, 0.6)]
        .iter()
        .map(|(_, pw, qw)| (pw * qw).sqrt())
        .sum();
    assert!((d_hel - (1.0 - bc * bc).sqrt()).abs() < 1e-10);
    println!("\nclosed forms agree: sqrt(triangular) and sqrt(1 - BC^2)");

    // Disjoint supports drive everything to the top of the scale, even for
    // generators whose raw divergence is infinite.
    let left = labeled(&[("x", 1.0)])?;
    let right = labeled(&[("y", 1.0)])?;
    let jef = GeneratorSpec::jeffreys();
    let sym = symmetric_f_divergence(&jef, &left, &right)?;
    assert!(sym.is_infinite());
    let dstr = structural_divergence(&jef, &left, &right)?;
    assert!((dstr - 1.0).abs() < 1e-15);
    println!("disjoint supports: jeffreys symmetric divergence = {sym}, structural = {dstr}");
    Ok(())
}
