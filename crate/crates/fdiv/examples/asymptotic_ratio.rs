//! Small-separation behavior of structural divergences.
//!
//! For smooth generators every structural divergence collapses to the same
//! universal quantity as two measures approach each other: the square root
//! of the triangular discrimination.  The triangular generator equals that
//! root identically; the others approach it at a rate controlled by the
//! separation.  This example shrinks a two-point family and watches the
//! ratio converge, and relates the limit to the Fisher information of the
//! family.
//!
//! Run with `cargo run --example asymptotic_ratio`.

use fdiv::bounds::{asymptotic_sweep, bernoulli_family};
use fdiv::divergence::{fisher_information, triangular_discrimination};
use fdiv::{GeneratorSpec, Result};

fn main() -> Result<()> {
    let smooth = vec![
        GeneratorSpec::squared_hellinger(),
        GeneratorSpec::jensen_shannon(),
        GeneratorSpec::jeffreys(),
        GeneratorSpec::triangular(),
    ];
    let alpha = 0.3;
    let separations = [1e-1, 1e-2, 1e-3, 1e-4];

    let rows = asymptotic_sweep(&smooth, &bernoulli_family, alpha, &separations)?;
    println!(
        "{:>12}  {:>10}  {:>16}  {:>16}  {:>14}",
        "generator", "dalpha", "structural", "sqrt(triangular)", "ratio"
    );
    for row in &rows {
        println!(
            "{:>12}  {:>10.0e}  {:>16.10e}  {:>16.10e}  {:>14.10}",
            row.generator, row.delta_alpha, row.structural, row.sqrt_triangular, row.ratio
        );
        assert!(
            (row.ratio - 1.0).abs() <= 10.0 * row.delta_alpha,
            "{} at {}: ratio {}",
            row.generator,
            row.delta_alpha,
            row.ratio
        );
        if row.generator == "triangular" {
            assert!((row.ratio - 1.0).abs() < 1e-12);
        }
    }
    println!("\nratios converge to 1 at rate O(dalpha); triangular is exact");

    // The limit object itself shrinks like the Fisher information: for a
    // one-parameter family, the triangular discrimination between nearby
    // members is (dalpha)^2 I(alpha) / 4 to leading order.
    let info = fisher_information(&bernoulli_family, alpha, 1e-5)?;
    println!("\nFisher information of the Bernoulli family at {alpha}: {info:.10}");
    assert!((info - 1.0 / (alpha * (1.0 - alpha))).abs() < 1e-6);
    for dalpha in [1e-2, 1e-3] {
        let p = bernoulli_family(alpha)?;
        let q = bernoulli_family(alpha + dalpha)?;
        let tri = triangular_discrimination(&p, &q)?;
        let predicted = dalpha * dalpha * info / 4.0;
        let rel = (tri - predicted).abs() / predicted;
        println!("dalpha {dalpha:>6.0e}: triangular {tri:.6e}, (dalpha)^2 I/4 {predicted:.6e}, rel err {rel:.3e}");
        assert!(rel < 10.0 * dalpha);
    }
    Ok(())
}
