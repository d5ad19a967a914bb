//! Binary divergence profiles.
//!
//! Every symmetric f-divergence restricted to swapped two-point measures
//! `((1+s)/2, (1-s)/2)` vs `((1-s)/2, (1+s)/2)` collapses to a scalar profile
//! `d_f(s)`.  The structural divergence inverts this profile, so the whole
//! normalization hinges on `d_f` being strictly increasing and numerically
//! invertible.  This example tabulates the profiles of the built-in
//! generators and round-trips the inversion.
//!
//! Run with `cargo run --example binary_profiles`.

use fdiv::divergence::{binary_divergence, invert_binary_divergence};
use fdiv::{GeneratorSpec, Result};

fn main() -> Result<()> {
    let registry = GeneratorSpec::registry();

    print!("{:>6}", "s");
    for g in &registry {
        print!("  {:>12}", g.name());
    }
    println!();
    for i in 0..=10 {
        let s = i as f64 / 10.0;
        print!("{s:>6.2}");
        for g in &registry {
            let value = binary_divergence(g, s)?;
            let cell = match value.is_finite() {
                true => format!("{:.6}", value.finite()?),
                false => "inf".to_string(),
            };
            print!("  {cell:>12}");
        }
        println!();
    }

    // The inverse must recover s from d_f(s) well below the tolerance that
    // the bound-checking code relies on.
    let mut worst: f64 = 0.0;
    for g in &registry {
        for i in 1..100 {
            let s = i as f64 / 100.0;
            let y = binary_divergence(g, s)?;
            let back = invert_binary_divergence(g, y)?;
            worst = worst.max((back - s).abs());
        }
    }
    println!("\nworst inversion error over the grid: {worst:.3e}");
    assert!(worst < 1e-10, "profile inversion drifted: {worst:.3e}");

    // Hand-checkable values: the total variation profile is the identity,
    // the triangular one is s^2, and the Jeffreys one is 2 s atanh(s).
    let tv = GeneratorSpec::total_variation();
    let tri = GeneratorSpec::triangular();
    let jef = GeneratorSpec::jeffreys();
    for i in 1..10 {
        let s = i as f64 / 10.0;
        assert!((binary_divergence(&tv, s)?.finite()? - s).abs() < 1e-12);
        assert!((binary_divergence(&tri, s)?.finite()? - s * s).abs() < 1e-12);
        let jf = binary_divergence(&jef, s)?.finite()?;
        assert!((jf - 2.0 * s * s.atanh()).abs() < 1e-12);
    }
    println!("closed-form profiles match for tv, triangular and jeffreys");
    Ok(())
}
