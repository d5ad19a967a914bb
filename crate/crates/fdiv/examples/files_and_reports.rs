//! Measure and circuit files, deterministic report tables.
//!
//! The `fdiv` binary reads measures and circuits from JSON and writes CSV
//! or JSON tables; this example drives the same code as a library.  It
//! writes a circuit and a measure pair to a temporary directory, loads them
//! back, verifies the bounds on the loaded objects, and renders the reports
//! in both encodings.  Rendering is deterministic: rows are sorted on their
//! key columns and floats use the shortest round-trip form.
//!
//! Run with `cargo run --example files_and_reports`.

use fdiv::bounds::check_moment_bound;
use fdiv::circuit::product_tight_ansatz;
use fdiv::io::{load_circuit, load_measure, save_circuit, save_measure};
use fdiv::measure::binary_pair_points;
use fdiv::report::{bound_reports_csv, bound_reports_json, sort_bound_reports};
use fdiv::{GeneratorSpec, ParameterPoint, Result};

use std::f64::consts::FRAC_PI_2;

fn main() -> Result<()> {
    let dir = tempfile::tempdir()?;
    let circuit_path = dir.path().join("circuit.json");
    let p_path = dir.path().join("p.json");
    let q_path = dir.path().join("q.json");

    let (circuit, init, observable) = product_tight_ansatz(2)?;
    save_circuit(&circuit_path, &circuit, &init, &observable)?;

    let zero = ParameterPoint::new(vec![0.0, 0.0])?;
    let quarter = ParameterPoint::new(vec![FRAC_PI_2, 0.0])?;
    let (p, q) = binary_pair_points(0.25, zero, quarter)?;
    save_measure(&p_path, &p)?;
    save_measure(&q_path, &q)?;
    println!("wrote {}", circuit_path.display());
    println!("wrote {} and {}", p_path.display(), q_path.display());

    let (circuit2, init2, obs2) = load_circuit(&circuit_path)?;
    let p2 = load_measure(&p_path)?;
    let q2 = load_measure(&q_path)?;
    assert_eq!(circuit2.arity(), circuit.arity());
    assert!(p2.approx_eq(&p, 1e-15) && q2.approx_eq(&q, 1e-15));

    let mut rows = Vec::new();
    for g in GeneratorSpec::registry() {
        for k in [1u32, 2] {
            rows.push(check_moment_bound(&g, &p2, &q2, Some(&circuit2), k, &init2, &obs2)?);
        }
    }
    sort_bound_reports(&mut rows);

    println!("\ncsv:\n{}", bound_reports_csv(&rows));
    let json = bound_reports_json(&rows)?;
    println!("json (first rows):");
    for line in json.lines().take(14) {
        println!("{line}");
    }

    // Same inputs, same bytes.
    assert_eq!(bound_reports_csv(&rows), bound_reports_csv(&rows));
    assert_eq!(json, bound_reports_json(&rows)?);
    println!("\nrendering is deterministic");
    Ok(())
}
