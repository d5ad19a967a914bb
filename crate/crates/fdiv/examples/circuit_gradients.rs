//! Statevector costs and analytic gradients.
//!
//! Builds a two-qubit layered circuit from Pauli-sum gate generators,
//! evaluates the cost `<O>` at a parameter point, and compares the exact
//! commutator-rule gradient against a central finite difference.  Also shows
//! the product ansatz whose cost factorizes as a product of cosines, which
//! is the workhorse behind the equality constructions elsewhere.
//!
//! Run with `cargo run --example circuit_gradients`.

use fdiv::circuit::{
    cost, finite_difference_gradient, gradient, product_tight_ansatz, CircuitSpec, QuantumState,
};
use fdiv::measure::ParameterPoint;
use fdiv::operator::HermitianOperator;
use fdiv::Result;

fn main() -> Result<()> {
    // Layer 1 applies single-qubit Z rotations, layer 2 an entangling ZZ.
    let layers = vec![
        vec![
            HermitianOperator::from_pauli_sum(2, &[(0.5, "ZI".into())])?,
            HermitianOperator::from_pauli_sum(2, &[(0.5, "IZ".into())])?,
        ],
        vec![HermitianOperator::from_pauli_sum(2, &[(0.7, "ZZ".into())])?],
    ];
    let circuit = CircuitSpec::new(2, layers)?;
    let init = QuantumState::plus_all(2);
    let observable = HermitianOperator::from_pauli_sum(2, &[(1.0, "XI".into()), (0.5, "IX".into())])?;

    let point = ParameterPoint::new(vec![0.3, 1.1, 0.4])?;
    let value = cost(&circuit, &point, &init, &observable)?;
    println!("cost at {:?}: {value:.12}", point.angles());

    let mut worst: f64 = 0.0;
    for j in 0..circuit.arity() {
        let exact = gradient(&circuit, &point, j, &init, &observable)?;
        let approx = finite_difference_gradient(&circuit, &point, j, &init, &observable, 1e-5)?;
        println!("  d/dtheta_{j}: exact {exact:>13.10}, central diff {approx:>13.10}");
        worst = worst.max((exact - approx).abs());
    }
    assert!(worst < 1e-7, "gradient disagreement {worst:.3e}");
    println!("worst gradient disagreement: {worst:.3e}\n");

    // The product ansatz: n qubits, one Z/2 gate each, X on every qubit.
    // Cost is the product of cos(theta_j), so each partial derivative is
    // -sin(theta_j) times the remaining cosines.
    let (circuit, init, observable) = product_tight_ansatz(3)?;
    let angles = vec![0.2, 0.9, 1.7];
    let point = ParameterPoint::new(angles.clone())?;
    let predicted: f64 = angles.iter().map(|t| t.cos()).product();
    let value = cost(&circuit, &point, &init, &observable)?;
    println!("product ansatz cost {value:.12}, cosine product {predicted:.12}");
    assert!((value - predicted).abs() < 1e-12);

    let g0 = gradient(&circuit, &point, 0, &init, &observable)?;
    let predicted_g0 = -angles[0].sin() * angles[1].cos() * angles[2].cos();
    assert!((g0 - predicted_g0).abs() < 1e-12);
    println!("product ansatz gradient matches -sin * cos * cos");
    Ok(())
}
