//! Layered parameterized circuits and their costs and gradients.
//!
//! A circuit is an ordered list of layers, each an ordered list of Hermitian
//! gate generators `H`.  The unitary at a parameter point is the product of
//! `exp(-i theta H)` over all gates, with the first gate of the first layer
//! acting on the state first (it sits rightmost in the matrix product).
//! Costs are `<psi| O |psi>` for an observable `O`; gradients use the exact
//! commutator rule
//!
//! ```text
//! d<O>/d theta_j = i Tr([H_j, O+ ] rho-),
//! ```
//!
//! where `rho-` is the input state evolved through the gates before `j` and
//! `O+` is the observable pulled back through the gates from `j` on.  A
//! central-difference fallback is provided for cross-checking.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::measure::ParameterPoint;
use crate::operator::{identity_matrix, max_entry_distance, HermitianOperator};

type CMatrix = DMatrix<Complex<f64>>;
type CVector = DVector<Complex<f64>>;

/// Entrywise tolerance on `U^dag U = I` for full circuit products.
pub const PRODUCT_UNITARITY_TOL: f64 = 1e-11;
/// Largest imaginary residue tolerated when a trace must be real.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;
/// Step used by the finite-difference gradient cross-check.
pub const FD_STEP: f64 = 1e-5;

/// A normalized state vector on a power-of-two dimensional register.
#[derive(Clone, Debug)]
pub struct QuantumState {
    amplitudes: CVector,
}

impl QuantumState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "state dimension must be a positive power of two, got {dim}"
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidState("state has non-finite amplitudes".into()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!(
                "state norm is {norm}, expected 1 within 1e-12"
            )));
        }
        Ok(QuantumState { amplitudes })
    }

    /// `|+>^(x n)`: the uniform superposition with amplitude `2^(-n/2)`.
    pub fn plus_all(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let amp = Complex::new((dim as f64).sqrt().recip(), 0.0);
        QuantumState {
            amplitudes: CVector::from_element(dim, amp),
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }
}

#[derive(Clone, Debug)]
struct Gate {
    operator: HermitianOperator,
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl Gate {
    fn new(operator: HermitianOperator) -> Self {
        let eigen = SymmetricEigen::new(operator.matrix().clone());
        Gate {
            operator,
            eigenvalues: eigen.eigenvalues.iter().copied().collect(),
            eigenvectors: eigen.eigenvectors,
        }
    }

    fn unitary(&self, angle: f64) -> CMatrix {
        let dim = self.operator.dim();
        let mut u = CMatrix::zeros(dim, dim);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let phase = Complex::from_polar(1.0, -angle * lambda);
            let column = self.eigenvectors.column(k);
            for r in 0..dim {
                for s in 0..dim {
                    u[(r, s)] += phase * column[r] * column[s].conj();
                }
            }
        }
        u
    }
}

/// A layered circuit over a fixed number of qubits.  Gate eigendecompositions
/// are cached at construction, so building unitaries is cheap.
#[derive(Clone, Debug)]
pub struct CircuitSpec {
    num_qubits: usize,
    layer_sizes: Vec<usize>,
    gates: Vec<Gate>,
}

impl CircuitSpec {
    pub fn new(num_qubits: usize, layers: Vec<Vec<HermitianOperator>>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidCircuit("circuit needs at least one qubit".into()));
        }
        let dim = 1usize << num_qubits;
        let mut layer_sizes = Vec::with_capacity(layers.len());
        let mut gates = Vec::new();
        for (l, layer) in layers.into_iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::InvalidCircuit(format!("layer {l} has no gates")));
            }
            layer_sizes.push(layer.len());
            for (m, h) in layer.into_iter().enumerate() {
                if h.dim() != dim {
                    return Err(Error::DimensionMismatch(format!(
                        "gate ({l},{m}) acts on dimension {} but the register has dimension {dim}",
                        h.dim()
                    )));
                }
                gates.push(Gate::new(h));
            }
        }
        if gates.is_empty() {
            return Err(Error::InvalidCircuit("circuit has no gates".into()));
        }
        Ok(CircuitSpec {
            num_qubits,
            layer_sizes,
            gates,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.num_qubits
    }

    /// Total number of gates, which is also the parameter count.
    pub fn arity(&self) -> usize {
        self.gates.len()
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    /// Generator of the gate at flat index `j` (layer-major order, zero
    /// based).
    pub fn gate_generator(&self, j: usize) -> Result<&HermitianOperator> {
        self.gates
            .get(j)
            .map(|g| &g.operator)
            .ok_or_else(|| Error::InvalidArgument(format!(
                "gate index {j} out of range for a circuit with {} gates",
                self.gates.len()
            )))
    }

    fn check_point(&self, point: &ParameterPoint) -> Result<()> {
        if point.len() != self.arity() {
            return Err(Error::DimensionMismatch(format!(
                "parameter point has {} angles but the circuit has {} gates",
                point.len(),
                self.arity()
            )));
        }
        Ok(())
    }

    /// Product of gate unitaries over a half-open range of flat indices,
    /// later gates multiplying from the left.
    fn partial_product(&self, point: &ParameterPoint, range: std::ops::Range<usize>) -> CMatrix {
        let mut u = identity_matrix(self.dim());
        for j in range {
            u = self.gates[j].unitary(point.angles()[j]) * u;
        }
        u
    }

    /// The full circuit unitary at a parameter point.
    pub fn build_unitary(&self, point: &ParameterPoint) -> Result<CMatrix> {
        self.check_point(point)?;
        let u = self.partial_product(point, 0..self.arity());
        let deviation = max_entry_distance(&(u.adjoint() * &u), &identity_matrix(self.dim()));
        if deviation.is_nan() || deviation > PRODUCT_UNITARITY_TOL {
            return Err(Error::Numeric(format!(
                "circuit product lost unitarity by {deviation:e}"
            )));
        }
        Ok(u)
    }
}

fn check_dims(circuit: &CircuitSpec, init: &QuantumState, observable: &HermitianOperator) -> Result<()> {
    if init.dim() != circuit.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial state dimension {} does not match circuit dimension {}",
            init.dim(),
            circuit.dim()
        )));
    }
    if observable.dim() != circuit.dim() {
        return Err(Error::DimensionMismatch(format!(
            "observable dimension {} does not match circuit dimension {}",
            observable.dim(),
            circuit.dim()
        )));
    }
    Ok(())
}

/// Expectation value of an observable on a prepared unitary:
/// `<init| U^dag O U |init>`.
pub fn unitary_cost(
    u: &CMatrix,
    init: &QuantumState,
    observable: &HermitianOperator,
) -> Result<f64> {
    if u.nrows() != init.dim() || u.ncols() != init.dim() || observable.dim() != init.dim() {
        return Err(Error::DimensionMismatch(
            "unitary, state and observable dimensions disagree".into(),
        ));
    }
    let psi = u * init.amplitudes();
    let value = psi.dotc(&(observable.matrix() * &psi));
    if value.im.abs() > IMAGINARY_RESIDUE_TOL {
        return Err(Error::Numeric(format!(
            "cost has imaginary residue {:e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// Cost `<O>` of the circuit at a parameter point.
pub fn cost(
    circuit: &CircuitSpec,
    point: &ParameterPoint,
    init: &QuantumState,
    observable: &HermitianOperator,
) -> Result<f64> {
    check_dims(circuit, init, observable)?;
    let u = circuit.build_unitary(point)?;
    unitary_cost(&u, init, observable)
}

/// Exact partial derivative of the cost with respect to gate `j` (flat index,
/// zero based), via the commutator rule.
pub fn gradient(
    circuit: &CircuitSpec,
    point: &ParameterPoint,
    j: usize,
    init: &QuantumState,
    observable: &HermitianOperator,
) -> Result<f64> {
    check_dims(circuit, init, observable)?;
    circuit.check_point(point)?;
    if j >= circuit.arity() {
        return Err(Error::InvalidArgument(format!(
            "gate index {j} out of range for a circuit with {} gates",
            circuit.arity()
        )));
    }
    // Split the product around gate j; the gate itself commutes with its
    // generator, so it may be absorbed into the upstream factor.
    let before = circuit.partial_product(point, 0..j);
    let from_j = circuit.partial_product(point, j..circuit.arity());
    let phi = &before * init.amplitudes();
    let pulled_back = from_j.adjoint() * observable.matrix() * &from_j;
    let h_j = circuit.gates[j].operator.matrix();
    // i<phi|[H_j, O+]|phi> = -2 Im <H_j phi | O+ phi>, real by construction.
    let z = (h_j * &phi).dotc(&(&pulled_back * &phi));
    Ok(-2.0 * z.im)
}

/// Central-difference approximation of [`gradient`], for cross-checks.
pub fn finite_difference_gradient(
    circuit: &CircuitSpec,
    point: &ParameterPoint,
    j: usize,
    init: &QuantumState,
    observable: &HermitianOperator,
    step: f64,
) -> Result<f64> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidArgument("finite-difference step must be positive".into()));
    }
    let mut up = point.angles().to_vec();
    let mut down = point.angles().to_vec();
    *up.get_mut(j)
        .ok_or_else(|| Error::InvalidArgument(format!("gate index {j} out of range")))? += step;
    down[j] -= step;
    let plus = cost(circuit, &ParameterPoint::new(up)?, init, observable)?;
    let minus = cost(circuit, &ParameterPoint::new(down)?, init, observable)?;
    Ok((plus - minus) / (2.0 * step))
}

/// The single-qubit ansatz that saturates the trade-off bounds: one gate with
/// generator `Z/2`, observable `X`, initial state `|+>`.  Its cost is
/// `cos(theta)` and its gradient `-sin(theta)`.
pub fn minimal_tight_ansatz() -> (CircuitSpec, QuantumState, HermitianOperator) {
    product_tight_ansatz(1).expect("single-qubit ansatz is always valid")
}

/// The n-qubit product form of the tight ansatz: one layer of `Z/2` rotations
/// (gate `j` rotating qubit `j`), observable `X^(x n)`, initial state
/// `|+>^(x n)`.  Cost is the product of `cos(theta_j)`; the derivative in the
/// first angle is `-sin(theta_1) prod_{j>1} cos(theta_j)`.
pub fn product_tight_ansatz(
    num_qubits: usize,
) -> Result<(CircuitSpec, QuantumState, HermitianOperator)> {
    if num_qubits == 0 {
        return Err(Error::InvalidCircuit("ansatz needs at least one qubit".into()));
    }
    let mut layer = Vec::with_capacity(num_qubits);
    for j in 1..=num_qubits {
        let mut string = String::new();
        string.push_str(&"I".repeat(num_qubits - j));
        string.push('Z');
        string.push_str(&"I".repeat(j - 1));
        layer.push(HermitianOperator::from_pauli_sum(num_qubits, &[(0.5, string)])?);
    }
    let circuit = CircuitSpec::new(num_qubits, vec![layer])?;
    let observable = HermitianOperator::from_pauli_sum(num_qubits, &[(1.0, "X".repeat(num_qubits))])?;
    Ok((circuit, QuantumState::plus_all(num_qubits), observable))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(angles: &[f64]) -> ParameterPoint {
        ParameterPoint::new(angles.to_vec()).unwrap()
    }

    #[test]
    fn plus_state_is_normalized_uniform() {
        let s = QuantumState::plus_all(3);
        assert_eq!(s.dim(), 8);
        for a in s.amplitudes().iter() {
            assert!((a.re - 8f64.sqrt().recip()).abs() < 1e-15);
            assert_eq!(a.im, 0.0);
        }
    }

    #[test]
    fn state_validation_rejects_unnormalized() {
        let v = CVector::from_element(2, Complex::new(1.0, 0.0));
        assert!(QuantumState::new(v).is_err());
        let v = CVector::from_element(3, Complex::new(3f64.sqrt().recip(), 0.0));
        assert!(QuantumState::new(v).is_err(), "dimension 3 is not a power of two");
    }

    #[test]
    fn minimal_ansatz_cost_is_cosine() {
        let (circuit, init, obs) = minimal_tight_ansatz();
        let mut theta = -3.2;
        while theta <= 3.2 {
            let c = cost(&circuit, &point(&[theta]), &init, &obs).unwrap();
            assert!((c - theta.cos()).abs() < 1e-12, "theta={theta}");
            theta += 0.199;
        }
    }

    #[test]
    fn minimal_ansatz_gradient_is_minus_sine() {
        let (circuit, init, obs) = minimal_tight_ansatz();
        let mut theta = -3.2;
        while theta <= 3.2 {
            let g = gradient(&circuit, &point(&[theta]), 0, &init, &obs).unwrap();
            assert!((g + theta.sin()).abs() < 1e-12, "theta={theta}");
            theta += 0.173;
        }
    }

    #[test]
    fn product_ansatz_cost_and_first_gradient() {
        let (circuit, init, obs) = product_tight_ansatz(3).unwrap();
        let angles = [0.3, -1.1, 2.0];
        let c = cost(&circuit, &point(&angles), &init, &obs).unwrap();
        let expected: f64 = angles.iter().map(|a| a.cos()).product();
        assert!((c - expected).abs() < 1e-12);

        let g = gradient(&circuit, &point(&angles), 0, &init, &obs).unwrap();
        let expected_g = -angles[0].sin() * angles[1].cos() * angles[2].cos();
        assert!((g - expected_g).abs() < 1e-12);

        // The half-pi point used by the equality constructions.
        let g = gradient(&circuit, &point(&[std::f64::consts::FRAC_PI_2, 0.0, 0.0]), 0, &init, &obs)
            .unwrap();
        assert!((g + 1.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences_on_a_mixed_circuit() {
        let h0 = HermitianOperator::from_pauli_sum(2, &[(0.7, "XY".into()), (0.2, "ZI".into())])
            .unwrap();
        let h1 = HermitianOperator::from_pauli_sum(2, &[(0.5, "ZZ".into())]).unwrap();
        let h2 = HermitianOperator::from_pauli_sum(2, &[(-0.4, "YI".into()), (0.9, "IX".into())])
            .unwrap();
        let circuit = CircuitSpec::new(2, vec![vec![h0, h1], vec![h2]]).unwrap();
        let obs = HermitianOperator::from_pauli_sum(2, &[(1.0, "XX".into()), (-0.3, "IZ".into())])
            .unwrap();
        let init = QuantumState::plus_all(2);
        let p = point(&[0.37, -0.81, 1.93]);
        for j in 0..3 {
            let exact = gradient(&circuit, &p, j, &init, &obs).unwrap();
            let fd = finite_difference_gradient(&circuit, &p, j, &init, &obs, FD_STEP).unwrap();
            assert!((exact - fd).abs() < 1e-7, "gate {j}: {exact} vs {fd}");
        }
    }

    #[test]
    fn cost_respects_observable_norm() {
        let (circuit, init, obs) = product_tight_ansatz(2).unwrap();
        let norm = obs.spectral_summary().op_norm;
        let mut a = -3.0;
        while a < 3.0 {
            let c = cost(&circuit, &point(&[a, a * 0.7]), &init, &obs).unwrap();
            assert!(c.abs() <= norm + 1e-12);
            a += 0.61;
        }
    }

    #[test]
    fn gradient_respects_generator_half_range_cap() {
        // |d<O>/d theta_j| <= 2 ||H_j||_R ||O||_inf on a parameter sweep.
        let (circuit, init, obs) = product_tight_ansatz(2).unwrap();
        let cap = 2.0
            * circuit.gate_generator(0).unwrap().spectral_summary().half_range
            * obs.spectral_summary().op_norm;
        let mut a = -3.0;
        while a < 3.0 {
            let g = gradient(&circuit, &point(&[a, -0.4]), 0, &init, &obs).unwrap();
            assert!(g.abs() <= cap + 1e-12);
            a += 0.37;
        }
    }

    #[test]
    fn arity_mismatch_and_bad_gate_index_error() {
        let (circuit, init, obs) = minimal_tight_ansatz();
        assert!(cost(&circuit, &point(&[0.1, 0.2]), &init, &obs).is_err());
        assert!(gradient(&circuit, &point(&[0.1]), 1, &init, &obs).is_err());
    }

    #[test]
    fn circuit_rejects_mismatched_gate_dimensions() {
        let h = HermitianOperator::from_pauli_sum(1, &[(0.5, "Z".into())]).unwrap();
        assert!(CircuitSpec::new(2, vec![vec![h]]).is_err());
    }
}
