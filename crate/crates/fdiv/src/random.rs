//! Seeded generation of random test instances: circuits built from Pauli-sum
//! generators, initial states, measures with controlled support, and
//! stochastic kernels.  Everything is deterministic for a fixed seed, so
//! property sweeps are reproducible byte for byte.

use nalgebra::DVector;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::f64::consts::TAU;

use crate::circuit::{CircuitSpec, QuantumState};
use crate::error::{Error, Result};
use crate::measure::{DiscreteMeasure, ParameterPoint, StochasticMap};
use crate::operator::HermitianOperator;

const PAULI_LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];
/// Operators below this spectral norm are redrawn; they carry no signal.
const MIN_OP_NORM: f64 = 1e-6;

/// The stream cipher generator used everywhere randomness is needed.
pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Strictly positive exponential draw; rejects the measure-zero tail that
/// would produce an exact zero.
pub(crate) fn exp_sample<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        let e = -(1.0 - u).ln();
        if e > 0.0 {
            return e;
        }
    }
}

/// Uniform point on the probability simplex with strictly positive entries.
pub fn random_simplex<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut draws: Vec<f64> = (0..len).map(|_| exp_sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    for d in &mut draws {
        *d /= total;
    }
    draws
}

/// Random Hermitian operator given as a short sum of weighted Pauli strings.
/// Redraws until the spectral norm is bounded away from zero.
pub fn random_pauli_sum<R: Rng>(
    rng: &mut R,
    num_qubits: usize,
    max_terms: usize,
    max_abs_coef: f64,
) -> Result<HermitianOperator> {
    if num_qubits == 0 || max_terms == 0 {
        return Err(Error::InvalidArgument(
            "random Pauli sums need at least one qubit and one term".into(),
        ));
    }
    if !max_abs_coef.is_finite() || max_abs_coef <= 0.0 {
        return Err(Error::InvalidArgument(
            "coefficient cap must be positive and finite".into(),
        ));
    }
    loop {
        let terms = rng.random_range(1..=max_terms);
        let mut sum = Vec::with_capacity(terms);
        for _ in 0..terms {
            let coef = rng.random_range(-max_abs_coef..=max_abs_coef);
            let string: String = (0..num_qubits)
                .map(|_| PAULI_LETTERS[rng.random_range(0..PAULI_LETTERS.len())])
                .collect();
            sum.push((coef, string));
        }
        let op = HermitianOperator::from_pauli_sum(num_qubits, &sum)?;
        if op.spectral_summary().op_norm >= MIN_OP_NORM {
            return Ok(op);
        }
    }
}

/// Haar-agnostic random state: complex Gaussian-ish amplitudes, normalized.
pub fn random_state<R: Rng>(rng: &mut R, num_qubits: usize) -> Result<QuantumState> {
    let dim = 1usize << num_qubits;
    loop {
        let v = DVector::from_fn(dim, |_, _| {
            Complex::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
        });
        let norm = v.norm();
        if norm > 1e-3 {
            return QuantumState::new(v / Complex::new(norm, 0.0));
        }
    }
}

/// Uniform parameter point in `[0, 2*pi)^arity`.
pub fn random_point<R: Rng>(rng: &mut R, arity: usize) -> Result<ParameterPoint> {
    ParameterPoint::new((0..arity).map(|_| rng.random_range(0.0..TAU)).collect())
}

/// A randomly drawn circuit together with an initial state and observable.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub circuit: CircuitSpec,
    pub init: QuantumState,
    pub observable: HermitianOperator,
}

/// Draws a circuit with up to `max_qubits` qubits, `max_layers` layers and
/// `max_gates_per_layer` gates per layer, plus a random state and a random
/// nonzero observable on the same register.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_qubits: usize,
    max_layers: usize,
    max_gates_per_layer: usize,
) -> Result<RandomInstance> {
    if max_qubits == 0 || max_layers == 0 || max_gates_per_layer == 0 {
        return Err(Error::InvalidArgument(
            "instance caps must all be at least one".into(),
        ));
    }
    let num_qubits = rng.random_range(1..=max_qubits);
    let num_layers = rng.random_range(1..=max_layers);
    let mut layers = Vec::with_capacity(num_layers);
    for _ in 0..num_layers {
        let gates = rng.random_range(1..=max_gates_per_layer);
        let mut layer = Vec::with_capacity(gates);
        for _ in 0..gates {
            layer.push(random_pauli_sum(rng, num_qubits, 3, 1.5)?);
        }
        layers.push(layer);
    }
    Ok(RandomInstance {
        circuit: CircuitSpec::new(num_qubits, layers)?,
        init: random_state(rng, num_qubits)?,
        observable: random_pauli_sum(rng, num_qubits, 3, 1.5)?,
    })
}

/// Two measures over the same randomly drawn parameter points, with
/// independent strictly positive weights.
pub fn random_point_pair<R: Rng>(
    rng: &mut R,
    arity: usize,
    support: usize,
) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
    if support < 1 {
        return Err(Error::InvalidArgument(
            "support size must be at least one".into(),
        ));
    }
    let points: Vec<ParameterPoint> = (0..support)
        .map(|_| random_point(rng, arity))
        .collect::<Result<_>>()?;
    let wp = random_simplex(rng, support);
    let wq = random_simplex(rng, support);
    let p = DiscreteMeasure::from_points(points.iter().cloned().zip(wp).collect())?;
    let q = DiscreteMeasure::from_points(points.into_iter().zip(wq).collect())?;
    Ok((p, q))
}

/// Two measures over shared abstract labels `x0..x{support-1}` with
/// independent strictly positive weights.
pub fn random_label_pair<R: Rng>(
    rng: &mut R,
    support: usize,
) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
    if support < 1 {
        return Err(Error::InvalidArgument(
            "support size must be at least one".into(),
        ));
    }
    let labels: Vec<String> = (0..support).map(|i| format!("x{i}")).collect();
    let wp = random_simplex(rng, support);
    let wq = random_simplex(rng, support);
    let p = DiscreteMeasure::from_labeled(labels.iter().cloned().zip(wp).collect())?;
    let q = DiscreteMeasure::from_labeled(labels.into_iter().zip(wq).collect())?;
    Ok((p, q))
}

/// Random row-stochastic kernel from `x0..x{source-1}` to `y0..y{target-1}`.
pub fn random_kernel<R: Rng>(
    rng: &mut R,
    source: usize,
    target: usize,
) -> Result<StochasticMap> {
    if source < 1 || target < 1 {
        return Err(Error::InvalidArgument(
            "kernels need at least one source and one target label".into(),
        ));
    }
    let rows = (0..source).map(|_| random_simplex(rng, target)).collect();
    StochasticMap::new(
        (0..source).map(|i| format!("x{i}")).collect(),
        (0..target).map(|j| format!("y{j}")).collect(),
        rows,
    )
}

/// A random measure pair plus a kernel applicable to both, for coarse
/// graining studies.
pub fn random_dpi_triple<R: Rng>(
    rng: &mut R,
    source: usize,
    target: usize,
) -> Result<(DiscreteMeasure, DiscreteMeasure, StochasticMap)> {
    let (p, q) = random_label_pair(rng, source)?;
    let k = random_kernel(rng, source, target)?;
    Ok((p, q, k))
}
