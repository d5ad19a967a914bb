//! Hermitian operators on qubit registers.
//!
//! Operators are dense complex matrices, optionally remembered as real-weighted
//! Pauli strings.  A Pauli string is read left to right as tensor factors, so
//! `"IZX"` denotes `I (x) Z (x) X` with the rightmost letter acting on the
//! lowest-index qubit.  Everything downstream (circuit unitaries, spectral
//! summaries, gradients) flows through the Hermitian eigendecomposition here.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;

use crate::error::{Error, Result};

type CMatrix = DMatrix<Complex<f64>>;

/// Entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Entrywise tolerance on `U^dag U = I` for produced unitaries.
pub const UNITARITY_TOL: f64 = 1e-12;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

/// The 2x2 matrix of a single Pauli letter.
pub fn pauli_matrix(letter: char) -> Result<CMatrix> {
    let entries = match letter {
        'I' => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        'X' => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        'Y' => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        'Z' => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        other => {
            return Err(Error::InvalidOperator(format!(
                "unknown Pauli letter `{other}`; expected I, X, Y or Z"
            )))
        }
    };
    Ok(CMatrix::from_row_slice(2, 2, &entries))
}

/// Dense matrix of a Pauli string, leftmost letter first in the tensor
/// product.
pub fn pauli_string_matrix(s: &str) -> Result<CMatrix> {
    if s.is_empty() {
        return Err(Error::InvalidOperator("empty Pauli string".into()));
    }
    let mut m: Option<CMatrix> = None;
    for letter in s.chars() {
        let p = pauli_matrix(letter)?;
        m = Some(match m {
            None => p,
            Some(acc) => acc.kronecker(&p),
        });
    }
    Ok(m.unwrap())
}

/// Identity matrix of a given dimension.
pub fn identity_matrix(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Largest entrywise absolute difference between two matrices; returns `inf`
/// when the shapes disagree.
pub fn max_entry_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Rotates a matrix by a global phase so its largest-modulus entry becomes
/// positive real.  Ties (and near-ties, within a relative window of `1e-12`)
/// resolve to the first entry in row-major order, which keeps the anchor
/// stable under rounding noise; the map is idempotent to machine precision
/// and matrices equal up to global phase land on the same output.
pub fn canonicalize_phase(m: &CMatrix) -> CMatrix {
    let max_norm = m.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if max_norm == 0.0 {
        return m.clone();
    }
    let (rows, cols) = m.shape();
    let threshold = max_norm * (1.0 - 1e-12);
    let mut anchor = c(max_norm, 0.0);
    'scan: for r in 0..rows {
        for col in 0..cols {
            let v = m[(r, col)];
            if v.norm() >= threshold {
                anchor = v;
                break 'scan;
            }
        }
    }
    let phase = anchor / anchor.norm();
    m.map(|v| v * phase.conj())
}

/// Largest entrywise distance after optimally aligning the global phase of
/// `b` to `a` (through the trace inner product).  Matrices equal up to a
/// global phase have distance zero regardless of which representatives are
/// passed in.
pub fn phase_aligned_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    let overlap: Complex<f64> = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).sum();
    if overlap.norm() == 0.0 {
        return max_entry_distance(a, b);
    }
    let phase = overlap / overlap.norm();
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y * phase).norm())
        .fold(0.0, f64::max)
}

/// Deterministic full-precision rendering of a matrix, used as the canonical
/// label of a unitary atom.
pub fn render_matrix(m: &CMatrix) -> String {
    let (rows, cols) = m.shape();
    let mut body = String::new();
    for r in 0..rows {
        if r > 0 {
            body.push(';');
        }
        for col in 0..cols {
            if col > 0 {
                body.push(',');
            }
            let v = m[(r, col)];
            body.push_str(&format!("{}:{}", v.re, v.im));
        }
    }
    format!("U{rows}[{body}]")
}

/// Eigenvalue range of a Hermitian operator.
#[derive(Clone, Copy, Debug)]
pub struct SpectralSummary {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// `(max - min) / 2`; the constant that controls gradient deviations.
    pub half_range: f64,
    /// `max(|min|, |max|)`, the operator norm.
    pub op_norm: f64,
}

/// A Hermitian operator on a power-of-two dimensional space, with an optional
/// Pauli-sum description.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    dim: usize,
    matrix: CMatrix,
    pauli_sum: Option<Vec<(f64, String)>>,
}

impl HermitianOperator {
    /// Wraps a dense matrix, checking shape and Hermiticity.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::InvalidOperator(format!(
                "operator matrix must be square, got {rows}x{cols}"
            )));
        }
        if rows == 0 || !rows.is_power_of_two() {
            return Err(Error::InvalidOperator(format!(
                "operator dimension must be a positive power of two, got {rows}"
            )));
        }
        let deviation = max_entry_distance(&matrix, &matrix.adjoint());
        if deviation.is_nan() || deviation > HERMITICITY_TOL {
            return Err(Error::InvalidOperator(format!(
                "matrix deviates from Hermiticity by {deviation:e} (tolerance {HERMITICITY_TOL:e})"
            )));
        }
        Ok(HermitianOperator {
            dim: rows,
            matrix,
            pauli_sum: None,
        })
    }

    /// Builds `sum_k c_k P_k` from real coefficients and Pauli strings of
    /// length `num_qubits`.
    pub fn from_pauli_sum(num_qubits: usize, terms: &[(f64, String)]) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidOperator(
                "operator needs at least one qubit".into(),
            ));
        }
        if terms.is_empty() {
            return Err(Error::InvalidOperator(
                "Pauli sum needs at least one term".into(),
            ));
        }
        let dim = 1usize << num_qubits;
        let mut matrix = CMatrix::zeros(dim, dim);
        for (coefficient, string) in terms {
            if !coefficient.is_finite() {
                return Err(Error::InvalidOperator(format!(
                    "non-finite coefficient for Pauli string `{string}`"
                )));
            }
            if string.chars().count() != num_qubits {
                return Err(Error::InvalidOperator(format!(
                    "Pauli string `{string}` has length {} but the register has {num_qubits} \
                     qubits",
                    string.chars().count()
                )));
            }
            matrix += pauli_string_matrix(string)?.map(|v| v * c(*coefficient, 0.0));
        }
        Ok(HermitianOperator {
            dim,
            matrix,
            pauli_sum: Some(terms.to_vec()),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn pauli_sum(&self) -> Option<&[(f64, String)]> {
        self.pauli_sum.as_deref()
    }

    /// Eigenvalue range via the Hermitian eigendecomposition.
    pub fn spectral_summary(&self) -> SpectralSummary {
        let eigen = SymmetricEigen::new(self.matrix.clone());
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in eigen.eigenvalues.iter() {
            min = min.min(v);
            max = max.max(v);
        }
        SpectralSummary {
            min_eigenvalue: min,
            max_eigenvalue: max,
            half_range: (max - min) / 2.0,
            op_norm: min.abs().max(max.abs()),
        }
    }
}

/// `exp(-i angle H)` through the eigendecomposition `H = V diag(l) V^dag`.
/// The result is checked to be unitary within [`UNITARITY_TOL`].
pub fn hermitian_expm(h: &HermitianOperator, angle: f64) -> Result<CMatrix> {
    if !angle.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "rotation angle must be finite, got {angle}"
        )));
    }
    let eigen = SymmetricEigen::new(h.matrix().clone());
    let dim = h.dim();
    let mut u = CMatrix::zeros(dim, dim);
    for (k, &lambda) in eigen.eigenvalues.iter().enumerate() {
        let phase = Complex::from_polar(1.0, -angle * lambda);
        let column = eigen.eigenvectors.column(k);
        // u += phase * |v_k><v_k|
        for r in 0..dim {
            for s in 0..dim {
                u[(r, s)] += phase * column[r] * column[s].conj();
            }
        }
    }
    let deviation = max_entry_distance(&(u.adjoint() * &u), &identity_matrix(dim));
    if deviation.is_nan() || deviation > UNITARITY_TOL {
        return Err(Error::Numeric(format!(
            "matrix exponential lost unitarity by {deviation:e}"
        )));
    }
    Ok(u)
}
