//! Discrete probability measures over parameter points, unitaries, or
//! abstract labels.
//!
//! Every measure passes one validation funnel: weights must be finite and
//! non-negative, labels unique, dust atoms (weight below `1e-15`) are pruned,
//! and the total mass must sit within `1e-9` of one, after which it is
//! renormalized exactly.  Atoms are kept sorted by label so that iteration
//! order, divergence sums, and emitted reports are deterministic.
//!
//! Measures over parameter space carry the parameter vector of each atom;
//! measures over the unitary group carry the matrix.  Both payloads survive
//! alignment and are what the bound harness evaluates costs and gradients on.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::circuit::CircuitSpec;
use crate::error::{Error, Result};
use crate::operator::{canonicalize_phase, max_entry_distance, phase_aligned_distance, render_matrix};

/// Weights below this are dropped during construction.
pub const PRUNE_TOL: f64 = 1e-15;
/// Largest mass deficit that is silently renormalized away.
pub const MASS_TOL: f64 = 1e-9;
/// Default merge tolerance for push-forward atoms that coincide up to phase.
pub const MERGE_TOL: f64 = 1e-9;

/// Which space a measure lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainTag {
    ParameterSpace,
    UnitaryGroup,
    Abstract,
}

impl std::fmt::Display for DomainTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainTag::ParameterSpace => write!(f, "theta"),
            DomainTag::UnitaryGroup => write!(f, "unitary"),
            DomainTag::Abstract => write!(f, "abstract"),
        }
    }
}

/// A point in circuit parameter space: one angle per gate, in radians.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterPoint {
    angles: Vec<f64>,
}

impl ParameterPoint {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument(
                "parameter angles must be finite".into(),
            ));
        }
        Ok(ParameterPoint { angles })
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Canonical label: angles rendered at full (shortest round-trip)
    /// precision, so distinct points never collide.
    pub fn label(&self) -> String {
        let body: Vec<String> = self.angles.iter().map(|a| format!("{a}")).collect();
        format!("theta[{}]", body.join(","))
    }
}

/// Atom payload: what the label decodes to, when anything.
#[derive(Clone, Debug)]
pub enum Payload {
    Point(ParameterPoint),
    Unitary(DMatrix<Complex<f64>>),
}

/// One weighted atom of a measure.
#[derive(Clone, Debug)]
pub struct Atom {
    label: String,
    weight: f64,
    payload: Option<Payload>,
}

impl Atom {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn point(&self) -> Option<&ParameterPoint> {
        match &self.payload {
            Some(Payload::Point(p)) => Some(p),
            _ => None,
        }
    }

    pub fn unitary(&self) -> Option<&DMatrix<Complex<f64>>> {
        match &self.payload {
            Some(Payload::Unitary(u)) => Some(u),
            _ => None,
        }
    }
}

/// A validated discrete probability measure.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    domain: DomainTag,
    atoms: Vec<Atom>,
}

impl DiscreteMeasure {
    fn build(domain: DomainTag, raw: Vec<Atom>) -> Result<Self> {
        for atom in &raw {
            if !atom.weight.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "weight of atom `{}` is not finite",
                    atom.label
                )));
            }
            if atom.weight < 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "weight of atom `{}` is negative ({})",
                    atom.label, atom.weight
                )));
            }
        }
        let mut atoms: Vec<Atom> = raw.into_iter().filter(|a| a.weight >= PRUNE_TOL).collect();
        atoms.sort_by(|a, b| a.label.cmp(&b.label));
        for pair in atoms.windows(2) {
            if pair[0].label == pair[1].label {
                return Err(Error::InvalidMeasure(format!(
                    "duplicate atom label `{}`",
                    pair[0].label
                )));
            }
        }
        let mass: f64 = atoms.iter().map(|a| a.weight).sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "total mass {mass} is not 1 within {MASS_TOL:e}"
            )));
        }
        for atom in &mut atoms {
            atom.weight /= mass;
        }
        Ok(DiscreteMeasure { domain, atoms })
    }

    /// A measure over abstract labels.
    pub fn from_labeled(atoms: Vec<(String, f64)>) -> Result<Self> {
        let raw = atoms
            .into_iter()
            .map(|(label, weight)| Atom {
                label,
                weight,
                payload: None,
            })
            .collect();
        Self::build(DomainTag::Abstract, raw)
    }

    /// A measure over opaque labels carrying an explicit domain tag.  Atoms
    /// built this way have no payload, so functionals that need parameter
    /// vectors or matrices reject them; divergences work as usual.
    pub fn from_labeled_tagged(domain: DomainTag, atoms: Vec<(String, f64)>) -> Result<Self> {
        let raw = atoms
            .into_iter()
            .map(|(label, weight)| Atom {
                label,
                weight,
                payload: None,
            })
            .collect();
        Self::build(domain, raw)
    }

    /// A measure over parameter points; labels derive from the angles.
    pub fn from_points(atoms: Vec<(ParameterPoint, f64)>) -> Result<Self> {
        let raw = atoms
            .into_iter()
            .map(|(point, weight)| Atom {
                label: point.label(),
                weight,
                payload: Some(Payload::Point(point)),
            })
            .collect();
        Self::build(DomainTag::ParameterSpace, raw)
    }

    /// A measure over unitaries.  Each matrix is rotated to canonical global
    /// phase before labeling, so matrices equal up to phase collide (and are
    /// rejected as duplicates rather than silently double-counted).
    pub fn from_unitaries(atoms: Vec<(DMatrix<Complex<f64>>, f64)>) -> Result<Self> {
        let raw = atoms
            .into_iter()
            .map(|(u, weight)| {
                let u = canonicalize_phase(&u);
                Atom {
                    label: render_matrix(&u),
                    weight,
                    payload: Some(Payload::Unitary(u)),
                }
            })
            .collect();
        Self::build(DomainTag::UnitaryGroup, raw)
    }

    fn from_unitary_atoms_raw(atoms: Vec<(DMatrix<Complex<f64>>, f64)>) -> Result<Self> {
        let raw = atoms
            .into_iter()
            .map(|(u, weight)| Atom {
                label: render_matrix(&u),
                weight,
                payload: Some(Payload::Unitary(u)),
            })
            .collect();
        Self::build(DomainTag::UnitaryGroup, raw)
    }

    pub fn domain(&self) -> DomainTag {
        self.domain
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// Weight of a label, zero when absent.
    pub fn weight_of(&self, label: &str) -> f64 {
        self.atoms
            .binary_search_by(|a| a.label.as_str().cmp(label))
            .map(|i| self.atoms[i].weight)
            .unwrap_or(0.0)
    }

    /// Expectation of a per-atom observable.
    pub fn expectation(&self, mut h: impl FnMut(&Atom) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for atom in &self.atoms {
            acc += atom.weight * h(atom)?;
        }
        Ok(acc)
    }

    /// True when both measures put the same weight (within `tol`) on the same
    /// labels.
    pub fn approx_eq(&self, other: &DiscreteMeasure, tol: f64) -> bool {
        if self.domain != other.domain {
            return false;
        }
        match align_supports(self, other) {
            Ok(aligned) => aligned
                .p
                .iter()
                .zip(&aligned.q)
                .all(|(a, b)| (a - b).abs() <= tol),
            Err(_) => false,
        }
    }
}

/// Weight vectors of two measures on their common (union) support.
#[derive(Clone, Debug)]
pub struct AlignedWeights {
    pub labels: Vec<String>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

/// Aligns two measures on the union of their supports, filling absent atoms
/// with weight zero.  Both measures must live on the same domain.
pub fn align_supports(p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<AlignedWeights> {
    if p.domain != q.domain {
        return Err(Error::DomainMismatch(format!(
            "cannot align a measure on `{}` with one on `{}`",
            p.domain, q.domain
        )));
    }
    let mut labels: Vec<String> = Vec::with_capacity(p.atoms.len() + q.atoms.len());
    let (mut i, mut j) = (0, 0);
    while i < p.atoms.len() || j < q.atoms.len() {
        let next = match (p.atoms.get(i), q.atoms.get(j)) {
            (Some(a), Some(b)) => match a.label.cmp(&b.label) {
                std::cmp::Ordering::Less => {
                    i += 1;
                    a.label.clone()
                }
                std::cmp::Ordering::Greater => {
                    j += 1;
                    b.label.clone()
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                    a.label.clone()
                }
            },
            (Some(a), None) => {
                i += 1;
                a.label.clone()
            }
            (None, Some(b)) => {
                j += 1;
                b.label.clone()
            }
            (None, None) => unreachable!(),
        };
        labels.push(next);
    }
    let wp = labels.iter().map(|l| p.weight_of(l)).collect();
    let wq = labels.iter().map(|l| q.weight_of(l)).collect();
    Ok(AlignedWeights {
        labels,
        p: wp,
        q: wq,
    })
}

fn check_bias(r: f64) -> Result<(f64, f64)> {
    if !r.is_finite() || !(-1.0..=1.0).contains(&r) {
        return Err(Error::OutOfDomain(format!(
            "binary pair bias must lie in [-1, 1], got {r}"
        )));
    }
    Ok(((1.0 - r) / 2.0, (1.0 + r) / 2.0))
}

/// The swapped two-point pair `P = {lo: (1-r)/2, hi: (1+r)/2}` and `Q` with
/// the weights exchanged.  Their total variation distance is `|r|`, and they
/// attain the binary divergence profile of every generator exactly.
pub fn binary_pair(r: f64, lo: &str, hi: &str) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
    let (w_lo, w_hi) = check_bias(r)?;
    if lo == hi {
        return Err(Error::InvalidMeasure(
            "binary pair needs two distinct labels".into(),
        ));
    }
    let p = DiscreteMeasure::from_labeled(vec![(lo.to_string(), w_lo), (hi.to_string(), w_hi)])?;
    let q = DiscreteMeasure::from_labeled(vec![(lo.to_string(), w_hi), (hi.to_string(), w_lo)])?;
    Ok((p, q))
}

/// Swapped two-point pair over parameter points.
pub fn binary_pair_points(
    r: f64,
    lo: ParameterPoint,
    hi: ParameterPoint,
) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
    let (w_lo, w_hi) = check_bias(r)?;
    if lo.label() == hi.label() {
        return Err(Error::InvalidMeasure(
            "binary pair needs two distinct points".into(),
        ));
    }
    let p = DiscreteMeasure::from_points(vec![(lo.clone(), w_lo), (hi.clone(), w_hi)])?;
    let q = DiscreteMeasure::from_points(vec![(lo, w_hi), (hi, w_lo)])?;
    Ok((p, q))
}

/// Swapped two-point pair over unitaries.
pub fn binary_pair_unitaries(
    r: f64,
    lo: DMatrix<Complex<f64>>,
    hi: DMatrix<Complex<f64>>,
) -> Result<(DiscreteMeasure, DiscreteMeasure)> {
    let (w_lo, w_hi) = check_bias(r)?;
    let p = DiscreteMeasure::from_unitaries(vec![(lo.clone(), w_lo), (hi.clone(), w_hi)])?;
    let q = DiscreteMeasure::from_unitaries(vec![(lo, w_hi), (hi, w_lo)])?;
    Ok((p, q))
}

/// A row-stochastic transition kernel between two labeled finite spaces.
#[derive(Clone, Debug)]
pub struct StochasticMap {
    source_labels: Vec<String>,
    target_labels: Vec<String>,
    /// `kernel[i][j]` is the probability of moving source atom `i` to target
    /// atom `j`; each row sums to one.
    kernel: Vec<Vec<f64>>,
}

impl StochasticMap {
    pub fn new(
        source_labels: Vec<String>,
        target_labels: Vec<String>,
        kernel: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if kernel.len() != source_labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "kernel has {} rows for {} source labels",
                kernel.len(),
                source_labels.len()
            )));
        }
        for (i, row) in kernel.iter().enumerate() {
            if row.len() != target_labels.len() {
                return Err(Error::DimensionMismatch(format!(
                    "kernel row {i} has {} entries for {} target labels",
                    row.len(),
                    target_labels.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "kernel row {i} contains a negative or non-finite entry"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "kernel row {i} sums to {sum}, expected 1 within 1e-12"
                )));
            }
        }
        Ok(StochasticMap {
            source_labels,
            target_labels,
            kernel,
        })
    }

    /// The identity kernel on a label set.
    pub fn identity(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        let kernel = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(labels.clone(), labels, kernel)
    }

    pub fn source_labels(&self) -> &[String] {
        &self.source_labels
    }

    pub fn target_labels(&self) -> &[String] {
        &self.target_labels
    }

    /// Pushes a measure through the kernel: `out(y) = sum_z K(y|z) p(z)`.
    /// Every atom of `p` must appear among the source labels.
    pub fn apply(&self, p: &DiscreteMeasure) -> Result<DiscreteMeasure> {
        let mut out = vec![0.0; self.target_labels.len()];
        for atom in p.atoms() {
            let row = self
                .source_labels
                .iter()
                .position(|l| l == atom.label())
                .ok_or_else(|| {
                    Error::DomainMismatch(format!(
                        "atom `{}` is not covered by the kernel's source labels",
                        atom.label()
                    ))
                })?;
            for (j, k) in self.kernel[row].iter().enumerate() {
                out[j] += k * atom.weight();
            }
        }
        DiscreteMeasure::from_labeled(
            self.target_labels
                .iter()
                .cloned()
                .zip(out)
                .collect::<Vec<_>>(),
        )
    }
}

/// Options for pushing a parameter measure forward through a circuit.
#[derive(Clone, Copy, Debug)]
pub struct PushforwardOptions {
    /// Maximum entrywise distance between (canonicalized) unitaries that are
    /// still considered the same point of the unitary group.
    pub merge_tol: f64,
    /// When set, matrices are compared up to global phase.  Disable together
    /// with `merge_tol = 0` for exact-matrix merging.
    pub phase_invariant: bool,
}

impl Default for PushforwardOptions {
    fn default() -> Self {
        PushforwardOptions {
            merge_tol: MERGE_TOL,
            phase_invariant: true,
        }
    }
}

/// Push-forward of a parameter-space measure through a circuit: every atom is
/// mapped to its unitary, and atoms whose unitaries coincide (up to global
/// phase, within `merge_tol`) are merged by summing weights.  The first atom
/// in label order supplies the representative matrix of each merged class.
pub fn pushforward(
    p: &DiscreteMeasure,
    circuit: &CircuitSpec,
    opts: PushforwardOptions,
) -> Result<DiscreteMeasure> {
    if p.domain() != DomainTag::ParameterSpace {
        return Err(Error::DomainMismatch(format!(
            "push-forward expects a parameter-space measure, got one on `{}`",
            p.domain()
        )));
    }
    if opts.merge_tol.is_nan() || opts.merge_tol < 0.0 {
        return Err(Error::InvalidArgument(
            "merge tolerance must be non-negative".into(),
        ));
    }
    let mut reps: Vec<(DMatrix<Complex<f64>>, f64)> = Vec::new();
    for atom in p.atoms() {
        let point = atom.point().ok_or_else(|| {
            Error::InvalidMeasure(format!(
                "atom `{}` lacks a parameter vector and cannot be pushed forward",
                atom.label()
            ))
        })?;
        let mut u = circuit.build_unitary(point)?;
        if opts.phase_invariant {
            u = canonicalize_phase(&u);
        }
        let distance = if opts.phase_invariant {
            phase_aligned_distance
        } else {
            max_entry_distance
        };
        match reps
            .iter_mut()
            .find(|(v, _)| distance(v, &u) <= opts.merge_tol)
        {
            Some((_, w)) => *w += atom.weight(),
            None => reps.push((u, atom.weight())),
        }
    }
    DiscreteMeasure::from_unitary_atoms_raw(reps)
}
