//! Density matrices on qubit registers, partial traces and fidelities.
//!
//! Qubit 0 is the most significant tensor factor (leftmost in ⊗), matching
//! the subscript order used throughout: basis index `i` has qubit q's bit at
//! position `n_qubits − 1 − q`.

use num_complex::Complex64;

use crate::eigen::{eig_hermitian_unchecked, min_eigenvalue};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PureState};

pub(crate) const HERMITICITY_TOL: f64 = 1e-10;
pub(crate) const PSD_TOL: f64 = -1e-9;
pub(crate) const TRACE_TOL: f64 = 1e-10;

/// Hermitian, positive semidefinite, unit-trace matrix on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    n_qubits: usize,
}

impl DensityMatrix {
    /// Validate Hermiticity (1e-10), positivity (eigenvalues ≥ −1e-9) and
    /// unit trace (1e-10), and require dim = 2^n for some n ≥ 1.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dim = matrix.dim();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::DimensionMismatch(format!(
                "density matrix dimension {dim} is not a power of two"
            )));
        }
        let residual = matrix.hermiticity_residual();
        if residual > HERMITICITY_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace: trace.re });
        }
        let min_ev = min_eigenvalue(&matrix);
        if min_ev < PSD_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min_ev,
            });
        }
        Ok(Self::new_unchecked(matrix))
    }

    /// Wrap without validation; for internal construction where the
    /// invariants hold by construction.
    pub(crate) fn new_unchecked(matrix: ComplexMatrix) -> Self {
        let n_qubits = matrix.dim().trailing_zeros() as usize;
        Self { matrix, n_qubits }
    }

    /// |ψ⟩⟨ψ| as a density matrix; dim must be a power of two.
    pub fn from_pure(psi: &PureState) -> Result<Self> {
        let dim = psi.dim();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::DimensionMismatch(format!(
                "pure state dimension {dim} is not a power of two"
            )));
        }
        Ok(Self::new_unchecked(psi.projector()))
    }

    /// Maximally mixed state I/2ⁿ.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self::new_unchecked(ComplexMatrix::identity(dim).scale_re(1.0 / dim as f64))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Convex combination p·other + (1−p)·self.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "mixing dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Self::new_unchecked(
            &self.matrix.scale_re(1.0 - p) + &other.matrix.scale_re(p),
        ))
    }

    /// Spectrum in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eig_hermitian_unchecked(&self.matrix).eigenvalues
    }

    /// Reduced state on `keep` (original qubit order preserved).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let reduced = partial_trace_matrix(&self.matrix, self.n_qubits, keep)?;
        Ok(Self::new_unchecked(reduced))
    }
}

/// Partial trace of a square matrix indexed by `n_qubits` qubit labels,
/// keeping the qubits in `keep` (original order). Works on raw matrices so
/// intermediate non-density operators can be reduced too.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    n_qubits: usize,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.len() != keep.len() {
        return Err(Error::InvalidArgument(
            "duplicate qubit index in keep set".into(),
        ));
    }
    for &q in &keep_sorted {
        if q >= n_qubits {
            return Err(Error::InvalidQubitIndex {
                index: q,
                n_qubits,
            });
        }
    }
    assert_eq!(m.dim(), 1 << n_qubits, "matrix dim must be 2^n_qubits");

    let traced: Vec<usize> = (0..n_qubits).filter(|q| !keep_sorted.contains(q)).collect();
    let kd = 1usize << keep_sorted.len();
    let td = 1usize << traced.len();

    // Qubit q occupies bit (n_qubits − 1 − q) of a basis index.
    let bit = |q: usize| n_qubits - 1 - q;
    let assemble = |kept_idx: usize, traced_idx: usize| -> usize {
        let mut full = 0usize;
        for (pos, &q) in keep_sorted.iter().enumerate() {
            let b = (kept_idx >> (keep_sorted.len() - 1 - pos)) & 1;
            full |= b << bit(q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            let b = (traced_idx >> (traced.len() - 1 - pos)) & 1;
            full |= b << bit(q);
        }
        full
    };

    let mut out = ComplexMatrix::zeros(kd);
    for i in 0..kd {
        for j in 0..kd {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in 0..td {
                acc += m.get(assemble(i, t), assemble(j, t));
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Partial trace over the right factor of a bipartite split dim = d_left·d_right.
pub fn trace_out_right(m: &ComplexMatrix, d_left: usize, d_right: usize) -> ComplexMatrix {
    assert_eq!(m.dim(), d_left * d_right);
    let mut out = ComplexMatrix::zeros(d_left);
    for i in 0..d_left {
        for j in 0..d_left {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d_right {
                acc += m.get(i * d_right + k, j * d_right + k);
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// Partial trace over the left factor of a bipartite split dim = d_left·d_right.
pub fn trace_out_left(m: &ComplexMatrix, d_left: usize, d_right: usize) -> ComplexMatrix {
    assert_eq!(m.dim(), d_left * d_right);
    let mut out = ComplexMatrix::zeros(d_right);
    for i in 0..d_right {
        for j in 0..d_right {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d_left {
                acc += m.get(k * d_right + i, k * d_right + j);
            }
            out.set(i, j, acc);
        }
    }
    out
}

/// ⟨φ|ρ|φ⟩ — fidelity between a mixed state and a pure state.
pub fn fidelity_pure(rho: &DensityMatrix, phi: &PureState) -> Result<f64> {
    if rho.dim() != phi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs vector dim {}",
            rho.dim(),
            phi.dim()
        )));
    }
    let n = rho.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += phi.amplitude(i).conj() * rho.matrix().get(i, j) * phi.amplitude(j);
        }
    }
    debug_assert!(acc.im.abs() < 1e-12, "fidelity should be real");
    Ok(acc.re)
}
