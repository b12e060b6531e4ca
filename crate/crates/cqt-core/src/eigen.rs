//! Hermitian eigendecomposition via cyclic complex Jacobi rotations.
//!
//! The sweep order is fixed (row-major over the upper triangle), so repeated
//! runs on the same input produce bit-identical output on one platform.
//! Dimensions here never exceed 64, where Jacobi is both robust and fast.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Eigenvalues (ascending) and a unitary matrix whose columns are the
/// matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Rebuild V·diag(λ)·V†, for reconstruction checks.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += v.get(i, k) * self.eigenvalues[k] * v.get(j, k).conj();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// k-th eigenvector as an amplitude vector.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let n = self.eigenvalues.len();
        (0..n).map(|i| self.eigenvectors.get(i, k)).collect()
    }
}

const MAX_SWEEPS: usize = 100;

/// Diagonalize a Hermitian matrix. Errors if the input fails the 1e-10
/// Hermiticity check.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let residual = a.hermiticity_residual();
    if residual > 1e-10 {
        return Err(Error::NotHermitian { residual });
    }
    Ok(eig_hermitian_unchecked(a))
}

/// Same as [`eig_hermitian`] but symmetrizes instead of validating.
pub(crate) fn eig_hermitian_unchecked(a: &ComplexMatrix) -> EigenDecomposition {
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let scale = m.max_abs().max(1.0);
    let stop = 1e-15 * scale;

    for _ in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(m.get(p, q).norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q, stop);
            }
        }
    }

    // Diagonal of a Hermitian matrix is real up to rounding.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors.set(row, new_col, v.get(row, old_col));
        }
    }

    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// One Jacobi rotation annihilating the (p, q) entry of the Hermitian
/// working matrix `m`, accumulated into `v`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, stop: f64) {
    let apq = m.get(p, q);
    let abs_apq = apq.norm();
    if abs_apq <= stop {
        return;
    }

    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let phase = apq / abs_apq;

    // Annihilation condition: (aqq−app)·c·s + |apq|·(c²−s²) = 0; choose the
    // root of t² − 2τt − 1 with |t| ≤ 1 for stability.
    let tau = (aqq - app) / (2.0 * abs_apq);
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G differs from the identity only in rows/columns p, q:
    //   G[p][p] = c, G[p][q] = −s·e^{iφ}, G[q][p] = s·e^{−iφ}, G[q][q] = c.
    let n = m.dim();
    let se_pos = s * phase; //  s·e^{iφ}
    let se_neg = s * phase.conj(); //  s·e^{−iφ}

    // Rows (G† from the left).
    for j in 0..n {
        let mpj = m.get(p, j);
        let mqj = m.get(q, j);
        m.set(p, j, c * mpj + se_pos * mqj);
        m.set(q, j, -se_neg * mpj + c * mqj);
    }
    // Columns (G from the right), and accumulate eigenvectors.
    for i in 0..n {
        let mip = m.get(i, p);
        let miq = m.get(i, q);
        m.set(i, p, c * mip + se_neg * miq);
        m.set(i, q, -se_pos * mip + c * miq);

        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, c * vip + se_neg * viq);
        v.set(i, q, -se_pos * vip + c * viq);
    }

    // The (p,q) pair is annihilated analytically; pin it to keep the
    // working matrix exactly Hermitian.
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    let mpp = m.get(p, p);
    let mqq = m.get(q, q);
    m.set(p, p, Complex64::new(mpp.re, 0.0));
    m.set(q, q, Complex64::new(mqq.re, 0.0));
}

/// Smallest eigenvalue of a Hermitian matrix (symmetrizes tiny residue).
pub(crate) fn min_eigenvalue(a: &ComplexMatrix) -> f64 {
    eig_hermitian_unchecked(a).min_eigenvalue()
}
