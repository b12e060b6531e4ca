//! The eavesdropper's optimal measurement.
//!
//! Given the joint sender–receiver–eavesdropper state ρ^{ABD}, the
//! eavesdropper wants the POVM {M_i} on his own system that maximizes
//! Σ_i Tr(ρ̃_i M_i) with ρ̃_i = Tr^{AB}((|φ_i⟩⟨φ_i| ⊗ I)·ρ^{ABD}), one
//! operator per Bell state — minimum-error discrimination of the
//! sub-normalized ensemble {ρ̃_i}.
//!
//! The primal/dual pair is
//!
//!   maximize Σ Tr(ρ̃_i M_i)   s.t.  M_i ⪰ 0, Σ M_i = I
//!   minimize Tr(Y)            s.t.  Y ⪰ ρ̃_i for all i, Y Hermitian
//!
//! solved by the fixed-point iteration M_i ← L^{−1/2} ρ̃_i M_i ρ̃_i L^{−1/2}
//! with L = Σ_j ρ̃_j M_j ρ̃_j. Conformance is certified, not assumed: every
//! returned solution carries a dual-feasible Y whose objective gap bounds
//! the suboptimality.

use num_complex::Complex64;

use crate::density::{trace_out_left, DensityMatrix};
use crate::eigen::eig_hermitian_unchecked;
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix};
use crate::states::bell_basis;

/// Positive operator-valued measure: PSD elements summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    /// Validates Hermiticity (1e-10), positivity (min eigenvalue ≥ −1e-9)
    /// and completeness (Σ elements = I within 1e-9 entrywise).
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        assert!(!elements.is_empty());
        let dim = elements[0].dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for e in &elements {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch(
                    "POVM elements must share one dimension".into(),
                ));
            }
            let residual = e.hermiticity_residual();
            if residual > 1e-10 {
                return Err(Error::NotHermitian { residual });
            }
            let min_ev = eig_hermitian_unchecked(e).min_eigenvalue();
            if min_ev < -1e-9 {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: min_ev,
                });
            }
            sum = &sum + e;
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if residual > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "POVM completeness residual {residual:.3e}"
            )));
        }
        Ok(Self { elements })
    }

    /// Trivial single-outcome POVM {I}.
    pub fn trivial(dim: usize) -> Self {
        Self {
            elements: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// Uniform n-outcome POVM {I/n, …}.
    pub fn uniform(dim: usize, n: usize) -> Self {
        Self {
            elements: vec![ComplexMatrix::identity(dim).scale_re(1.0 / n as f64); n],
        }
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }
}

/// The ensemble to discriminate: sub-normalized PSD operators with labels.
#[derive(Debug, Clone)]
pub struct DiscriminationInstance {
    pub rho_tilde: Vec<ComplexMatrix>,
    pub labels: Vec<String>,
}

impl DiscriminationInstance {
    pub fn new(rho_tilde: Vec<ComplexMatrix>, labels: Vec<String>) -> Self {
        assert_eq!(rho_tilde.len(), labels.len());
        assert!(!rho_tilde.is_empty());
        let dim = rho_tilde[0].dim();
        assert!(rho_tilde.iter().all(|r| r.dim() == dim));
        Self { rho_tilde, labels }
    }

    pub fn dim(&self) -> usize {
        self.rho_tilde[0].dim()
    }

    pub fn n_outcomes(&self) -> usize {
        self.rho_tilde.len()
    }

    /// Σ Tr(ρ̃_i) — equals 1 for instances built from a normalized state.
    pub fn total_trace(&self) -> f64 {
        self.rho_tilde.iter().map(|r| r.trace().re).sum()
    }

    /// Objective Σ Tr(ρ̃_i M_i) for a given POVM.
    pub fn objective(&self, povm: &Povm) -> f64 {
        self.rho_tilde
            .iter()
            .zip(povm.elements())
            .map(|(r, m)| r.trace_product(m).re)
            .sum()
    }
}

/// Project ρ^{ABD} onto each Bell state of the sender–receiver pair and
/// trace that pair out, leaving four sub-normalized operators on the
/// eavesdropper's space.
pub fn build_instance(
    rho_abd: &DensityMatrix,
    derek_dim: usize,
) -> Result<DiscriminationInstance> {
    let labels = (0..4usize).map(|i| format!("{}{}", i >> 1, i & 1)).collect();
    let targets = bell_basis();
    build_instance_with_targets(rho_abd, derek_dim, &targets, labels)
}

/// Same projection for caller-chosen two-qubit target states — e.g. the
/// branches the controller's measurement settings project the pair into.
pub fn build_instance_with_targets(
    rho_abd: &DensityMatrix,
    derek_dim: usize,
    targets: &[crate::linalg::PureState],
    labels: Vec<String>,
) -> Result<DiscriminationInstance> {
    if rho_abd.dim() != 4 * derek_dim {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} does not factor as 4 × {derek_dim}",
            rho_abd.dim()
        )));
    }
    if targets.iter().any(|t| t.dim() != 4) {
        return Err(Error::DimensionMismatch(
            "branch targets must be two-qubit states".into(),
        ));
    }
    let id_d = ComplexMatrix::identity(derek_dim);
    let mut rho_tilde = Vec::with_capacity(targets.len());
    for target in targets {
        let op = kron(&target.projector(), &id_d);
        let projected = op.matmul(rho_abd.matrix());
        // The product alone is Hermitian only up to rounding; symmetrize.
        let reduced = trace_out_left(&projected, 4, derek_dim).hermitian_part();
        rho_tilde.push(reduced);
    }
    Ok(DiscriminationInstance::new(rho_tilde, labels))
}

/// Solution of the discrimination problem with its certificate.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub povm: Povm,
    pub primal_value: f64,
    pub dual_value: f64,
    pub dual_certificate: ComplexMatrix,
    /// dual_value − primal_value; nonnegative up to rounding by weak duality.
    pub gap: f64,
    pub iterations: usize,
}

/// Numerical residuals of a solution, recomputed from scratch.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    /// max entry of |Σ M_i − I|.
    pub completeness_residual: f64,
    /// max over elements of max |M − M†| entry.
    pub hermiticity_residual: f64,
    /// min over elements of the smallest eigenvalue.
    pub min_element_eigenvalue: f64,
    /// smallest eigenvalue of Y − ρ̃_i, per outcome.
    pub dual_min_eigenvalues: Vec<f64>,
}

const RANK_TOL: f64 = 1e-12;

/// Maximize Σ Tr(ρ̃_i M_i) over POVMs; returns a feasible POVM together
/// with a dual certificate proving the objective is within `tol` of optimal.
///
/// Errors with the best iterate found if the certificate does not reach
/// `tol` within `max_iters` iterations.
pub fn solve_discrimination(
    instance: &DiscriminationInstance,
    tol: f64,
    max_iters: usize,
) -> Result<SolveResult> {
    assert!(tol > 0.0, "tolerance must be positive");
    let d = instance.dim();
    let n = instance.n_outcomes();

    // Outcomes with ρ̃_i = 0 get M_i = 0 and are excluded from iteration.
    let active: Vec<usize> = (0..n)
        .filter(|&i| instance.rho_tilde[i].max_abs() > RANK_TOL)
        .collect();
    if active.is_empty() {
        return Ok(SolveResult {
            povm: Povm::uniform(d, n),
            primal_value: 0.0,
            dual_value: 0.0,
            dual_certificate: ComplexMatrix::zeros(d),
            gap: 0.0,
            iterations: 0,
        });
    }

    // Compress to the support of ρ_D = Σ ρ̃_i; null directions contribute
    // nothing to the objective and stall the fixed-point map.
    let mut rho_d = ComplexMatrix::zeros(d);
    for i in &active {
        rho_d = &rho_d + &instance.rho_tilde[*i];
    }
    let eig = eig_hermitian_unchecked(&rho_d);
    let support: Vec<usize> = (0..d)
        .filter(|&k| eig.eigenvalues[k] > RANK_TOL)
        .collect();
    let r = support.len();
    // d×r isometry onto the support.
    let mut w = vec![vec![Complex64::new(0.0, 0.0); r]; d];
    for (col, &k) in support.iter().enumerate() {
        let v = eig.eigenvector(k);
        for (row, wr) in w.iter_mut().enumerate() {
            wr[col] = v[row];
        }
    }
    let compress = |m: &ComplexMatrix| -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(r);
        for a in 0..r {
            for b in 0..r {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..d {
                    for j in 0..d {
                        acc += w[i][a].conj() * m.get(i, j) * w[j][b];
                    }
                }
                out.set(a, b, acc);
            }
        }
        out
    };
    let lift = |m: &ComplexMatrix| -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..r {
                    for b in 0..r {
                        acc += w[i][a] * m.get(a, b) * w[j][b].conj();
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    };

    let sigmas: Vec<ComplexMatrix> = active
        .iter()
        .map(|&i| compress(&instance.rho_tilde[i]).hermitian_part())
        .collect();
    let na = sigmas.len();

    let mut m_ops = vec![ComplexMatrix::identity(r).scale_re(1.0 / na as f64); na];
    let mut best: Option<(f64, Vec<ComplexMatrix>, ComplexMatrix, usize)> = None;

    for iter in 0..=max_iters {
        // Primal objective and repaired dual certificate at this iterate.
        let primal: f64 = sigmas
            .iter()
            .zip(&m_ops)
            .map(|(s, m)| s.trace_product(m).re)
            .sum();
        let mut gamma = ComplexMatrix::zeros(r);
        for (s, m) in sigmas.iter().zip(&m_ops) {
            gamma = &gamma + &s.matmul(m);
        }
        let y0 = gamma.hermitian_part();
        let mut shift: f64 = 0.0;
        for s in &sigmas {
            let min_ev = eig_hermitian_unchecked(&(&y0 - s)).min_eigenvalue();
            shift = shift.max(-min_ev);
        }
        let y = &y0 + &ComplexMatrix::identity(r).scale_re(shift);
        let gap = y.trace().re - primal;

        let improved = best.as_ref().is_none_or(|(g, ..)| gap < *g);
        if improved {
            best = Some((gap, m_ops.clone(), y, iter));
        }
        if gap <= tol || iter == max_iters {
            break;
        }

        // Fixed-point update M_i ← L^{−1/2} ρ̃_i M_i ρ̃_i L^{−1/2}.
        let terms: Vec<ComplexMatrix> = sigmas
            .iter()
            .zip(&m_ops)
            .map(|(s, m)| s.matmul(m).matmul(s))
            .collect();
        let mut l = ComplexMatrix::zeros(r);
        for t in &terms {
            l = &l + t;
        }
        let l_inv_sqrt = inv_sqrt_psd(&l.hermitian_part());
        for (mi, t) in m_ops.iter_mut().zip(&terms) {
            *mi = l_inv_sqrt.matmul(t).matmul(&l_inv_sqrt).hermitian_part();
        }
    }

    let (best_gap, m_small, y_small, iterations) = best.expect("at least one iterate evaluated");

    // Lift back to the full space; the null-space remainder is split evenly
    // among the active elements so the POVM stays complete.
    let mut full = vec![ComplexMatrix::zeros(d); n];
    let mut lifted_sum = ComplexMatrix::zeros(d);
    for (pos, &i) in active.iter().enumerate() {
        full[i] = lift(&m_small[pos]);
        lifted_sum = &lifted_sum + &full[i];
    }
    let null_part = &ComplexMatrix::identity(d) - &lifted_sum;
    for &i in &active {
        full[i] = (&full[i] + &null_part.scale_re(1.0 / na as f64)).hermitian_part();
    }
    let povm = Povm::new(full).expect("solver iterate is feasible");
    let y_full = lift(&y_small);
    let primal_value = instance.objective(&povm);
    let dual_value = y_full.trace().re;

    let result = SolveResult {
        povm,
        primal_value,
        dual_value,
        dual_certificate: y_full,
        gap: dual_value - primal_value,
        iterations,
    };
    if best_gap > tol {
        return Err(Error::NotConverged {
            tol,
            iterations: max_iters,
            gap: best_gap,
            best: Box::new(result),
        });
    }
    Ok(result)
}

/// Pseudo-inverse square root of a PSD matrix via its spectrum.
fn inv_sqrt_psd(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let eig = eig_hermitian_unchecked(a);
    let floor = eig.max_eigenvalue().max(0.0) * 1e-14;
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..n {
        let lambda = eig.eigenvalues[k];
        if lambda <= floor {
            continue;
        }
        let wk = 1.0 / lambda.sqrt();
        let v = eig.eigenvector(k);
        for i in 0..n {
            for j in 0..n {
                let cur = out.get(i, j);
                out.set(i, j, cur + wk * v[i] * v[j].conj());
            }
        }
    }
    out
}

/// Recompute all residuals of a solution from its raw pieces.
pub fn verify_result(instance: &DiscriminationInstance, result: &SolveResult) -> VerificationReport {
    let d = instance.dim();
    let povm = &result.povm;

    let mut sum = ComplexMatrix::zeros(d);
    let mut herm: f64 = 0.0;
    let mut min_ev = f64::INFINITY;
    for e in povm.elements() {
        sum = &sum + e;
        herm = herm.max(e.hermiticity_residual());
        min_ev = min_ev.min(eig_hermitian_unchecked(e).min_eigenvalue());
    }
    let completeness_residual = sum.max_abs_diff(&ComplexMatrix::identity(d));

    let primal_value = instance.objective(povm);
    let dual_value = result.dual_certificate.trace().re;
    let dual_min_eigenvalues = instance
        .rho_tilde
        .iter()
        .map(|r| eig_hermitian_unchecked(&(&result.dual_certificate - r)).min_eigenvalue())
        .collect();

    VerificationReport {
        primal_value,
        dual_value,
        gap: dual_value - primal_value,
        completeness_residual,
        hermiticity_residual: herm,
        min_element_eigenvalue: min_ev,
        dual_min_eigenvalues,
    }
}
