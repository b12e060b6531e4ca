//! Depolarizing noise on the three-qubit resource and purification.

use num_complex::Complex64;

use crate::density::{trace_out_right, DensityMatrix};
use crate::eigen::eig_hermitian_unchecked;
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, PureState};
use crate::states::pauli;

/// A completely positive trace-preserving map given by Kraus operators
/// {E_j} with Σ E_j†E_j = I.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates the completeness relation Σ E†E = I within 1e-9.
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        assert!(!operators.is_empty());
        let dim = operators[0].dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for e in &operators {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch(
                    "Kraus operators must share one dimension".into(),
                ));
            }
            sum = &sum + &e.dagger().matmul(e);
        }
        let residual = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if residual > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "Kraus completeness residual {residual:.3e}"
            )));
        }
        Ok(Self { operators })
    }

    /// Single-qubit depolarizing channel that replaces the qubit by I/2 with
    /// probability `p`: E₀ = √(1−3p/4)·I, Eᵢ = √(p/4)·σᵢ.
    pub fn depolarizing_qubit(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        let mut ops = vec![ComplexMatrix::identity(2).scale_re((1.0 - 3.0 * p / 4.0).sqrt())];
        for i in 1..4 {
            ops.push(pauli(i).scale_re((p / 4.0).sqrt()));
        }
        Self::new(ops)
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    /// Σ_j E_j ρ E_j†.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.dim());
        for e in &self.operators {
            out = &out + &e.matmul(rho).matmul(&e.dagger());
        }
        out
    }

    /// Product channel E ⊗ E ⊗ … over `n_factors` subsystems.
    pub fn apply_factorwise(&self, rho: &ComplexMatrix, n_factors: usize) -> ComplexMatrix {
        let k = self.operators.len();
        let mut out = ComplexMatrix::zeros(rho.dim());
        for combo in 0..k.pow(n_factors as u32) {
            let mut idx = combo;
            let mut op = self.operators[idx % k].clone();
            idx /= k;
            for _ in 1..n_factors {
                op = kron(&self.operators[idx % k], &op);
                idx /= k;
            }
            out = &out + &op.matmul(rho).matmul(&op.dagger());
        }
        out
    }
}

/// Mix the state with white noise: p·I/8 + (1−p)·|ψ⟩⟨ψ|.
pub fn depolarize_total(psi: &PureState, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let pure = DensityMatrix::from_pure(psi)?;
    let mixed = DensityMatrix::maximally_mixed(pure.n_qubits());
    pure.mix(&mixed, p)
}

/// Send each qubit of a 3-qubit pure state through the single-qubit
/// depolarizing channel: with probability `p` the qubit is replaced by I/2.
///
/// Implemented as the replacement mixture ρ ← (1−p)ρ + p·(I/2 ⊗ Tr_q ρ) per
/// qubit, which is defined for every p ∈ [0, 1] and equals the Kraus form
/// Σ (E_i⊗E_j⊗E_k) ρ (E_i⊗E_j⊗E_k)† where both exist.
pub fn depolarize_qubit(psi: &PureState, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let rho = DensityMatrix::from_pure(psi)?;
    if rho.n_qubits() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "qubit depolarizing channel expects 3 qubits, got {}",
            rho.n_qubits()
        )));
    }
    let mut m = rho.matrix().clone();
    for q in 0..3 {
        m = replace_with_mixed(&m, 3, q, p);
    }
    Ok(DensityMatrix::new_unchecked(m))
}

/// (1−p)·ρ + p·(I_q/2 ⊗ Tr_q ρ) with the identity re-inserted at slot `q`.
fn replace_with_mixed(m: &ComplexMatrix, n_qubits: usize, q: usize, p: f64) -> ComplexMatrix {
    let keep: Vec<usize> = (0..n_qubits).filter(|&i| i != q).collect();
    let reduced = crate::density::partial_trace_matrix(m, n_qubits, &keep)
        .expect("keep set is nonempty for n_qubits > 1");
    // Rebuild with I/2 in slot q: factors are ordered, so split the reduced
    // matrix around the missing slot via kron with identity and a reorder.
    let replaced = insert_mixed_at(&reduced, n_qubits, q);
    &m.scale_re(1.0 - p) + &replaced.scale_re(p)
}

/// Tensor I/2 into slot `q` of a (n_qubits−1)-qubit matrix.
fn insert_mixed_at(reduced: &ComplexMatrix, n_qubits: usize, q: usize) -> ComplexMatrix {
    let half = ComplexMatrix::identity(2).scale_re(0.5);
    let dim = 1usize << n_qubits;
    let mut out = ComplexMatrix::zeros(dim);
    let bit = |idx: usize, pos: usize| (idx >> (n_qubits - 1 - pos)) & 1;
    // Index of the reduced register: original order with slot q removed.
    let reduced_index = |full: usize| -> usize {
        let mut r = 0usize;
        for pos in 0..n_qubits {
            if pos == q {
                continue;
            }
            r = (r << 1) | bit(full, pos);
        }
        r
    };
    for i in 0..dim {
        for j in 0..dim {
            let hij = half.get(bit(i, q), bit(j, q));
            if hij == Complex64::new(0.0, 0.0) {
                continue;
            }
            out.set(i, j, hij * reduced.get(reduced_index(i), reduced_index(j)));
        }
    }
    out
}

/// Purify a mixed state: returns |ψ⟩ on system ⊗ ancilla (ancilla dimension
/// equal to the system's) with Tr_ancilla|ψ⟩⟨ψ| = ρ.
///
/// Built from the spectral decomposition as Σ_k √λ_k |Λ_k⟩|Λ_k⟩ with
/// eigenvalues below 1e-12 dropped; the global phase is fixed by making the
/// largest-magnitude amplitude real positive.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let d = rho.dim();
    let eig = eig_hermitian_unchecked(rho.matrix());
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        let lambda = eig.eigenvalues[k];
        if lambda < 1e-12 {
            continue;
        }
        let w = lambda.sqrt();
        let v = eig.eigenvector(k);
        for i in 0..d {
            for j in 0..d {
                amps[i * d + j] += w * v[i] * v[j];
            }
        }
    }
    // Fix global phase for reproducibility.
    let (mut best, mut best_norm) = (Complex64::new(1.0, 0.0), 0.0);
    for a in &amps {
        if a.norm() > best_norm {
            best_norm = a.norm();
            best = *a;
        }
    }
    let phase = best / best.norm();
    for a in &mut amps {
        *a /= phase;
    }
    PureState::normalized(amps).expect("purification has unit mass up to dropped eigenvalues")
}

/// Tr_ancilla |ψ⟩⟨ψ| for a purification on system ⊗ ancilla of equal dims.
pub fn trace_out_purifier(psi: &PureState) -> ComplexMatrix {
    let d2 = psi.dim();
    let d = (d2 as f64).sqrt().round() as usize;
    assert_eq!(d * d, d2, "purification lives on system ⊗ ancilla");
    trace_out_right(&psi.projector(), d, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_ghz, BlochVector};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_mixed(n_qubits: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
        let dim = 1usize << n_qubits;
        let mut m = ComplexMatrix::zeros(dim);
        for _ in 0..4 {
            let amps: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let psi = PureState::normalized(amps).unwrap();
            m = &m + &psi.projector().scale_re(0.25);
        }
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn total_channel_endpoints() {
        let ghz = make_ghz();
        let p0 = depolarize_total(&ghz, 0.0).unwrap();
        assert!(p0.matrix().max_abs_diff(&ghz.projector()) < 1e-15);
        let p1 = depolarize_total(&ghz, 1.0).unwrap();
        assert!(
            p1.matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(3).matrix())
                < 1e-15
        );
        assert!(depolarize_total(&ghz, 1.5).is_err());
        assert!(depolarize_total(&ghz, -0.1).is_err());
    }

    #[test]
    fn total_channel_spectrum_at_p04() {
        // Rank-1 state plus white noise: one eigenvalue p/8 + (1−p) = 0.65,
        // seven eigenvalues p/8 = 0.05.
        let out = depolarize_total(&make_ghz(), 0.4).unwrap();
        let evs = out.eigenvalues();
        for ev in &evs[..7] {
            assert!((ev - 0.05).abs() < 1e-12);
        }
        assert!((evs[7] - 0.65).abs() < 1e-12);
    }

    #[test]
    fn qubit_channel_endpoints() {
        let ghz = make_ghz();
        let p0 = depolarize_qubit(&ghz, 0.0).unwrap();
        assert!(p0.matrix().max_abs_diff(&ghz.projector()) < 1e-15);
        let p1 = depolarize_qubit(&ghz, 1.0).unwrap();
        assert!(
            p1.matrix()
                .max_abs_diff(DensityMatrix::maximally_mixed(3).matrix())
                < 1e-12
        );
    }

    #[test]
    fn qubit_channel_matches_kraus_form() {
        let ghz = make_ghz();
        for p in [0.1, 0.3, 0.6] {
            let mixture = depolarize_qubit(&ghz, p).unwrap();
            let kraus = KrausChannel::depolarizing_qubit(p).unwrap();
            let via_kraus = kraus.apply_factorwise(&ghz.projector(), 3);
            assert!(mixture.matrix().max_abs_diff(&via_kraus) < 1e-10);
        }
    }

    #[test]
    fn qubit_channel_marginals_stay_mixed() {
        let ghz = make_ghz();
        for p in [0.0, 0.25, 0.7, 1.0] {
            let out = depolarize_qubit(&ghz, p).unwrap();
            for q in 0..3 {
                let marginal = out.partial_trace(&[q]).unwrap();
                assert!(
                    marginal
                        .matrix()
                        .max_abs_diff(DensityMatrix::maximally_mixed(1).matrix())
                        < 1e-12
                );
            }
        }
    }

    #[test]
    fn channels_preserve_trace_and_positivity() {
        let ghz = make_ghz();
        for k in 0..=20 {
            let p = f64::from(k) * 0.05;
            for out in [
                depolarize_total(&ghz, p).unwrap(),
                depolarize_qubit(&ghz, p).unwrap(),
            ] {
                assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
                assert!(out.eigenvalues()[0] >= -1e-9);
            }
        }
    }

    #[test]
    fn purify_pure_input_is_product() {
        let bell = crate::states::make_bell(0, 0);
        let rho = DensityMatrix::from_pure(&bell).unwrap();
        let psi = purify(&rho);
        assert_eq!(psi.dim(), 16);
        let back = trace_out_purifier(&psi);
        assert!(back.max_abs_diff(rho.matrix()) < 1e-10);
        // Rank-1 input ⇒ the ancilla factor is pure: the reduced ancilla
        // state has a single unit eigenvalue.
        let anc = crate::density::trace_out_left(&psi.projector(), 4, 4);
        let evs = eig_hermitian_unchecked(&anc).eigenvalues;
        assert!((evs.last().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn purify_maximally_mixed_qubit() {
        let rho = DensityMatrix::maximally_mixed(1);
        let psi = purify(&rho);
        // Maximally entangled 2-qubit state: both marginals are I/2.
        let sys = trace_out_purifier(&psi);
        assert!(sys.max_abs_diff(rho.matrix()) < 1e-12);
        let anc = crate::density::trace_out_left(&psi.projector(), 2, 2);
        assert!(anc.max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn purify_round_trip_on_depolarized_ghz() {
        let rho = depolarize_total(&make_ghz(), 0.3).unwrap();
        let psi = purify(&rho);
        let back = trace_out_purifier(&psi);
        assert!(back.max_abs_diff(rho.matrix()) <= 1e-9);
    }

    #[test]
    fn purify_round_trip_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..50 {
            let rho = random_mixed(2, &mut rng);
            let psi = purify(&rho);
            let back = trace_out_purifier(&psi);
            assert!(back.max_abs_diff(rho.matrix()) <= 1e-9);
        }
    }

    #[test]
    fn purify_phase_is_deterministic() {
        let rho = depolarize_qubit(&make_ghz(), 0.37).unwrap();
        let a = purify(&rho);
        let b = purify(&rho);
        assert_eq!(a.amplitudes(), b.amplitudes());
    }

    #[test]
    fn kraus_depolarizing_is_complete() {
        for p in [0.0, 0.4, 1.0] {
            assert!(KrausChannel::depolarizing_qubit(p).is_ok());
        }
        let bad = KrausChannel::new(vec![ComplexMatrix::identity(2).scale_re(0.9)]);
        assert!(bad.is_err());
    }

    #[test]
    fn single_qubit_replacement_identity() {
        // On one qubit the two standard depolarizing parameterizations agree:
        // replace-with-I/2 at probability p equals the Kraus set built here.
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let a = BlochVector::random(&mut rng);
        let rho = crate::states::bloch_state(&a);
        let p = 0.35;
        let kraus = KrausChannel::depolarizing_qubit(p).unwrap();
        let out = kraus.apply(rho.matrix());
        let expected = &rho.matrix().scale_re(1.0 - p)
            + &ComplexMatrix::identity(2).scale_re(p / 2.0);
        assert!(out.max_abs_diff(&expected) < 1e-12);
    }
}
