//! Receiver-side corrective rotations.
//!
//! After the sender's Bell measurement (outcome s₀s₁) and the controller's
//! σx measurement (outcome γ), the receiver holds P·ρ·P† for a Pauli P
//! determined by the branch. Undoing it is conjugation by P⁻¹ = P up to
//! phase, which on the Bloch sphere is the π-rotation pattern
//!
//!   (0,0,+1) → I     (0,1,+1) → Rz(π)   (1,0,+1) → Rx(π)   (1,1,+1) → Ry(π)
//!   (0,0,−1) → Rz(π) (0,1,−1) → I       (1,0,−1) → Ry(π)   (1,1,−1) → Rx(π)

use crate::linalg::ComplexMatrix;
use crate::states::{bell_pauli, pauli_x, pauli_y, pauli_z};

/// Charlie's measurement outcome (or the receiver's guess of it).
pub type ControlOutcome = i8; // +1 or −1

/// Fixed table of 2×2 unitaries indexed by (s₀, s₁, γ). The stored entry is
/// the corruption operator R with ρ_received = R·ρ·R†; the receiver applies
/// R⁻¹ (conjugation by R†).
#[derive(Debug, Clone)]
pub struct CorrectionTable {
    table: Vec<ComplexMatrix>,
}

impl CorrectionTable {
    /// The ideal table for the GHZ protocol with the controller measuring σx.
    pub fn ideal() -> Self {
        let i2 = ComplexMatrix::identity(2);
        // γ = +1 row: I, σz, σx, σy;  γ = −1 row: σz, I, σy, σx.
        let table = vec![
            i2.clone(),
            pauli_z(),
            pauli_x(),
            pauli_y(),
            pauli_z(),
            i2,
            pauli_y(),
            pauli_x(),
        ];
        Self { table }
    }

    /// Entry for Bell outcome (s₀, s₁) and controller outcome γ ∈ {+1, −1}.
    pub fn entry(&self, s0: u8, s1: u8, gamma: ControlOutcome) -> &ComplexMatrix {
        assert!(s0 < 2 && s1 < 2);
        let g = match gamma {
            1 => 0,
            -1 => 1,
            _ => panic!("gamma must be ±1"),
        };
        &self.table[g * 4 + (s0 as usize) * 2 + (s1 as usize)]
    }

    /// Apply the inverse rotation: R† ρ R.
    pub fn apply(&self, s0: u8, s1: u8, gamma: ControlOutcome, rho: &ComplexMatrix) -> ComplexMatrix {
        let r = self.entry(s0, s1, gamma);
        rho.conjugate_by(&r.dagger())
    }

    pub fn all_entries(&self) -> &[ComplexMatrix] {
        &self.table
    }
}

/// Corrections used when the eavesdropper announces which entangled branch
/// the sender–receiver pair is (supposedly) in. A branch is the maximally
/// entangled state (P ⊗ I)|φ⁰⁰⟩ for a unitary P; if the pair really were in
/// that state and the Bell outcome were s, the receiver's corruption would
/// be Pᵀ·Pₛ†, so he undoes exactly that.
#[derive(Debug, Clone)]
pub struct BranchCorrections {
    rows: Vec<[ComplexMatrix; 4]>, // [branch][bell outcome]
}

impl Default for BranchCorrections {
    fn default() -> Self {
        Self::new()
    }
}

impl BranchCorrections {
    /// Branches labeled by the four Bell states themselves. Branch 00
    /// reproduces the γ=+1 row of the ideal table and branch 01 the γ=−1 row.
    pub fn new() -> Self {
        let paulis: Vec<ComplexMatrix> = (0..4u8)
            .map(|b| bell_pauli(b >> 1, b & 1))
            .collect();
        Self::from_branch_unitaries(&paulis)
    }

    /// Branches (P_i ⊗ I)|φ⁰⁰⟩ for caller-chosen unitaries P_i.
    pub fn from_branch_unitaries(branch_ops: &[ComplexMatrix]) -> Self {
        let rows = branch_ops
            .iter()
            .map(|p| {
                std::array::from_fn(|s| {
                    let pt = p.transpose();
                    let ps = bell_pauli((s >> 1) as u8, (s & 1) as u8).dagger();
                    pt.matmul(&ps)
                })
            })
            .collect();
        Self { rows }
    }

    pub fn n_branches(&self) -> usize {
        self.rows.len()
    }

    /// Corruption operator for announced branch `delta` and Bell outcome (s₀, s₁).
    pub fn entry(&self, delta: usize, s0: u8, s1: u8) -> &ComplexMatrix {
        &self.rows[delta][(s0 as usize) * 2 + (s1 as usize)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;
    use crate::states::{bell_basis, bloch_state, make_ghz, spin_projector, BlochVector};
    use crate::density::{partial_trace_matrix, DensityMatrix};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_entries_unitary() {
        for e in CorrectionTable::ideal().all_entries() {
            assert!(e.is_unitary(1e-10));
        }
    }

    #[test]
    fn gamma_minus_row_shifts_by_z() {
        let t = CorrectionTable::ideal();
        assert_eq!(t.entry(0, 0, -1), t.entry(0, 1, 1));
        assert_eq!(t.entry(0, 1, -1), t.entry(0, 0, 1));
    }

    #[test]
    fn ideal_protocol_recovers_input_exactly() {
        // Run the full protocol on the GHZ resource for random inputs and
        // check every branch returns the input state after correction.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let table = CorrectionTable::ideal();
        let ghz = DensityMatrix::from_pure(&make_ghz()).unwrap();
        let bells = bell_basis();
        let xhat = BlochVector::new(1.0, 0.0, 0.0).unwrap();

        for _ in 0..20 {
            let a = BlochVector::random(&mut rng);
            let input = bloch_state(&a);
            let joint = kron(input.matrix(), ghz.matrix()); // a ⊗ A ⊗ B ⊗ C
            let mut total_p = 0.0;
            for (s, bell) in bells.iter().enumerate() {
                for gamma in [1i8, -1] {
                    let op = kron(
                        &kron(&bell.projector(), &ComplexMatrix::identity(2)),
                        &spin_projector(&xhat, gamma),
                    );
                    let unnorm = partial_trace_matrix(&joint.matmul(&op), 4, &[2]).unwrap();
                    let p = unnorm.trace().re;
                    total_p += p;
                    let bob = unnorm.scale_re(1.0 / p);
                    let fixed = table.apply((s >> 1) as u8, (s & 1) as u8, gamma, &bob);
                    assert!(fixed.max_abs_diff(input.matrix()) < 1e-10);
                }
            }
            assert!((total_p - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn branch_rows_match_ideal_table() {
        let adv = BranchCorrections::new();
        let ideal = CorrectionTable::ideal();
        for s0 in 0..2u8 {
            for s1 in 0..2u8 {
                // Branch 00 ↔ γ=+1, branch 01 ↔ γ=−1, equality up to phase.
                for (branch, gamma) in [(0usize, 1i8), (1, -1)] {
                    let a = adv.entry(branch, s0, s1);
                    let b = ideal.entry(s0, s1, gamma);
                    let overlap = a.dagger().trace_product(b).norm() / 2.0;
                    assert!((overlap - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
