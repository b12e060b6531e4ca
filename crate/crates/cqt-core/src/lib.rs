//! Numerical laboratory for controlled quantum teleportation with an
//! untrusted receiver.
//!
//! The crate simulates the three-party teleportation protocol (sender,
//! receiver, controller) on noisy GHZ resources, evaluates the tripartite
//! nonlocality functionals (CHSH, Mermin, Svetlichny) that certify the
//! controller's authority, solves the eavesdropper's optimal-measurement
//! problem as a semidefinite program with a dual certificate, and sweeps
//! effective control power against Svetlichny violation for depolarized
//! GHZ states.

pub mod channels;
pub mod corrections;
pub mod density;
pub mod eigen;
pub mod error;
pub mod linalg;
pub mod nonlocality;
pub mod povm;
pub mod states;
pub mod sweep;
pub mod teleport;

pub use channels::{depolarize_qubit, depolarize_total, purify, KrausChannel};
pub use corrections::{BranchCorrections, CorrectionTable};
pub use density::{fidelity_pure, partial_trace_matrix, DensityMatrix};
pub use eigen::{eig_hermitian, EigenDecomposition};
pub use error::{Error, Result};
pub use linalg::{kron, ComplexMatrix, PureState};
pub use nonlocality::{
    chsh_value, classical_broadcast_bound, closed_form_max_s, correlations_from_state,
    mermin_value, optimize_settings, svetlichny_value, CorrelationTable, Objective, SettingsTriple,
};
pub use povm::{build_instance, solve_discrimination, verify_result, DiscriminationInstance, Povm};
pub use states::{bloch_state, make_bell, make_ghz, BlochVector};
pub use sweep::{emit_csv, run_sweep, SweepConfig, SweepResult, SweepRow};
pub use teleport::{
    bloch_average, ecp_report, fidelity_no_control_adversarial, fidelity_no_control_guess,
    fidelity_with_control, FidelityReport, NoiseChannel, TeleportOutcome,
};
