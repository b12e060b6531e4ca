//! Property tests for the algebraic invariants of the linear-algebra and
//! channel layers.

use num_complex::Complex64;
use proptest::prelude::*;

use cqt_core::channels::{depolarize_qubit, depolarize_total};
use cqt_core::density::DensityMatrix;
use cqt_core::eigen::eig_hermitian;
use cqt_core::linalg::{kron, ComplexMatrix, PureState};
use cqt_core::states::make_ghz;

fn complex_entry() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(complex_entry(), dim * dim)
        .prop_map(move |data| ComplexMatrix::new(dim, data))
}

fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(dim).prop_map(|m| m.hermitian_part())
}

fn density(n_qubits: usize) -> impl Strategy<Value = DensityMatrix> {
    let dim = 1usize << n_qubits;
    proptest::collection::vec(
        proptest::collection::vec(complex_entry(), dim),
        2,
    )
    .prop_filter_map("nonzero amplitudes", move |vectors| {
        let mut m = ComplexMatrix::zeros(dim);
        for amps in vectors {
            let psi = PureState::normalized(amps).ok()?;
            m = &m + &psi.projector().scale_re(0.5);
        }
        DensityMatrix::new(m).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in matrix(2), b in matrix(2), c in matrix(3)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn kron_multiplies_traces(a in hermitian(2), b in hermitian(2)) {
        let lhs = kron(&a, &b).trace();
        let rhs = a.trace() * b.trace();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn kron_preserves_hermiticity(a in hermitian(3), b in hermitian(2)) {
        prop_assert!(kron(&a, &b).hermiticity_residual() <= 1e-9);
    }

    #[test]
    fn eig_reconstructs_and_sums_to_trace(a in hermitian(6)) {
        let eig = eig_hermitian(&a).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&a) <= 1e-9);
        let sum: f64 = eig.eigenvalues.iter().sum();
        prop_assert!((sum - a.trace().re).abs() <= 1e-9);
        for pair in eig.eigenvalues.windows(2) {
            prop_assert!(pair[0] <= pair[1]);
        }
    }

    #[test]
    fn partial_trace_composes(rho in density(3)) {
        let once = rho.partial_trace(&[0]).unwrap();
        let stepwise = rho
            .partial_trace(&[0, 1])
            .unwrap()
            .partial_trace(&[0])
            .unwrap();
        prop_assert!(once.matrix().max_abs_diff(stepwise.matrix()) <= 1e-10);
        prop_assert!(once.matrix().hermiticity_residual() <= 1e-9);
        prop_assert!((once.matrix().trace().re - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn channels_preserve_density_invariants(p in 0.0f64..=1.0) {
        let ghz = make_ghz();
        for rho in [
            depolarize_total(&ghz, p).unwrap(),
            depolarize_qubit(&ghz, p).unwrap(),
        ] {
            prop_assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-10);
            prop_assert!(rho.matrix().hermiticity_residual() <= 1e-9);
            prop_assert!(rho.eigenvalues()[0] >= -1e-9);
        }
    }

    #[test]
    fn purification_round_trips(rho in density(2)) {
        let psi = cqt_core::purify(&rho);
        let back = cqt_core::channels::trace_out_purifier(&psi);
        prop_assert!(back.max_abs_diff(rho.matrix()) <= 1e-9);
    }
}
