//! Acceptance gates for the whole laboratory: protocol identities,
//! certification bounds, solver optima, the noise-sweep properties and
//! byte-level reproducibility. Each test prints one PASS line (or panics
//! with a FAIL diagnostic) for its gate.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use cqt_core::corrections::CorrectionTable;
use cqt_core::density::DensityMatrix;
use cqt_core::linalg::{ComplexMatrix, PureState};
use cqt_core::nonlocality::{classical_broadcast_bound, closed_form_max_s, optimize_settings, Objective};
use cqt_core::povm::{solve_discrimination, DiscriminationInstance};
use cqt_core::states::{make_ghz, BlochVector};
use cqt_core::sweep::{run_sweep, SweepConfig, SweepResult};
use cqt_core::teleport::{
    ecp_report, fidelity_no_control_guess, fidelity_with_control, NoiseChannel, TeleportKernel,
};
use num_complex::Complex64;

const S_MAX: f64 = 4.0 * std::f64::consts::SQRT_2;

fn ghz_density() -> DensityMatrix {
    DensityMatrix::from_pure(&make_ghz()).expect("GHZ is a valid state")
}

#[test]
fn criterion_1_ideal_protocol_identities() {
    let start = Instant::now();
    let table = CorrectionTable::ideal();
    let ghz = ghz_density();
    let f_c = fidelity_with_control(&ghz, &table).unwrap();
    let f_nc = fidelity_no_control_guess(&ghz, &table).unwrap();
    let cp = f_c - f_nc;
    assert!(
        (f_c - 1.0).abs() <= 1e-9,
        "criterion 1: FAIL — with-control fidelity {f_c} != 1"
    );
    assert!(
        (f_nc - 2.0 / 3.0).abs() <= 1e-9,
        "criterion 1: FAIL — guess fidelity {f_nc} != 2/3"
    );
    assert!(
        (cp - 1.0 / 3.0).abs() <= 1e-9,
        "criterion 1: FAIL — control power {cp} != 1/3"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "criterion 1: FAIL — took {elapsed:?}");
    println!(
        "criterion 1: PASS — F_C = {f_c:.12}, F_NC = {f_nc:.12}, CP = {cp:.12} in {elapsed:?}"
    );
}

#[test]
fn criterion_2_svetlichny_maxima_and_broadcast_bounds() {
    let start = Instant::now();
    let (_, ghz_s) = optimize_settings(&ghz_density(), Objective::Svetlichny, 20, 42).unwrap();
    assert!(
        ghz_s >= S_MAX - 1e-3,
        "criterion 2: FAIL — GHZ Svetlichny search reached only {ghz_s}"
    );
    let broadcast_s = classical_broadcast_bound(Objective::Svetlichny).unwrap();
    assert_eq!(
        broadcast_s, 4.0,
        "criterion 2: FAIL — broadcast Svetlichny bound {broadcast_s} != 4"
    );
    let broadcast_m = classical_broadcast_bound(Objective::Mermin).unwrap();
    assert_eq!(
        broadcast_m, 4.0,
        "criterion 2: FAIL — broadcast Mermin bound {broadcast_m} != 4"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "criterion 2: FAIL — took {elapsed:?}");
    println!(
        "criterion 2: PASS — GHZ S = {ghz_s:.6} ≥ 4√2 − 1e-3; broadcast bounds S = {broadcast_s}, M = {broadcast_m} in {elapsed:?}"
    );
}

#[test]
fn criterion_3_closed_form_curve_values() {
    // Independent arithmetic for the two mixture curves.
    let s_ghz = 4.0 * 2f64.sqrt();
    for &p in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        let total = closed_form_max_s(NoiseChannel::Total, p).unwrap();
        let expect_total = (1.0 - p) * s_ghz + 4.0 * p;
        assert!(
            (total - expect_total).abs() <= 1e-12 * expect_total.abs().max(1.0),
            "criterion 3: FAIL — total channel at p={p}: {total} vs {expect_total}"
        );
        let qubit = closed_form_max_s(NoiseChannel::Qubit, p).unwrap();
        let survive = (1.0 - p) * (1.0 - p) * (1.0 - p);
        let expect_qubit = survive * s_ghz + 4.0 * (1.0 - survive);
        assert!(
            (qubit - expect_qubit).abs() <= 1e-12 * expect_qubit.abs().max(1.0),
            "criterion 3: FAIL — qubit channel at p={p}: {qubit} vs {expect_qubit}"
        );
    }
    let mid = closed_form_max_s(NoiseChannel::Total, 0.5).unwrap();
    assert!((mid - (2.0 + 2.0 * 2f64.sqrt())).abs() <= 1e-12);
    println!("criterion 3: PASS — closed-form curve matches at p ∈ {{0, ¼, ½, ¾, 1}} to 12 digits");
}

#[test]
fn criterion_4_sdp_known_optima() {
    let start = Instant::now();
    let s = 1.0 / 2f64.sqrt();
    let zero = PureState::basis(2, 0).projector();
    let one = PureState::basis(2, 1).projector();
    let plus = PureState::new(vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)])
        .unwrap()
        .projector();

    // Two-state optimum from the spectrum of the difference.
    let r1 = zero.scale_re(0.5);
    let r2 = plus.scale_re(0.5);
    let diff = &r1 - &r2;
    let trace_norm: f64 = cqt_core::eig_hermitian(&diff)
        .unwrap()
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum();
    let helstrom_expected = 0.5 * (1.0 + trace_norm);

    let helstrom = DiscriminationInstance::new(vec![r1, r2], vec!["a".into(), "b".into()]);
    let result = solve_discrimination(&helstrom, 1e-7, 5000).unwrap();
    assert!(
        (result.primal_value - helstrom_expected).abs() <= 1e-7,
        "criterion 4: FAIL — two-state value {} vs {}",
        result.primal_value,
        helstrom_expected
    );
    assert!(
        result.gap <= 1e-7 && result.gap >= -1e-9,
        "criterion 4: FAIL — two-state certified gap {}",
        result.gap
    );

    let orthogonal = DiscriminationInstance::new(
        vec![zero.scale_re(0.5), one.scale_re(0.5)],
        vec!["0".into(), "1".into()],
    );
    let result2 = solve_discrimination(&orthogonal, 1e-7, 5000).unwrap();
    assert!(
        (result2.primal_value - 1.0).abs() <= 1e-7,
        "criterion 4: FAIL — orthogonal-support value {}",
        result2.primal_value
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "criterion 4: FAIL — took {elapsed:?}");
    println!(
        "criterion 4: PASS — two-state value {:.9} (gap {:.2e}), orthogonal value {:.9} in {elapsed:?}",
        result.primal_value, result.gap, result2.primal_value
    );
}

#[test]
fn criterion_5_noiseless_adversary_endpoint() {
    let start = Instant::now();
    let report = ecp_report(NoiseChannel::Total, 0.0).unwrap();
    assert!(
        (report.ecp - 1.0 / 3.0).abs() <= 1e-6,
        "criterion 5: FAIL — ECP {} != 1/3",
        report.ecp
    );
    assert!(
        (report.f_nc_e - 2.0 / 3.0).abs() <= 1e-6,
        "criterion 5: FAIL — assisted fidelity {} != 2/3",
        report.f_nc_e
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "criterion 5: FAIL — took {elapsed:?}");
    println!(
        "criterion 5: PASS — ECP(p=0) = {:.9}, F_NC^E = {:.9} in {elapsed:?}",
        report.ecp, report.f_nc_e
    );
}

/// The default-grid sweep, shared by the criterion-6 gates.
fn shared_sweep() -> &'static (SweepResult, Duration) {
    static SWEEP: OnceLock<(SweepResult, Duration)> = OnceLock::new();
    SWEEP.get_or_init(|| {
        let start = Instant::now();
        let result = run_sweep(&SweepConfig::default()).expect("default sweep completes");
        (result, start.elapsed())
    })
}

fn channel_rows(result: &SweepResult, channel: NoiseChannel) -> Vec<&cqt_core::sweep::SweepRow> {
    let mut rows: Vec<_> = result.rows.iter().filter(|r| r.channel == channel).collect();
    rows.sort_by(|a, b| a.s_closed_form.partial_cmp(&b.s_closed_form).unwrap());
    rows
}

#[test]
fn criterion_6a_ecp_monotone_in_svetlichny() {
    let (result, elapsed) = shared_sweep();
    assert!(
        *elapsed < Duration::from_secs(600),
        "criterion 6: FAIL — sweep took {elapsed:?}"
    );
    let mut report = String::new();
    let mut total_violations = 0usize;
    for channel in [NoiseChannel::Total, NoiseChannel::Qubit] {
        let rows = channel_rows(result, channel);
        let mut violations = 0usize;
        let mut worst = 0.0f64;
        let mut worst_at = 0.0f64;
        for pair in rows.windows(2) {
            let drop = pair[0].ecp - pair[1].ecp;
            if drop > 1e-9 {
                violations += 1;
                if drop > worst {
                    worst = drop;
                    worst_at = pair[1].s_closed_form;
                }
            }
        }
        report.push_str(&format!(
            "{}: {} decreasing pairs (worst {:.3e} near s = {:.4}); ",
            channel.name(),
            violations,
            worst,
            worst_at
        ));
        total_violations += violations;
    }
    assert!(
        total_violations == 0,
        "criterion 6a: FAIL — ECP is not monotone in s_closed_form: {report}\
         the optimal conditioned-branch measurement gains information at second \
         order in (1−p) while the with-permission fidelity of the per-qubit \
         channel loses it at the same order with a smaller coefficient, so the \
         qubit-channel ECP dips below its p→1 limit near s ≈ 4 and recovers"
    );
    println!("criterion 6a: PASS — {report}");
}

#[test]
fn criterion_6b_ecp_zero_crossing_bracket() {
    let (result, _) = shared_sweep();
    let mut summary = String::new();
    for channel in [NoiseChannel::Total, NoiseChannel::Qubit] {
        let rows = channel_rows(result, channel);
        let mut crossing: Option<(f64, f64)> = None;
        for pair in rows.windows(2) {
            if (pair[0].ecp <= 0.0) != (pair[1].ecp <= 0.0) {
                crossing = Some((pair[0].s_closed_form, pair[1].s_closed_form));
            }
        }
        let (lo, hi) = crossing.unwrap_or_else(|| {
            panic!(
                "criterion 6b: FAIL — no ECP sign change found for channel {}",
                channel.name()
            )
        });
        assert!(
            lo >= 4.7 && hi <= 5.0,
            "criterion 6b: FAIL — {} crossing bracket [{lo:.4}, {hi:.4}] outside [4.7, 5.0]",
            channel.name()
        );
        summary.push_str(&format!("{} ∈ [{lo:.4}, {hi:.4}]; ", channel.name()));
    }
    println!("criterion 6b: PASS — zero crossings {summary}");
}

#[test]
fn criterion_6c_max_ecp_at_zero_noise() {
    let (result, _) = shared_sweep();
    for channel in [NoiseChannel::Total, NoiseChannel::Qubit] {
        let rows = channel_rows(result, channel);
        let max_row = rows
            .iter()
            .max_by(|a, b| a.ecp.partial_cmp(&b.ecp).unwrap())
            .unwrap();
        assert!(
            (max_row.ecp - 1.0 / 3.0).abs() <= 1e-6,
            "criterion 6c: FAIL — {} max ECP {} != 1/3",
            channel.name(),
            max_row.ecp
        );
        assert!(
            max_row.p == 0.0,
            "criterion 6c: FAIL — {} max ECP at p = {}, not 0",
            channel.name(),
            max_row.p
        );
    }
    println!("criterion 6c: PASS — max ECP = 1/3 at p = 0 for both channels");
}

#[test]
fn criterion_7_quadrature_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let table = CorrectionTable::ideal();
    let samples = 100_000usize;
    let mut worst_sigma = 0.0f64;
    for state_idx in 0..20 {
        let resource = random_resource(&mut rng);
        let kernel = TeleportKernel::with_control(&resource, &table).unwrap();
        let quad = kernel.average_fidelity();
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..samples {
            let a = BlochVector::random(&mut rng);
            let f = kernel.fidelity(&a);
            sum += f;
            sumsq += f * f;
        }
        let mean = sum / samples as f64;
        let var = (sumsq / samples as f64 - mean * mean).max(0.0);
        let se = (var / samples as f64).sqrt().max(1e-12);
        let sigmas = (quad - mean).abs() / se;
        worst_sigma = worst_sigma.max(sigmas);
        assert!(
            sigmas <= 3.0,
            "criterion 7: FAIL — state {state_idx}: quadrature {quad} vs MC {mean} is {sigmas:.2} SE"
        );
    }
    println!(
        "criterion 7: PASS — 20 random resources, quadrature within 3 SE of MC (worst {worst_sigma:.2} SE)"
    );
}

fn random_resource(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(8);
    let terms = 3;
    let mut weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    for &w in &weights {
        let amps: Vec<Complex64> = (0..8)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let psi = PureState::normalized(amps).unwrap();
        m = &m + &psi.projector().scale_re(w);
    }
    DensityMatrix::new(m).unwrap()
}

#[test]
fn criterion_8_sweep_is_byte_deterministic() {
    let dir = std::env::temp_dir().join(format!("cqt_acceptance_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_a = dir.join("a.csv");
    let out_b = dir.join("b.csv");
    for out in [&out_a, &out_b] {
        let status = Command::new(env!("CARGO_BIN_EXE_cqt"))
            .args([
                "sweep",
                "--seed",
                "42",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .expect("binary runs");
        assert!(status.success(), "criterion 8: FAIL — sweep exited {status}");
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(
        a == b,
        "criterion 8: FAIL — two sweeps with seed 42 differ in {} of {} bytes",
        a.iter().zip(&b).filter(|(x, y)| x != y).count(),
        a.len()
    );
    std::fs::remove_dir_all(&dir).ok();
    println!(
        "criterion 8: PASS — two seed-42 sweeps produced identical {}-byte CSVs",
        a.len()
    );
}
