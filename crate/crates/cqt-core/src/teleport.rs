//! The controlled teleportation protocol and its average fidelities.
//!
//! One protocol run: the sender holds an unknown qubit ρ^a = (I + a⃗·σ⃗)/2,
//! Bell-measures it against her share of the tripartite resource (outcome
//! s₀s₁), the controller measures σx (outcome γ), and the receiver applies
//! the corrective rotation for the branch he believes he is in. Average
//! fidelities are Haar averages of ⟨a|ρ_out|a⟩ over the input sphere,
//! computed exactly by a six-point axial quadrature (the integrand is a
//! quadratic polynomial in a⃗, so the quadrature matches the Haar average).
//!
//! Three receiver strategies are implemented: corrections driven by the
//! controller's disclosed outcome, a uniform guess when it is withheld, and
//! decoding from the eavesdropper's announced measurement outcome.

use crate::channels::{depolarize_qubit, depolarize_total, purify};
use crate::corrections::{BranchCorrections, CorrectionTable};
use crate::density::{partial_trace_matrix, trace_out_left, trace_out_right, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix};
use crate::povm::{
    build_instance, build_instance_with_targets, solve_discrimination, Povm, SolveResult,
};
use crate::states::{
    bell_basis, bloch_state, controller_branch_unitaries, make_ghz, pauli, spin_projector,
    BlochVector,
};

/// Exact Haar average over pure qubit inputs of a quadratic function of the
/// Bloch vector: the mean of f over ±x̂, ±ŷ, ±ẑ.
pub fn bloch_average<F: Fn(&BlochVector) -> f64>(f: F) -> f64 {
    BlochVector::axes().iter().map(&f).sum::<f64>() / 6.0
}

/// Which depolarizing noise acts on the GHZ resource.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseChannel {
    /// Whole-state white noise: p·I/8 + (1−p)·ρ.
    Total,
    /// Independent single-qubit depolarizing on each share.
    Qubit,
}

impl NoiseChannel {
    pub fn apply_to_ghz(&self, p: f64) -> Result<DensityMatrix> {
        let ghz = make_ghz();
        match self {
            NoiseChannel::Total => depolarize_total(&ghz, p),
            NoiseChannel::Qubit => depolarize_qubit(&ghz, p),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NoiseChannel::Total => "total",
            NoiseChannel::Qubit => "qubit",
        }
    }
}

impl std::str::FromStr for NoiseChannel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "total" => Ok(NoiseChannel::Total),
            "qubit" => Ok(NoiseChannel::Qubit),
            other => Err(Error::InvalidArgument(format!(
                "unknown channel '{other}' (expected total or qubit)"
            ))),
        }
    }
}

/// One resolved branch of a protocol run for a fixed input ρ^a.
#[derive(Debug, Clone)]
pub struct TeleportOutcome {
    pub s0: u8,
    pub s1: u8,
    /// Controller's outcome, when he participates.
    pub gamma: Option<i8>,
    /// Eavesdropper's POVM outcome index, when he participates.
    pub delta: Option<usize>,
    pub probability: f64,
    /// Receiver's qubit after his corrective rotation.
    pub bob_state: DensityMatrix,
}

/// The four average fidelities of one noise setting.
#[derive(Debug, Clone, Copy)]
pub struct FidelityReport {
    /// With the controller's permission, no eavesdropping.
    pub f_c_ne: f64,
    /// Without permission, with the eavesdropper's assistance.
    pub f_nc_e: f64,
    /// Without permission, receiver guesses the withheld outcome.
    pub f_nc_guess: f64,
    /// f_c_ne − f_nc_e.
    pub ecp: f64,
}

/// Precomputed contraction tensors for one (resource, strategy) pair.
///
/// For every branch (s, t) — Bell outcome s, third-party outcome t — the
/// kernel stores g[μ][ν] = Tr[(M_s ⊗ σ_ν ⊗ K_t)(σ_μ ⊗ ρ)] and the receiver's
/// effective Bloch map for that branch, reducing one fidelity evaluation to
/// a handful of multiply-adds. That makes Monte Carlo verification of the
/// quadrature cheap.
pub struct TeleportKernel {
    /// g[s * n_t + t][μ][ν], real by Hermiticity of all factors.
    g: Vec<[[f64; 4]; 4]>,
    /// Effective decode map per branch: fidelity term uses y = (1, O·a)/2.
    /// For a guessed correction this is an average of two rotations.
    decode: Vec<[[f64; 3]; 3]>,
    n_t: usize,
}

impl TeleportKernel {
    /// Controller participates: he measures σx (t = 0 ↔ γ = +1, t = 1 ↔ −1)
    /// and the receiver applies the matching table entry.
    pub fn with_control(resource: &DensityMatrix, table: &CorrectionTable) -> Result<Self> {
        require_three_qubits(resource)?;
        let xhat = BlochVector::new(1.0, 0.0, 0.0).expect("unit axis");
        let k_ops = [spin_projector(&xhat, 1), spin_projector(&xhat, -1)];
        let decode = |s: usize, t: usize| {
            let gamma = if t == 0 { 1 } else { -1 };
            rotation_of(table.entry((s >> 1) as u8, (s & 1) as u8, gamma))
        };
        Ok(Self::build(resource.matrix(), &k_ops, decode))
    }

    /// Controller withholds γ: the receiver picks γ' = ±1 uniformly,
    /// independently of everything else.
    pub fn with_guess(resource: &DensityMatrix, table: &CorrectionTable) -> Result<Self> {
        require_three_qubits(resource)?;
        let xhat = BlochVector::new(1.0, 0.0, 0.0).expect("unit axis");
        let k_ops = [spin_projector(&xhat, 1), spin_projector(&xhat, -1)];
        let decode = |s: usize, _t: usize| {
            let plus = rotation_of(table.entry((s >> 1) as u8, (s & 1) as u8, 1));
            let minus = rotation_of(table.entry((s >> 1) as u8, (s & 1) as u8, -1));
            average_maps(&plus, &minus)
        };
        Ok(Self::build(resource.matrix(), &k_ops, decode))
    }

    /// Eavesdropper participates: his POVM outcome t names a Bell branch and
    /// the receiver decodes as if the pair were in that Bell state.
    pub fn adversarial(
        rho_abd: &DensityMatrix,
        povm: &Povm,
        corrections: &BranchCorrections,
    ) -> Result<Self> {
        let derek_dim = rho_abd.dim() / 4;
        if rho_abd.dim() != 4 * derek_dim || povm.dim() != derek_dim {
            return Err(Error::DimensionMismatch(format!(
                "POVM dim {} does not match the trailing factor of a dim-{} state",
                povm.dim(),
                rho_abd.dim()
            )));
        }
        if povm.len() > 4 {
            return Err(Error::InvalidArgument(
                "decoding expects at most four announced branches".into(),
            ));
        }
        let decode = |s: usize, t: usize| {
            rotation_of(corrections.entry(t, (s >> 1) as u8, (s & 1) as u8))
        };
        Ok(Self::build(rho_abd.matrix(), povm.elements(), decode))
    }

    fn build(
        resource: &ComplexMatrix,
        k_ops: &[ComplexMatrix],
        decode: impl Fn(usize, usize) -> [[f64; 3]; 3],
    ) -> Self {
        let n_t = k_ops.len();
        let bells = bell_basis();
        let mut g = vec![[[0.0f64; 4]; 4]; 4 * n_t];
        let mut decode_maps = Vec::with_capacity(4 * n_t);

        // State side: σ_μ ⊗ ρ for μ = 0..3.
        let states: Vec<ComplexMatrix> = (0..4).map(|mu| kron(&pauli(mu), resource)).collect();

        for (s, bell) in bells.iter().enumerate() {
            let ms = bell.projector();
            for (t, kt) in k_ops.iter().enumerate() {
                let block = &mut g[s * n_t + t];
                #[allow(clippy::needless_range_loop)]
                for nu in 0..4 {
                    let op = kron(&ms, &kron(&pauli(nu), kt));
                    for (mu, st) in states.iter().enumerate() {
                        let tr = op.trace_product(st);
                        debug_assert!(tr.im.abs() < 1e-9, "kernel entries are real");
                        block[mu][nu] = tr.re;
                    }
                }
                decode_maps.push(decode(s, t));
            }
        }
        Self {
            g,
            decode: decode_maps,
            n_t,
        }
    }

    /// ⟨fidelity⟩ for one input direction: Σ_branches p(branch)·⟨a|ρ_out|a⟩.
    pub fn fidelity(&self, a: &BlochVector) -> f64 {
        let x = [1.0, a.x, a.y, a.z];
        let mut total = 0.0;
        for (g, o) in self.g.iter().zip(&self.decode) {
            // y = (1, O·a); the two ½ normalizations of ρ^a and of the
            // measured projector combine to a single ¼.
            let y = [
                1.0,
                o[0][0] * a.x + o[0][1] * a.y + o[0][2] * a.z,
                o[1][0] * a.x + o[1][1] * a.y + o[1][2] * a.z,
                o[2][0] * a.x + o[2][1] * a.y + o[2][2] * a.z,
            ];
            let mut acc = 0.0;
            for mu in 0..4 {
                for nu in 0..4 {
                    acc += x[mu] * g[mu][nu] * y[nu];
                }
            }
            total += acc;
        }
        total / 4.0
    }

    /// Branch probabilities for one input direction, indexed s·n_t + t.
    pub fn branch_probabilities(&self, a: &BlochVector) -> Vec<f64> {
        let x = [1.0, a.x, a.y, a.z];
        self.g
            .iter()
            .map(|g| (0..4).map(|mu| x[mu] * g[mu][0]).sum::<f64>() / 2.0)
            .collect()
    }

    /// Haar-averaged fidelity via the exact six-point quadrature.
    pub fn average_fidelity(&self) -> f64 {
        bloch_average(|a| self.fidelity(a))
    }

    pub fn n_branches(&self) -> usize {
        4 * self.n_t
    }
}

/// Bloch action of a correction unitary: the fidelity term measures against
/// R|a⟩⟨a|R†, whose Bloch vector is O·a with O_ij = Tr[σ_i R σ_j R†]/2.
fn rotation_of(r: &ComplexMatrix) -> [[f64; 3]; 3] {
    let rd = r.dagger();
    let mut o = [[0.0; 3]; 3];
    for (i, row) in o.iter_mut().enumerate() {
        let si = pauli(i + 1);
        for (j, entry) in row.iter_mut().enumerate() {
            let sj = pauli(j + 1);
            let m = si.matmul(r).matmul(&sj).matmul(&rd);
            *entry = 0.5 * m.trace().re;
        }
    }
    o
}

fn average_maps(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = 0.5 * (a[i][j] + b[i][j]);
        }
    }
    out
}

fn require_three_qubits(resource: &DensityMatrix) -> Result<()> {
    if resource.n_qubits() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "protocol expects a 3-qubit resource, got {} qubits",
            resource.n_qubits()
        )));
    }
    Ok(())
}

/// Average teleportation fidelity with the controller's disclosed outcome.
pub fn fidelity_with_control(
    resource: &DensityMatrix,
    corrections: &CorrectionTable,
) -> Result<f64> {
    Ok(TeleportKernel::with_control(resource, corrections)?.average_fidelity())
}

/// Average fidelity when the controller withholds γ and the receiver
/// guesses it uniformly.
pub fn fidelity_no_control_guess(
    resource: &DensityMatrix,
    corrections: &CorrectionTable,
) -> Result<f64> {
    Ok(TeleportKernel::with_guess(resource, corrections)?.average_fidelity())
}

/// Average fidelity when the eavesdropper measures his purifying system
/// with `povm` and announces the branch; the receiver decodes accordingly.
pub fn fidelity_no_control_adversarial(
    rho_abd: &DensityMatrix,
    povm: &Povm,
    corrections_by_delta: &BranchCorrections,
) -> Result<f64> {
    Ok(TeleportKernel::adversarial(rho_abd, povm, corrections_by_delta)?.average_fidelity())
}

/// Enumerate the resolved branches of a protocol run with the controller
/// participating, for a fixed input direction. Branches with probability
/// below 1e-14 are skipped.
pub fn protocol_outcomes(
    resource: &DensityMatrix,
    corrections: &CorrectionTable,
    a: &BlochVector,
) -> Result<Vec<TeleportOutcome>> {
    require_three_qubits(resource)?;
    let xhat = BlochVector::new(1.0, 0.0, 0.0).expect("unit axis");
    let k_ops = [spin_projector(&xhat, 1), spin_projector(&xhat, -1)];
    let branches = enumerate_branches(resource.matrix(), 2, &k_ops, a, |s, t| {
        let gamma = if t == 0 { 1 } else { -1 };
        corrections
            .entry((s >> 1) as u8, (s & 1) as u8, gamma)
            .clone()
    });
    Ok(branches
        .into_iter()
        .map(|(s, t, probability, bob_state)| TeleportOutcome {
            s0: (s >> 1) as u8,
            s1: (s & 1) as u8,
            gamma: Some(if t == 0 { 1 } else { -1 }),
            delta: None,
            probability,
            bob_state,
        })
        .collect())
}

/// Enumerate the resolved branches with the eavesdropper participating.
pub fn adversarial_outcomes(
    rho_abd: &DensityMatrix,
    povm: &Povm,
    corrections: &BranchCorrections,
    a: &BlochVector,
) -> Result<Vec<TeleportOutcome>> {
    let derek_dim = rho_abd.dim() / 4;
    if povm.dim() != derek_dim || povm.len() > 4 {
        return Err(Error::DimensionMismatch(
            "POVM does not act on the eavesdropper factor".into(),
        ));
    }
    let branches = enumerate_branches(rho_abd.matrix(), derek_dim, povm.elements(), a, |s, t| {
        corrections.entry(t, (s >> 1) as u8, (s & 1) as u8).clone()
    });
    Ok(branches
        .into_iter()
        .map(|(s, t, probability, bob_state)| TeleportOutcome {
            s0: (s >> 1) as u8,
            s1: (s & 1) as u8,
            gamma: None,
            delta: Some(t),
            probability,
            bob_state,
        })
        .collect())
}

/// Direct matrix-level protocol run: project, condition, correct. This is
/// the slow reference path; the kernel contraction must agree with it.
fn enumerate_branches(
    resource: &ComplexMatrix,
    dx: usize,
    k_ops: &[ComplexMatrix],
    a: &BlochVector,
    correction: impl Fn(usize, usize) -> ComplexMatrix,
) -> Vec<(usize, usize, f64, DensityMatrix)> {
    let joint = kron(bloch_state(a).matrix(), resource); // a ⊗ A ⊗ B ⊗ X
    let id2 = ComplexMatrix::identity(2);
    let mut out = Vec::new();
    for (s, bell) in bell_basis().iter().enumerate() {
        for (t, kt) in k_ops.iter().enumerate() {
            let op = kron(&bell.projector(), &kron(&id2, kt));
            let product = joint.matmul(&op);
            let on_bx = trace_out_left(&product, 4, 2 * dx);
            let bob_unnorm = trace_out_right(&on_bx, 2, dx).hermitian_part();
            let p = bob_unnorm.trace().re;
            if p < 1e-14 {
                continue;
            }
            let bob = bob_unnorm.scale_re(1.0 / p);
            let u = correction(s, t);
            let corrected = bob.conjugate_by(&u.dagger());
            out.push((s, t, p, DensityMatrix::new_unchecked(corrected)));
        }
    }
    out
}

/// Everything the ECP pipeline produces for one (channel, p) point.
#[derive(Debug, Clone)]
pub struct EcpComputation {
    pub report: FidelityReport,
    pub solve: SolveResult,
}

/// Run the full pipeline at one noise point: build the noisy resource,
/// compute the with-permission fidelity, purify to expose the eavesdropper,
/// solve his optimal POVM and evaluate the assisted fidelity.
///
/// The eavesdropper's announced outcome names one of the four branches the
/// controller's two equatorial settings can project the pair into,
/// (|00⟩ + e^{iθ}|11⟩)/√2 with θ ∈ {0, π, ∓π/2}, and the receiver decodes
/// with the instruction-manual rotation for that branch. Discriminating the
/// four Bell states instead (decoding ψ± branches too) is a strictly
/// stronger attack — see `bell_branch_attack_value` — but it is not how the
/// announced (outcome, setting) pair is decoded here.
pub fn ecp_pipeline(
    channel: NoiseChannel,
    p: f64,
    sdp_tol: f64,
    sdp_max_iters: usize,
) -> Result<EcpComputation> {
    let table = CorrectionTable::ideal();
    let rho_f = channel.apply_to_ghz(p)?;

    let f_c_ne = fidelity_with_control(&rho_f, &table)?;
    let f_nc_guess = fidelity_no_control_guess(&rho_f, &table)?;

    let rho_abd = expose_eavesdropper(&rho_f)?;

    let branch_ops = controller_branch_unitaries();
    let targets: Vec<_> = branch_ops
        .iter()
        .map(crate::states::entangled_branch_state)
        .collect();
    let labels = vec!["+x".into(), "-x".into(), "+y".into(), "-y".into()];
    let instance = build_instance_with_targets(&rho_abd, 8, &targets, labels)?;
    let solve = solve_discrimination(&instance, sdp_tol, sdp_max_iters)?;

    let corrections = BranchCorrections::from_branch_unitaries(&branch_ops);
    let f_nc_e = fidelity_no_control_adversarial(&rho_abd, &solve.povm, &corrections)?;

    Ok(EcpComputation {
        report: FidelityReport {
            f_c_ne,
            f_nc_e,
            f_nc_guess,
            ecp: f_c_ne - f_nc_e,
        },
        solve,
    })
}

/// Purify ρ_f and trace out the controller: the sender–receiver pair plus
/// the eavesdropper's 8-dimensional purifying system.
pub fn expose_eavesdropper(rho_f: &DensityMatrix) -> Result<DensityMatrix> {
    let psi_f = purify(rho_f);
    let abd = partial_trace_matrix(&psi_f.projector(), 6, &[0, 1, 3, 4, 5])?;
    Ok(DensityMatrix::new_unchecked(abd.hermitian_part()))
}

/// Assisted fidelity when the eavesdropper instead discriminates the four
/// Bell states and the receiver decodes every one of them (the unrestricted
/// attack). Kept as a reference point; it upper-bounds the pipeline's
/// conditioned-branch attack.
pub fn bell_branch_attack_value(
    channel: NoiseChannel,
    p: f64,
    sdp_tol: f64,
    sdp_max_iters: usize,
) -> Result<f64> {
    let rho_f = channel.apply_to_ghz(p)?;
    let rho_abd = expose_eavesdropper(&rho_f)?;
    let instance = build_instance(&rho_abd, 8)?;
    let solve = solve_discrimination(&instance, sdp_tol, sdp_max_iters)?;
    fidelity_no_control_adversarial(&rho_abd, &solve.povm, &BranchCorrections::new())
}

/// [`ecp_pipeline`] with the default solver budget (tol 1e-7, 5000 iterations).
pub fn ecp_report(channel: NoiseChannel, p: f64) -> Result<FidelityReport> {
    Ok(ecp_pipeline(channel, p, 1e-7, 5000)?.report)
}
