//! Device-independent statistics and the Bell functionals that certify them.
//!
//! A test round: each of the three parties feeds one of two inputs into its
//! box and records a ±1 outcome, giving a table p(α,β,γ|j,k,l). On that
//! table we evaluate CHSH (two-party), Mermin, and the Svetlichny function
//!
//! ```text
//! S = p_A(+1|0)·CHSH₊₀ − p_A(−1|0)·CHSH₋₀ + p_A(+1|1)·CHSH′₊₁ − p_A(−1|1)·CHSH′₋₁
//! ```
//!
//! which in unnormalized form is the linear combination of full correlators
//! E(000)+E(001)+E(010)−E(011)+E(100)−E(101)−E(110)−E(111). Classical
//! strategies — even when the receiver's input is broadcast to the others —
//! obey |S| ≤ 4, while the GHZ state reaches 4√2.
//!
//! Two table generators are provided. `correlations_from_state` measures
//! spin along the six setting directions; this is the scenario whose
//! optimum reaches 4√2 on GHZ. `teleport_box_correlations` runs the sender's
//! input through the teleportation box itself (Bell measurement against her
//! share, output binarized as α = 2s_j − 1); that box certifies two-party
//! CHSH at 2√2 but its binarized observables are stuck on the σz/σx axes,
//! which caps its Svetlichny value at 2√2 on GHZ.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::density::{partial_trace_matrix, DensityMatrix};
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix};
use crate::states::{bell_basis, bloch_state, pauli, BlochVector};
use crate::teleport::NoiseChannel;

/// The six measurement directions of one test configuration. The sender's
/// two vectors double as the input states fed to the teleport box.
#[derive(Debug, Clone, Copy)]
pub struct SettingsTriple {
    pub alice: [BlochVector; 2],
    pub bob: [BlochVector; 2],
    pub charlie: [BlochVector; 2],
}

/// p(α, β, γ | j, k, l) over binary inputs and ±1 outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTable {
    // Index order (j, k, l, α, β, γ) with outcome +1 ↦ slot 0.
    p: Vec<f64>,
}

#[inline]
fn slot(outcome: i8) -> usize {
    match outcome {
        1 => 0,
        -1 => 1,
        _ => panic!("outcomes are ±1"),
    }
}

impl Default for CorrelationTable {
    fn default() -> Self {
        Self::zeroed()
    }
}

impl CorrelationTable {
    pub fn zeroed() -> Self {
        Self { p: vec![0.0; 64] }
    }

    #[inline]
    fn index(j: usize, k: usize, l: usize, a: i8, b: i8, c: i8) -> usize {
        ((((j * 2 + k) * 2 + l) * 2 + slot(a)) * 2 + slot(b)) * 2 + slot(c)
    }

    pub fn prob(&self, j: usize, k: usize, l: usize, a: i8, b: i8, c: i8) -> f64 {
        self.p[Self::index(j, k, l, a, b, c)]
    }

    #[allow(clippy::too_many_arguments)]
    pub fn set_prob(&mut self, j: usize, k: usize, l: usize, a: i8, b: i8, c: i8, value: f64) {
        self.p[Self::index(j, k, l, a, b, c)] = value;
    }

    /// Full three-party correlator E(jkl) = Σ αβγ·p(αβγ|jkl).
    pub fn full_correlator(&self, j: usize, k: usize, l: usize) -> f64 {
        let mut acc = 0.0;
        for a in [1i8, -1] {
            for b in [1i8, -1] {
                for c in [1i8, -1] {
                    acc += f64::from(a) * f64::from(b) * f64::from(c) * self.prob(j, k, l, a, b, c);
                }
            }
        }
        acc
    }

    /// Sender's marginal p_A(α|j) at fixed (k, l).
    pub fn alice_marginal(&self, j: usize, k: usize, l: usize, a: i8) -> f64 {
        let mut acc = 0.0;
        for b in [1i8, -1] {
            for c in [1i8, -1] {
                acc += self.prob(j, k, l, a, b, c);
            }
        }
        acc
    }

    /// Each conditional distribution sums to 1 (1e-9) with entries ≥ −1e-12.
    pub fn validate(&self) -> Result<()> {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let mut total = 0.0;
                    for a in [1i8, -1] {
                        for b in [1i8, -1] {
                            for c in [1i8, -1] {
                                let v = self.prob(j, k, l, a, b, c);
                                if v < -1e-12 {
                                    return Err(Error::InvalidProbability(v));
                                }
                                total += v;
                            }
                        }
                    }
                    if (total - 1.0).abs() > 1e-9 {
                        return Err(Error::InvalidArgument(format!(
                            "conditional ({j},{k},{l}) sums to {total}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Convex mixture λ·self + (1−λ)·other.
    pub fn mix(&self, other: &Self, lambda: f64) -> Self {
        let p = self
            .p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        Self { p }
    }

    /// Two-party restriction: fix the third party's input l and sum γ out.
    pub fn bipartite_restriction(&self, l: usize) -> BipartiteTable {
        let mut out = BipartiteTable::zeroed();
        for j in 0..2 {
            for k in 0..2 {
                for a in [1i8, -1] {
                    for b in [1i8, -1] {
                        let v: f64 = [1i8, -1]
                            .iter()
                            .map(|&c| self.prob(j, k, l, a, b, c))
                            .sum();
                        out.set_prob(j, k, a, b, v);
                    }
                }
            }
        }
        out
    }
}

/// p(α, β | j, k) for two parties.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteTable {
    p: Vec<f64>,
}

impl BipartiteTable {
    pub fn zeroed() -> Self {
        Self { p: vec![0.0; 16] }
    }

    #[inline]
    fn index(j: usize, k: usize, a: i8, b: i8) -> usize {
        ((j * 2 + k) * 2 + slot(a)) * 2 + slot(b)
    }

    pub fn prob(&self, j: usize, k: usize, a: i8, b: i8) -> f64 {
        self.p[Self::index(j, k, a, b)]
    }

    pub fn set_prob(&mut self, j: usize, k: usize, a: i8, b: i8, value: f64) {
        self.p[Self::index(j, k, a, b)] = value;
    }

    pub fn correlator(&self, j: usize, k: usize) -> f64 {
        let mut acc = 0.0;
        for a in [1i8, -1] {
            for b in [1i8, -1] {
                acc += f64::from(a) * f64::from(b) * self.prob(j, k, a, b);
            }
        }
        acc
    }
}

/// Full correlation tensor T[μ][ν][λ] = Tr[ρ·(σ_μ ⊗ σ_ν ⊗ σ_λ)] of a
/// three-qubit state; index 0 is the identity slot.
pub struct CorrelationTensor {
    t: [[[f64; 4]; 4]; 4],
}

impl CorrelationTensor {
    pub fn from_state(resource: &DensityMatrix) -> Result<Self> {
        if resource.n_qubits() != 3 {
            return Err(Error::DimensionMismatch(format!(
                "correlation tensor expects 3 qubits, got {}",
                resource.n_qubits()
            )));
        }
        let mut t = [[[0.0; 4]; 4]; 4];
        for (mu, plane) in t.iter_mut().enumerate() {
            let sm = pauli(mu);
            for (nu, row) in plane.iter_mut().enumerate() {
                let sn = pauli(nu);
                let left = kron(&sm, &sn);
                for (la, entry) in row.iter_mut().enumerate() {
                    let op = kron(&left, &pauli(la));
                    let tr = op.trace_product(resource.matrix());
                    debug_assert!(tr.im.abs() < 1e-10);
                    *entry = tr.re;
                }
            }
        }
        Ok(Self { t })
    }

    /// Contract with one Pauli coefficient vector per party.
    pub fn contract(&self, u: &[f64; 4], v: &[f64; 4], w: &[f64; 4]) -> f64 {
        let mut acc = 0.0;
        for (um, plane) in u.iter().zip(&self.t) {
            if *um == 0.0 {
                continue;
            }
            for (vn, row) in v.iter().zip(plane) {
                if *vn == 0.0 {
                    continue;
                }
                for (wl, t) in w.iter().zip(row) {
                    acc += um * vn * wl * t;
                }
            }
        }
        acc
    }

    /// Traceless contraction ⟨(a⃗·σ)(b⃗·σ)(c⃗·σ)⟩.
    pub fn spin_correlator(&self, a: &BlochVector, b: &BlochVector, c: &BlochVector) -> f64 {
        let av = [a.x, a.y, a.z];
        let bv = [b.x, b.y, b.z];
        let cv = [c.x, c.y, c.z];
        let mut acc = 0.0;
        for (x, &ax) in av.iter().enumerate() {
            for (y, &by) in bv.iter().enumerate() {
                for (z, &cz) in cv.iter().enumerate() {
                    acc += ax * by * cz * self.t[x + 1][y + 1][z + 1];
                }
            }
        }
        acc
    }

    /// Two-party correlator ⟨(a⃗·σ)(b⃗·σ)⟩ with the third party summed out.
    pub fn pair_correlator(&self, a: &BlochVector, b: &BlochVector) -> f64 {
        let av = [a.x, a.y, a.z];
        let bv = [b.x, b.y, b.z];
        let mut acc = 0.0;
        for (x, &ax) in av.iter().enumerate() {
            for (y, &by) in bv.iter().enumerate() {
                acc += ax * by * self.t[x + 1][y + 1][0];
            }
        }
        acc
    }
}

fn projector_coeffs(v: &BlochVector, outcome: i8) -> [f64; 4] {
    let s = f64::from(outcome) * 0.5;
    [0.5, s * v.x, s * v.y, s * v.z]
}

/// Statistics of the three-spin-measurement scenario: every party measures
/// along its chosen direction and the Born rule fills the table.
pub fn correlations_from_state(
    resource: &DensityMatrix,
    settings: &SettingsTriple,
) -> Result<CorrelationTable> {
    let tensor = CorrelationTensor::from_state(resource)?;
    let mut table = CorrelationTable::zeroed();
    for j in 0..2 {
        for k in 0..2 {
            for l in 0..2 {
                for a in [1i8, -1] {
                    let u = projector_coeffs(&settings.alice[j], a);
                    for b in [1i8, -1] {
                        let v = projector_coeffs(&settings.bob[k], b);
                        for c in [1i8, -1] {
                            let w = projector_coeffs(&settings.charlie[l], c);
                            table.set_prob(j, k, l, a, b, c, tensor.contract(&u, &v, &w));
                        }
                    }
                }
            }
        }
    }
    Ok(table)
}

/// The sender's effective ±1 effects when her box Bell-measures the input
/// state ρ^{a_j} against her share and reports α = 2s_j − 1.
fn teleport_box_effects(input: &BlochVector, j: usize) -> [ComplexMatrix; 2] {
    let rho_in = bloch_state(input);
    let mut plus = ComplexMatrix::zeros(2);
    let mut minus = ComplexMatrix::zeros(2);
    for (s, bell) in bell_basis().iter().enumerate() {
        let joint = kron(rho_in.matrix(), &ComplexMatrix::identity(2));
        let effect = partial_trace_matrix(&joint.matmul(&bell.projector()), 2, &[1])
            .expect("keep set nonempty");
        let bit = if j == 0 { s >> 1 } else { s & 1 };
        if bit == 1 {
            plus = &plus + &effect;
        } else {
            minus = &minus + &effect;
        }
    }
    [plus.hermitian_part(), minus.hermitian_part()]
}

fn pauli_coeffs(m: &ComplexMatrix) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (mu, entry) in out.iter_mut().enumerate() {
        *entry = 0.5 * m.trace_product(&pauli(mu)).re;
    }
    out
}

/// Statistics of the literal teleportation-box scenario: the sender inputs
/// the state bloch_state(a_j), her box Bell-measures it against her share
/// and outputs s₀s₁ binarized as α = 2s_j − 1; the other two parties
/// measure spin along their directions.
pub fn teleport_box_correlations(
    resource: &DensityMatrix,
    settings: &SettingsTriple,
) -> Result<CorrelationTable> {
    let tensor = CorrelationTensor::from_state(resource)?;
    let mut table = CorrelationTable::zeroed();
    for j in 0..2 {
        let effects = teleport_box_effects(&settings.alice[j], j);
        let coeffs = [pauli_coeffs(&effects[0]), pauli_coeffs(&effects[1])];
        for k in 0..2 {
            for l in 0..2 {
                for (ai, a) in [1i8, -1].into_iter().enumerate() {
                    for b in [1i8, -1] {
                        let v = projector_coeffs(&settings.bob[k], b);
                        for c in [1i8, -1] {
                            let w = projector_coeffs(&settings.charlie[l], c);
                            table.set_prob(j, k, l, a, b, c, tensor.contract(&coeffs[ai], &v, &w));
                        }
                    }
                }
            }
        }
    }
    Ok(table)
}

/// Two-party teleport-box statistics p(α, β | j, k) on a two-qubit resource.
pub fn teleport_box_bipartite(
    resource: &DensityMatrix,
    inputs: &[BlochVector; 2],
    bob_dirs: &[BlochVector; 2],
) -> Result<BipartiteTable> {
    if resource.n_qubits() != 2 {
        return Err(Error::DimensionMismatch(
            "two-party box expects a 2-qubit resource".into(),
        ));
    }
    let mut table = BipartiteTable::zeroed();
    for (j, input) in inputs.iter().enumerate() {
        let effects = teleport_box_effects(input, j);
        for (ai, a) in [1i8, -1].into_iter().enumerate() {
            for (k, bob_dir) in bob_dirs.iter().enumerate() {
                for b in [1i8, -1] {
                    let op = kron(&effects[ai], &crate::states::spin_projector(bob_dir, b));
                    let v = op.trace_product(resource.matrix()).re;
                    table.set_prob(j, k, a, b, v);
                }
            }
        }
    }
    Ok(table)
}

/// CHSH = E(00) + E(01) + E(10) − E(11); local bound 2, quantum bound 2√2.
pub fn chsh_value(table: &BipartiteTable) -> f64 {
    table.correlator(0, 0) + table.correlator(0, 1) + table.correlator(1, 0)
        - table.correlator(1, 1)
}

/// Unnormalized conditioned correlator Σ_{βγ} βγ·p(α,β,γ|jkl).
fn weighted_pair_correlator(table: &CorrelationTable, a: i8, j: usize, k: usize, l: usize) -> f64 {
    let mut acc = 0.0;
    for b in [1i8, -1] {
        for c in [1i8, -1] {
            acc += f64::from(b) * f64::from(c) * table.prob(j, k, l, a, b, c);
        }
    }
    acc
}

/// CHSH of the receiver–controller pair conditioned on the sender's outcome
/// α with input j: E^{αj}₀₀ + E^{αj}₀₁ + E^{αj}₁₀ − E^{αj}₁₁, where
/// E^{αj}_{kl} = Σ βγ·p(β,γ|j,α,k,l).
pub fn chsh_conditioned(table: &CorrelationTable, a: i8, j: usize) -> f64 {
    let e = |k: usize, l: usize| {
        let w = weighted_pair_correlator(table, a, j, k, l);
        let m = table.alice_marginal(j, k, l, a);
        if m < 1e-14 {
            0.0
        } else {
            w / m
        }
    };
    e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1)
}

/// The reflected combination E₀₀ − E₀₁ − E₁₀ − E₁₁ conditioned the same way.
pub fn chsh_conditioned_prime(table: &CorrelationTable, a: i8, j: usize) -> f64 {
    let e = |k: usize, l: usize| {
        let w = weighted_pair_correlator(table, a, j, k, l);
        let m = table.alice_marginal(j, k, l, a);
        if m < 1e-14 {
            0.0
        } else {
            w / m
        }
    };
    e(0, 0) - e(0, 1) - e(1, 0) - e(1, 1)
}

/// Svetlichny function of the table. Evaluated in the unnormalized form —
/// the marginal weights p_A(α|j) cancel against the conditioning — which
/// makes S exactly linear in the table:
/// S = E(000)+E(001)+E(010)−E(011)+E(100)−E(101)−E(110)−E(111).
pub fn svetlichny_value(table: &CorrelationTable) -> f64 {
    let e = |j, k, l| table.full_correlator(j, k, l);
    e(0, 0, 0) + e(0, 0, 1) + e(0, 1, 0) - e(0, 1, 1) + e(1, 0, 0)
        - e(1, 0, 1)
        - e(1, 1, 0)
        - e(1, 1, 1)
}

/// Three-party Mermin combination E(001) + E(010) + E(100) − E(111);
/// local bound 2, quantum (and broadcast-classical) maximum 4.
pub fn mermin_value(table: &CorrelationTable) -> f64 {
    let e = |j, k, l| table.full_correlator(j, k, l);
    e(0, 0, 1) + e(0, 1, 0) + e(1, 0, 0) - e(1, 1, 1)
}

/// Which functional a search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Svetlichny,
    Mermin,
    /// CHSH of the sender–receiver restriction (third input fixed to 0).
    Chsh,
}

impl std::str::FromStr for Objective {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svetlichny" => Ok(Objective::Svetlichny),
            "mermin" => Ok(Objective::Mermin),
            "chsh" => Ok(Objective::Chsh),
            other => Err(Error::InvalidArgument(format!(
                "unknown objective '{other}'"
            ))),
        }
    }
}

fn angles_to_settings(angles: &[f64; 12]) -> SettingsTriple {
    let v = |i: usize| BlochVector::from_angles(angles[2 * i], angles[2 * i + 1]);
    SettingsTriple {
        alice: [v(0), v(1)],
        bob: [v(2), v(3)],
        charlie: [v(4), v(5)],
    }
}

fn objective_value(tensor: &CorrelationTensor, settings: &SettingsTriple, obj: Objective) -> f64 {
    let e = |j: usize, k: usize, l: usize| {
        tensor.spin_correlator(&settings.alice[j], &settings.bob[k], &settings.charlie[l])
    };
    match obj {
        Objective::Svetlichny => {
            e(0, 0, 0) + e(0, 0, 1) + e(0, 1, 0) - e(0, 1, 1) + e(1, 0, 0)
                - e(1, 0, 1)
                - e(1, 1, 0)
                - e(1, 1, 1)
        }
        Objective::Mermin => e(0, 0, 1) + e(0, 1, 0) + e(1, 0, 0) - e(1, 1, 1),
        Objective::Chsh => {
            let f = |j: usize, k: usize| {
                tensor.pair_correlator(&settings.alice[j], &settings.bob[k])
            };
            f(0, 0) + f(0, 1) + f(1, 0) - f(1, 1)
        }
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const SWEEPS: usize = 40;
const GOLDEN_STEPS: usize = 28;

/// Maximize the chosen functional over the twelve setting angles by
/// coordinate-wise golden-section refinement from `restarts` random starts.
/// Deterministic for a fixed seed; ties across restarts resolve to the
/// lowest restart index.
pub fn optimize_settings(
    resource: &DensityMatrix,
    objective: Objective,
    restarts: usize,
    seed: u64,
) -> Result<(SettingsTriple, f64)> {
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be ≥ 1".into()));
    }
    let tensor = CorrelationTensor::from_state(resource)?;
    let eval =
        |angles: &[f64; 12]| objective_value(&tensor, &angles_to_settings(angles), objective);

    let mut best: Option<(f64, [f64; 12])> = None;
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(r as u64));
        let mut angles = [0.0f64; 12];
        for (i, a) in angles.iter_mut().enumerate() {
            *a = if i % 2 == 0 {
                rng.random_range(0.0..std::f64::consts::PI)
            } else {
                rng.random_range(0.0..std::f64::consts::TAU)
            };
        }
        let mut value = eval(&angles);
        let mut window = std::f64::consts::FRAC_PI_2;
        for _ in 0..SWEEPS {
            for coord in 0..12 {
                let (x, fx) = golden_section_max(
                    |t| {
                        let mut trial = angles;
                        trial[coord] = t;
                        eval(&trial)
                    },
                    angles[coord] - window,
                    angles[coord] + window,
                    GOLDEN_STEPS,
                );
                if fx > value {
                    value = fx;
                    angles[coord] = x;
                }
            }
            window *= 0.7;
        }
        // Strict inequality keeps the lowest restart index on ties.
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, angles));
        }
    }
    let (value, angles) = best.expect("restarts ≥ 1");
    Ok((angles_to_settings(&angles), value))
}

/// Golden-section search for a maximum on [lo, hi].
fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..steps {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (a + b);
    (mid, f(mid))
}

/// Largest Svetlichny value available from a depolarized GHZ state when the
/// white-noise weight is spent on an optimal classical strategy (worth 4)
/// and the surviving GHZ weight on the quantum optimum (worth 4√2):
/// total channel (1−p)·4√2 + 4p; per-qubit channel (1−p)³·4√2 + 4(1−(1−p)³).
pub fn closed_form_max_s(channel: NoiseChannel, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let s_ghz = 4.0 * 2f64.sqrt();
    let s_classical = 4.0;
    Ok(match channel {
        NoiseChannel::Total => (1.0 - p) * s_ghz + p * s_classical,
        NoiseChannel::Qubit => {
            let survival = (1.0 - p).powi(3);
            survival * s_ghz + (1.0 - survival) * s_classical
        }
    })
}

/// Exhaustive maximum of |objective| over deterministic broadcasting
/// strategies: the receiver's input k is published, so the sender answers
/// α(j,k), the controller γ(l,k), and the receiver β(k) — 2⁴·2⁴·2² = 1024
/// strategies.
pub fn classical_broadcast_bound(objective: Objective) -> Result<f64> {
    if objective == Objective::Chsh {
        return Err(Error::InvalidArgument(
            "broadcast bound is defined for the three-party functionals".into(),
        ));
    }
    let mut best: f64 = 0.0;
    for alpha_bits in 0..16u32 {
        for gamma_bits in 0..16u32 {
            for beta_bits in 0..4u32 {
                let alpha = |j: usize, k: usize| sign_of(alpha_bits >> (2 * j + k));
                let gamma = |l: usize, k: usize| sign_of(gamma_bits >> (2 * l + k));
                let beta = |k: usize| sign_of(beta_bits >> k);
                let value = deterministic_objective(objective, &alpha, &beta, &gamma);
                best = best.max(value.abs());
            }
        }
    }
    Ok(best)
}

/// Same maximum restricted to non-communicating deterministic strategies
/// α(j), β(k), γ(l) — the ordinary local-hidden-variable extreme points.
pub fn classical_local_bound(objective: Objective) -> Result<f64> {
    if objective == Objective::Chsh {
        return Err(Error::InvalidArgument(
            "local bound is defined for the three-party functionals".into(),
        ));
    }
    let mut best: f64 = 0.0;
    for alpha_bits in 0..4u32 {
        for gamma_bits in 0..4u32 {
            for beta_bits in 0..4u32 {
                let alpha = |j: usize, _k: usize| sign_of(alpha_bits >> j);
                let gamma = |l: usize, _k: usize| sign_of(gamma_bits >> l);
                let beta = |k: usize| sign_of(beta_bits >> k);
                let value = deterministic_objective(objective, &alpha, &beta, &gamma);
                best = best.max(value.abs());
            }
        }
    }
    Ok(best)
}

fn sign_of(bit: u32) -> f64 {
    if bit & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

fn deterministic_objective(
    objective: Objective,
    alpha: &dyn Fn(usize, usize) -> f64,
    beta: &dyn Fn(usize) -> f64,
    gamma: &dyn Fn(usize, usize) -> f64,
) -> f64 {
    let e = |j: usize, k: usize, l: usize| alpha(j, k) * beta(k) * gamma(l, k);
    match objective {
        Objective::Svetlichny => {
            e(0, 0, 0) + e(0, 0, 1) + e(0, 1, 0) - e(0, 1, 1) + e(1, 0, 0)
                - e(1, 0, 1)
                - e(1, 1, 0)
                - e(1, 1, 1)
        }
        Objective::Mermin => e(0, 0, 1) + e(0, 1, 0) + e(1, 0, 0) - e(1, 1, 1),
        Objective::Chsh => unreachable!("rejected above"),
    }
}

/// Table induced by one deterministic broadcast strategy; used by the
/// enumeration tests to confirm the functional evaluations agree.
pub fn deterministic_broadcast_table(
    alpha: impl Fn(usize, usize) -> i8,
    beta: impl Fn(usize) -> i8,
    gamma: impl Fn(usize, usize) -> i8,
) -> CorrelationTable {
    let mut table = CorrelationTable::zeroed();
    for j in 0..2 {
        for k in 0..2 {
            for l in 0..2 {
                table.set_prob(j, k, l, alpha(j, k), beta(k), gamma(l, k), 1.0);
            }
        }
    }
    table
}
