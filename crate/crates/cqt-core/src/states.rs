//! Standard states and operators: Paulis, Bloch-sphere qubits, Bell states
//! and the GHZ resource.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, PureState};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ],
    )
}

/// σ₀ = I, σ₁ = σx, σ₂ = σy, σ₃ = σz.
pub fn pauli(index: usize) -> ComplexMatrix {
    match index {
        0 => ComplexMatrix::identity(2),
        1 => pauli_x(),
        2 => pauli_y(),
        3 => pauli_z(),
        _ => panic!("pauli index must be 0..=3"),
    }
}

/// Unit vector on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    /// Requires x²+y²+z² = 1 within 1e-10.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotUnitBloch { norm });
        }
        Ok(Self { x, y, z })
    }

    /// Spherical angles: (sinθcosφ, sinθsinφ, cosθ).
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    /// Uniform (Haar) sample on the sphere.
    pub fn random<R: rand::Rng>(rng: &mut R) -> Self {
        let z: f64 = rng.random_range(-1.0..=1.0);
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).max(0.0).sqrt();
        Self {
            x: r * phi.cos(),
            y: r * phi.sin(),
            z,
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// a·σ⃗ as a 2×2 Hermitian matrix.
    pub fn dot_sigma(&self) -> ComplexMatrix {
        let mut m = pauli_x().scale_re(self.x);
        m = &m + &pauli_y().scale_re(self.y);
        m = &m + &pauli_z().scale_re(self.z);
        m
    }

    /// The six axial directions ±x̂, ±ŷ, ±ẑ.
    pub fn axes() -> [Self; 6] {
        [
            Self { x: 1.0, y: 0.0, z: 0.0 },
            Self { x: -1.0, y: 0.0, z: 0.0 },
            Self { x: 0.0, y: 1.0, z: 0.0 },
            Self { x: 0.0, y: -1.0, z: 0.0 },
            Self { x: 0.0, y: 0.0, z: 1.0 },
            Self { x: 0.0, y: 0.0, z: -1.0 },
        ]
    }
}

/// ρ = (I + a⃗·σ⃗)/2, the qubit with Bloch vector a⃗.
pub fn bloch_state(a: &BlochVector) -> crate::density::DensityMatrix {
    let m = &(ComplexMatrix::identity(2)) + &a.dot_sigma();
    crate::density::DensityMatrix::new_unchecked(m.scale_re(0.5))
}

/// Pure state |a⟩ with ⟨a|σ⃗|a⟩ = a⃗ (global phase: real non-negative |0⟩
/// amplitude).
pub fn bloch_ket(a: &BlochVector) -> PureState {
    let theta = a.z.clamp(-1.0, 1.0).acos();
    let phi = a.y.atan2(a.x);
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    PureState::new(vec![
        Complex64::new(c, 0.0),
        Complex64::new(s * phi.cos(), s * phi.sin()),
    ])
    .expect("bloch ket is normalized")
}

/// (|000⟩ + |111⟩)/√2 on three qubits.
pub fn make_ghz() -> PureState {
    let s = 1.0 / 2f64.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0] = Complex64::new(s, 0.0);
    amps[7] = Complex64::new(s, 0.0);
    PureState::new(amps).expect("GHZ is normalized")
}

/// Bell basis indexed by two bits:
/// |φ⁰⁰⟩ = (|00⟩+|11⟩)/√2, |φ⁰¹⟩ = (|00⟩−|11⟩)/√2,
/// |φ¹⁰⟩ = (|01⟩+|10⟩)/√2, |φ¹¹⟩ = (|01⟩−|10⟩)/√2.
pub fn make_bell(c0: u8, c1: u8) -> PureState {
    assert!(c0 < 2 && c1 < 2, "bell labels are bits");
    let s = 1.0 / 2f64.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    let sign = if c1 == 0 { s } else { -s };
    if c0 == 0 {
        amps[0] = Complex64::new(s, 0.0);
        amps[3] = Complex64::new(sign, 0.0);
    } else {
        amps[1] = Complex64::new(s, 0.0);
        amps[2] = Complex64::new(sign, 0.0);
    }
    PureState::new(amps).expect("bell state is normalized")
}

/// The Pauli P with |φ^{c0c1}⟩ = (P ⊗ I)|φ⁰⁰⟩: I, σz, σx, σx·σz.
pub fn bell_pauli(c0: u8, c1: u8) -> ComplexMatrix {
    match (c0, c1) {
        (0, 0) => ComplexMatrix::identity(2),
        (0, 1) => pauli_z(),
        (1, 0) => pauli_x(),
        (1, 1) => pauli_x().matmul(&pauli_z()),
        _ => panic!("bell labels are bits"),
    }
}

/// All four Bell states in label order 00, 01, 10, 11.
pub fn bell_basis() -> [PureState; 4] {
    [
        make_bell(0, 0),
        make_bell(0, 1),
        make_bell(1, 0),
        make_bell(1, 1),
    ]
}

/// Projector (I + γ·v⃗·σ⃗)/2 for a spin measurement along v⃗ with outcome γ = ±1.
pub fn spin_projector(v: &BlochVector, gamma: i8) -> ComplexMatrix {
    let sign = f64::from(gamma);
    let m = &ComplexMatrix::identity(2) + &v.dot_sigma().scale_re(sign);
    m.scale_re(0.5)
}

/// The maximally entangled state (P ⊗ I)|φ⁰⁰⟩ for a unitary P.
pub fn entangled_branch_state(p: &ComplexMatrix) -> PureState {
    assert_eq!(p.dim(), 2);
    let phi = make_bell(0, 0);
    let op = kron_for_branch(p);
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    for (r, amp) in amps.iter_mut().enumerate() {
        for c in 0..4 {
            *amp += op.get(r, c) * phi.amplitude(c);
        }
    }
    PureState::new(amps).expect("unitary preserves the norm")
}

fn kron_for_branch(p: &ComplexMatrix) -> ComplexMatrix {
    crate::linalg::kron(p, &ComplexMatrix::identity(2))
}

/// The two-qubit states the controller's σx and σy measurements project the
/// remaining pair of a GHZ state into, as branch unitaries diag(1, e^{iθ}),
/// θ ∈ {0, π, −π/2, +π/2}: (|00⟩ + e^{iθ}|11⟩)/√2 in order
/// (+x, −x, +y, −y).
pub fn controller_branch_unitaries() -> [ComplexMatrix; 4] {
    let phase = |theta: f64| {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, Complex64::new(1.0, 0.0));
        m.set(1, 1, Complex64::from_polar(1.0, theta));
        m
    };
    [
        phase(0.0),
        phase(std::f64::consts::PI),
        phase(-std::f64::consts::FRAC_PI_2),
        phase(std::f64::consts::FRAC_PI_2),
    ]
}
