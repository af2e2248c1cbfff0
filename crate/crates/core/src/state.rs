//! Two-qubit operators and the state types shared across the crate.
//!
//! Basis order is `|00>, |01>, |10>, |11>` with `s3 |0> = +|0>`.

use nalgebra::{Complex, Matrix2, Matrix4, SymmetricEigen, Vector4};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type Mat4 = Matrix4<C64>;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Single-qubit Pauli matrix `s_i`, with `s_0` the identity.
pub fn pauli(i: usize) -> Matrix2<C64> {
    let zero = c(0.0);
    let one = c(1.0);
    let i_unit = C64::new(0.0, 1.0);
    match i {
        0 => Matrix2::new(one, zero, zero, one),
        1 => Matrix2::new(zero, one, one, zero),
        2 => Matrix2::new(zero, -i_unit, i_unit, zero),
        3 => Matrix2::new(one, zero, zero, -one),
        _ => panic!("Pauli index {i} out of range 0..=3"),
    }
}

/// `a ⊗ b`, first factor acting on detector (a).
pub fn kron(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Mat4 {
    Mat4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

/// `s_i ⊗ s_j`.
pub fn pauli_product(i: usize, j: usize) -> Mat4 {
    kron(&pauli(i), &pauli(j))
}

/// Collective operator `Γ_i = s_i ⊗ s_0 + s_0 ⊗ s_i`.
pub fn collective(i: usize) -> Mat4 {
    pauli_product(i, 0) + pauli_product(0, i)
}

/// Bloch-form matrix `¼[I⊗I + ρ₃Γ₃ + Σᵢ ρᵢᵢ sᵢ⊗sᵢ]`.
///
/// Linear in its coefficients; no positivity check, since arbitrary
/// coefficient triples need not describe a state.
pub fn bloch_matrix(rho3: f64, rho_diag: [f64; 3]) -> Mat4 {
    let mut m = Mat4::identity() + collective(3) * c(rho3);
    for (k, r) in rho_diag.iter().enumerate() {
        m += pauli_product(k + 1, k + 1) * c(*r);
    }
    m * c(0.25)
}

/// Eigen-decomposition of a Hermitian 4×4 matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &Mat4) -> (Vector4<f64>, Mat4) {
    let eig = SymmetricEigen::new(*m);
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = Vector4::from_fn(|i, _| eig.eigenvalues[order[i]]);
    let vectors = Mat4::from_fn(|r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

pub fn eigenvalues(m: &Mat4) -> Vector4<f64> {
    hermitian_eigen(m).0
}

/// Trace distance `½‖a − b‖₁` between Hermitian matrices.
pub fn trace_distance(a: &Mat4, b: &Mat4) -> f64 {
    0.5 * eigenvalues(&(a - b)).iter().map(|v| v.abs()).sum::<f64>()
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_defect(m: &Mat4) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix4(Mat4);

impl DensityMatrix4 {
    /// Checks Hermiticity, unit trace and positivity up to round-off.
    pub fn new(m: Mat4) -> Result<Self> {
        let herm = hermiticity_defect(&m);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("Hermiticity defect {herm:e}")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = eigenvalues(&m).min();
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("minimum eigenvalue {min:e}")));
        }
        Ok(Self(m))
    }

    pub fn maximally_mixed() -> Self {
        Self(Mat4::identity() * c(0.25))
    }

    /// Projector onto a computational basis state, `index` in `0..4`.
    pub fn basis(index: usize) -> Self {
        let mut m = Mat4::zeros();
        m[(index, index)] = c(1.0);
        Self(m)
    }

    /// `|ψ⁻⟩⟨ψ⁻|` with `|ψ⁻⟩ = (|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> Self {
        let mut m = Mat4::zeros();
        m[(1, 1)] = c(0.5);
        m[(2, 2)] = c(0.5);
        m[(1, 2)] = c(-0.5);
        m[(2, 1)] = c(-0.5);
        Self(m)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    pub fn eigenvalues(&self) -> Vector4<f64> {
        eigenvalues(&self.0)
    }

    /// `Tr[ρ A]`.
    pub fn expectation(&self, op: &Mat4) -> C64 {
        (self.0 * op).trace()
    }

    pub fn trace_distance(&self, other: &DensityMatrix4) -> f64 {
        trace_distance(&self.0, &other.0)
    }
}

/// Equilibrium state in X-form: `diag(η₋, η₂₂, η₂₂, η₊)` with inner
/// off-diagonal `η₂₃`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XState {
    pub eta_minus: f64,
    pub eta_plus: f64,
    pub eta_22: f64,
    pub eta_23: f64,
}

impl XState {
    pub fn matrix(&self) -> Mat4 {
        let mut m = Mat4::zeros();
        m[(0, 0)] = c(self.eta_minus);
        m[(1, 1)] = c(self.eta_22);
        m[(2, 2)] = c(self.eta_22);
        m[(1, 2)] = c(self.eta_23);
        m[(2, 1)] = c(self.eta_23);
        m[(3, 3)] = c(self.eta_plus);
        m
    }

    pub fn density(&self) -> Result<DensityMatrix4> {
        DensityMatrix4::new(self.matrix())
    }

    pub fn trace(&self) -> f64 {
        self.eta_minus + self.eta_plus + 2.0 * self.eta_22
    }
}

/// Eigenvector labels, in the order the eigenvalues are reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eigenvector {
    /// `|00⟩`
    Up,
    /// `|11⟩`
    Down,
    /// `(|01⟩ + |10⟩)/√2`
    Symmetric,
    /// `(|01⟩ − |10⟩)/√2`
    Antisymmetric,
}

impl Eigenvector {
    pub const ALL: [Eigenvector; 4] = [
        Eigenvector::Up,
        Eigenvector::Down,
        Eigenvector::Symmetric,
        Eigenvector::Antisymmetric,
    ];

    pub fn amplitudes(self) -> Vector4<C64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Eigenvector::Up => Vector4::new(c(1.0), c(0.0), c(0.0), c(0.0)),
            Eigenvector::Down => Vector4::new(c(0.0), c(0.0), c(0.0), c(1.0)),
            Eigenvector::Symmetric => Vector4::new(c(0.0), c(h), c(h), c(0.0)),
            Eigenvector::Antisymmetric => Vector4::new(c(0.0), c(h), c(-h), c(0.0)),
        }
    }
}

/// Eigenvalues `μ₁..μ₄` paired with the fixed eigenbasis [`Eigenvector::ALL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDecomp {
    pub mu: [f64; 4],
}

impl SpectralDecomp {
    pub fn eigvecs(&self) -> [Eigenvector; 4] {
        Eigenvector::ALL
    }

    pub fn sum(&self) -> f64 {
        self.mu.iter().sum()
    }

    /// `Σ μᵢ |ψᵢ⟩⟨ψᵢ|`.
    pub fn reconstruct(&self) -> Mat4 {
        self.mu
            .iter()
            .zip(Eigenvector::ALL)
            .fold(Mat4::zeros(), |acc, (m, v)| {
                let a = v.amplitudes();
                acc + a * a.adjoint() * c(*m)
            })
    }
}
