//! Qutrit states, the two-level rotation gates, and the spin-1 observables.
//!
//! Vectors are always expressed in the energy basis `(|0⟩, |1⟩, |2⟩)`, with
//! the spin-1 states mapped as `|z,0⟩ → |0⟩`, `|z,+1⟩ → |1⟩`, `|z,−1⟩ → |2⟩`.
//! With that ordering `Sz = diag(0, 1, −1)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, SQRT_2};
use std::ops::Mul;

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for every exactness check in this module.
pub const TOLERANCE: f64 = 1e-12;

/// A single complex amplitude.
pub type ComplexAmp = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("amplitude {index} is not finite")]
    NonFinite { index: usize },
    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("matrix is not unitary: max |U†U - I| entry {defect:e}")]
    NotUnitary { defect: f64 },
    #[error("basis is not orthonormal: max |⟨b_i|b_j⟩ - δ_ij| = {defect:e}")]
    NotOrthonormal { defect: f64 },
}

/// Normalized pure state of a qutrit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritState([Complex64; 3]);

impl QutritState {
    pub fn new(amps: [Complex64; 3]) -> Result<Self, SpinError> {
        if let Some(index) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(SpinError::NonFinite { index });
        }
        let state = QutritState(amps);
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(SpinError::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    pub fn from_real(amps: [f64; 3]) -> Result<Self, SpinError> {
        Self::new(amps.map(|x| Complex64::new(x, 0.0)))
    }

    /// Energy eigenstate `|level⟩`.
    ///
    /// # Panics
    /// If `level > 2`.
    pub fn basis(level: usize) -> Self {
        assert!(level < 3, "qutrit level {level} out of range");
        let mut amps = [ZERO; 3];
        amps[level] = ONE;
        QutritState(amps)
    }

    pub fn ground() -> Self {
        Self::basis(0)
    }

    pub fn amplitudes(&self) -> &[Complex64; 3] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &QutritState) -> Complex64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Populations of `|0⟩, |1⟩, |2⟩`, i.e. Born probabilities of a
    /// projective measurement in the energy basis.
    pub fn level_probabilities(&self) -> [f64; 3] {
        self.0.map(|a| a.norm_sqr())
    }
}

/// The energy basis `(|0⟩, |1⟩, |2⟩)`.
pub fn computational_basis() -> [QutritState; 3] {
    [QutritState::basis(0), QutritState::basis(1), QutritState::basis(2)]
}

/// Dense 3×3 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix3(pub [[Complex64; 3]; 3]);

impl Matrix3 {
    pub fn identity() -> Self {
        let mut m = [[ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Matrix3(m)
    }

    pub fn from_real(rows: [[f64; 3]; 3]) -> Self {
        Matrix3(rows.map(|r| r.map(|x| Complex64::new(x, 0.0))))
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.0[j][i].conj();
            }
        }
        Matrix3(m)
    }

    pub fn mul_vec(&self, v: &[Complex64; 3]) -> [Complex64; 3] {
        let mut out = [ZERO; 3];
        for (o, row) in out.iter_mut().zip(self.0.iter()) {
            *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        out
    }

    pub fn determinant(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix3) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.max_abs_diff(&self.adjoint()) <= TOLERANCE
    }
}

impl Mul for Matrix3 {
    type Output = Matrix3;

    fn mul(self, rhs: Matrix3) -> Matrix3 {
        let mut m = [[ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..3).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Matrix3(m)
    }
}

/// A 3×3 unitary acting on [`QutritState`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary3(Matrix3);

impl Unitary3 {
    pub fn identity() -> Self {
        Unitary3(Matrix3::identity())
    }

    /// Checked constructor: rejects matrices whose `U†U` deviates from the
    /// identity by more than [`TOLERANCE`] in any entry.
    pub fn new(matrix: Matrix3) -> Result<Self, SpinError> {
        let defect = unitarity_defect(&matrix);
        if defect > TOLERANCE || !defect.is_finite() {
            return Err(SpinError::NotUnitary { defect });
        }
        Ok(Unitary3(matrix))
    }

    pub fn matrix(&self) -> &Matrix3 {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Unitary3(self.0.adjoint())
    }

    /// Max entry of `|U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.0)
    }

    pub fn apply(&self, state: &QutritState) -> QutritState {
        QutritState(self.0.mul_vec(&state.0))
    }
}

impl Mul for Unitary3 {
    type Output = Unitary3;

    fn mul(self, rhs: Unitary3) -> Unitary3 {
        Unitary3(self.0 * rhs.0)
    }
}

fn unitarity_defect(m: &Matrix3) -> f64 {
    (m.adjoint() * *m).max_abs_diff(&Matrix3::identity())
}

/// The two-level subspace a rotation acts in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    /// `{|0⟩, |1⟩}`
    Levels01,
    /// `{|1⟩, |2⟩}`
    Levels12,
}

/// Y-rotation by `theta` in the given two-level subspace.
///
/// The embedded 2×2 block is `[[cos θ/2, sin θ/2], [−sin θ/2, cos θ/2]]`;
/// the spectator level is left untouched.
pub fn rotation(subspace: Subspace, theta: f64) -> Unitary3 {
    let (s, c) = (theta / 2.0).sin_cos();
    let rows = match subspace {
        Subspace::Levels01 => [[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]],
        Subspace::Levels12 => [[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]],
    };
    Unitary3(Matrix3::from_real(rows))
}

/// `R01(θ01) · R12(θ12)`, the pre-readout rotation with freely chosen angles.
pub fn rotation_pair(theta01: f64, theta12: f64) -> Unitary3 {
    rotation(Subspace::Levels01, theta01) * rotation(Subspace::Levels12, theta12)
}

/// `M† = R01(π/2) · R12(π/2)`.
///
/// Maps the `Sx` eigenbasis onto the energy basis:
/// `|x,+1⟩ → |0⟩`, `|x,−1⟩ → |1⟩`, `|x,0⟩ → |2⟩`.
pub fn measurement_unitary() -> Unitary3 {
    rotation_pair(FRAC_PI_2, FRAC_PI_2)
}

pub fn apply_unitary(u: &Unitary3, s: &QutritState) -> QutritState {
    u.apply(s)
}

/// A Hermitian spin-1 observable with its eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinObservable {
    pub matrix: Matrix3,
    /// Ascending: `(−1, 0, +1)`.
    pub eigenvalues: [f64; 3],
    /// `eigenbasis[k]` belongs to `eigenvalues[k]`.
    pub eigenbasis: [QutritState; 3],
}

impl SpinObservable {
    /// Largest residual `|A v_k − λ_k v_k|` over the stored eigenpairs.
    pub fn eigen_residual(&self) -> f64 {
        self.eigenvalues
            .iter()
            .zip(self.eigenbasis.iter())
            .map(|(&lambda, v)| {
                let av = self.matrix.mul_vec(v.amplitudes());
                av.iter()
                    .zip(v.amplitudes().iter())
                    .map(|(x, y)| (x - y * lambda).norm())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// `Sx` eigenstates `(|x,−1⟩, |x,0⟩, |x,+1⟩)`.
pub fn sx_eigenbasis() -> [QutritState; 3] {
    let h = FRAC_1_SQRT_2;
    [
        QutritState::from_real([-SQRT_2 / 2.0, 0.5, 0.5]),
        QutritState::from_real([0.0, -h, h]),
        QutritState::from_real([SQRT_2 / 2.0, 0.5, 0.5]),
    ]
    .map(|s| s.expect("Sx eigenvectors are normalized"))
}

/// `(Sz, Sx)` in the energy basis.
pub fn spin_operators() -> (SpinObservable, SpinObservable) {
    let sz = SpinObservable {
        matrix: Matrix3::from_real([[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]),
        eigenvalues: [-1.0, 0.0, 1.0],
        eigenbasis: [QutritState::basis(2), QutritState::basis(0), QutritState::basis(1)],
    };
    let h = FRAC_1_SQRT_2;
    let sx = SpinObservable {
        matrix: Matrix3::from_real([[0.0, h, h], [h, 0.0, 0.0], [h, 0.0, 0.0]]),
        eigenvalues: [-1.0, 0.0, 1.0],
        eigenbasis: sx_eigenbasis(),
    };
    (sz, sx)
}

/// Max deviation of the Gram matrix of `basis` from the identity.
pub fn orthonormality_defect(basis: &[QutritState; 3]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, bi) in basis.iter().enumerate() {
        for (j, bj) in basis.iter().enumerate() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((bi.inner(bj) - target).norm());
        }
    }
    worst
}

/// `p_k = |⟨basis_k|s⟩|²`.
pub fn born_probabilities(s: &QutritState, basis: &[QutritState; 3]) -> Result<[f64; 3], SpinError> {
    let defect = orthonormality_defect(basis);
    if defect > TOLERANCE || !defect.is_finite() {
        return Err(SpinError::NotOrthonormal { defect });
    }
    Ok(basis.each_ref().map(|b| b.inner(s).norm_sqr().min(1.0)))
}

/// `|⟨psi|phi⟩|`, clamped to `[0, 1]` against roundoff.
pub fn overlap(psi: &QutritState, phi: &QutritState) -> f64 {
    psi.inner(phi).norm().min(1.0)
}
