//! Dense complex matrix kernels: Hermitian eigendecomposition, PSD square roots
//! and density-matrix validation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Allowed anti-Hermitian part of an eigensolver input, relative to `max(1, max|H_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues down to `-PSD_CLAMP_TOL` are rounded up to zero before the square root.
pub const PSD_CLAMP_TOL: f64 = 1e-10;
/// Smallest admissible `|t|` in the closed-form 2x2 square root.
pub const SQRT2X2_T_MIN: f64 = 1e-12;

// Eigenvalues below this multiple of eps * max|lambda| are below solver resolution
// and are treated as exact zeros (keeps sqrt from turning 1e-17 noise into 3e-9).
const EIG_NOISE_FACTOR: f64 = 64.0;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }

    /// Applies `f` to the spectrum: `V diag(f(lambda)) V^dagger`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &l) in self.values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(f(l));
        }
        &scaled * self.vectors.adjoint()
    }
}

/// Largest entry magnitude of `H - H^dagger`.
pub fn hermitian_asymmetry(h: &ComplexMatrix) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `(H + H^dagger) / 2`.
pub fn hermitian_part(h: &ComplexMatrix) -> ComplexMatrix {
    (h + h.adjoint()).scale(0.5)
}

fn check_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            left: m.nrows(),
            right: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::WrongDimension {
            expected: 1,
            found: 0,
        });
    }
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianEigen> {
    eig_hermitian_with(h, HERMITIAN_TOL)
}

pub fn eig_hermitian_with(h: &ComplexMatrix, hermitian_tol: f64) -> Result<HermitianEigen> {
    check_square(h)?;
    let asymmetry = hermitian_asymmetry(h);
    if asymmetry > hermitian_tol * max_abs(h).max(1.0) {
        return Err(Error::NonHermitianInput { asymmetry });
    }
    let sym = hermitian_part(h);
    let n = sym.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or(Error::ConvergenceFailure)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    if values.iter().any(|v| !v.is_finite()) || !is_finite(&vectors) {
        return Err(Error::ConvergenceFailure);
    }
    Ok(HermitianEigen { values, vectors })
}

fn eigen_noise_floor(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    EIG_NOISE_FACTOR * f64::EPSILON * scale
}

/// Spectral square root of a Hermitian positive-semidefinite matrix.
pub fn sqrt_psd(m: &ComplexMatrix, clamp_tol: f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    sqrt_from_eigen(&eig, clamp_tol)
}

pub fn sqrt_from_eigen(eig: &HermitianEigen, clamp_tol: f64) -> Result<ComplexMatrix> {
    let min = eig.values[0];
    if min < -clamp_tol {
        return Err(Error::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    let floor = eigen_noise_floor(&eig.values);
    Ok(eig.map_spectrum(|l| if l <= floor { 0.0 } else { l.sqrt() }))
}

/// Closed-form square root of a 2x2 matrix, taking the principal (positive) branch
/// of both `s = sqrt(AD - BC)` and `t = sqrt(A + D + 2s)`.
pub fn sqrt_2x2(m: &ComplexMatrix, t_min: f64) -> Result<ComplexMatrix> {
    if m.nrows() != 2 || m.ncols() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: m.nrows(),
        });
    }
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let s = (a * d - b * c).sqrt();
    let t = (a + d + s * 2.0).sqrt();
    if t.norm() <= t_min {
        return Err(Error::DegenerateBranch { t_abs: t.norm() });
    }
    let root = ComplexMatrix::from_row_slice(2, 2, &[a + s, b, c, d + s]) / t;
    if !is_finite(&root) {
        return Err(Error::NonFinite);
    }
    Ok(root)
}

/// Thresholds for [`validate_density_with`].
#[derive(Debug, Clone, Copy)]
pub struct DensityTolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub negative_eigenvalue: f64,
}

impl Default for DensityTolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-12,
            trace: 1e-12,
            negative_eigenvalue: 1e-10,
        }
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        eig_hermitian(&self.mat)
    }

    /// `|psi><psi|` for a normalized ket.
    pub fn from_ket(psi: &DVector<Complex64>) -> Result<Self> {
        validate_density(&(psi * psi.adjoint()))
    }
}

pub fn validate_density(m: &ComplexMatrix) -> Result<DensityMatrix> {
    validate_density_with(m, DensityTolerances::default())
}

pub fn validate_density_with(m: &ComplexMatrix, tol: DensityTolerances) -> Result<DensityMatrix> {
    check_square(m)?;
    let asymmetry = hermitian_asymmetry(m);
    if asymmetry > tol.hermitian {
        return Err(Error::NotHermitian { asymmetry });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > tol.trace {
        return Err(Error::TraceNotOne { trace });
    }
    let mat = hermitian_part(m);
    let eig = eig_hermitian(&mat)?;
    if eig.values[0] < -tol.negative_eigenvalue {
        return Err(Error::NegativeEigenvalue {
            eigenvalue: eig.values[0],
        });
    }
    Ok(DensityMatrix { mat })
}

/// Pauli matrices `[sigma_0, sigma_x, sigma_y, sigma_z]`.
pub fn pauli() -> [ComplexMatrix; 4] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        ComplexMatrix::from_row_slice(2, 2, &[l, o, o, l]),
        ComplexMatrix::from_row_slice(2, 2, &[o, l, l, o]),
        ComplexMatrix::from_row_slice(2, 2, &[o, -i, i, o]),
        ComplexMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
    ]
}

pub fn real_diag(values: &[f64]) -> ComplexMatrix {
    let v = DVector::from_iterator(values.len(), values.iter().map(|&x| Complex64::new(x, 0.0)));
    ComplexMatrix::from_diagonal(&v)
}
