//! Parametrized state families `x -> rho(x)` and the two-level building blocks
//! (Bloch vectors, d-vectors, thermal and ground states).

mod config;
mod models;

pub use config::{Atom, CustomModel, CustomTarget, ModelConfig, Term};
pub use models::{
    build_family, BlochFamily, CanonicalFamily, DensityFamily, GroundStateFamily, KetChart,
    KetFamily, SpinFamily,
};

use nalgebra::DVector as NaVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{pauli, validate_density, ComplexMatrix, DensityMatrix};

pub type Ket = NaVector<Complex64>;

/// Bloch vectors may exceed unit length by this much before they are rejected;
/// anything in between is rescaled onto the sphere.
pub const BLOCH_REJECT_TOL: f64 = 1e-9;
/// Smallest `|d|` for which a direction `d/|d|` is formed.
pub const GAP_MIN: f64 = 1e-12;
/// The north-chart ket is refused when `n3 >= 1 - POLE_TOL`.
pub const POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub fn norm(&self) -> f64 {
        dot3(&self.0, &self.0).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        dot3(&self.0, &other.0)
    }
}

/// Coefficient vector of a two-level Hamiltonian `H = d . sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DVec(pub [f64; 3]);

impl DVec {
    pub fn magnitude(&self) -> f64 {
        dot3(&self.0, &self.0).sqrt()
    }

    /// Unit direction `n = d / |d|`.
    pub fn direction(&self) -> Result<[f64; 3]> {
        let d = self.magnitude();
        if !(d > GAP_MIN) {
            return Err(Error::GapClosure { d });
        }
        Ok(self.0.map(|c| c / d))
    }

    pub fn hamiltonian(&self) -> ComplexMatrix {
        let [_, sx, sy, sz] = pauli();
        sx.scale(self.0[0]) + sy.scale(self.0[1]) + sz.scale(self.0[2])
    }
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Which optional evaluators a family provides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Capabilities {
    pub bloch: bool,
    pub ket: bool,
    pub dvec: bool,
    /// Kets are real-valued (classical information-geometry limit).
    pub real_ket: bool,
    /// Ket phases come from a closed-form smooth gauge rather than per-point fixing.
    pub analytic_gauge: bool,
}

/// A map from a `D`-dimensional parameter point to a density matrix, with
/// optional Bloch, ket and d-vector fast paths.
///
/// Implementations must be pure: the same `x` always yields the same state.
pub trait StateFamily: Send + Sync {
    /// Hilbert-space dimension.
    fn dim(&self) -> usize;
    fn param_dim(&self) -> usize;
    fn capabilities(&self) -> Capabilities;
    fn rho(&self, x: &[f64]) -> Result<DensityMatrix>;

    fn bloch(&self, _x: &[f64]) -> Result<BlochVector> {
        Err(Error::MissingPath("bloch"))
    }
    fn ket(&self, _x: &[f64]) -> Result<Ket> {
        Err(Error::MissingPath("ket"))
    }
    fn dvec(&self, _x: &[f64]) -> Result<DVec> {
        Err(Error::MissingPath("dvec"))
    }

    fn is_pure(&self) -> bool {
        self.capabilities().ket
    }
}

impl<F: StateFamily + ?Sized> StateFamily for Box<F> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn param_dim(&self) -> usize {
        (**self).param_dim()
    }
    fn capabilities(&self) -> Capabilities {
        (**self).capabilities()
    }
    fn rho(&self, x: &[f64]) -> Result<DensityMatrix> {
        (**self).rho(x)
    }
    fn bloch(&self, x: &[f64]) -> Result<BlochVector> {
        (**self).bloch(x)
    }
    fn ket(&self, x: &[f64]) -> Result<Ket> {
        (**self).ket(x)
    }
    fn dvec(&self, x: &[f64]) -> Result<DVec> {
        (**self).dvec(x)
    }
}

pub fn check_point(x: &[f64], param_dim: usize) -> Result<()> {
    if x.len() != param_dim {
        return Err(Error::InvalidPoint(format!(
            "expected {param_dim} coordinates, got {}",
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidPoint(format!("non-finite coordinate in {x:?}")));
    }
    Ok(())
}

/// `rho = (sigma_0 + r . sigma) / 2`.
pub fn rho_from_bloch(r: &BlochVector) -> Result<DensityMatrix> {
    let r = clamp_bloch(r)?;
    let [s0, sx, sy, sz] = pauli();
    let m = (s0 + sx.scale(r.0[0]) + sy.scale(r.0[1]) + sz.scale(r.0[2])).scale(0.5);
    validate_density(&m)
}

pub(crate) fn clamp_bloch(r: &BlochVector) -> Result<BlochVector> {
    if r.0.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = r.norm();
    if norm > 1.0 + BLOCH_REJECT_TOL {
        return Err(Error::BlochOutOfBall { norm });
    }
    if norm > 1.0 {
        return Ok(BlochVector(r.0.map(|c| c / norm)));
    }
    Ok(*r)
}

/// Inverse of [`rho_from_bloch`]: `r_i = Tr(rho sigma_i)`.
pub fn bloch_from_rho(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: rho.dim(),
        });
    }
    let [_, sx, sy, sz] = pauli();
    let m = rho.matrix();
    let comp = |s: &ComplexMatrix| (m * s).trace().re;
    Ok(BlochVector([comp(&sx), comp(&sy), comp(&sz)]))
}

/// Thermal state of `H = d . sigma` at inverse temperature `beta`:
/// `r = -(d/|d|) tanh(beta |d|)`.
pub fn canonical_bloch(d: &DVec, beta: f64) -> Result<BlochVector> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::ConfigInvalid {
            field: "beta".into(),
            reason: format!("must be positive and finite, got {beta}"),
        });
    }
    let n = d.direction()?;
    let len = (beta * d.magnitude()).tanh();
    Ok(BlochVector(n.map(|c| -c * len)))
}

/// SSH chain with `t = 1`: `d = ((1 + dt) + (1 - dt) cos k, (1 - dt) sin k, 0)`.
pub fn ssh_dvector(k: f64, delta_t: f64) -> Result<DVec> {
    let d = DVec([
        (1.0 + delta_t) + (1.0 - delta_t) * k.cos(),
        (1.0 - delta_t) * k.sin(),
        0.0,
    ]);
    let mag = d.magnitude();
    if !(mag >= GAP_MIN) {
        return Err(Error::GapClosure { d: mag });
    }
    Ok(d)
}

/// Lower eigenstate of `d . sigma` in the chart regular away from the north pole:
/// `psi = (n3 - 1, n1 + i n2) / sqrt(2 (1 - n3))`.
pub fn dirac_ground_ket(d: &DVec) -> Result<Ket> {
    let n = d.direction()?;
    if n[2] >= 1.0 - POLE_TOL {
        return Err(Error::GaugePole { n3: n[2] });
    }
    let norm = (2.0 * (1.0 - n[2])).sqrt();
    Ok(Ket::from_vec(vec![
        Complex64::new((n[2] - 1.0) / norm, 0.0),
        Complex64::new(n[0] / norm, n[1] / norm),
    ]))
}

/// Lower eigenstate of `d . sigma` in the complementary chart, regular away from
/// the south pole: `psi = (-(n1 - i n2), 1 + n3) / sqrt(2 (1 + n3))`.
pub fn dirac_ground_ket_south(d: &DVec) -> Result<Ket> {
    let n = d.direction()?;
    if n[2] <= -1.0 + POLE_TOL {
        return Err(Error::GaugePole { n3: n[2] });
    }
    let norm = (2.0 * (1.0 + n[2])).sqrt();
    Ok(Ket::from_vec(vec![
        Complex64::new(-n[0] / norm, n[1] / norm),
        Complex64::new((1.0 + n[2]) / norm, 0.0),
    ]))
}

/// Spin-1/2 in a field along z at temperature `T`, with `b = mu_B B / k_B T`.
pub fn spin_bloch(b: f64) -> BlochVector {
    BlochVector([0.0, 0.0, b.tanh()])
}
