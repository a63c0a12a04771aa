//! Two-point generating functions: Uhlmann fidelity, pure-state overlap
//! (modulus and phase) and the classical divergence between probability vectors.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{sqrt_psd, DensityMatrix, PSD_CLAMP_TOL};
use crate::states::{dot3, BlochVector, Ket, StateFamily, BLOCH_REJECT_TOL, POLE_TOL};

/// Fidelities above `1 + FIDELITY_OVERSHOOT_TOL` are reported as errors rather than clamped.
pub const FIDELITY_OVERSHOOT_TOL: f64 = 1e-9;
pub const NORMALIZATION_TOL: f64 = 1e-10;
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

fn finish_fidelity(value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::NonFinite);
    }
    if value > 1.0 + FIDELITY_OVERSHOOT_TOL {
        return Err(Error::FidelityOvershoot { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// `Tr sqrt(sqrt(rho) rho' sqrt(rho))`.
///
/// Evaluated as the trace norm of `sqrt(rho) sqrt(rho')`, whose singular values are
/// the square roots of the eigenvalues of `sqrt(rho) rho' sqrt(rho)`. This avoids a
/// second square root of eigenvalues that sit at rounding level.
pub fn uhlmann_fidelity(rho: &DensityMatrix, rho_prime: &DensityMatrix) -> Result<f64> {
    if rho.dim() != rho_prime.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: rho_prime.dim(),
        });
    }
    let a = sqrt_psd(rho.matrix(), PSD_CLAMP_TOL)?;
    let b = sqrt_psd(rho_prime.matrix(), PSD_CLAMP_TOL)?;
    let product = a * b;
    let trace_norm: f64 = product
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or(Error::ConvergenceFailure)?
        .singular_values
        .iter()
        .sum();
    finish_fidelity(trace_norm)
}

fn check_bloch(r: &BlochVector) -> Result<f64> {
    let norm = r.norm();
    if !norm.is_finite() {
        return Err(Error::NonFinite);
    }
    if norm > 1.0 + BLOCH_REJECT_TOL {
        return Err(Error::BlochOutOfBall { norm });
    }
    Ok(norm.min(1.0))
}

/// Qubit fidelity in Bloch form, positive branch:
/// `[ (1 + r.r')/2 + sqrt(1-|r|^2) sqrt(1-|r'|^2) / 2 ]^(1/2)`.
pub fn fidelity_2x2_closed(r: &BlochVector, r_prime: &BlochVector) -> Result<f64> {
    let a = check_bloch(r)?;
    let b = check_bloch(r_prime)?;
    let mixed = ((1.0 - a * a).max(0.0)).sqrt() * ((1.0 - b * b).max(0.0)).sqrt();
    let inner = 0.5 * (1.0 + r.dot(r_prime)) + 0.5 * mixed;
    finish_fidelity(inner.max(0.0).sqrt())
}

/// `<psi'|psi>` split into modulus and phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap {
    pub c: Complex64,
}

impl Overlap {
    pub fn modulus(&self) -> f64 {
        self.c.norm()
    }

    /// Phase in `(-pi, pi]`; zero for a vanishing overlap.
    pub fn phase(&self) -> f64 {
        if self.c.norm() == 0.0 {
            return 0.0;
        }
        let p = self.c.arg();
        if p <= -PI {
            p + 2.0 * PI
        } else {
            p
        }
    }
}

fn check_normalized(psi: &Ket) -> Result<()> {
    let norm = psi.norm();
    if !norm.is_finite() {
        return Err(Error::NonFinite);
    }
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// `C(x, x') = <psi(x')|psi(x)>`; the bra is the first argument.
pub fn pure_overlap(psi_prime: &Ket, psi: &Ket) -> Result<Overlap> {
    if psi.len() != psi_prime.len() {
        return Err(Error::DimensionMismatch {
            left: psi_prime.len(),
            right: psi.len(),
        });
    }
    check_normalized(psi)?;
    check_normalized(psi_prime)?;
    Ok(Overlap {
        c: psi_prime.dotc(psi),
    })
}

/// Closed forms of the overlap between lower-band kets of two-level Hamiltonians,
/// written in the unit vectors `n = d/|d|` (north chart).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracOverlap {
    pub modulus: f64,
    /// `-2 phi(x', x)`
    pub neg2phase: f64,
    /// `-2 Im <psi'|psi>`
    pub neg2im: f64,
}

fn check_unit(n: &[f64; 3]) -> Result<()> {
    let norm = dot3(n, n).sqrt();
    if !norm.is_finite() {
        return Err(Error::NonFinite);
    }
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

pub fn dirac_overlap_closed(n: &[f64; 3], n_prime: &[f64; 3]) -> Result<DiracOverlap> {
    check_unit(n)?;
    check_unit(n_prime)?;
    for m in [n, n_prime] {
        if m[2] >= 1.0 - POLE_TOL {
            return Err(Error::GaugePole { n3: m[2] });
        }
    }
    let dot = dot3(n, n_prime);
    let modulus = (0.5 * (1.0 + dot)).max(0.0).sqrt();
    let num = n_prime[0] * n[1] - n_prime[1] * n[0];
    let den = 1.0 - n[2] - n_prime[2] + dot;
    // atan2 keeps the branch when the real part turns negative
    let neg2phase = -2.0 * num.atan2(den);
    let neg2im = (n_prime[1] * n[0] - n_prime[0] * n[1])
        / ((1.0 - n_prime[2]).sqrt() * (1.0 - n[2]).sqrt());
    Ok(DiracOverlap {
        modulus: modulus.min(1.0),
        neg2phase,
        neg2im,
    })
}

/// A probability mass function.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidProbability("empty".into()));
        }
        if let Some(v) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidProbability(format!("entry {v} is not a probability")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::InvalidProbability(format!("sums to {sum}")));
        }
        Ok(Self(p))
    }

    /// `p_i = |psi_i|^2`.
    pub fn from_ket(psi: &Ket) -> Result<Self> {
        Self::new(psi.iter().map(|z| z.norm_sqr()).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// `sum_i sqrt(p_i p'_i)`.
pub fn classical_divergence(p: &ProbVector, p_prime: &ProbVector) -> Result<f64> {
    if p.0.len() != p_prime.0.len() {
        return Err(Error::DimensionMismatch {
            left: p.0.len(),
            right: p_prime.0.len(),
        });
    }
    let value: f64 = p.0.iter().zip(&p_prime.0).map(|(a, b)| (a * b).sqrt()).sum();
    finish_fidelity(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenFunKind {
    Fidelity,
    LogFidelity,
    OverlapModulus,
    OverlapLogModulus,
    OverlapPhase,
    OverlapNeg2im,
    Divergence,
    LogDivergence,
}

impl GenFunKind {
    pub fn name(self) -> &'static str {
        match self {
            GenFunKind::Fidelity => "fidelity",
            GenFunKind::LogFidelity => "log_fidelity",
            GenFunKind::OverlapModulus => "overlap_modulus",
            GenFunKind::OverlapLogModulus => "overlap_log_modulus",
            GenFunKind::OverlapPhase => "overlap_phase",
            GenFunKind::OverlapNeg2im => "overlap_neg2im",
            GenFunKind::Divergence => "divergence",
            GenFunKind::LogDivergence => "log_divergence",
        }
    }
}

/// Which oracle [`genfun_eval`] uses for the fidelity of this family.
pub fn fidelity_oracle(family: &dyn StateFamily) -> &'static str {
    let caps = family.capabilities();
    if caps.bloch {
        "closed_form"
    } else if caps.ket {
        "overlap"
    } else {
        "spectral"
    }
}

fn ln(value: f64) -> Result<f64> {
    if value <= 0.0 {
        return Err(Error::DomainError);
    }
    Ok(value.ln())
}

/// Evaluates a generating function at the point pair `(x, x')`. Overlap kinds use
/// `<psi(x')|psi(x)>`.
pub fn genfun_eval(
    family: &dyn StateFamily,
    x: &[f64],
    x_prime: &[f64],
    kind: GenFunKind,
) -> Result<f64> {
    let caps = family.capabilities();
    let overlap = || -> Result<Overlap> {
        if !caps.ket {
            return Err(Error::UnsupportedKind(kind.name()));
        }
        pure_overlap(&family.ket(x_prime)?, &family.ket(x)?)
    };
    let divergence = || -> Result<f64> {
        if !(caps.ket && caps.real_ket) {
            return Err(Error::UnsupportedKind(kind.name()));
        }
        let p = ProbVector::from_ket(&family.ket(x)?)?;
        let q = ProbVector::from_ket(&family.ket(x_prime)?)?;
        classical_divergence(&p, &q)
    };
    let fidelity = || -> Result<f64> {
        if caps.bloch {
            fidelity_2x2_closed(&family.bloch(x)?, &family.bloch(x_prime)?)
        } else if caps.ket {
            finish_fidelity(overlap()?.modulus())
        } else {
            uhlmann_fidelity(&family.rho(x)?, &family.rho(x_prime)?)
        }
    };
    match kind {
        GenFunKind::Fidelity => fidelity(),
        GenFunKind::LogFidelity => ln(fidelity()?),
        GenFunKind::OverlapModulus => Ok(overlap()?.modulus()),
        GenFunKind::OverlapLogModulus => ln(overlap()?.modulus()),
        GenFunKind::OverlapPhase => Ok(overlap()?.phase()),
        GenFunKind::OverlapNeg2im => Ok(-2.0 * overlap()?.c.im),
        GenFunKind::Divergence => divergence(),
        GenFunKind::LogDivergence => ln(divergence()?),
    }
}

/// Normalized complex ket from amplitudes, mainly for tests and examples.
pub fn ket(amplitudes: &[Complex64]) -> Ket {
    DVector::from_column_slice(amplitudes)
}
