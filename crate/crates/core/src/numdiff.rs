//! Generating-function route. Geometry is read off mixed derivatives of a
//! two-slot scalar `f(x, x')` taken on independent stencils per slot and
//! evaluated at coincidence `x = x'`.
//!
//! Slot 1 carries the unprimed indices, slot 2 the primed ones. Each index adds a
//! `+-h` shift along its direction in its own slot; a direction repeated within a
//! slot yields the `2h`-wide central stencil for that order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::{genfun_eval, pure_overlap, GenFunKind};
use crate::geometry::{Christoffel, GeometryReport, Method, RealMatrix};
use crate::states::{check_point, StateFamily};

pub const STEP_MIN: f64 = 1e-6;
pub const STEP_MAX: f64 = 1e-1;
/// Smallest overlap modulus accepted on a Berry-phase stencil.
pub const PHASE_MODULUS_MIN: f64 = 0.1;
pub const PHASE_SHRINKS: usize = 4;
pub const RAY_HALF_WIDTH: f64 = 0.04;
pub const RAY_POINTS: usize = 9;
pub const RAY_DEGREE: usize = 6;
const FIT_CONDITION_MAX: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StencilConfig {
    /// Step for second-order mixed partials.
    pub h2: f64,
    /// Step for third-order partials.
    pub h3: f64,
    /// Combine `h` and `h/2` as `(4 D(h/2) - D(h)) / 3`.
    pub richardson: bool,
}

impl Default for StencilConfig {
    fn default() -> Self {
        Self {
            h2: 1e-3,
            h3: 1e-2,
            richardson: true,
        }
    }
}

impl StencilConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, h) in [("h2", self.h2), ("h3", self.h3)] {
            if !(STEP_MIN..=STEP_MAX).contains(&h) {
                return Err(Error::InvalidStencil(format!(
                    "{name} = {h} outside [{STEP_MIN:e}, {STEP_MAX:e}]"
                )));
            }
        }
        Ok(())
    }
}

/// `f(x, x')` with `x` in slot 1 and `x'` in slot 2.
pub type TwoSlot<'a> = dyn Fn(&[f64], &[f64]) -> Result<f64> + 'a;

fn wrap(x: Vec<f64>, x_prime: Vec<f64>, e: Error) -> Error {
    match e {
        e @ Error::OracleFailure { .. } => e,
        e => Error::OracleFailure {
            x,
            x_prime,
            source: Box::new(e),
        },
    }
}

/// Central-difference estimate of `d_{primed'} d_{unprimed} f` at `x = x'` with step `h`.
pub fn partial(gf: &TwoSlot, x: &[f64], primed: &[usize], unprimed: &[usize], h: f64) -> Result<f64> {
    let order = primed.len() + unprimed.len();
    let mut sum = 0.0;
    for mask in 0..(1u32 << order) {
        let mut a = x.to_vec();
        let mut b = x.to_vec();
        let mut sign = 1.0;
        for (k, &dir) in unprimed.iter().chain(primed).enumerate() {
            let s = if mask >> k & 1 == 0 { 1.0 } else { -1.0 };
            sign *= s;
            if k < unprimed.len() {
                a[dir] += s * h;
            } else {
                b[dir] += s * h;
            }
        }
        let v = gf(&a, &b).map_err(|e| wrap(a.clone(), b.clone(), e))?;
        sum += sign * v;
    }
    Ok(sum / (2.0 * h).powi(order as i32))
}

fn extrapolated(
    gf: &TwoSlot,
    x: &[f64],
    primed: &[usize],
    unprimed: &[usize],
    h: f64,
    richardson: bool,
) -> Result<f64> {
    let coarse = partial(gf, x, primed, unprimed, h)?;
    if !richardson {
        return Ok(coarse);
    }
    let fine = partial(gf, x, primed, unprimed, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// `d_{mu'} d_nu f` at coincidence: `[f(+,+) - f(+,-) - f(-,+) + f(-,-)] / 4h^2`.
pub fn mixed_second(gf: &TwoSlot, x: &[f64], mu: usize, nu: usize, cfg: &StencilConfig) -> Result<f64> {
    cfg.validate()?;
    extrapolated(gf, x, &[mu], &[nu], cfg.h2, cfg.richardson)
}

fn genfun_slot<'a>(family: &'a dyn StateFamily, kind: GenFunKind) -> impl Fn(&[f64], &[f64]) -> Result<f64> + 'a {
    move |a, b| genfun_eval(family, a, b, kind)
}

fn second_matrix(gf: &TwoSlot, x: &[f64], cfg: &StencilConfig) -> Result<RealMatrix> {
    let d = x.len();
    let mut m = RealMatrix::zeros(d, d);
    for mu in 0..d {
        for nu in 0..d {
            m[(mu, nu)] = mixed_second(gf, x, mu, nu, cfg)?;
        }
    }
    Ok(m)
}

/// `F_{mu nu} = 4 d_{mu'} d_nu ln|B|` (or `|B|` itself when `use_log` is false;
/// the first derivatives vanish at coincidence, so both give the same matrix).
pub fn qfim_from_genfun(
    family: &dyn StateFamily,
    x: &[f64],
    cfg: &StencilConfig,
    use_log: bool,
) -> Result<GeometryReport> {
    check_point(x, family.param_dim())?;
    let kind = if use_log { GenFunKind::LogFidelity } else { GenFunKind::Fidelity };
    let gf = genfun_slot(family, kind);
    let m = second_matrix(&gf, x, cfg)?;
    Ok(GeometryReport::new(x, Method::Genfun).with_qfim(m * 4.0))
}

/// Barred derivative of `ln|B|`: every primed index carries `-i d'`, every
/// unprimed one `+i d`. `value` is the real partial derivative; the complex
/// number is `factor() * value`.
#[derive(Debug, Clone, PartialEq)]
pub struct BarDerivative {
    pub primed: Vec<usize>,
    pub unprimed: Vec<usize>,
    pub value: f64,
}

impl BarDerivative {
    pub fn factor(&self) -> Complex64 {
        let i = Complex64::i();
        (-i).powu(self.primed.len() as u32) * i.powu(self.unprimed.len() as u32)
    }

    pub fn complex(&self) -> Complex64 {
        self.factor() * self.value
    }
}

/// Third-order barred derivative at coincidence (step `h3`).
pub fn bar_third(
    gf: &TwoSlot,
    x: &[f64],
    primed: &[usize],
    unprimed: &[usize],
    cfg: &StencilConfig,
) -> Result<BarDerivative> {
    cfg.validate()?;
    if primed.len() + unprimed.len() != 3 || primed.is_empty() || unprimed.is_empty() {
        return Err(Error::InvalidStencil(
            "third-order bar derivative needs 2+1 or 1+2 primed/unprimed indices".into(),
        ));
    }
    let value = extrapolated(gf, x, primed, unprimed, cfg.h3, cfg.richardson)?;
    Ok(BarDerivative {
        primed: primed.to_vec(),
        unprimed: unprimed.to_vec(),
        value,
    })
}

/// `Gamma_{lambda mu nu} = 2i { B_{nu lambda; mu} - B_{lambda; nu mu} + B_{mu lambda; nu}
///  - B_{lambda; mu nu} - B_{lambda mu; nu} + B_{mu; lambda nu} }` on `ln|B|`.
pub fn christoffel_from_genfun(family: &dyn StateFamily, x: &[f64], cfg: &StencilConfig) -> Result<Christoffel> {
    let d = check_point(x, family.param_dim()).map(|_| x.len())?;
    let gf = genfun_slot(family, GenFunKind::LogFidelity);
    christoffel_from_twoslot(&gf, x, d, cfg)
}

pub fn christoffel_from_twoslot(gf: &TwoSlot, x: &[f64], d: usize, cfg: &StencilConfig) -> Result<Christoffel> {
    let bar = |p: &[usize], u: &[usize]| bar_third(gf, x, p, u, cfg).map(|b| b.complex());
    let mut out = Christoffel::zeros(d);
    for l in 0..d {
        for m in 0..d {
            for n in 0..d {
                let sum = bar(&[n, l], &[m])? - bar(&[l], &[n, m])? + bar(&[m, l], &[n])?
                    - bar(&[l], &[m, n])?
                    - bar(&[l, m], &[n])?
                    + bar(&[m], &[l, n])?;
                let gamma = Complex64::new(0.0, 2.0) * sum;
                let residue = gamma.im.abs();
                if residue > 1e-8 * gamma.re.abs().max(1.0) {
                    return Err(Error::ImaginaryResidue { residue });
                }
                out.set(l, m, n, gamma.re);
            }
        }
    }
    Ok(out)
}

fn require_ket(family: &dyn StateFamily) -> Result<()> {
    if family.capabilities().ket {
        Ok(())
    } else {
        Err(Error::MissingPath("ket"))
    }
}

/// `Omega_{mu nu} = -2 d_{mu'} d_nu phi(x', x)` with `phi = arg <psi(x')|psi(x)>`.
///
/// Per-point phase choices are separable and cancel in the mixed stencil. The step
/// is halved (up to four times) until every stencil overlap has modulus above 0.1
/// and phase inside `(-pi/2, pi/2)`.
pub fn berry_from_phase(
    family: &dyn StateFamily,
    x: &[f64],
    mu: usize,
    nu: usize,
    cfg: &StencilConfig,
) -> Result<f64> {
    cfg.validate()?;
    check_point(x, family.param_dim())?;
    require_ket(family)?;
    if mu == nu {
        return Ok(0.0);
    }
    let mut h = cfg.h2;
    for _ in 0..=PHASE_SHRINKS {
        let gf = |a: &[f64], b: &[f64]| -> Result<f64> {
            let o = pure_overlap(&family.ket(b)?, &family.ket(a)?)?;
            let phase = o.phase();
            if o.modulus() < PHASE_MODULUS_MIN || phase.abs() >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::PhaseWrap { h });
            }
            Ok(phase)
        };
        match extrapolated(&gf, x, &[mu], &[nu], h, cfg.richardson) {
            Ok(v) => return Ok(-2.0 * v),
            Err(e) if matches!(e.root(), Error::PhaseWrap { .. }) => h /= 2.0,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PhaseWrap { h: 2.0 * h })
}

/// `Omega_{mu nu} = d_{mu'} d_nu [-2 Im <psi(x')|psi(x)>]`. Only valid for a smooth
/// closed-form gauge, since per-point phases do not cancel here.
pub fn berry_from_im(
    family: &dyn StateFamily,
    x: &[f64],
    mu: usize,
    nu: usize,
    cfg: &StencilConfig,
) -> Result<f64> {
    check_point(x, family.param_dim())?;
    require_ket(family)?;
    if !family.capabilities().analytic_gauge {
        return Err(Error::GaugeNotSmooth);
    }
    if mu == nu {
        return Ok(0.0);
    }
    let gf = genfun_slot(family, GenFunKind::OverlapNeg2im);
    mixed_second(&gf, x, mu, nu, cfg)
}

/// Antisymmetric Berry-curvature matrix from the phase route.
pub fn berry_matrix(family: &dyn StateFamily, x: &[f64], cfg: &StencilConfig) -> Result<RealMatrix> {
    let d = x.len();
    let mut m = RealMatrix::zeros(d, d);
    for mu in 0..d {
        for nu in (mu + 1)..d {
            let v = berry_from_phase(family, x, mu, nu, cfg)?;
            m[(mu, nu)] = v;
            m[(nu, mu)] = -v;
        }
    }
    Ok(m)
}

/// `g_{mu nu} = d_{mu'} d_nu ln|<psi(x')|psi(x)>|` (or the bare modulus).
pub fn metric_from_overlap(
    family: &dyn StateFamily,
    x: &[f64],
    cfg: &StencilConfig,
    use_log: bool,
) -> Result<RealMatrix> {
    check_point(x, family.param_dim())?;
    require_ket(family)?;
    let kind = if use_log {
        GenFunKind::OverlapLogModulus
    } else {
        GenFunKind::OverlapModulus
    };
    let gf = genfun_slot(family, kind);
    let m = second_matrix(&gf, x, cfg)?;
    Ok((&m + m.transpose()) * 0.5)
}

/// Polynomial fit of `ln|B(x, x + t u)|` along a ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayFit {
    pub u: Vec<f64>,
    /// Taylor coefficients `c0..c3` in `t`.
    pub coeffs: [f64; 4],
    /// Root-mean-square residual of the fit.
    pub residual: f64,
}

impl RayFit {
    /// The QFIM along `u` implied by the quadratic coefficient, `F_uu = -8 c2`.
    pub fn implied_fuu(&self) -> f64 {
        -8.0 * self.coeffs[2]
    }
}

pub fn default_t_grid() -> Vec<f64> {
    let n = RAY_POINTS;
    (0..n)
        .map(|i| -RAY_HALF_WIDTH + 2.0 * RAY_HALF_WIDTH * i as f64 / (n - 1) as f64)
        .collect()
}

/// Least-squares fit on `t_grid`. The fit runs in `s = t / max|t|` with a
/// degree-6 polynomial so that quartic and higher terms of the series do not
/// leak into `c0..c3`; the reported coefficients are rescaled back to `t`.
pub fn ray_series_fit(family: &dyn StateFamily, x: &[f64], u: &[f64], t_grid: &[f64]) -> Result<RayFit> {
    ray_series_fit_degree(family, x, u, t_grid, RAY_DEGREE)
}

/// [`ray_series_fit`] with an explicit polynomial degree (at least 3).
pub fn ray_series_fit_degree(
    family: &dyn StateFamily,
    x: &[f64],
    u: &[f64],
    t_grid: &[f64],
    degree: usize,
) -> Result<RayFit> {
    check_point(x, family.param_dim())?;
    if u.len() != x.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: u.len(),
        });
    }
    let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidPoint("ray direction must be a nonzero finite vector".into()));
    }
    let u: Vec<f64> = u.iter().map(|v| v / norm).collect();
    let scale = t_grid.iter().fold(0.0f64, |a, t| a.max(t.abs()));
    if degree < 3 || degree + 1 > t_grid.len() || !(scale > 0.0) {
        return Err(Error::FitIllConditioned);
    }
    let values = t_grid
        .iter()
        .map(|&t| {
            let xp: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + t * b).collect();
            genfun_eval(family, x, &xp, GenFunKind::LogFidelity).map_err(|e| wrap(x.to_vec(), xp, e))
        })
        .collect::<Result<Vec<_>>>()?;
    let a = DMatrix::from_fn(t_grid.len(), degree + 1, |i, k| (t_grid[i] / scale).powi(k as i32));
    let y = DVector::from_vec(values);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 0.0) || smax / smin > FIT_CONDITION_MAX {
        return Err(Error::FitIllConditioned);
    }
    let coef = svd.solve(&y, 0.0).map_err(|_| Error::FitIllConditioned)?;
    let fitted = &a * &coef;
    let residual = ((fitted - &y).norm_squared() / t_grid.len() as f64).sqrt();
    let coeffs = std::array::from_fn(|k| coef[k] / scale.powi(k as i32));
    Ok(RayFit { u, coeffs, residual })
}
