//! Direct route: SLD and QFIM, Bloch closed forms, the pure-state quantum
//! geometric tensor, two-band d-vector forms, classical Fisher information and
//! Christoffel symbols from a metric.
//!
//! Model functions are differentiated by central differences throughout; the
//! default steps are `1e-6` for first and `1e-4` for second derivatives.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::matcore::{ComplexMatrix, DensityMatrix};
use crate::states::{cross3, dot3, StateFamily};

pub type RealMatrix = DMatrix<f64>;

pub const FIRST_STEP: f64 = 1e-6;
pub const SECOND_STEP: f64 = 1e-4;
pub const SLD_STEP: f64 = 1e-5;
pub const QGT_STEP: f64 = 1e-5;
pub const METRIC_FD_STEP: f64 = 1e-3;
pub const RANK_TOL: f64 = 1e-10;
pub const PURITY_TOL: f64 = 1e-8;
/// Largest `|r . d_mu r|` accepted on the pure sphere.
pub const PURE_TANGENCY_TOL: f64 = 1e-6;
pub const PURE_EIGEN_TOL: f64 = 1e-8;
pub const GAP_STENCIL_MIN: f64 = 1e-10;
pub const KET_COMPONENT_MIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Genfun,
    ClosedForm,
}

/// `Gamma_{lambda mu nu}`, symmetric in the last two indices. Values are stored
/// relative to `F`; [`Christoffel::in_metric_convention`] rescales to `g = F/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct Christoffel {
    dim: usize,
    data: Vec<f64>,
}

impl Christoffel {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut c = Self::zeros(dim);
        for l in 0..dim {
            for m in 0..dim {
                for n in 0..dim {
                    c.set(l, m, n, f(l, m, n));
                }
            }
        }
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, l: usize, m: usize, n: usize) -> usize {
        (l * self.dim + m) * self.dim + n
    }

    pub fn get(&self, l: usize, m: usize, n: usize) -> f64 {
        self.data[self.index(l, m, n)]
    }

    pub fn set(&mut self, l: usize, m: usize, n: usize, v: f64) {
        let i = self.index(l, m, n);
        self.data[i] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn in_metric_convention(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v / 4.0).collect(),
        }
    }

    /// `max |Gamma_lmn - Gamma_lnm|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for l in 0..self.dim {
            for m in 0..self.dim {
                for n in 0..self.dim {
                    worst = worst.max((self.get(l, m, n) - self.get(l, n, m)).abs());
                }
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Christoffel) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |a, (x, y)| a.max((x - y).abs()))
    }

    /// Nested `[lambda][mu][nu]` arrays.
    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.dim)
            .map(|l| {
                (0..self.dim)
                    .map(|m| (0..self.dim).map(|n| self.get(l, m, n)).collect())
                    .collect()
            })
            .collect()
    }
}

/// Per-point geometry. Setting the QFIM also sets `metric = qfim / 4` and vice versa.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryReport {
    pub at: Vec<f64>,
    pub method: Method,
    pub qfim: Option<RealMatrix>,
    pub metric: Option<RealMatrix>,
    pub berry: Option<RealMatrix>,
    pub qgt: Option<ComplexMatrix>,
    pub christoffel: Option<Christoffel>,
    /// SLD matrix elements dropped outside the support of rho.
    pub sld_truncations: usize,
}

fn symmetrize(m: &RealMatrix) -> RealMatrix {
    (m + m.transpose()) * 0.5
}

fn antisymmetrize(m: &RealMatrix) -> RealMatrix {
    (m - m.transpose()) * 0.5
}

impl GeometryReport {
    pub fn new(at: &[f64], method: Method) -> Self {
        Self {
            at: at.to_vec(),
            method,
            qfim: None,
            metric: None,
            berry: None,
            qgt: None,
            christoffel: None,
            sld_truncations: 0,
        }
    }

    pub fn with_qfim(mut self, qfim: RealMatrix) -> Self {
        let q = symmetrize(&qfim);
        self.metric = Some(&q / 4.0);
        self.qfim = Some(q);
        self
    }

    pub fn with_metric(mut self, metric: RealMatrix) -> Self {
        let g = symmetrize(&metric);
        self.qfim = Some(&g * 4.0);
        self.metric = Some(g);
        self
    }

    /// Stores `T` and derives `metric = Re T` (symmetrized), `berry = -2 Im T`
    /// (antisymmetrized) and `qfim = 4 metric`.
    pub fn with_qgt(self, qgt: ComplexMatrix) -> Self {
        let re = qgt.map(|z| z.re);
        let im = qgt.map(|z| z.im);
        let mut out = self.with_metric(re);
        // + 0.0 turns the -0.0 of vanishing entries into 0.0
        out.berry = Some((antisymmetrize(&im) * -2.0).map(|v| v + 0.0));
        out.qgt = Some(qgt);
        out
    }

    pub fn with_berry(mut self, berry: RealMatrix) -> Self {
        self.berry = Some(antisymmetrize(&berry));
        self
    }

    pub fn with_christoffel(mut self, c: Christoffel) -> Self {
        self.christoffel = Some(c);
        self
    }

    pub fn qfim(&self) -> Result<&RealMatrix> {
        self.qfim.as_ref().ok_or(Error::MissingPath("qfim"))
    }

    pub fn metric(&self) -> Result<&RealMatrix> {
        self.metric.as_ref().ok_or(Error::MissingPath("metric"))
    }

    pub fn berry(&self) -> Result<&RealMatrix> {
        self.berry.as_ref().ok_or(Error::MissingPath("berry"))
    }

    pub fn christoffel(&self) -> Result<&Christoffel> {
        self.christoffel.as_ref().ok_or(Error::MissingPath("christoffel"))
    }
}

fn rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl Serialize for GeometryReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GeometryReport", 8)?;
        st.serialize_field("at", &self.at)?;
        st.serialize_field("method", &self.method)?;
        st.serialize_field("qfim", &self.qfim.as_ref().map(rows))?;
        st.serialize_field("metric", &self.metric.as_ref().map(rows))?;
        st.serialize_field("berry", &self.berry.as_ref().map(rows))?;
        let qgt = self.qgt.as_ref().map(|t| {
            t.row_iter()
                .map(|r| r.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        });
        st.serialize_field("qgt", &qgt)?;
        st.serialize_field("christoffel", &self.christoffel.as_ref().map(Christoffel::to_nested))?;
        st.serialize_field("sld_truncations", &self.sld_truncations)?;
        st.end()
    }
}

pub(crate) fn shifted(x: &[f64], steps: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(i, dh) in steps {
        y[i] += dh;
    }
    y
}

type Vec3Fn<'a> = dyn Fn(&[f64]) -> Result<[f64; 3]> + 'a;

fn d1_vec3(f: &Vec3Fn, x: &[f64], mu: usize, h: f64) -> Result<[f64; 3]> {
    let p = f(&shifted(x, &[(mu, h)]))?;
    let m = f(&shifted(x, &[(mu, -h)]))?;
    Ok(std::array::from_fn(|i| (p[i] - m[i]) / (2.0 * h)))
}

fn d2_vec3(f: &Vec3Fn, x: &[f64], mu: usize, nu: usize, h: f64) -> Result<[f64; 3]> {
    if mu == nu {
        let p = f(&shifted(x, &[(mu, h)]))?;
        let c = f(x)?;
        let m = f(&shifted(x, &[(mu, -h)]))?;
        return Ok(std::array::from_fn(|i| (p[i] - 2.0 * c[i] + m[i]) / (h * h)));
    }
    let pp = f(&shifted(x, &[(mu, h), (nu, h)]))?;
    let pm = f(&shifted(x, &[(mu, h), (nu, -h)]))?;
    let mp = f(&shifted(x, &[(mu, -h), (nu, h)]))?;
    let mm = f(&shifted(x, &[(mu, -h), (nu, -h)]))?;
    Ok(std::array::from_fn(|i| (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * h * h)))
}

fn d1_mat(
    f: &dyn Fn(&[f64]) -> Result<ComplexMatrix>,
    x: &[f64],
    mu: usize,
    h: f64,
) -> Result<ComplexMatrix> {
    let p = f(&shifted(x, &[(mu, h)]))?;
    let m = f(&shifted(x, &[(mu, -h)]))?;
    Ok((p - m).unscale(2.0 * h))
}

fn check_param(family: &dyn StateFamily, x: &[f64]) -> Result<usize> {
    crate::states::check_point(x, family.param_dim())?;
    Ok(family.param_dim())
}

/// Symmetric logarithmic derivative `L_mu` in the computational basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Sld {
    pub l: ComplexMatrix,
    /// Matrix elements set to zero because `lambda_i + lambda_j <= rank_tol`.
    pub truncated: usize,
}

struct SldEigen {
    values: Vec<f64>,
    vectors: ComplexMatrix,
}

fn sld_in_eigenbasis(
    family: &dyn StateFamily,
    eig: &SldEigen,
    x: &[f64],
    mu: usize,
    h: f64,
    rank_tol: f64,
) -> Result<(ComplexMatrix, usize)> {
    let rho = |y: &[f64]| family.rho(y).map(DensityMatrix::into_matrix);
    let drho = d1_mat(&rho, x, mu, h)?;
    let v = &eig.vectors;
    let d = v.adjoint() * drho * v;
    let n = eig.values.len();
    let mut truncated = 0;
    let l = ComplexMatrix::from_fn(n, n, |i, j| {
        let s = eig.values[i] + eig.values[j];
        if s > rank_tol {
            d[(i, j)] * (2.0 / s)
        } else {
            truncated += 1;
            Complex64::new(0.0, 0.0)
        }
    });
    Ok((l, truncated))
}

fn sld_eigen(family: &dyn StateFamily, x: &[f64]) -> Result<SldEigen> {
    let eig = family.rho(x)?.eigen()?;
    Ok(SldEigen {
        values: eig.values,
        vectors: eig.vectors,
    })
}

/// `<i|L|j> = 2 <i|d_mu rho|j> / (lambda_i + lambda_j)` in the eigenbasis of rho,
/// with `d_mu rho` from a central difference of step `h`.
pub fn sld(family: &dyn StateFamily, x: &[f64], mu: usize, h: f64, rank_tol: f64) -> Result<Sld> {
    let d = check_param(family, x)?;
    if mu >= d {
        return Err(Error::InvalidPoint(format!("direction {mu} out of range for {d} parameters")));
    }
    let eig = sld_eigen(family, x)?;
    let (l, truncated) = sld_in_eigenbasis(family, &eig, x, mu, h, rank_tol)?;
    let v = &eig.vectors;
    Ok(Sld {
        l: v * l * v.adjoint(),
        truncated,
    })
}

pub fn qfim_sld(family: &dyn StateFamily, x: &[f64]) -> Result<GeometryReport> {
    qfim_sld_with(family, x, SLD_STEP, RANK_TOL)
}

/// `F_{mu nu} = Tr rho {L_mu, L_nu} / 2`.
pub fn qfim_sld_with(
    family: &dyn StateFamily,
    x: &[f64],
    h: f64,
    rank_tol: f64,
) -> Result<GeometryReport> {
    let d = check_param(family, x)?;
    let eig = sld_eigen(family, x)?;
    let mut ls = Vec::with_capacity(d);
    let mut truncated = 0;
    for mu in 0..d {
        let (l, t) = sld_in_eigenbasis(family, &eig, x, mu, h, rank_tol)?;
        truncated += t;
        ls.push(l);
    }
    let n = eig.values.len();
    let f = RealMatrix::from_fn(d, d, |mu, nu| {
        let prod = &ls[mu] * &ls[nu];
        (0..n).map(|i| eig.values[i] * prod[(i, i)].re).sum()
    });
    let mut report = GeometryReport::new(x, Method::Direct).with_qfim(f);
    report.sld_truncations = truncated;
    Ok(report)
}

fn bloch_fn(family: &dyn StateFamily) -> impl Fn(&[f64]) -> Result<[f64; 3]> + '_ {
    move |y| family.bloch(y).map(|r| r.0)
}

struct BlochJet {
    r: [f64; 3],
    dr: Vec<[f64; 3]>,
    /// `None` on the pure sphere, else `1 - |r|^2`.
    mixed: Option<f64>,
}

fn bloch_jet(family: &dyn StateFamily, x: &[f64], h: f64, purity_tol: f64) -> Result<BlochJet> {
    let d = check_param(family, x)?;
    if !family.capabilities().bloch {
        return Err(Error::MissingPath("bloch"));
    }
    let f = bloch_fn(family);
    let r = f(x)?;
    let dr = (0..d).map(|mu| d1_vec3(&f, x, mu, h)).collect::<Result<Vec<_>>>()?;
    let norm = dot3(&r, &r).sqrt();
    let mixed = if norm >= 1.0 - purity_tol {
        for v in &dr {
            let r_dot_dr = dot3(&r, v);
            if r_dot_dr.abs() > PURE_TANGENCY_TOL {
                return Err(Error::PuritySingularity { r_dot_dr });
            }
        }
        None
    } else {
        Some(1.0 - norm * norm)
    };
    Ok(BlochJet { r, dr, mixed })
}

pub fn qfim_bloch(family: &dyn StateFamily, x: &[f64]) -> Result<GeometryReport> {
    qfim_bloch_with(family, x, FIRST_STEP, PURITY_TOL)
}

/// `F = dr.dr + (r.dr)(r.dr)/(1 - |r|^2)`, with the second term dropped on the pure sphere.
pub fn qfim_bloch_with(
    family: &dyn StateFamily,
    x: &[f64],
    h: f64,
    purity_tol: f64,
) -> Result<GeometryReport> {
    let jet = bloch_jet(family, x, h, purity_tol)?;
    let d = jet.dr.len();
    let f = RealMatrix::from_fn(d, d, |mu, nu| {
        let base = dot3(&jet.dr[mu], &jet.dr[nu]);
        match jet.mixed {
            Some(w) => base + dot3(&jet.r, &jet.dr[mu]) * dot3(&jet.r, &jet.dr[nu]) / w,
            None => base,
        }
    });
    Ok(GeometryReport::new(x, Method::ClosedForm).with_qfim(f))
}

pub fn christoffel_bloch(family: &dyn StateFamily, x: &[f64]) -> Result<Christoffel> {
    christoffel_bloch_with(family, x, FIRST_STEP, SECOND_STEP)
}

/// Bloch-form Christoffel symbols (F convention):
///
/// `dl r . dm dn r + (r.dl r)/(1-r^2) [dm r . dn r + r . dm dn r]
///  + (r.dl r)(r.dm r)(r.dn r)/(1-r^2)^2`.
pub fn christoffel_bloch_with(
    family: &dyn StateFamily,
    x: &[f64],
    h1: f64,
    h2: f64,
) -> Result<Christoffel> {
    let jet = bloch_jet(family, x, h1, PURITY_TOL)?;
    let d = jet.dr.len();
    let f = bloch_fn(family);
    let mut ddr = vec![[0.0; 3]; d * d];
    for mu in 0..d {
        for nu in mu..d {
            let v = d2_vec3(&f, x, mu, nu, h2)?;
            ddr[mu * d + nu] = v;
            ddr[nu * d + mu] = v;
        }
    }
    let r = &jet.r;
    let rd: Vec<f64> = jet.dr.iter().map(|v| dot3(r, v)).collect();
    Ok(Christoffel::from_fn(d, |l, m, n| {
        let second = &ddr[m * d + n];
        let base = dot3(&jet.dr[l], second);
        match jet.mixed {
            Some(w) => {
                base + rd[l] / w * (dot3(&jet.dr[m], &jet.dr[n]) + dot3(r, second))
                    + rd[l] * rd[m] * rd[n] / (w * w)
            }
            None => base,
        }
    }))
}

fn projector(family: &dyn StateFamily, y: &[f64]) -> Result<ComplexMatrix> {
    if family.capabilities().ket {
        let psi = family.ket(y)?;
        return Ok(&psi * psi.adjoint());
    }
    let rho = family.rho(y)?;
    let eig = rho.eigen()?;
    let gap = eig
        .values
        .iter()
        .map(|&v| v.abs().min((v - 1.0).abs()))
        .fold(0.0, f64::max);
    if gap > PURE_EIGEN_TOL {
        return Err(Error::NotPure { gap });
    }
    Ok(rho.into_matrix())
}

pub fn qgt_pure(family: &dyn StateFamily, x: &[f64]) -> Result<GeometryReport> {
    qgt_pure_with(family, x, QGT_STEP)
}

/// `T_{mu nu} = Tr[(d_mu P)(I - P)(d_nu P)]` from the projector `P = |psi><psi|`,
/// which is independent of the ket phase.
pub fn qgt_pure_with(family: &dyn StateFamily, x: &[f64], h: f64) -> Result<GeometryReport> {
    let d = check_param(family, x)?;
    let p = projector(family, x)?;
    let proj = |y: &[f64]| projector(family, y);
    let dp = (0..d).map(|mu| d1_mat(&proj, x, mu, h)).collect::<Result<Vec<_>>>()?;
    let q = ComplexMatrix::identity(p.nrows(), p.ncols()) - p;
    let t = ComplexMatrix::from_fn(d, d, |mu, nu| (&dp[mu] * &q * &dp[nu]).trace());
    Ok(GeometryReport::new(x, Method::Direct).with_qgt(t))
}

fn direction_fn(family: &dyn StateFamily) -> impl Fn(&[f64]) -> Result<[f64; 3]> + '_ {
    move |y| {
        let d = family.dvec(y)?;
        let m = d.magnitude();
        if !(m > GAP_STENCIL_MIN) {
            return Err(Error::GapClosure { d: m });
        }
        Ok(d.0.map(|c| c / m))
    }
}

pub fn dirac_geometry_closed(family: &dyn StateFamily, x: &[f64]) -> Result<GeometryReport> {
    dirac_geometry_closed_with(family, x, FIRST_STEP, SECOND_STEP)
}

/// Lower band of `H = d . sigma` in terms of `n = d/|d|`:
/// `g = dn.dn / 4`, `Omega = n.(dn x dn) / 2`, `Gamma = dl n . dm dn n` (F convention).
pub fn dirac_geometry_closed_with(
    family: &dyn StateFamily,
    x: &[f64],
    h1: f64,
    h2: f64,
) -> Result<GeometryReport> {
    let d = check_param(family, x)?;
    if !family.capabilities().dvec {
        return Err(Error::MissingPath("dvec"));
    }
    let f = direction_fn(family);
    let n = f(x)?;
    let dn = (0..d).map(|mu| d1_vec3(&f, x, mu, h1)).collect::<Result<Vec<_>>>()?;
    let mut ddn = vec![[0.0; 3]; d * d];
    for mu in 0..d {
        for nu in mu..d {
            let v = d2_vec3(&f, x, mu, nu, h2)?;
            ddn[mu * d + nu] = v;
            ddn[nu * d + mu] = v;
        }
    }
    let g = RealMatrix::from_fn(d, d, |mu, nu| 0.25 * dot3(&dn[mu], &dn[nu]));
    let berry = RealMatrix::from_fn(d, d, |mu, nu| 0.5 * dot3(&n, &cross3(&dn[mu], &dn[nu])));
    let qgt = ComplexMatrix::from_fn(d, d, |mu, nu| Complex64::new(g[(mu, nu)], -0.5 * berry[(mu, nu)]));
    let gamma = Christoffel::from_fn(d, |l, m, k| dot3(&dn[l], &ddn[m * d + k]));
    let mut report = GeometryReport::new(x, Method::ClosedForm)
        .with_metric(g)
        .with_berry(berry)
        .with_christoffel(gamma);
    report.qgt = Some(qgt);
    Ok(report)
}

pub fn classical_fim(family: &dyn StateFamily, x: &[f64]) -> Result<GeometryReport> {
    classical_fim_with(family, x, FIRST_STEP)
}

/// `I = 4 sum_i d_mu|psi_i| d_nu|psi_i|` for real kets; the result sits in the qfim slot.
pub fn classical_fim_with(family: &dyn StateFamily, x: &[f64], h: f64) -> Result<GeometryReport> {
    let d = check_param(family, x)?;
    let caps = family.capabilities();
    if !(caps.ket && caps.real_ket) {
        return Err(Error::MissingPath("real ket"));
    }
    let amplitudes = |y: &[f64]| -> Result<Vec<f64>> {
        let psi = family.ket(y)?;
        psi.iter()
            .enumerate()
            .map(|(i, z)| {
                let a = z.norm();
                if a < KET_COMPONENT_MIN {
                    Err(Error::SignFlipAtStencil {
                        component: i,
                        magnitude: a,
                    })
                } else {
                    Ok(a)
                }
            })
            .collect()
    };
    amplitudes(x)?;
    let mut grads = Vec::with_capacity(d);
    for mu in 0..d {
        let p = amplitudes(&shifted(x, &[(mu, h)]))?;
        let m = amplitudes(&shifted(x, &[(mu, -h)]))?;
        grads.push(p.iter().zip(&m).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<_>>());
    }
    let i_mat = RealMatrix::from_fn(d, d, |mu, nu| {
        4.0 * grads[mu].iter().zip(&grads[nu]).map(|(a, b)| a * b).sum::<f64>()
    });
    Ok(GeometryReport::new(x, Method::Direct).with_qfim(i_mat))
}

/// The most accurate direct QFIM available: Bloch closed form, then the
/// projector QGT for pure families, then the SLD.
pub fn qfim_direct(family: &dyn StateFamily, x: &[f64]) -> Result<RealMatrix> {
    let caps = family.capabilities();
    let report = if caps.bloch {
        qfim_bloch(family, x)?
    } else if caps.ket {
        qgt_pure(family, x)?
    } else {
        qfim_sld(family, x)?
    };
    Ok(report.qfim()?.clone())
}

/// `Gamma_{lambda mu nu} = (d_nu F_{lambda mu} + d_mu F_{lambda nu} - d_lambda F_{mu nu}) / 2`
/// from central differences (step `h`) of any QFIM provider.
pub fn christoffel_from_metric(
    qfim: impl Fn(&[f64]) -> Result<RealMatrix>,
    x: &[f64],
    h: f64,
) -> Result<Christoffel> {
    let d = x.len();
    let mut df = Vec::with_capacity(d);
    for mu in 0..d {
        let p = qfim(&shifted(x, &[(mu, h)]))?;
        let m = qfim(&shifted(x, &[(mu, -h)]))?;
        df.push((p - m) / (2.0 * h));
    }
    let c = Christoffel::from_fn(d, |l, m, n| {
        0.5 * (df[n][(l, m)] + df[m][(l, n)] - df[l][(m, n)])
    });
    // symmetric in (mu, nu) up to FD noise; enforce it exactly
    Ok(Christoffel::from_fn(d, |l, m, n| 0.5 * (c.get(l, m, n) + c.get(l, n, m))))
}
