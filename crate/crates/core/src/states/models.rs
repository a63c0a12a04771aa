use std::sync::Arc;

use num_complex::Complex64;

use super::config::{CustomTarget, ModelConfig};
use super::{
    canonical_bloch, check_point, clamp_bloch, dirac_ground_ket, dirac_ground_ket_south,
    rho_from_bloch, spin_bloch, ssh_dvector, BlochVector, Capabilities, DVec, Ket, StateFamily,
};
use crate::error::{Error, Result};
use crate::matcore::{eig_hermitian, validate_density, ComplexMatrix, DensityMatrix};

type ParamFn<T> = Arc<dyn Fn(&[f64]) -> T + Send + Sync>;

/// Single spin-1/2 in a field along z, parametrized by `b = mu_B B / k_B T`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpinFamily;

impl StateFamily for SpinFamily {
    fn dim(&self) -> usize {
        2
    }
    fn param_dim(&self) -> usize {
        1
    }
    fn capabilities(&self) -> Capabilities {
        Capabilities {
            bloch: true,
            dvec: true,
            ..Default::default()
        }
    }
    fn rho(&self, x: &[f64]) -> Result<DensityMatrix> {
        rho_from_bloch(&self.bloch(x)?)
    }
    fn bloch(&self, x: &[f64]) -> Result<BlochVector> {
        check_point(x, 1)?;
        Ok(spin_bloch(x[0]))
    }
    /// `H = -mu_B B sigma_z` in units of `k_B T`.
    fn dvec(&self, x: &[f64]) -> Result<DVec> {
        check_point(x, 1)?;
        Ok(DVec([0.0, 0.0, -x[0]]))
    }
}

/// Which coordinate chart supplies the closed-form ground-state ket.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KetChart {
    /// Singular at `n = +z`.
    North,
    /// Singular at `n = -z`.
    South,
}

/// Canonical ensemble of `H(x) = d(x) . sigma` at temperature `T >= 0`.
/// At `T = 0` the family is the pure lower band and exposes kets.
#[derive(Clone)]
pub struct CanonicalFamily {
    dvec: ParamFn<Result<DVec>>,
    param_dim: usize,
    temperature: f64,
    chart: KetChart,
}

impl CanonicalFamily {
    pub fn new(
        param_dim: usize,
        temperature: f64,
        chart: KetChart,
        dvec: impl Fn(&[f64]) -> Result<DVec> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::ConfigInvalid {
                field: "temperature".into(),
                reason: format!("must be finite and non-negative, got {temperature}"),
            });
        }
        if param_dim == 0 {
            return Err(Error::ConfigInvalid {
                field: "param_dim".into(),
                reason: "must be at least 1".into(),
            });
        }
        Ok(Self {
            dvec: Arc::new(dvec),
            param_dim,
            temperature,
            chart,
        })
    }

    pub fn ssh(delta_t: f64, temperature: f64) -> Result<Self> {
        Self::new(1, temperature, KetChart::North, move |x| ssh_dvector(x[0], delta_t))
    }

    /// Massive 2D Dirac cone `d = (k_x, k_y, m)`. The ket chart is chosen so
    /// that the pole never lies on the band (`n3` has the sign of `m`).
    pub fn dirac2d(mass: f64, temperature: f64) -> Result<Self> {
        let chart = if mass > 0.0 { KetChart::South } else { KetChart::North };
        Self::new(2, temperature, chart, move |x| Ok(DVec([x[0], x[1], mass])))
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn chart(&self) -> KetChart {
        self.chart
    }
}

impl StateFamily for CanonicalFamily {
    fn dim(&self) -> usize {
        2
    }
    fn param_dim(&self) -> usize {
        self.param_dim
    }
    fn capabilities(&self) -> Capabilities {
        let pure = self.temperature == 0.0;
        Capabilities {
            bloch: true,
            dvec: true,
            ket: pure,
            real_ket: false,
            analytic_gauge: pure,
        }
    }
    fn rho(&self, x: &[f64]) -> Result<DensityMatrix> {
        rho_from_bloch(&self.bloch(x)?)
    }
    fn bloch(&self, x: &[f64]) -> Result<BlochVector> {
        let d = self.dvec(x)?;
        if self.temperature == 0.0 {
            let n = d.direction()?;
            Ok(BlochVector(n.map(|c| -c)))
        } else {
            canonical_bloch(&d, 1.0 / self.temperature)
        }
    }
    fn ket(&self, x: &[f64]) -> Result<Ket> {
        if self.temperature != 0.0 {
            return Err(Error::MissingPath("ket"));
        }
        let d = self.dvec(x)?;
        match self.chart {
            KetChart::North => dirac_ground_ket(&d),
            KetChart::South => dirac_ground_ket_south(&d),
        }
    }
    fn dvec(&self, x: &[f64]) -> Result<DVec> {
        check_point(x, self.param_dim)?;
        (self.dvec)(x)
    }
}

/// Two-level family given directly by its Bloch vector `r(x)`.
#[derive(Clone)]
pub struct BlochFamily {
    r: ParamFn<[f64; 3]>,
    param_dim: usize,
}

impl BlochFamily {
    pub fn new(param_dim: usize, r: impl Fn(&[f64]) -> [f64; 3] + Send + Sync + 'static) -> Self {
        Self {
            r: Arc::new(r),
            param_dim,
        }
    }

    /// A family whose state does not depend on the parameters.
    pub fn constant(param_dim: usize, r: [f64; 3]) -> Self {
        Self::new(param_dim, move |_| r)
    }
}

impl StateFamily for BlochFamily {
    fn dim(&self) -> usize {
        2
    }
    fn param_dim(&self) -> usize {
        self.param_dim
    }
    fn capabilities(&self) -> Capabilities {
        Capabilities {
            bloch: true,
            ..Default::default()
        }
    }
    fn rho(&self, x: &[f64]) -> Result<DensityMatrix> {
        rho_from_bloch(&self.bloch(x)?)
    }
    fn bloch(&self, x: &[f64]) -> Result<BlochVector> {
        check_point(x, self.param_dim)?;
        clamp_bloch(&BlochVector((self.r)(x)))
    }
}

/// Pure family given by a normalized ket `psi(x)`.
#[derive(Clone)]
pub struct KetFamily {
    psi: ParamFn<Result<Ket>>,
    dim: usize,
    param_dim: usize,
    real: bool,
    analytic_gauge: bool,
}

impl KetFamily {
    pub fn new(
        dim: usize,
        param_dim: usize,
        psi: impl Fn(&[f64]) -> Result<Ket> + Send + Sync + 'static,
    ) -> Self {
        Self {
            psi: Arc::new(psi),
            dim,
            param_dim,
            real: false,
            analytic_gauge: true,
        }
    }

    /// Real-valued wave function `psi(x)`.
    pub fn real(
        dim: usize,
        param_dim: usize,
        psi: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        let mut fam = Self::new(dim, param_dim, move |x| {
            Ok(Ket::from_iterator(dim, psi(x).into_iter().map(|v| Complex64::new(v, 0.0))))
        });
        fam.real = true;
        fam
    }

    /// Marks the kets as gauge-fixed point by point.
    pub fn with_numerical_gauge(mut self) -> Self {
        self.analytic_gauge = false;
        self
    }
}

impl StateFamily for KetFamily {
    fn dim(&self) -> usize {
        self.dim
    }
    fn param_dim(&self) -> usize {
        self.param_dim
    }
    fn capabilities(&self) -> Capabilities {
        Capabilities {
            ket: true,
            real_ket: self.real,
            analytic_gauge: self.analytic_gauge,
            ..Default::default()
        }
    }
    fn rho(&self, x: &[f64]) -> Result<DensityMatrix> {
        DensityMatrix::from_ket(&self.ket(x)?)
    }
    fn ket(&self, x: &[f64]) -> Result<Ket> {
        check_point(x, self.param_dim)?;
        let psi = (self.psi)(x)?;
        if psi.len() != self.dim {
            return Err(Error::WrongDimension {
                expected: self.dim,
                found: psi.len(),
            });
        }
        Ok(psi)
    }
}

/// General family given by a density-matrix-valued function.
#[derive(Clone)]
pub struct DensityFamily {
    rho: ParamFn<ComplexMatrix>,
    dim: usize,
    param_dim: usize,
}

impl DensityFamily {
    pub fn new(
        dim: usize,
        param_dim: usize,
        rho: impl Fn(&[f64]) -> ComplexMatrix + Send + Sync + 'static,
    ) -> Self {
        Self {
            rho: Arc::new(rho),
            dim,
            param_dim,
        }
    }
}

impl StateFamily for DensityFamily {
    fn dim(&self) -> usize {
        self.dim
    }
    fn param_dim(&self) -> usize {
        self.param_dim
    }
    fn capabilities(&self) -> Capabilities {
        Capabilities::default()
    }
    fn rho(&self, x: &[f64]) -> Result<DensityMatrix> {
        check_point(x, self.param_dim)?;
        let m = (self.rho)(x);
        if m.nrows() != self.dim {
            return Err(Error::WrongDimension {
                expected: self.dim,
                found: m.nrows(),
            });
        }
        validate_density(&m)
    }
}

/// Ground state of a Hermitian `H(x)`, found by diagonalization. The eigenvector
/// phase is fixed by making its largest-magnitude component real and positive,
/// which is smooth only piecewise.
#[derive(Clone)]
pub struct GroundStateFamily {
    hamiltonian: ParamFn<ComplexMatrix>,
    dim: usize,
    param_dim: usize,
}

impl GroundStateFamily {
    pub fn new(
        dim: usize,
        param_dim: usize,
        hamiltonian: impl Fn(&[f64]) -> ComplexMatrix + Send + Sync + 'static,
    ) -> Self {
        Self {
            hamiltonian: Arc::new(hamiltonian),
            dim,
            param_dim,
        }
    }
}

pub(crate) fn fix_phase(mut psi: Ket) -> Ket {
    let lead = psi
        .iter()
        .copied()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    if lead.norm() > 0.0 {
        let phase = lead.conj() / lead.norm();
        psi.iter_mut().for_each(|z| *z *= phase);
    }
    psi
}

impl StateFamily for GroundStateFamily {
    fn dim(&self) -> usize {
        self.dim
    }
    fn param_dim(&self) -> usize {
        self.param_dim
    }
    fn capabilities(&self) -> Capabilities {
        Capabilities {
            ket: true,
            analytic_gauge: false,
            ..Default::default()
        }
    }
    fn rho(&self, x: &[f64]) -> Result<DensityMatrix> {
        DensityMatrix::from_ket(&self.ket(x)?)
    }
    fn ket(&self, x: &[f64]) -> Result<Ket> {
        check_point(x, self.param_dim)?;
        let h = (self.hamiltonian)(x);
        if h.nrows() != self.dim {
            return Err(Error::WrongDimension {
                expected: self.dim,
                found: h.nrows(),
            });
        }
        let eig = eig_hermitian(&h)?;
        Ok(fix_phase(eig.vectors.column(0).into_owned()))
    }
}

/// Builds the family described by a validated [`ModelConfig`].
pub fn build_family(cfg: &ModelConfig) -> Result<Box<dyn StateFamily>> {
    cfg.validate()?;
    Ok(match cfg {
        ModelConfig::Spin => Box::new(SpinFamily),
        ModelConfig::Ssh {
            delta_t,
            temperature,
        } => Box::new(CanonicalFamily::ssh(*delta_t, *temperature)?),
        ModelConfig::Dirac2d { mass, temperature } => {
            Box::new(CanonicalFamily::dirac2d(*mass, *temperature)?)
        }
        ModelConfig::Custom(custom) => {
            let components = custom.components.clone();
            let eval = move |x: &[f64]| {
                [
                    components[0].iter().map(|t| t.eval(x)).sum::<f64>(),
                    components[1].iter().map(|t| t.eval(x)).sum::<f64>(),
                    components[2].iter().map(|t| t.eval(x)).sum::<f64>(),
                ]
            };
            match custom.target {
                CustomTarget::Bloch => Box::new(BlochFamily::new(custom.param_dim, eval)),
                CustomTarget::Dvec => Box::new(CanonicalFamily::new(
                    custom.param_dim,
                    custom.temperature.unwrap_or(0.0),
                    KetChart::North,
                    move |x| Ok(DVec(eval(x))),
                )?),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::real_diag;
    use crate::states::bloch_from_rho;

    fn fro(m: &ComplexMatrix) -> f64 {
        m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn spin_config_builds_one_parameter_qubit() {
        let fam = build_family(&ModelConfig::Spin).unwrap();
        assert_eq!((fam.dim(), fam.param_dim()), (2, 1));
        let caps = fam.capabilities();
        assert!(caps.bloch && caps.dvec && !caps.ket);
    }

    #[test]
    fn ssh_family_composes_canonical_bloch() {
        let fam = build_family(&ModelConfig::Ssh {
            delta_t: 0.2,
            temperature: 0.5,
        })
        .unwrap();
        for k in [-2.0, 0.0, 0.7, 3.0] {
            let expect = canonical_bloch(&ssh_dvector(k, 0.2).unwrap(), 2.0).unwrap();
            let got = fam.bloch(&[k]).unwrap();
            assert_eq!(got, expect);
            let back = bloch_from_rho(&fam.rho(&[k]).unwrap()).unwrap();
            for i in 0..3 {
                assert!((back.0[i] - expect.0[i]).abs() < 1e-12);
            }
        }
        assert!(!fam.capabilities().ket);
    }

    #[test]
    fn dirac2d_is_pure_with_regular_chart() {
        let fam = build_family(&ModelConfig::Dirac2d {
            mass: 1.0,
            temperature: 0.0,
        })
        .unwrap();
        assert_eq!(fam.param_dim(), 2);
        assert!(fam.capabilities().ket);
        // the origin is the north pole; the south chart is regular there
        let psi = fam.ket(&[0.0, 0.0]).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-14);
        let neg = CanonicalFamily::dirac2d(-1.0, 0.0).unwrap();
        assert_eq!(neg.chart(), KetChart::North);
        assert!(neg.ket(&[0.0, 0.0]).is_ok());
    }

    #[test]
    fn ket_and_rho_agree_on_pure_families() {
        let fams: Vec<Box<dyn StateFamily>> = vec![
            Box::new(CanonicalFamily::ssh(0.2, 0.0).unwrap()),
            Box::new(CanonicalFamily::dirac2d(1.0, 0.0).unwrap()),
            Box::new(CanonicalFamily::dirac2d(-0.5, 0.0).unwrap()),
        ];
        let points = [[0.3, -0.2], [1.5, 0.9], [-2.0, 0.1]];
        for fam in &fams {
            for p in &points {
                let x = &p[..fam.param_dim()];
                let psi = fam.ket(x).unwrap();
                let proj = &psi * psi.adjoint();
                assert!(fro(&(proj - fam.rho(x).unwrap().matrix())) < 1e-12);
            }
        }
    }

    #[test]
    fn ground_state_family_fixes_phase() {
        let fam = GroundStateFamily::new(2, 1, |x| DVec([x[0].cos(), x[0].sin(), 0.3]).hamiltonian());
        let psi = fam.ket(&[0.4]).unwrap();
        let lead = psi.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
        assert!(!fam.capabilities().analytic_gauge);
    }

    #[test]
    fn density_family_validates() {
        let fam = DensityFamily::new(3, 1, |x| real_diag(&[0.5, 0.3 + x[0], 0.2 - x[0]]));
        assert!(fam.rho(&[0.1]).is_ok());
        assert!(matches!(fam.rho(&[0.5]), Err(Error::NegativeEigenvalue { .. })));
        assert!(matches!(fam.rho(&[0.1, 0.2]), Err(Error::InvalidPoint(_))));
    }
}
