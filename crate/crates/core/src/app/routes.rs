//! Which routes can evaluate which quantity for a family, and the evaluation itself.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    christoffel_bloch, christoffel_from_metric, dirac_geometry_closed, qfim_bloch, qfim_direct,
    qfim_sld, qgt_pure, Christoffel, RealMatrix, METRIC_FD_STEP,
};
use crate::numdiff::{
    berry_from_im, berry_matrix, christoffel_from_genfun, default_t_grid, metric_from_overlap,
    qfim_from_genfun, ray_series_fit, StencilConfig,
};
use crate::states::StateFamily;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    FidelitySurface,
    Qfim,
    Metric,
    Berry,
    Christoffel,
    RayCheck,
    CompareRoutes,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::FidelitySurface,
        Quantity::Qfim,
        Quantity::Metric,
        Quantity::Berry,
        Quantity::Christoffel,
        Quantity::RayCheck,
        Quantity::CompareRoutes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::FidelitySurface => "fidelity_surface",
            Quantity::Qfim => "qfim",
            Quantity::Metric => "metric",
            Quantity::Berry => "berry",
            Quantity::Christoffel => "christoffel",
            Quantity::RayCheck => "ray_check",
            Quantity::CompareRoutes => "compare_routes",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|q| q.name() == s)
    }

    /// Tensor quantities that several routes can produce.
    pub fn is_geometric(self) -> bool {
        matches!(
            self,
            Quantity::Qfim | Quantity::Metric | Quantity::Berry | Quantity::Christoffel
        )
    }

    /// Relative tolerance used by route audits.
    pub fn tolerance(self) -> f64 {
        match self {
            Quantity::Qfim => 1e-5,
            Quantity::Metric | Quantity::Berry => 1e-4,
            Quantity::Christoffel => 5e-3,
            _ => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Sld,
    Bloch,
    Qgt,
    Genfun,
    GenfunIm,
    ClosedForm,
    MetricFd,
    RayFit,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Sld => "sld",
            Route::Bloch => "bloch",
            Route::Qgt => "qgt",
            Route::Genfun => "genfun",
            Route::GenfunIm => "genfun_im",
            Route::ClosedForm => "closed_form",
            Route::MetricFd => "metric_fd",
            Route::RayFit => "ray_fit",
        }
    }
}

/// Routes able to evaluate `q` on `family`, reference route first.
pub fn routes_for(family: &dyn StateFamily, q: Quantity) -> Vec<Route> {
    let caps = family.capabilities();
    let closed = caps.dvec && caps.ket;
    let mut out = Vec::new();
    match q {
        Quantity::Qfim | Quantity::Metric => {
            if closed {
                out.push(Route::ClosedForm);
            }
            if caps.bloch {
                out.push(Route::Bloch);
            }
            if caps.ket {
                out.push(Route::Qgt);
            }
            out.push(Route::Sld);
            out.push(Route::Genfun);
        }
        Quantity::Berry => {
            if caps.ket {
                if closed {
                    out.push(Route::ClosedForm);
                }
                out.push(Route::Qgt);
                out.push(Route::Genfun);
                if caps.analytic_gauge {
                    out.push(Route::GenfunIm);
                }
            }
        }
        Quantity::Christoffel => {
            if closed {
                out.push(Route::ClosedForm);
            }
            if caps.bloch {
                out.push(Route::Bloch);
            }
            out.push(Route::MetricFd);
            out.push(Route::Genfun);
        }
        Quantity::RayCheck => out.push(Route::RayFit),
        Quantity::FidelitySurface | Quantity::CompareRoutes => {}
    }
    out
}

/// A route's value for one quantity at one point.
#[derive(Debug, Clone, PartialEq)]
pub enum Tensor {
    Sym(RealMatrix),
    Anti(RealMatrix),
    Gamma(Christoffel),
    /// Named scalars (ray-fit coefficients).
    Scalars(Vec<f64>),
}

/// Entry ids of `q` for a `d`-parameter family, in emission order.
pub fn entry_ids(q: Quantity, d: usize) -> Vec<String> {
    let name = q.name();
    let mut ids = Vec::new();
    match q {
        Quantity::Qfim | Quantity::Metric => {
            for m in 0..d {
                for n in m..d {
                    ids.push(format!("{name}_{m}_{n}"));
                }
            }
        }
        Quantity::Berry => {
            for m in 0..d {
                for n in (m + 1)..d {
                    ids.push(format!("{name}_{m}_{n}"));
                }
            }
        }
        Quantity::Christoffel => {
            for l in 0..d {
                for m in 0..d {
                    for n in m..d {
                        ids.push(format!("{name}_{l}_{m}_{n}"));
                    }
                }
            }
        }
        Quantity::RayCheck => {
            for u in 0..d {
                for field in ["c0", "c1", "c2", "c3", "residual", "c2_target"] {
                    ids.push(format!("ray_{field}_{u}"));
                }
            }
        }
        Quantity::FidelitySurface | Quantity::CompareRoutes => {}
    }
    ids
}

impl Tensor {
    /// Values in the order of [`entry_ids`].
    pub fn values(&self) -> Vec<f64> {
        match self {
            Tensor::Sym(m) => {
                let d = m.nrows();
                (0..d).flat_map(|a| (a..d).map(move |b| (a, b))).map(|ix| m[ix]).collect()
            }
            Tensor::Anti(m) => {
                let d = m.nrows();
                (0..d)
                    .flat_map(|a| ((a + 1)..d).map(move |b| (a, b)))
                    .map(|ix| m[ix])
                    .collect()
            }
            Tensor::Gamma(c) => {
                let d = c.dim();
                let mut v = Vec::new();
                for l in 0..d {
                    for m in 0..d {
                        for n in m..d {
                            v.push(c.get(l, m, n));
                        }
                    }
                }
                v
            }
            Tensor::Scalars(v) => v.clone(),
        }
    }
}

pub fn evaluate(
    family: &dyn StateFamily,
    x: &[f64],
    q: Quantity,
    route: Route,
    cfg: &StencilConfig,
    use_log: bool,
) -> Result<Tensor> {
    let unsupported = || Error::UnsupportedKind(route.name());
    match q {
        Quantity::Qfim | Quantity::Metric => {
            let scale = if q == Quantity::Metric { 0.25 } else { 1.0 };
            let f = match route {
                Route::ClosedForm => dirac_geometry_closed(family, x)?.qfim()?.clone(),
                Route::Bloch => qfim_bloch(family, x)?.qfim()?.clone(),
                Route::Qgt => qgt_pure(family, x)?.qfim()?.clone(),
                Route::Sld => qfim_sld(family, x)?.qfim()?.clone(),
                Route::Genfun if q == Quantity::Metric && family.capabilities().ket => {
                    metric_from_overlap(family, x, cfg, use_log)? * 4.0
                }
                Route::Genfun => qfim_from_genfun(family, x, cfg, use_log)?.qfim()?.clone(),
                _ => return Err(unsupported()),
            };
            Ok(Tensor::Sym(f * scale))
        }
        Quantity::Berry => {
            let b = match route {
                Route::ClosedForm => dirac_geometry_closed(family, x)?.berry()?.clone(),
                Route::Qgt => qgt_pure(family, x)?.berry()?.clone(),
                Route::Genfun => berry_matrix(family, x, cfg)?,
                Route::GenfunIm => {
                    let d = x.len();
                    let mut m = RealMatrix::zeros(d, d);
                    for a in 0..d {
                        for b in (a + 1)..d {
                            let v = berry_from_im(family, x, a, b, cfg)?;
                            m[(a, b)] = v;
                            m[(b, a)] = -v;
                        }
                    }
                    m
                }
                _ => return Err(unsupported()),
            };
            Ok(Tensor::Anti(b))
        }
        Quantity::Christoffel => {
            let c = match route {
                Route::ClosedForm => dirac_geometry_closed(family, x)?.christoffel()?.clone(),
                Route::Bloch => christoffel_bloch(family, x)?,
                Route::MetricFd => christoffel_from_metric(|y: &[f64]| qfim_direct(family, y), x, METRIC_FD_STEP)?,
                Route::Genfun => christoffel_from_genfun(family, x, cfg)?,
                _ => return Err(unsupported()),
            };
            Ok(Tensor::Gamma(c))
        }
        Quantity::RayCheck => {
            if route != Route::RayFit {
                return Err(unsupported());
            }
            let f = qfim_direct(family, x)?;
            let grid = default_t_grid();
            let mut v = Vec::new();
            for u in 0..x.len() {
                let mut dir = vec![0.0; x.len()];
                dir[u] = 1.0;
                let fit = ray_series_fit(family, x, &dir, &grid)?;
                v.extend_from_slice(&fit.coeffs);
                v.push(fit.residual);
                v.push(-f[(u, u)] / 8.0);
            }
            Ok(Tensor::Scalars(v))
        }
        Quantity::FidelitySurface | Quantity::CompareRoutes => Err(unsupported()),
    }
}

/// Floor on the reference magnitude in relative deviations.
pub const REL_FLOOR: f64 = 1e-3;

/// `(max |a - b|, max |a - b| / max(max |b|, REL_FLOOR))` over all entries.
pub fn deviation(value: &Tensor, reference: &Tensor) -> (f64, f64) {
    let a = value.values();
    let b = reference.values();
    let abs = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let scale = b.iter().fold(0.0f64, |m, y| m.max(y.abs())).max(REL_FLOOR);
    (abs, abs / scale)
}
