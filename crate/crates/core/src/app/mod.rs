//! Scan engine: grid sweeps over a model, route audits and tabular output.

mod emit;
mod routes;

pub use emit::{emit, emit_audit, parse_json, write_audit_csv, write_csv, write_json, Format};
pub use routes::{deviation, entry_ids, evaluate, routes_for, Quantity, Route, Tensor, REL_FLOOR};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::{fidelity_oracle, genfun_eval, GenFunKind};
use crate::geometry::{
    christoffel_bloch, christoffel_from_metric, classical_fim, dirac_geometry_closed, qfim_bloch,
    qfim_direct, qfim_sld, qgt_pure, GeometryReport, METRIC_FD_STEP,
};
use crate::numdiff::{berry_matrix, christoffel_from_genfun, qfim_from_genfun, StencilConfig};
use crate::states::{build_family, ModelConfig, StateFamily};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        Self { min, max, count }
    }

    /// Parses `min:max:count`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidScan(format!("grid `{s}` is not min:max:count"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let min = parts[0].trim().parse().map_err(|_| bad())?;
        let max = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        Ok(Self { min, max, count })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::InvalidScan("grid bounds must be finite".into()));
        }
        if self.count < 2 {
            return Err(Error::InvalidScan(format!("grid count must be >= 2, got {}", self.count)));
        }
        if !(self.min < self.max) {
            return Err(Error::InvalidScan(format!("grid needs min < max, got {}:{}", self.min, self.max)));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.value(i)).collect()
    }
}

/// Cartesian product of the axes, first axis slowest.
pub fn grid_points(axes: &[GridAxis]) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for axis in axes {
        let vals = axis.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(*v);
                    q
                })
            })
            .collect();
    }
    points
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub model: ModelConfig,
    pub grid: Vec<GridAxis>,
    /// `x'` axis for two-slot surfaces; defaults to `grid`.
    #[serde(default)]
    pub prime_grid: Option<Vec<GridAxis>>,
    pub quantities: Vec<Quantity>,
    #[serde(default)]
    pub stencil: StencilConfig,
    #[serde(default = "default_true")]
    pub use_log: bool,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<std::path::PathBuf>,
}

fn default_true() -> bool {
    true
}

impl ScanSpec {
    pub fn new(model: ModelConfig, grid: Vec<GridAxis>, quantities: Vec<Quantity>) -> Self {
        Self {
            model,
            grid,
            prime_grid: None,
            quantities,
            stencil: StencilConfig::default(),
            use_log: true,
            format: Format::Csv,
            out: None,
        }
    }

    pub fn validate_with(&self, family: &dyn StateFamily) -> Result<()> {
        self.model.validate()?;
        self.stencil.validate()?;
        let d = family.param_dim();
        if self.grid.len() != d {
            return Err(Error::InvalidScan(format!(
                "model has {d} parameters but {} grid axes were given",
                self.grid.len()
            )));
        }
        self.grid.iter().try_for_each(GridAxis::validate)?;
        if self.quantities.is_empty() {
            return Err(Error::InvalidScan("no quantities requested".into()));
        }
        for &q in &self.quantities {
            match q {
                Quantity::FidelitySurface => {
                    if d != 1 {
                        return Err(Error::InvalidScan(
                            "fidelity_surface needs a one-parameter model".into(),
                        ));
                    }
                    if let Some(pg) = &self.prime_grid {
                        if pg.len() != 1 {
                            return Err(Error::InvalidScan("prime grid needs exactly one axis".into()));
                        }
                        pg.iter().try_for_each(GridAxis::validate)?;
                    }
                }
                Quantity::Berry => {
                    if d < 2 {
                        return Err(Error::InvalidScan("berry needs at least two parameters".into()));
                    }
                    if routes_for(family, q).is_empty() {
                        return Err(Error::InvalidScan(format!(
                            "model `{}` has no pure-state kets; berry is undefined",
                            self.model.name()
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let family = build_family(&self.model)?;
        self.validate_with(&family)
    }

    fn prime_axes(&self) -> &[GridAxis] {
        self.prime_grid.as_deref().unwrap_or(&self.grid)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub coords: Vec<f64>,
    #[serde(default)]
    pub prime_coords: Option<Vec<f64>>,
    pub quantity: String,
    pub method: String,
    /// `None` when the evaluation failed.
    pub value: Option<f64>,
    /// Diagnostic code of a failed evaluation.
    #[serde(default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub model: ModelConfig,
    pub param_names: Vec<String>,
    pub quantities: Vec<Quantity>,
    pub stencil: StencilConfig,
    pub use_log: bool,
    pub version: String,
    pub timestamp_unix: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub metadata: Metadata,
    pub rows: Vec<Row>,
}

impl ScanResult {
    pub fn error_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    /// Value of the first row matching `quantity` and `method` at `coords`.
    pub fn lookup(&self, coords: &[f64], quantity: &str, method: &str) -> Option<&Row> {
        self.rows
            .iter()
            .find(|r| r.coords == coords && r.quantity == quantity && r.method == method)
    }
}

fn metadata(spec: &ScanSpec) -> Metadata {
    let timestamp_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Metadata {
        model: spec.model.clone(),
        param_names: spec.model.param_names(),
        quantities: spec.quantities.clone(),
        stencil: spec.stencil,
        use_log: spec.use_log,
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix,
    }
}

/// Every route's value of one geometric quantity at one point.
struct RouteValues {
    quantity: Quantity,
    values: Vec<(Route, Result<Tensor>)>,
}

fn evaluate_routes(family: &dyn StateFamily, x: &[f64], q: Quantity, spec: &ScanSpec) -> RouteValues {
    let values = routes_for(family, q)
        .into_iter()
        .map(|r| (r, evaluate(family, x, q, r, &spec.stencil, spec.use_log)))
        .collect();
    RouteValues { quantity: q, values }
}

fn tensor_rows(x: &[f64], rv: &RouteValues, d: usize) -> Vec<Row> {
    let ids = entry_ids(rv.quantity, d);
    let mut rows = Vec::new();
    for (route, result) in &rv.values {
        match result {
            Ok(t) => {
                for (id, v) in ids.iter().zip(t.values()) {
                    rows.push(Row {
                        coords: x.to_vec(),
                        prime_coords: None,
                        quantity: id.clone(),
                        method: route.name().into(),
                        value: Some(v),
                        error: None,
                    });
                }
            }
            Err(e) => {
                for id in &ids {
                    rows.push(Row {
                        coords: x.to_vec(),
                        prime_coords: None,
                        quantity: id.clone(),
                        method: route.name().into(),
                        value: None,
                        error: Some(e.code().into()),
                    });
                }
            }
        }
    }
    rows
}

/// One audit line: a route measured against the reference route of a quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub coords: Vec<f64>,
    pub quantity: Quantity,
    pub reference: Route,
    pub route: Route,
    pub abs_dev: Option<f64>,
    pub rel_dev: Option<f64>,
    pub error: Option<String>,
}

fn audit_rows(x: &[f64], rv: &RouteValues) -> Vec<AuditRow> {
    let Some((reference, ref_value)) = rv.values.first() else {
        return Vec::new();
    };
    rv.values[1..]
        .iter()
        .map(|(route, value)| {
            let (abs_dev, rel_dev, error) = match (ref_value, value) {
                (Ok(a), Ok(b)) => {
                    let (abs, rel) = deviation(b, a);
                    (Some(abs), Some(rel), None)
                }
                (Err(e), _) | (_, Err(e)) => (None, None, Some(e.code().to_string())),
            };
            AuditRow {
                coords: x.to_vec(),
                quantity: rv.quantity,
                reference: *reference,
                route: *route,
                abs_dev,
                rel_dev,
                error,
            }
        })
        .collect()
}

fn point_rows(family: &dyn StateFamily, spec: &ScanSpec, x: &[f64], primes: &[Vec<f64>]) -> Vec<Row> {
    let d = x.len();
    let mut rows = Vec::new();
    let mut computed: Vec<RouteValues> = Vec::new();
    let geometric = |computed: &mut Vec<RouteValues>, q: Quantity| -> usize {
        if let Some(i) = computed.iter().position(|rv| rv.quantity == q) {
            return i;
        }
        computed.push(evaluate_routes(family, x, q, spec));
        computed.len() - 1
    };
    for &q in &spec.quantities {
        match q {
            Quantity::FidelitySurface => {
                let method = fidelity_oracle(family);
                for xp in primes {
                    let r = genfun_eval(family, x, xp, GenFunKind::Fidelity);
                    rows.push(Row {
                        coords: x.to_vec(),
                        prime_coords: Some(xp.clone()),
                        quantity: "fidelity".into(),
                        method: method.into(),
                        value: r.as_ref().ok().copied(),
                        error: r.err().map(|e| e.code().to_string()),
                    });
                }
            }
            Quantity::CompareRoutes => {
                let targets: Vec<Quantity> = [Quantity::Qfim, Quantity::Metric, Quantity::Berry, Quantity::Christoffel]
                    .into_iter()
                    .filter(|q| routes_for(family, *q).len() >= 2 && (*q != Quantity::Berry || d >= 2))
                    .collect();
                for t in targets {
                    let i = geometric(&mut computed, t);
                    for a in audit_rows(x, &computed[i]) {
                        rows.push(Row {
                            coords: x.to_vec(),
                            prime_coords: None,
                            quantity: format!("rel_dev_{}", t.name()),
                            method: format!("{}_vs_{}", a.route.name(), a.reference.name()),
                            value: a.rel_dev,
                            error: a.error,
                        });
                    }
                }
            }
            q => {
                let i = geometric(&mut computed, q);
                rows.extend(tensor_rows(x, &computed[i], d));
            }
        }
    }
    rows
}

/// Evaluates every requested quantity on every grid point. Points run in
/// parallel; rows come back in grid order. Per-point failures become error rows.
pub fn run_scan(spec: &ScanSpec) -> Result<ScanResult> {
    let family = build_family(&spec.model)?;
    spec.validate_with(&family)?;
    let points = grid_points(&spec.grid);
    let primes = if spec.quantities.contains(&Quantity::FidelitySurface) {
        grid_points(spec.prime_axes())
    } else {
        Vec::new()
    };
    let family: &dyn StateFamily = &family;
    let rows: Vec<Vec<Row>> = points
        .par_iter()
        .map(|x| point_rows(family, spec, x, &primes))
        .collect();
    Ok(ScanResult {
        metadata: metadata(spec),
        rows: rows.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditSummary {
    pub quantity: Quantity,
    pub reference: Route,
    pub route: Route,
    pub tolerance: f64,
    pub points: usize,
    pub errors: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    pub median_rel: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    pub model: ModelConfig,
    pub rows: Vec<AuditRow>,
    pub summary: Vec<AuditSummary>,
}

impl Audit {
    /// True when every compared pair is within tolerance.
    pub fn passed(&self) -> bool {
        self.summary.iter().all(|s| s.pass)
    }

    pub fn error_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn find(&self, quantity: Quantity, route: Route) -> Option<&AuditSummary> {
        self.summary.iter().find(|s| s.quantity == quantity && s.route == route)
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Audits every pair of routes for the geometric quantities in `spec` (all that
/// have at least two routes when none are listed). Deviations are relative to the
/// reference route with magnitude floor [`REL_FLOOR`].
pub fn compare_routes(spec: &ScanSpec) -> Result<Audit> {
    let family = build_family(&spec.model)?;
    let mut spec = spec.clone();
    let d = family.param_dim();
    let mut targets: Vec<Quantity> = spec.quantities.iter().copied().filter(|q| q.is_geometric()).collect();
    if targets.is_empty() {
        targets = [Quantity::Qfim, Quantity::Metric, Quantity::Berry, Quantity::Christoffel]
            .into_iter()
            .filter(|q| *q != Quantity::Berry || (d >= 2 && !routes_for(&family, *q).is_empty()))
            .collect();
    }
    for &q in &targets {
        if routes_for(&family, q).len() < 2 {
            return Err(Error::InvalidScan(format!("{} has fewer than two routes for this model", q.name())));
        }
    }
    spec.quantities = targets.clone();
    spec.validate_with(&family)?;
    let family: &dyn StateFamily = &family;
    let points = grid_points(&spec.grid);
    let rows: Vec<AuditRow> = points
        .par_iter()
        .map(|x| {
            targets
                .iter()
                .flat_map(|&q| audit_rows(x, &evaluate_routes(family, x, q, &spec)))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let mut summary = Vec::new();
    for &q in &targets {
        let routes = routes_for(family, q);
        for &route in &routes[1..] {
            let sel: Vec<&AuditRow> = rows.iter().filter(|r| r.quantity == q && r.route == route).collect();
            let rels: Vec<f64> = sel.iter().filter_map(|r| r.rel_dev).collect();
            let max_abs = sel.iter().filter_map(|r| r.abs_dev).fold(0.0, f64::max);
            let max_rel = rels.iter().copied().fold(0.0, f64::max);
            let errors = sel.iter().filter(|r| r.error.is_some()).count();
            summary.push(AuditSummary {
                quantity: q,
                reference: routes[0],
                route,
                tolerance: q.tolerance(),
                points: sel.len(),
                errors,
                max_abs,
                max_rel,
                median_rel: median(rels),
                pass: max_rel <= q.tolerance(),
            });
        }
    }
    Ok(Audit {
        model: spec.model.clone(),
        rows,
        summary,
    })
}

/// Geometry at a single point from every available route family: `direct`,
/// `genfun`, and (where defined) `closed_form` and `classical`.
pub fn point_reports(
    family: &dyn StateFamily,
    x: &[f64],
    cfg: &StencilConfig,
    use_log: bool,
) -> Vec<(&'static str, Result<GeometryReport>)> {
    let caps = family.capabilities();
    let direct = || -> Result<GeometryReport> {
        let report = if caps.ket {
            qgt_pure(family, x)?
        } else if caps.bloch {
            qfim_bloch(family, x)?
        } else {
            qfim_sld(family, x)?
        };
        let gamma = if caps.bloch {
            christoffel_bloch(family, x)?
        } else {
            christoffel_from_metric(|y: &[f64]| qfim_direct(family, y), x, METRIC_FD_STEP)?
        };
        Ok(report.with_christoffel(gamma))
    };
    let genfun = || -> Result<GeometryReport> {
        let mut report = qfim_from_genfun(family, x, cfg, use_log)?;
        if caps.ket && x.len() >= 2 {
            report = report.with_berry(berry_matrix(family, x, cfg)?);
        }
        Ok(report.with_christoffel(christoffel_from_genfun(family, x, cfg)?))
    };
    let mut out = vec![("direct", direct()), ("genfun", genfun())];
    if caps.dvec && caps.ket {
        out.push(("closed_form", dirac_geometry_closed(family, x)));
    }
    if caps.ket && caps.real_ket {
        out.push(("classical", classical_fim(family, x)));
    }
    out
}
