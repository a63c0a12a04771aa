//! Command-line front end: grid scans, route audits and single-point reports.
//!
//! Exit status: 0 success, 1 route deviation above tolerance (`compare`),
//! 2 invalid configuration or I/O failure, 3 partial results (error rows present).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qgeom::app::{
    compare_routes, emit, emit_audit, point_reports, run_scan, Format, GridAxis, Quantity, ScanSpec,
};
use qgeom::numdiff::StencilConfig;
use qgeom::states::{build_family, ModelConfig};

#[derive(Parser)]
#[command(version, about = "Quantum Fisher information, metric, Berry curvature and Christoffel symbols by two routes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate quantities over a parameter grid
    Scan {
        #[command(flatten)]
        grid: GridArgs,
        /// Axis for the x' slot of fidelity surfaces (defaults to --grid)
        #[arg(long)]
        prime_grid: Option<String>,
        /// fidelity_surface | qfim | metric | berry | christoffel | ray_check | compare_routes
        #[arg(long = "quantity", required = true)]
        quantities: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Audit the deviations between routes over a grid
    Compare {
        #[command(flatten)]
        grid: GridArgs,
        /// Quantities to audit (default: every one with two or more routes)
        #[arg(long = "quantity")]
        quantities: Vec<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dump the geometry reports of every route at one point as JSON
    Point {
        #[arg(long)]
        model_config: PathBuf,
        /// Comma-separated coordinates
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[command(flatten)]
        stencil: StencilArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a model configuration file
    ValidateConfig {
        #[arg(long)]
        model_config: PathBuf,
    },
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    model_config: PathBuf,
    /// One `min:max:count` axis per parameter, in order
    #[arg(long = "grid", required = true, allow_hyphen_values = true)]
    axes: Vec<String>,
    #[command(flatten)]
    stencil: StencilArgs,
}

#[derive(Args)]
struct StencilArgs {
    #[arg(long, default_value_t = 1e-3)]
    h2: f64,
    #[arg(long, default_value_t = 1e-2)]
    h3: f64,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    richardson: bool,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    use_log: bool,
}

impl StencilArgs {
    fn config(&self) -> StencilConfig {
        StencilConfig {
            h2: self.h2,
            h3: self.h3,
            richardson: self.richardson,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Io(String),
}

impl From<qgeom::Error> for Failure {
    fn from(e: qgeom::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn load_model(path: &Path) -> Result<ModelConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    Ok(ModelConfig::from_json(&text)?)
}

fn parse_quantities(names: &[String]) -> Result<Vec<Quantity>, Failure> {
    names
        .iter()
        .flat_map(|n| n.split(','))
        .map(|n| Quantity::parse(n.trim()).ok_or_else(|| Failure::Config(format!("unknown quantity `{n}`"))))
        .collect()
}

fn build_spec(grid: &GridArgs, quantities: Vec<Quantity>, output: &OutputArgs) -> Result<ScanSpec, Failure> {
    let model = load_model(&grid.model_config)?;
    let axes = grid
        .axes
        .iter()
        .map(|a| GridAxis::parse(a))
        .collect::<qgeom::Result<Vec<_>>>()?;
    let mut spec = ScanSpec::new(model, axes, quantities);
    spec.stencil = grid.stencil.config();
    spec.use_log = grid.stencil.use_log;
    spec.format = output.format;
    spec.out = output.out.clone();
    Ok(spec)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Scan {
            grid,
            prime_grid,
            quantities,
            output,
        } => {
            let mut spec = build_spec(&grid, parse_quantities(&quantities)?, &output)?;
            if let Some(p) = prime_grid {
                spec.prime_grid = Some(vec![GridAxis::parse(&p)?]);
            }
            let result = run_scan(&spec)?;
            emit(&result, spec.format, spec.out.as_deref())?;
            let errors = result.error_rows();
            if errors > 0 {
                eprintln!("{errors} of {} rows failed", result.rows.len());
                return Ok(3);
            }
            Ok(0)
        }
        Command::Compare {
            grid,
            quantities,
            output,
        } => {
            let spec = build_spec(&grid, parse_quantities(&quantities)?, &output)?;
            let audit = compare_routes(&spec)?;
            emit_audit(&audit, &spec.model.param_names(), spec.format, spec.out.as_deref())?;
            for s in &audit.summary {
                eprintln!(
                    "{:<12} {:>11} vs {:<11} max_rel {:.3e}  median_rel {:.3e}  tol {:.0e}  errors {}  {}",
                    s.quantity.name(),
                    s.route.name(),
                    s.reference.name(),
                    s.max_rel,
                    s.median_rel,
                    s.tolerance,
                    s.errors,
                    if s.pass { "ok" } else { "FAIL" }
                );
            }
            if !audit.passed() {
                return Ok(1);
            }
            Ok(if audit.error_rows() > 0 { 3 } else { 0 })
        }
        Command::Point {
            model_config,
            at,
            stencil,
            out,
        } => {
            let model = load_model(&model_config)?;
            let family = build_family(&model)?;
            let x = at
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Config(format!("--at: {e}")))?;
            qgeom::states::check_point(&x, qgeom::states::StateFamily::param_dim(&family))?;
            let cfg = stencil.config();
            cfg.validate()?;
            let reports = point_reports(&family, &x, &cfg, stencil.use_log);
            let mut failed = false;
            let entries: Vec<serde_json::Value> = reports
                .iter()
                .map(|(route, r)| match r {
                    Ok(report) => serde_json::json!({ "route": route, "report": report }),
                    Err(e) => {
                        failed = true;
                        serde_json::json!({ "route": route, "error": e.code(), "message": e.to_string() })
                    }
                })
                .collect();
            let doc = serde_json::json!({ "model": model, "at": x, "reports": entries });
            let text = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Io(e.to_string()))?;
            match out {
                Some(p) => std::fs::write(p, text + "\n")?,
                None => println!("{text}"),
            }
            Ok(if failed { 3 } else { 0 })
        }
        Command::ValidateConfig { model_config } => {
            let model = load_model(&model_config)?;
            println!("ok: {} model, parameters {:?}", model.name(), model.param_names());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            ExitCode::from(2)
        }
    }
}
