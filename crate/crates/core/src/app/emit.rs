//! CSV and JSON output.
//!
//! CSV columns: one per parameter, then `<name>_prime` columns when any row is a
//! two-slot surface value, then `quantity,method,value,error`. Floats carry 17
//! significant digits; failed evaluations print `NaN` with the diagnostic code.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Audit, ScanResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (csv | json)")),
        }
    }
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_else(|| "NaN".into())
}

pub fn write_csv<W: Write>(result: &ScanResult, w: W) -> io::Result<()> {
    let names = &result.metadata.param_names;
    let primed = result.rows.iter().any(|r| r.prime_coords.is_some());
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = names.clone();
    if primed {
        header.extend(names.iter().map(|n| format!("{n}_prime")));
    }
    header.extend(["quantity", "method", "value", "error"].map(String::from));
    out.write_record(&header)?;
    for row in &result.rows {
        let mut rec: Vec<String> = row.coords.iter().map(|v| float(*v)).collect();
        if primed {
            match &row.prime_coords {
                Some(p) => rec.extend(p.iter().map(|v| float(*v))),
                None => rec.extend(names.iter().map(|_| String::new())),
            }
        }
        rec.push(row.quantity.clone());
        rec.push(row.method.clone());
        rec.push(opt_float(row.value));
        rec.push(row.error.clone().unwrap_or_default());
        out.write_record(&rec)?;
    }
    out.flush()
}

pub fn write_json<W: Write>(result: &ScanResult, mut w: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, result)?;
    writeln!(w)
}

pub fn parse_json(text: &str) -> serde_json::Result<ScanResult> {
    serde_json::from_str(text)
}

fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Writes `result` to `path` (stdout when `None`).
pub fn emit(result: &ScanResult, format: Format, path: Option<&Path>) -> io::Result<()> {
    let w = open(path)?;
    match format {
        Format::Csv => write_csv(result, w),
        Format::Json => write_json(result, w),
    }
}

pub fn write_audit_csv<W: Write>(audit: &Audit, param_names: &[String], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header: Vec<String> = param_names.to_vec();
    header.extend(
        ["quantity", "reference", "route", "abs_dev", "rel_dev", "tolerance", "pass", "error"].map(String::from),
    );
    out.write_record(&header)?;
    for r in &audit.rows {
        let tol = r.quantity.tolerance();
        let pass = r.rel_dev.is_some_and(|v| v <= tol);
        let mut rec: Vec<String> = r.coords.iter().map(|v| float(*v)).collect();
        rec.extend([
            r.quantity.name().to_string(),
            r.reference.name().to_string(),
            r.route.name().to_string(),
            opt_float(r.abs_dev),
            opt_float(r.rel_dev),
            float(tol),
            pass.to_string(),
            r.error.clone().unwrap_or_default(),
        ]);
        out.write_record(&rec)?;
    }
    out.flush()
}

pub fn emit_audit(audit: &Audit, param_names: &[String], format: Format, path: Option<&Path>) -> io::Result<()> {
    let mut w = open(path)?;
    match format {
        Format::Csv => write_audit_csv(audit, param_names, w),
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, audit)?;
            writeln!(w)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::app::{run_scan, GridAxis, Quantity, Row, ScanSpec};
    use crate::states::ModelConfig;

    fn one_row() -> ScanResult {
        let spec = ScanSpec::new(ModelConfig::Spin, vec![GridAxis::new(0.0, 1.0, 2)], vec![Quantity::Qfim]);
        let mut r = run_scan(&spec).unwrap();
        r.rows.truncate(1);
        r
    }

    #[test]
    fn one_row_is_two_lines() {
        let mut buf = Vec::new();
        write_csv(&one_row(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "b,quantity,method,value,error");
        assert!(lines[1].starts_with("0.0000000000000000e0,qfim_0_0,bloch,"));
    }

    #[test]
    fn floats_round_trip_through_text() {
        let v = 0.1f64 + 0.2;
        assert_eq!(float(v).parse::<f64>().unwrap(), v);
        assert_eq!(float(v).split('e').next().unwrap().replace('.', "").len(), 17);
    }

    #[test]
    fn surface_columns() {
        let mut spec = ScanSpec::new(
            ModelConfig::Ssh { delta_t: 0.2, temperature: 0.5 },
            vec![GridAxis::new(-1.0, 1.0, 2)],
            vec![Quantity::FidelitySurface],
        );
        spec.prime_grid = Some(vec![GridAxis::new(-1.0, 1.0, 3)]);
        let r = run_scan(&spec).unwrap();
        let mut buf = Vec::new();
        write_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "k,k_prime,quantity,method,value,error");
        assert_eq!(text.lines().count(), 1 + 6);
    }

    #[test]
    fn json_round_trip_with_error_rows() {
        let mut r = one_row();
        r.rows.push(Row {
            coords: vec![0.5],
            prime_coords: None,
            quantity: "qfim_0_0".into(),
            method: "genfun".into(),
            value: None,
            error: Some("GAP_CLOSURE".into()),
        });
        let mut buf = Vec::new();
        write_json(&r, &mut buf).unwrap();
        let back = parse_json(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
