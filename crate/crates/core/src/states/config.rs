//! JSON model configuration.
//!
//! ```json
//! {"model": "spin"}
//! {"model": "ssh", "delta_t": 0.2, "temperature": 0.5}
//! {"model": "dirac2d", "mass": 1.0}
//! {"model": "custom", "param_dim": 1, "target": "bloch",
//!  "components": [[{"coeff": 0.5, "factors": [{"atom": "sin", "var": 0}]}], [], []]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closest the SSH hopping asymmetry may get to the gapless chain `delta_t = 0`.
const SSH_GAP_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelConfig {
    /// Spin-1/2 in a field, parameter `b = mu_B B / k_B T`.
    Spin,
    /// SSH chain at temperature `T` (with `t = 1`, `k_B = 1`), parameter `k`.
    Ssh {
        delta_t: f64,
        #[serde(default)]
        temperature: f64,
    },
    /// `d = (k_x, k_y, m)`, parameters `(k_x, k_y)`.
    Dirac2d {
        mass: f64,
        #[serde(default)]
        temperature: f64,
    },
    Custom(CustomModel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CustomTarget {
    /// Components give the Bloch vector `r(x)` directly.
    Bloch,
    /// Components give `d(x)` of `H = d . sigma`; combined with `temperature`.
    Dvec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CustomModel {
    pub param_dim: usize,
    pub target: CustomTarget,
    /// Three component expressions, each a sum of terms.
    pub components: [Vec<Term>; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
}

/// `coeff * prod(factors)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: f64,
    #[serde(default)]
    pub factors: Vec<Atom>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "atom", rename_all = "lowercase")]
pub enum Atom {
    /// `x[var]^power`
    Poly { var: usize, power: u32 },
    /// `sin(freq * x[var] + phase)`
    Sin {
        var: usize,
        #[serde(default = "one")]
        freq: f64,
        #[serde(default)]
        phase: f64,
    },
    Cos {
        var: usize,
        #[serde(default = "one")]
        freq: f64,
        #[serde(default)]
        phase: f64,
    },
    Tanh {
        var: usize,
        #[serde(default = "one")]
        freq: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl Atom {
    pub fn var(&self) -> usize {
        match *self {
            Atom::Poly { var, .. }
            | Atom::Sin { var, .. }
            | Atom::Cos { var, .. }
            | Atom::Tanh { var, .. } => var,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match *self {
            Atom::Poly { var, power } => x[var].powi(power as i32),
            Atom::Sin { var, freq, phase } => (freq * x[var] + phase).sin(),
            Atom::Cos { var, freq, phase } => (freq * x[var] + phase).cos(),
            Atom::Tanh { var, freq, phase } => (freq * x[var] + phase).tanh(),
        }
    }

    fn is_finite(&self) -> bool {
        match *self {
            Atom::Poly { .. } => true,
            Atom::Sin { freq, phase, .. }
            | Atom::Cos { freq, phase, .. }
            | Atom::Tanh { freq, phase, .. } => freq.is_finite() && phase.is_finite(),
        }
    }
}

impl Term {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.factors.iter().fold(self.coeff, |acc, a| acc * a.eval(x))
    }
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::ConfigInvalid {
        field: field.into(),
        reason: reason.into(),
    }
}

fn check_temperature(field: &str, t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(invalid(field, format!("must be finite and >= 0, got {t}")));
    }
    Ok(())
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ModelConfig =
            serde_json::from_str(text).map_err(|e| invalid("<document>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelConfig::Spin => "spin",
            ModelConfig::Ssh { .. } => "ssh",
            ModelConfig::Dirac2d { .. } => "dirac2d",
            ModelConfig::Custom(_) => "custom",
        }
    }

    /// Parameter names, used as CSV coordinate headers.
    pub fn param_names(&self) -> Vec<String> {
        match self {
            ModelConfig::Spin => vec!["b".into()],
            ModelConfig::Ssh { .. } => vec!["k".into()],
            ModelConfig::Dirac2d { .. } => vec!["kx".into(), "ky".into()],
            ModelConfig::Custom(c) => (0..c.param_dim).map(|i| format!("x{i}")).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ModelConfig::Spin => Ok(()),
            ModelConfig::Ssh {
                delta_t,
                temperature,
            } => {
                if !delta_t.is_finite() {
                    return Err(invalid("delta_t", "must be finite"));
                }
                if delta_t.abs() <= SSH_GAP_MARGIN {
                    return Err(invalid("delta_t", "delta_t = 0 closes the gap at k = pi"));
                }
                check_temperature("temperature", *temperature)
            }
            ModelConfig::Dirac2d { mass, temperature } => {
                if !mass.is_finite() {
                    return Err(invalid("mass", "must be finite"));
                }
                check_temperature("temperature", *temperature)
            }
            ModelConfig::Custom(c) => {
                if c.param_dim == 0 {
                    return Err(invalid("param_dim", "must be at least 1"));
                }
                for (i, comp) in c.components.iter().enumerate() {
                    for (j, term) in comp.iter().enumerate() {
                        if !term.coeff.is_finite() {
                            return Err(invalid(
                                format!("components[{i}][{j}].coeff"),
                                "must be finite",
                            ));
                        }
                        for (k, atom) in term.factors.iter().enumerate() {
                            let field = format!("components[{i}][{j}].factors[{k}]");
                            if atom.var() >= c.param_dim {
                                return Err(invalid(
                                    field,
                                    format!(
                                        "var {} out of range for param_dim {}",
                                        atom.var(),
                                        c.param_dim
                                    ),
                                ));
                            }
                            if !atom.is_finite() {
                                return Err(invalid(field, "freq and phase must be finite"));
                            }
                        }
                    }
                }
                match (c.target, c.temperature) {
                    (CustomTarget::Bloch, Some(_)) => Err(invalid(
                        "temperature",
                        "only meaningful with target \"dvec\"",
                    )),
                    (CustomTarget::Dvec, Some(t)) => check_temperature("temperature", t),
                    _ => Ok(()),
                }
            }
        }
    }
}
