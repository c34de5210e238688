//! Run configuration files (TOML or JSON). Unknown keys are rejected.
//!
//! ```toml
//! [hardware]
//! preset = "fast-optimistic"
//! bell_error = 0.01
//! eta = 1e7
//!
//! [application]
//! name = "my-app"
//! data_qubits = 200
//! t_count = 1e9
//!
//! [estimator]
//! eta_mode = "refined"
//! accounting = "packed"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::catalog::{lookup_application, lookup_preset};
use crate::distillation::PauliErrorRates;
use crate::error::{Error, Result};
use crate::estimator::{ApplicationProfile, EstimatorOptions, HardwareModel};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub hardware: HardwareSection,
    pub application: Option<ApplicationSection>,
    pub estimator: EstimatorOptions,
}

/// Hardware fields layered over an optional preset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HardwareSection {
    pub preset: Option<String>,
    pub t_op: Option<f64>,
    pub p: Option<f64>,
    /// Total raw Bell error.
    pub bell_error: Option<f64>,
    /// Relative X, Y, Z shares of the raw Bell error; even by default.
    pub bell_weights: Option<[f64; 3]>,
    pub eta: Option<f64>,
    pub node_size: Option<u64>,
    pub cycle_factor: Option<f64>,
}

impl HardwareSection {
    /// Applies the set fields on top of `preset` (or the section's own preset).
    pub fn resolve(&self, default_preset: &str) -> Result<HardwareModel> {
        let mut hw = lookup_preset(self.preset.as_deref().unwrap_or(default_preset))?.hardware;
        if let Some(t) = self.t_op {
            hw.qubit.t_op = t;
        }
        if let Some(p) = self.p {
            hw.qubit.p = p;
        }
        if self.bell_error.is_some() || self.bell_weights.is_some() {
            let total = self.bell_error.unwrap_or_else(|| hw.bell_error.total());
            let w = self.bell_weights.unwrap_or([1.0, 1.0, 1.0]);
            hw.bell_error = PauliErrorRates::split(total, w)?;
        }
        if let Some(e) = self.eta {
            hw.eta = e;
        }
        if let Some(n) = self.node_size {
            hw.node_size = n;
        }
        if let Some(c) = self.cycle_factor {
            hw.cycle_factor = c;
        }
        hw.validate()?;
        Ok(hw)
    }

    /// Fields of `other` that are set win.
    pub fn merged(&self, other: &HardwareSection) -> HardwareSection {
        HardwareSection {
            preset: other.preset.clone().or_else(|| self.preset.clone()),
            t_op: other.t_op.or(self.t_op),
            p: other.p.or(self.p),
            bell_error: other.bell_error.or(self.bell_error),
            bell_weights: other.bell_weights.or(self.bell_weights),
            eta: other.eta.or(self.eta),
            node_size: other.node_size.or(self.node_size),
            cycle_factor: other.cycle_factor.or(self.cycle_factor),
        }
    }
}

/// A built-in application by name, a fully custom one, or a built-in with
/// some fields replaced.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApplicationSection {
    pub name: Option<String>,
    pub data_qubits: Option<u64>,
    pub t_count: Option<f64>,
    pub eps_total: Option<f64>,
}

impl ApplicationSection {
    pub fn resolve(&self) -> Result<ApplicationProfile> {
        let base = match (&self.name, self.data_qubits, self.t_count) {
            (Some(name), Some(q), Some(t)) => ApplicationProfile {
                name: name.clone(),
                data_qubits: q,
                t_count: t,
                eps_total: 0.01,
            },
            (Some(name), _, _) => lookup_application(name)?,
            (None, Some(q), Some(t)) => ApplicationProfile {
                name: "custom".into(),
                data_qubits: q,
                t_count: t,
                eps_total: 0.01,
            },
            _ => {
                return Err(Error::Config(
                    "application needs a built-in name or both data_qubits and t_count".into(),
                ))
            }
        };
        let app = ApplicationProfile {
            data_qubits: self.data_qubits.unwrap_or(base.data_qubits),
            t_count: self.t_count.unwrap_or(base.t_count),
            eps_total: self.eps_total.unwrap_or(base.eps_total),
            ..base
        };
        app.validate()?;
        Ok(app)
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads `.json` files as JSON and everything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg = match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Self::from_json(&text)?,
            _ => Self::from_toml(&text)?,
        };
        cfg.estimator.msdf.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::{Accounting, EtaMode};

    #[test]
    fn toml_round_trip() {
        let cfg = RunConfig::from_toml(
            r#"
            [hardware]
            preset = "slow-optimistic"
            bell_error = 0.01
            node_size = 25000

            [application]
            name = "ising"
            eps_total = 0.001

            [estimator]
            eta_mode = "refined"
            accounting = "packed"
            budget_weights = [2.0, 1.0, 1.0]

            [estimator.msdf]
            injection_factor = 5.0
            "#,
        )
        .unwrap();
        let hw = cfg.hardware.resolve("fast-optimistic").unwrap();
        assert_eq!(hw.qubit.t_op, 100e-6);
        assert_eq!(hw.node_size, 25_000);
        assert!((hw.bell_error.total() - 0.01).abs() < 1e-15);
        let app = cfg.application.as_ref().unwrap().resolve().unwrap();
        assert_eq!(app.data_qubits, 100);
        assert_eq!(app.eps_total, 0.001);
        assert_eq!(cfg.estimator.eta_mode, EtaMode::Refined);
        assert_eq!(cfg.estimator.accounting, Accounting::Packed);
        assert_eq!(cfg.estimator.msdf.injection_factor, 5.0);
        assert_eq!(cfg.estimator.msdf.max_levels, 3);
    }

    #[test]
    fn json_custom_application() {
        let cfg = RunConfig::from_json(
            r#"{"application": {"name": "toy", "data_qubits": 10, "t_count": 1000}, "hardware": {"eta": 1e6}}"#,
        )
        .unwrap();
        let app = cfg.application.unwrap().resolve().unwrap();
        assert_eq!((app.name.as_str(), app.data_qubits, app.t_count), ("toy", 10, 1000.0));
        assert_eq!(cfg.hardware.resolve("fast-optimistic").unwrap().eta, 1e6);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(matches!(
            RunConfig::from_toml("[hardware]\nspeed = 3\n"),
            Err(Error::Config(_))
        ));
        assert!(matches!(RunConfig::from_toml("colour = 1\n"), Err(Error::Config(_))));
        assert!(matches!(
            RunConfig::from_json(r#"{"estimator": {"eta_mode": "loose"}}"#),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn bad_values_rejected() {
        let section = HardwareSection {
            eta: Some(-1.0),
            ..Default::default()
        };
        assert!(section.resolve("fast-optimistic").is_err());
        let app = ApplicationSection {
            data_qubits: Some(10),
            ..Default::default()
        };
        assert!(app.resolve().is_err());
    }
}
