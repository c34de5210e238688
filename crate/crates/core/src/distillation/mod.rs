//! Entanglement distillation: unit error models, an enumeration oracle that
//! re-derives them, multi-level factory composition and factory search.

pub(crate) mod factory;
pub mod oracle;
pub mod poly;
mod search;
mod table;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use poly::Polynomial;

pub use factory::{
    compose_multilevel, compose_multilevel_with, level_clifford_error, level_cycle_time, ChainOptions,
    CopiesPolicy, FactoryLevel, MultiLevelFactory,
};
pub use oracle::enumerate_unit_model;
pub use search::{search_factories, EdfExplorer, FactoryCatalog, SearchOptions};
pub use table::tabulated_model;

/// Per-Bell-pair probabilities of an X, Y or Z error.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PauliErrorRates {
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
}

impl PauliErrorRates {
    pub fn new(p_x: f64, p_y: f64, p_z: f64) -> Result<Self> {
        let rates = Self { p_x, p_y, p_z };
        rates.validate()?;
        Ok(rates)
    }

    pub const fn zero() -> Self {
        Self {
            p_x: 0.0,
            p_y: 0.0,
            p_z: 0.0,
        }
    }

    /// Splits a total error evenly over X, Y and Z.
    pub fn depolarizing(total: f64) -> Result<Self> {
        Self::new(total / 3.0, total / 3.0, total / 3.0)
    }

    /// Splits `total` proportionally to `weights` (X, Y, Z).
    pub fn split(total: f64, weights: [f64; 3]) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|w| *w < 0.0) || !(sum > 0.0) {
            return Err(Error::InvalidInput(format!(
                "Bell error split weights must be non-negative with a positive sum, got {weights:?}"
            )));
        }
        Self::new(
            total * weights[0] / sum,
            total * weights[1] / sum,
            total * weights[2] / sum,
        )
    }

    pub fn total(&self) -> f64 {
        self.p_x + self.p_y + self.p_z
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.p_x, self.p_y, self.p_z]
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.as_array().iter().all(|v| v.is_finite() && (0.0..=1.0).contains(v))
            && self.total() <= 1.0 + 1e-12;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "Pauli error rates must be probabilities summing to at most 1, got {self:?}"
            )))
        }
    }
}

/// Distillation unit families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UnitKind {
    #[serde(rename = "5Q")]
    FiveQubitPerfect,
    #[serde(rename = "2Q(X)")]
    RepetitionX,
    #[serde(rename = "2Q(Y)")]
    RepetitionY,
    #[serde(rename = "2Q(Z)")]
    RepetitionZ,
}

impl UnitKind {
    pub const ALL: [UnitKind; 4] = [
        UnitKind::FiveQubitPerfect,
        UnitKind::RepetitionX,
        UnitKind::RepetitionY,
        UnitKind::RepetitionZ,
    ];

    pub fn label(self) -> &'static str {
        match self {
            UnitKind::FiveQubitPerfect => "5Q",
            UnitKind::RepetitionX => "2Q(X)",
            UnitKind::RepetitionY => "2Q(Y)",
            UnitKind::RepetitionZ => "2Q(Z)",
        }
    }

    pub fn is_repetition(self) -> bool {
        !matches!(self, UnitKind::FiveQubitPerfect)
    }
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for UnitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        UnitKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::NotFound {
                kind: "distillation unit",
                name: s.to_string(),
            })
    }
}

/// Rejection and output-error polynomials of a unit.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitErrorModel {
    pub rejection: Polynomial,
    pub out_x: Polynomial,
    pub out_y: Polynomial,
    pub out_z: Polynomial,
}

impl UnitErrorModel {
    pub fn polynomials(&self) -> [&Polynomial; 4] {
        [&self.rejection, &self.out_x, &self.out_y, &self.out_z]
    }

    fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> UnitErrorModel {
        UnitErrorModel {
            rejection: f(&self.rejection),
            out_x: f(&self.out_x),
            out_y: f(&self.out_y),
            out_z: f(&self.out_z),
        }
    }

    pub fn input_part(&self) -> UnitErrorModel {
        self.map(Polynomial::input_part)
    }

    pub fn clifford_part(&self) -> UnitErrorModel {
        self.map(Polynomial::clifford_part)
    }
}

/// One distillation unit: a code, its footprint in tiles and its duration in
/// logical cycles.
#[derive(Debug, Clone, PartialEq)]
pub struct DistillationUnit {
    pub kind: UnitKind,
    pub inputs: u32,
    pub outputs: u32,
    pub tiles: u32,
    pub duration_cycles: u32,
    pub model: UnitErrorModel,
}

impl DistillationUnit {
    /// The unit with its tabulated error model.
    pub fn new(kind: UnitKind) -> Self {
        Self::with_model(kind, tabulated_model(kind))
    }

    pub fn with_model(kind: UnitKind, model: UnitErrorModel) -> Self {
        let (inputs, tiles, duration_cycles) = match kind {
            UnitKind::FiveQubitPerfect => (5, 15, 3),
            _ => (2, 2, 2),
        };
        Self {
            kind,
            inputs,
            outputs: 1,
            tiles,
            duration_cycles,
            model,
        }
    }
}

/// Acceptance probability and output error rates of one unit run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitOutcome {
    pub accept_prob: f64,
    pub out_rates: PauliErrorRates,
}

/// Evaluates the unit's polynomials without renormalization.
pub fn evaluate_unit(unit: &DistillationUnit, in_rates: PauliErrorRates, p: f64) -> Result<UnitOutcome> {
    evaluate_unit_with(unit, in_rates, p, false)
}

/// Evaluates the unit's polynomials; with `renormalize` the output error is
/// divided by the acceptance probability.
pub fn evaluate_unit_with(
    unit: &DistillationUnit,
    in_rates: PauliErrorRates,
    p: f64,
    renormalize: bool,
) -> Result<UnitOutcome> {
    in_rates.validate()?;
    if !(0.0..0.1).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "Clifford error rate must lie in [0, 0.1), got {p}"
        )));
    }
    let vars = [in_rates.p_x, in_rates.p_y, in_rates.p_z, p];
    let rejection = unit.model.rejection.evaluate(vars);
    if !(rejection < 1.0) {
        return Err(Error::InvalidRegime(format!(
            "{} rejects with probability {rejection}",
            unit.kind
        )));
    }
    let accept_prob = 1.0 - rejection;
    let mut out = [
        unit.model.out_x.evaluate(vars),
        unit.model.out_y.evaluate(vars),
        unit.model.out_z.evaluate(vars),
    ];
    if out.iter().any(|v| *v < 0.0 || !v.is_finite()) || rejection < 0.0 {
        return Err(Error::InvalidRegime(format!(
            "{} produced negative probabilities {out:?}",
            unit.kind
        )));
    }
    if renormalize {
        for v in &mut out {
            *v /= accept_prob;
        }
    }
    let out_rates = PauliErrorRates {
        p_x: out[0],
        p_y: out[1],
        p_z: out[2],
    };
    out_rates
        .validate()
        .map_err(|_| Error::InvalidRegime(format!("{} output {out_rates:?}", unit.kind)))?;
    Ok(UnitOutcome { accept_prob, out_rates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn repetition_z_example() {
        let unit = DistillationUnit::new(UnitKind::RepetitionZ);
        let rates = PauliErrorRates::new(0.01, 0.01, 0.01).unwrap();
        let out = evaluate_unit(&unit, rates, 0.0).unwrap();
        assert_relative_eq!(1.0 - out.accept_prob, 0.0404, max_relative = 1e-12);
        assert_relative_eq!(out.out_rates.p_z, 0.02, max_relative = 1e-12);
        assert_relative_eq!(out.out_rates.p_x, 2e-4, max_relative = 1e-12);
        assert_relative_eq!(out.out_rates.p_y, 2e-4, max_relative = 1e-12);
    }

    #[test]
    fn five_qubit_zero_error_fixed_point() {
        let unit = DistillationUnit::new(UnitKind::FiveQubitPerfect);
        let out = evaluate_unit(&unit, PauliErrorRates::zero(), 0.0).unwrap();
        assert_eq!(out.accept_prob, 1.0);
        assert_eq!(out.out_rates, PauliErrorRates::zero());
    }

    #[test]
    fn repetition_x_pure_x_input() {
        let unit = DistillationUnit::new(UnitKind::RepetitionX);
        let rates = PauliErrorRates::new(0.02, 0.0, 0.0).unwrap();
        let out = evaluate_unit(&unit, rates, 0.0).unwrap();
        assert_eq!(out.accept_prob, 1.0);
        assert_relative_eq!(out.out_rates.p_x, 0.04, max_relative = 1e-12);
        assert_eq!(out.out_rates.p_y, 0.0);
        assert_eq!(out.out_rates.p_z, 0.0);
    }

    #[test]
    fn renormalization_divides_by_acceptance() {
        let unit = DistillationUnit::new(UnitKind::RepetitionZ);
        let rates = PauliErrorRates::new(0.01, 0.01, 0.01).unwrap();
        let out = evaluate_unit_with(&unit, rates, 0.0, true).unwrap();
        assert_relative_eq!(out.out_rates.p_z, 0.02 / 0.9596, max_relative = 1e-12);
    }

    #[test]
    fn regime_errors() {
        let unit = DistillationUnit::new(UnitKind::FiveQubitPerfect);
        let rates = PauliErrorRates::new(0.1, 0.1, 0.1).unwrap();
        assert!(matches!(evaluate_unit(&unit, rates, 0.0), Err(Error::InvalidRegime(_))));
        assert!(matches!(
            evaluate_unit(&unit, PauliErrorRates::zero(), 0.2),
            Err(Error::InvalidInput(_))
        ));
        assert!(PauliErrorRates::new(0.5, 0.4, 0.3).is_err());
    }

    #[test]
    fn unit_shapes() {
        let five = DistillationUnit::new(UnitKind::FiveQubitPerfect);
        assert_eq!((five.inputs, five.tiles, five.duration_cycles), (5, 15, 3));
        let rep = DistillationUnit::new(UnitKind::RepetitionY);
        assert_eq!((rep.inputs, rep.tiles, rep.duration_cycles), (2, 2, 2));
        assert_eq!("2q(z)".parse::<UnitKind>().unwrap(), UnitKind::RepetitionZ);
        assert!("3Q".parse::<UnitKind>().is_err());
    }
}
