//! Magic-state distillation factories built from 15-to-1 and 20-to-4 units.
//!
//! A unit at distance `d` takes `inputs` T states with error `p_in` and
//! returns `outputs` states with error `coefficient * p_in^power` plus a
//! floor `floor_coefficient * eps(d)` from logical faults inside the unit.
//! The unit rejects with probability `inputs * p_in`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distillation::factory::{schedule, Stage};
use crate::distillation::CopiesPolicy;
use crate::error::{Error, Result};
use crate::surface_code::{check_distance, logical_error_rate, PhysicalQubitModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MsdfKind {
    #[serde(rename = "15-to-1")]
    FifteenToOne,
    #[serde(rename = "20-to-4")]
    TwentyToFour,
}

impl MsdfKind {
    pub const ALL: [MsdfKind; 2] = [MsdfKind::FifteenToOne, MsdfKind::TwentyToFour];

    pub fn label(self) -> &'static str {
        match self {
            MsdfKind::FifteenToOne => "15-to-1",
            MsdfKind::TwentyToFour => "20-to-4",
        }
    }
}

impl fmt::Display for MsdfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MsdfKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MsdfKind::ALL
            .into_iter()
            .find(|k| k.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::NotFound {
                kind: "magic-state unit",
                name: s.to_string(),
            })
    }
}

/// Footprint and error model of one MSDF unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MsdfUnit {
    pub inputs: u32,
    pub outputs: u32,
    pub tiles: u32,
    pub duration_cycles: u32,
    pub coefficient: f64,
    pub power: u32,
    pub floor_coefficient: f64,
}

impl MsdfUnit {
    pub fn fifteen_to_one() -> Self {
        Self {
            inputs: 15,
            outputs: 1,
            tiles: 11,
            duration_cycles: 24,
            coefficient: 35.0,
            power: 3,
            floor_coefficient: 264.0,
        }
    }

    pub fn twenty_to_four() -> Self {
        Self {
            inputs: 20,
            outputs: 4,
            tiles: 14,
            duration_cycles: 24,
            coefficient: 22.0,
            power: 2,
            floor_coefficient: 336.0,
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        let ok = self.inputs > self.outputs
            && self.outputs >= 1
            && self.tiles >= 1
            && self.duration_cycles >= 1
            && self.power >= 1
            && self.coefficient >= 0.0
            && self.floor_coefficient >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("malformed {name} unit {self:?}")))
        }
    }

    /// `(accept, out_error)` for input error `p_in` at level error `p_level`.
    pub fn evaluate(&self, p_in: f64, p_level: f64) -> Result<(f64, f64)> {
        let rejection = f64::from(self.inputs) * p_in;
        if !(rejection < 1.0) {
            return Err(Error::InvalidRegime(format!(
                "MSDF unit rejects with probability {rejection}"
            )));
        }
        let out = self.coefficient * p_in.powi(self.power as i32) + self.floor_coefficient * p_level;
        Ok((1.0 - rejection, out))
    }
}

/// MSDF model parameters; all overridable from a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MsdfParams {
    pub fifteen_to_one: MsdfUnit,
    pub twenty_to_four: MsdfUnit,
    /// Raw T-state error as a multiple of the physical error rate.
    pub injection_factor: f64,
    pub max_levels: usize,
    pub min_distance: u32,
    pub max_distance: u32,
}

impl Default for MsdfParams {
    fn default() -> Self {
        Self {
            fifteen_to_one: MsdfUnit::fifteen_to_one(),
            twenty_to_four: MsdfUnit::twenty_to_four(),
            injection_factor: 10.0,
            max_levels: 3,
            min_distance: 3,
            max_distance: 45,
        }
    }
}

impl MsdfParams {
    pub fn unit(&self, kind: MsdfKind) -> &MsdfUnit {
        match kind {
            MsdfKind::FifteenToOne => &self.fifteen_to_one,
            MsdfKind::TwentyToFour => &self.twenty_to_four,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.fifteen_to_one.validate("15-to-1")?;
        self.twenty_to_four.validate("20-to-4")?;
        if !(self.injection_factor >= 0.0) || self.max_levels == 0 {
            return Err(Error::InvalidInput(format!(
                "bad MSDF parameters: injection factor {}, max levels {}",
                self.injection_factor, self.max_levels
            )));
        }
        check_distance(self.min_distance)?;
        check_distance(self.max_distance)?;
        Ok(())
    }

    pub fn raw_error(&self, p: f64) -> f64 {
        self.injection_factor * p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsdfLevel {
    pub unit: MsdfKind,
    pub distance: u32,
    pub copies: u32,
    pub accept_prob: f64,
    pub out_error: f64,
}

/// A chained magic-state factory with its aggregate costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsdfFactory {
    pub levels: Vec<MsdfLevel>,
    /// Q_M: physical qubits.
    pub physical_qubits: u64,
    pub latency_steps: f64,
    /// T_M: expected time between batches, in physical time steps.
    pub period_steps: f64,
    /// I_M: raw T states consumed per batch.
    pub raw_inputs: f64,
    /// O_M: T states delivered per batch.
    pub outputs: u32,
    pub input_error: f64,
    pub output_error: f64,
}

impl MsdfFactory {
    pub fn label(&self) -> String {
        self.levels
            .iter()
            .map(|l| format!("{}@{}x{}", l.unit, l.distance, l.copies))
            .collect::<Vec<_>>()
            .join(" > ")
    }

    /// Steps per delivered T state from one factory.
    pub fn steps_per_state(&self) -> f64 {
        self.period_steps / f64::from(self.outputs)
    }
}

/// Threads `p_in` through `chain` and schedules it under `policy`.
pub fn compose_msdf(
    chain: &[(MsdfKind, u32)],
    p_in: f64,
    p: f64,
    params: &MsdfParams,
    policy: &CopiesPolicy,
    cycle_factor: f64,
) -> Result<MsdfFactory> {
    if chain.is_empty() {
        return Err(Error::InvalidInput("MSDF chain is empty".into()));
    }
    if !(0.0..1.0).contains(&p_in) || !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "MSDF error rates must lie in [0, 1): p_in = {p_in}, p = {p}"
        )));
    }
    let mut err = p_in;
    let mut levels = Vec::with_capacity(chain.len());
    let mut stages = Vec::with_capacity(chain.len());
    for &(kind, d) in chain {
        check_distance(d)?;
        let unit = params.unit(kind);
        let (accept, out) = unit.evaluate(err, logical_error_rate(d, p))?;
        if out >= err && !(out == 0.0 && err == 0.0) {
            return Err(Error::InvalidRegime(format!(
                "{kind}@{d} raises the T-state error from {err:e} to {out:e}"
            )));
        }
        stages.push(Stage {
            inputs: unit.inputs,
            outputs: unit.outputs,
            tiles: unit.tiles,
            duration_cycles: unit.duration_cycles,
            distance: d,
            accept,
        });
        levels.push(MsdfLevel {
            unit: kind,
            distance: d,
            copies: 0,
            accept_prob: accept,
            out_error: out,
        });
        err = out;
    }
    let s = schedule(&stages, policy, cycle_factor)?;
    for (level, copies) in levels.iter_mut().zip(&s.copies) {
        level.copies = *copies;
    }
    Ok(MsdfFactory {
        levels,
        physical_qubits: s.physical_qubits,
        latency_steps: s.latency_steps,
        period_steps: s.period_steps,
        raw_inputs: s.raw_inputs,
        outputs: s.outputs,
        input_error: p_in,
        output_error: err,
    })
}

/// Every non-dominated MSDF for one qubit model, ascending in error.
#[derive(Debug, Clone)]
pub struct MsdfExplorer {
    frontier: Vec<MsdfFactory>,
}

impl MsdfExplorer {
    pub fn new(qubit: &PhysicalQubitModel, params: &MsdfParams, cycle_factor: f64) -> Result<Self> {
        qubit.validate()?;
        params.validate()?;
        let p_in = params.raw_error(qubit.p);
        let distances: Vec<u32> = (params.min_distance..=params.max_distance).step_by(2).collect();
        let policies = [CopiesPolicy::Pipelined, CopiesPolicy::Sequential { parallelism: 1 }];
        let mut found = Vec::new();
        let mut chain = Vec::new();
        enumerate(&distances, params.max_levels, &mut chain, &mut |chain| {
            let mut any = false;
            for policy in &policies {
                if let Ok(f) = compose_msdf(chain, p_in, qubit.p, params, policy, cycle_factor) {
                    found.push(f);
                    any = true;
                }
            }
            any
        });
        found.sort_by(|a, b| {
            a.output_error
                .total_cmp(&b.output_error)
                .then(a.physical_qubits.cmp(&b.physical_qubits))
                .then(a.steps_per_state().total_cmp(&b.steps_per_state()))
                .then_with(|| a.label().cmp(&b.label()))
        });
        let frontier = crate::pareto::frontier_sorted(found, |f| {
            [f.output_error, f.physical_qubits as f64, f.steps_per_state()]
        });
        Ok(Self { frontier })
    }

    pub fn frontier(&self) -> &[MsdfFactory] {
        &self.frontier
    }

    /// Factories with output error at most `target`, Pareto-pruned over
    /// (qubits, steps per state).
    pub fn catalog(&self, target: f64) -> Result<Vec<MsdfFactory>> {
        if !(target > 0.0) {
            return Err(Error::InvalidInput(format!(
                "target error must be positive, got {target}"
            )));
        }
        let meeting: Vec<_> = self
            .frontier
            .iter()
            .filter(|f| f.output_error <= target)
            .cloned()
            .collect();
        let out = crate::pareto::frontier_sorted(meeting, |f| [f.physical_qubits as f64, f.steps_per_state()]);
        if out.is_empty() {
            return Err(Error::EmptyCatalog { target });
        }
        Ok(out)
    }
}

type Level = (MsdfKind, u32);

/// Calls `visit` on every chain with non-decreasing distances; a chain is
/// extended only when `visit` reports it valid.
fn enumerate(
    distances: &[u32],
    max_levels: usize,
    chain: &mut Vec<(MsdfKind, u32)>,
    visit: &mut dyn FnMut(&[Level]) -> bool,
) {
    if chain.len() == max_levels {
        return;
    }
    let min_d = chain.last().map_or(0, |l| l.1);
    for kind in MsdfKind::ALL {
        for &d in distances.iter().filter(|d| **d >= min_d) {
            chain.push((kind, d));
            if visit(chain) {
                enumerate(distances, max_levels, chain, visit);
            }
            chain.pop();
        }
    }
}

/// Pareto set of MSDFs reaching `target` for the given qubit model.
pub fn msdf_catalog(
    qubit: &PhysicalQubitModel,
    target: f64,
    params: &MsdfParams,
    cycle_factor: f64,
) -> Result<Vec<MsdfFactory>> {
    MsdfExplorer::new(qubit, params, cycle_factor)?.catalog(target)
}

/// Time between T states delivered by `n_factories` copies of a factory
/// with period `t_m` and `o_m` outputs per batch.
pub fn tstate_period(t_m: f64, n_factories: u32, o_m: u32) -> Result<f64> {
    if n_factories == 0 || o_m == 0 {
        return Err(Error::InvalidInput(
            "factory count and outputs must be at least 1".into(),
        ));
    }
    Ok(t_m / (f64::from(n_factories) * f64::from(o_m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn qubit(p: f64) -> PhysicalQubitModel {
        PhysicalQubitModel::new(50e-9, p).unwrap()
    }

    #[test]
    fn two_level_fifteen_to_one_reaches_1e10() {
        let cat = msdf_catalog(&qubit(1e-4), 1e-10, &MsdfParams::default(), 10.0).unwrap();
        assert!(cat.iter().all(|f| f.output_error <= 1e-10));
        let params = MsdfParams::default();
        let f = compose_msdf(
            &[(MsdfKind::FifteenToOne, 5), (MsdfKind::FifteenToOne, 11)],
            params.raw_error(1e-4),
            1e-4,
            &params,
            &CopiesPolicy::Pipelined,
            10.0,
        )
        .unwrap();
        assert!(f.output_error <= 1e-10);
    }

    #[test]
    fn zero_error_input_stays_zero() {
        let params = MsdfParams::default();
        let f = compose_msdf(
            &[(MsdfKind::FifteenToOne, 3)],
            0.0,
            0.0,
            &params,
            &CopiesPolicy::default(),
            10.0,
        )
        .unwrap();
        assert_eq!(f.output_error, 0.0);
        assert_eq!(f.raw_inputs, 15.0);
    }

    #[test]
    fn pessimistic_deep_target_needs_two_levels() {
        let cat = msdf_catalog(&qubit(1e-3), 1e-15, &MsdfParams::default(), 10.0).unwrap();
        assert!(cat.iter().all(|f| f.levels.len() >= 2));
        let single = MsdfUnit::fifteen_to_one().evaluate(1e-3, 0.0).unwrap().1;
        assert_relative_eq!(single, 3.5e-8, max_relative = 1e-12);
    }

    #[test]
    fn unreachable_target_is_empty() {
        let err = msdf_catalog(&qubit(1e-3), 1e-40, &MsdfParams::default(), 10.0).unwrap_err();
        assert!(matches!(err, Error::EmptyCatalog { .. }));
    }

    #[test]
    fn period_examples() {
        assert_eq!(tstate_period(873.0, 1, 1).unwrap(), 873.0);
        assert_eq!(tstate_period(873.0, 3, 1).unwrap(), 291.0);
        assert_eq!(tstate_period(400.0, 2, 4).unwrap(), 50.0);
        assert!(tstate_period(1.0, 0, 1).is_err());
    }

    #[test]
    fn twenty_to_four_never_hurts() {
        let q = qubit(1e-4);
        let params = MsdfParams::default();
        let volume = |cat: &[MsdfFactory]| {
            cat.iter()
                .map(|f| f.physical_qubits as f64 * f.steps_per_state())
                .fold(f64::INFINITY, f64::min)
        };
        let both = msdf_catalog(&q, 1e-12, &params, 10.0).unwrap();
        let mut only15 = params.clone();
        only15.twenty_to_four.outputs = 1;
        only15.twenty_to_four.coefficient = 1e9;
        let fifteen = msdf_catalog(&q, 1e-12, &only15, 10.0).unwrap();
        assert!(volume(&both) <= volume(&fifteen));
    }
}
