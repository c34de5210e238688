//! Surface-code logical error and timing model.
//!
//! Every compute tile, magic-state factory and entanglement factory sits on
//! top of a distance-`d` surface-code patch. The patch fails with
//! probability `0.03 (p / 0.01)^((d + 1) / 2)` per tile per cycle, a cycle is
//! `d` syndrome rounds, and each patch uses `2d^2 - 1` physical qubits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Surface-code threshold for the logical error formula.
pub const THRESHOLD: f64 = 0.01;

/// Logical error per tile per cycle at `p == THRESHOLD`.
pub const THRESHOLD_PREFACTOR: f64 = 0.03;

/// Largest distance scanned before a target is declared unreachable.
pub const DEFAULT_D_MAX: u32 = 99;

/// Physical operation layers per syndrome round.
///
/// Calibrated against the worked multi-level factory example and the
/// monolithic runtimes; see the README for the calibration notes.
pub const DEFAULT_CYCLE_FACTOR: f64 = 10.0;

// Comparisons against targets are made with this relative slack so that a
// target computed from the same closed form is met exactly.
const TARGET_SLACK: f64 = 1e-9;

/// Distance and rounds-per-cycle factor of a surface-code patch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodeParams {
    distance: u32,
    cycle_factor: f64,
}

impl CodeParams {
    pub fn new(distance: u32, cycle_factor: f64) -> Result<Self> {
        check_distance(distance)?;
        if !(cycle_factor > 0.0) || !cycle_factor.is_finite() {
            return Err(Error::InvalidInput(format!(
                "cycle factor must be positive, got {cycle_factor}"
            )));
        }
        Ok(Self { distance, cycle_factor })
    }

    pub fn distance(&self) -> u32 {
        self.distance
    }

    pub fn cycle_factor(&self) -> f64 {
        self.cycle_factor
    }

    pub fn cycle_time(&self, qubit: &PhysicalQubitModel) -> f64 {
        cycle_time(self.distance, qubit, self.cycle_factor)
    }
}

/// Uniform physical operation time (seconds) and error per operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalQubitModel {
    pub t_op: f64,
    pub p: f64,
}

impl PhysicalQubitModel {
    pub fn new(t_op: f64, p: f64) -> Result<Self> {
        let model = Self { t_op, p };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_op > 0.0) || !self.t_op.is_finite() {
            return Err(Error::InvalidInput(format!("t_op must be positive, got {}", self.t_op)));
        }
        if !(self.p > 0.0) || self.p >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "physical error rate must lie in (0, 1), got {}",
                self.p
            )));
        }
        Ok(())
    }

    /// Whether increasing the distance suppresses logical errors.
    pub fn below_threshold(&self) -> bool {
        self.p < THRESHOLD
    }
}

pub(crate) fn check_distance(d: u32) -> Result<()> {
    if d == 0 || d.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "code distance must be odd and positive, got {d}"
        )));
    }
    Ok(())
}

/// Logical error per tile per cycle, `0.03 (p / 0.01)^((d + 1) / 2)`.
pub fn logical_error_rate(d: u32, p: f64) -> f64 {
    debug_assert!(d % 2 == 1, "distance must be odd");
    let exponent = d.div_ceil(2) as i32;
    THRESHOLD_PREFACTOR * (p / THRESHOLD).powi(exponent)
}

/// `true` when `value` does not exceed `target` beyond floating-point slack.
pub(crate) fn meets(value: f64, target: f64) -> bool {
    value <= target * (1.0 + TARGET_SLACK)
}

/// Smallest odd distance whose logical error rate is at most `target`.
pub fn min_distance(p: f64, target: f64) -> Result<u32> {
    min_distance_capped(p, target, DEFAULT_D_MAX)
}

pub fn min_distance_capped(p: f64, target: f64, d_max: u32) -> Result<u32> {
    if !(p > 0.0) || !(target > 0.0) {
        return Err(Error::InvalidInput(format!(
            "min_distance needs p > 0 and target > 0 (p = {p}, target = {target})"
        )));
    }
    if meets(logical_error_rate(1, p), target) {
        return Ok(1);
    }
    if p >= THRESHOLD {
        return Err(Error::ThresholdViolation { p, target });
    }
    let mut d = 3;
    while d <= d_max {
        if meets(logical_error_rate(d, p), target) {
            return Ok(d);
        }
        d += 2;
    }
    Err(Error::UnreachableTarget { p, target, d_max })
}

/// Duration of one logical cycle, `c * d * t_op` seconds.
pub fn cycle_time(d: u32, qubit: &PhysicalQubitModel, cycle_factor: f64) -> f64 {
    cycle_factor * f64::from(d) * qubit.t_op
}

/// Physical qubits in one tile: `d^2` data plus `d^2 - 1` ancilla.
pub fn physical_qubits_per_tile(d: u32) -> u64 {
    let d = u64::from(d);
    2 * d * d - 1
}
