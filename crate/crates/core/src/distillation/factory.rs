//! Multi-level factory composition.
//!
//! Levels run one after another inside a shared footprint. Level `l` is
//! repeated until it has produced the inputs the next level needs; in
//! expectation that takes `runs_{l+1} * inputs_{l+1} / (outputs_l * a_l)`
//! runs, where `a_l` is the acceptance probability. Physically executed
//! levels (`d = 1`) are cheap, so by default they run all nominal copies in
//! parallel, while encoded levels run a bounded number of copies.
//!
//! The same schedule is shared with magic-state factories.

use serde::{Deserialize, Serialize};

use super::{evaluate_unit_with, DistillationUnit, PauliErrorRates, UnitKind};
use crate::error::{Error, Result};
use crate::surface_code::{
    check_distance, logical_error_rate, physical_qubits_per_tile, PhysicalQubitModel, DEFAULT_CYCLE_FACTOR,
};

/// How many copies of each level run side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CopiesPolicy {
    /// Physical levels run every nominal copy at once; encoded levels run at
    /// most `parallelism` copies.
    Sequential { parallelism: u32 },
    /// All levels run concurrently, each sized to keep the next one busy.
    Pipelined,
    /// Copies fixed per level (used when importing catalogs).
    Explicit(Vec<u32>),
}

impl Default for CopiesPolicy {
    fn default() -> Self {
        CopiesPolicy::Sequential { parallelism: 1 }
    }
}

/// Shape of one schedule level, independent of the unit family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Stage {
    pub inputs: u32,
    pub outputs: u32,
    pub tiles: u32,
    pub duration_cycles: u32,
    pub distance: u32,
    pub accept: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Schedule {
    pub copies: Vec<u32>,
    pub expected_runs: Vec<f64>,
    pub physical_qubits: u64,
    pub latency_steps: f64,
    pub period_steps: f64,
    pub nominal_steps: f64,
    pub raw_inputs: f64,
    pub outputs: u32,
}

/// Physical time steps in one logical cycle of a level at distance `d`.
pub fn level_cycle_time(d: u32, cycle_factor: f64) -> f64 {
    if d == 1 {
        1.0
    } else {
        cycle_factor * f64::from(d)
    }
}

/// Clifford error rate of a level: the physical rate when executed
/// physically, the surface-code logical rate otherwise.
pub fn level_clifford_error(d: u32, p: f64) -> f64 {
    if d == 1 {
        p
    } else {
        logical_error_rate(d, p)
    }
}

pub(crate) fn schedule(stages: &[Stage], policy: &CopiesPolicy, cycle_factor: f64) -> Result<Schedule> {
    let n = stages.len();
    if n == 0 {
        return Err(Error::InvalidInput("factory chain is empty".into()));
    }
    if let CopiesPolicy::Explicit(c) = policy {
        if c.len() != n || c.contains(&0) {
            return Err(Error::InvalidInput(format!(
                "explicit copies {c:?} do not fit a {n}-level chain"
            )));
        }
    }
    if let CopiesPolicy::Sequential { parallelism: 0 } = policy {
        return Err(Error::InvalidInput("parallelism must be at least 1".into()));
    }
    for (level, s) in stages.iter().enumerate() {
        if !(s.accept > 0.0) {
            return Err(Error::Divergence {
                level,
                accept: s.accept,
            });
        }
    }
    let steps: Vec<f64> = stages
        .iter()
        .map(|s| f64::from(s.duration_cycles) * level_cycle_time(s.distance, cycle_factor))
        .collect();

    // Nominal (rejection-free) runs per batch, top level first.
    let mut nominal = vec![0u64; n];
    let mut copies = vec![1u32; n];
    let top_copies = match policy {
        CopiesPolicy::Explicit(c) => c[n - 1],
        _ => 1,
    };
    nominal[n - 1] = u64::from(top_copies);
    for l in (0..n - 1).rev() {
        let need = nominal[l + 1] * u64::from(stages[l + 1].inputs);
        nominal[l] = need.div_ceil(u64::from(stages[l].outputs));
    }
    match policy {
        CopiesPolicy::Sequential { parallelism } => {
            for l in 0..n {
                copies[l] = if stages[l].distance == 1 {
                    u32::try_from(nominal[l]).unwrap_or(u32::MAX)
                } else {
                    nominal[l].min(u64::from(*parallelism)) as u32
                };
            }
        }
        CopiesPolicy::Pipelined => {
            for l in (0..n - 1).rev() {
                let demand = f64::from(copies[l + 1]) * f64::from(stages[l + 1].inputs) / steps[l + 1];
                let supply = f64::from(stages[l].outputs) * stages[l].accept / steps[l];
                copies[l] = ((demand / supply) * (1.0 - 1e-12)).ceil().max(1.0) as u32;
            }
        }
        CopiesPolicy::Explicit(c) => copies.clone_from(c),
    }

    let mut runs = vec![0.0; n];
    runs[n - 1] = f64::from(copies[n - 1]) / stages[n - 1].accept;
    for l in (0..n - 1).rev() {
        runs[l] =
            runs[l + 1] * f64::from(stages[l + 1].inputs) / (f64::from(stages[l].outputs) * stages[l].accept);
    }

    let footprint = |l: usize| {
        u64::from(copies[l]) * u64::from(stages[l].tiles) * physical_qubits_per_tile(stages[l].distance)
    };
    let busy = |l: usize| runs[l] / f64::from(copies[l]) * steps[l];
    let (physical_qubits, latency_steps, period_steps) = match policy {
        // Levels overlap: a batch leaves every bottleneck period once the
        // pipeline is full.
        CopiesPolicy::Pipelined => (
            (0..n).map(footprint).sum(),
            (0..n).map(|l| steps[l] / stages[l].accept).sum(),
            (0..n).map(busy).fold(0.0, f64::max),
        ),
        _ => {
            let total = (0..n).map(busy).sum();
            ((0..n).map(footprint).max().unwrap_or(0), total, total)
        }
    };
    let nominal_steps = (0..n)
        .map(|l| nominal[l].div_ceil(u64::from(copies[l])) as f64 * steps[l])
        .sum();
    Ok(Schedule {
        raw_inputs: runs[0] * f64::from(stages[0].inputs),
        outputs: copies[n - 1] * stages[n - 1].outputs,
        copies,
        expected_runs: runs,
        physical_qubits,
        latency_steps,
        period_steps,
        nominal_steps,
    })
}

/// Options for [`compose_multilevel_with`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChainOptions {
    pub cycle_factor: f64,
    /// Divide output errors by the acceptance probability at every level.
    pub renormalize: bool,
    pub copies: CopiesPolicy,
    /// When false, levels run with noiseless Clifford operations.
    pub clifford_errors: bool,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            cycle_factor: DEFAULT_CYCLE_FACTOR,
            renormalize: false,
            copies: CopiesPolicy::default(),
            clifford_errors: true,
        }
    }
}

/// One level of a composed factory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoryLevel {
    pub unit: UnitKind,
    pub distance: u32,
    pub copies: u32,
    pub accept_prob: f64,
    pub expected_runs: f64,
    pub out_rates: PauliErrorRates,
}

/// An entanglement distillation factory with its aggregate costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiLevelFactory {
    pub levels: Vec<FactoryLevel>,
    /// Q_E: physical qubits.
    pub physical_qubits: u64,
    /// Expected time from first input to a finished batch, in physical time
    /// steps.
    pub latency_steps: f64,
    /// T_E: expected time between batches in steady state.
    pub period_steps: f64,
    /// Duration of one batch when nothing is rejected.
    pub nominal_steps: f64,
    /// I_E: expected raw Bell pairs consumed per batch.
    pub raw_inputs: f64,
    /// O_E: Bell pairs delivered per batch.
    pub outputs: u32,
    pub input_error: PauliErrorRates,
    pub output_error: PauliErrorRates,
}

impl MultiLevelFactory {
    /// The zero-level factory that forwards raw pairs unchanged.
    pub fn pass_through(raw: PauliErrorRates) -> Self {
        Self {
            levels: Vec::new(),
            physical_qubits: 0,
            latency_steps: 0.0,
            period_steps: 0.0,
            nominal_steps: 0.0,
            raw_inputs: 1.0,
            outputs: 1,
            input_error: raw,
            output_error: raw,
        }
    }

    pub fn error(&self) -> f64 {
        self.output_error.total()
    }

    pub fn latency_seconds(&self, qubit: &PhysicalQubitModel) -> f64 {
        self.latency_steps * qubit.t_op
    }

    /// Human-readable chain, e.g. `2Q(Z)@1 > 5Q@3`.
    pub fn label(&self) -> String {
        if self.levels.is_empty() {
            return "pass-through".into();
        }
        self.levels
            .iter()
            .map(|l| format!("{}@{}", l.unit, l.distance))
            .collect::<Vec<_>>()
            .join(" > ")
    }

    pub fn chain(&self) -> Vec<(UnitKind, u32)> {
        self.levels.iter().map(|l| (l.unit, l.distance)).collect()
    }
}

/// Threads the error rates through each level and returns per-level
/// `(unit, accept, out_rates)`.
pub(crate) fn thread_errors(
    chain: &[(UnitKind, u32)],
    raw: PauliErrorRates,
    p: f64,
    options: &ChainOptions,
) -> Result<Vec<(DistillationUnit, f64, PauliErrorRates)>> {
    let mut rates = raw;
    let mut out = Vec::with_capacity(chain.len());
    for (level, &(kind, d)) in chain.iter().enumerate() {
        check_distance(d)?;
        let unit = DistillationUnit::new(kind);
        let p_level = if options.clifford_errors {
            level_clifford_error(d, p)
        } else {
            0.0
        };
        let outcome = evaluate_unit_with(&unit, rates, p_level, options.renormalize)?;
        if !(outcome.accept_prob > 0.0) {
            return Err(Error::Divergence {
                level,
                accept: outcome.accept_prob,
            });
        }
        let (before, after) = (rates.total(), outcome.out_rates.total());
        if after >= before && !(before == 0.0 && after == 0.0) {
            return Err(Error::InvalidRegime(format!(
                "level {level} ({kind}@{d}) raises the error from {before:e} to {after:e}"
            )));
        }
        rates = outcome.out_rates;
        out.push((unit, outcome.accept_prob, rates));
    }
    Ok(out)
}

/// Composes a chain with default options and cycle factor `c`.
pub fn compose_multilevel(
    chain: &[(UnitKind, u32)],
    raw: PauliErrorRates,
    qubit: &PhysicalQubitModel,
    cycle_factor: f64,
) -> Result<MultiLevelFactory> {
    let options = ChainOptions {
        cycle_factor,
        ..ChainOptions::default()
    };
    compose_multilevel_with(chain, raw, qubit, &options)
}

pub fn compose_multilevel_with(
    chain: &[(UnitKind, u32)],
    raw: PauliErrorRates,
    qubit: &PhysicalQubitModel,
    options: &ChainOptions,
) -> Result<MultiLevelFactory> {
    raw.validate()?;
    qubit.validate()?;
    if chain.is_empty() {
        return Err(Error::InvalidInput("factory chain is empty".into()));
    }
    let threaded = thread_errors(chain, raw, qubit.p, options)?;
    let stages: Vec<Stage> = threaded
        .iter()
        .zip(chain)
        .map(|((unit, accept, _), &(_, d))| Stage {
            inputs: unit.inputs,
            outputs: unit.outputs,
            tiles: unit.tiles,
            duration_cycles: unit.duration_cycles,
            distance: d,
            accept: *accept,
        })
        .collect();
    let sched = schedule(&stages, &options.copies, options.cycle_factor)?;
    let levels = threaded
        .iter()
        .zip(chain)
        .enumerate()
        .map(|(l, ((_, accept, rates), &(kind, d)))| FactoryLevel {
            unit: kind,
            distance: d,
            copies: sched.copies[l],
            accept_prob: *accept,
            expected_runs: sched.expected_runs[l],
            out_rates: *rates,
        })
        .collect();
    Ok(MultiLevelFactory {
        levels,
        physical_qubits: sched.physical_qubits,
        latency_steps: sched.latency_steps,
        period_steps: sched.period_steps,
        nominal_steps: sched.nominal_steps,
        raw_inputs: sched.raw_inputs,
        outputs: sched.outputs,
        input_error: raw,
        output_error: threaded.last().map(|t| t.2).unwrap_or(raw),
    })
}
