//! Exhaustive factory search with Pareto pruning.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::factory::{level_clifford_error, schedule, Stage};
use super::{
    evaluate_unit_with, ChainOptions, CopiesPolicy, DistillationUnit, FactoryLevel, MultiLevelFactory,
    PauliErrorRates, UnitKind,
};
use crate::error::{Error, Result};
use crate::pareto;
use crate::surface_code::PhysicalQubitModel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchOptions {
    pub max_levels: usize,
    /// Largest level distance tried (odd). Level distances never decrease
    /// along a chain.
    pub max_distance: u32,
    /// Encoded-level parallelism factors explored per chain.
    pub parallelism: Vec<u32>,
    /// Chains whose error already falls below this are not extended.
    pub error_floor: f64,
    pub chain: ChainOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_levels: 5,
            max_distance: 41,
            parallelism: vec![1, 2, 4],
            error_floor: 1e-20,
            chain: ChainOptions::default(),
        }
    }
}

/// Pareto-pruned factories that meet a target error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoryCatalog {
    pub target_error: f64,
    pub entries: Vec<MultiLevelFactory>,
}

/// All non-dominated factories for one hardware point, sorted by output
/// error. Catalogs for individual targets are cut from this list.
#[derive(Debug, Clone)]
pub struct EdfExplorer {
    raw: PauliErrorRates,
    frontier: Vec<MultiLevelFactory>,
}

struct Frame {
    kind: UnitKind,
    distance: u32,
    accept: f64,
    rates: PauliErrorRates,
}

impl EdfExplorer {
    pub fn new(raw: PauliErrorRates, qubit: &PhysicalQubitModel, options: &SearchOptions) -> Result<Self> {
        raw.validate()?;
        qubit.validate()?;
        if options.max_levels == 0 || options.max_levels > MAX_CHAIN || options.parallelism.is_empty() {
            return Err(Error::InvalidInput(format!(
                "factory search needs 1..={MAX_CHAIN} levels and at least one parallelism factor"
            )));
        }
        if options.max_distance > u32::from(u8::MAX) {
            return Err(Error::InvalidInput(format!(
                "largest factory distance is {}, got {}",
                u8::MAX,
                options.max_distance
            )));
        }
        let units: Vec<DistillationUnit> = UnitKind::ALL.iter().map(|k| DistillationUnit::new(*k)).collect();
        let distances: Vec<u32> = (1..=options.max_distance.max(1)).step_by(2).collect();
        // Branch on the first level in parallel; each branch is explored
        // depth-first and the results are merged in canonical order.
        let roots: Vec<(usize, u32)> = (0..units.len())
            .flat_map(|u| distances.iter().map(move |d| (u, *d)))
            .collect();
        let branches: Vec<Vec<Found>> = roots
            .par_iter()
            .map(|&(u, d)| {
                let mut found = Vec::new();
                let mut stack = Vec::new();
                if push_level(&units[u], d, raw, qubit, options, &mut stack) {
                    emit(&units, options, &stack, &mut found);
                    dfs(&units, &distances, raw, qubit, options, &mut stack, &mut found);
                }
                compact(found)
            })
            .collect();
        let found: Vec<Found> = branches.into_iter().flatten().collect();
        let mut frontier: Vec<MultiLevelFactory> = compact(found)
            .iter()
            .map(|f| materialize(&units, raw, qubit, options, f))
            .collect();
        // Costs nothing and is never beaten on error by an empty chain.
        frontier.push(MultiLevelFactory::pass_through(raw));
        Ok(Self { raw, frontier })
    }

    pub fn raw(&self) -> PauliErrorRates {
        self.raw
    }

    /// Non-dominated factories over (error, qubits, period, inputs),
    /// ascending in error.
    pub fn frontier(&self) -> &[MultiLevelFactory] {
        &self.frontier
    }

    /// Factories with error at most `target`, Pareto-pruned over
    /// (qubits, period, inputs).
    pub fn catalog(&self, target: f64) -> Result<FactoryCatalog> {
        if !(target > 0.0) {
            return Err(Error::InvalidInput(format!(
                "target error must be positive, got {target}"
            )));
        }
        let meeting: Vec<_> = self.frontier.iter().filter(|f| f.error() <= target).cloned().collect();
        let entries =
            pareto::frontier_sorted(meeting, |f| [f.physical_qubits as f64, f.period_steps, f.raw_inputs]);
        if entries.is_empty() {
            return Err(Error::EmptyCatalog { target });
        }
        Ok(FactoryCatalog {
            target_error: target,
            entries,
        })
    }
}

fn canonical_order(a: &Found, b: &Found) -> std::cmp::Ordering {
    a.error
        .total_cmp(&b.error)
        .then(a.qubits.cmp(&b.qubits))
        .then(a.period.total_cmp(&b.period))
        .then(a.inputs.total_cmp(&b.inputs))
        .then_with(|| a.chain().cmp(b.chain()))
        .then(a.parallelism.cmp(&b.parallelism))
}

fn dfs(
    units: &[DistillationUnit],
    distances: &[u32],
    raw: PauliErrorRates,
    qubit: &PhysicalQubitModel,
    options: &SearchOptions,
    stack: &mut Vec<Frame>,
    found: &mut Vec<Found>,
) {
    let rates = stack.last().map_or(raw, |f| f.rates);
    if stack.len() == options.max_levels || (!stack.is_empty() && rates.total() <= options.error_floor) {
        return;
    }
    let min_d = stack.last().map_or(1, |f| f.distance);
    for unit in units {
        let noiseless = evaluate_unit_with(unit, rates, 0.0, options.chain.renormalize)
            .map(|o| o.out_rates.total())
            .unwrap_or(f64::INFINITY);
        for &d in distances.iter().filter(|d| **d >= min_d) {
            if push_level(unit, d, raw, qubit, options, stack) {
                let out = stack.last().map_or(0.0, |f| f.rates.total());
                emit(units, options, stack, found);
                dfs(units, distances, raw, qubit, options, stack, found);
                stack.pop();
                // Larger distances only add cost once Clifford faults are
                // negligible next to the input errors.
                if out - noiseless <= NEGLIGIBLE_CLIFFORD * noiseless {
                    break;
                }
            }
        }
    }
}

const NEGLIGIBLE_CLIFFORD: f64 = 1e-3;

/// Evaluates `unit` at distance `d` on top of `stack`; pushes and returns
/// true when the level lowers the error.
fn push_level(
    unit: &DistillationUnit,
    d: u32,
    raw: PauliErrorRates,
    qubit: &PhysicalQubitModel,
    options: &SearchOptions,
    stack: &mut Vec<Frame>,
) -> bool {
    let rates = stack.last().map_or(raw, |f| f.rates);
    let p = if options.chain.clifford_errors { qubit.p } else { 0.0 };
    let Ok(outcome) = evaluate_unit_with(unit, rates, level_clifford_error(d, p), options.chain.renormalize)
    else {
        return false;
    };
    if !(outcome.accept_prob > 0.0) || outcome.out_rates.total() >= rates.total() {
        return false;
    }
    stack.push(Frame {
        kind: unit.kind,
        distance: d,
        accept: outcome.accept_prob,
        rates: outcome.out_rates,
    });
    true
}

/// Keeps factories not weakly dominated in (error, qubits, period, inputs)
/// by an earlier one. `sorted` must be ascending in error.
///
/// Qubit counts take few distinct values, so kept entries are grouped by
/// qubit count and each group holds a period/inputs staircase.
fn error_frontier(sorted: Vec<Found>) -> Vec<Found> {
    let mut groups: BTreeMap<u64, BTreeMap<OrderedSteps, f64>> = BTreeMap::new();
    let mut kept = Vec::new();
    for f in sorted {
        let t = OrderedSteps(f.period);
        let dominated = groups.range(..=f.qubits).any(|(_, stairs)| {
            stairs
                .range(..=t)
                .next_back()
                .is_some_and(|(_, inputs)| *inputs <= f.inputs)
        });
        if dominated {
            continue;
        }
        let stairs = groups.entry(f.qubits).or_default();
        // Drop staircase points the new one dominates, then insert it.
        let stale: Vec<OrderedSteps> = stairs
            .range(t..)
            .take_while(|(_, inputs)| **inputs >= f.inputs)
            .map(|(k, _)| *k)
            .collect();
        for k in stale {
            stairs.remove(&k);
        }
        stairs.insert(t, f.inputs);
        kept.push(f);
    }
    kept
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrderedSteps(f64);

impl Eq for OrderedSteps {}

impl PartialOrd for OrderedSteps {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedSteps {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// A chain found by the search, small enough to copy around freely.
#[derive(Debug, Clone, Copy)]
struct Found {
    error: f64,
    qubits: u64,
    period: f64,
    inputs: f64,
    len: u8,
    chain: [(UnitKind, u8); MAX_CHAIN],
    parallelism: u32,
}

impl Found {
    fn chain(&self) -> &[(UnitKind, u8)] {
        &self.chain[..usize::from(self.len)]
    }
}

/// Pending records per branch before they are pruned in place.
const COMPACT_AT: usize = 1 << 19;

/// Canonically sorted error frontier of `found`.
fn compact(mut found: Vec<Found>) -> Vec<Found> {
    found.sort_unstable_by(canonical_order);
    error_frontier(found)
}

const MAX_CHAIN: usize = 8;

fn stages_of(units: &[DistillationUnit], stack: &[Frame]) -> Vec<Stage> {
    stack
        .iter()
        .map(|f| {
            let u = units.iter().find(|u| u.kind == f.kind).expect("all kinds present");
            Stage {
                inputs: u.inputs,
                outputs: u.outputs,
                tiles: u.tiles,
                duration_cycles: u.duration_cycles,
                distance: f.distance,
                accept: f.accept,
            }
        })
        .collect()
}

/// Records the chain on `stack` once per distinct effective parallelism.
fn emit(units: &[DistillationUnit], options: &SearchOptions, stack: &[Frame], found: &mut Vec<Found>) {
    let stages = stages_of(units, stack);
    let encoded_nominal = encoded_runs(&stages);
    let mut chain = [(UnitKind::RepetitionZ, 0); MAX_CHAIN];
    for (slot, f) in chain.iter_mut().zip(stack) {
        *slot = (f.kind, f.distance as u8);
    }
    let error = stack.last().expect("non-empty chain").rates.total();
    let mut seen = Vec::new();
    for &k in &options.parallelism {
        // Factors beyond the largest encoded nominal run count change nothing.
        let effective = k.min(encoded_nominal.max(1));
        if seen.contains(&effective) {
            continue;
        }
        seen.push(effective);
        let policy = CopiesPolicy::Sequential { parallelism: effective };
        let Ok(s) = schedule(&stages, &policy, options.chain.cycle_factor) else {
            continue;
        };
        found.push(Found {
            error,
            qubits: s.physical_qubits,
            period: s.period_steps,
            inputs: s.raw_inputs,
            len: stack.len() as u8,
            chain,
            parallelism: effective,
        });
    }
    if found.len() >= COMPACT_AT {
        let pending = std::mem::take(found);
        *found = compact(pending);
    }
}

/// Rebuilds the full factory for a recorded chain.
fn materialize(
    units: &[DistillationUnit],
    raw: PauliErrorRates,
    qubit: &PhysicalQubitModel,
    options: &SearchOptions,
    found: &Found,
) -> MultiLevelFactory {
    let mut stack = Vec::with_capacity(found.chain().len());
    for &(kind, d) in found.chain() {
        let unit = units.iter().find(|u| u.kind == kind).expect("all kinds present");
        let pushed = push_level(unit, u32::from(d), raw, qubit, options, &mut stack);
        debug_assert!(pushed, "recorded chains replay");
    }
    let stages = stages_of(units, &stack);
    let policy = CopiesPolicy::Sequential {
        parallelism: found.parallelism,
    };
    let s = schedule(&stages, &policy, options.chain.cycle_factor).expect("recorded chains schedule");
    let levels = stack
        .iter()
        .enumerate()
        .map(|(l, f)| FactoryLevel {
            unit: f.kind,
            distance: f.distance,
            copies: s.copies[l],
            accept_prob: f.accept,
            expected_runs: s.expected_runs[l],
            out_rates: f.rates,
        })
        .collect();
    MultiLevelFactory {
        levels,
        physical_qubits: s.physical_qubits,
        latency_steps: s.latency_steps,
        period_steps: s.period_steps,
        nominal_steps: s.nominal_steps,
        raw_inputs: s.raw_inputs,
        outputs: s.outputs,
        input_error: raw,
        output_error: stack.last().expect("non-empty chain").rates,
    }
}

/// Largest nominal run count among encoded levels.
fn encoded_runs(stages: &[Stage]) -> u32 {
    let mut nominal = 1u64;
    let mut best = 0u64;
    for l in (0..stages.len()).rev() {
        if stages[l].distance > 1 {
            best = best.max(nominal);
        }
        if l > 0 {
            nominal = (nominal * u64::from(stages[l].inputs)).div_ceil(u64::from(stages[l - 1].outputs));
        }
    }
    u32::try_from(best).unwrap_or(u32::MAX)
}

/// Builds the catalog of factories reaching `target` from raw pairs.
pub fn search_factories(
    raw: PauliErrorRates,
    qubit: &PhysicalQubitModel,
    target: f64,
    options: &SearchOptions,
) -> Result<FactoryCatalog> {
    EdfExplorer::new(raw, qubit, options)?.catalog(target)
}
