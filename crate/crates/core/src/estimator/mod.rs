//! End-to-end resource estimation: budget split, factory selection, gadget
//! period, code distance, node count and the configuration search.

mod search;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::distillation::{EdfExplorer, MultiLevelFactory, PauliErrorRates, SearchOptions};
use crate::error::{Error, Result};
use crate::isa;
use crate::magic_state::{MsdfExplorer, MsdfFactory, MsdfParams};
use crate::surface_code::{
    self, cycle_time, logical_error_rate, physical_qubits_per_tile, PhysicalQubitModel, DEFAULT_CYCLE_FACTOR,
};

pub use search::{Estimate, SearchOutcome};

/// Smallest node the estimator accepts, in physical qubits.
pub const MIN_NODE_SIZE: u64 = 1000;

/// Distance steps tried past the ratio-one distance before giving up.
pub const DISTANCE_ITERATIONS: u32 = 20;

/// Outer node-count iterations before giving up.
pub const NODE_ITERATIONS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareModel {
    pub qubit: PhysicalQubitModel,
    pub bell_error: PauliErrorRates,
    /// Raw Bell pairs per second on each link.
    pub eta: f64,
    /// Physical qubits per node.
    pub node_size: u64,
    pub cycle_factor: f64,
}

impl HardwareModel {
    /// Depolarizing Bell noise of total probability `bell_error`.
    pub fn new(t_op: f64, p: f64, bell_error: f64, eta: f64, node_size: u64) -> Result<Self> {
        let hw = Self {
            qubit: PhysicalQubitModel::new(t_op, p)?,
            bell_error: PauliErrorRates::depolarizing(bell_error)?,
            eta,
            node_size,
            cycle_factor: DEFAULT_CYCLE_FACTOR,
        };
        hw.validate()?;
        Ok(hw)
    }

    pub fn validate(&self) -> Result<()> {
        self.qubit.validate()?;
        self.bell_error.validate()?;
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "eta must be positive and finite, got {}",
                self.eta
            )));
        }
        if !(self.cycle_factor > 0.0) || !self.cycle_factor.is_finite() {
            return Err(Error::InvalidInput(format!(
                "cycle factor must be positive, got {}",
                self.cycle_factor
            )));
        }
        Ok(())
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self
    }

    pub fn with_node_size(mut self, node_size: u64) -> Self {
        self.node_size = node_size;
        self
    }

    /// τ(d) in seconds.
    pub fn tau(&self, d: u32) -> f64 {
        cycle_time(d, &self.qubit, self.cycle_factor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub eps_total: f64,
    pub eps_l: f64,
    pub eps_m: f64,
    pub eps_e: f64,
}

pub const EVEN_SPLIT: [f64; 3] = [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0];

/// Proportional split of `eps_total` over (logical, magic, entanglement).
/// A zero weight is allowed and gives a zero share.
pub fn split_budget(eps_total: f64, weights: [f64; 3]) -> Result<ErrorBudget> {
    if !(eps_total > 0.0 && eps_total < 1.0) {
        return Err(Error::InvalidInput(format!(
            "error budget must lie in (0, 1), got {eps_total}"
        )));
    }
    if weights.iter().any(|w| !(*w >= 0.0) || !w.is_finite()) || !(weights[0] > 0.0) || !(weights[1] > 0.0) {
        return Err(Error::InvalidInput(format!(
            "budget weights must be finite and non-negative with positive logical and magic shares, got {weights:?}"
        )));
    }
    let sum: f64 = weights.iter().sum();
    Ok(ErrorBudget {
        eps_total,
        eps_l: eps_total * weights[0] / sum,
        eps_m: eps_total * weights[1] / sum,
        eps_e: eps_total * weights[2] / sum,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApplicationProfile {
    pub name: String,
    pub data_qubits: u64,
    pub t_count: f64,
    #[serde(default = "default_eps_total")]
    pub eps_total: f64,
}

fn default_eps_total() -> f64 {
    0.01
}

impl ApplicationProfile {
    pub fn new(name: impl Into<String>, data_qubits: u64, t_count: f64) -> Result<Self> {
        let app = Self {
            name: name.into(),
            data_qubits,
            t_count,
            eps_total: default_eps_total(),
        };
        app.validate()?;
        Ok(app)
    }

    pub fn validate(&self) -> Result<()> {
        if self.data_qubits == 0 {
            return Err(Error::InvalidInput(format!(
                "{}: needs at least one data qubit",
                self.name
            )));
        }
        if !(self.t_count >= 1.0) || !self.t_count.is_finite() {
            return Err(Error::InvalidInput(format!(
                "{}: T count must be at least 1, got {}",
                self.name, self.t_count
            )));
        }
        if !(self.eps_total > 0.0 && self.eps_total < 1.0) {
            return Err(Error::InvalidInput(format!(
                "{}: error budget must lie in (0, 1), got {}",
                self.name, self.eps_total
            )));
        }
        Ok(())
    }
}

/// How the Bell-rate term of the gadget period is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EtaMode {
    /// `N_E · I_E / η`.
    #[default]
    Strict,
    /// `I_E / (O_E · η)`: each link supplies one distilled pair per gadget.
    Refined,
}

/// How distributed qubit totals are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Accounting {
    /// Every provisioned node counts in full.
    #[default]
    WholeNodes,
    /// Only qubits assigned to a region count.
    Packed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatorOptions {
    /// Relative shares of (logical, magic, entanglement) error.
    pub budget_weights: [f64; 3],
    pub eta_mode: EtaMode,
    pub accounting: Accounting,
    pub msdf: MsdfParams,
    pub edf_search: SearchOptions,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            budget_weights: EVEN_SPLIT,
            eta_mode: EtaMode::Strict,
            accounting: Accounting::WholeNodes,
            msdf: MsdfParams::default(),
            edf_search: SearchOptions::default(),
        }
    }
}

/// One concrete choice of factories and counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    /// Absent for single-node runs.
    pub edf: Option<MultiLevelFactory>,
    pub msdf: MsdfFactory,
    /// EDFs per link.
    pub n_e: u32,
    pub n_m: u32,
    pub distance: u32,
    pub nodes: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fractions {
    pub edf: f64,
    pub msdf: f64,
    pub data: f64,
}

/// Physical qubits per region, summed over all nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Regions {
    pub data: u64,
    pub msdf: u64,
    pub networking: u64,
}

impl Regions {
    pub fn used(&self) -> u64 {
        self.data + self.msdf + self.networking
    }

    pub fn fractions(&self) -> Fractions {
        let used = self.used() as f64;
        Fractions {
            edf: self.networking as f64 / used,
            msdf: self.msdf as f64 / used,
            data: self.data as f64 / used,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub application: String,
    pub monolithic: bool,
    pub nodes: u64,
    pub total_physical_qubits: u64,
    pub runtime_s: f64,
    pub distance: u32,
    pub t_gadget_s: f64,
    pub fractions: Fractions,
    pub spacetime_volume: f64,
    pub regions: Regions,
    pub budget: ErrorBudget,
    pub eta_mode: EtaMode,
    pub accounting: Accounting,
    pub hardware: HardwareModel,
    pub config: EstimateConfig,
}

/// Gadget period in seconds. `edf` is `(factory, N_E)`; pass `None` for a
/// single node.
pub fn gadget_period(
    d: u32,
    hw: &HardwareModel,
    msdf: &MsdfFactory,
    n_m: u32,
    edf: Option<(&MultiLevelFactory, u32)>,
    mode: EtaMode,
) -> f64 {
    hw.tau(d).max(factory_period(hw, msdf, n_m, edf, mode))
}

/// The factory terms of the gadget period, without τ(d).
pub(crate) fn factory_period(
    hw: &HardwareModel,
    msdf: &MsdfFactory,
    n_m: u32,
    edf: Option<(&MultiLevelFactory, u32)>,
    mode: EtaMode,
) -> f64 {
    let t_op = hw.qubit.t_op;
    let mut t = msdf.period_steps * t_op / (f64::from(n_m) * f64::from(msdf.outputs));
    if let Some((f, n_e)) = edf {
        let o_e = f64::from(f.outputs);
        let n_e = f64::from(n_e);
        t = t.max(f.period_steps * t_op / (n_e * o_e));
        t = t.max(match mode {
            EtaMode::Strict => n_e * f.raw_inputs / hw.eta,
            EtaMode::Refined => f.raw_inputs / (o_e * hw.eta),
        });
    }
    t
}

/// Tiles after layout for `data_qubits` logical qubits.
pub fn layout_tiles(data_qubits: u64) -> Result<u64> {
    Ok(isa::layout(data_qubits)?.tiles)
}

/// Logical-error target per tile per cycle when the gadget period equals τ(d).
fn base_target(eps_l: f64, q_l: u64, t_count: f64) -> f64 {
    eps_l / (q_l as f64 * t_count)
}

/// Smallest odd distance meeting the logical budget when every gadget takes
/// `max(τ(d), factory_time)`.
pub fn required_distance(
    eps_l: f64,
    q_l: u64,
    t_count: f64,
    hw: &HardwareModel,
    factory_time: f64,
) -> Result<u32> {
    let base = base_target(eps_l, q_l, t_count);
    let d0 = surface_code::min_distance(hw.qubit.p, base)?;
    distance_from(d0, base, hw, factory_time)
}

pub(crate) fn distance_from(d0: u32, base: f64, hw: &HardwareModel, factory_time: f64) -> Result<u32> {
    let mut d = d0;
    for _ in 0..=DISTANCE_ITERATIONS {
        let ratio = (factory_time / hw.tau(d)).max(1.0);
        if surface_code::meets(logical_error_rate(d, hw.qubit.p), base / ratio) {
            return Ok(d);
        }
        d += 2;
    }
    Err(Error::NonConvergence(format!(
        "code distance still failing the logical budget at d = {d}"
    )))
}

/// Networking qubits on one node: `2 · Q_E · N_E`.
pub fn networking_qubits(edf: Option<(&MultiLevelFactory, u32)>) -> u64 {
    edf.map_or(0, |(f, n)| 2 * f.physical_qubits * u64::from(n))
}

/// Nodes needed for data and MSDF qubits once networking is subtracted.
pub fn node_count(q_l: u64, d: u32, msdf_qubits: u64, networking: u64, node_size: u64) -> Result<u64> {
    if node_size < MIN_NODE_SIZE || networking >= node_size {
        return Err(Error::NodeOverflow { node_size, networking });
    }
    let local = node_size - networking;
    let need = physical_qubits_per_tile(d) * q_l + msdf_qubits;
    Ok(need.div_ceil(local).max(1))
}

/// Ratio of spacetime volumes.
pub fn overhead(dist: &EstimateResult, mono: &EstimateResult) -> f64 {
    dist.spacetime_volume / mono.spacetime_volume
}

/// Factory explorers for one hardware point. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Estimator {
    hw: HardwareModel,
    options: EstimatorOptions,
    edf: Arc<EdfExplorer>,
    msdf: Arc<MsdfExplorer>,
}

impl Estimator {
    pub fn new(hw: HardwareModel, options: EstimatorOptions) -> Result<Self> {
        hw.validate()?;
        options.msdf.validate()?;
        split_budget(0.5, options.budget_weights)?;
        let mut search = options.edf_search.clone();
        search.chain.cycle_factor = hw.cycle_factor;
        let edf = EdfExplorer::new(hw.bell_error, &hw.qubit, &search)?;
        let msdf = MsdfExplorer::new(&hw.qubit, &options.msdf, hw.cycle_factor)?;
        Ok(Self {
            hw,
            options,
            edf: Arc::new(edf),
            msdf: Arc::new(msdf),
        })
    }

    /// Reuses the factory explorers when only timing, η or node size
    /// changed; rebuilds them otherwise.
    pub fn with_hardware(&self, hw: HardwareModel) -> Result<Self> {
        hw.validate()?;
        // Factory costs are counted in operation steps, so only the error
        // rates and the cycle factor matter.
        if hw.qubit.p != self.hw.qubit.p
            || hw.bell_error != self.hw.bell_error
            || hw.cycle_factor != self.hw.cycle_factor
        {
            return Self::new(hw, self.options.clone());
        }
        Ok(Self { hw, ..self.clone() })
    }

    /// Same factories, different η-term mode.
    pub fn with_eta_mode(&self, mode: EtaMode) -> Self {
        let mut out = self.clone();
        out.options.eta_mode = mode;
        out
    }

    /// Same factories, different qubit accounting.
    pub fn with_accounting(&self, accounting: Accounting) -> Self {
        let mut out = self.clone();
        out.options.accounting = accounting;
        out
    }

    pub fn hardware(&self) -> &HardwareModel {
        &self.hw
    }

    pub fn options(&self) -> &EstimatorOptions {
        &self.options
    }

    pub fn edf_explorer(&self) -> &EdfExplorer {
        &self.edf
    }

    pub fn msdf_explorer(&self) -> &MsdfExplorer {
        &self.msdf
    }

    pub fn budget(&self, app: &ApplicationProfile, monolithic: bool) -> Result<ErrorBudget> {
        let mut w = self.options.budget_weights;
        if monolithic {
            w[2] = 0.0;
        }
        split_budget(app.eps_total, w)
    }

    /// EDFs and MSDFs whose per-state errors fit the budget on `nodes`
    /// nodes. The EDF list is empty for one node.
    pub fn feasible_factories(
        &self,
        app: &ApplicationProfile,
        budget: &ErrorBudget,
        nodes: u64,
    ) -> Result<(Vec<MultiLevelFactory>, Vec<MsdfFactory>)> {
        app.validate()?;
        let msdf = self.msdf.catalog(budget.eps_m / app.t_count)?;
        if nodes <= 1 {
            return Ok((Vec::new(), msdf));
        }
        let target = edf_target(budget, app.t_count, nodes)?;
        Ok((self.edf.catalog(target)?.entries, msdf))
    }

    /// Evaluates one configuration. Distance and node count are derived;
    /// the ones stored in `config` are ignored. Without an EDF the run is
    /// monolithic.
    pub fn estimate(&self, app: &ApplicationProfile, config: &EstimateConfig) -> Result<EstimateResult> {
        app.validate()?;
        let monolithic = config.edf.is_none();
        let budget = self.budget(app, monolithic)?;
        let ctx = search::Context::new(self, app, budget, monolithic)?;
        let edf = config.edf.as_ref().map(|f| (f, config.n_e));
        let est = ctx.evaluate(edf, &config.msdf, config.n_m)?;
        Ok(ctx.result(edf, &config.msdf, config.n_m, &est))
    }

    /// Pareto frontier over (qubits, runtime) for a monolithic run.
    pub fn search_monolithic(&self, app: &ApplicationProfile) -> Result<SearchOutcome> {
        search::run(self, app, true)
    }

    /// Pareto frontier over (qubits, runtime) for a distributed run.
    pub fn search_distributed(&self, app: &ApplicationProfile) -> Result<SearchOutcome> {
        search::run(self, app, false)
    }
}

/// Per-pair EDF error allowed on `nodes` nodes.
pub fn edf_target(budget: &ErrorBudget, t_count: f64, nodes: u64) -> Result<f64> {
    if nodes < 2 {
        return Err(Error::InvalidInput("EDF target needs at least two nodes".into()));
    }
    let t = budget.eps_e / (t_count * (nodes - 1) as f64);
    if !(t > 0.0) {
        return Err(Error::Infeasible(
            "no entanglement error budget for a distributed run".into(),
        ));
    }
    Ok(t)
}
