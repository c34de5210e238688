//! Grid search over factory choices and counts.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    base_target, distance_from, edf_target, factory_period, layout_tiles, networking_qubits, node_count,
    Accounting, ApplicationProfile, ErrorBudget, EstimateConfig, EstimateResult, Estimator, Regions,
    NODE_ITERATIONS,
};
use crate::distillation::MultiLevelFactory;
use crate::error::{Error, Result};
use crate::magic_state::MsdfFactory;
use crate::pareto;
use crate::surface_code::{self, physical_qubits_per_tile};

/// Factory counts beyond this are thinned geometrically.
const DENSE_COUNTS: u32 = 16;
const COUNT_GROWTH: f64 = 1.25;

/// Pareto frontier of one search plus its minimum-volume point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// Ascending in qubits, descending in runtime.
    pub frontier: Vec<EstimateResult>,
    /// Index into `frontier` of the smallest spacetime volume.
    pub representative: usize,
    /// Configurations evaluated.
    pub evaluated: usize,
}

impl SearchOutcome {
    pub fn representative(&self) -> &EstimateResult {
        &self.frontier[self.representative]
    }
}

/// The derived quantities of one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub distance: u32,
    pub nodes: u64,
    pub t_gadget: f64,
    pub regions: Regions,
    pub total: u64,
}

impl Estimate {
    pub fn runtime(&self, t_count: f64) -> f64 {
        self.t_gadget * t_count
    }
}

pub(super) struct Context<'a> {
    est: &'a Estimator,
    app: &'a ApplicationProfile,
    budget: ErrorBudget,
    monolithic: bool,
    q_l: u64,
    base: f64,
    d0: u32,
}

impl<'a> Context<'a> {
    pub(super) fn new(
        est: &'a Estimator,
        app: &'a ApplicationProfile,
        budget: ErrorBudget,
        monolithic: bool,
    ) -> Result<Self> {
        let q_l = layout_tiles(app.data_qubits)?;
        let base = base_target(budget.eps_l, q_l, app.t_count);
        let d0 = surface_code::min_distance(est.hw.qubit.p, base)?;
        Ok(Self {
            est,
            app,
            budget,
            monolithic,
            q_l,
            base,
            d0,
        })
    }

    fn msdf_ok(&self, msdf: &MsdfFactory) -> Result<()> {
        let target = self.budget.eps_m / self.app.t_count;
        if surface_code::meets(msdf.output_error, target) {
            Ok(())
        } else {
            Err(Error::Infeasible(format!(
                "MSDF error {:.3e} exceeds per-state target {target:.3e}",
                msdf.output_error
            )))
        }
    }

    /// Derives distance, nodes and qubits for one configuration. A
    /// configuration with an EDF must need at least two nodes.
    pub(super) fn evaluate(
        &self,
        edf: Option<(&MultiLevelFactory, u32)>,
        msdf: &MsdfFactory,
        n_m: u32,
    ) -> Result<Estimate> {
        if n_m == 0 || edf.is_some_and(|(_, n)| n == 0) {
            return Err(Error::InvalidInput("factory counts must be at least 1".into()));
        }
        if self.monolithic && edf.is_some() {
            return Err(Error::InvalidInput("a monolithic run has no EDFs".into()));
        }
        self.msdf_ok(msdf)?;
        let hw = &self.est.hw;
        let mode = self.est.options.eta_mode;
        let factory_time = factory_period(hw, msdf, n_m, edf, mode);
        let d = distance_from(self.d0, self.base, hw, factory_time)?;
        let t_gadget = hw.tau(d).max(factory_time);
        let data = physical_qubits_per_tile(d) * self.q_l;
        let msdf_q = msdf.physical_qubits * u64::from(n_m);
        if self.monolithic {
            let regions = Regions {
                data,
                msdf: msdf_q,
                networking: 0,
            };
            return Ok(Estimate {
                distance: d,
                nodes: 1,
                t_gadget,
                regions,
                total: regions.used(),
            });
        }
        let net = networking_qubits(edf);
        let nodes = node_count(self.q_l, d, msdf_q, net, hw.node_size)?;
        if msdf.physical_qubits > hw.node_size - net {
            return Err(Error::NodeOverflow {
                node_size: hw.node_size,
                networking: net + msdf.physical_qubits,
            });
        }
        match edf {
            None if nodes > 1 => {
                return Err(Error::Infeasible("does not fit on one node without networking".into()))
            }
            Some(_) if nodes < 2 => return Err(Error::Infeasible("fits on one node; networking unused".into())),
            Some((f, _)) => {
                let target = edf_target(&self.budget, self.app.t_count, nodes)?;
                if !surface_code::meets(f.error(), target) {
                    return Err(Error::Infeasible(format!(
                        "EDF error {:.3e} exceeds per-pair target {target:.3e} on {nodes} nodes",
                        f.error()
                    )));
                }
            }
            None => {}
        }
        let regions = Regions {
            data,
            msdf: msdf_q,
            networking: net * nodes,
        };
        let total = match self.est.options.accounting {
            Accounting::WholeNodes => nodes * hw.node_size,
            Accounting::Packed => regions.used(),
        };
        Ok(Estimate {
            distance: d,
            nodes,
            t_gadget,
            regions,
            total,
        })
    }

    pub(super) fn result(
        &self,
        edf: Option<(&MultiLevelFactory, u32)>,
        msdf: &MsdfFactory,
        n_m: u32,
        e: &Estimate,
    ) -> EstimateResult {
        let runtime = e.runtime(self.app.t_count);
        EstimateResult {
            application: self.app.name.clone(),
            monolithic: self.monolithic,
            nodes: e.nodes,
            total_physical_qubits: e.total,
            runtime_s: runtime,
            distance: e.distance,
            t_gadget_s: e.t_gadget,
            fractions: e.regions.fractions(),
            spacetime_volume: e.total as f64 * runtime,
            regions: e.regions,
            budget: self.budget,
            eta_mode: self.est.options.eta_mode,
            accounting: self.est.options.accounting,
            hardware: self.est.hw,
            config: EstimateConfig {
                edf: edf.map(|(f, _)| f.clone()),
                msdf: msdf.clone(),
                n_e: edf.map_or(0, |(_, n)| n),
                n_m,
                distance: e.distance,
                nodes: e.nodes,
            },
        }
    }

    /// Count of copies past which a factory can no longer speed up the
    /// gadget, since τ(d) never drops below τ(d0).
    fn saturation(&self, period_s: f64) -> u32 {
        let n = (period_s / self.est.hw.tau(self.d0)).ceil();
        if n.is_finite() && n >= 1.0 {
            n.min(f64::from(u32::MAX)) as u32
        } else {
            1
        }
    }
}

/// Factory counts `1..=16`, then geometric steps, up to `max`.
pub(crate) fn count_grid(max: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=max.min(DENSE_COUNTS)).collect();
    let mut x = DENSE_COUNTS;
    loop {
        x = ((f64::from(x) * COUNT_GROWTH).ceil() as u32).max(x + 1);
        if x > max {
            break;
        }
        out.push(x);
    }
    out
}

#[derive(Clone)]
struct Candidate {
    edf: Option<(usize, u32)>,
    msdf: usize,
    n_m: u32,
    est: Estimate,
}

impl Candidate {
    fn key(&self, t_count: f64) -> (u64, f64, u64, usize, u32, usize, u32) {
        let (ei, ne) = self.edf.map_or((usize::MAX, 0), |(i, n)| (i, n));
        (
            self.est.total,
            self.est.runtime(t_count),
            self.est.nodes,
            ei,
            ne,
            self.msdf,
            self.n_m,
        )
    }
}

fn order(a: &Candidate, b: &Candidate, t_count: f64) -> std::cmp::Ordering {
    let (ka, kb) = (a.key(t_count), b.key(t_count));
    ka.0.cmp(&kb.0)
        .then(ka.1.total_cmp(&kb.1))
        .then(ka.2.cmp(&kb.2))
        .then(ka.3.cmp(&kb.3))
        .then(ka.4.cmp(&kb.4))
        .then(ka.5.cmp(&kb.5))
        .then(ka.6.cmp(&kb.6))
}

fn msdf_grid(ctx: &Context, msdfs: &[MsdfFactory]) -> Vec<(usize, u32)> {
    let t_op = ctx.est.hw.qubit.t_op;
    msdfs
        .iter()
        .enumerate()
        .flat_map(|(i, m)| {
            let max = ctx.saturation(m.steps_per_state() * t_op);
            count_grid(max).into_iter().map(move |n| (i, n))
        })
        .collect()
}

/// Frontier of the candidates evaluated against one pair of catalogs.
fn frontier_of(
    ctx: &Context,
    edfs: &[MultiLevelFactory],
    msdfs: &[MsdfFactory],
    mut found: Vec<Candidate>,
) -> Vec<EstimateResult> {
    let t_count = ctx.app.t_count;
    found.sort_by(|a, b| order(a, b, t_count));
    let kept = pareto::frontier_sorted(found, |c| [c.est.total as f64, c.est.runtime(t_count)]);
    kept.iter()
        .map(|c| {
            let edf = c.edf.map(|(i, n)| (&edfs[i], n));
            ctx.result(edf, &msdfs[c.msdf], c.n_m, &c.est)
        })
        .collect()
}

fn single_node(ctx: &Context, msdfs: &[MsdfFactory]) -> (Vec<EstimateResult>, usize) {
    let grid = msdf_grid(ctx, msdfs);
    let found: Vec<Candidate> = grid
        .iter()
        .filter_map(|&(mi, n_m)| {
            ctx.evaluate(None, &msdfs[mi], n_m).ok().map(|est| Candidate {
                edf: None,
                msdf: mi,
                n_m,
                est,
            })
        })
        .collect();
    (frontier_of(ctx, &[], msdfs, found), grid.len())
}

fn multi_node(ctx: &Context, edfs: &[MultiLevelFactory], msdfs: &[MsdfFactory]) -> (Vec<EstimateResult>, usize) {
    let hw = &ctx.est.hw;
    let mgrid = msdf_grid(ctx, msdfs);
    let per_edf: Vec<(Vec<Candidate>, usize)> = edfs
        .par_iter()
        .enumerate()
        .map(|(ei, f)| {
            let fit =
                (hw.node_size.saturating_sub(1) / (2 * f.physical_qubits).max(1)).min(u64::from(u32::MAX)) as u32;
            let rate = f.period_steps * hw.qubit.t_op / f64::from(f.outputs);
            let max = fit.min(ctx.saturation(rate));
            let mut found = Vec::new();
            let mut evaluated = 0;
            for n_e in count_grid(max) {
                for &(mi, n_m) in &mgrid {
                    evaluated += 1;
                    if let Ok(est) = ctx.evaluate(Some((f, n_e)), &msdfs[mi], n_m) {
                        found.push(Candidate {
                            edf: Some((ei, n_e)),
                            msdf: mi,
                            n_m,
                            est,
                        });
                    }
                }
            }
            (found, evaluated)
        })
        .collect();
    let evaluated = per_edf.iter().map(|(_, n)| n).sum();
    let found = per_edf.into_iter().flat_map(|(f, _)| f).collect();
    (frontier_of(ctx, edfs, msdfs, found), evaluated)
}

/// Minimum spacetime volume; ties go to fewer nodes, then lower runtime.
fn representative(frontier: &[EstimateResult]) -> usize {
    let mut best = 0;
    for (i, r) in frontier.iter().enumerate().skip(1) {
        let b = &frontier[best];
        let better = r
            .spacetime_volume
            .total_cmp(&b.spacetime_volume)
            .then(r.nodes.cmp(&b.nodes))
            .then(r.runtime_s.total_cmp(&b.runtime_s))
            .is_lt();
        if better {
            best = i;
        }
    }
    best
}

fn finish(all: Vec<EstimateResult>, evaluated: usize) -> Result<SearchOutcome> {
    let mut all = all;
    all.sort_by(|a, b| {
        a.total_physical_qubits
            .cmp(&b.total_physical_qubits)
            .then(a.runtime_s.total_cmp(&b.runtime_s))
            .then(a.nodes.cmp(&b.nodes))
    });
    let frontier = pareto::frontier_sorted(all, |r| [r.total_physical_qubits as f64, r.runtime_s]);
    if frontier.is_empty() {
        return Err(Error::Infeasible(
            "no factory configuration fits the error budget and node size".into(),
        ));
    }
    Ok(SearchOutcome {
        representative: representative(&frontier),
        frontier,
        evaluated,
    })
}

pub(super) fn run(est: &Estimator, app: &ApplicationProfile, monolithic: bool) -> Result<SearchOutcome> {
    app.validate()?;
    let budget = est.budget(app, monolithic)?;
    let ctx = Context::new(est, app, budget, monolithic)?;
    let (_, msdfs) = est.feasible_factories(app, &budget, 1)?;
    let (mut all, mut evaluated) = single_node(&ctx, &msdfs);
    if monolithic {
        return finish(all, evaluated);
    }
    let hw = &est.hw;
    if hw.node_size < super::MIN_NODE_SIZE {
        return Err(Error::NodeOverflow {
            node_size: hw.node_size,
            networking: 0,
        });
    }
    // Start from the fewest nodes the data alone could occupy and move to
    // the node count of the best configuration until it stops changing.
    let data = physical_qubits_per_tile(ctx.d0) * ctx.q_l;
    let mut nodes = data.div_ceil(hw.node_size).max(2);
    let mut seen = BTreeSet::new();
    let mut last_err = None;
    let mut converged = false;
    for _ in 0..NODE_ITERATIONS {
        seen.insert(nodes);
        let (edfs, _) = match est.feasible_factories(app, &budget, nodes) {
            Ok(c) => c,
            Err(e) => {
                last_err = Some(e);
                converged = true;
                break;
            }
        };
        let (front, n) = multi_node(&ctx, &edfs, &msdfs);
        evaluated += n;
        let next = front.get(representative(&front)).map(|r| r.nodes);
        all.extend(front);
        match next {
            Some(next) if !seen.contains(&next) => nodes = next,
            _ => {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!(
            "node count did not settle within {NODE_ITERATIONS} iterations"
        )));
    }
    match (finish(all, evaluated), last_err) {
        (Err(Error::Infeasible(_)), Some(e)) => Err(e),
        (out, _) => out,
    }
}
