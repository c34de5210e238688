//! Output documents shared by the CLI and the sweep drivers.
//!
//! Every command produces a document with a `rows` table. The CSV encoding
//! is exactly that table; the JSON encoding adds run metadata around it.

use std::io::Write;

use rayon::prelude::*;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::distillation::MultiLevelFactory;
use crate::error::{Error, Result};
use crate::estimator::{
    overhead, Accounting, ApplicationProfile, EstimateResult, Estimator, EtaMode, HardwareModel, SearchOutcome,
};
use crate::magic_state::MsdfFactory;

/// Column order of [`Row`] in CSV output.
pub const CSV_HEADER: [&str; 12] = [
    "axis",
    "nodes",
    "qubits_total",
    "runtime_s",
    "distance",
    "t_gadget_s",
    "frac_edf",
    "frac_msdf",
    "frac_data",
    "volume",
    "overhead",
    "feasible",
];

/// One estimate or sweep point. Infeasible points keep only `axis`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub axis: f64,
    pub nodes: Option<u64>,
    pub qubits_total: Option<u64>,
    pub runtime_s: Option<f64>,
    pub distance: Option<u32>,
    pub t_gadget_s: Option<f64>,
    pub frac_edf: Option<f64>,
    pub frac_msdf: Option<f64>,
    pub frac_data: Option<f64>,
    pub volume: Option<f64>,
    /// Volume over the monolithic baseline of the same run.
    pub overhead: Option<f64>,
    pub feasible: bool,
}

impl Row {
    pub fn from_result(axis: f64, r: &EstimateResult, baseline: Option<&EstimateResult>) -> Self {
        Row {
            axis,
            nodes: Some(r.nodes),
            qubits_total: Some(r.total_physical_qubits),
            runtime_s: Some(r.runtime_s),
            distance: Some(r.distance),
            t_gadget_s: Some(r.t_gadget_s),
            frac_edf: Some(r.fractions.edf),
            frac_msdf: Some(r.fractions.msdf),
            frac_data: Some(r.fractions.data),
            volume: Some(r.spacetime_volume),
            overhead: baseline.map(|b| overhead(r, b)),
            feasible: true,
        }
    }

    pub fn infeasible(axis: f64) -> Self {
        Row {
            axis,
            nodes: None,
            qubits_total: None,
            runtime_s: None,
            distance: None,
            t_gadget_s: None,
            frac_edf: None,
            frac_msdf: None,
            frac_data: None,
            volume: None,
            overhead: None,
            feasible: false,
        }
    }
}

/// The settings that shaped a run, echoed into every document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub monolithic: bool,
    pub eta_mode: EtaMode,
    pub accounting: Accounting,
    pub budget_weights: [f64; 3],
}

impl RunSettings {
    pub fn of(est: &Estimator, monolithic: bool) -> Self {
        let o = est.options();
        RunSettings {
            monolithic,
            eta_mode: o.eta_mode,
            accounting: o.accounting,
            budget_weights: o.budget_weights,
        }
    }
}

/// A failed point, kept next to its infeasible row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub axis: f64,
    pub infeasible: bool,
    pub message: String,
}

impl PointError {
    fn new(axis: f64, e: &Error) -> Self {
        PointError {
            axis,
            infeasible: e.is_infeasible(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateDocument {
    pub command: String,
    pub application: ApplicationProfile,
    pub hardware: HardwareModel,
    pub settings: RunSettings,
    /// Frontier rows; `axis` is the frontier index.
    pub rows: Vec<Row>,
    pub representative_index: usize,
    pub representative: EstimateResult,
    /// Monolithic reference for the overhead column.
    pub baseline: Option<EstimateResult>,
    pub evaluated: usize,
}

impl EstimateDocument {
    pub fn new(est: &Estimator, app: &ApplicationProfile, monolithic: bool) -> Result<Self> {
        let outcome = if monolithic {
            est.search_monolithic(app)?
        } else {
            est.search_distributed(app)?
        };
        let baseline = if monolithic {
            Some(outcome.representative().clone())
        } else {
            est.search_monolithic(app).ok().map(|o| o.representative().clone())
        };
        Ok(Self::from_outcome(est, app, monolithic, outcome, baseline))
    }

    pub fn from_outcome(
        est: &Estimator,
        app: &ApplicationProfile,
        monolithic: bool,
        outcome: SearchOutcome,
        baseline: Option<EstimateResult>,
    ) -> Self {
        let rows = outcome
            .frontier
            .iter()
            .enumerate()
            .map(|(i, r)| Row::from_result(i as f64, r, baseline.as_ref()))
            .collect();
        EstimateDocument {
            command: "estimate".into(),
            application: app.clone(),
            hardware: *est.hardware(),
            settings: RunSettings::of(est, monolithic),
            rows,
            representative_index: outcome.representative,
            representative: outcome.representative().clone(),
            baseline,
            evaluated: outcome.evaluated,
        }
    }
}

/// Which hardware field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    NodeSize,
    Eta,
}

impl SweepAxis {
    fn apply(self, hw: &HardwareModel, value: f64) -> HardwareModel {
        match self {
            SweepAxis::NodeSize => hw.with_node_size(value.round() as u64),
            SweepAxis::Eta => hw.with_eta(value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub command: String,
    pub axis: SweepAxis,
    pub application: ApplicationProfile,
    /// Hardware before the swept field is replaced.
    pub hardware: HardwareModel,
    pub settings: RunSettings,
    pub baseline: Option<EstimateResult>,
    /// One per point, in axis order; the representative of each search.
    pub rows: Vec<Row>,
    pub errors: Vec<PointError>,
}

impl SweepDocument {
    /// Runs a distributed search per point in parallel. Failed points
    /// become infeasible rows.
    pub fn run(est: &Estimator, app: &ApplicationProfile, axis: SweepAxis, points: &[f64]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("sweep needs at least one point".into()));
        }
        let baseline = est.search_monolithic(app).ok().map(|o| o.representative().clone());
        let hw = *est.hardware();
        let results: Vec<Result<EstimateResult>> = points
            .par_iter()
            .map(|&v| {
                let e = est.with_hardware(axis.apply(&hw, v))?;
                Ok(e.search_distributed(app)?.representative().clone())
            })
            .collect();
        let mut rows = Vec::with_capacity(points.len());
        let mut errors = Vec::new();
        for (&v, r) in points.iter().zip(results) {
            match r {
                Ok(r) => rows.push(Row::from_result(v, &r, baseline.as_ref())),
                Err(e) if e.is_infeasible() => {
                    errors.push(PointError::new(v, &e));
                    rows.push(Row::infeasible(v));
                }
                Err(e) => return Err(e),
            }
        }
        Ok(SweepDocument {
            command: match axis {
                SweepAxis::NodeSize => "sweep-node-size",
                SweepAxis::Eta => "sweep-eta",
            }
            .into(),
            axis,
            application: app.clone(),
            hardware: hw,
            settings: RunSettings::of(est, false),
            baseline,
            rows,
            errors,
        })
    }
}

/// `per_decade` log-spaced points from `lo` to `hi`, both included.
pub fn log_grid(lo: f64, hi: f64, per_decade: u32) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || per_decade == 0 {
        return Err(Error::InvalidInput(format!(
            "bad log grid {lo}..{hi} at {per_decade}/decade"
        )));
    }
    let (a, b) = (lo.log10(), hi.log10());
    let steps = ((b - a) * f64::from(per_decade) - 1e-9).ceil().max(0.0) as usize;
    let mut out: Vec<f64> = (0..steps)
        .map(|i| round_sig(10f64.powf(a + i as f64 / f64::from(per_decade))))
        .collect();
    out.push(hi);
    out.dedup();
    Ok(out)
}

/// Trims floating noise so grid points print as written.
fn round_sig(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// A factory in a listing, EDF or MSDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoryRow {
    pub kind: String,
    pub label: String,
    pub physical_qubits: u64,
    pub period_steps: f64,
    pub latency_steps: f64,
    pub raw_inputs: f64,
    pub outputs: u32,
    pub output_error: f64,
}

impl From<&MultiLevelFactory> for FactoryRow {
    fn from(f: &MultiLevelFactory) -> Self {
        FactoryRow {
            kind: "edf".into(),
            label: f.label(),
            physical_qubits: f.physical_qubits,
            period_steps: f.period_steps,
            latency_steps: f.latency_steps,
            raw_inputs: f.raw_inputs,
            outputs: f.outputs,
            output_error: f.error(),
        }
    }
}

impl From<&MsdfFactory> for FactoryRow {
    fn from(f: &MsdfFactory) -> Self {
        FactoryRow {
            kind: "msdf".into(),
            label: f.label(),
            physical_qubits: f.physical_qubits,
            period_steps: f.period_steps,
            latency_steps: f.latency_steps,
            raw_inputs: f.raw_inputs,
            outputs: f.outputs,
            output_error: f.output_error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoryDocument {
    pub command: String,
    pub hardware: HardwareModel,
    pub target_error: f64,
    /// EDFs first, then MSDFs, each ascending in qubits.
    pub rows: Vec<FactoryRow>,
}

impl FactoryDocument {
    /// Pareto-optimal factories reaching `target_error`. Either list may be
    /// empty when nothing reaches the target.
    pub fn new(est: &Estimator, target_error: f64, edf: bool, msdf: bool) -> Result<Self> {
        if !(target_error > 0.0 && target_error < 1.0) {
            return Err(Error::InvalidInput(format!(
                "target error {target_error} outside (0, 1)"
            )));
        }
        let mut rows = Vec::new();
        if edf {
            match est.edf_explorer().catalog(target_error) {
                Ok(c) => rows.extend(c.entries.iter().map(FactoryRow::from)),
                Err(Error::EmptyCatalog { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        if msdf {
            match est.msdf_explorer().catalog(target_error) {
                Ok(c) => rows.extend(c.iter().map(FactoryRow::from)),
                Err(Error::EmptyCatalog { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(FactoryDocument {
            command: "list-factories".into(),
            hardware: *est.hardware(),
            target_error,
            rows,
        })
    }
}

/// Writes `rows` with a header line derived from the field names.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Header-only output for an empty table.
pub fn write_csv_header<W: Write>(header: &[&str], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    Ok(s)
}
