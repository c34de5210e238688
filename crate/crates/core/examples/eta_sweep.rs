//! Runtime and overhead against link rate for fast and slow qubits.

use dqre::catalog::{lookup_application, lookup_preset, ETA_SWEEP_MAX, ETA_SWEEP_MIN};
use dqre::estimator::{Estimator, EstimatorOptions};
use dqre::report::{log_grid, SweepAxis, SweepDocument};

fn main() -> dqre::Result<()> {
    let app = lookup_application("ising")?;
    let grid = log_grid(ETA_SWEEP_MIN, ETA_SWEEP_MAX, 4)?;
    for preset in ["fast-optimistic-bell5", "slow-optimistic-bell5"] {
        let est = Estimator::new(lookup_preset(preset)?.hardware, EstimatorOptions::default())?;
        let doc = SweepDocument::run(&est, &app, SweepAxis::Eta, &grid)?;
        println!("{preset}");
        for r in &doc.rows {
            match (r.runtime_s, r.overhead) {
                (Some(t), Some(o)) => println!("  {:>10.3e} Hz  {t:>12.4e} s  overhead {o:>9.2}", r.axis),
                _ => println!("  {:>10.3e} Hz  infeasible", r.axis),
            }
        }
    }
    Ok(())
}
