//! Spacetime overhead of slow-qubit Ising as nodes grow, as CSV.

use dqre::catalog::{lookup_application, lookup_preset, NODE_SIZE_SWEEP};
use dqre::estimator::{Accounting, Estimator, EstimatorOptions};
use dqre::report::{write_csv, SweepAxis, SweepDocument};

fn main() -> dqre::Result<()> {
    let options = EstimatorOptions {
        accounting: Accounting::Packed,
        ..EstimatorOptions::default()
    };
    let est = Estimator::new(lookup_preset("slow-optimistic-bell5")?.hardware, options)?;
    let sizes: Vec<f64> = NODE_SIZE_SWEEP.iter().map(|&s| s as f64).collect();
    let doc = SweepDocument::run(&est, &lookup_application("ising")?, SweepAxis::NodeSize, &sizes)?;
    write_csv(&doc.rows, std::io::stdout().lock())
}
