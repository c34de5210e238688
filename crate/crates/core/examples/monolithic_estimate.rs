//! Monolithic estimates for every built-in application on fast qubits.

use dqre::catalog::{builtin_applications, lookup_preset};
use dqre::estimator::{Estimator, EstimatorOptions};

fn main() -> dqre::Result<()> {
    let est = Estimator::new(lookup_preset("fast-optimistic")?.hardware, EstimatorOptions::default())?;
    println!("{:<22} {:>12} {:>14} {:>4}", "application", "qubits", "runtime", "d");
    for app in builtin_applications() {
        let out = est.search_monolithic(&app)?;
        let r = out.representative();
        println!(
            "{:<22} {:>12} {:>12.3e} s {:>4}",
            app.name, r.total_physical_qubits, r.runtime_s, r.distance
        );
    }
    Ok(())
}
