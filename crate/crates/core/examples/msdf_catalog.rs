//! Lists the Pareto-optimal magic state factories for a per-T-state error.

use dqre::magic_state::{msdf_catalog, MsdfParams};
use dqre::surface_code::{PhysicalQubitModel, DEFAULT_CYCLE_FACTOR};

fn main() -> dqre::Result<()> {
    let target = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1e-12);
    let qubit = PhysicalQubitModel::new(50e-9, 1e-4)?;
    let factories = msdf_catalog(&qubit, target, &MsdfParams::default(), DEFAULT_CYCLE_FACTOR)?;
    println!("{} factories reach {target:e}", factories.len());
    println!("{:>9} {:>10} {:>4} {:>10}  levels", "qubits", "steps/T", "out", "error");
    for f in &factories {
        println!(
            "{:>9} {:>10.1} {:>4} {:>10.2e}  {}",
            f.physical_qubits,
            f.steps_per_state(),
            f.outputs,
            f.output_error,
            f.label()
        );
    }
    Ok(())
}
