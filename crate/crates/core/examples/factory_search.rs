//! Searches entanglement distillation factories for one hardware point and
//! prints the catalog for a target Bell-pair error.

use std::time::Instant;

use dqre::distillation::{EdfExplorer, PauliErrorRates, SearchOptions};
use dqre::surface_code::PhysicalQubitModel;

fn main() -> dqre::Result<()> {
    let raw = PauliErrorRates::depolarizing(0.05)?;
    let qubit = PhysicalQubitModel::new(50e-9, 1e-4)?;
    let start = Instant::now();
    let explorer = EdfExplorer::new(raw, &qubit, &SearchOptions::default())?;
    println!(
        "{} non-dominated factories in {:.2?}",
        explorer.frontier().len(),
        start.elapsed()
    );
    let catalog = explorer.catalog(1e-9)?;
    println!(
        "{:>8} {:>10} {:>8} {:>10}  chain",
        "qubits", "period", "inputs", "error"
    );
    for f in &catalog.entries {
        println!(
            "{:>8} {:>10.1} {:>8.1} {:>10.2e}  {}",
            f.physical_qubits,
            f.period_steps,
            f.raw_inputs,
            f.error(),
            f.label()
        );
    }
    Ok(())
}
