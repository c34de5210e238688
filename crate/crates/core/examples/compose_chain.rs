//! Composes a hand-picked multi-level EDF and prints per-level details.

use dqre::distillation::{compose_multilevel, PauliErrorRates, UnitKind::*};
use dqre::surface_code::{PhysicalQubitModel, DEFAULT_CYCLE_FACTOR};

fn main() -> dqre::Result<()> {
    let raw = PauliErrorRates::depolarizing(0.05)?;
    let qubit = PhysicalQubitModel::new(50e-9, 1e-4)?;
    let chain = [
        (RepetitionZ, 1),
        (FiveQubitPerfect, 3),
        (RepetitionZ, 7),
        (RepetitionX, 9),
    ];
    let f = compose_multilevel(&chain, raw, &qubit, DEFAULT_CYCLE_FACTOR)?;

    println!("{}", f.label());
    println!(
        "{:>6} {:>4} {:>7} {:>8} {:>10}",
        "unit", "d", "copies", "accept", "error"
    );
    for l in &f.levels {
        println!(
            "{:>6} {:>4} {:>7} {:>8.4} {:>10.2e}",
            l.unit.label(),
            l.distance,
            l.copies,
            l.accept_prob,
            l.out_rates.total()
        );
    }
    println!(
        "Q_E = {} qubits, T_E = {:.1} steps ({:.2} us), I_E = {:.2} raw pairs, error {:.2e}",
        f.physical_qubits,
        f.period_steps,
        f.period_steps * qubit.t_op * 1e6,
        f.raw_inputs,
        f.error()
    );
    Ok(())
}
