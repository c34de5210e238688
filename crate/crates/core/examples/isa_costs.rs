//! Instruction latencies, fast-block layout and per-gadget resources.

use dqre::isa::{gadget_resources, instruction_time, layout, Instruction};
use dqre::surface_code::{PhysicalQubitModel, DEFAULT_CYCLE_FACTOR};

fn main() -> dqre::Result<()> {
    let qubit = PhysicalQubitModel::new(50e-9, 1e-4)?;
    let d = 15;
    println!("instruction times at d = {d}, 50 ns operations:");
    for i in [
        Instruction::Init,
        Instruction::Measure,
        Instruction::Mqpm,
        Instruction::Move,
        Instruction::Phase,
        Instruction::Hadamard,
    ] {
        println!(
            "  {i:?}: {:.2} us",
            instruction_time(i, d, &qubit, DEFAULT_CYCLE_FACTOR) * 1e6
        );
    }
    for q in [100, 1318, 12_581] {
        let plan = layout(q)?;
        println!("{q} data qubits -> {} tiles", plan.tiles);
    }
    for n in [1, 2, 8] {
        let g = gadget_resources(n)?;
        println!(
            "gadget over {n} nodes: {} T state, {} Bell pairs",
            g.t_states, g.bell_states
        );
    }
    Ok(())
}
