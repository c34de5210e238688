//! Planar distributed ISA: instruction timings, fast-block layout and the
//! per-gadget resource vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface_code::{cycle_time, PhysicalQubitModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Instruction {
    Init,
    Pauli,
    Hadamard,
    Phase,
    Measure,
    Move,
    Mqpm,
    TStatePrep,
    BellStatePrep,
}

impl Instruction {
    /// Cost in logical cycles. State preparation is accounted for by the
    /// factories and costs nothing here.
    pub fn cycle_cost(self) -> u32 {
        match self {
            Instruction::Hadamard => 3,
            Instruction::Phase => 2,
            Instruction::Mqpm | Instruction::Move => 1,
            Instruction::Init
            | Instruction::Pauli
            | Instruction::Measure
            | Instruction::TStatePrep
            | Instruction::BellStatePrep => 0,
        }
    }

    /// Extra physical time outside logical cycles, in units of `t_op`.
    fn physical_ops(self) -> u32 {
        match self {
            Instruction::Init | Instruction::Measure => 1,
            _ => 0,
        }
    }
}

/// Wall-clock duration of one instruction at distance `d`.
pub fn instruction_time(i: Instruction, d: u32, qubit: &PhysicalQubitModel, cycle_factor: f64) -> f64 {
    f64::from(i.cycle_cost()) * cycle_time(d, qubit, cycle_factor) + f64::from(i.physical_ops()) * qubit.t_op
}

/// Tile counts of a fast-block layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutPlan {
    pub data_qubits: u64,
    pub tiles: u64,
}

/// `Q_L = 2 Q_D + ceil(sqrt(8 Q_D)) + 1`.
pub fn layout(data_qubits: u64) -> Result<LayoutPlan> {
    if data_qubits == 0 {
        return Err(Error::InvalidInput("layout needs at least one data qubit".into()));
    }
    let radicand = 8 * data_qubits;
    let mut root = (radicand as f64).sqrt() as u64;
    while root * root < radicand {
        root += 1;
    }
    while root > 0 && (root - 1) * (root - 1) >= radicand {
        root -= 1;
    }
    Ok(LayoutPlan {
        data_qubits,
        tiles: 2 * data_qubits + root + 1,
    })
}

/// Resources consumed by one Pauli gadget spread over `N` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetResourceVector {
    pub t_states: u64,
    pub bell_states: u64,
    pub mqpm_per_node: u64,
    pub mqpm_cycles: u64,
}

pub fn gadget_resources(nodes: u64) -> Result<GadgetResourceVector> {
    if nodes == 0 {
        return Err(Error::InvalidInput("node count must be at least 1".into()));
    }
    Ok(GadgetResourceVector {
        t_states: 1,
        bell_states: nodes - 1,
        mqpm_per_node: 1,
        mqpm_cycles: 1,
    })
}
