//! Built-in applications and hardware presets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{ApplicationProfile, HardwareModel};

pub const FAST_T_OP: f64 = 50e-9;
pub const SLOW_T_OP: f64 = 100e-6;
pub const OPTIMISTIC_P: f64 = 1e-4;
pub const PESSIMISTIC_P: f64 = 1e-3;

/// Raw Bell error of today's links, and the two improved values.
pub const BELL_CURRENT: f64 = 0.05;
pub const BELL_OPTIMISTIC: f64 = 0.01;
pub const BELL_TARGET: f64 = 0.001;

pub const DEFAULT_NODE_SIZE: u64 = 45_000;
/// Default link rates, about half the logical clock of each qubit type.
pub const FAST_ETA: f64 = 10e6;
pub const SLOW_ETA: f64 = 5e3;

pub const ETA_SWEEP_MIN: f64 = 300.0;
pub const ETA_SWEEP_MAX: f64 = 2e8;
pub const NODE_SIZE_SWEEP: [u64; 7] = [3000, 5000, 15_000, 25_000, 45_000, 60_000, 100_000];

/// (canonical name, aliases, data qubits, T count)
const APPLICATIONS: [(&str, &[&str], u64, f64); 8] = [
    ("Ising 10x10", &["ising"], 100, 9.54e5),
    (
        "Fermi-Hubbard 10x10",
        &["fermi-hubbard", "fermi_hubbard", "fh", "hubbard"],
        241,
        7.93e8,
    ),
    ("Heisenberg 10x10", &["heisenberg", "heis"], 123, 2.55e10),
    ("ZnS QPE", &["zns"], 351, 6.12e10),
    ("Benzene QPE", &["benzene"], 504, 2.86e11),
    ("Ruthenium QPE", &["ruthenium", "ru"], 1318, 2.70e11),
    ("Nitrogenase QPE", &["nitrogenase", "femoco"], 1424, 8.63e12),
    ("RSA-2048", &["rsa", "rsa2048", "factoring", "shor"], 12581, 1.50e10),
];

pub fn builtin_applications() -> Vec<ApplicationProfile> {
    APPLICATIONS
        .iter()
        .map(|(name, _, q, t)| ApplicationProfile {
            name: (*name).to_string(),
            data_qubits: *q,
            t_count: *t,
            eps_total: 0.01,
        })
        .collect()
}

fn normalize(s: &str) -> String {
    s.trim().to_ascii_lowercase().replace([' ', '_'], "-")
}

/// Case-insensitive lookup by canonical name or alias.
pub fn lookup_application(name: &str) -> Result<ApplicationProfile> {
    let key = normalize(name);
    APPLICATIONS
        .iter()
        .position(|(canon, aliases, _, _)| normalize(canon) == key || aliases.iter().any(|a| normalize(a) == key))
        .map(|i| builtin_applications().swap_remove(i))
        .ok_or_else(|| Error::NotFound {
            kind: "application",
            name: name.to_string(),
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub hardware: HardwareModel,
}

/// Fast and slow qubits at both gate error rates, each with the three raw
/// Bell errors. The bare names carry the 1% Bell error used for the
/// distributed benchmarks; `-bell5` and `-bell01` select 5% and 0.1%.
pub fn builtin_hardware() -> Vec<Preset> {
    let mut out = Vec::new();
    for (speed, t_op, eta) in [("fast", FAST_T_OP, FAST_ETA), ("slow", SLOW_T_OP, SLOW_ETA)] {
        for (grade, p) in [("optimistic", OPTIMISTIC_P), ("pessimistic", PESSIMISTIC_P)] {
            for (suffix, bell) in [
                ("", BELL_OPTIMISTIC),
                ("-bell5", BELL_CURRENT),
                ("-bell01", BELL_TARGET),
            ] {
                let hardware =
                    HardwareModel::new(t_op, p, bell, eta, DEFAULT_NODE_SIZE).expect("built-in hardware is valid");
                out.push(Preset {
                    name: format!("{speed}-{grade}{suffix}"),
                    hardware,
                });
            }
        }
    }
    out
}

pub fn lookup_preset(name: &str) -> Result<Preset> {
    let key = normalize(name);
    builtin_hardware()
        .into_iter()
        .find(|p| p.name == key)
        .ok_or_else(|| Error::NotFound {
            kind: "hardware preset",
            name: name.to_string(),
        })
}
