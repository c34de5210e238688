//! Brute-force Pauli enumeration for distillation units.
//!
//! A bilateral protocol applies `U` on Alice's halves and `U*` on Bob's, which
//! leaves perfect Bell pairs invariant. A Pauli error on Bob's half of a pair
//! is equivalent (up to phase) to the same Pauli on Alice's half, so every
//! input error is tracked as a single Pauli frame on Alice's side.
//!
//! Two independent routes classify a frame:
//!
//! * the code route checks commutation with the unit's stabilizers and
//!   logical operators;
//! * the circuit route pushes the frame through the actual two-qubit
//!   distillation circuit and reads the measured ancilla.
//!
//! The circuit route also injects single faults after every gate and
//! measurement to produce Clifford-error coefficients.

use std::fmt;

use super::poly::{Exponents, Polynomial, Var};
use super::{PauliErrorRates, UnitErrorModel, UnitKind};
use crate::error::{Error, Result};

/// Single-qubit Pauli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ERRORS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn var(self) -> Option<Var> {
        match self {
            Pauli::I => None,
            Pauli::X => Some(Var::Px),
            Pauli::Y => Some(Var::Py),
            Pauli::Z => Some(Var::Pz),
        }
    }
}

/// Multi-qubit Pauli operator without phase, stored as X and Z bit masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    x: u32,
    z: u32,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Parses strings like `"XZZXI"`; qubit 0 is the leftmost character.
    pub fn parse(s: &str) -> Result<Self> {
        let mut out = Self::identity();
        for (q, ch) in s.chars().enumerate() {
            let p = match ch {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(Error::InvalidInput(format!("bad Pauli character '{ch}' in {s:?}"))),
            };
            out.set(q, p);
        }
        Ok(out)
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        let mask = 1u32 << q;
        self.x = if x { self.x | mask } else { self.x & !mask };
        self.z = if z { self.z | mask } else { self.z & !mask };
    }

    /// Product up to phase.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones().is_multiple_of(2)
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 32 - (self.x | self.z).leading_zeros() as usize;
        for q in 0..n.max(1) {
            let ch = match self.get(q) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// Result of one protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Rejected,
    /// Accepted with the given residual error on the kept pair.
    Accepted(Pauli),
}

/// Stabilizer description of a unit: the parity checks compared across the
/// two sides and the logical operators of the kept pair.
#[derive(Debug, Clone)]
pub struct StabilizerCheck {
    pub n: usize,
    pub stabilizers: Vec<PauliString>,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
}

impl StabilizerCheck {
    pub fn for_kind(kind: UnitKind) -> Self {
        let parse = |s: &str| PauliString::parse(s).expect("static Pauli string");
        match kind {
            UnitKind::RepetitionZ => Self {
                n: 2,
                stabilizers: vec![parse("ZZ")],
                logical_x: parse("XX"),
                logical_z: parse("ZI"),
            },
            UnitKind::RepetitionX => Self {
                n: 2,
                stabilizers: vec![parse("XX")],
                logical_x: parse("XI"),
                logical_z: parse("ZZ"),
            },
            UnitKind::RepetitionY => Self {
                n: 2,
                stabilizers: vec![parse("YY")],
                logical_x: parse("ZX"),
                logical_z: parse("XX"),
            },
            UnitKind::FiveQubitPerfect => Self {
                n: 5,
                stabilizers: ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"].into_iter().map(parse).collect(),
                logical_x: parse("XXXXX"),
                logical_z: parse("ZZZZZ"),
            },
        }
    }

    pub fn classify(&self, error: &PauliString) -> Outcome {
        if self.stabilizers.iter().any(|s| !s.commutes(error)) {
            return Outcome::Rejected;
        }
        let x = !error.commutes(&self.logical_z);
        let z = !error.commutes(&self.logical_x);
        Outcome::Accepted(Pauli::from_bits(x, z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
}

impl Gate {
    fn apply(&self, frame: &mut PauliString) {
        match *self {
            Gate::H(q) => {
                let (x, z) = frame.get(q).bits();
                frame.set(q, Pauli::from_bits(z, x));
            }
            Gate::S(q) => {
                let (x, z) = frame.get(q).bits();
                frame.set(q, Pauli::from_bits(x, z ^ x));
            }
            Gate::Cnot { control, target } => {
                let (xc, zc) = frame.get(control).bits();
                let (xt, zt) = frame.get(target).bits();
                frame.set(target, Pauli::from_bits(xt ^ xc, zt));
                frame.set(control, Pauli::from_bits(xc, zc ^ zt));
            }
        }
    }

    fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    X,
    Z,
}

/// Two-pair distillation circuit: qubit 0 is kept, qubit 1 is measured and
/// compared across the two sides.
#[derive(Debug, Clone)]
pub struct DistillationCircuit {
    pub gates: Vec<Gate>,
    pub measured: usize,
    pub basis: Basis,
}

impl DistillationCircuit {
    /// Circuits exist for the repetition units only.
    pub fn for_kind(kind: UnitKind) -> Option<Self> {
        let cnot = |control, target| Gate::Cnot { control, target };
        let circuit = match kind {
            UnitKind::RepetitionZ => Self {
                gates: vec![cnot(0, 1)],
                measured: 1,
                basis: Basis::Z,
            },
            UnitKind::RepetitionX => Self {
                gates: vec![cnot(1, 0)],
                measured: 1,
                basis: Basis::X,
            },
            UnitKind::RepetitionY => Self {
                gates: vec![Gate::S(0), Gate::S(1), cnot(1, 0), Gate::S(0)],
                measured: 1,
                basis: Basis::X,
            },
            UnitKind::FiveQubitPerfect => return None,
        };
        Some(circuit)
    }

    fn run_from(&self, mut frame: PauliString, start: usize, flip: bool) -> Outcome {
        for gate in &self.gates[start..] {
            gate.apply(&mut frame);
        }
        let (x, z) = frame.get(self.measured).bits();
        let mismatch = match self.basis {
            Basis::Z => x,
            Basis::X => z,
        };
        if mismatch ^ flip {
            Outcome::Rejected
        } else {
            Outcome::Accepted(frame.get(0))
        }
    }

    pub fn classify(&self, error: &PauliString) -> Outcome {
        self.run_from(*error, 0, false)
    }

    /// First-order Clifford-error coefficients `(rejection, x, y, z)`.
    ///
    /// Each gate is followed by a uniformly random non-identity Pauli on its
    /// support with total probability `p`, each measurement flips with
    /// probability `p`, and both sides contribute equally.
    pub fn clifford_coefficients(&self) -> [f64; 4] {
        let mut coeffs = [0.0; 4];
        let mut tally = |outcome: Outcome, weight: f64| {
            let slot = match outcome {
                Outcome::Rejected => 0,
                Outcome::Accepted(Pauli::I) => return,
                Outcome::Accepted(Pauli::X) => 1,
                Outcome::Accepted(Pauli::Y) => 2,
                Outcome::Accepted(Pauli::Z) => 3,
            };
            coeffs[slot] += 2.0 * weight;
        };
        for (i, gate) in self.gates.iter().enumerate() {
            let support = gate.qubits();
            let faults = 4usize.pow(support.len() as u32) - 1;
            for code in 1..=faults {
                let mut frame = PauliString::identity();
                let mut rest = code;
                for &q in &support {
                    frame.set(q, [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rest % 4]);
                    rest /= 4;
                }
                tally(self.run_from(frame, i + 1, false), 1.0 / faults as f64);
            }
        }
        tally(self.run_from(PauliString::identity(), self.gates.len(), true), 1.0);
        coeffs
    }
}

fn monomial_of(config: &[Pauli]) -> Exponents {
    let mut e = [0u8; 4];
    for v in config.iter().filter_map(|p| p.var()) {
        e[v as usize] += 1;
    }
    e
}

/// Calls `f` with every assignment of Paulis to `n` pairs having at most
/// `order` non-identity entries.
fn for_each_config(n: usize, order: usize, mut f: impl FnMut(&[Pauli])) {
    let all = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut config = vec![Pauli::I; n];
    for code in 0..4usize.pow(n as u32) {
        let mut rest = code;
        for slot in config.iter_mut() {
            *slot = all[rest % 4];
            rest /= 4;
        }
        if config.iter().filter(|p| **p != Pauli::I).count() <= order {
            f(&config);
        }
    }
}

fn to_string(config: &[Pauli]) -> PauliString {
    let mut s = PauliString::identity();
    for (q, p) in config.iter().enumerate() {
        s.set(q, *p);
    }
    s
}

fn accumulate(n: usize, order: usize, classify: impl Fn(&PauliString) -> Outcome) -> UnitErrorModel {
    let mut model = UnitErrorModel {
        rejection: Polynomial::zero(),
        out_x: Polynomial::zero(),
        out_y: Polynomial::zero(),
        out_z: Polynomial::zero(),
    };
    for_each_config(n, order, |config| {
        let target = match classify(&to_string(config)) {
            Outcome::Rejected => &mut model.rejection,
            Outcome::Accepted(Pauli::I) => return,
            Outcome::Accepted(Pauli::X) => &mut model.out_x,
            Outcome::Accepted(Pauli::Y) => &mut model.out_y,
            Outcome::Accepted(Pauli::Z) => &mut model.out_z,
        };
        target.add_term(1.0, monomial_of(config));
    });
    model
}

fn check_order(order: u32) -> Result<usize> {
    if (1..=3).contains(&order) {
        Ok(order as usize)
    } else {
        Err(Error::InvalidInput(format!(
            "enumeration order must be 1, 2 or 3, got {order}"
        )))
    }
}

/// Re-derives a unit's error polynomials by enumerating input errors of
/// weight up to `order` through the stabilizer check. For repetition units
/// the first-order Clifford terms from [`DistillationCircuit`] are added.
pub fn enumerate_unit_model(kind: UnitKind, order: u32) -> Result<UnitErrorModel> {
    let order = check_order(order)?;
    let check = StabilizerCheck::for_kind(kind);
    let mut model = accumulate(check.n, order, |e| check.classify(e));
    if let Some(circuit) = DistillationCircuit::for_kind(kind) {
        let coeffs = circuit.clifford_coefficients();
        let p = [0, 0, 0, 1];
        model.rejection.add_term(coeffs[0], p);
        model.out_x.add_term(coeffs[1], p);
        model.out_y.add_term(coeffs[2], p);
        model.out_z.add_term(coeffs[3], p);
    }
    Ok(model)
}

/// Input-error polynomials from the circuit route (repetition units only).
pub fn enumerate_circuit_model(kind: UnitKind, order: u32) -> Result<Option<UnitErrorModel>> {
    let order = check_order(order)?;
    Ok(DistillationCircuit::for_kind(kind).map(|c| accumulate(2, order, |e| c.classify(e))))
}

/// Exact outcome probabilities over all input configurations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOutcome {
    pub rejected: f64,
    pub clean: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ExactOutcome {
    pub fn total(&self) -> f64 {
        self.rejected + self.clean + self.x + self.y + self.z
    }

    pub fn accept(&self) -> f64 {
        1.0 - self.rejected
    }
}

/// Sums full configuration weights (identity pairs weighted by
/// `1 - total`) over all `4^n` inputs with noiseless Cliffords.
pub fn exact_outcome(kind: UnitKind, rates: PauliErrorRates) -> Result<ExactOutcome> {
    rates.validate()?;
    let check = StabilizerCheck::for_kind(kind);
    let weight = |p: Pauli| match p {
        Pauli::I => 1.0 - rates.total(),
        Pauli::X => rates.p_x,
        Pauli::Y => rates.p_y,
        Pauli::Z => rates.p_z,
    };
    let mut out = ExactOutcome {
        rejected: 0.0,
        clean: 0.0,
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };
    for_each_config(check.n, check.n, |config| {
        let w: f64 = config.iter().map(|p| weight(*p)).product();
        let slot = match check.classify(&to_string(config)) {
            Outcome::Rejected => &mut out.rejected,
            Outcome::Accepted(Pauli::I) => &mut out.clean,
            Outcome::Accepted(Pauli::X) => &mut out.x,
            Outcome::Accepted(Pauli::Y) => &mut out.y,
            Outcome::Accepted(Pauli::Z) => &mut out.z,
        };
        *slot += w;
    });
    Ok(out)
}
