use std::fmt;

use glq_core::{named_unitary, Unitary2, C64};
use glq_sim::random::random_unitary;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{CompileError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    OneQubit(usize, Unitary2),
    CZ(usize, usize),
    CNOT(usize, usize),
    CCNOT(usize, usize, usize),
    CSWAP(usize, usize, usize),
    Measure(usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::OneQubit(q, _) | Gate::Measure(q) => vec![q],
            Gate::CZ(a, b) | Gate::CNOT(a, b) => vec![a, b],
            Gate::CCNOT(a, b, c) | Gate::CSWAP(a, b, c) => vec![a, b, c],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub width: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        check_gate(&g, self.width)?;
        self.gates.push(g);
        Ok(())
    }

    pub fn has_measurement(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::Measure(_)))
    }

    pub fn validate(&self) -> Result<()> {
        self.gates.iter().try_for_each(|g| check_gate(g, self.width))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CompileError::Parse {
                line: line_no,
                message,
            };
            let t: Vec<&str> = line.split_whitespace().collect();
            let q = |k: usize| -> Result<usize> {
                let s = t.get(k).ok_or_else(|| err("missing qubit index".into()))?;
                s.parse().map_err(|_| err(format!("bad qubit index `{s}`")))
            };
            if t[0] == "QUBITS" {
                if circuit.is_some() {
                    return Err(err("duplicate QUBITS header".into()));
                }
                circuit = Some(Circuit::new(q(1)?));
                continue;
            }
            let c = circuit.as_mut().ok_or(CompileError::NoHeader)?;
            let gate = match t[0] {
                "MEASURE" => Gate::Measure(q(1)?),
                "G" => {
                    let name = *t.get(1).ok_or_else(|| err("missing gate name".into()))?;
                    match name {
                        "CZ" => Gate::CZ(q(2)?, q(3)?),
                        "CNOT" => Gate::CNOT(q(2)?, q(3)?),
                        "CCNOT" => Gate::CCNOT(q(2)?, q(3)?, q(4)?),
                        "CSWAP" => Gate::CSWAP(q(2)?, q(3)?, q(4)?),
                        "U" => {
                            let target = q(2)?;
                            if t.len() != 11 {
                                return Err(err("G U expects a qubit and 8 reals".into()));
                            }
                            let mut r = [0.0; 8];
                            for (slot, s) in r.iter_mut().zip(&t[3..]) {
                                *slot = s.parse().map_err(|_| err(format!("bad real `{s}`")))?;
                            }
                            let u = Unitary2::from_reals(r);
                            if !u.is_unitary(1e-10) {
                                return Err(err("matrix is not unitary".into()));
                            }
                            Gate::OneQubit(target, u)
                        }
                        other => {
                            let u = named_unitary(other).map_err(|e| err(e.to_string()))?;
                            Gate::OneQubit(q(2)?, u)
                        }
                    }
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            };
            c.push(gate).map_err(|e| err(e.to_string()))?;
        }
        circuit.ok_or(CompileError::NoHeader)
    }
}

fn check_gate(g: &Gate, width: usize) -> Result<()> {
    let qs = g.qubits();
    for (i, &q) in qs.iter().enumerate() {
        if q >= width {
            return Err(CompileError::InvalidGate(format!(
                "qubit {q} out of range for width {width}"
            )));
        }
        if qs[..i].contains(&q) {
            return Err(CompileError::InvalidGate(format!("qubit {q} repeated")));
        }
    }
    if let Gate::OneQubit(_, u) = g {
        if !u.is_unitary(1e-10) {
            return Err(CompileError::InvalidGate("matrix is not unitary".into()));
        }
    }
    Ok(())
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QUBITS {}", self.width)?;
        for g in &self.gates {
            match g {
                Gate::OneQubit(q, u) => match u.name() {
                    Some(n) => writeln!(f, "G {n} {q}")?,
                    None => {
                        let r: Vec<String> = u.to_reals().iter().map(|x| format!("{x:.16e}")).collect();
                        writeln!(f, "G U {q} {}", r.join(" "))?
                    }
                },
                Gate::CZ(a, b) => writeln!(f, "G CZ {a} {b}")?,
                Gate::CNOT(a, b) => writeln!(f, "G CNOT {a} {b}")?,
                Gate::CCNOT(a, b, c) => writeln!(f, "G CCNOT {a} {b} {c}")?,
                Gate::CSWAP(a, b, c) => writeln!(f, "G CSWAP {a} {b} {c}")?,
                Gate::Measure(q) => writeln!(f, "MEASURE {q}")?,
            }
        }
        Ok(())
    }
}

/// Apply a unitary gate to a little-endian logical statevector.
pub fn apply_gate(state: &mut [C64], gate: &Gate) -> Result<()> {
    let bit = |q: usize| 1usize << q;
    match *gate {
        Gate::OneQubit(q, u) => glq_sim::kernel::apply_1q(state, q, &u),
        Gate::CZ(a, b) => {
            for (i, amp) in state.iter_mut().enumerate() {
                if i & bit(a) != 0 && i & bit(b) != 0 {
                    *amp = -*amp;
                }
            }
        }
        Gate::CNOT(c, t) => glq_sim::kernel::apply_controlled(state, c, t, &Unitary2::pauli_x()),
        Gate::CCNOT(a, b, t) => {
            for i in 0..state.len() {
                if i & bit(a) != 0 && i & bit(b) != 0 && i & bit(t) == 0 {
                    state.swap(i, i | bit(t));
                }
            }
        }
        Gate::CSWAP(c, a, b) => {
            for i in 0..state.len() {
                if i & bit(c) != 0 && i & bit(a) != 0 && i & bit(b) == 0 {
                    state.swap(i, i ^ bit(a) ^ bit(b));
                }
            }
        }
        Gate::Measure(_) => {
            return Err(CompileError::Unsupported(
                "measurement has no unitary action".into(),
            ))
        }
    }
    Ok(())
}

/// `U|psi>` for a measurement-free circuit.
pub fn simulate_logical(circuit: &Circuit, input: &[C64]) -> Result<Vec<C64>> {
    let mut s = input.to_vec();
    for g in &circuit.gates {
        apply_gate(&mut s, g)?;
    }
    Ok(s)
}

/// Random measurement-free circuit of width 1..=`max_width` with up to
/// `max_gates` gates drawn from one-qubit, CZ, CNOT and CCNOT.
pub fn random_circuit<R: Rng>(rng: &mut R, max_width: usize, max_gates: usize) -> Circuit {
    let width = rng.gen_range(1..=max_width.max(1));
    let mut c = Circuit::new(width);
    let len = rng.gen_range(1..=max_gates.max(1));
    let mut qubits: Vec<usize> = (0..width).collect();
    for _ in 0..len {
        qubits.shuffle(rng);
        let kinds = match width {
            1 => 1,
            2 => 3,
            _ => 4,
        };
        let gate = match rng.gen_range(0..kinds) {
            0 => Gate::OneQubit(qubits[0], random_unitary(rng)),
            1 => Gate::CZ(qubits[0], qubits[1]),
            2 => Gate::CNOT(qubits[0], qubits[1]),
            _ => Gate::CCNOT(qubits[0], qubits[1], qubits[2]),
        };
        c.gates.push(gate);
    }
    c
}
