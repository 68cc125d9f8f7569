use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use glq_core::{validate_program, PulseOp, PulseProgram, SitePosition, Unitary2};

use crate::circuit::{Circuit, Gate};
use crate::error::{CompileError, Result};
use crate::layout::Layout;
use crate::macros::Emitter;

pub const META_INITIAL: &str = "initial";
pub const META_FINAL: &str = "final";
pub const META_QUBITS: &str = "qubits";
pub const COST_HEADER: &str = "op_variant,count";

/// Where the outcome for one measured qubit can be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Readout {
    pub qubit: usize,
    pub op_index: usize,
    pub site: SitePosition,
}

#[derive(Debug, Clone)]
pub struct CompiledProgram {
    pub program: PulseProgram,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub cost: BTreeMap<&'static str, usize>,
    pub macros: BTreeMap<&'static str, usize>,
    pub readouts: Vec<Readout>,
}

impl CompiledProgram {
    pub fn cost_csv(&self) -> String {
        let mut out = format!("{COST_HEADER}\n");
        for (k, v) in &self.cost {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }

    /// Measured bit for `qubit` in a record set, if it was measured.
    pub fn outcome(&self, records: &[glq_sim::MeasurementRecord], qubit: usize) -> Option<u8> {
        let r = self.readouts.iter().rev().find(|r| r.qubit == qubit)?;
        records
            .iter()
            .find(|rec| rec.op_index == r.op_index)?
            .outcomes
            .iter()
            .find(|o| o.site == r.site)
            .map(|o| o.outcome)
    }
}

/// Lower `circuit` onto the lattice of `layout`.
pub fn compile(circuit: &Circuit, layout: &Layout) -> Result<CompiledProgram> {
    circuit.validate()?;
    if circuit.width == 0 {
        return Err(CompileError::Layout("circuit width is 0".into()));
    }
    if layout.width() != circuit.width {
        return Err(CompileError::Layout(format!(
            "layout places {} qubits, circuit has {}",
            layout.width(),
            circuit.width
        )));
    }
    layout.check()?;
    let mut start = layout.clone();
    start.pointer = start.pointer_home;
    let mut e = Emitter::new(start.clone());
    e.emit(PulseOp::InitPointer {
        site: start.pointer_home,
    });
    let mut readouts = Vec::new();
    for gate in &circuit.gates {
        lower(&mut e, gate, &mut readouts)?;
    }
    let mut program = PulseProgram::with_ops(layout.geometry, e.ops);
    program.set_meta(META_QUBITS, circuit.width.to_string());
    program.set_meta(META_INITIAL, start.to_meta());
    program.set_meta(META_FINAL, e.layout.to_meta());
    let report = validate_program(&program);
    if let Some(v) = report.errors().next() {
        return Err(CompileError::Routing(format!(
            "emitted op {} fails validation: {}",
            v.op_index, v.message
        )));
    }
    Ok(CompiledProgram {
        cost: program.cost(),
        program,
        initial_layout: start,
        final_layout: e.layout,
        macros: e.macros,
        readouts,
    })
}

fn t_gate(dagger: bool) -> Unitary2 {
    Unitary2::phase(if dagger { -FRAC_PI_4 } else { FRAC_PI_4 })
}

fn lower(e: &mut Emitter, gate: &Gate, readouts: &mut Vec<Readout>) -> Result<()> {
    let h = Unitary2::hadamard();
    match *gate {
        Gate::OneQubit(q, u) => e.local_1q(q, &u),
        Gate::CNOT(c, t) => e.cnot(c, t),
        Gate::CZ(a, b) => {
            e.local_1q(b, &h)?;
            e.cnot(a, b)?;
            e.local_1q(b, &h)
        }
        Gate::CCNOT(a, b, t) => {
            e.local_1q(t, &h)?;
            e.cnot(b, t)?;
            e.local_1q(t, &t_gate(true))?;
            e.cnot(a, t)?;
            e.local_1q(t, &t_gate(false))?;
            e.cnot(b, t)?;
            e.local_1q(t, &t_gate(true))?;
            e.cnot(a, t)?;
            e.local_1q(b, &t_gate(false))?;
            e.local_1q(t, &(h * t_gate(false)))?;
            e.cnot(a, b)?;
            e.local_1q(a, &t_gate(false))?;
            e.local_1q(b, &t_gate(true))?;
            e.cnot(a, b)
        }
        Gate::CSWAP(c, a, b) => {
            e.cnot(b, a)?;
            lower(e, &Gate::CCNOT(c, a, b), readouts)?;
            e.cnot(b, a)
        }
        Gate::Measure(q) => {
            let (op_index, site) = e.measure(q)?;
            readouts.push(Readout {
                qubit: q,
                op_index,
                site,
            });
            Ok(())
        }
    }
}

/// Layouts recorded in a compiled program, or the default layout when the
/// program carries none.
pub fn program_layouts(program: &PulseProgram, width: usize) -> Result<(Layout, Layout)> {
    let g = program.geometry;
    match (program.meta(META_INITIAL), program.meta(META_FINAL)) {
        (Some(i), Some(f)) => {
            let (i, f) = (Layout::from_meta(g, i)?, Layout::from_meta(g, f)?);
            if i.width() != width || f.width() != width {
                return Err(CompileError::Layout(format!(
                    "program layouts place {} qubits, circuit has {width}",
                    i.width()
                )));
            }
            Ok((i, f))
        }
        (None, None) => {
            let l = Layout::default_for(width, g)?;
            Ok((l.clone(), l))
        }
        _ => Err(CompileError::Layout(
            "program has only one of the initial/final layouts".into(),
        )),
    }
}
