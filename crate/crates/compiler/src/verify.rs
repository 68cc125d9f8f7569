use std::fmt;

use glq_core::{PulseProgram, SitePosition, C64};
use glq_sim::{kernel, random::random_state, HybridState, DEFAULT_MAX_CLUSTER_QUBITS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circuit::{simulate_logical, Circuit};
use crate::compile::program_layouts;
use crate::error::{CompileError, Result};

pub const VERIFY_TOL: f64 = 1e-9;
pub const RANDOM_INPUTS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub inputs: usize,
    /// Smallest `|<expected|actual>|^2` over all inputs.
    pub worst_state_fidelity: f64,
    /// `|sum_b <U e_b|out_b>|^2 / d^2`; catches relative phases between basis inputs.
    pub process_fidelity: f64,
    /// Set when some input left the register entangled with other sites.
    pub problem: Option<String>,
}

impl VerifyReport {
    pub fn worst_fidelity(&self) -> f64 {
        self.worst_state_fidelity.min(self.process_fidelity)
    }

    pub fn passed(&self) -> bool {
        self.problem.is_none() && self.worst_fidelity() >= 1.0 - VERIFY_TOL
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })?;
        writeln!(f, "inputs {}", self.inputs)?;
        writeln!(f, "worst_fidelity {:.15}", self.worst_fidelity())?;
        writeln!(f, "worst_state_fidelity {:.15}", self.worst_state_fidelity)?;
        write!(f, "process_fidelity {:.15}", self.process_fidelity)?;
        if let Some(p) = &self.problem {
            write!(f, "\nproblem {p}")?;
        }
        Ok(())
    }
}

/// Check that `program` acts on the logical register as `circuit` does, up
/// to one global phase, over all basis inputs and [`RANDOM_INPUTS`] seeded
/// random states.
pub fn verify(circuit: &Circuit, program: &PulseProgram, seed: u64) -> Result<VerifyReport> {
    circuit.validate()?;
    if circuit.has_measurement() || program.ops.iter().any(|op| op.is_measurement()) {
        return Err(CompileError::Unsupported(
            "cannot verify programs with measurements".into(),
        ));
    }
    let (initial, fin) = program_layouts(program, circuit.width)?;
    let dim = 1usize << circuit.width;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs: Vec<Vec<C64>> = (0..dim)
        .map(|b| {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[b] = C64::new(1.0, 0.0);
            v
        })
        .collect();
    inputs.extend((0..RANDOM_INPUTS).map(|_| random_state(&mut rng, dim)));

    let logical: Vec<SitePosition> = fin.qubit_site.clone();
    let others: Vec<SitePosition> = program
        .geometry
        .sites()
        .filter(|s| !logical.contains(s))
        .collect();
    let mut report = VerifyReport {
        inputs: inputs.len(),
        worst_state_fidelity: 1.0,
        process_fidelity: 0.0,
        problem: None,
    };
    let mut junk_ref: Option<Vec<bool>> = None;
    let mut trace = C64::new(0.0, 0.0);
    for (k, input) in inputs.iter().enumerate() {
        let mut state = HybridState::new(program.geometry, DEFAULT_MAX_CLUSTER_QUBITS, seed);
        state.prepare(&initial.qubit_site, input)?;
        state.run(program)?;
        let junk: Option<Vec<bool>> = others.iter().map(|s| state.classical_bit(*s)).collect();
        let consistent = match (&junk, &junk_ref) {
            (None, _) => false,
            (Some(j), Some(r)) => j == r,
            (Some(j), None) => {
                junk_ref = Some(j.clone());
                true
            }
        };
        let out = if consistent {
            state.amplitudes_over(&logical)
        } else {
            None
        };
        let Some(out) = out else {
            report.problem = Some(format!("input {k}: register not separable from the other sites"));
            report.worst_state_fidelity = 0.0;
            report.process_fidelity = 0.0;
            return Ok(report);
        };
        let expected = simulate_logical(circuit, input)?;
        let f = kernel::overlap_fidelity(&expected, &out);
        report.worst_state_fidelity = report.worst_state_fidelity.min(f);
        if k < dim {
            trace += kernel::inner(&expected, &out);
        }
    }
    report.process_fidelity = trace.norm_sqr() / (dim * dim) as f64;
    Ok(report)
}
