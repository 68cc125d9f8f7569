//! Lowers logical circuits to global pulse programs for a single-pointer
//! lattice and checks the result on the hybrid simulator.

pub mod circuit;
pub mod compile;
pub mod decompose;
pub mod error;
pub mod factor;
pub mod layout;
pub mod macros;
pub mod verify;

pub use circuit::{apply_gate, random_circuit, simulate_logical, Circuit, Gate};
pub use compile::{compile, program_layouts, CompiledProgram, Readout, COST_HEADER};
pub use error::{CompileError, Result};
pub use factor::{factor15_circuit, factor15_program, run_factor15, FactorRun};
pub use layout::Layout;
pub use macros::{bring_adjacent, ccnot_square, local_1q, local_1q_ops, measure_macro, route_pointer};
pub use verify::{verify, VerifyReport, VERIFY_TOL};
