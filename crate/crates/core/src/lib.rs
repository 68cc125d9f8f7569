//! Core types for a globally addressed optical-lattice quantum computer.
//!
//! The lattice is a 2D grid of sites. Even rows hold register qubits, odd
//! rows hold auxiliary qubits used to transport the pointer. Every control
//! pulse acts on all sites (or pairs of sites) of a row/parity class at once;
//! [`PulseOp`] enumerates those pulses and [`PulseProgram`] is an ordered
//! list of them bound to a [`LatticeGeometry`].

pub mod error;
pub mod geometry;
pub mod label;
pub mod program;
pub mod pulse;
pub mod unitary;
pub mod validate;

pub use error::CoreError;
pub use geometry::{LatticeGeometry, RowKind, SitePosition};
pub use label::{paper_label_to_op, print_label, LabelDialect};
pub use program::PulseProgram;
pub use pulse::{Parity, PulseOp, RowSet};
pub use unitary::{named_unitary, Unitary2, NAMED_GATES};
pub use validate::{validate_program, Severity, ValidationReport, Violation};

pub use num_complex::Complex64 as C64;
