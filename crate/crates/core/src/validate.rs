use std::fmt;

use crate::geometry::RowKind;
use crate::program::PulseProgram;
use crate::pulse::PulseOp;
use crate::unitary::UNITARY_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub op_index: usize,
    pub severity: Severity,
    /// Short machine-readable category, e.g. `unitarity` or `unpaired`.
    pub kind: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "op {}: {sev} [{}] {}", self.op_index, self.kind, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Warning)
    }

    /// True when no violation is an error. Warnings do not block execution.
    pub fn is_executable(&self) -> bool {
        self.errors().next().is_none()
    }
}

/// Check every op against the program's geometry.
pub fn validate_program(p: &PulseProgram) -> ValidationReport {
    let g = &p.geometry;
    let mut violations = Vec::new();
    for (i, op) in p.ops.iter().enumerate() {
        let mut push = |severity, kind, message: String| {
            violations.push(Violation {
                op_index: i,
                severity,
                kind,
                message,
            })
        };
        if let Some(u) = op.unitary() {
            let dev = u.unitarity_deviation();
            if dev > UNITARY_TOL {
                push(
                    Severity::Error,
                    "unitarity",
                    format!("matrix deviates from unitary by {dev:.3e}"),
                );
            }
        }
        match op {
            PulseOp::InitPointer { site } => {
                if !g.contains(*site) {
                    push(
                        Severity::Error,
                        "range",
                        format!("site {site} outside {g} lattice"),
                    );
                } else if g.row_kind(site.row) != RowKind::Auxiliary {
                    push(
                        Severity::Error,
                        "row-kind",
                        format!("pointer site {site} is not on an auxiliary row"),
                    );
                }
            }
            PulseOp::MeasureAuxAlternate { .. } => {
                if op.single_sites(g).is_empty() {
                    push(
                        Severity::Warning,
                        "empty",
                        "parity selects no auxiliary sites".into(),
                    );
                }
            }
            PulseOp::HSwap { .. }
            | PulseOp::VSwap { .. }
            | PulseOp::VControlled { .. }
            | PulseOp::HControlled { .. } => {
                if op.site_pairs(g).is_empty() {
                    push(
                        Severity::Warning,
                        "empty",
                        "parity forms no pairs on this lattice".into(),
                    );
                } else {
                    let unpaired = op.unpaired_sites(g);
                    if !unpaired.is_empty() {
                        let list: Vec<String> = unpaired.iter().map(|s| s.to_string()).collect();
                        push(
                            Severity::Warning,
                            "unpaired",
                            format!("edge sites left untouched: {}", list.join(" ")),
                        );
                    }
                }
            }
            PulseOp::RamanRotate { .. } => {}
        }
    }
    ValidationReport { violations }
}
