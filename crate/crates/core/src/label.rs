//! Compact interaction labels of the form `H^SWAP_3`, `V^c-H`, `H^c-sz_1`.
//!
//! `H`/`V` selects horizontal or vertical pairs. Horizontal labels carry a
//! subscript 1..=4 that a [`LabelDialect`] maps to a row set and parity.
//! Vertical labels take no subscript (pairing 0) or `_2` (pairing 1).

use crate::error::{CoreError, Result};
use crate::pulse::{Parity, PulseOp, RowSet};
use crate::unitary::{named_unitary, Unitary2};

/// Gate tokens accepted after `c-`. The first token listed for a gate is
/// the one printed.
const GATE_TOKENS: [(&str, &str); 12] = [
    ("sz", "Z"),
    ("sx", "X"),
    ("sy", "Y"),
    ("sqrt-sz", "SZ"),
    ("U", "U8"),
    ("Udag", "U8dag"),
    ("H", "H"),
    ("W", "W"),
    ("I", "I"),
    ("NOT", "X"),
    ("Z", "Z"),
    ("X", "X"),
];

/// Subscript table for horizontal labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelDialect {
    pub name: String,
    /// Entry `k-1` gives the meaning of subscript `k`.
    pub table: [(RowSet, Parity); 4],
}

impl Default for LabelDialect {
    fn default() -> Self {
        Self {
            name: "default".into(),
            table: [
                (RowSet::Auxiliary, Parity::Even),
                (RowSet::Auxiliary, Parity::Odd),
                (RowSet::Register, Parity::Even),
                (RowSet::Register, Parity::Odd),
            ],
        }
    }
}

impl LabelDialect {
    fn lookup(&self, k: usize) -> Option<(RowSet, Parity)> {
        k.checked_sub(1).and_then(|i| self.table.get(i)).copied()
    }

    fn subscript(&self, rows: RowSet, parity: Parity) -> Option<usize> {
        self.table
            .iter()
            .position(|&e| e == (rows, parity))
            .map(|i| i + 1)
    }

    /// Every label the dialect can produce for the named gate set.
    pub fn all_labels(&self) -> Vec<String> {
        let mut gates: Vec<&str> = Vec::new();
        for (tok, name) in GATE_TOKENS {
            if GATE_TOKENS.iter().find(|(_, n)| *n == name).map(|(t, _)| *t) == Some(tok) {
                gates.push(tok);
            }
        }
        let mut out = vec!["V^SWAP".to_string(), "V^SWAP_2".to_string()];
        for k in 1..=4 {
            out.push(format!("H^SWAP_{k}"));
        }
        for g in gates {
            out.push(format!("V^c-{g}"));
            out.push(format!("V^c-{g}_2"));
            for k in 1..=4 {
                out.push(format!("H^c-{g}_{k}"));
            }
        }
        out
    }
}

fn gate_from_token(tok: &str) -> Option<Unitary2> {
    GATE_TOKENS
        .iter()
        .find(|(t, _)| *t == tok)
        .and_then(|(_, name)| named_unitary(name).ok())
}

fn token_for_gate(u: &Unitary2) -> Option<&'static str> {
    let name = u.name()?;
    GATE_TOKENS.iter().find(|(_, n)| *n == name).map(|(t, _)| *t)
}

/// Parse a label under `dialect`.
pub fn paper_label_to_op(label: &str, dialect: &LabelDialect) -> Result<PulseOp> {
    let fail = || CoreError::UnmappableLabel {
        label: label.to_string(),
        dialect: dialect.name.clone(),
    };
    let (axis, rest) = label.split_once('^').ok_or_else(fail)?;
    // The gate token may itself contain '_' only as the subscript separator.
    let (body, sub) = match rest.rsplit_once('_') {
        Some((b, s)) => (b, Some(s.parse::<usize>().map_err(|_| fail())?)),
        None => (rest, None),
    };
    let gate = if body == "SWAP" {
        None
    } else {
        let tok = body.strip_prefix("c-").ok_or_else(fail)?;
        Some(gate_from_token(tok).ok_or_else(fail)?)
    };
    match axis {
        "H" => {
            let (rows, parity) = dialect.lookup(sub.ok_or_else(fail)?).ok_or_else(fail)?;
            Ok(match gate {
                None => PulseOp::HSwap { rows, parity },
                Some(u) => PulseOp::HControlled { u, rows, parity },
            })
        }
        "V" => {
            let pairing = match sub {
                None | Some(1) => Parity::Even,
                Some(2) => Parity::Odd,
                _ => return Err(fail()),
            };
            Ok(match gate {
                None => PulseOp::VSwap { parity: pairing },
                Some(u) => PulseOp::VControlled { u, pairing },
            })
        }
        _ => Err(fail()),
    }
}

/// Canonical label for `op`, the inverse of [`paper_label_to_op`].
pub fn print_label(op: &PulseOp, dialect: &LabelDialect) -> Result<String> {
    let fail = || CoreError::UnmappableLabel {
        label: op.to_string(),
        dialect: dialect.name.clone(),
    };
    let vsub = |p: Parity| match p {
        Parity::Even => "",
        Parity::Odd => "_2",
    };
    match *op {
        PulseOp::HSwap { rows, parity } => {
            let k = dialect.subscript(rows, parity).ok_or_else(fail)?;
            Ok(format!("H^SWAP_{k}"))
        }
        PulseOp::HControlled { u, rows, parity } => {
            let k = dialect.subscript(rows, parity).ok_or_else(fail)?;
            let g = token_for_gate(&u).ok_or_else(fail)?;
            Ok(format!("H^c-{g}_{k}"))
        }
        PulseOp::VSwap { parity } => Ok(format!("V^SWAP{}", vsub(parity))),
        PulseOp::VControlled { u, pairing } => {
            let g = token_for_gate(&u).ok_or_else(fail)?;
            Ok(format!("V^c-{g}{}", vsub(pairing)))
        }
        _ => Err(fail()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples_from_the_table() {
        let d = LabelDialect::default();
        match paper_label_to_op("V^c-H", &d).unwrap() {
            PulseOp::VControlled { u, pairing } => {
                assert_eq!(pairing, Parity::Even);
                assert_eq!(u.name(), Some("H"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            paper_label_to_op("H^SWAP_1", &d).unwrap(),
            PulseOp::HSwap {
                rows: RowSet::Auxiliary,
                parity: Parity::Even
            }
        );
        match paper_label_to_op("H^c-sz_1", &d).unwrap() {
            PulseOp::HControlled { u, rows, parity } => {
                assert_eq!(u.name(), Some("Z"));
                assert_eq!((rows, parity), (RowSet::Auxiliary, Parity::Even));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_labels_name_the_dialect() {
        let d = LabelDialect::default();
        for bad in ["Q^bogus", "H^SWAP", "H^SWAP_5", "C^1,3_2", "V^c-T", "V^SWAP_3"] {
            let err = paper_label_to_op(bad, &d).unwrap_err().to_string();
            assert!(err.contains("default"), "{bad}: {err}");
        }
    }

    #[test]
    fn every_label_round_trips() {
        let d = LabelDialect::default();
        for label in d.all_labels() {
            let op = paper_label_to_op(&label, &d).unwrap();
            assert_eq!(print_label(&op, &d).unwrap(), label);
        }
    }
}
