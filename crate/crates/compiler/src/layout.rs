use std::fmt;

use glq_core::{LatticeGeometry, PulseOp, RowKind, SitePosition};

use crate::error::{CompileError, Result};

/// Where each logical qubit and the pointer currently sit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub geometry: LatticeGeometry,
    pub qubit_site: Vec<SitePosition>,
    pub pointer_home: SitePosition,
    /// Current pointer position. Equals `pointer_home` before any routing.
    pub pointer: SitePosition,
}

impl Layout {
    /// Qubit `i` at column `3i+1` of row 0, pointer home at `(0,1)`.
    pub fn default_for(width: usize, geometry: LatticeGeometry) -> Result<Self> {
        if width == 0 {
            return Err(CompileError::Layout("circuit width is 0".into()));
        }
        if geometry.columns() < 3 * width {
            return Err(CompileError::Layout(format!(
                "{width} qubits need at least {} columns, lattice has {}",
                3 * width,
                geometry.columns()
            )));
        }
        let home = SitePosition::new(0, 1);
        let layout = Self {
            geometry,
            qubit_site: (0..width).map(|i| SitePosition::new(3 * i + 1, 0)).collect(),
            pointer_home: home,
            pointer: home,
        };
        layout.check()?;
        Ok(layout)
    }

    pub fn width(&self) -> usize {
        self.qubit_site.len()
    }

    pub fn site(&self, q: usize) -> SitePosition {
        self.qubit_site[q]
    }

    pub fn check(&self) -> Result<()> {
        let g = &self.geometry;
        for (i, s) in self.qubit_site.iter().enumerate() {
            g.check(*s)?;
            if g.row_kind(s.row) != RowKind::Register {
                return Err(CompileError::Layout(format!(
                    "qubit {i} at {s} is not on a register row"
                )));
            }
            if self.qubit_site[..i].contains(s) {
                return Err(CompileError::Layout(format!("two qubits share site {s}")));
            }
        }
        for p in [self.pointer_home, self.pointer] {
            g.check(p)?;
            if g.row_kind(p.row) != RowKind::Auxiliary {
                return Err(CompileError::Layout(format!(
                    "pointer site {p} is not on an auxiliary row"
                )));
            }
        }
        Ok(())
    }

    /// Logical qubit at `site`, if any.
    pub fn qubit_at(&self, site: SitePosition) -> Option<usize> {
        self.qubit_site.iter().position(|&s| s == site)
    }

    /// Track where swap pulses move every qubit and the pointer.
    pub fn track(&mut self, op: &PulseOp) {
        if !matches!(op, PulseOp::HSwap { .. } | PulseOp::VSwap { .. }) {
            return;
        }
        for (a, b) in op.site_pairs(&self.geometry) {
            for s in self
                .qubit_site
                .iter_mut()
                .chain(std::iter::once(&mut self.pointer))
            {
                if *s == a {
                    *s = b;
                } else if *s == b {
                    *s = a;
                }
            }
        }
    }

    /// `0=1,0 1=4,0 ptr=0,1 home=0,1`
    pub fn to_meta(&self) -> String {
        let mut parts: Vec<String> = self
            .qubit_site
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{i}={},{}", s.col, s.row))
            .collect();
        parts.push(format!("ptr={},{}", self.pointer.col, self.pointer.row));
        parts.push(format!(
            "home={},{}",
            self.pointer_home.col, self.pointer_home.row
        ));
        parts.join(" ")
    }

    pub fn from_meta(geometry: LatticeGeometry, text: &str) -> Result<Self> {
        let bad = |m: &str| CompileError::Layout(format!("{m} in `{text}`"));
        let site = |v: &str| -> Result<SitePosition> {
            let (c, r) = v.split_once(',').ok_or_else(|| bad("expected col,row"))?;
            Ok(SitePosition::new(
                c.parse().map_err(|_| bad("bad column"))?,
                r.parse().map_err(|_| bad("bad row"))?,
            ))
        };
        let mut qubits: Vec<(usize, SitePosition)> = Vec::new();
        let (mut ptr, mut home) = (None, None);
        for tok in text.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match k {
                "ptr" => ptr = Some(site(v)?),
                "home" => home = Some(site(v)?),
                _ => qubits.push((k.parse().map_err(|_| bad("bad qubit index"))?, site(v)?)),
            }
        }
        qubits.sort();
        if qubits.iter().enumerate().any(|(i, (q, _))| *q != i) {
            return Err(bad("qubit indices must be 0..n"));
        }
        let pointer = ptr.ok_or_else(|| bad("missing ptr"))?;
        let layout = Self {
            geometry,
            qubit_site: qubits.into_iter().map(|(_, s)| s).collect(),
            pointer_home: home.unwrap_or(pointer),
            pointer,
        };
        layout.check()?;
        Ok(layout)
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_meta())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use glq_core::{Parity, RowSet};

    #[test]
    fn default_layout_spaces_by_three() {
        let g = LatticeGeometry::new(18, 2).unwrap();
        let l = Layout::default_for(6, g).unwrap();
        assert_eq!(l.site(5), SitePosition::new(16, 0));
        assert!(Layout::default_for(7, g).is_err());
        assert!(Layout::default_for(0, g).is_err());
    }

    #[test]
    fn meta_round_trips() {
        let g = LatticeGeometry::new(9, 2).unwrap();
        let l = Layout::default_for(3, g).unwrap();
        assert_eq!(Layout::from_meta(g, &l.to_meta()).unwrap(), l);
    }

    #[test]
    fn tracking_follows_register_swaps() {
        let g = LatticeGeometry::new(6, 2).unwrap();
        let mut l = Layout::default_for(2, g).unwrap();
        l.track(&PulseOp::HSwap {
            rows: RowSet::Register,
            parity: Parity::Odd,
        });
        assert_eq!(l.site(0), SitePosition::new(2, 0));
        assert_eq!(l.site(1), SitePosition::new(3, 0));
        assert_eq!(l.pointer, SitePosition::new(0, 1));
    }
}
