use std::fmt;

use crate::geometry::{LatticeGeometry, RowKind, SitePosition};
use crate::unitary::Unitary2;

/// Which rows a pulse addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowSet {
    Register,
    Auxiliary,
    All,
}

impl RowSet {
    pub const ALL: [RowSet; 3] = [RowSet::Register, RowSet::Auxiliary, RowSet::All];

    pub fn includes(self, kind: RowKind) -> bool {
        match self {
            RowSet::Register => kind == RowKind::Register,
            RowSet::Auxiliary => kind == RowKind::Auxiliary,
            RowSet::All => true,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            RowSet::Register => "REG",
            RowSet::Auxiliary => "AUX",
            RowSet::All => "ALL",
        }
    }

    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "REG" => Some(RowSet::Register),
            "AUX" => Some(RowSet::Auxiliary),
            "ALL" => Some(RowSet::All),
            _ => None,
        }
    }

    pub fn rows(self, geometry: &LatticeGeometry) -> Vec<usize> {
        (0..geometry.rows())
            .filter(|&r| self.includes(geometry.row_kind(r)))
            .collect()
    }
}

/// Offset of the first pair: parity 0 pairs (0,1),(2,3)…; parity 1 pairs (1,2),(3,4)….
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Even, Parity::Odd];

    pub fn bit(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn of(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

/// `(first, first+1)` index pairs along an axis of length `len`.
pub fn pair_starts(len: usize, parity: Parity) -> impl Iterator<Item = usize> {
    (parity.bit()..len.saturating_sub(1)).step_by(2)
}

/// One global lattice instruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseOp {
    RamanRotate {
        rows: RowSet,
        u: Unitary2,
    },
    HSwap {
        rows: RowSet,
        parity: Parity,
    },
    VSwap {
        parity: Parity,
    },
    /// Control on the auxiliary-row site of each vertical pair.
    VControlled {
        u: Unitary2,
        pairing: Parity,
    },
    /// Control on the left site of each horizontal pair.
    HControlled {
        u: Unitary2,
        rows: RowSet,
        parity: Parity,
    },
    MeasureAuxAlternate {
        parity: Parity,
    },
    InitPointer {
        site: SitePosition,
    },
}

impl PulseOp {
    /// Variant name used in cost tables.
    pub fn variant(&self) -> &'static str {
        match self {
            PulseOp::RamanRotate { .. } => "RamanRotate",
            PulseOp::HSwap { .. } => "HSwap",
            PulseOp::VSwap { .. } => "VSwap",
            PulseOp::VControlled { .. } => "VControlled",
            PulseOp::HControlled { .. } => "HControlled",
            PulseOp::MeasureAuxAlternate { .. } => "MeasureAuxAlternate",
            PulseOp::InitPointer { .. } => "InitPointer",
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, PulseOp::MeasureAuxAlternate { .. })
    }

    /// Formal inverse. `None` for measurements.
    pub fn inverse(&self) -> Option<PulseOp> {
        Some(match *self {
            PulseOp::RamanRotate { rows, u } => PulseOp::RamanRotate { rows, u: u.dagger() },
            PulseOp::VControlled { u, pairing } => PulseOp::VControlled {
                u: u.dagger(),
                pairing,
            },
            PulseOp::HControlled { u, rows, parity } => PulseOp::HControlled {
                u: u.dagger(),
                rows,
                parity,
            },
            PulseOp::MeasureAuxAlternate { .. } => return None,
            other => other,
        })
    }

    /// Sites a single-site op touches, in row-major order.
    pub fn single_sites(&self, g: &LatticeGeometry) -> Vec<SitePosition> {
        match *self {
            PulseOp::RamanRotate { rows, .. } => rows
                .rows(g)
                .into_iter()
                .flat_map(|r| (0..g.columns()).map(move |c| SitePosition::new(c, r)))
                .collect(),
            PulseOp::MeasureAuxAlternate { parity } => g
                .auxiliary_rows()
                .flat_map(|r| {
                    (parity.bit()..g.columns())
                        .step_by(2)
                        .map(move |c| SitePosition::new(c, r))
                })
                .collect(),
            PulseOp::InitPointer { site } => vec![site],
            _ => Vec::new(),
        }
    }

    /// Site pairs a two-site op touches. For controlled ops the control comes first.
    pub fn site_pairs(&self, g: &LatticeGeometry) -> Vec<(SitePosition, SitePosition)> {
        match *self {
            PulseOp::HSwap { rows, parity } | PulseOp::HControlled { rows, parity, .. } => rows
                .rows(g)
                .into_iter()
                .flat_map(|r| {
                    pair_starts(g.columns(), parity)
                        .map(move |c| (SitePosition::new(c, r), SitePosition::new(c + 1, r)))
                })
                .collect(),
            PulseOp::VSwap { parity } => vertical_pairs(g, parity).collect(),
            PulseOp::VControlled { pairing, .. } => vertical_pairs(g, pairing)
                .map(|(a, b)| {
                    if g.row_kind(a.row) == RowKind::Auxiliary {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Sites left out of every pair because of the lattice boundary.
    pub fn unpaired_sites(&self, g: &LatticeGeometry) -> Vec<SitePosition> {
        let pairs = self.site_pairs(g);
        if pairs.is_empty() {
            return Vec::new();
        }
        let rows: Vec<usize> = match *self {
            PulseOp::HSwap { rows, .. } | PulseOp::HControlled { rows, .. } => rows.rows(g),
            _ => (0..g.rows()).collect(),
        };
        let mut touched = vec![false; g.num_sites()];
        for (a, b) in &pairs {
            touched[g.index(*a)] = true;
            touched[g.index(*b)] = true;
        }
        rows.into_iter()
            .flat_map(|r| (0..g.columns()).map(move |c| SitePosition::new(c, r)))
            .filter(|s| !touched[g.index(*s)])
            .collect()
    }

    /// Unitary carried by the op, if any.
    pub fn unitary(&self) -> Option<&Unitary2> {
        match self {
            PulseOp::RamanRotate { u, .. }
            | PulseOp::VControlled { u, .. }
            | PulseOp::HControlled { u, .. } => Some(u),
            _ => None,
        }
    }
}

fn vertical_pairs(
    g: &LatticeGeometry,
    parity: Parity,
) -> impl Iterator<Item = (SitePosition, SitePosition)> + '_ {
    pair_starts(g.rows(), parity).flat_map(move |r| {
        (0..g.columns()).map(move |c| (SitePosition::new(c, r), SitePosition::new(c, r + 1)))
    })
}

impl fmt::Display for PulseOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PulseOp::RamanRotate { rows, u } => write!(f, "RAMAN rowset={} u={u}", rows.token()),
            PulseOp::HSwap { rows, parity } => {
                write!(f, "HSWAP rowset={} parity={}", rows.token(), parity.bit())
            }
            PulseOp::VSwap { parity } => write!(f, "VSWAP parity={}", parity.bit()),
            PulseOp::VControlled { u, pairing } => {
                write!(f, "VCTRL u={u} pairing={}", pairing.bit())
            }
            PulseOp::HControlled { u, rows, parity } => {
                write!(f, "HCTRL u={u} rowset={} parity={}", rows.token(), parity.bit())
            }
            PulseOp::MeasureAuxAlternate { parity } => write!(f, "MEASAUX parity={}", parity.bit()),
            PulseOp::InitPointer { site } => write!(f, "INITPTR col={} row={}", site.col, site.row),
        }
    }
}
