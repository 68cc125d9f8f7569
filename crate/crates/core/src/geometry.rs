use std::fmt;

use crate::error::{CoreError, Result};

/// Role of a lattice row, fixed by its parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowKind {
    Register,
    Auxiliary,
}

/// A 0-based lattice coordinate. `col` runs along x, `row` along y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SitePosition {
    pub col: usize,
    pub row: usize,
}

impl SitePosition {
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }
}

impl fmt::Display for SitePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.col, self.row)
    }
}

/// Rectangular lattice of `columns x rows` sites.
///
/// Row 0 is a register row; rows alternate register/auxiliary, so `rows`
/// must be even and every register row has an auxiliary partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeGeometry {
    columns: usize,
    rows: usize,
}

impl LatticeGeometry {
    pub fn new(columns: usize, rows: usize) -> Result<Self> {
        if columns < 2 {
            return Err(CoreError::Geometry(format!(
                "columns must be at least 2 (got {columns})"
            )));
        }
        if rows < 2 {
            return Err(CoreError::Geometry(format!(
                "rows must be at least 2 (got {rows})"
            )));
        }
        if !rows.is_multiple_of(2) {
            return Err(CoreError::Geometry(format!("rows must be even (got {rows})")));
        }
        Ok(Self { columns, rows })
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn num_sites(&self) -> usize {
        self.columns * self.rows
    }

    pub fn row_kind(&self, row: usize) -> RowKind {
        if row.is_multiple_of(2) {
            RowKind::Register
        } else {
            RowKind::Auxiliary
        }
    }

    pub fn contains(&self, site: SitePosition) -> bool {
        site.col < self.columns && site.row < self.rows
    }

    pub fn check(&self, site: SitePosition) -> Result<()> {
        if self.contains(site) {
            Ok(())
        } else {
            Err(CoreError::SiteOutOfRange {
                col: site.col,
                row: site.row,
                cols: self.columns,
                rows: self.rows,
            })
        }
    }

    /// Row-major linear index of a site.
    pub fn index(&self, site: SitePosition) -> usize {
        debug_assert!(self.contains(site));
        site.row * self.columns + site.col
    }

    pub fn position(&self, index: usize) -> SitePosition {
        SitePosition::new(index % self.columns, index / self.columns)
    }

    pub fn sites(&self) -> impl Iterator<Item = SitePosition> + '_ {
        (0..self.num_sites()).map(move |i| self.position(i))
    }

    pub fn register_rows(&self) -> impl Iterator<Item = usize> {
        (0..self.rows).step_by(2)
    }

    pub fn auxiliary_rows(&self) -> impl Iterator<Item = usize> {
        (1..self.rows).step_by(2)
    }
}

impl fmt::Display for LatticeGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.columns, self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_rows_and_narrow_lattices() {
        assert!(LatticeGeometry::new(6, 3).is_err());
        assert!(LatticeGeometry::new(1, 2).is_err());
        assert!(LatticeGeometry::new(4, 0).is_err());
        assert!(LatticeGeometry::new(2, 2).is_ok());
    }

    #[test]
    fn row_zero_is_register() {
        let g = LatticeGeometry::new(4, 4).unwrap();
        assert_eq!(g.row_kind(0), RowKind::Register);
        assert_eq!(g.row_kind(1), RowKind::Auxiliary);
        assert_eq!(g.row_kind(2), RowKind::Register);
        assert_eq!(g.auxiliary_rows().collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn index_round_trips() {
        let g = LatticeGeometry::new(5, 4).unwrap();
        for i in 0..g.num_sites() {
            assert_eq!(g.index(g.position(i)), i);
        }
    }
}
