//! Pulse macros. Every macro relies on there being a single pointer: all
//! auxiliary sites other than the pointer (and a macro's own scratch site)
//! hold |0>, so controlled pulses only act where the pointer is.

use std::collections::{BTreeMap, VecDeque};

use glq_core::{named_unitary, LatticeGeometry, Parity, PulseOp, RowKind, RowSet, SitePosition, Unitary2};

use crate::decompose::{is_scalar, reflection_frame, two_cp_form};
use crate::error::{CompileError, Result};
use crate::layout::Layout;

const SCALAR_TOL: f64 = 1e-12;

/// Collects pulses while keeping the layout in step with every swap.
#[derive(Debug, Clone)]
pub struct Emitter {
    pub ops: Vec<PulseOp>,
    pub layout: Layout,
    pub macros: BTreeMap<&'static str, usize>,
}

impl Emitter {
    pub fn new(layout: Layout) -> Self {
        Self {
            ops: Vec::new(),
            layout,
            macros: BTreeMap::new(),
        }
    }

    pub fn emit(&mut self, op: PulseOp) {
        self.layout.track(&op);
        self.ops.push(op);
    }

    fn count(&mut self, name: &'static str) {
        *self.macros.entry(name).or_insert(0) += 1;
    }

    fn geometry(&self) -> LatticeGeometry {
        self.layout.geometry
    }

    /// Where the content of `site` went through the swaps emitted since op `from`.
    fn follow(&self, mut site: SitePosition, from: usize) -> SitePosition {
        let g = self.geometry();
        for op in &self.ops[from..] {
            if matches!(op, PulseOp::HSwap { .. } | PulseOp::VSwap { .. }) {
                for (a, b) in op.site_pairs(&g) {
                    if site == a {
                        site = b;
                        break;
                    } else if site == b {
                        site = a;
                        break;
                    }
                }
            }
        }
        site
    }

    /// Move the pointer to `to`, which must be an auxiliary site.
    pub fn route_pointer(&mut self, to: SitePosition) -> Result<()> {
        let g = self.geometry();
        g.check(to)?;
        if g.row_kind(to.row) != RowKind::Auxiliary {
            return Err(CompileError::Routing(format!(
                "target {to} is not on an auxiliary row"
            )));
        }
        let from = self.layout.pointer;
        if from.row != to.row {
            for op in vertical_route(&g, from.row, to.row)? {
                self.emit(op);
            }
        }
        while self.layout.pointer.col != to.col {
            let c = self.layout.pointer.col;
            let start = if to.col > c { c } else { c - 1 };
            self.emit(PulseOp::HSwap {
                rows: RowSet::Auxiliary,
                parity: Parity::of(start),
            });
        }
        debug_assert_eq!(self.layout.pointer, to);
        Ok(())
    }

    /// Route the pointer next to register site `site`, preferring its
    /// current row. Returns the vertical pairing that joins them.
    pub fn route_adjacent(&mut self, site: SitePosition) -> Result<Parity> {
        let g = self.geometry();
        let p = self.layout.pointer.row;
        let start = self.ops.len();
        let candidates = [
            site.row.checked_sub(1),
            Some(site.row + 1).filter(|&r| r < g.rows()),
        ];
        let row = if candidates.contains(&Some(p)) {
            p
        } else {
            candidates
                .into_iter()
                .flatten()
                .min_by_key(|r| r.abs_diff(p))
                .ok_or_else(|| CompileError::Routing(format!("no auxiliary row next to {site}")))?
        };
        self.route_pointer(SitePosition::new(site.col, row))?;
        if self.follow(site, start) != site {
            return Err(CompileError::Routing(format!(
                "moving the pointer next to {site} would displace it"
            )));
        }
        Ok(Parity::of(row.min(site.row)))
    }

    /// Apply `u` to logical qubit `q` by conjugating a pointer-controlled Z.
    pub fn local_1q(&mut self, q: usize, u: &Unitary2) -> Result<()> {
        if is_scalar(u, SCALAR_TOL) {
            return Ok(());
        }
        let pairing = self.route_adjacent(self.layout.site(q))?;
        for op in local_1q_ops(u, pairing) {
            self.emit(op);
        }
        self.count("local_1q");
        Ok(())
    }

    /// Toffoli with the pointer as first control, `control` and `target`
    /// adjacent on one register row.
    pub fn pointer_toffoli(&mut self, control: SitePosition, target: SitePosition) -> Result<()> {
        self.route_adjacent(target)?;
        let aux = self.layout.pointer;
        for op in ccnot_square(&self.geometry(), aux, control, target)? {
            self.emit(op);
        }
        self.count("ccnot_square");
        Ok(())
    }

    /// Same as [`Self::pointer_toffoli`] with the pointer parked above `control`.
    fn pointer_toffoli_from_control(&mut self, control: SitePosition, target: SitePosition) -> Result<()> {
        self.route_adjacent(control)?;
        let aux = self.layout.pointer;
        for op in ccnot_square(&self.geometry(), aux, control, target)? {
            self.emit(op);
        }
        self.count("ccnot_square");
        Ok(())
    }

    /// CNOT between logical qubits: bring them together, then a Toffoli
    /// whose first control is the pointer.
    pub fn cnot(&mut self, c: usize, t: usize) -> Result<()> {
        self.bring_adjacent(c, t)?;
        let (cs, ts) = (self.layout.site(c), self.layout.site(t));
        self.pointer_toffoli(cs, ts)
    }

    /// Swap the contents of two adjacent register sites with three pointer Toffolis.
    fn pointer_swap(&mut self, a: SitePosition, b: SitePosition) -> Result<()> {
        self.pointer_toffoli(b, a)?;
        self.pointer_toffoli_from_control(a, b)?;
        self.pointer_toffoli(b, a)?;
        for s in &mut self.layout.qubit_site {
            if *s == a {
                *s = b;
            } else if *s == b {
                *s = a;
            }
        }
        self.count("cswap");
        Ok(())
    }

    /// Move `q1` and `q2` (same register row) into adjacent columns.
    pub fn bring_adjacent(&mut self, q1: usize, q2: usize) -> Result<()> {
        let (s1, s2) = (self.layout.site(q1), self.layout.site(q2));
        if s1.row != s2.row {
            return Err(CompileError::CrossRow(q1, q2));
        }
        let (left, right) = if s1.col < s2.col { (q1, q2) } else { (q2, q1) };
        let d = self.layout.site(right).col - self.layout.site(left).col;
        if d.is_multiple_of(2) {
            let l = self.layout.site(left);
            self.pointer_swap(l, SitePosition::new(l.col + 1, l.row))?;
        }
        loop {
            let (l, r) = (self.layout.site(left), self.layout.site(right));
            let (lo, hi) = if l.col < r.col { (l, r) } else { (r, l) };
            if hi.col - lo.col <= 1 {
                break;
            }
            self.emit(PulseOp::HSwap {
                rows: RowSet::Register,
                parity: Parity::of(lo.col),
            });
        }
        Ok(())
    }

    /// Entangle `q` with the auxiliary site beside the pointer, measure the
    /// alternate auxiliary sites, then clear the scratch site again.
    /// Returns the index of the measurement op and the site it reads.
    pub fn measure(&mut self, q: usize) -> Result<(usize, SitePosition)> {
        if self.layout.site(q).col == 0 {
            self.emit(PulseOp::HSwap {
                rows: RowSet::Register,
                parity: Parity::Even,
            });
        }
        let site = self.layout.site(q);
        self.route_adjacent(SitePosition::new(site.col - 1, site.row))?;
        let pointer = self.layout.pointer;
        let scratch = SitePosition::new(site.col, pointer.row);
        let tof = rotated_toffoli(&self.geometry(), pointer, site)?;
        for op in tof.iter().copied() {
            self.emit(op);
        }
        let index = self.ops.len();
        self.emit(PulseOp::MeasureAuxAlternate {
            parity: Parity::of(site.col),
        });
        for op in tof {
            self.emit(op);
        }
        self.count("measure");
        Ok((index, scratch))
    }
}

/// Vertical pointer move from aux row `from` to aux row `to`. Register
/// rows end up permuted; the layout records where they went.
fn vertical_route(g: &LatticeGeometry, from: usize, to: usize) -> Result<Vec<PulseOp>> {
    let rows = g.rows();
    let start: Vec<usize> = (0..rows).collect();
    let mut seen = BTreeMap::new();
    seen.insert(start.clone(), Vec::<Parity>::new());
    let mut queue = VecDeque::from([start]);
    // perm[r] = row currently holding the content that started in row r
    while let Some(perm) = queue.pop_front() {
        let path = seen[&perm].clone();
        if perm[from] == to && perm.iter().enumerate().all(|(r, &now)| r % 2 == now % 2) {
            return Ok(path.into_iter().map(|parity| PulseOp::VSwap { parity }).collect());
        }
        if path.len() > 2 * rows {
            continue;
        }
        for parity in Parity::BOTH {
            let next: Vec<usize> = perm.iter().map(|&r| vswap_row(r, parity, rows)).collect();
            if !seen.contains_key(&next) {
                let mut p = path.clone();
                p.push(parity);
                seen.insert(next.clone(), p);
                queue.push_back(next);
            }
        }
    }
    Err(CompileError::Routing(format!(
        "no vertical swap sequence moves row {from} to row {to}"
    )))
}

/// Where `VSwap(parity)` sends row `r`.
fn vswap_row(r: usize, parity: Parity, rows: usize) -> usize {
    let p = parity.bit();
    if r < p {
        r
    } else if (r - p).is_multiple_of(2) {
        if r + 1 < rows {
            r + 1
        } else {
            r
        }
    } else {
        r - 1
    }
}

/// Net `u` on the register site paired with the pointer, identity elsewhere.
pub fn local_1q_ops(u: &Unitary2, pairing: Parity) -> Vec<PulseOp> {
    let z = Unitary2::pauli_z();
    let cz = PulseOp::VControlled { u: z, pairing };
    let raman = |u: Unitary2| PulseOp::RamanRotate {
        rows: RowSet::Register,
        u,
    };
    let mut ops = Vec::new();
    if is_scalar(u, SCALAR_TOL) {
        return ops;
    }
    if let Some(a) = reflection_frame(u) {
        let trivial = is_scalar(&a, SCALAR_TOL);
        if !trivial {
            ops.push(raman(a));
        }
        ops.push(cz);
        if !trivial {
            ops.push(raman(a.dagger()));
        }
        return ops;
    }
    let (a, b, c) = two_cp_form(u);
    for (k, m) in [c, b, a].into_iter().enumerate() {
        if k > 0 {
            ops.push(cz);
        }
        if !is_scalar(&m, SCALAR_TOL) {
            ops.push(raman(m));
        }
    }
    ops
}

/// Phase left on the |11> branch by the core W/Z sequence, and its fix.
fn phase_fix() -> Unitary2 {
    let w = named_unitary("W").expect("named gate");
    let core = Unitary2::pauli_z() * w * Unitary2::pauli_z() * w;
    let x = Unitary2::pauli_x();
    let phase = core
        .phase_relative_to(&x, 1e-12)
        .expect("core sequence acts as X up to phase");
    Unitary2::phase(-phase.arg())
}

/// Toffoli around one lattice square. `aux` is an auxiliary-row control
/// above either `target` or `control`; `control` and `target` are
/// horizontal neighbours on a register row. The fourth site of the square
/// must hold |0>.
pub fn ccnot_square(
    g: &LatticeGeometry,
    aux: SitePosition,
    control: SitePosition,
    target: SitePosition,
) -> Result<Vec<PulseOp>> {
    for s in [aux, control, target] {
        g.check(s)?;
    }
    let square = g.row_kind(aux.row) == RowKind::Auxiliary
        && control.row == target.row
        && g.row_kind(target.row) == RowKind::Register
        && control.col.abs_diff(target.col) == 1
        && aux.row.abs_diff(target.row) == 1
        && (aux.col == target.col || aux.col == control.col);
    if !square {
        return Err(CompileError::Routing(format!(
            "sites {aux} {control} {target} do not form a lattice square"
        )));
    }
    let v = Parity::of(aux.row.min(target.row));
    let p = Parity::of(control.col.min(target.col));
    let w = named_unitary("W").expect("named gate");
    let core = [
        PulseOp::VControlled { u: w, pairing: v },
        PulseOp::HControlled {
            u: Unitary2::pauli_z(),
            rows: RowSet::Register,
            parity: p,
        },
        PulseOp::VControlled { u: w, pairing: v },
        PulseOp::HControlled {
            u: Unitary2::pauli_z(),
            rows: RowSet::Register,
            parity: p,
        },
    ];
    let swap = PulseOp::HSwap {
        rows: RowSet::Register,
        parity: p,
    };
    let fix = PulseOp::VControlled {
        u: phase_fix(),
        pairing: v,
    };
    let mut ops = Vec::with_capacity(7);
    if aux.col == target.col {
        ops.extend(core);
        ops.extend([swap, fix, swap]);
    } else {
        ops.push(swap);
        ops.extend(core);
        ops.extend([swap, fix]);
    }
    Ok(ops)
}

/// Toffoli flipping the auxiliary site to the right of `pointer`,
/// controlled by the pointer and register site `q` below that site. The
/// target must start in |0>; started in |1> it picks up a phase.
pub fn rotated_toffoli(g: &LatticeGeometry, pointer: SitePosition, q: SitePosition) -> Result<Vec<PulseOp>> {
    g.check(pointer)?;
    g.check(q)?;
    let ok = g.row_kind(pointer.row) == RowKind::Auxiliary
        && q.col == pointer.col + 1
        && q.row.abs_diff(pointer.row) == 1;
    if !ok {
        return Err(CompileError::Routing(format!(
            "pointer {pointer} is not diagonally adjacent to {q}"
        )));
    }
    let v = Parity::of(pointer.row.min(q.row));
    let p = Parity::of(pointer.col);
    let w = named_unitary("W").expect("named gate");
    let hw = PulseOp::HControlled {
        u: w,
        rows: RowSet::Auxiliary,
        parity: p,
    };
    let cz = PulseOp::VControlled {
        u: Unitary2::pauli_z(),
        pairing: v,
    };
    Ok(vec![
        hw,
        cz,
        hw,
        cz,
        PulseOp::HControlled {
            u: phase_fix(),
            rows: RowSet::Auxiliary,
            parity: p,
        },
    ])
}

/// Public wrapper: pulses that move the pointer from `from` to `to`.
pub fn route_pointer(
    layout: &Layout,
    from: SitePosition,
    to: SitePosition,
) -> Result<(Vec<PulseOp>, Layout)> {
    let g = layout.geometry;
    for s in [from, to] {
        g.check(s)?;
        if g.row_kind(s.row) != RowKind::Auxiliary {
            return Err(CompileError::Routing(format!("{s} is not on an auxiliary row")));
        }
    }
    let mut l = layout.clone();
    l.pointer = from;
    let mut e = Emitter::new(l);
    e.route_pointer(to)?;
    Ok((e.ops, e.layout))
}

/// Pulses applying `u` to qubit `q`, routing the pointer first.
pub fn local_1q(layout: &Layout, q: usize, u: &Unitary2) -> Result<(Vec<PulseOp>, Layout)> {
    let mut e = Emitter::new(layout.clone());
    e.local_1q(q, u)?;
    Ok((e.ops, e.layout))
}

/// Pulses bringing two qubits into adjacent columns, the updated layout and
/// the number of pointer CSWAPs used.
pub fn bring_adjacent(layout: &Layout, q1: usize, q2: usize) -> Result<(Vec<PulseOp>, Layout, usize)> {
    let mut e = Emitter::new(layout.clone());
    e.bring_adjacent(q1, q2)?;
    let swaps = e.macros.get("cswap").copied().unwrap_or(0);
    Ok((e.ops, e.layout, swaps))
}

/// Measurement pulses for `q`, the updated layout, and the readout op index and site.
pub fn measure_macro(layout: &Layout, q: usize) -> Result<(Vec<PulseOp>, Layout, usize, SitePosition)> {
    let mut e = Emitter::new(layout.clone());
    let (idx, site) = e.measure(q)?;
    Ok((e.ops, e.layout, idx, site))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_fix_is_sqrt_z() {
        assert_eq!(phase_fix().name(), Some("SZ"));
    }

    #[test]
    fn vertical_route_on_four_rows() {
        let g = LatticeGeometry::new(2, 4).unwrap();
        let ops = vertical_route(&g, 1, 3).unwrap();
        assert_eq!(
            ops,
            vec![
                PulseOp::VSwap { parity: Parity::Odd },
                PulseOp::VSwap { parity: Parity::Even },
                PulseOp::VSwap { parity: Parity::Odd },
            ]
        );
        assert!(vertical_route(&g, 1, 1).unwrap().is_empty());
    }

    #[test]
    fn z_needs_only_the_controlled_pulse() {
        let ops = local_1q_ops(&Unitary2::pauli_z(), Parity::Even);
        assert_eq!(
            ops,
            vec![PulseOp::VControlled {
                u: Unitary2::pauli_z(),
                pairing: Parity::Even
            }]
        );
    }

    #[test]
    fn w_uses_u8_frame() {
        let ops = local_1q_ops(&named_unitary("W").unwrap(), Parity::Even);
        assert_eq!(ops.len(), 3);
        assert_eq!(ops[0].unitary().unwrap().name(), Some("U8"));
        assert_eq!(ops[2].unitary().unwrap().name(), Some("U8dag"));
    }

    #[test]
    fn square_check_rejects_far_sites() {
        let g = LatticeGeometry::new(4, 2).unwrap();
        let s = |c, r| SitePosition::new(c, r);
        assert!(ccnot_square(&g, s(1, 1), s(2, 0), s(1, 0)).is_ok());
        assert!(ccnot_square(&g, s(2, 1), s(2, 0), s(1, 0)).is_ok());
        assert!(ccnot_square(&g, s(3, 1), s(2, 0), s(1, 0)).is_err());
        assert!(ccnot_square(&g, s(1, 0), s(2, 0), s(1, 1)).is_err());
    }
}
