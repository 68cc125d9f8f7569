use std::collections::{BTreeMap, BTreeSet};

use glq_core::{validate_program, LatticeGeometry, PulseOp, PulseProgram, SitePosition, Unitary2, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SimError};
use crate::kernel;
use crate::record::{MeasurementRecord, SiteOutcome};

pub const DEFAULT_MAX_CLUSTER_QUBITS: usize = 24;

/// Off-diagonal magnitude below which a gate counts as basis-preserving.
const BASIS_TOL: f64 = 1e-15;
/// A product qubit this close to a basis state becomes classical.
const CLASSICAL_TOL: f64 = 1e-12;
/// Reduced-state purity needed before a cluster member is split off.
const PURITY_TOL: f64 = 1e-12;
/// Largest norm change a split may introduce.
const SPLIT_RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SiteContent {
    Classical(bool),
    Product([C64; 2]),
    Member { cluster: usize, index: usize },
}

/// Entangled sites sharing one statevector. `sites[k]` is local qubit `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub sites: Vec<usize>,
    pub amps: Vec<C64>,
}

/// Lattice state split into classical bits, product qubits and clusters,
/// with one global phase.
#[derive(Debug, Clone)]
pub struct HybridState {
    geometry: LatticeGeometry,
    contents: Vec<SiteContent>,
    clusters: BTreeMap<usize, Cluster>,
    next_cluster: usize,
    phase: C64,
    rng: ChaCha8Rng,
    seed: u64,
    max_cluster_qubits: usize,
    peak_cluster: usize,
    dirty: BTreeSet<usize>,
}

fn basis(b: bool) -> [C64; 2] {
    let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    if b {
        [zero, one]
    } else {
        [one, zero]
    }
}

fn unit_phase(z: C64) -> C64 {
    let n = z.norm();
    if n == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        z / n
    }
}

impl HybridState {
    pub fn new(geometry: LatticeGeometry, max_cluster_qubits: usize, seed: u64) -> Self {
        Self {
            geometry,
            contents: vec![SiteContent::Classical(false); geometry.num_sites()],
            clusters: BTreeMap::new(),
            next_cluster: 0,
            phase: C64::new(1.0, 0.0),
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            max_cluster_qubits,
            peak_cluster: 0,
            dirty: BTreeSet::new(),
        }
    }

    pub fn geometry(&self) -> &LatticeGeometry {
        &self.geometry
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn phase(&self) -> C64 {
        self.phase
    }

    pub fn max_cluster_qubits(&self) -> usize {
        self.max_cluster_qubits
    }

    pub fn content(&self, site: SitePosition) -> SiteContent {
        self.contents[self.geometry.index(site)]
    }

    pub fn clusters(&self) -> impl Iterator<Item = (usize, &Cluster)> {
        self.clusters.iter().map(|(k, v)| (*k, v))
    }

    /// Qubits held in clusters right now.
    pub fn cluster_qubits(&self) -> usize {
        self.clusters.values().map(|c| c.sites.len()).sum()
    }

    /// Largest cluster seen since construction.
    pub fn peak_cluster_size(&self) -> usize {
        self.peak_cluster
    }

    /// Restart sampling from `seed`, on ChaCha stream `stream`.
    pub fn reseed(&mut self, seed: u64, stream: u64) {
        self.seed = seed;
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.rng.set_stream(stream);
    }

    pub fn classical_bit(&self, site: SitePosition) -> Option<bool> {
        match self.content(site) {
            SiteContent::Classical(b) => Some(b),
            _ => None,
        }
    }

    /// Load `amps` (little-endian over `sites`) onto sites that are all
    /// classical 0. The state is factorized afterwards.
    pub fn prepare(&mut self, sites: &[SitePosition], amps: &[C64]) -> Result<()> {
        if amps.len() != 1 << sites.len() {
            return Err(SimError::Invalid(format!(
                "{} amplitudes for {} sites",
                amps.len(),
                sites.len()
            )));
        }
        let mut idx = Vec::with_capacity(sites.len());
        for s in sites {
            self.geometry.check(*s)?;
            let i = self.geometry.index(*s);
            if self.contents[i] != SiteContent::Classical(false) || idx.contains(&i) {
                return Err(SimError::Invalid(format!("site {s} is not a fresh |0>")));
            }
            idx.push(i);
        }
        let norm = kernel::norm_sqr(amps).sqrt();
        let amps: Vec<C64> = amps.iter().map(|a| a / norm).collect();
        match idx.len() {
            0 => self.phase *= unit_phase(amps[0]),
            1 => {
                self.contents[idx[0]] = SiteContent::Product([amps[0], amps[1]]);
                self.demote_product(idx[0]);
            }
            _ => {
                let id = self.new_cluster(idx, amps);
                self.dirty.insert(id);
                self.factorize();
            }
        }
        Ok(())
    }

    pub fn run(&mut self, program: &PulseProgram) -> Result<Vec<MeasurementRecord>> {
        check_program(&self.geometry, program)?;
        let mut records = Vec::new();
        for (i, op) in program.ops.iter().enumerate() {
            if let Some(r) = self.apply(op, i)? {
                records.push(r);
            }
        }
        Ok(records)
    }

    /// Apply one op. `op_index` labels errors and records.
    pub fn apply(&mut self, op: &PulseOp, op_index: usize) -> Result<Option<MeasurementRecord>> {
        let g = self.geometry;
        let mut record = None;
        match *op {
            PulseOp::RamanRotate { u, .. } => {
                for s in op.single_sites(&g) {
                    self.apply_single(g.index(s), &u);
                }
            }
            PulseOp::InitPointer { site } => {
                g.check(site)?;
                self.apply_single(g.index(site), &Unitary2::pauli_x());
            }
            PulseOp::HSwap { .. } | PulseOp::VSwap { .. } => {
                for (a, b) in op.site_pairs(&g) {
                    self.swap_sites(g.index(a), g.index(b));
                }
            }
            PulseOp::VControlled { u, .. } | PulseOp::HControlled { u, .. } => {
                for (c, t) in op.site_pairs(&g) {
                    self.apply_controlled(g.index(c), g.index(t), &u, op_index)?;
                }
            }
            PulseOp::MeasureAuxAlternate { .. } => {
                let mut outcomes = Vec::new();
                for s in op.single_sites(&g) {
                    let draw: f64 = self.rng.gen();
                    let (outcome, probability) = self.measure_site(g.index(s), draw);
                    outcomes.push(SiteOutcome {
                        site: s,
                        outcome,
                        probability,
                    });
                }
                record = Some(MeasurementRecord { op_index, outcomes });
            }
        }
        self.factorize();
        Ok(record)
    }

    fn new_cluster(&mut self, sites: Vec<usize>, amps: Vec<C64>) -> usize {
        let id = self.next_cluster;
        self.next_cluster += 1;
        for (k, &s) in sites.iter().enumerate() {
            self.contents[s] = SiteContent::Member {
                cluster: id,
                index: k,
            };
        }
        self.peak_cluster = self.peak_cluster.max(sites.len());
        self.clusters.insert(id, Cluster { sites, amps });
        id
    }

    fn swap_sites(&mut self, a: usize, b: usize) {
        self.contents.swap(a, b);
        for s in [a, b] {
            if let SiteContent::Member { cluster, index } = self.contents[s] {
                self.clusters.get_mut(&cluster).expect("live cluster").sites[index] = s;
            }
        }
    }

    fn apply_single(&mut self, site: usize, u: &Unitary2) {
        match self.contents[site] {
            SiteContent::Classical(b) => match u.basis_image(b as usize, BASIS_TOL) {
                Some((b2, z)) => {
                    self.contents[site] = SiteContent::Classical(b2 == 1);
                    self.phase *= unit_phase(z);
                }
                None => {
                    self.contents[site] = SiteContent::Product(u.apply(basis(b)));
                    self.demote_product(site);
                }
            },
            SiteContent::Product(v) => {
                self.contents[site] = SiteContent::Product(u.apply(v));
                self.demote_product(site);
            }
            SiteContent::Member { cluster, index } => {
                let c = self.clusters.get_mut(&cluster).expect("live cluster");
                kernel::apply_1q(&mut c.amps, index, u);
                self.dirty.insert(cluster);
            }
        }
    }

    fn demote_product(&mut self, site: usize) {
        if let SiteContent::Product(v) = self.contents[site] {
            if v[1].norm() <= CLASSICAL_TOL {
                self.contents[site] = SiteContent::Classical(false);
                self.phase *= unit_phase(v[0]);
            } else if v[0].norm() <= CLASSICAL_TOL {
                self.contents[site] = SiteContent::Classical(true);
                self.phase *= unit_phase(v[1]);
            }
        }
    }

    fn apply_controlled(
        &mut self,
        control: usize,
        target: usize,
        u: &Unitary2,
        op_index: usize,
    ) -> Result<()> {
        match self.contents[control] {
            SiteContent::Classical(false) => return Ok(()),
            SiteContent::Classical(true) => {
                self.apply_single(target, u);
                return Ok(());
            }
            _ => {}
        }
        if let SiteContent::Classical(b) = self.contents[target] {
            if let Some((b2, z)) = u.basis_image(b as usize, BASIS_TOL) {
                if b2 == b as usize {
                    // A diagonal action on a definite target is a phase on the control.
                    let kick = Unitary2::from_raw([
                        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
                        [C64::new(0.0, 0.0), unit_phase(z)],
                    ]);
                    self.apply_single(control, &kick);
                    return Ok(());
                }
            }
        }
        let id = self.join(control, target, op_index)?;
        let (ci, ti) = (self.local_index(control), self.local_index(target));
        let c = self.clusters.get_mut(&id).expect("live cluster");
        kernel::apply_controlled(&mut c.amps, ci, ti, u);
        self.dirty.insert(id);
        Ok(())
    }

    fn local_index(&self, site: usize) -> usize {
        match self.contents[site] {
            SiteContent::Member { index, .. } => index,
            _ => unreachable!("site is a cluster member"),
        }
    }

    fn cluster_of(&mut self, site: usize) -> usize {
        match self.contents[site] {
            SiteContent::Member { cluster, .. } => cluster,
            SiteContent::Classical(b) => self.new_cluster(vec![site], basis(b).to_vec()),
            SiteContent::Product(v) => self.new_cluster(vec![site], v.to_vec()),
        }
    }

    /// Put both sites in one cluster, merging if needed.
    fn join(&mut self, a: usize, b: usize, op_index: usize) -> Result<usize> {
        let size = |s: &Self, site: usize| match s.contents[site] {
            SiteContent::Member { cluster, .. } => s.clusters[&cluster].sites.len(),
            _ => 1,
        };
        let same = matches!(
            (self.contents[a], self.contents[b]),
            (SiteContent::Member { cluster: x, .. }, SiteContent::Member { cluster: y, .. }) if x == y
        );
        if !same {
            let total = size(self, a) + size(self, b);
            if total > self.max_cluster_qubits {
                return Err(SimError::ClusterOverflow {
                    op_index,
                    size: total,
                    max: self.max_cluster_qubits,
                });
            }
        }
        let ca = self.cluster_of(a);
        let cb = self.cluster_of(b);
        if ca == cb {
            return Ok(ca);
        }
        let right = self.clusters.remove(&cb).expect("live cluster");
        self.dirty.remove(&cb);
        let left = self.clusters.get_mut(&ca).expect("live cluster");
        let shift = left.sites.len();
        let mut amps = vec![C64::new(0.0, 0.0); left.amps.len() * right.amps.len()];
        for (j, rb) in right.amps.iter().enumerate() {
            for (i, la) in left.amps.iter().enumerate() {
                amps[i | (j << shift)] = la * rb;
            }
        }
        left.amps = amps;
        for (k, &s) in right.sites.iter().enumerate() {
            left.sites.push(s);
            self.contents[s] = SiteContent::Member {
                cluster: ca,
                index: shift + k,
            };
        }
        let len = self.clusters[&ca].sites.len();
        self.peak_cluster = self.peak_cluster.max(len);
        Ok(ca)
    }

    fn measure_site(&mut self, site: usize, draw: f64) -> (u8, f64) {
        match self.contents[site] {
            SiteContent::Classical(b) => {
                let p0 = if b { 0.0 } else { 1.0 };
                let outcome = if draw < p0 { 0 } else { 1 };
                (outcome, 1.0)
            }
            SiteContent::Product(v) => {
                let p0 = v[0].norm_sqr();
                let outcome = pick(draw, p0);
                let amp = v[outcome as usize];
                self.contents[site] = SiteContent::Classical(outcome == 1);
                self.phase *= unit_phase(amp);
                (outcome, prob_of(outcome, p0))
            }
            SiteContent::Member { cluster, index } => {
                let c = &self.clusters[&cluster];
                let p0 = kernel::prob_zero(&c.amps, index);
                let outcome = pick(draw, p0);
                let p = prob_of(outcome, p0);
                let amps = kernel::project_out(&c.amps, index, outcome as usize, p);
                self.remove_member(cluster, index, amps);
                self.contents[site] = SiteContent::Classical(outcome == 1);
                (outcome, p)
            }
        }
    }

    /// Drop local qubit `index` from a cluster, installing `amps` for the rest.
    fn remove_member(&mut self, id: usize, index: usize, amps: Vec<C64>) {
        let mut c = self.clusters.remove(&id).expect("live cluster");
        c.sites.remove(index);
        c.amps = amps;
        match c.sites.len() {
            0 => {
                self.phase *= unit_phase(c.amps[0]);
                self.dirty.remove(&id);
            }
            1 => {
                let s = c.sites[0];
                self.contents[s] = SiteContent::Product([c.amps[0], c.amps[1]]);
                self.demote_product(s);
                self.dirty.remove(&id);
            }
            _ => {
                for (k, &s) in c.sites.iter().enumerate() {
                    self.contents[s] = SiteContent::Member {
                        cluster: id,
                        index: k,
                    };
                }
                self.clusters.insert(id, c);
                self.dirty.insert(id);
            }
        }
    }

    /// Split off every cluster member whose reduced state is pure.
    fn factorize(&mut self) {
        while let Some(id) = self.dirty.pop_first() {
            let Some(c) = self.clusters.get(&id) else {
                continue;
            };
            let n = c.sites.len();
            let split = (0..n).find_map(|k| try_split(&c.amps, k).map(|r| (k, r)));
            if let Some((k, (phi, rest))) = split {
                let site = c.sites[k];
                self.remove_member(id, k, rest);
                self.contents[site] = SiteContent::Product(phi);
                self.demote_product(site);
            }
        }
    }

    /// Amplitudes over `sites` (little-endian), times the global phase.
    /// `None` if some factor also involves a site outside the list.
    pub fn amplitudes_over(&self, sites: &[SitePosition]) -> Option<Vec<C64>> {
        let idx: Vec<usize> = sites.iter().map(|s| self.geometry.index(*s)).collect();
        let mut out = self.expand(&idx)?;
        for a in &mut out {
            *a *= self.phase;
        }
        Some(out)
    }

    /// Full statevector over all sites in row-major site order.
    pub fn to_dense_amplitudes(&self) -> Result<Vec<C64>> {
        let n = self.geometry.num_sites();
        if n > crate::dense::DENSE_MAX_SITES {
            return Err(SimError::DenseTooLarge {
                sites: n,
                cap: crate::dense::DENSE_MAX_SITES,
            });
        }
        let all: Vec<SitePosition> = self.geometry.sites().collect();
        Ok(self.amplitudes_over(&all).expect("all sites cover every factor"))
    }

    fn expand(&self, idx: &[usize]) -> Option<Vec<C64>> {
        let pos = |s: usize| idx.iter().position(|&x| x == s);
        let mut ids = BTreeSet::new();
        for &s in idx {
            if let SiteContent::Member { cluster, .. } = self.contents[s] {
                ids.insert(cluster);
            }
        }
        let mut cluster_maps = Vec::new();
        for id in ids {
            let c = &self.clusters[&id];
            let map: Vec<usize> = c.sites.iter().map(|&s| pos(s)).collect::<Option<_>>()?;
            cluster_maps.push((c, map));
        }
        let singles: Vec<(usize, [C64; 2])> = idx
            .iter()
            .enumerate()
            .filter_map(|(k, &s)| match self.contents[s] {
                SiteContent::Classical(b) => Some((k, basis(b))),
                SiteContent::Product(v) => Some((k, v)),
                SiteContent::Member { .. } => None,
            })
            .collect();
        let dim = 1usize << idx.len();
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for (x, slot) in out.iter_mut().enumerate() {
            let mut amp = C64::new(1.0, 0.0);
            for (k, v) in &singles {
                amp *= v[(x >> k) & 1];
                if amp == C64::new(0.0, 0.0) {
                    break;
                }
            }
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            for (c, map) in &cluster_maps {
                let local = map
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (k, &p)| acc | (((x >> p) & 1) << k));
                amp *= c.amps[local];
            }
            *slot = amp;
        }
        Some(out)
    }

    /// `|<self|other>|^2`, computed per connected group of clusters.
    pub fn fidelity(&self, other: &HybridState) -> Result<f64> {
        if self.geometry != other.geometry {
            return Err(SimError::GeometryMismatch(
                self.geometry.to_string(),
                other.geometry.to_string(),
            ));
        }
        let n = self.geometry.num_sites();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for state in [self, other] {
            for c in state.clusters.values() {
                for w in c.sites.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    parent[a] = b;
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for s in 0..n {
            let r = find(&mut parent, s);
            groups.entry(r).or_default().push(s);
        }
        let mut f = 1.0;
        for sites in groups.values() {
            let a = self.expand(sites).expect("group closed under clusters");
            let b = other.expand(sites).expect("group closed under clusters");
            f *= kernel::overlap_fidelity(&a, &b);
            if f == 0.0 {
                break;
            }
        }
        Ok(f)
    }

    pub fn norm(&self) -> f64 {
        let mut total = 1.0;
        for c in &self.contents {
            if let SiteContent::Product(v) = c {
                total *= v[0].norm_sqr() + v[1].norm_sqr();
            }
        }
        for c in self.clusters.values() {
            total *= kernel::norm_sqr(&c.amps);
        }
        total.sqrt()
    }

    pub(crate) fn raw_parts(&self) -> (&[SiteContent], &BTreeMap<usize, Cluster>) {
        (&self.contents, &self.clusters)
    }

    pub(crate) fn from_parts(
        geometry: LatticeGeometry,
        seed: u64,
        max_cluster_qubits: usize,
        phase: C64,
        contents: Vec<SiteContent>,
        clusters: BTreeMap<usize, Cluster>,
    ) -> Self {
        let mut s = Self::new(geometry, max_cluster_qubits, seed);
        s.next_cluster = clusters.keys().next_back().map_or(0, |k| k + 1);
        s.peak_cluster = clusters.values().map(|c| c.sites.len()).max().unwrap_or(0);
        s.phase = phase;
        s.contents = contents;
        s.clusters = clusters;
        s
    }
}

fn pick(draw: f64, p0: f64) -> u8 {
    if draw < p0 {
        0
    } else {
        1
    }
}

fn prob_of(outcome: u8, p0: f64) -> f64 {
    if outcome == 0 {
        p0
    } else {
        (1.0 - p0).max(0.0)
    }
}

/// If qubit `k` factors out of `amps`, return its state and the normalized remainder.
fn try_split(amps: &[C64], k: usize) -> Option<([C64; 2], Vec<C64>)> {
    let half = amps.len() / 2;
    let (mut r00, mut r11, mut r01) = (0.0, 0.0, C64::new(0.0, 0.0));
    for j in 0..half {
        let a0 = amps[kernel::insert_bit(j, k, 0)];
        let a1 = amps[kernel::insert_bit(j, k, 1)];
        r00 += a0.norm_sqr();
        r11 += a1.norm_sqr();
        r01 += a0 * a1.conj();
    }
    let tr = r00 + r11;
    let purity = (r00 * r00 + r11 * r11 + 2.0 * r01.norm_sqr()) / (tr * tr);
    if purity < 1.0 - PURITY_TOL {
        return None;
    }
    let raw = if r00 >= r11 {
        [C64::new(r00, 0.0), r01.conj()]
    } else {
        [r01, C64::new(r11, 0.0)]
    };
    let n = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
    let phi = [raw[0] / n, raw[1] / n];
    let mut rest = Vec::with_capacity(half);
    let mut residual = 0.0;
    for j in 0..half {
        let a0 = amps[kernel::insert_bit(j, k, 0)];
        let a1 = amps[kernel::insert_bit(j, k, 1)];
        let chi = phi[0].conj() * a0 + phi[1].conj() * a1;
        residual += (a0 - phi[0] * chi).norm_sqr() + (a1 - phi[1] * chi).norm_sqr();
        rest.push(chi);
    }
    if residual.sqrt() > SPLIT_RESIDUAL_TOL {
        return None;
    }
    let norm = kernel::norm_sqr(&rest).sqrt();
    for a in &mut rest {
        *a /= norm;
    }
    Some((phi, rest))
}

pub(crate) fn check_program(g: &LatticeGeometry, program: &PulseProgram) -> Result<()> {
    if *g != program.geometry {
        return Err(SimError::GeometryMismatch(
            g.to_string(),
            program.geometry.to_string(),
        ));
    }
    let report = validate_program(program);
    if let Some(v) = report.errors().next() {
        return Err(SimError::Invalid(v.to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use glq_core::{named_unitary, Parity, RowSet};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn geom(c: usize, r: usize) -> LatticeGeometry {
        LatticeGeometry::new(c, r).unwrap()
    }

    fn site(c: usize, r: usize) -> SitePosition {
        SitePosition::new(c, r)
    }

    #[test]
    fn init_is_all_classical_zero() {
        let s = HybridState::new(geom(2, 2), 24, 0);
        for p in s.geometry().sites() {
            assert_eq!(s.content(p), SiteContent::Classical(false));
        }
        assert_eq!(s.cluster_qubits(), 0);
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hswap_exchanges_classical_bits() {
        let mut s = HybridState::new(geom(2, 2), 24, 0);
        s.apply(&PulseOp::InitPointer { site: site(1, 1) }, 0).unwrap();
        s.apply(
            &PulseOp::HSwap {
                rows: RowSet::Auxiliary,
                parity: Parity::Even,
            },
            1,
        )
        .unwrap();
        assert_eq!(s.content(site(0, 1)), SiteContent::Classical(true));
        assert_eq!(s.content(site(1, 1)), SiteContent::Classical(false));
    }

    #[test]
    fn pointer_controlled_z_flips_plus_to_minus() {
        let mut s = HybridState::new(geom(2, 2), 24, 0);
        s.apply(&PulseOp::InitPointer { site: site(0, 1) }, 0).unwrap();
        s.prepare(
            &[site(0, 0)],
            &[C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)],
        )
        .unwrap();
        s.apply(
            &PulseOp::VControlled {
                u: Unitary2::pauli_z(),
                pairing: Parity::Even,
            },
            1,
        )
        .unwrap();
        let amps = s.amplitudes_over(&[site(0, 0)]).unwrap();
        assert!((amps[0] - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((amps[1] + C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert_eq!(s.cluster_qubits(), 0);
    }

    #[test]
    fn rotation_and_inverse_demote_to_classical() {
        let mut s = HybridState::new(geom(3, 2), 24, 0);
        let u8 = named_unitary("U8").unwrap();
        s.apply(
            &PulseOp::RamanRotate {
                rows: RowSet::Register,
                u: u8,
            },
            0,
        )
        .unwrap();
        assert!(matches!(s.content(site(0, 0)), SiteContent::Product(_)));
        s.apply(
            &PulseOp::RamanRotate {
                rows: RowSet::Register,
                u: u8.dagger(),
            },
            1,
        )
        .unwrap();
        for p in s.geometry().sites() {
            assert_eq!(s.content(p), SiteContent::Classical(false));
        }
    }

    #[test]
    fn entangle_then_disentangle_frees_cluster() {
        let mut s = HybridState::new(geom(2, 2), 24, 0);
        let h = Unitary2::hadamard();
        s.apply(
            &PulseOp::RamanRotate {
                rows: RowSet::Auxiliary,
                u: h,
            },
            0,
        )
        .unwrap();
        let cx = PulseOp::VControlled {
            u: Unitary2::pauli_x(),
            pairing: Parity::Even,
        };
        s.apply(&cx, 1).unwrap();
        assert_eq!(s.cluster_qubits(), 4);
        s.apply(&cx, 2).unwrap();
        assert_eq!(s.cluster_qubits(), 0);
        assert_eq!(s.peak_cluster_size(), 2);
    }

    #[test]
    fn overflow_names_op_and_size() {
        let mut s = HybridState::new(geom(4, 2), 2, 0);
        let h = Unitary2::hadamard();
        s.apply(
            &PulseOp::RamanRotate {
                rows: RowSet::All,
                u: h,
            },
            0,
        )
        .unwrap();
        s.apply(
            &PulseOp::VControlled {
                u: Unitary2::pauli_z(),
                pairing: Parity::Even,
            },
            1,
        )
        .unwrap();
        let err = s
            .apply(
                &PulseOp::HControlled {
                    u: Unitary2::pauli_z(),
                    rows: RowSet::Register,
                    parity: Parity::Even,
                },
                7,
            )
            .unwrap_err();
        assert_eq!(
            err,
            SimError::ClusterOverflow {
                op_index: 7,
                size: 4,
                max: 2
            }
        );
    }

    #[test]
    fn measuring_plus_state_collapses() {
        let mut s = HybridState::new(geom(2, 2), 24, 5);
        s.apply(
            &PulseOp::RamanRotate {
                rows: RowSet::Auxiliary,
                u: Unitary2::hadamard(),
            },
            0,
        )
        .unwrap();
        let r = s
            .apply(&PulseOp::MeasureAuxAlternate { parity: Parity::Even }, 1)
            .unwrap()
            .unwrap();
        assert_eq!(r.outcomes.len(), 1);
        assert!((r.outcomes[0].probability - 0.5).abs() < 1e-12);
        assert!(s.classical_bit(site(0, 1)).is_some());
        assert!(matches!(s.content(site(1, 1)), SiteContent::Product(_)));
    }
}
