//! Line-oriented dump of a hybrid state.
//!
//! ```text
//! phase <re> <im>
//! site <col> <row> C <bit>
//! site <col> <row> P <re0> <im0> <re1> <im1>
//! site <col> <row> M <cluster> <index>
//! cluster <id> <k> <re> <im> ...
//! ```

use std::collections::BTreeMap;
use std::fmt::Write;

use glq_core::{LatticeGeometry, SitePosition, C64};

use crate::error::{Result, SimError};
use crate::hybrid::{Cluster, HybridState, SiteContent};

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn snapshot(state: &HybridState) -> String {
    let g = state.geometry();
    let (contents, clusters) = state.raw_parts();
    let mut out = String::new();
    let _ = writeln!(out, "geom {} {}", g.columns(), g.rows());
    let _ = writeln!(out, "seed {}", state.seed());
    let _ = writeln!(out, "phase {} {}", num(state.phase().re), num(state.phase().im));
    for (i, c) in contents.iter().enumerate() {
        let p = g.position(i);
        let _ = match c {
            SiteContent::Classical(b) => writeln!(out, "site {} {} C {}", p.col, p.row, *b as u8),
            SiteContent::Product(v) => writeln!(
                out,
                "site {} {} P {} {} {} {}",
                p.col,
                p.row,
                num(v[0].re),
                num(v[0].im),
                num(v[1].re),
                num(v[1].im)
            ),
            SiteContent::Member { cluster, index } => {
                writeln!(out, "site {} {} M {cluster} {index}", p.col, p.row)
            }
        };
    }
    for (id, c) in clusters {
        let _ = write!(out, "cluster {id} {}", c.sites.len());
        for a in &c.amps {
            let _ = write!(out, " {} {}", num(a.re), num(a.im));
        }
        out.push('\n');
    }
    out
}

/// Inverse of [`snapshot`]. Cluster site lists are rebuilt from member lines.
pub fn parse_snapshot(text: &str, max_cluster_qubits: usize) -> Result<HybridState> {
    let mut geometry = None;
    let mut seed = 0;
    let mut phase = C64::new(1.0, 0.0);
    let mut contents = Vec::new();
    let mut members: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    let mut amps: BTreeMap<usize, Vec<C64>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let err = |m: &str| SimError::Snapshot {
            line: i + 1,
            message: m.to_string(),
        };
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.is_empty() || t[0].starts_with('#') {
            continue;
        }
        let f = |k: usize| -> Result<f64> {
            t.get(k)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("bad number"))
        };
        let u = |k: usize| -> Result<usize> {
            t.get(k)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("bad integer"))
        };
        match t[0] {
            "geom" => {
                let g = LatticeGeometry::new(u(1)?, u(2)?)?;
                contents = vec![SiteContent::Classical(false); g.num_sites()];
                geometry = Some(g);
            }
            "seed" => seed = u(1)? as u64,
            "phase" => phase = C64::new(f(1)?, f(2)?),
            "site" => {
                let g = geometry.ok_or_else(|| err("site before geom"))?;
                let s = SitePosition::new(u(1)?, u(2)?);
                g.check(s)?;
                let idx = g.index(s);
                contents[idx] = match t.get(3).copied() {
                    Some("C") => SiteContent::Classical(u(4)? == 1),
                    Some("P") => SiteContent::Product([C64::new(f(4)?, f(5)?), C64::new(f(6)?, f(7)?)]),
                    Some("M") => {
                        let (cluster, index) = (u(4)?, u(5)?);
                        members.entry(cluster).or_default().push((index, idx));
                        SiteContent::Member { cluster, index }
                    }
                    _ => return Err(err("expected C, P or M")),
                };
            }
            "cluster" => {
                let id = u(1)?;
                let k = u(2)?;
                let n = 1usize << k;
                let mut v = Vec::with_capacity(n);
                for j in 0..n {
                    v.push(C64::new(f(3 + 2 * j)?, f(4 + 2 * j)?));
                }
                amps.insert(id, v);
            }
            _ => return Err(err("unknown record")),
        }
    }
    let geometry = geometry.ok_or(SimError::Snapshot {
        line: 1,
        message: "missing geom line".into(),
    })?;
    let mut clusters = BTreeMap::new();
    for (id, mut m) in members {
        m.sort();
        let a = amps.remove(&id).ok_or(SimError::Snapshot {
            line: 0,
            message: format!("cluster {id} has members but no amplitudes"),
        })?;
        clusters.insert(
            id,
            Cluster {
                sites: m.into_iter().map(|(_, s)| s).collect(),
                amps: a,
            },
        );
    }
    Ok(HybridState::from_parts(
        geometry,
        seed,
        max_cluster_qubits,
        phase,
        contents,
        clusters,
    ))
}
