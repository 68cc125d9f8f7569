use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{CoreError, Result};
use crate::geometry::{LatticeGeometry, SitePosition};
use crate::pulse::{Parity, PulseOp, RowSet};
use crate::unitary::{named_unitary, Unitary2};

/// Prefix for metadata lines. They are comments to any other reader.
pub const META_PREFIX: &str = "#@";

/// Ordered pulse list bound to a lattice.
///
/// `metadata` holds free-form `#@ key value` lines that survive a
/// print/parse round trip; the compiler uses them to record layouts.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseProgram {
    pub geometry: LatticeGeometry,
    pub ops: Vec<PulseOp>,
    pub metadata: Vec<(String, String)>,
}

impl PulseProgram {
    pub fn new(geometry: LatticeGeometry) -> Self {
        Self {
            geometry,
            ops: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn with_ops(geometry: LatticeGeometry, ops: Vec<PulseOp>) -> Self {
        Self {
            geometry,
            ops,
            metadata: Vec::new(),
        }
    }

    pub fn push(&mut self, op: PulseOp) {
        self.ops.push(op);
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn set_meta(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.metadata.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.metadata.push((key.to_string(), value)),
        }
    }

    /// Reversed ops with every unitary daggered. `None` if the program measures.
    pub fn inverse(&self) -> Option<PulseProgram> {
        let ops = self
            .ops
            .iter()
            .rev()
            .map(PulseOp::inverse)
            .collect::<Option<Vec<_>>>()?;
        Some(PulseProgram::with_ops(self.geometry, ops))
    }

    /// Op counts keyed by variant name.
    pub fn cost(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        for op in &self.ops {
            *counts.entry(op.variant()).or_insert(0) += 1;
        }
        counts
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut geometry = None;
        let mut ops = Vec::new();
        let mut metadata = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix(META_PREFIX) {
                let rest = rest.trim();
                let (k, v) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                if !k.is_empty() {
                    metadata.push((k.to_string(), v.trim().to_string()));
                }
                continue;
            }
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CoreError::Parse {
                line: line_no,
                message,
            };
            let mut tokens = line.split_whitespace();
            let head = tokens.next().unwrap_or_default();
            let fields = Fields::collect(tokens).map_err(err)?;
            if head == "GEOM" {
                if geometry.is_some() {
                    return Err(err("duplicate GEOM line".into()));
                }
                let g = LatticeGeometry::new(
                    fields.usize("cols").map_err(err)?,
                    fields.usize("rows").map_err(err)?,
                )
                .map_err(|e| err(e.to_string()))?;
                fields.finish(&["cols", "rows"]).map_err(err)?;
                geometry = Some(g);
                continue;
            }
            if geometry.is_none() {
                return Err(err("GEOM line must precede the first op".into()));
            }
            let (op, keys): (PulseOp, &[&str]) = match head {
                "RAMAN" => (
                    PulseOp::RamanRotate {
                        rows: fields.rowset().map_err(err)?,
                        u: fields.unitary().map_err(err)?,
                    },
                    &["rowset", "u"],
                ),
                "HSWAP" => (
                    PulseOp::HSwap {
                        rows: fields.rowset().map_err(err)?,
                        parity: fields.parity("parity").map_err(err)?,
                    },
                    &["rowset", "parity"],
                ),
                "VSWAP" => (
                    PulseOp::VSwap {
                        parity: fields.parity("parity").map_err(err)?,
                    },
                    &["parity"],
                ),
                "VCTRL" => (
                    PulseOp::VControlled {
                        u: fields.unitary().map_err(err)?,
                        pairing: fields.parity("pairing").map_err(err)?,
                    },
                    &["u", "pairing"],
                ),
                "HCTRL" => (
                    PulseOp::HControlled {
                        u: fields.unitary().map_err(err)?,
                        rows: fields.rowset().map_err(err)?,
                        parity: fields.parity("parity").map_err(err)?,
                    },
                    &["u", "rowset", "parity"],
                ),
                "MEASAUX" => (
                    PulseOp::MeasureAuxAlternate {
                        parity: fields.parity("parity").map_err(err)?,
                    },
                    &["parity"],
                ),
                "INITPTR" => (
                    PulseOp::InitPointer {
                        site: SitePosition::new(
                            fields.usize("col").map_err(err)?,
                            fields.usize("row").map_err(err)?,
                        ),
                    },
                    &["col", "row"],
                ),
                other => return Err(err(format!("unknown instruction `{other}`"))),
            };
            fields.finish(keys).map_err(err)?;
            ops.push(op);
        }
        let geometry = geometry.ok_or(CoreError::Parse {
            line: text.lines().count().max(1),
            message: "missing GEOM line".into(),
        })?;
        Ok(Self {
            geometry,
            ops,
            metadata,
        })
    }
}

impl FromStr for PulseProgram {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for PulseProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.metadata {
            if v.is_empty() {
                writeln!(f, "{META_PREFIX} {k}")?;
            } else {
                writeln!(f, "{META_PREFIX} {k} {v}")?;
            }
        }
        writeln!(
            f,
            "GEOM cols={} rows={}",
            self.geometry.columns(),
            self.geometry.rows()
        )?;
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

/// `key=value` fields of one line. An inline matrix is `u=` followed by
/// eight reals, the first glued to the `=`.
struct Fields {
    map: Vec<(String, String)>,
}

impl Fields {
    fn collect<'a>(tokens: impl Iterator<Item = &'a str>) -> std::result::Result<Self, String> {
        let mut map: Vec<(String, String)> = Vec::new();
        let mut tokens = tokens.peekable();
        while let Some(tok) = tokens.next() {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, found `{tok}`"))?;
            if map.iter().any(|(existing, _)| existing == k) {
                return Err(format!("duplicate field `{k}`"));
            }
            let mut value = v.to_string();
            if k == "u" && v.parse::<f64>().is_ok() {
                for _ in 0..7 {
                    match tokens.next_if(|t| !t.contains('=')) {
                        Some(t) => {
                            value.push(' ');
                            value.push_str(t);
                        }
                        None => return Err("inline matrix needs 8 reals".into()),
                    }
                }
            }
            map.push((k.to_string(), value));
        }
        Ok(Self { map })
    }

    fn get(&self, key: &str) -> std::result::Result<&str, String> {
        self.map
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| format!("missing field `{key}`"))
    }

    fn usize(&self, key: &str) -> std::result::Result<usize, String> {
        let v = self.get(key)?;
        v.parse()
            .map_err(|_| format!("field `{key}` expects a non-negative integer, found `{v}`"))
    }

    fn parity(&self, key: &str) -> std::result::Result<Parity, String> {
        match self.get(key)? {
            "0" => Ok(Parity::Even),
            "1" => Ok(Parity::Odd),
            v => Err(format!("field `{key}` expects 0 or 1, found `{v}`")),
        }
    }

    fn rowset(&self) -> std::result::Result<RowSet, String> {
        let v = self.get("rowset")?;
        RowSet::from_token(v).ok_or_else(|| format!("rowset expects REG, AUX or ALL, found `{v}`"))
    }

    fn unitary(&self) -> std::result::Result<Unitary2, String> {
        let v = self.get("u")?;
        let parts: Vec<&str> = v.split_whitespace().collect();
        if parts.len() == 1 {
            return named_unitary(parts[0]).map_err(|e| e.to_string());
        }
        let mut reals = [0.0; 8];
        for (slot, p) in reals.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| format!("bad real `{p}` in matrix"))?;
        }
        Ok(Unitary2::from_reals(reals))
    }

    fn finish(&self, allowed: &[&str]) -> std::result::Result<(), String> {
        match self.map.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            Some((k, _)) => Err(format!("unexpected field `{k}`")),
            None => Ok(()),
        }
    }
}
