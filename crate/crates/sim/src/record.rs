use std::fmt::Write;

use glq_core::SitePosition;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteOutcome {
    pub site: SitePosition,
    pub outcome: u8,
    /// Probability of the sampled outcome at sampling time.
    pub probability: f64,
}

/// Outcomes of one measurement op.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub op_index: usize,
    pub outcomes: Vec<SiteOutcome>,
}

impl MeasurementRecord {
    /// Same op and sites, same outcomes, probabilities within `tol`.
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        self.op_index == other.op_index
            && self.outcomes.len() == other.outcomes.len()
            && self.outcomes.iter().zip(&other.outcomes).all(|(a, b)| {
                a.site == b.site && a.outcome == b.outcome && (a.probability - b.probability).abs() <= tol
            })
    }
}

pub const RECORDS_HEADER: &str = "op_index,col,row,outcome,probability";

/// CSV with one line per measured site. Probabilities are printed to 12
/// decimals so the two backends produce the same bytes.
pub fn records_to_csv(records: &[MeasurementRecord]) -> String {
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        for o in &r.outcomes {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.12}",
                r.op_index, o.site.col, o.site.row, o.outcome, o.probability
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_rows() {
        let r = MeasurementRecord {
            op_index: 3,
            outcomes: vec![SiteOutcome {
                site: SitePosition::new(2, 1),
                outcome: 1,
                probability: 0.5,
            }],
        };
        assert_eq!(
            records_to_csv(&[r]),
            "op_index,col,row,outcome,probability\n3,2,1,1,0.500000000000\n"
        );
    }
}
