//! Plane-wave decompositions of the potential offsets that switch on
//! alternate couplings, and where the trap minima move under them.
//! Lengths are in units of the lattice laser wavelength; sites sit at
//! multiples of one half.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{PhysicsError, Result};

pub const SITE_SPACING: f64 = 0.5;
pub const GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beam {
    pub direction: [f64; 2],
    pub period: f64,
    pub phase: f64,
    pub amplitude: f64,
}

impl Beam {
    fn wavevector(&self) -> [f64; 2] {
        let k = 2.0 * PI / self.period;
        [k * self.direction[0], k * self.direction[1]]
    }

    fn argument(&self, x: f64, y: f64) -> f64 {
        let k = self.wavevector();
        k[0] * x + k[1] * y + self.phase
    }

    /// `amplitude · sin(2π (direction · r) / period + phase)`
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.amplitude * self.argument(x, y).sin()
    }

    /// Full angle between the two interfering lasers that draw this
    /// pattern: `sin(θ/2) = λ / (2d)`.
    pub fn angle_degrees(&self) -> Option<f64> {
        let s = 1.0 / (2.0 * self.period);
        (s <= 1.0).then(|| 2.0 * s.asin().to_degrees())
    }
}

impl fmt::Display for Beam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:.15} {:.15} {:.15} {:.15} {:.15}",
            self.direction[0], self.direction[1], self.period, self.phase, self.amplitude
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaserConfig {
    pub beams: Vec<Beam>,
}

impl LaserConfig {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.beams.iter().map(|b| b.value(x, y)).sum()
    }

    pub fn gradient(&self, x: f64, y: f64) -> [f64; 2] {
        self.beams.iter().fold([0.0; 2], |g, b| {
            let k = b.wavevector();
            let c = b.amplitude * b.argument(x, y).cos();
            [g[0] + c * k[0], g[1] + c * k[1]]
        })
    }

    pub fn hessian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        self.beams.iter().fold([[0.0; 2]; 2], |h, b| {
            let k = b.wavevector();
            let s = -b.amplitude * b.argument(x, y).sin();
            [
                [h[0][0] + s * k[0] * k[0], h[0][1] + s * k[0] * k[1]],
                [h[1][0] + s * k[1] * k[0], h[1][1] + s * k[1] * k[1]],
            ]
        })
    }

    /// Third derivative along x.
    pub fn d3x(&self, x: f64, y: f64) -> f64 {
        self.beams
            .iter()
            .map(|b| {
                let kx = b.wavevector()[0];
                -b.amplitude * b.argument(x, y).cos() * kx.powi(3)
            })
            .sum()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.beams.iter().map(|b| b.amplitude.abs()).sum()
    }

    /// One beam per line: `dir_x dir_y period phase amplitude`.
    pub fn to_text(&self) -> String {
        self.beams.iter().map(|b| format!("{b}\n")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetPattern {
    /// Alternate horizontal pairs on every other row.
    OffsetA,
    /// Alternate pairs along x, pairs starting at even sites.
    AlternateX,
    /// Alternate pairs along x, pairs starting at odd sites.
    AlternateXOdd,
    /// Alternate pairs along y.
    AlternateY,
}

impl OffsetPattern {
    pub const ALL: [OffsetPattern; 4] = [
        Self::OffsetA,
        Self::AlternateX,
        Self::AlternateXOdd,
        Self::AlternateY,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::OffsetA => "fig-offset-a",
            Self::AlternateX => "alternate-x",
            Self::AlternateXOdd => "alternate-x-odd",
            Self::AlternateY => "alternate-y",
        }
    }

    /// Closed-form target offset.
    pub fn target(self, x: f64, y: f64) -> f64 {
        match self {
            Self::OffsetA => (2.0 * PI * x).sin() * (PI * y).cos(),
            Self::AlternateX => (2.0 * PI * x).sin(),
            Self::AlternateXOdd => -(2.0 * PI * x).sin(),
            Self::AlternateY => (2.0 * PI * y).sin(),
        }
    }

    /// Extent of one repeating cell.
    pub fn supercell(self) -> [f64; 2] {
        match self {
            Self::OffsetA => [1.0, 2.0],
            _ => [1.0, 1.0],
        }
    }
}

impl FromStr for OffsetPattern {
    type Err = PhysicsError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.id() == s).ok_or_else(|| {
            let ids: Vec<&str> = Self::ALL.iter().map(|p| p.id()).collect();
            PhysicsError::UnsupportedPattern(s.to_string(), ids.join(", "))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub pattern: OffsetPattern,
    pub config: LaserConfig,
    /// Largest deviation from the target on a GRID×GRID sampling of the supercell.
    pub residual: f64,
}

pub fn superlattice_decompose(pattern: OffsetPattern) -> Decomposition {
    let beam = |dx: f64, dy: f64, period: f64, phase: f64, amplitude: f64| Beam {
        direction: [dx, dy],
        period,
        phase,
        amplitude,
    };
    let beams = match pattern {
        OffsetPattern::OffsetA => {
            // sin(2πx)cos(πy) = ½ sin 2π(x - y/2) + ½ sin 2π(x + y/2)
            let r5 = 5f64.sqrt();
            let d = 2.0 / r5;
            vec![
                beam(2.0 / r5, -1.0 / r5, d, 0.0, 0.5),
                beam(2.0 / r5, 1.0 / r5, d, 0.0, 0.5),
            ]
        }
        OffsetPattern::AlternateX => vec![beam(1.0, 0.0, 1.0, 0.0, 1.0)],
        OffsetPattern::AlternateXOdd => vec![beam(1.0, 0.0, 1.0, PI, 1.0)],
        OffsetPattern::AlternateY => vec![beam(0.0, 1.0, 1.0, 0.0, 1.0)],
    };
    let config = LaserConfig { beams };
    let [w, h] = pattern.supercell();
    let mut residual: f64 = 0.0;
    for i in 0..GRID {
        for j in 0..GRID {
            let (x, y) = (w * i as f64 / GRID as f64, h * j as f64 / GRID as f64);
            residual = residual.max((config.value(x, y) - pattern.target(x, y)).abs());
        }
    }
    Decomposition {
        pattern,
        config,
        residual,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteShift {
    /// Site indices `(m, n)` at `(m/2, n/2)`.
    pub site: (usize, usize),
    pub minimum: [f64; 2],
    pub displacement: [f64; 2],
    /// Diagonal curvature at the shifted minimum.
    pub curvature: [f64; 2],
    pub base_curvature: f64,
    /// Largest of the first and third x-derivatives of the offset at the site.
    pub odd_derivative: f64,
}

pub const DEFAULT_DEPTH_RATIO: f64 = 10.0;

/// Locate the trap minimum of each site in one supercell under the base
/// lattice `depth·(sin²2πx + sin²2πy)` plus `offset`.
pub fn harmonicity_report(
    pattern: OffsetPattern,
    offset: &LaserConfig,
    depth: f64,
    min_ratio: f64,
) -> Result<Vec<SiteShift>> {
    let amp = offset.max_amplitude();
    if depth <= 0.0 || (amp > 0.0 && depth / amp < min_ratio) {
        return Err(PhysicsError::Harmonicity(format!(
            "base depth {depth} is less than {min_ratio} times the offset amplitude {amp}"
        )));
    }
    let k2 = 4.0 * PI;
    let base_curv = 2.0 * PI * PI * 4.0 * depth;
    let grad = |x: f64, y: f64| {
        let g = offset.gradient(x, y);
        [
            g[0] + depth * 2.0 * PI * (k2 * x).sin(),
            g[1] + depth * 2.0 * PI * (k2 * y).sin(),
        ]
    };
    let hess = |x: f64, y: f64| {
        let h = offset.hessian(x, y);
        [
            [h[0][0] + base_curv * (k2 * x).cos(), h[0][1]],
            [h[1][0], h[1][1] + base_curv * (k2 * y).cos()],
        ]
    };
    let [w, h] = pattern.supercell();
    let (nx, ny) = (
        (w / SITE_SPACING).round() as usize,
        (h / SITE_SPACING).round() as usize,
    );
    let mut out = Vec::with_capacity(nx * ny);
    for n in 0..ny {
        for m in 0..nx {
            let site = [m as f64 * SITE_SPACING, n as f64 * SITE_SPACING];
            let mut p = site;
            let mut converged = false;
            for _ in 0..100 {
                let g = grad(p[0], p[1]);
                let hm = hess(p[0], p[1]);
                let det = hm[0][0] * hm[1][1] - hm[0][1] * hm[1][0];
                if hm[0][0] <= 0.0 || det <= 0.0 {
                    break;
                }
                let step = [
                    (hm[1][1] * g[0] - hm[0][1] * g[1]) / det,
                    (hm[0][0] * g[1] - hm[1][0] * g[0]) / det,
                ];
                p = [p[0] - step[0], p[1] - step[1]];
                if step[0].abs().max(step[1].abs()) < 1e-15 {
                    converged = true;
                    break;
                }
            }
            let disp = [p[0] - site[0], p[1] - site[1]];
            if !converged || disp[0].hypot(disp[1]) > SITE_SPACING / 2.0 {
                return Err(PhysicsError::Harmonicity(format!(
                    "no unique minimum near site ({m}, {n})"
                )));
            }
            let hm = hess(p[0], p[1]);
            out.push(SiteShift {
                site: (m, n),
                minimum: p,
                displacement: disp,
                curvature: [hm[0][0], hm[1][1]],
                base_curvature: base_curv,
                odd_derivative: offset.gradient(site[0], site[1])[0]
                    .abs()
                    .max(offset.d3x(site[0], site[1]).abs()),
            });
        }
    }
    Ok(out)
}

/// Horizontal neighbours whose minima move towards each other.
pub fn pairs_moving_together(report: &[SiteShift], tol: f64) -> Vec<((usize, usize), (usize, usize))> {
    let mut pairs = Vec::new();
    for a in report {
        for b in report {
            if b.site == (a.site.0 + 1, a.site.1) && a.displacement[0] > tol && b.displacement[0] < -tol {
                pairs.push((a.site, b.site));
            }
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_ids_round_trip() {
        for p in OffsetPattern::ALL {
            assert_eq!(p.id().parse::<OffsetPattern>().unwrap(), p);
        }
        let err = "checkerboard".parse::<OffsetPattern>().unwrap_err();
        assert!(err.to_string().contains("fig-offset-a"));
    }

    #[test]
    fn beam_text_has_five_fields() {
        let d = superlattice_decompose(OffsetPattern::OffsetA);
        for line in d.config.to_text().lines() {
            assert_eq!(line.split_whitespace().count(), 5);
        }
    }
}
