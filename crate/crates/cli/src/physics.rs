use std::f64::consts::PI;
use std::io::Write;

use anyhow::{bail, Context};
use clap::{Subcommand, ValueEnum};
use glq_physics::superlattice::{pairs_moving_together, DEFAULT_DEPTH_RATIO};
use glq_physics::zeno::{sweep_csv, DEFAULT_BEAM_WIDTH};
use glq_physics::*;

use crate::{seed_or_default, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    Bare,
    Dressed,
}

#[derive(Debug, Subcommand)]
pub enum PhysicsCommand {
    /// Tunnelling, collision energy and spin couplings versus lattice depth.
    Couplings {
        /// Lattice depths in recoil units, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        v0: Vec<f64>,
        /// Scattering length over wavelength.
        #[arg(long, default_value_t = 0.01)]
        as_over_lambda: f64,
    },
    /// Beams realising an energy-offset pattern.
    Superlattice {
        /// fig-offset-a, alternate-x, alternate-x-odd or alternate-y.
        #[arg(long, default_value = "fig-offset-a")]
        pattern: String,
        /// Base lattice depth; when given, also report site shifts for an offset of unit amplitude.
        #[arg(long)]
        depth: Option<f64>,
        /// Minimum ratio of base depth to offset amplitude.
        #[arg(long, default_value_t = DEFAULT_DEPTH_RATIO)]
        min_ratio: f64,
    },
    /// Zeno-protected pointer initialization versus measurement-laser strength.
    Zeno {
        /// Sweep of omega as start:stop:step, stop included.
        #[arg(long, default_value = "0:95:5")]
        sweep: String,
        /// Centre-site tunnelling rate; omega and gamma are in these units.
        #[arg(long, default_value_t = 1.0)]
        j: f64,
        #[arg(long, default_value_t = 20.0)]
        gamma: f64,
        /// Duration [default: pi/2 over J].
        #[arg(long)]
        duration: Option<f64>,
        /// Addressing beam width in site spacings.
        #[arg(long, default_value_t = DEFAULT_BEAM_WIDTH)]
        width: f64,
        /// Fidelity level for the reported threshold.
        #[arg(long, default_value_t = 0.99)]
        level: f64,
        /// Add quantum-jump Monte Carlo columns with this many trajectories.
        #[arg(long)]
        trajectories: Option<usize>,
        /// Monte Carlo seed [default: 0].
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Two-site exact versus effective spin-model propagator error.
    Perturbation {
        /// Tunnelling values, comma separated; each is compared with its half.
        #[arg(long, value_delimiter = ',', default_value = "0.05")]
        j: Vec<f64>,
        /// Species-b tunnelling [default: same as species a].
        #[arg(long)]
        jb: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        u: f64,
        /// Species-b on-site energy [default: u].
        #[arg(long)]
        ubb: Option<f64>,
        /// Interspecies energy [default: u].
        #[arg(long)]
        uab: Option<f64>,
        /// Evolution time [default: pi over u].
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, value_enum, default_value_t = FrameArg::Dressed)]
        frame: FrameArg,
        /// Bosons allowed per mode.
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: usize,
    },
}

/// Parse `start:stop:step` into the points from start to stop inclusive.
pub fn parse_sweep(s: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts[..] else {
        bail!("sweep `{s}` is not start:stop:step");
    };
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .with_context(|| format!("bad number `{t}` in sweep"))
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if step.is_nan() || step <= 0.0 || stop < start {
        bail!("sweep needs step > 0 and stop >= start");
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| start + step * k as f64).collect())
}

pub fn cmd_physics(
    cmd: &PhysicsCommand,
    out: &mut dyn Write,
    note: &mut dyn Write,
) -> anyhow::Result<Status> {
    match cmd {
        PhysicsCommand::Couplings { v0, as_over_lambda } => {
            out.write_all(couplings_table(v0, *as_over_lambda)?.as_bytes())?;
        }
        PhysicsCommand::Superlattice {
            pattern,
            depth,
            min_ratio,
        } => {
            let pattern: OffsetPattern = pattern.parse()?;
            let d = superlattice_decompose(pattern);
            writeln!(out, "# pattern={} residual={:.3e}", pattern.id(), d.residual)?;
            for b in &d.config.beams {
                match b.angle_degrees() {
                    Some(theta) => writeln!(out, "# theta_deg={theta:.4}")?,
                    None => writeln!(out, "# theta_deg=none")?,
                }
            }
            out.write_all(d.config.to_text().as_bytes())?;
            if let Some(depth) = depth {
                let report = harmonicity_report(pattern, &d.config, *depth, *min_ratio)?;
                writeln!(out, "# col,row,dx,dy,curvature_x,odd_derivative")?;
                for s in &report {
                    writeln!(
                        out,
                        "# {},{},{:.6e},{:.6e},{:.6},{:.6e}",
                        s.site.0,
                        s.site.1,
                        s.displacement[0],
                        s.displacement[1],
                        s.curvature[0],
                        s.odd_derivative
                    )?;
                }
                for (a, b) in pairs_moving_together(&report, 1e-6) {
                    writeln!(out, "# pair ({},{}) ({},{})", a.0, a.1, b.0, b.1)?;
                }
            }
        }
        PhysicsCommand::Zeno {
            sweep,
            j,
            gamma,
            duration,
            width,
            level,
            trajectories,
            seed,
        } => {
            let omegas = parse_sweep(sweep)?;
            let base = ZenoParams {
                j_center: *j,
                gamma: *gamma,
                duration: duration.unwrap_or(PI / 2.0 / j),
                beam_width: *width,
                ..ZenoParams::standard(0.0)
            };
            let points = zeno_sweep(&base, &omegas)?;
            writeln!(
                out,
                "# J={} gamma={} duration={} width={}",
                base.j_center, base.gamma, base.duration, base.beam_width
            )?;
            match zeno_threshold(&points, *level) {
                Some(w) => writeln!(out, "# threshold F>{level} from omega={w}")?,
                None => writeln!(out, "# threshold F>{level} not reached")?,
            }
            match trajectories {
                None => out.write_all(sweep_csv(&points).as_bytes())?,
                Some(n) => {
                    let seed = seed_or_default(*seed, note);
                    writeln!(out, "# seed={seed} trajectories={n}")?;
                    writeln!(out, "omega,F,P,F_mc,P_mc")?;
                    for p in &points {
                        let mc = zeno_monte_carlo(
                            &ZenoParams {
                                omega: p.omega,
                                ..base
                            },
                            *n,
                            seed,
                        )?;
                        writeln!(
                            out,
                            "{},{:.12},{:.12},{:.12},{:.12}",
                            p.omega, p.fidelity, p.success, mc.zeno.fidelity, mc.zeno.success
                        )?;
                    }
                }
            }
        }
        PhysicsCommand::Perturbation {
            j,
            jb,
            u,
            ubb,
            uab,
            t,
            frame,
            cutoff,
        } => {
            let t = t.unwrap_or(PI / u);
            let frame = match frame {
                FrameArg::Bare => Frame::Bare,
                FrameArg::Dressed => Frame::Dressed,
            };
            writeln!(out, "# U={u} t={t} frame={frame:?} cutoff={cutoff}")?;
            writeln!(out, "J,error,error_half,ratio")?;
            for &ja in j {
                let params = |scale: f64| BhParams {
                    ja: ja * scale,
                    jb: jb.unwrap_or(ja) * scale,
                    uaa: *u,
                    ubb: ubb.unwrap_or(*u),
                    uab: uab.unwrap_or(*u),
                };
                let e = propagator_error(&params(1.0), t, *cutoff, frame)?;
                let e2 = propagator_error(&params(0.5), t, *cutoff, frame)?;
                writeln!(out, "{ja},{e:.6e},{e2:.6e},{:.6}", e / e2)?;
            }
        }
    }
    Ok(Status::Ok)
}
