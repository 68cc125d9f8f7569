use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use glq_compiler::{compile, run_factor15, verify, Circuit, Layout, VerifyReport};
use glq_core::{LatticeGeometry, PulseProgram};
use glq_sim::{records_to_csv, snapshot, DenseState, HybridState, MeasurementRecord};

use crate::{seed_or_default, Backend, CompileArgs, FactorArgs, SimulateArgs, Status, VerifyArgs};

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn read_circuit(path: &Path) -> anyhow::Result<Circuit> {
    Circuit::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_program(path: &Path) -> anyhow::Result<PulseProgram> {
    PulseProgram::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

pub fn cmd_compile(args: &CompileArgs, out: &mut dyn Write) -> anyhow::Result<Status> {
    let circuit = read_circuit(&args.circuit)?;
    let cols = args.cols.unwrap_or(3 * circuit.width);
    let geometry = LatticeGeometry::new(cols, args.rows)?;
    let layout = Layout::default_for(circuit.width, geometry)?;
    let compiled = compile(&circuit, &layout)?;
    let program_path = args
        .out
        .clone()
        .unwrap_or_else(|| args.circuit.with_extension("pulse"));
    let cost_path = args
        .cost
        .clone()
        .unwrap_or_else(|| with_suffix(&program_path, ".cost.csv"));
    write(&program_path, &compiled.program.to_text())?;
    write(&cost_path, &compiled.cost_csv())?;
    writeln!(
        out,
        "program {} ({} ops)",
        program_path.display(),
        compiled.program.len()
    )?;
    writeln!(out, "cost {}", cost_path.display())?;
    out.write_all(compiled.cost_csv().as_bytes())?;
    Ok(Status::Ok)
}

/// Amplitudes of a dense state, one nonzero basis index per line.
fn dense_snapshot(state: &DenseState, seed: u64) -> String {
    let g = state.geometry();
    let mut s = format!("geom {} {}\nseed {seed}\n", g.columns(), g.rows());
    for (i, a) in state.amplitudes().iter().enumerate() {
        if a.norm_sqr() > 0.0 {
            let _ = writeln!(s, "amp {i} {:.16e} {:.16e}", a.re, a.im);
        }
    }
    s
}

pub fn cmd_simulate(
    args: &SimulateArgs,
    out: &mut dyn Write,
    note: &mut dyn Write,
) -> anyhow::Result<Status> {
    let seed = seed_or_default(args.seed, note);
    let program = read_program(&args.program)?;
    if args.shots == 0 {
        bail!("--shots must be at least 1");
    }
    let mut csv = format!("# seed={seed} shots={}\n", args.shots);
    let mut last_state = String::new();
    for shot in 0..args.shots {
        let (records, state): (Vec<MeasurementRecord>, String) = match args.backend {
            Backend::Hybrid => {
                let mut s = HybridState::new(program.geometry, args.max_cluster, seed);
                s.reseed(seed, shot as u64);
                (s.run(&program)?, snapshot(&s))
            }
            Backend::Dense => {
                let mut s = DenseState::new(program.geometry, seed)?;
                s.reseed(seed, shot as u64);
                (s.run(&program)?, dense_snapshot(&s, seed))
            }
        };
        let body = records_to_csv(&records);
        let mut lines = body.lines();
        if shot == 0 {
            let _ = writeln!(csv, "shot,{}", lines.next().unwrap_or_default());
        } else {
            lines.next();
        }
        for l in lines {
            let _ = writeln!(csv, "{shot},{l}");
        }
        last_state = state;
    }
    let records_path = args
        .records
        .clone()
        .unwrap_or_else(|| with_suffix(&args.program, ".records.csv"));
    let snapshot_path = args
        .snapshot
        .clone()
        .unwrap_or_else(|| with_suffix(&args.program, ".snapshot"));
    write(&records_path, &csv)?;
    write(&snapshot_path, &last_state)?;
    writeln!(out, "records {}", records_path.display())?;
    writeln!(out, "snapshot {}", snapshot_path.display())?;
    Ok(Status::Ok)
}

/// Verify the program file against the circuit file.
pub fn verify_files(circuit: &Path, program: &Path, seed: u64) -> anyhow::Result<VerifyReport> {
    let c = read_circuit(circuit)?;
    let p = read_program(program)?;
    Ok(verify(&c, &p, seed)?)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, note: &mut dyn Write) -> anyhow::Result<Status> {
    let seed = seed_or_default(args.seed, note);
    let report = verify_files(&args.circuit, &args.program, seed)?;
    writeln!(out, "# seed={seed}")?;
    writeln!(out, "{report}")?;
    Ok(if report.passed() { Status::Ok } else { Status::Fail })
}

pub fn cmd_factor15(args: &FactorArgs, out: &mut dyn Write, note: &mut dyn Write) -> anyhow::Result<Status> {
    let seed = seed_or_default(args.seed, note);
    let run = run_factor15(args.a, args.shots, seed)?;
    let hist = run.histogram_csv();
    if let Some(path) = &args.out {
        write(path, &hist)?;
    }
    out.write_all(hist.as_bytes())?;
    for t in &run.attempts {
        let period = t.period.map_or("none".to_string(), |r| r.to_string());
        writeln!(out, "# shot {} outcome {} period {period}", t.shot, t.outcome)?;
    }
    writeln!(out, "# peak_cluster {}", run.peak_cluster_size)?;
    match run.factors {
        Some((p, q)) => {
            writeln!(out, "factors {p} {q}")?;
            Ok(Status::Ok)
        }
        None => {
            writeln!(out, "no factors found")?;
            Ok(Status::Fail)
        }
    }
}
