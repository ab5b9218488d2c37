//! Command-line front end. Exit status reports whether a command could run
//! and pass its own checks; CP verdicts are report content, never errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::acceptance::{run_all, AcceptanceConfig};
use crate::analysis::{
    analyze_decomposition, time_grid, time_sweep, AnalysisConfig, MapAnalysisReport,
};
use crate::basis::HermitianBasis;
use crate::demo::{demo_scenario, DEMO_GRID, DEMO_WITNESS_THRESHOLD};
use crate::dynamics::affine_decomposition;
use crate::error::{Error, Result};
use crate::io::{write_reports_csv, write_reports_json, BasisDocument, Scenario};
use crate::matrix::random::sample_density_matrices;
use crate::tolerance::Tolerances;

#[derive(Debug, Parser)]
#[command(
    name = "dynamap",
    version,
    about = "Linear and affine maps of density matrices"
)]
pub struct Cli {
    /// Seed for sampled density matrices and randomized self-tests.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Number of sampled density matrices for state-based checks.
    #[arg(long, global = true, default_value_t = 50)]
    pub samples: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Export the Hermitian operator basis for dimension N as JSON.
    Basis {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze a scenario at a single time.
    Analyze {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        time: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Analyze a scenario over an evenly spaced time grid.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// Defaults to the scenario's `times.start`.
        #[arg(long)]
        t0: Option<f64>,
        /// Defaults to the scenario's `times.stop`.
        #[arg(long)]
        t1: Option<f64>,
        /// Defaults to the scenario's `times.steps`.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Write the bundled two-qubit demo, sweep it and summarize.
    Demo {
        /// Replace environment means and correlations by zeros.
        #[arg(long)]
        zero_correlations: bool,
        #[arg(long, default_value = "dynamap-demo")]
        out: PathBuf,
    },
    /// Run the acceptance criteria.
    Selftest,
}

/// `Ok(true)` on success, `Ok(false)` when a command ran but its own checks failed.
pub fn execute(cli: &Cli, tol: &Tolerances, stdout: &mut dyn Write) -> Result<bool> {
    let analysis = AnalysisConfig {
        tolerances: *tol,
        samples: cli.samples,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Basis { dim, out } => cmd_basis(*dim, tol, out.as_deref(), stdout),
        Command::Analyze {
            scenario,
            time,
            out,
            format,
        } => cmd_analyze(scenario, *time, &analysis, *format, out.as_deref(), stdout),
        Command::Sweep {
            scenario,
            t0,
            t1,
            steps,
            out,
            format,
        } => cmd_sweep(
            scenario,
            (*t0, *t1, *steps),
            &analysis,
            *format,
            out.as_deref(),
            stdout,
        ),
        Command::Demo {
            zero_correlations,
            out,
        } => cmd_demo(*zero_correlations, out, &analysis, stdout),
        Command::Selftest => cmd_selftest(
            &AcceptanceConfig {
                tolerances: *tol,
                seed: cli.seed,
            },
            stdout,
        ),
    }
}

fn with_sink(
    out: Option<&Path>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = std::io::BufWriter::new(fs::File::create(path)?);
            f(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

fn load_scenario(path: &Path, tol: &Tolerances) -> Result<Scenario> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    Scenario::from_json(&text, tol)
}

pub fn cmd_basis(
    dim: usize,
    tol: &Tolerances,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<bool> {
    let doc = BasisDocument::from(&HermitianBasis::new(dim)?);
    with_sink(out, stdout, |w| {
        serde_json::to_writer_pretty(&mut *w, &doc)?;
        writeln!(w)?;
        Ok(())
    })?;
    Ok(doc.gram_residual <= tol.eq)
}

fn write_reports(
    reports: &[MapAnalysisReport],
    format: Format,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<()> {
    with_sink(out, stdout, |w| match format {
        Format::Csv => write_reports_csv(w, reports),
        Format::Json => write_reports_json(w, reports),
    })
}

pub fn cmd_analyze(
    path: &Path,
    time: f64,
    cfg: &AnalysisConfig,
    format: Format,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<bool> {
    if !time.is_finite() {
        return Err(Error::InvalidArgument(format!("time {time} is not finite")));
    }
    let scn = load_scenario(path, &cfg.tolerances)?;
    let dec = affine_decomposition(&scn.joint, &scn.assignment, time)?;
    let samples = sample_density_matrices(scn.joint.system_dim(), cfg.samples, cfg.seed);
    let report = analyze_decomposition(scn.joint.label(), time, &dec, &samples, &cfg.tolerances)?;
    match format {
        Format::Json => with_sink(out, stdout, |w| {
            serde_json::to_writer_pretty(&mut *w, &report)?;
            writeln!(w)?;
            Ok(())
        })?,
        Format::Csv => write_reports(std::slice::from_ref(&report), format, out, stdout)?,
    }
    Ok(true)
}

pub fn cmd_sweep(
    path: &Path,
    grid: (Option<f64>, Option<f64>, Option<usize>),
    cfg: &AnalysisConfig,
    format: Format,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<bool> {
    let scn = load_scenario(path, &cfg.tolerances)?;
    let missing = |flag: &str| {
        Error::InvalidArgument(format!(
            "--{flag} is required when the scenario has no `times`"
        ))
    };
    let start = grid
        .0
        .or(scn.times.map(|g| g.start))
        .ok_or_else(|| missing("t0"))?;
    let stop = grid
        .1
        .or(scn.times.map(|g| g.stop))
        .ok_or_else(|| missing("t1"))?;
    let steps = grid
        .2
        .or(scn.times.map(|g| g.steps))
        .ok_or_else(|| missing("steps"))?;
    let times = time_grid(start, stop, steps)?;
    let reports = time_sweep(&scn.joint, &scn.assignment, &times, cfg)?;
    write_reports(&reports, format, out, stdout)?;
    Ok(true)
}

pub fn cmd_demo(
    zero_correlations: bool,
    dir: &Path,
    cfg: &AnalysisConfig,
    stdout: &mut dyn Write,
) -> Result<bool> {
    let scn = demo_scenario(zero_correlations)?;
    fs::create_dir_all(dir)?;
    let stem = if zero_correlations {
        "demo_zeroed"
    } else {
        "demo"
    };
    let scenario_path = dir.join(format!("{stem}_scenario.json"));
    fs::write(&scenario_path, scn.to_json()? + "\n")?;

    let times = time_grid(DEMO_GRID.start, DEMO_GRID.stop, DEMO_GRID.steps)?;
    let reports = time_sweep(&scn.joint, &scn.assignment, &times, cfg)?;
    let csv_path = dir.join(format!("{stem}_sweep.csv"));
    let json_path = dir.join(format!("{stem}_sweep.json"));
    write_reports(&reports, Format::Csv, Some(&csv_path), stdout)?;
    write_reports(&reports, Format::Json, Some(&json_path), stdout)?;

    let witness = reports
        .iter()
        .min_by(|a, b| a.min_choi_eigenvalue.total_cmp(&b.min_choi_eigenvalue))
        .expect("demo grid is non-empty");
    let cp_part_deficit = reports
        .iter()
        .map(|r| (-r.cp_part_min_choi_eigenvalue).max(0.0))
        .fold(0.0, f64::max);
    let violations = reports.iter().filter(|r| !r.is_cp).count();
    let max_d = reports
        .iter()
        .flat_map(|r| r.d_parameters.iter())
        .map(|d| d.abs())
        .fold(0.0, f64::max);
    let cp_part_ok = reports.iter().all(|r| r.cp_part_is_cp);

    writeln!(stdout, "scenario:              {}", scenario_path.display())?;
    writeln!(
        stdout,
        "sweep:                 {} ({} points)",
        csv_path.display(),
        reports.len()
    )?;
    writeln!(stdout, "label:                 {}", scn.joint.label())?;
    writeln!(
        stdout,
        "full map non-CP at:    {violations} of {} times",
        reports.len()
    )?;
    writeln!(
        stdout,
        "min full Choi eig:     {:.6e} at t = {}",
        witness.min_choi_eigenvalue, witness.time
    )?;
    writeln!(stdout, "max CP-part deficit:   {cp_part_deficit:.3e}")?;
    writeln!(stdout, "max |d_alpha|:         {max_d:.3e}")?;

    let ok = if zero_correlations {
        violations == 0 && max_d <= cfg.tolerances.eq && cp_part_ok
    } else {
        witness.min_choi_eigenvalue <= DEMO_WITNESS_THRESHOLD && cp_part_ok
    };
    if ok {
        if !zero_correlations {
            writeln!(stdout, "witness time:          {}", witness.time)?;
        }
        writeln!(stdout, "demo checks:           passed")?;
    } else {
        writeln!(stdout, "demo checks:           FAILED")?;
    }
    Ok(ok)
}

pub fn cmd_selftest(cfg: &AcceptanceConfig, stdout: &mut dyn Write) -> Result<bool> {
    let results = run_all(cfg);
    for r in &results {
        writeln!(stdout, "{r}")?;
    }
    let passed = results.iter().filter(|r| r.passed()).count();
    writeln!(stdout, "{passed}/{} criteria passed", results.len())?;
    Ok(passed == results.len())
}
