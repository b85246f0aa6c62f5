//! `homodyne`: simulate homodyne data, reconstruct observables from it, and
//! regenerate the reference figures.
//!
//! Exit codes: 0 success, 1 invalid input, 2 a statistical or self-test check
//! failed, 3 I/O failure (including corrupted sample files).

mod config;
mod figures;
mod selftest;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use homodyne_core::engine::{evaluate, write_results_csv, RunManifest};
use homodyne_core::specfun::gauss_laguerre;
use homodyne_core::states::{sample_ghz, sample_twin_beam, sidecar_path, SampleSet};

use config::{ConfigFile, RunConfig, StateChoice};
use figures::Figure;

#[derive(Parser)]
#[command(name = "homodyne", version, about = "Homodyne tomography with a single randomized local oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a homodyne dataset and write it as CSV with a metadata sidecar.
    Simulate(SimulateArgs),
    /// Estimate observables from a sample file.
    Reconstruct(ReconstructArgs),
    /// Regenerate the data behind one of the reference figures.
    Figure(FigureArgs),
    /// Run the built-in numerical and sampler checks.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `twin-beam` or `ghz`.
    #[arg(long)]
    state: Option<String>,
    /// Mean photon number per beam of the twin-beam state.
    #[arg(long, conflicts_with = "xi")]
    nbar: Option<f64>,
    /// Squeezing parameter as `RE` or `RE,IM`.
    #[arg(long)]
    xi: Option<String>,
    /// Phase of xi in radians, used with --nbar.
    #[arg(long)]
    xi_phase: Option<f64>,
    /// Detector quantum efficiency in (0.5, 1].
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Sample CSV written by `simulate`.
    samples_file: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Observable to estimate, e.g. `joint:8`, `total:10`, `coherence:8`,
    /// `q:0.5:0:0.5:0`, `mgf:0.5`, `mean`, `second`, `ghz:16`. Repeatable.
    #[arg(long = "observable", short = 'o')]
    observables: Vec<String>,
    #[arg(long)]
    quad_order: Option<usize>,
    #[arg(long)]
    partitions: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    name: Figure,
    /// Base sample count (the paper-scale defaults are listed in the README).
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    quad_order: Option<usize>,
    #[arg(long)]
    partitions: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long)]
    quad_order: Option<usize>,
    /// Efficiency used by the sampler checks.
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
}

/// Failure classes, one per nonzero exit code.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Check(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Check(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<homodyne_core::Error> for CliError {
    fn from(e: homodyne_core::Error) -> Self {
        match e {
            homodyne_core::Error::Io(m) => CliError::Io(format!("I/O error: {m}")),
            other => CliError::Validation(other.to_string()),
        }
    }
}

pub fn io_error(context: impl fmt::Display, e: impl fmt::Display) -> CliError {
    CliError::Io(format!("{context}: {e}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors are validation failures; 2 is reserved for failed checks.
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Figure(a) => figure(a),
        Command::Selftest(a) => selftest(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("homodyne: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn init_threads(threads: Option<usize>) -> Result<usize, CliError> {
    let threads = match threads {
        Some(0) => return Err(CliError::Validation("--threads must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    Ok(threads)
}

fn create_dir(dir: &std::path::Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_error(format!("cannot create {}", dir.display()), e))
}

fn simulate(a: SimulateArgs) -> Result<(), CliError> {
    let mut file = ConfigFile::load(a.config.as_deref())?;
    file.apply_state_flags(a.state, a.nbar, a.xi.as_deref(), a.xi_phase)?;
    file.eta = a.eta.or(file.eta);
    file.samples = a.samples.or(file.samples);
    file.seed = a.seed.or(file.seed);
    file.threads = a.threads.or(file.threads);
    file.out = a.out.or(file.out);
    let cfg = RunConfig::from_file(file)?;
    init_threads(cfg.threads)?;
    if cfg.samples < 1000 {
        eprintln!("warning: {} samples are too few for meaningful error bars", cfg.samples);
    }
    let set = match cfg.state {
        StateChoice::TwinBeam(state) => sample_twin_beam(&state, cfg.eta, cfg.samples, cfg.seed)?,
        StateChoice::Ghz => sample_ghz(cfg.eta, cfg.samples, cfg.seed)?,
    };
    create_dir(&cfg.out)?;
    let path = cfg.out.join("samples.csv");
    set.write(&path)?;
    println!(
        "wrote {} {} samples (seed {}) to {} and {}",
        set.len(),
        set.descriptor().label(),
        cfg.seed,
        path.display(),
        sidecar_path(&path).display()
    );
    Ok(())
}

#[derive(serde::Deserialize)]
struct SidecarChecksum {
    csv_sha256: String,
}

fn reconstruct(a: ReconstructArgs) -> Result<(), CliError> {
    let mut file = ConfigFile::load(a.config.as_deref())?;
    file.reject_state_keys("reconstruct takes the state, efficiency, seed and count from the sample file")?;
    if !a.observables.is_empty() {
        file.observables = Some(a.observables);
    }
    file.quad_order = a.quad_order.or(file.quad_order);
    file.partitions = a.partitions.or(file.partitions);
    file.threads = a.threads.or(file.threads);
    file.out = a.out.or(file.out);
    let cfg = RunConfig::from_file(file)?;
    if cfg.observables.is_empty() {
        return Err(CliError::Validation("no observables requested (use --observable)".into()));
    }
    let rule = gauss_laguerre(cfg.quad_order)?;
    let threads = init_threads(cfg.threads)?;

    let set = SampleSet::read(&a.samples_file).map_err(|e| {
        io_error(format!("cannot load samples from {}", a.samples_file.display()), e)
    })?;
    let sidecar = sidecar_path(&a.samples_file);
    let checksum: SidecarChecksum = std::fs::read_to_string(&sidecar)
        .map_err(|e| io_error(sidecar.display(), e))
        .and_then(|t| toml::from_str(&t).map_err(|e| io_error(sidecar.display(), e)))?;

    let rows = evaluate(&set, &cfg.observables, &rule, &cfg.plan)?;
    create_dir(&cfg.out)?;
    let results = cfg.out.join("results.csv");
    write_results_csv(&rows, &results)?;
    let mut manifest = RunManifest::new(
        set.seed(),
        *set.descriptor(),
        set.len(),
        cfg.quad_order,
        cfg.plan.partitions(),
        threads,
        cfg.observables.iter().map(|o| o.to_string()).collect(),
    );
    manifest.samples_sha256 = Some(checksum.csv_sha256);
    let manifest_path = cfg.out.join("run.toml");
    manifest.write(&manifest_path)?;
    println!(
        "{} estimates from {} samples written to {} ({})",
        rows.len(),
        set.len(),
        results.display(),
        manifest_path.display()
    );
    Ok(())
}

fn figure(a: FigureArgs) -> Result<(), CliError> {
    let file = ConfigFile {
        samples: a.samples,
        seed: a.seed,
        quad_order: a.quad_order,
        partitions: a.partitions,
        threads: a.threads,
        out: a.out,
        ..ConfigFile::default()
    };
    let cfg = RunConfig::from_file(file)?;
    let threads = init_threads(cfg.threads)?;
    create_dir(&cfg.out)?;
    figures::run(a.name, &cfg, a.samples.is_some(), threads)
}

fn selftest(a: SelftestArgs) -> Result<(), CliError> {
    let file = ConfigFile {
        eta: a.eta,
        seed: a.seed,
        quad_order: a.quad_order,
        threads: a.threads,
        ..ConfigFile::default()
    };
    let cfg = RunConfig::from_file(file)?;
    init_threads(cfg.threads)?;
    selftest::run(&cfg, a.eta.is_some())
}
