//! Entry point: argument parsing, config resolution, and exit-code
//! mapping (0 ok, 2 config error, 3 numerical error).

#![forbid(unsafe_code)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gaussinfo_cli::config::{load_config, Kind, ScenarioConfig};
use gaussinfo_cli::{
    build_pool, run_chain, run_classical_compare, run_qgt_scan, run_qubits, run_two_osc_sweep,
    write_output, CliError, SidecarMeta,
};

#[derive(Debug, Parser)]
#[command(
    name = "gaussinfo",
    version,
    about = "Entanglement measures of Gaussian oscillator networks: sweeps to CSV"
)]
struct Cli {
    /// Scenario file (TOML); required by every subcommand except qubits
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output path; omit to print to stdout. A <out>.meta.toml sidecar
    /// records run metadata
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Planck constant scale; overrides the config value
    #[arg(long, global = true)]
    hbar: Option<f64>,

    /// Random seed recorded for reproducibility (reference Monte-Carlo
    /// runs only; the scenarios here are deterministic)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for sweep evaluation; GAUSSINFO_JOBS is the
    /// fallback, then the rayon default
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Two coupled oscillators: purity and entropy along a k1 sweep
    TwoOsc,
    /// Uniform or file-defined chain: block entropies by block size
    Chain,
    /// Worked qubit examples (maximally mixed state, Bell pair, spins)
    Qubits,
    /// Quantum metric and fidelity susceptibility along a parameter
    QgtScan,
    /// Quantum measures next to their classical action-angle analogs
    ClassicalCompare,
}

impl Command {
    fn kind(self) -> Kind {
        match self {
            Command::TwoOsc => Kind::TwoOsc,
            Command::Chain => Kind::Chain,
            Command::Qubits => Kind::Qubits,
            Command::QgtScan => Kind::QgtScan,
            Command::ClassicalCompare => Kind::ClassicalCompare,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Command::TwoOsc => "two-osc",
            Command::Chain => "chain",
            Command::Qubits => "qubits",
            Command::QgtScan => "qgt-scan",
            Command::ClassicalCompare => "classical-compare",
        }
    }
}

fn load_scenario(cli: &Cli) -> Result<Option<ScenarioConfig>, CliError> {
    let Some(path) = &cli.config else {
        if matches!(cli.command, Command::Qubits) {
            return Ok(None);
        }
        return Err(CliError::Config(format!(
            "subcommand {} needs --config",
            cli.command.name()
        )));
    };
    let cfg = load_config(path)?;
    if cfg.kind != cli.command.kind() {
        return Err(CliError::Config(format!(
            "config kind {} does not match subcommand {}",
            cfg.kind.name(),
            cli.command.name()
        )));
    }
    Ok(Some(cfg))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_scenario(cli)?;
    let hbar = cli
        .hbar
        .or_else(|| cfg.as_ref().and_then(|c| c.hbar))
        .unwrap_or(1.0);
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(CliError::Config(format!(
            "hbar must be positive, got {hbar}"
        )));
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.as_ref().and_then(|c| c.out.clone()));
    let pool = build_pool(cli.jobs)?;

    let body = match cli.command {
        Command::TwoOsc => {
            let cfg = cfg.as_ref().expect("config required");
            let sweep = cfg.sweep.as_ref().expect("validated");
            let two = cfg.two_osc.as_ref().expect("validated");
            run_two_osc_sweep(two.k0, &sweep.points(), hbar, &pool)?
        }
        Command::Chain => {
            let cfg = cfg.as_ref().expect("config required");
            run_chain(cfg.chain.as_ref().expect("validated"), hbar, &pool)?
        }
        Command::Qubits => run_qubits(hbar)?,
        Command::QgtScan => {
            let cfg = cfg.as_ref().expect("config required");
            let sweep = cfg.sweep.as_ref().expect("validated");
            run_qgt_scan(
                cfg.qgt_scan.as_ref().expect("validated"),
                &sweep.points(),
                hbar,
                &pool,
            )?
        }
        Command::ClassicalCompare => {
            let cfg = cfg.as_ref().expect("config required");
            run_classical_compare(cfg.classical_compare.as_ref().expect("validated"), hbar)?
        }
    };

    let rows = body.lines().count().saturating_sub(1);
    let meta = SidecarMeta {
        tool: "gaussinfo",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: cli.command.name(),
        config: cli.config.as_ref().map(|p| p.display().to_string()),
        hbar,
        seed: cli.seed,
        jobs: cli.jobs,
        rows,
    };
    write_output(&body, out.as_deref(), &meta)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("gaussinfo: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
