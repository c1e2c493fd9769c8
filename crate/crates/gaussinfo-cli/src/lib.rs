//! Scenario runners behind the `gaussinfo` binary: each subcommand
//! maps a config to deterministic CSV (or a plain-text report), with
//! every row double-checked against an independent route before it is
//! written.

#![forbid(unsafe_code)]

pub mod config;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use gaussinfo::classical::{
    bohr_sommerfeld, classical_covariance, classical_entropy, classical_purity,
};
use gaussinfo::discrete::{
    expectation, linear_entropy_discrete, partial_trace, purity_discrete, spin_half,
    von_neumann_discrete, Subsystem,
};
use gaussinfo::gaussian::{purity, symplectic_eigenvalues, von_neumann_entropy_gaussian};
use gaussinfo::oscillator::{build_chain, ground_state_covariance, normal_modes};
use gaussinfo::qgt::{fidelity_susceptibility, oscillator_family, qgt_perturbative};
use gaussinfo::reduction::{reduce_covariance, two_oscillator_closed_forms};
use gaussinfo::{
    ActionAssignment, CouplingMatrix, CovarianceMatrix, DensityMatrix, GroundStateSpec,
    ParametrizedHamiltonian, StateVector,
};

use config::{ChainConfig, ClassicalCompareConfig, QgtFamily, QgtScanConfig};

/// Row-level agreement demanded between the covariance and closed-form
/// purity routes before a sweep row is emitted.
const PURITY_ROW_TOL: f64 = 1e-12;
/// Row-level agreement between the ν-route and ξ-route entropies.
const ENTROPY_ROW_TOL: f64 = 1e-10;
/// Block/complement entropy symmetry gate for chain runs.
const COMPLEMENT_TOL: f64 = 1e-8;
/// Classical-quantum comparison gates.
const COMPARE_PURITY_TOL: f64 = 1e-12;
const COMPARE_ENTROPY_TOL: f64 = 1e-10;
const COMPARE_NU_TOL: f64 = 1e-12;
/// Worked qubit examples are exact arithmetic; anything past rounding
/// noise indicates a real defect.
const QUBIT_TOL: f64 = 1e-12;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(#[from] gaussinfo::Error),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) | CliError::CrossCheck(_) => 3,
        }
    }
}

/// 17 significant digits: round-trip exact for IEEE doubles.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Thread pool honoring --jobs, then GAUSSINFO_JOBS, then the rayon
/// default.
pub fn build_pool(jobs_flag: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let jobs = match jobs_flag {
        Some(j) => Some(j),
        None => match std::env::var("GAUSSINFO_JOBS") {
            Ok(raw) => Some(raw.parse::<usize>().map_err(|_| {
                CliError::Config(format!(
                    "GAUSSINFO_JOBS must be a positive integer, got {raw:?}"
                ))
            })?),
            Err(_) => None,
        },
    };
    if jobs == Some(0) {
        return Err(CliError::Config("jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot build thread pool: {e}")))
}

fn two_osc_ground_state(k0: f64, k1: f64, hbar: f64) -> Result<CovarianceMatrix, CliError> {
    let k = build_chain(2, k0, k1, false)?;
    let spec = GroundStateSpec::new(normal_modes(&k)?, hbar)?;
    Ok(ground_state_covariance(&spec))
}

/// Purity/entropy sweep over k1 with both routes reported per row.
pub fn run_two_osc_sweep(
    k0: f64,
    k1_grid: &[f64],
    hbar: f64,
    pool: &rayon::ThreadPool,
) -> Result<String, CliError> {
    let rows: Vec<String> = pool.install(|| {
        k1_grid
            .par_iter()
            .map(|&k1| -> Result<String, CliError> {
                let forms = two_oscillator_closed_forms(k0, k1, hbar)?;
                let sigma = two_osc_ground_state(k0, k1, hbar)?;
                let reduced = reduce_covariance(&sigma, &[0])?;
                let purity_cov = purity(&reduced, hbar)?;
                let entropy_nu = von_neumann_entropy_gaussian(&reduced, hbar)?;
                if (purity_cov - forms.purity).abs() > PURITY_ROW_TOL {
                    return Err(CliError::CrossCheck(format!(
                        "purity routes disagree at k1={k1}: covariance {purity_cov} vs closed form {}",
                        forms.purity
                    )));
                }
                if (entropy_nu - forms.entropy).abs() > ENTROPY_ROW_TOL {
                    return Err(CliError::CrossCheck(format!(
                        "entropy routes disagree at k1={k1}: nu {entropy_nu} vs xi {}",
                        forms.entropy
                    )));
                }
                Ok(format!(
                    "{},{},{},{},{},{},{},{}\n",
                    fmt_real(k1),
                    fmt_real(forms.omega_plus),
                    fmt_real(forms.omega_minus),
                    fmt_real(forms.xi),
                    fmt_real(purity_cov),
                    fmt_real(forms.purity),
                    fmt_real(entropy_nu),
                    fmt_real(forms.entropy),
                ))
            })
            .collect::<Result<Vec<String>, CliError>>()
    })?;
    let mut csv = String::from(
        "k1,omega_plus,omega_minus,xi,purity_cov,purity_closed,entropy_nu,entropy_xi\n",
    );
    for row in rows {
        csv.push_str(&row);
    }
    Ok(csv)
}

fn parse_matrix_file(path: &Path) -> Result<DMatrix<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!(
            "cannot read coupling matrix {}: {e}",
            path.display()
        ))
    })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
        let row = row.map_err(|e| {
            CliError::Config(format!("{} line {}: {e}", path.display(), lineno + 1))
        })?;
        rows.push(row);
    }
    let n = rows.len();
    if n < 2 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Config(format!(
            "{} must hold a square matrix of size >= 2",
            path.display()
        )));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn chain_coupling(cfg: &ChainConfig) -> Result<CouplingMatrix, CliError> {
    match &cfg.k_matrix {
        Some(path) => Ok(CouplingMatrix::from_matrix(parse_matrix_file(path)?)?),
        None => {
            let (n, k0, k1) = (
                cfg.n_oscillators.expect("validated"),
                cfg.k0.expect("validated"),
                cfg.k1.expect("validated"),
            );
            Ok(build_chain(n, k0, k1, cfg.periodic)?)
        }
    }
}

/// Block-size scan over a chain: entropy of the first n oscillators,
/// entropy of the remaining N−n, and block purity, with the two
/// entropies gated on complement symmetry.
pub fn run_chain(
    cfg: &ChainConfig,
    hbar: f64,
    pool: &rayon::ThreadPool,
) -> Result<String, CliError> {
    let k = chain_coupling(cfg)?;
    let total = k.n();
    let spec = GroundStateSpec::new(normal_modes(&k)?, hbar)?;
    let sigma = ground_state_covariance(&spec);
    let rows: Vec<String> = pool.install(|| {
        (1..total)
            .into_par_iter()
            .map(|n| -> Result<String, CliError> {
                let front = reduce_covariance(&sigma, &(0..n).collect::<Vec<_>>())?;
                let back = reduce_covariance(&sigma, &(n..total).collect::<Vec<_>>())?;
                let s_n = von_neumann_entropy_gaussian(&front, hbar)?;
                let s_complement = von_neumann_entropy_gaussian(&back, hbar)?;
                let purity_n = purity(&front, hbar)?;
                if (s_n - s_complement).abs() > COMPLEMENT_TOL {
                    return Err(CliError::CrossCheck(format!(
                        "block/complement entropies disagree at n={n}: {s_n} vs {s_complement}"
                    )));
                }
                Ok(format!(
                    "{n},{},{},{}\n",
                    fmt_real(s_n),
                    fmt_real(s_complement),
                    fmt_real(purity_n),
                ))
            })
            .collect::<Result<Vec<String>, CliError>>()
    })?;
    let mut csv = String::from("n,S_n,S_complement,purity_n\n");
    for row in rows {
        csv.push_str(&row);
    }
    Ok(csv)
}

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

/// Worked discrete examples: maximally mixed single qubit, Bell pair
/// reduction, and spin expectations in the |+x⟩ state.
pub fn run_qubits(hbar: f64) -> Result<String, CliError> {
    let ops = spin_half(hbar);
    let oven = DensityMatrix::from_matrix(DMatrix::from_row_slice(
        2,
        2,
        &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)],
    ))?;
    let oven_purity = purity_discrete(&oven);
    let oven_linear = linear_entropy_discrete(&oven);

    let inv = 1.0 / 2.0f64.sqrt();
    let bell = StateVector::new(DVector::from_vec(vec![
        c(inv, 0.0),
        c(0.0, 0.0),
        c(0.0, 0.0),
        c(inv, 0.0),
    ]))?;
    let bell_rho = DensityMatrix::from_pure(&bell);
    let bell_reduced = partial_trace(&bell_rho, (2, 2), Subsystem::A)?;
    let bell_entropy = von_neumann_discrete(&bell_reduced);

    let plus_x = StateVector::new(DVector::from_vec(vec![c(inv, 0.0), c(inv, 0.0)]))?;
    let plus_rho = DensityMatrix::from_pure(&plus_x);
    let ex = expectation(&plus_rho, &ops.sx)?;
    let ey = expectation(&plus_rho, &ops.sy)?;
    let ez = expectation(&plus_rho, &ops.sz)?;

    let checks = [
        (oven_purity, 0.5, "oven purity"),
        (oven_linear, 1.0, "oven linear entropy"),
        (bell_entropy, std::f64::consts::LN_2, "Bell reduced entropy"),
        (ex, 0.5 * hbar, "<s_x> in |+x>"),
        (ey, 0.0, "<s_y> in |+x>"),
        (ez, 0.0, "<s_z> in |+x>"),
    ];
    for (got, want, what) in checks {
        if (got - want).abs() > QUBIT_TOL {
            return Err(CliError::CrossCheck(format!(
                "{what} is {got}, expected {want}"
            )));
        }
    }

    let mut report = String::from("quantity,value\n");
    let rows = [
        ("oven_purity", oven_purity),
        ("oven_linear_entropy", oven_linear),
        ("bell_reduced_entropy", bell_entropy),
        ("plus_x_expect_sx", ex),
        ("plus_x_expect_sy", ey),
        ("plus_x_expect_sz", ez),
    ];
    for (name, value) in rows {
        let _ = writeln!(report, "{name},{}", fmt_real(value));
    }
    Ok(report)
}

fn scan_hamiltonian(
    cfg: &QgtScanConfig,
    lambda: f64,
    hbar: f64,
) -> Result<ParametrizedHamiltonian, CliError> {
    match cfg.family {
        QgtFamily::AvoidedCrossing => {
            let delta = cfg.delta.expect("validated");
            Ok(
                ParametrizedHamiltonian::new(2, vec![lambda], move |p: &[f64]| {
                    DMatrix::from_row_slice(
                        2,
                        2,
                        &[c(p[0], 0.0), c(delta, 0.0), c(delta, 0.0), c(-p[0], 0.0)],
                    )
                })?
                .with_derivatives(|_| {
                    vec![DMatrix::from_row_slice(
                        2,
                        2,
                        &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
                    )]
                }),
            )
        }
        QgtFamily::Oscillator => {
            let dim = cfg.dim.unwrap_or(40);
            Ok(oscillator_family(dim, lambda, hbar)?)
        }
        QgtFamily::Commuting => Ok(ParametrizedHamiltonian::new(
            3,
            vec![lambda],
            |p: &[f64]| {
                let scale = 1.0 + p[0];
                DMatrix::from_diagonal(&DVector::from_vec(vec![
                    c(scale, 0.0),
                    c(2.0 * scale, 0.0),
                    c(4.0 * scale, 0.0),
                ]))
            },
        )?),
    }
}

/// Metric and fidelity susceptibility along a one-parameter sweep,
/// with interior strict local maxima of g marked in the last column.
pub fn run_qgt_scan(
    cfg: &QgtScanConfig,
    grid: &[f64],
    hbar: f64,
    pool: &rayon::ThreadPool,
) -> Result<String, CliError> {
    let level = cfg.level.unwrap_or(0);
    let values: Vec<(f64, f64)> = pool.install(|| {
        grid.par_iter()
            .map(|&lambda| -> Result<(f64, f64), CliError> {
                let family = scan_hamiltonian(cfg, lambda, hbar)?;
                let tensor = qgt_perturbative(&family, level)?;
                let chi = fidelity_susceptibility(&family, level)?;
                Ok((tensor.g[(0, 0)], chi))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let mut csv = String::from("lambda,g_ii,chi_F,peak\n");
    for (i, (&lambda, &(g, chi))) in grid.iter().zip(values.iter()).enumerate() {
        let peak = i > 0 && i + 1 < values.len() && g > values[i - 1].0 && g > values[i + 1].0;
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            fmt_real(lambda),
            fmt_real(g),
            fmt_real(chi),
            u8::from(peak)
        );
    }
    Ok(csv)
}

/// Quantum ground-state measures next to their action-angle analogs at
/// the half-quantum action; every row must agree to tolerance.
pub fn run_classical_compare(cfg: &ClassicalCompareConfig, hbar: f64) -> Result<String, CliError> {
    let k = build_chain(cfg.n_oscillators, cfg.k0, cfg.k1, false)?;
    let modes = normal_modes(&k)?;
    let spec = GroundStateSpec::new(modes.clone(), hbar)?;
    let sigma_q = ground_state_covariance(&spec);
    let actions = bohr_sommerfeld(&ActionAssignment::uniform(cfg.n_oscillators, 1.0)?, hbar)?;
    let sigma_cl = classical_covariance(&modes, &actions)?;

    let block: Vec<usize> = (0..cfg.block).collect();
    let reduced_q = reduce_covariance(&sigma_q, &block)?;
    let reduced_cl = reduce_covariance(&sigma_cl, &block)?;
    let kept_actions = ActionAssignment::uniform(cfg.block, hbar / 2.0)?;

    let purity_q = purity(&reduced_q, hbar)?;
    let purity_cl = classical_purity(&reduced_cl, &kept_actions)?;
    let entropy_q = von_neumann_entropy_gaussian(&reduced_q, hbar)?;
    let entropy_cl = classical_entropy(&reduced_cl, &kept_actions)?;
    let nus_q = symplectic_eigenvalues(&reduced_q.scaled(1.0 / hbar))?;
    let nus_cl_raw = symplectic_eigenvalues(&reduced_cl)?;

    let mut rows: Vec<(String, f64, f64, f64)> = Vec::new();
    rows.push(("purity".into(), purity_q, purity_cl, COMPARE_PURITY_TOL));
    rows.push(("entropy".into(), entropy_q, entropy_cl, COMPARE_ENTROPY_TOL));
    for i in 0..cfg.block {
        let nu_cl = nus_cl_raw[i] * 0.5 / kept_actions.actions()[i];
        rows.push((format!("nu_{}", i + 1), nus_q[i], nu_cl, COMPARE_NU_TOL));
    }

    let mut csv = String::from("quantity,quantum_value,classical_value,abs_diff\n");
    for (name, q, cl, tol) in rows {
        let diff = (q - cl).abs();
        if diff > tol {
            return Err(CliError::CrossCheck(format!(
                "{name}: quantum {q} vs classical {cl} differ by {diff} (tolerance {tol})"
            )));
        }
        let _ = writeln!(
            csv,
            "{name},{},{},{}",
            fmt_real(q),
            fmt_real(cl),
            fmt_real(diff)
        );
    }
    Ok(csv)
}

/// Run metadata written next to the data file; deliberately free of
/// timestamps so reruns are byte-identical.
#[derive(Debug, Serialize)]
pub struct SidecarMeta<'a> {
    pub tool: &'a str,
    pub version: &'a str,
    pub subcommand: &'a str,
    pub config: Option<String>,
    pub hbar: f64,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub rows: usize,
}

pub fn write_output(
    body: &str,
    out: Option<&Path>,
    meta: &SidecarMeta<'_>,
) -> Result<(), CliError> {
    match out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, body)
                .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
            let sidecar = sidecar_path(path);
            let text = toml::to_string(meta)
                .map_err(|e| CliError::Config(format!("cannot serialize metadata: {e}")))?;
            std::fs::write(&sidecar, text).map_err(|e| {
                CliError::Config(format!("cannot write {}: {e}", sidecar.display()))
            })?;
            Ok(())
        }
    }
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.toml");
    PathBuf::from(name)
}
