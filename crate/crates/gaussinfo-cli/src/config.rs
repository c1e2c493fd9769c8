//! Scenario configuration: a single TOML file with one table per
//! subcommand. Unknown keys are rejected so typos fail fast.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub kind: Kind,
    pub hbar: Option<f64>,
    pub out: Option<PathBuf>,
    pub sweep: Option<SweepConfig>,
    pub two_osc: Option<TwoOscConfig>,
    pub chain: Option<ChainConfig>,
    pub qgt_scan: Option<QgtScanConfig>,
    pub classical_compare: Option<ClassicalCompareConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    TwoOsc,
    Chain,
    Qubits,
    QgtScan,
    ClassicalCompare,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::TwoOsc => "two_osc",
            Kind::Chain => "chain",
            Kind::Qubits => "qubits",
            Kind::QgtScan => "qgt_scan",
            Kind::ClassicalCompare => "classical_compare",
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    #[serde(default)]
    pub scale: Scale,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.from.is_finite() || !self.to.is_finite() {
            return Err(CliError::Config("sweep bounds must be finite".into()));
        }
        if self.steps < 1 {
            return Err(CliError::Config("sweep needs at least one step".into()));
        }
        if self.from > self.to {
            return Err(CliError::Config(format!(
                "sweep runs backwards: from {} > to {}",
                self.from, self.to
            )));
        }
        if self.scale == Scale::Log && self.from <= 0.0 {
            return Err(CliError::Config(
                "log-scale sweeps need a positive lower bound".into(),
            ));
        }
        Ok(())
    }

    /// Grid points in input order; a single step collapses to `from`.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.from];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.from + t * (self.to - self.from),
                    Scale::Log => self.from * (self.to / self.from).powf(t),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoOscConfig {
    pub k0: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub n_oscillators: Option<usize>,
    pub k0: Option<f64>,
    pub k1: Option<f64>,
    #[serde(default)]
    pub periodic: bool,
    pub k_matrix: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QgtFamily {
    AvoidedCrossing,
    Oscillator,
    Commuting,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QgtScanConfig {
    pub family: QgtFamily,
    pub delta: Option<f64>,
    pub dim: Option<usize>,
    pub level: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalCompareConfig {
    pub n_oscillators: usize,
    pub k0: f64,
    pub k1: f64,
    pub block: usize,
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let cfg: ScenarioConfig =
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    cfg.validate()?;
    Ok(cfg)
}

impl ScenarioConfig {
    fn require_sweep(&self) -> Result<(), CliError> {
        match &self.sweep {
            Some(s) => s.validate(),
            None => Err(CliError::Config(format!(
                "kind {} needs a [sweep] table",
                self.kind.name()
            ))),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(h) = self.hbar {
            if !(h.is_finite() && h > 0.0) {
                return Err(CliError::Config(format!("hbar must be positive, got {h}")));
            }
        }
        match self.kind {
            Kind::TwoOsc => {
                self.require_sweep()?;
                let two = self.two_osc.as_ref().ok_or_else(|| {
                    CliError::Config("kind two_osc needs a [two_osc] table".into())
                })?;
                if !(two.k0.is_finite() && two.k0 > 0.0) {
                    return Err(CliError::Config(format!(
                        "two_osc.k0 must be positive, got {}",
                        two.k0
                    )));
                }
                if self.sweep.as_ref().is_some_and(|s| s.from < 0.0) {
                    return Err(CliError::Config("two_osc sweeps over k1 >= 0".into()));
                }
            }
            Kind::Chain => {
                let chain = self
                    .chain
                    .as_ref()
                    .ok_or_else(|| CliError::Config("kind chain needs a [chain] table".into()))?;
                chain.validate()?;
            }
            Kind::Qubits => {}
            Kind::QgtScan => {
                self.require_sweep()?;
                let scan = self.qgt_scan.as_ref().ok_or_else(|| {
                    CliError::Config("kind qgt_scan needs a [qgt_scan] table".into())
                })?;
                scan.validate(self.sweep.as_ref().expect("sweep checked above"))?;
            }
            Kind::ClassicalCompare => {
                let cmp = self.classical_compare.as_ref().ok_or_else(|| {
                    CliError::Config(
                        "kind classical_compare needs a [classical_compare] table".into(),
                    )
                })?;
                cmp.validate()?;
            }
        }
        Ok(())
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        match (&self.k_matrix, self.n_oscillators, self.k0, self.k1) {
            (Some(path), None, None, None) => {
                if !path.exists() {
                    return Err(CliError::Config(format!(
                        "coupling matrix file {} does not exist",
                        path.display()
                    )));
                }
                Ok(())
            }
            (None, Some(n), Some(k0), Some(k1)) => {
                if n < 2 {
                    return Err(CliError::Config(format!(
                        "chain needs at least two oscillators, got {n}"
                    )));
                }
                if !(k0.is_finite() && k0 > 0.0) || !(k1.is_finite() && k1 >= 0.0) {
                    return Err(CliError::Config(format!(
                        "chain couplings must satisfy k0 > 0 and k1 >= 0, got k0={k0}, k1={k1}"
                    )));
                }
                Ok(())
            }
            _ => Err(CliError::Config(
                "chain takes either k_matrix or all of n_oscillators, k0, k1".into(),
            )),
        }
    }
}

impl QgtScanConfig {
    pub fn validate(&self, sweep: &SweepConfig) -> Result<(), CliError> {
        match self.family {
            QgtFamily::AvoidedCrossing => {
                let delta = self.delta.ok_or_else(|| {
                    CliError::Config("avoided_crossing needs qgt_scan.delta".into())
                })?;
                if !delta.is_finite() {
                    return Err(CliError::Config("qgt_scan.delta must be finite".into()));
                }
                if self.level.is_some_and(|l| l > 1) {
                    return Err(CliError::Config(
                        "avoided_crossing has levels 0 and 1".into(),
                    ));
                }
            }
            QgtFamily::Oscillator => {
                if sweep.from <= 0.0 {
                    return Err(CliError::Config(
                        "oscillator frequency sweeps need from > 0".into(),
                    ));
                }
                if self.dim.is_some_and(|d| d < 2) {
                    return Err(CliError::Config("oscillator family needs dim >= 2".into()));
                }
            }
            QgtFamily::Commuting => {
                if sweep.from <= -1.0 {
                    return Err(CliError::Config(
                        "commuting family is degenerate at scale -1; sweep from > -1".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl ClassicalCompareConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_oscillators < 2 {
            return Err(CliError::Config(format!(
                "classical comparison needs at least two oscillators, got {}",
                self.n_oscillators
            )));
        }
        if self.block == 0 || self.block > self.n_oscillators {
            return Err(CliError::Config(format!(
                "block size {} must lie in 1..={}",
                self.block, self.n_oscillators
            )));
        }
        if !(self.k0.is_finite() && self.k0 > 0.0) || !(self.k1.is_finite() && self.k1 >= 0.0) {
            return Err(CliError::Config(format!(
                "couplings must satisfy k0 > 0 and k1 >= 0, got k0={}, k1={}",
                self.k0, self.k1
            )));
        }
        Ok(())
    }
}
