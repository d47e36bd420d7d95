//! One-parameter sweeps and the four figure presets.

use std::fmt;
use std::str::FromStr;

use jnc_core::sim::{run_experiment, AggregateStats, ExperimentError, Protocol};
use jnc_core::topology::{ConfigError, NetworkConfig};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    P,
    M,
    N,
    B,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::P => "p",
            Param::M => "M",
            Param::N => "N",
            Param::B => "B",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        match s {
            "p" | "P" => Ok(Param::P),
            "m" | "M" => Ok(Param::M),
            "n" | "N" => Ok(Param::N),
            "b" | "B" => Ok(Param::B),
            other => Err(SpecError::UnknownParam(other.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("unknown sweep parameter {0:?} (expected p, M, N or B)")]
    UnknownParam(String),
    #[error("unknown preset {0:?} (expected fig2, fig3, fig4 or fig5)")]
    UnknownPreset(String),
    #[error("the value list is empty")]
    NoValues,
    #[error("no protocols given")]
    NoProtocols,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("{param} must take whole values, got {value}")]
    NotInteger { param: Param, value: f64 },
    #[error("invalid grid point: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Protocol(#[from] jnc_core::sim::UnknownProtocol),
    #[error("bad spec file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Values held fixed while one parameter is swept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed {
    pub n: u32,
    pub m: u32,
    pub p: f64,
    pub b: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: Param,
    pub values: Vec<f64>,
    pub fixed: Fixed,
    /// When non-empty, the sweep is repeated once per overlap size, giving one
    /// series per protocol and `M`. `fixed.m` is then ignored.
    pub m_series: Vec<u32>,
    pub protocols: Vec<Protocol>,
    pub trials: u64,
    pub seed: u64,
}

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 1;

impl SweepSpec {
    pub fn preset(name: &str) -> Result<Self, SpecError> {
        let protocols = vec![Protocol::DncSim, Protocol::JncCr];
        let base = |param, values: &[f64], fixed, m_series: &[u32]| SweepSpec {
            param,
            values: values.to_vec(),
            fixed,
            m_series: m_series.to_vec(),
            protocols: protocols.clone(),
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
        };
        Ok(match name {
            "fig2" => base(
                Param::P,
                &[0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
                Fixed { n: 5, m: 2, p: 0.1, b: 20 },
                &[2, 5],
            ),
            "fig3" => base(
                Param::M,
                &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0],
                Fixed { n: 10, m: 1, p: 0.1, b: 20 },
                &[],
            ),
            "fig4" => base(Param::N, &[2.0, 5.0, 10.0, 15.0], Fixed { n: 5, m: 2, p: 0.1, b: 20 }, &[]),
            "fig5" => base(Param::B, &[10.0, 20.0, 40.0, 80.0], Fixed { n: 5, m: 2, p: 0.1, b: 20 }, &[]),
            other => return Err(SpecError::UnknownPreset(other.to_string())),
        })
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let raw: SpecFile = serde_json::from_str(text)?;
        let spec = SweepSpec {
            param: raw.param.parse()?,
            values: raw.values,
            fixed: Fixed { n: raw.n, m: raw.m, p: raw.p, b: raw.b },
            m_series: raw.m_series,
            protocols: raw.protocols.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
            trials: raw.trials,
            seed: raw.seed,
        };
        spec.grid()?;
        Ok(spec)
    }

    fn ms(&self) -> Vec<u32> {
        if self.m_series.is_empty() {
            vec![self.fixed.m]
        } else {
            self.m_series.clone()
        }
    }

    /// Every grid point, grouped by series `M` and then in value order.
    /// Fails if the spec is empty or any point is not a valid network.
    pub fn grid(&self) -> Result<Vec<NetworkConfig>, SpecError> {
        if self.values.is_empty() {
            return Err(SpecError::NoValues);
        }
        if self.protocols.is_empty() {
            return Err(SpecError::NoProtocols);
        }
        if self.trials == 0 {
            return Err(SpecError::NoTrials);
        }
        let mut out = Vec::new();
        for m in self.ms() {
            for &v in &self.values {
                let whole = || {
                    if v.fract() == 0.0 && v >= 0.0 && v <= u32::MAX as f64 {
                        Ok(v as u32)
                    } else {
                        Err(SpecError::NotInteger { param: self.param, value: v })
                    }
                };
                let Fixed { mut n, p, mut b, .. } = self.fixed;
                let mut m = m;
                let mut p = p;
                match self.param {
                    Param::P => p = v,
                    Param::M => m = whole()?,
                    Param::N => n = whole()?,
                    Param::B => b = whole()?,
                }
                out.push(NetworkConfig::new(n, m, p, b, self.seed)?);
            }
        }
        Ok(out)
    }

    pub fn x_of(&self, cfg: &NetworkConfig) -> f64 {
        match self.param {
            Param::P => cfg.p,
            Param::M => cfg.m as f64,
            Param::N => cfg.n as f64,
            Param::B => cfg.b as f64,
        }
    }

    /// Whether series need `M` in their label.
    pub fn labels_m(&self) -> bool {
        self.m_series.len() > 1
    }

    pub fn run(&self) -> Result<Vec<AggregateStats>, RunError> {
        let grid = self.grid()?;
        Ok(run_experiment(&grid, &self.protocols, self.trials, self.seed)?)
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    param: String,
    values: Vec<f64>,
    n: u32,
    m: u32,
    p: f64,
    b: u32,
    #[serde(default)]
    m_series: Vec<u32>,
    #[serde(default = "default_protocols")]
    protocols: Vec<String>,
    #[serde(default = "default_trials")]
    trials: u64,
    #[serde(default = "default_seed")]
    seed: u64,
}

fn default_protocols() -> Vec<String> {
    vec!["dnc".into(), "jnc".into()]
}

fn default_trials() -> u64 {
    DEFAULT_TRIALS
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}
