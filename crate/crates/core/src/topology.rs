//! Network configuration and receiver layout.

use std::fmt;

use thiserror::Error;

use crate::coding::Ap;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("N must be at least 1")]
    NoReceivers,
    #[error("M = {m} must satisfy 1 <= M <= N = {n}")]
    OverlapOutOfRange { n: u32, m: u32 },
    #[error("loss probability {0} is outside [0, 1]")]
    LossOutOfRange(f64),
    #[error("batch size must be at least 1")]
    EmptyBatch,
}

/// Parameters of one simulated network: `n` receivers per AP, of which the
/// `m` lowest-numbered sit in the overlap region, uniform loss `p`, batch
/// size `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    pub n: u32,
    pub m: u32,
    pub p: f64,
    pub b: u32,
    pub seed: u64,
}

impl NetworkConfig {
    pub fn new(n: u32, m: u32, p: f64, b: u32, seed: u64) -> Result<Self, ConfigError> {
        let cfg = NetworkConfig { n, m, p, b, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n == 0 {
            return Err(ConfigError::NoReceivers);
        }
        if self.m == 0 || self.m > self.n {
            return Err(ConfigError::OverlapOutOfRange { n: self.n, m: self.m });
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(ConfigError::LossOutOfRange(self.p));
        }
        if self.b == 0 {
            return Err(ConfigError::EmptyBatch);
        }
        Ok(())
    }

    pub fn total_receivers(&self) -> u32 {
        2 * self.n
    }

    pub fn total_overlap(&self) -> u32 {
        2 * self.m
    }
}

/// 1-based receiver number; `1..=N` belong to AP1 and `N+1..=2N` to AP2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReceiverId(pub u32);

impl ReceiverId {
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for ReceiverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReceiverProfile {
    pub id: ReceiverId,
    pub home_ap: Ap,
    pub in_overlap: bool,
}

/// Immutable receiver layout for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    n: u32,
    m: u32,
    receivers: Vec<ReceiverProfile>,
}

impl Topology {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn receivers(&self) -> &[ReceiverProfile] {
        &self.receivers
    }

    pub fn profile(&self, id: ReceiverId) -> &ReceiverProfile {
        &self.receivers[id.index()]
    }

    pub fn home(&self, ap: Ap) -> &[ReceiverProfile] {
        let n = self.n as usize;
        match ap {
            Ap::One => &self.receivers[..n],
            Ap::Two => &self.receivers[n..],
        }
    }

    pub fn overlap(&self, ap: Ap) -> &[ReceiverProfile] {
        &self.home(ap)[..self.m as usize]
    }

    pub fn non_overlap(&self, ap: Ap) -> &[ReceiverProfile] {
        &self.home(ap)[self.m as usize..]
    }

    /// Every receiver that hears `ap`: its own cell plus the other cell's
    /// overlap receivers, in id order.
    pub fn in_range(&self, ap: Ap) -> impl Iterator<Item = &ReceiverProfile> + '_ {
        self.receivers.iter().filter(move |r| r.home_ap == ap || r.in_overlap)
    }

    pub fn all_overlap(&self) -> impl Iterator<Item = &ReceiverProfile> + '_ {
        self.receivers.iter().filter(|r| r.in_overlap)
    }
}

/// Lays out `2N` receivers; in each cell the `M` lowest local indices are in
/// the overlap region.
pub fn build_topology(cfg: &NetworkConfig) -> Result<Topology, ConfigError> {
    cfg.validate()?;
    let receivers = (1..=2 * cfg.n)
        .map(|id| {
            let (home_ap, local) = if id <= cfg.n { (Ap::One, id) } else { (Ap::Two, id - cfg.n) };
            ReceiverProfile { id: ReceiverId(id), home_ap, in_overlap: local <= cfg.m }
        })
        .collect();
    Ok(Topology { n: cfg.n, m: cfg.m, receivers })
}
