//! Trial driver and experiment aggregation.

mod overhead;
mod stats;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::channel::{trial_rng, Channel};
use crate::matrix::ReceptionMatrix;
use crate::protocols::{run_arq, run_dnc, run_jnccr, BudgetExceeded, Network, SlotRecord};
use crate::topology::{build_topology, ConfigError, NetworkConfig};

pub use overhead::{overhead_bits, OverheadScheme};
pub use stats::{aggregate, run_experiment, AggregateStats, ExperimentError};

/// Retransmission slots allowed per trial before giving up.
pub const SLOT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    Arq,
    DncSim,
    JncCr,
}

impl Protocol {
    pub fn tag(self) -> &'static str {
        match self {
            Protocol::Arq => "arq",
            Protocol::DncSim => "dnc",
            Protocol::JncCr => "jnc",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown protocol {0:?} (expected arq, dnc or jnc)")]
pub struct UnknownProtocol(pub String);

impl FromStr for Protocol {
    type Err = UnknownProtocol;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "arq" => Ok(Protocol::Arq),
            "dnc" | "dnc_sim" | "dnc-sim" => Ok(Protocol::DncSim),
            "jnc" | "jnc_cr" | "jnc-cr" | "jnccr" => Ok(Protocol::JncCr),
            _ => Err(UnknownProtocol(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TrialResult {
    pub initial_slots: u64,
    pub stage1_slots: u64,
    pub stage2_slots: u64,
    /// `stage1_slots + stage2_slots`.
    pub retransmissions: u64,
    /// AP transmissions during retransmission; exceeds `retransmissions` by
    /// the number of collided slots.
    pub transmissions: u64,
    pub completed: bool,
}

fn retransmit(net: &mut Network, protocol: Protocol, channel: &mut Channel, budget: u64) -> Result<TrialResult, BudgetExceeded> {
    let mut r = TrialResult::default();
    match protocol {
        Protocol::Arq => {
            r.stage1_slots = run_arq(net, channel, budget)?;
            r.transmissions = r.stage1_slots;
        }
        Protocol::DncSim => {
            r.stage1_slots = run_dnc(net, channel, budget)?;
            r.transmissions = r.stage1_slots;
        }
        Protocol::JncCr => {
            let c = run_jnccr(net, channel, budget)?;
            r.stage1_slots = c.stage1_slots;
            r.stage2_slots = c.stage2_slots;
            r.transmissions = c.transmissions;
        }
    }
    r.retransmissions = r.stage1_slots + r.stage2_slots;
    // the dense baseline only tracks counts, so its receivers finish by construction
    r.completed = protocol == Protocol::DncSim || net.all_complete();
    Ok(r)
}

/// One trial on the stream `cfg.seed ^ trial`: the uncoded batch, then the
/// protocol's retransmissions until every receiver holds its cell's batch.
pub fn run_trial(cfg: &NetworkConfig, protocol: Protocol, trial: u64) -> Result<TrialResult, SimError> {
    run_trial_with_budget(cfg, protocol, trial, SLOT_BUDGET)
}

pub fn run_trial_with_budget(cfg: &NetworkConfig, protocol: Protocol, trial: u64, budget: u64) -> Result<TrialResult, SimError> {
    Ok(run_trial_traced(cfg, protocol, trial, budget, false)?.0)
}

/// Like [`run_trial`], optionally keeping a per-slot trace.
pub fn run_trial_traced(
    cfg: &NetworkConfig,
    protocol: Protocol,
    trial: u64,
    budget: u64,
    trace: bool,
) -> Result<(TrialResult, Vec<SlotRecord>), SimError> {
    let topo = build_topology(cfg)?;
    let mut net = Network::new(topo, cfg.b);
    if trace {
        net.enable_trace();
    }
    let mut channel = Channel::new(cfg.p, trial_rng(cfg.seed, trial));
    let initial = net.initial_phase(&mut channel);
    let mut r = retransmit(&mut net, protocol, &mut channel, budget)?;
    r.initial_slots = initial;
    Ok((r, net.take_trace()))
}

/// Retransmission over a lossless channel starting from a fixed reception
/// matrix. The uncoded batch is not replayed, so `initial_slots` is zero.
pub fn replay_matrix(matrix: &ReceptionMatrix, protocol: Protocol) -> TrialResult {
    replay_traced(matrix, protocol).0
}

pub fn replay_traced(matrix: &ReceptionMatrix, protocol: Protocol) -> (TrialResult, Vec<SlotRecord>) {
    let mut net = matrix.network();
    net.enable_trace();
    let r = retransmit(&mut net, protocol, &mut Channel::lossless(), SLOT_BUDGET)
        .expect("a lossless channel always finishes");
    (r, net.take_trace())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::WORKED_EXAMPLE;

    const ALL: [Protocol; 3] = [Protocol::Arq, Protocol::DncSim, Protocol::JncCr];

    #[test]
    fn worked_example_replay() {
        let m: ReceptionMatrix = WORKED_EXAMPLE.parse().unwrap();
        assert_eq!(replay_matrix(&m, Protocol::Arq).retransmissions, 4);
        assert_eq!(replay_matrix(&m, Protocol::DncSim).retransmissions, 2);
        let jnc = replay_matrix(&m, Protocol::JncCr);
        assert_eq!(jnc.retransmissions, 1);
        assert_eq!(jnc.transmissions, 2);
        assert!(jnc.completed);
    }

    #[test]
    fn lossless_trials_need_no_retransmission() {
        let cfg = NetworkConfig::new(5, 2, 0.0, 20, 1).unwrap();
        for p in ALL {
            let r = run_trial(&cfg, p, 0).unwrap();
            assert_eq!(r.initial_slots, 40);
            assert_eq!(r.retransmissions, 0);
            assert!(r.completed);
        }
    }

    #[test]
    fn trials_are_deterministic() {
        let cfg = NetworkConfig::new(5, 2, 0.2, 10, 9).unwrap();
        for p in ALL {
            assert_eq!(run_trial(&cfg, p, 3).unwrap(), run_trial(&cfg, p, 3).unwrap());
        }
    }

    #[test]
    fn hopeless_channel_hits_budget() {
        let cfg = NetworkConfig::new(2, 1, 1.0, 2, 0).unwrap();
        for p in ALL {
            assert!(matches!(run_trial_with_budget(&cfg, p, 0, 1000), Err(SimError::Budget(_))));
        }
    }

    #[test]
    fn protocol_tags_round_trip() {
        for p in ALL {
            assert_eq!(p.tag().parse::<Protocol>().unwrap(), p);
        }
        assert!("fec".parse::<Protocol>().is_err());
    }
}
