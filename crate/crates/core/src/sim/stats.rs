use rayon::prelude::*;
use thiserror::Error;

use super::{run_trial, Protocol, SimError, TrialResult};
use crate::topology::NetworkConfig;

/// Summary of `trials` runs of one protocol at one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateStats {
    pub protocol: Protocol,
    pub config: NetworkConfig,
    pub trials: u64,
    pub mean_retx: f64,
    /// Half-width of a normal-approximation 95% interval on `mean_retx`.
    pub ci95: f64,
    /// All slots, initial batch included, per packet per AP.
    pub mean_tx_per_packet: f64,
    pub mean_stage1: f64,
    pub mean_stage2: f64,
    pub mean_ap_transmissions: f64,
}

/// Folds trial results in the given order.
pub fn aggregate(protocol: Protocol, config: NetworkConfig, results: &[TrialResult]) -> AggregateStats {
    assert!(!results.is_empty(), "at least one trial");
    let n = results.len() as f64;
    let mean = |f: fn(&TrialResult) -> f64| results.iter().map(f).sum::<f64>() / n;
    let mean_retx = mean(|r| r.retransmissions as f64);
    let ci95 = if results.len() > 1 {
        let var = results.iter().map(|r| (r.retransmissions as f64 - mean_retx).powi(2)).sum::<f64>() / (n - 1.0);
        1.96 * (var / n).sqrt()
    } else {
        0.0
    };
    let per_packet = 2.0 * config.b as f64;
    AggregateStats {
        protocol,
        config,
        trials: results.len() as u64,
        mean_retx,
        ci95,
        mean_tx_per_packet: mean(|r| (r.initial_slots + r.retransmissions) as f64) / per_packet,
        mean_stage1: mean(|r| r.stage1_slots as f64),
        mean_stage2: mean(|r| r.stage2_slots as f64),
        mean_ap_transmissions: mean(|r| r.transmissions as f64),
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{protocol} at N={} M={} p={} B={}: {source}", config.n, config.m, config.p, config.b)]
pub struct ExperimentError {
    pub protocol: Protocol,
    pub config: NetworkConfig,
    #[source]
    pub source: SimError,
}

/// Runs every protocol at every grid point, `trials` times each. Trial `t`
/// uses stream `seed ^ t` for all protocols, so comparisons are paired.
/// Trials run on the current rayon pool; results are reduced in trial order,
/// so output does not depend on the thread count.
pub fn run_experiment(
    grid: &[NetworkConfig],
    protocols: &[Protocol],
    trials: u64,
    seed: u64,
) -> Result<Vec<AggregateStats>, ExperimentError> {
    assert!(trials >= 1, "at least one trial");
    let mut out = Vec::with_capacity(grid.len() * protocols.len());
    for point in grid {
        let config = NetworkConfig { seed, ..*point };
        for &protocol in protocols {
            let results: Vec<TrialResult> = (0..trials)
                .into_par_iter()
                .map(|t| run_trial(&config, protocol, t))
                .collect::<Result<_, _>>()
                .map_err(|source| ExperimentError { protocol, config, source })?;
            out.push(aggregate(protocol, config, &results));
        }
    }
    Ok(out)
}
