//! Completed trials leave every receiver with its full batch, and everything
//! it decoded is justified by Gaussian elimination over what it absorbed.

use std::collections::BTreeSet;

use jnc_core::coding::{gf2_decodable_set, CodedPacket, PacketId};
use jnc_core::sim::{run_trial_traced, Protocol, SLOT_BUDGET};
use jnc_core::topology::{build_topology, NetworkConfig};

fn check(cfg: NetworkConfig, protocol: Protocol, trial: u64) {
    let (result, trace) = run_trial_traced(&cfg, protocol, trial, SLOT_BUDGET, true).unwrap();
    assert!(result.completed);
    assert_eq!(result.initial_slots, 2 * cfg.b as u64);
    assert_eq!(result.retransmissions, result.stage1_slots + result.stage2_slots);
    let topo = build_topology(&cfg).unwrap();
    for r in topo.receivers() {
        let absorbed: Vec<&CodedPacket> = trace
            .iter()
            .flat_map(|rec| rec.absorbed.iter())
            .filter(|(id, _)| *id == r.id)
            .map(|(_, p)| p)
            .collect();
        let decoded: BTreeSet<PacketId> = trace
            .iter()
            .flat_map(|rec| rec.decoded.iter())
            .filter(|(id, _)| *id == r.id)
            .flat_map(|(_, ids)| ids.iter().copied())
            .collect();
        let oracle = gf2_decodable_set(absorbed);
        assert!(decoded.is_subset(&oracle), "{} decoded beyond its span", r.id);
        for seq in 1..=cfg.b {
            assert!(decoded.contains(&PacketId::new(r.home_ap, seq)), "{} misses seq {seq}", r.id);
        }
    }
}

#[test]
fn jnccr_trials_complete_correctly() {
    for (n, m, p, b) in [(3, 1, 0.2, 6), (4, 4, 0.3, 5), (5, 2, 0.1, 10), (2, 2, 0.5, 4)] {
        let cfg = NetworkConfig::new(n, m, p, b, 17).unwrap();
        for trial in 0..40 {
            check(cfg, Protocol::JncCr, trial);
        }
    }
}

#[test]
fn arq_trials_complete_correctly() {
    let cfg = NetworkConfig::new(4, 2, 0.3, 6, 3).unwrap();
    for trial in 0..40 {
        check(cfg, Protocol::Arq, trial);
    }
}
