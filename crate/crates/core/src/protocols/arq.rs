use std::collections::VecDeque;

use super::network::{Network, Phase};
use super::BudgetExceeded;
use crate::channel::Channel;
use crate::coding::{Ap, CodedPacket, PacketId};
use crate::topology::ReceiverId;

/// Plain retransmission: every (receiver, packet) loss is served by resending
/// that native until the receiver has it. APs alternate slots. A resend is
/// still a broadcast, so it also clears the same loss at other receivers.
pub fn run_arq(net: &mut Network, channel: &mut Channel, budget: u64) -> Result<u64, BudgetExceeded> {
    let mut queues: [VecDeque<(PacketId, ReceiverId)>; 2] = Ap::BOTH.map(|ap| {
        let mut pairs = Vec::new();
        for seq in 1..=net.batch() {
            let id = PacketId::new(ap, seq);
            for r in net.topology().home(ap) {
                if !net.knowledge(r.id).is_decoded(id) {
                    pairs.push((id, r.id));
                }
            }
        }
        pairs.into()
    });
    let mut slots = 0u64;
    let mut turn = Ap::One;
    loop {
        for q in queues.iter_mut() {
            while q.front().is_some_and(|(id, r)| net.knowledge(*r).is_decoded(*id)) {
                q.pop_front();
            }
        }
        let ap = if !queues[turn.index()].is_empty() {
            turn
        } else if !queues[turn.other().index()].is_empty() {
            turn.other()
        } else {
            break;
        };
        if slots >= budget {
            return Err(BudgetExceeded(budget));
        }
        let (id, _) = *queues[ap.index()].front().expect("checked non-empty");
        net.send_clean(Phase::Arq, ap, CodedPacket::native(id), channel);
        slots += 1;
        turn = ap.other();
    }
    Ok(slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::trial_rng;
    use crate::coding::KnowledgeState;
    use crate::topology::{build_topology, NetworkConfig};

    fn net_with_losses(n: u32, b: u32, losses: &[(u32, u32)]) -> Network {
        let topo = build_topology(&NetworkConfig { n, m: 1, p: 0.0, b, seed: 0 }).unwrap();
        let states = topo
            .receivers()
            .iter()
            .map(|r| {
                KnowledgeState::with_decoded(
                    b,
                    (1..=b)
                        .filter(|&s| !losses.contains(&(r.id.0, s)))
                        .map(|s| PacketId::new(r.home_ap, s)),
                )
            })
            .collect();
        Network::from_states(topo, b, states)
    }

    #[test]
    fn no_losses_no_slots() {
        let mut net = net_with_losses(2, 3, &[]);
        assert_eq!(run_arq(&mut net, &mut Channel::lossless(), 100).unwrap(), 0);
    }

    #[test]
    fn one_loss_one_slot() {
        let mut net = net_with_losses(2, 3, &[(3, 2)]);
        assert_eq!(run_arq(&mut net, &mut Channel::lossless(), 100).unwrap(), 1);
        assert!(net.all_complete());
    }

    #[test]
    fn shared_loss_served_once() {
        let mut net = net_with_losses(2, 3, &[(1, 2), (2, 2)]);
        assert_eq!(run_arq(&mut net, &mut Channel::lossless(), 100).unwrap(), 1);
    }

    #[test]
    fn lossy_channel_eventually_completes() {
        let mut net = net_with_losses(3, 4, &[(1, 1), (2, 3), (5, 4), (6, 1)]);
        let mut ch = Channel::new(0.4, trial_rng(5, 0));
        assert!(run_arq(&mut net, &mut ch, 10_000).unwrap() >= 4);
        assert!(net.all_complete());
    }

    #[test]
    fn budget_is_enforced() {
        let mut net = net_with_losses(2, 3, &[(1, 1)]);
        let mut ch = Channel::new(1.0, trial_rng(5, 0));
        assert_eq!(run_arq(&mut net, &mut ch, 50), Err(BudgetExceeded(50)));
    }
}
