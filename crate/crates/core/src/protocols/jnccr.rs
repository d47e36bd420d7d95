//! Joint network coding cooperative retransmission.
//!
//! Stage 1 runs while any receiver outside the overlap still misses packets:
//! each AP picks its XOR set on its own and both transmit at once, so overlap
//! receivers only benefit when they happen to know the interferer's layer.
//! Stage 2 serves the overlap receivers alone, with both APs running the same
//! collide-or-solo rule on the shared overlap state.

use super::ancr::{ancr_decide, Decision, DecisionKind};
use super::benefit::benefit_select;
use super::network::{Network, Phase};
use super::BudgetExceeded;
use crate::channel::Channel;
use crate::coding::{Ap, CodedPacket, JncPacket, KnowledgeState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct JncCrCounts {
    pub stage1_slots: u64,
    pub stage2_slots: u64,
    /// AP transmissions; a collided slot counts both APs.
    pub transmissions: u64,
}

fn send(net: &mut Network, phase: Phase, cands: [Option<CodedPacket>; 2], channel: &mut Channel) -> Option<DecisionKind> {
    match cands {
        [Some(a), Some(b)] => {
            let jp = JncPacket::new(a, b).expect("one candidate per AP");
            net.send_collision(phase, jp, channel);
            Some(DecisionKind::Collide)
        }
        [Some(a), None] => {
            net.send_clean(phase, Ap::One, a, channel);
            Some(DecisionKind::Solo(Ap::One))
        }
        [None, Some(b)] => {
            net.send_clean(phase, Ap::Two, b, channel);
            Some(DecisionKind::Solo(Ap::Two))
        }
        [None, None] => None,
    }
}

/// One non-cooperative slot. Returns what was sent, or `None` if neither AP
/// had anything to send.
///
/// Each AP visits its non-overlap receivers before its overlap receivers, so
/// the coding set always serves an incomplete non-overlap receiver when one
/// exists; otherwise a set serving only overlap receivers that cannot strip
/// the other layer could repeat forever.
pub fn jnccr_stage1_slot(net: &mut Network, channel: &mut Channel) -> Option<DecisionKind> {
    let cands = Ap::BOTH.map(|ap| {
        let topo = net.topology();
        let order = topo.non_overlap(ap).iter().chain(topo.overlap(ap));
        benefit_select(ap, order.map(|r| net.knowledge(r.id)))
    });
    send(net, Phase::Stage1, cands, channel)
}

/// One cooperative slot. Returns `None` once every overlap receiver is
/// complete.
pub fn jnccr_stage2_slot(net: &mut Network, channel: &mut Channel) -> Option<DecisionKind> {
    if net.overlap_complete() {
        return None;
    }
    let cands = Ap::BOTH.map(|ap| benefit_select(ap, net.home_states(ap, true)));
    let decision = match cands {
        [Some(c1), Some(c2)] => {
            let overlap: Vec<(Ap, &KnowledgeState)> =
                net.topology().all_overlap().map(|r| (r.home_ap, net.knowledge(r.id))).collect();
            let innovative = |ap: Ap, c: &CodedPacket| {
                net.home_states(ap, true).iter().filter(|k| k.is_innovative(c)).count()
            };
            let (n1, n2) = (innovative(Ap::One, &c1), innovative(Ap::Two, &c2));
            ancr_decide(&c1, &c2, overlap, channel.loss(), n1, n2)
        }
        other => return send(net, Phase::Stage2, other, channel),
    };
    let kind = decision.kind();
    match decision {
        Decision::Collide(jp) => net.send_collision(Phase::Stage2, jp, channel),
        Decision::SoloXor { ap, packet } => net.send_clean(Phase::Stage2, ap, packet, channel),
    }
    Some(kind)
}

/// Full retransmission phase after the initial batch.
pub fn run_jnccr(net: &mut Network, channel: &mut Channel, budget: u64) -> Result<JncCrCounts, BudgetExceeded> {
    let mut counts = JncCrCounts::default();
    let tick = |counts: &mut JncCrCounts, kind: DecisionKind| {
        counts.transmissions += if kind == DecisionKind::Collide { 2 } else { 1 };
        if counts.stage1_slots + counts.stage2_slots >= budget {
            return Err(BudgetExceeded(budget));
        }
        Ok(())
    };
    while !net.non_overlap_complete() {
        let kind = jnccr_stage1_slot(net, channel).expect("an incomplete receiver gives its AP work");
        counts.stage1_slots += 1;
        tick(&mut counts, kind)?;
    }
    while let Some(kind) = jnccr_stage2_slot(net, channel) {
        counts.stage2_slots += 1;
        tick(&mut counts, kind)?;
    }
    Ok(counts)
}
