use crate::coding::{Ap, CodedPacket, KnowledgeState};

/// Greedy XOR coding set for one AP.
///
/// Receivers are visited in the order given. A receiver that misses exactly one
/// packet of the set is targeted as is. A receiver that misses none of it
/// contributes its lowest missing packet that every receiver targeted so far
/// already holds, if there is one. Receivers missing two or more are skipped.
/// The result decodes immediately at every targeted receiver, and its size is
/// bounded by the number of receivers considered.
pub fn benefit_select<'a, I>(ap: Ap, receivers: I) -> Option<CodedPacket>
where
    I: IntoIterator<Item = &'a KnowledgeState>,
{
    let mut set: Vec<u32> = Vec::new();
    let mut targeted: Vec<&KnowledgeState> = Vec::new();
    for ks in receivers {
        if ks.is_complete(ap) {
            continue;
        }
        let knows = |k: &KnowledgeState, s: u32| k.is_decoded(crate::coding::PacketId::new(ap, s));
        let unknown_in_set: Vec<u32> = set.iter().copied().filter(|&s| !knows(ks, s)).collect();
        match unknown_in_set.len() {
            0 => {
                // add the lowest missing packet every targeted receiver already has
                if let Some(want) = ks.missing(ap).map(|id| id.seq()).find(|&w| targeted.iter().all(|t| knows(t, w))) {
                    set.push(want);
                    targeted.push(ks);
                }
            }
            1 => targeted.push(ks),
            _ => {}
        }
    }
    if set.is_empty() {
        None
    } else {
        Some(CodedPacket::from_seqs(ap, set).expect("distinct sequence numbers"))
    }
}
