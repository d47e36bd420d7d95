use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use super::gf2::seqs_in_span;
use super::{Ap, CodedPacket, PacketId};

/// What one receiver holds: decoded natives of both APs plus clean coded
/// packets it could not reduce yet.
///
/// Invariant: no buffered packet is fully covered by `decoded`, and every
/// buffered packet misses at least two natives (anything missing one is
/// peeled on arrival).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeState {
    batch: u32,
    decoded: [FixedBitSet; 2],
    buffer: Vec<CodedPacket>,
}

impl KnowledgeState {
    pub fn new(batch: u32) -> Self {
        let bits = FixedBitSet::with_capacity(batch as usize);
        KnowledgeState { batch, decoded: [bits.clone(), bits], buffer: Vec::new() }
    }

    /// A state whose decoded set is exactly `ids` and whose buffer is empty.
    pub fn with_decoded(batch: u32, ids: impl IntoIterator<Item = PacketId>) -> Self {
        let mut ks = KnowledgeState::new(batch);
        for id in ids {
            ks.insert_decoded(id);
        }
        ks
    }

    pub fn batch(&self) -> u32 {
        self.batch
    }

    pub fn is_decoded(&self, id: PacketId) -> bool {
        self.decoded[id.ap.index()].contains(Self::bit(id.seq()))
    }

    pub fn decoded_count(&self, ap: Ap) -> usize {
        self.decoded[ap.index()].count_ones(..)
    }

    pub fn is_complete(&self, ap: Ap) -> bool {
        self.decoded_count(ap) == self.batch as usize
    }

    /// Decoded natives of one AP, in sequence order.
    pub fn decoded(&self, ap: Ap) -> impl Iterator<Item = PacketId> + '_ {
        self.decoded[ap.index()].ones().map(move |i| PacketId::new(ap, i as u32 + 1))
    }

    pub fn decoded_set(&self) -> BTreeSet<PacketId> {
        Ap::BOTH.iter().flat_map(|&ap| self.decoded(ap)).collect()
    }

    pub fn missing(&self, ap: Ap) -> impl Iterator<Item = PacketId> + '_ {
        self.decoded[ap.index()].zeroes().map(move |i| PacketId::new(ap, i as u32 + 1))
    }

    pub fn lowest_missing(&self, ap: Ap) -> Option<PacketId> {
        self.missing(ap).next()
    }

    pub fn buffer(&self) -> &[CodedPacket] {
        &self.buffer
    }

    /// Number of constituents of `cp` not yet decoded.
    pub fn unknown_count(&self, cp: &CodedPacket) -> usize {
        let bits = &self.decoded[cp.source().index()];
        cp.seqs().iter().filter(|&&s| !bits.contains(Self::bit(s))).count()
    }

    /// True iff every constituent is decoded, i.e. the receiver can
    /// regenerate `cp` exactly.
    pub fn can_reconstruct(&self, cp: &CodedPacket) -> bool {
        self.unknown_count(cp) == 0
    }

    /// True iff `cp` lies outside the span of the decoded unit vectors and the
    /// buffered packets.
    pub fn is_innovative(&self, cp: &CodedPacket) -> bool {
        let ap = cp.source();
        let target = self.reduced(cp);
        if target.is_empty() {
            return false;
        }
        let rows: Vec<Vec<u32>> = self
            .buffer
            .iter()
            .filter(|b| b.source() == ap)
            .map(|b| self.reduced(b))
            .collect();
        if rows.is_empty() {
            return true;
        }
        !seqs_in_span(&rows, &target)
    }

    /// Adds a clean coded packet and peels to a fixpoint. Returns the natives
    /// decoded by this call, in order of discovery.
    pub fn absorb_and_peel(&mut self, cp: &CodedPacket) -> Vec<PacketId> {
        let mut newly = Vec::new();
        match self.unknown_count(cp) {
            0 => return newly,
            1 => {
                let id = self.first_unknown(cp);
                self.insert_decoded(id);
                newly.push(id);
            }
            _ => {
                if !self.buffer.contains(cp) {
                    self.buffer.push(cp.clone());
                }
                return newly;
            }
        }
        self.peel(&mut newly);
        newly
    }

    fn peel(&mut self, newly: &mut Vec<PacketId>) {
        loop {
            let mut progressed = false;
            let mut i = 0;
            while i < self.buffer.len() {
                match self.unknown_count(&self.buffer[i]) {
                    0 => {
                        self.buffer.swap_remove(i);
                    }
                    1 => {
                        let cp = self.buffer.swap_remove(i);
                        let id = self.first_unknown(&cp);
                        self.insert_decoded(id);
                        newly.push(id);
                        progressed = true;
                    }
                    _ => i += 1,
                }
            }
            if !progressed {
                break;
            }
        }
        self.buffer.sort_unstable();
    }

    fn first_unknown(&self, cp: &CodedPacket) -> PacketId {
        cp.constituents()
            .find(|id| !self.is_decoded(*id))
            .expect("caller checked an unknown constituent exists")
    }

    fn reduced(&self, cp: &CodedPacket) -> Vec<u32> {
        let bits = &self.decoded[cp.source().index()];
        cp.seqs().iter().copied().filter(|&s| !bits.contains(Self::bit(s))).collect()
    }

    fn insert_decoded(&mut self, id: PacketId) {
        assert!(id.seq() <= self.batch, "packet {id:?} outside batch of {}", self.batch);
        self.decoded[id.ap.index()].insert(Self::bit(id.seq()));
    }

    fn bit(seq: u32) -> usize {
        (seq - 1) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::super::gf2_decodable_set;
    use super::*;
    use proptest::prelude::*;

    fn id(seq: u32) -> PacketId {
        PacketId::new(Ap::One, seq)
    }

    fn cp(seqs: &[u32]) -> CodedPacket {
        CodedPacket::from_seqs(Ap::One, seqs.iter().copied()).unwrap()
    }

    fn ks(decoded: &[u32]) -> KnowledgeState {
        KnowledgeState::with_decoded(8, decoded.iter().map(|&s| id(s)))
    }

    #[test]
    fn reconstruct_requires_every_constituent() {
        let k = KnowledgeState::with_decoded(4, [PacketId::new(Ap::Two, 1), PacketId::new(Ap::Two, 2)]);
        assert!(k.can_reconstruct(&CodedPacket::from_seqs(Ap::Two, [1, 2]).unwrap()));
        assert!(!ks(&[]).can_reconstruct(&cp(&[1])));
        assert!(!ks(&[1]).can_reconstruct(&cp(&[1, 2])));
    }

    #[test]
    fn absorb_decodes_with_side_information() {
        let mut k = ks(&[2]);
        assert_eq!(k.absorb_and_peel(&cp(&[1, 2])), vec![id(1)]);
        assert!(k.buffer().is_empty());
    }

    #[test]
    fn absorb_triggers_peeling_chain() {
        let mut k = ks(&[1]);
        assert!(k.absorb_and_peel(&cp(&[2, 3])).is_empty());
        let history = [cp(&[1]), cp(&[2, 3]), cp(&[1, 2])];
        let newly: BTreeSet<PacketId> = k.absorb_and_peel(&cp(&[1, 2])).into_iter().collect();
        assert_eq!(newly, [id(2), id(3)].into_iter().collect());
        assert_eq!(k.decoded_set(), gf2_decodable_set(&history));
        assert!(k.buffer().is_empty());
    }

    #[test]
    fn absorb_without_side_information_buffers() {
        let mut k = ks(&[]);
        assert!(k.absorb_and_peel(&cp(&[1, 2])).is_empty());
        assert_eq!(k.buffer(), &[cp(&[1, 2])]);
        // duplicates are not buffered twice
        assert!(k.absorb_and_peel(&cp(&[2, 1])).is_empty());
        assert_eq!(k.buffer().len(), 1);
    }

    #[test]
    fn innovation_examples() {
        assert!(!ks(&[1]).is_innovative(&cp(&[1])));
        assert!(ks(&[1]).is_innovative(&cp(&[1, 2])));
        let mut k = ks(&[]);
        k.absorb_and_peel(&cp(&[1, 2]));
        assert!(!k.is_innovative(&cp(&[2, 1])));
        assert!(k.is_innovative(&cp(&[2, 3])));
    }

    #[test]
    fn packets_of_other_ap_do_not_interact() {
        let mut k = ks(&[1]);
        let other = CodedPacket::from_seqs(Ap::Two, [1, 2]).unwrap();
        assert!(k.is_innovative(&other));
        assert!(k.absorb_and_peel(&other).is_empty());
        assert_eq!(k.decoded_count(Ap::Two), 0);
    }

    /// Brute-force span check: enumerate all subset sums of the basis.
    fn brute_in_span(natives: &BTreeSet<PacketId>, coded: &[CodedPacket], target: &CodedPacket) -> bool {
        let mut vectors: Vec<u32> = natives.iter().map(|p| 1 << p.seq()).collect();
        vectors.extend(coded.iter().map(|c| c.seqs().iter().fold(0, |m, s| m | 1 << s)));
        let goal = target.seqs().iter().fold(0u32, |m, s| m | 1 << s);
        (0u32..1 << vectors.len()).any(|mask| {
            vectors.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |acc, (_, v)| acc ^ v) == goal
        })
    }

    fn packet() -> impl Strategy<Value = CodedPacket> {
        proptest::collection::btree_set(1u32..=6, 1..=4).prop_map(|s| CodedPacket::from_seqs(Ap::One, s).unwrap())
    }

    proptest! {
        #[test]
        fn decoded_is_monotone_and_within_oracle(history in proptest::collection::vec(packet(), 0..7)) {
            let mut k = KnowledgeState::new(6);
            let mut prev = BTreeSet::new();
            for (i, p) in history.iter().enumerate() {
                k.absorb_and_peel(p);
                let now = k.decoded_set();
                prop_assert!(prev.is_subset(&now));
                prop_assert!(now.is_subset(&gf2_decodable_set(&history[..=i])));
                prop_assert!(k.buffer().iter().all(|b| k.unknown_count(b) >= 2));
                prev = now;
            }
        }

        #[test]
        fn innovation_matches_brute_force_span(
            history in proptest::collection::vec(packet(), 0..5),
            target in packet(),
        ) {
            let mut k = KnowledgeState::new(6);
            for p in &history {
                k.absorb_and_peel(p);
            }
            let expected = !brute_in_span(&k.decoded_set(), k.buffer(), &target);
            prop_assert_eq!(k.is_innovative(&target), expected);
            let mut probe = k.clone();
            if probe.absorb_and_peel(&target).is_empty() && !expected {
                prop_assert!(!k.is_innovative(&target));
            }
            // a packet that teaches a new native is never redundant
            if !probe.decoded_set().is_subset(&k.decoded_set()) {
                prop_assert!(k.is_innovative(&target) || !k.buffer().is_empty());
            }
        }
    }
}
