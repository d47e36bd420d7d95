//! Dense GF(2) elimination over constituent vectors.
//!
//! This is the reference decoder: it recovers everything linear algebra
//! allows, which the peeling decoder in `knowledge` may not.

use std::collections::BTreeSet;

use super::{Ap, CodedPacket, PacketId};

#[derive(Clone)]
struct Row {
    bits: Vec<u64>,
}

impl Row {
    fn from_seqs(seqs: impl Iterator<Item = u32>, words: usize) -> Row {
        let mut bits = vec![0u64; words];
        for s in seqs {
            let i = (s - 1) as usize;
            bits[i / 64] ^= 1 << (i % 64);
        }
        Row { bits }
    }

    fn get(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor_assign(&mut self, other: &Row) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    fn lowest(&self) -> Option<usize> {
        self.bits
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(wi, w)| wi * 64 + w.trailing_zeros() as usize)
    }

    fn is_zero(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    fn count(&self) -> u32 {
        self.bits.iter().map(|w| w.count_ones()).sum()
    }
}

/// Reduced row echelon basis keyed by pivot column.
struct Basis {
    rows: Vec<(usize, Row)>,
}

impl Basis {
    fn new() -> Self {
        Basis { rows: Vec::new() }
    }

    fn reduce(&self, mut v: Row) -> Row {
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    /// Inserts `v`, keeping the basis fully reduced. Returns false when `v`
    /// was already in the span.
    fn insert(&mut self, v: Row) -> bool {
        let v = self.reduce(v);
        let Some(pivot) = v.lowest() else {
            return false;
        };
        for (_, row) in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&v);
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

fn words_for(max_seq: u32) -> usize {
    (max_seq as usize).div_ceil(64).max(1)
}

/// Native packets whose unit vectors lie in the GF(2) span of `received`.
pub fn gf2_decodable_set<'a, I>(received: I) -> BTreeSet<PacketId>
where
    I: IntoIterator<Item = &'a CodedPacket>,
{
    let received: Vec<&CodedPacket> = received.into_iter().collect();
    let mut out = BTreeSet::new();
    for ap in Ap::BOTH {
        let packets: Vec<&CodedPacket> = received.iter().copied().filter(|p| p.source() == ap).collect();
        let max_seq = packets.iter().flat_map(|p| p.seqs().iter().copied()).max().unwrap_or(0);
        if max_seq == 0 {
            continue;
        }
        let words = words_for(max_seq);
        let mut basis = Basis::new();
        for p in packets {
            basis.insert(Row::from_seqs(p.seqs().iter().copied(), words));
        }
        // In reduced echelon form a unit vector is in the span iff it is a row.
        for (pivot, row) in &basis.rows {
            if row.count() == 1 {
                out.insert(PacketId::new(ap, *pivot as u32 + 1));
            }
        }
    }
    out
}

/// Whether `target` lies in the span of `natives` (as unit vectors) together
/// with `coded`. Packets from the other AP are ignored.
pub fn gf2_in_span<'a, I>(natives: &BTreeSet<PacketId>, coded: I, target: &CodedPacket) -> bool
where
    I: IntoIterator<Item = &'a CodedPacket>,
{
    let ap = target.source();
    let coded: Vec<&CodedPacket> = coded.into_iter().filter(|p| p.source() == ap).collect();
    let max_seq = coded
        .iter()
        .flat_map(|p| p.seqs().iter().copied())
        .chain(natives.iter().filter(|id| id.ap == ap).map(|id| id.seq()))
        .chain(target.seqs().iter().copied())
        .max()
        .unwrap_or(1);
    let words = words_for(max_seq);
    let mut basis = Basis::new();
    for id in natives.iter().filter(|id| id.ap == ap) {
        basis.insert(Row::from_seqs(std::iter::once(id.seq()), words));
    }
    for p in coded {
        basis.insert(Row::from_seqs(p.seqs().iter().copied(), words));
    }
    basis.reduce(Row::from_seqs(target.seqs().iter().copied(), words)).is_zero()
}

/// Span test on raw sequence lists, used by the receiver-side innovation check.
pub(super) fn seqs_in_span(rows: &[Vec<u32>], target: &[u32]) -> bool {
    let max_seq = rows.iter().flatten().chain(target).copied().max().unwrap_or(1);
    let words = words_for(max_seq);
    let mut basis = Basis::new();
    for r in rows {
        basis.insert(Row::from_seqs(r.iter().copied(), words));
    }
    basis.reduce(Row::from_seqs(target.iter().copied(), words)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(seqs: &[u32]) -> CodedPacket {
        CodedPacket::from_seqs(Ap::One, seqs.iter().copied()).unwrap()
    }

    fn ids(seqs: &[u32]) -> BTreeSet<PacketId> {
        seqs.iter().map(|&s| PacketId::new(Ap::One, s)).collect()
    }

    /// Brute force: every subset sum of the received vectors.
    fn brute_force_decodable(received: &[CodedPacket], width: u32) -> BTreeSet<PacketId> {
        let mut out = BTreeSet::new();
        let n = received.len();
        for mask in 1u32..(1 << n) {
            let mut acc = vec![false; width as usize + 1];
            for (i, p) in received.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for &s in p.seqs() {
                        acc[s as usize] ^= true;
                    }
                }
            }
            let ones: Vec<usize> = (1..=width as usize).filter(|&i| acc[i]).collect();
            if ones.len() == 1 {
                out.insert(PacketId::new(Ap::One, ones[0] as u32));
            }
        }
        out
    }

    #[test]
    fn native_plus_pair_decodes_both() {
        let r = [cp(&[1]), cp(&[1, 2])];
        assert_eq!(gf2_decodable_set(&r), ids(&[1, 2]));
    }

    #[test]
    fn rank_two_triangle_decodes_nothing() {
        let r = [cp(&[1, 2]), cp(&[2, 3]), cp(&[1, 3])];
        let expected = brute_force_decodable(&r, 3);
        assert!(expected.is_empty());
        assert_eq!(gf2_decodable_set(&r), expected);
    }

    #[test]
    fn empty_history() {
        assert!(gf2_decodable_set(std::iter::empty()).is_empty());
    }

    #[test]
    fn agrees_with_brute_force_on_all_triples_over_four() {
        let all: Vec<CodedPacket> = (1u32..16)
            .map(|m| cp(&(1..=4).filter(|b| m >> (b - 1) & 1 == 1).collect::<Vec<_>>()))
            .collect();
        for a in 0..all.len() {
            for b in a..all.len() {
                for c in b..all.len() {
                    let r = [all[a].clone(), all[b].clone(), all[c].clone()];
                    assert_eq!(gf2_decodable_set(&r), brute_force_decodable(&r, 4), "{r:?}");
                }
            }
        }
    }

    #[test]
    fn wide_batches_cross_word_boundaries() {
        let r = [cp(&[64, 65, 130]), cp(&[65, 130]), cp(&[130])];
        assert_eq!(gf2_decodable_set(&r), ids(&[64, 65, 130]));
    }

    #[test]
    fn span_membership() {
        assert!(gf2_in_span(&ids(&[1]), [], &cp(&[1])));
        assert!(!gf2_in_span(&ids(&[1]), [], &cp(&[1, 2])));
        assert!(gf2_in_span(&ids(&[]), [&cp(&[1, 2])], &cp(&[2, 1])));
        assert!(gf2_in_span(&ids(&[3]), [&cp(&[1, 2]), &cp(&[2, 3])], &cp(&[1])));
    }
}
