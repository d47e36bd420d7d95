//! Symbolic packet coding: the per-AP XOR layer and the cross-AP collision
//! layer.
//!
//! Packets are never materialized as payload bytes. A coded packet is the set
//! of native packets it combines, which is all a receiver needs to know in
//! order to regenerate or peel it.

mod gf2;
mod knowledge;

use std::fmt;

use thiserror::Error;

pub use gf2::{gf2_decodable_set, gf2_in_span};
pub use knowledge::KnowledgeState;

/// One of the two interfering access points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ap {
    One,
    Two,
}

impl Ap {
    pub const BOTH: [Ap; 2] = [Ap::One, Ap::Two];

    /// Zero-based index, handy for `[T; 2]` tables.
    pub fn index(self) -> usize {
        match self {
            Ap::One => 0,
            Ap::Two => 1,
        }
    }

    pub fn number(self) -> u32 {
        self.index() as u32 + 1
    }

    pub fn other(self) -> Ap {
        match self {
            Ap::One => Ap::Two,
            Ap::Two => Ap::One,
        }
    }

    pub fn from_number(n: u32) -> Option<Ap> {
        match n {
            1 => Some(Ap::One),
            2 => Some(Ap::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Ap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AP{}", self.number())
    }
}

/// A native packet: the owning AP plus its 1-based position in the batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PacketId {
    pub ap: Ap,
    seq: u32,
}

impl PacketId {
    /// Panics if `seq` is zero; sequence numbers start at 1.
    pub fn new(ap: Ap, seq: u32) -> Self {
        assert!(seq >= 1, "packet sequence numbers start at 1");
        PacketId { ap, seq }
    }

    pub fn seq(self) -> u32 {
        self.seq
    }

    /// Label in the worked-example numbering, where AP1 owns `c1..cB` and AP2
    /// owns `c(B+1)..c(2B)`.
    pub fn label(self, batch: u32) -> String {
        match self.ap {
            Ap::One => format!("c{}", self.seq),
            Ap::Two => format!("c{}", batch + self.seq),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("XOR combination has no constituents")]
    EmptyCombination,
    #[error("cannot XOR packets from different access points")]
    MixedSource,
    #[error("known packet matches neither layer of the collision")]
    UnknownLayer,
}

/// A GF(2) combination of native packets from a single AP.
///
/// Constituents are kept as a sorted, duplicate-free list of sequence
/// numbers, so structural equality is set equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodedPacket {
    source: Ap,
    seqs: Vec<u32>,
}

impl CodedPacket {
    pub fn native(id: PacketId) -> Self {
        CodedPacket { source: id.ap, seqs: vec![id.seq] }
    }

    /// Builds a packet from sequence numbers of one AP. Duplicates cancel in
    /// pairs, as XOR would.
    pub fn from_seqs(source: Ap, seqs: impl IntoIterator<Item = u32>) -> Result<Self, CodingError> {
        let mut v: Vec<u32> = Vec::new();
        for s in seqs {
            assert!(s >= 1, "packet sequence numbers start at 1");
            v.push(s);
        }
        v.sort_unstable();
        let mut out: Vec<u32> = Vec::with_capacity(v.len());
        for s in v {
            if out.last() == Some(&s) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        if out.is_empty() {
            return Err(CodingError::EmptyCombination);
        }
        Ok(CodedPacket { source, seqs: out })
    }

    pub fn source(&self) -> Ap {
        self.source
    }

    /// Sorted constituent sequence numbers.
    pub fn seqs(&self) -> &[u32] {
        &self.seqs
    }

    pub fn constituents(&self) -> impl Iterator<Item = PacketId> + '_ {
        self.seqs.iter().map(move |&seq| PacketId { ap: self.source, seq })
    }

    /// Cardinality `k` of the combination.
    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn contains(&self, id: PacketId) -> bool {
        id.ap == self.source && self.seqs.binary_search(&id.seq).is_ok()
    }

    /// XOR with another packet of the same AP (symmetric difference of the
    /// constituent sets).
    pub fn xor(&self, other: &CodedPacket) -> Result<CodedPacket, CodingError> {
        if self.source != other.source {
            return Err(CodingError::MixedSource);
        }
        let (a, b) = (&self.seqs, &other.seqs);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        if out.is_empty() {
            return Err(CodingError::EmptyCombination);
        }
        Ok(CodedPacket { source: self.source, seqs: out })
    }

    pub fn display(&self, batch: u32) -> String {
        let labels: Vec<String> = self.constituents().map(|id| id.label(batch)).collect();
        if labels.len() == 1 {
            labels.into_iter().next().unwrap()
        } else {
            format!("({})", labels.join("⊕"))
        }
    }
}

/// XOR-combines a set of native packets that all belong to one AP.
pub fn xor_combine<I>(ids: I) -> Result<CodedPacket, CodingError>
where
    I: IntoIterator<Item = PacketId>,
{
    let mut source = None;
    let mut seqs = Vec::new();
    for id in ids {
        match source {
            None => source = Some(id.ap),
            Some(ap) if ap != id.ap => return Err(CodingError::MixedSource),
            Some(_) => {}
        }
        seqs.push(id.seq);
    }
    let source = source.ok_or(CodingError::EmptyCombination)?;
    CodedPacket::from_seqs(source, seqs)
}

/// Two coded packets, one from each AP, transmitted simultaneously.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JncPacket {
    layers: [CodedPacket; 2],
}

impl JncPacket {
    /// Accepts the layers in either order and stores them AP1 first.
    pub fn new(a: CodedPacket, b: CodedPacket) -> Result<Self, CodingError> {
        match (a.source, b.source) {
            (Ap::One, Ap::Two) => Ok(JncPacket { layers: [a, b] }),
            (Ap::Two, Ap::One) => Ok(JncPacket { layers: [b, a] }),
            _ => Err(CodingError::MixedSource),
        }
    }

    pub fn layer(&self, ap: Ap) -> &CodedPacket {
        &self.layers[ap.index()]
    }

    pub fn display(&self, batch: u32) -> String {
        format!("{}⊙{}", wrap(self.layers[0].display(batch)), wrap(self.layers[1].display(batch)))
    }
}

fn wrap(s: String) -> String {
    if s.starts_with('(') {
        s
    } else {
        format!("({s})")
    }
}

/// Strips a known layer from a collision and returns the other one.
pub fn anc_decode(jp: &JncPacket, known: &CodedPacket) -> Result<CodedPacket, CodingError> {
    let ap = known.source;
    if jp.layer(ap) == known {
        Ok(jp.layer(ap.other()).clone())
    } else {
        Err(CodingError::UnknownLayer)
    }
}
