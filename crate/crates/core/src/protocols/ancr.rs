//! Cooperative collide-or-not decision run identically at both APs.

use crate::coding::{Ap, CodedPacket, JncPacket, KnowledgeState};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// Both APs transmit their candidates in the same slot.
    Collide(JncPacket),
    /// Only `ap` transmits, collision-free.
    SoloXor { ap: Ap, packet: CodedPacket },
}

impl Decision {
    pub fn kind(&self) -> DecisionKind {
        match self {
            Decision::Collide(_) => DecisionKind::Collide,
            Decision::SoloXor { ap, .. } => DecisionKind::Solo(*ap),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionKind {
    Collide,
    Solo(Ap),
}

/// Expected number of receivers served by each option.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Benefits {
    pub collision: f64,
    pub solo: [f64; 2],
}

impl Benefits {
    pub fn new(collision_decoding: usize, innovative: [usize; 2], p: f64) -> Self {
        let q = 1.0 - p;
        Benefits {
            collision: collision_decoding as f64 * q * q,
            solo: [innovative[0] as f64 * q, innovative[1] as f64 * q],
        }
    }

    pub fn scaled(self, k: f64) -> Self {
        Benefits { collision: self.collision * k, solo: [self.solo[0] * k, self.solo[1] * k] }
    }

    pub fn xor_benefit(&self) -> f64 {
        self.solo[0].max(self.solo[1])
    }

    /// Collide only on a strict win; otherwise the larger solo benefit, AP1 on
    /// ties.
    pub fn decide(&self) -> DecisionKind {
        if self.collision > self.xor_benefit() {
            DecisionKind::Collide
        } else if self.solo[1] > self.solo[0] {
            DecisionKind::Solo(Ap::Two)
        } else {
            DecisionKind::Solo(Ap::One)
        }
    }
}

/// Counts overlap receivers that would recover one of their own missing
/// packets from `cand1 ⊙ cand2`: they regenerate the interferer's layer and
/// their home layer is innovative for them.
pub fn collision_decoders<'a, I>(cand1: &CodedPacket, cand2: &CodedPacket, overlap: I) -> usize
where
    I: IntoIterator<Item = (Ap, &'a KnowledgeState)>,
{
    let cands = [cand1, cand2];
    overlap
        .into_iter()
        .filter(|(home, ks)| {
            let own = cands[home.index()];
            let other = cands[home.other().index()];
            ks.can_reconstruct(other) && ks.is_innovative(own)
        })
        .count()
}

/// The cooperative decision. `overlap` lists every overlap receiver with its
/// home AP; `n1`/`n2` count receivers for which each candidate is innovative.
pub fn ancr_decide<'a, I>(cand1: &CodedPacket, cand2: &CodedPacket, overlap: I, p: f64, n1: usize, n2: usize) -> Decision
where
    I: IntoIterator<Item = (Ap, &'a KnowledgeState)>,
{
    debug_assert_eq!(cand1.source(), Ap::One);
    debug_assert_eq!(cand2.source(), Ap::Two);
    let decoders = collision_decoders(cand1, cand2, overlap);
    match Benefits::new(decoders, [n1, n2], p).decide() {
        DecisionKind::Collide => {
            Decision::Collide(JncPacket::new(cand1.clone(), cand2.clone()).expect("one candidate per AP"))
        }
        DecisionKind::Solo(Ap::One) => Decision::SoloXor { ap: Ap::One, packet: cand1.clone() },
        DecisionKind::Solo(Ap::Two) => Decision::SoloXor { ap: Ap::Two, packet: cand2.clone() },
    }
}
