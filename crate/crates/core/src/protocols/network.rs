use std::fmt;

use crate::channel::Channel;
use crate::coding::{anc_decode, Ap, CodedPacket, JncPacket, KnowledgeState, PacketId};
use crate::topology::{ReceiverId, ReceiverProfile, Topology};

/// Which part of a trial a slot belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Initial,
    Arq,
    Dnc,
    Stage1,
    Stage2,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Phase::Initial => "initial",
            Phase::Arq => "arq",
            Phase::Dnc => "dnc",
            Phase::Stage1 => "stage1",
            Phase::Stage2 => "stage2",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transmission {
    Clean { ap: Ap, packet: CodedPacket },
    Collision(JncPacket),
    /// A random combination over an unbounded field; always innovative.
    Dense { ap: Ap },
}

impl Transmission {
    /// AP transmissions in this slot (a collision uses both APs).
    pub fn ap_count(&self) -> u64 {
        match self {
            Transmission::Collision(_) => 2,
            _ => 1,
        }
    }
}

/// One slot of a traced run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlotRecord {
    pub phase: Phase,
    pub tx: Transmission,
    /// Clean packets each receiver took in, including layers recovered from a
    /// collision.
    pub absorbed: Vec<(ReceiverId, CodedPacket)>,
    pub decoded: Vec<(ReceiverId, Vec<PacketId>)>,
    /// Receivers credited with an innovative dense packet.
    pub dense_hits: Vec<ReceiverId>,
}

impl SlotRecord {
    fn new(phase: Phase, tx: Transmission) -> Self {
        SlotRecord { phase, tx, absorbed: Vec::new(), decoded: Vec::new(), dense_hits: Vec::new() }
    }
}

/// Receiver knowledge for both cells of one trial, plus the delivery rules
/// for clean and collided slots.
#[derive(Debug, Clone)]
pub struct Network {
    topo: Topology,
    batch: u32,
    receivers: Vec<KnowledgeState>,
    trace: Option<Vec<SlotRecord>>,
}

impl Network {
    pub fn new(topo: Topology, batch: u32) -> Self {
        let receivers = vec![KnowledgeState::new(batch); topo.receivers().len()];
        Network { topo, batch, receivers, trace: None }
    }

    /// Panics unless there is one state per receiver, each sized to `batch`.
    pub fn from_states(topo: Topology, batch: u32, receivers: Vec<KnowledgeState>) -> Self {
        assert_eq!(receivers.len(), topo.receivers().len(), "one knowledge state per receiver");
        assert!(receivers.iter().all(|k| k.batch() == batch), "knowledge states sized to the batch");
        Network { topo, batch, receivers, trace: None }
    }

    pub fn enable_trace(&mut self) {
        self.trace.get_or_insert_with(Vec::new);
    }

    pub fn take_trace(&mut self) -> Vec<SlotRecord> {
        self.trace.take().unwrap_or_default()
    }

    pub fn topology(&self) -> &Topology {
        &self.topo
    }

    pub fn batch(&self) -> u32 {
        self.batch
    }

    pub fn knowledge(&self, id: ReceiverId) -> &KnowledgeState {
        &self.receivers[id.index()]
    }

    pub fn knowledge_mut(&mut self, id: ReceiverId) -> &mut KnowledgeState {
        &mut self.receivers[id.index()]
    }

    pub fn receiver_complete(&self, r: &ReceiverProfile) -> bool {
        self.knowledge(r.id).is_complete(r.home_ap)
    }

    pub fn non_overlap_complete(&self) -> bool {
        Ap::BOTH.iter().all(|&ap| self.topo.non_overlap(ap).iter().all(|r| self.receiver_complete(r)))
    }

    pub fn overlap_complete(&self) -> bool {
        self.topo.all_overlap().all(|r| self.receiver_complete(r))
    }

    pub fn all_complete(&self) -> bool {
        self.topo.receivers().iter().all(|r| self.receiver_complete(r))
    }

    pub fn ap_state(&self, ap: Ap) -> ApState<'_> {
        ApState { ap, net: self }
    }

    /// States of `ap`'s home receivers, overlap receivers only if
    /// `overlap_only`.
    pub fn home_states(&self, ap: Ap, overlap_only: bool) -> Vec<&KnowledgeState> {
        let rs = if overlap_only { self.topo.overlap(ap) } else { self.topo.home(ap) };
        rs.iter().map(|r| self.knowledge(r.id)).collect()
    }

    /// The uncoded batch: APs take turns sending their natives, `2B` slots.
    pub fn initial_phase(&mut self, channel: &mut Channel) -> u64 {
        for seq in 1..=self.batch {
            for ap in Ap::BOTH {
                let packet = CodedPacket::native(PacketId::new(ap, seq));
                self.send_clean(Phase::Initial, ap, packet, channel);
            }
        }
        2 * self.batch as u64
    }

    /// Collision-free transmission by `ap`: its own cell and the other cell's
    /// overlap receivers each hear it with probability `1 - p`.
    pub fn send_clean(&mut self, phase: Phase, ap: Ap, packet: CodedPacket, channel: &mut Channel) {
        let mut record = self.trace.as_ref().map(|_| SlotRecord::new(phase, Transmission::Clean { ap, packet: packet.clone() }));
        for i in 0..self.receivers.len() {
            let r = self.topo.receivers()[i];
            if r.home_ap != ap && !r.in_overlap {
                continue;
            }
            if channel.clean_arrives() {
                self.absorb(r.id, &packet, record.as_mut());
            }
        }
        if let (Some(trace), Some(record)) = (self.trace.as_mut(), record) {
            trace.push(record);
        }
    }

    /// Both APs transmit at once. Receivers outside the overlap only hear
    /// their own AP's layer; overlap receivers get the collision with
    /// probability `(1 - p)^2` and recover a layer only if they can
    /// regenerate exactly the other one right now.
    pub fn send_collision(&mut self, phase: Phase, jp: JncPacket, channel: &mut Channel) {
        let mut record = self.trace.as_ref().map(|_| SlotRecord::new(phase, Transmission::Collision(jp.clone())));
        for i in 0..self.receivers.len() {
            let r = self.topo.receivers()[i];
            if !r.in_overlap {
                if channel.clean_arrives() {
                    self.absorb(r.id, jp.layer(r.home_ap), record.as_mut());
                }
                continue;
            }
            if !channel.collided_arrives() {
                continue;
            }
            if let Some(layer) = collision_yield(self.knowledge(r.id), &jp) {
                self.absorb(r.id, &layer, record.as_mut());
            }
        }
        if let (Some(trace), Some(record)) = (self.trace.as_mut(), record) {
            trace.push(record);
        }
    }

    pub(crate) fn push_record(&mut self, record: SlotRecord) {
        if let Some(trace) = self.trace.as_mut() {
            trace.push(record);
        }
    }

    pub(crate) fn tracing(&self) -> bool {
        self.trace.is_some()
    }

    fn absorb(&mut self, id: ReceiverId, packet: &CodedPacket, record: Option<&mut SlotRecord>) {
        let newly = self.receivers[id.index()].absorb_and_peel(packet);
        if let Some(record) = record {
            record.absorbed.push((id, packet.clone()));
            if !newly.is_empty() {
                record.decoded.push((id, newly));
            }
        }
    }
}

/// The layer a receiver with knowledge `ks` recovers from `jp`, if any.
pub fn collision_yield(ks: &KnowledgeState, jp: &JncPacket) -> Option<CodedPacket> {
    let known: Vec<Ap> = Ap::BOTH.into_iter().filter(|&ap| ks.can_reconstruct(jp.layer(ap))).collect();
    match known.as_slice() {
        [ap] => anc_decode(jp, jp.layer(*ap)).ok(),
        _ => None,
    }
}

/// Reception status of one (receiver, packet) pair, as in the worked
/// example's transmission matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reception {
    Received,
    Lost,
    OutOfRange,
}

/// What an AP knows through feedback: the reception status of its own
/// receivers, and of every overlap receiver via superimposed ACKs.
#[derive(Debug, Clone, Copy)]
pub struct ApState<'a> {
    ap: Ap,
    net: &'a Network,
}

impl<'a> ApState<'a> {
    pub fn ap(&self) -> Ap {
        self.ap
    }

    fn status(&self, r: &ReceiverProfile, id: PacketId) -> Reception {
        if r.home_ap != id.ap && !r.in_overlap {
            Reception::OutOfRange
        } else if self.net.knowledge(r.id).is_decoded(id) {
            Reception::Received
        } else {
            Reception::Lost
        }
    }

    /// Home receivers x this AP's packets.
    pub fn reception_matrix(&self) -> Vec<(ReceiverId, Vec<Reception>)> {
        self.net
            .topo
            .home(self.ap)
            .iter()
            .map(|r| (r.id, (1..=self.net.batch).map(|s| self.status(r, PacketId::new(self.ap, s))).collect()))
            .collect()
    }

    /// Every overlap receiver x both APs' packets. Identical at both APs.
    pub fn overlap_matrix(&self) -> Vec<(ReceiverId, Vec<Reception>)> {
        self.net
            .topo
            .all_overlap()
            .map(|r| {
                let row = Ap::BOTH
                    .iter()
                    .flat_map(|&ap| (1..=self.net.batch).map(move |s| PacketId::new(ap, s)))
                    .map(|id| self.status(r, id))
                    .collect();
                (r.id, row)
            })
            .collect()
    }
}
