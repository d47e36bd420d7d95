//! Optimal digital network coding baseline, with an unbounded field so that
//! every coded packet a receiver gets is innovative.

use rand::Rng;
use thiserror::Error;

use super::network::{Network, Phase, SlotRecord, Transmission};
use super::BudgetExceeded;
use crate::channel::Channel;
use crate::coding::Ap;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DncError {
    #[error("expected transmissions diverge at p = 1")]
    DivergentExpectation,
    #[error("invalid arguments: need N >= 1, B >= 1 and 0 <= p <= 1")]
    InvalidArgument,
}

const TAIL_CUTOFF: f64 = 1e-12;

/// Expected number of transmissions one AP needs to get `b` packets to all
/// `n` receivers when every reception is innovative:
/// `sum_{t>=0} 1 - P(Bin(t, 1-p) >= b)^n`.
pub fn dnc_expected_transmissions(n: u32, b: u32, p: f64) -> Result<f64, DncError> {
    if n == 0 || b == 0 || !(0.0..=1.0).contains(&p) {
        return Err(DncError::InvalidArgument);
    }
    if p >= 1.0 {
        return Err(DncError::DivergentExpectation);
    }
    if p == 0.0 {
        return Ok(b as f64);
    }
    let (ln_p, ln_q) = (p.ln(), (1.0 - p).ln());
    // t < b: a receiver cannot be done yet, each term is exactly 1.
    let mut total = b as f64;
    let mut t = b as u64;
    loop {
        // P(Bin(t, q) < b), summed in log space term by term
        let mut short = 0.0;
        let mut ln_choose = 0.0;
        for i in 0..b as u64 {
            if i > 0 {
                ln_choose += ((t - i + 1) as f64).ln() - (i as f64).ln();
            }
            short += (ln_choose + i as f64 * ln_q + (t - i) as f64 * ln_p).exp();
        }
        let short = short.min(1.0);
        let term = -(n as f64 * (-short).ln_1p()).exp_m1();
        total += term;
        if term < TAIL_CUTOFF {
            break;
        }
        t += 1;
    }
    Ok(total)
}

/// Monte Carlo counterpart of [`dnc_expected_transmissions`]: slots until all
/// `n` receivers hold `b` packets.
pub fn rlnc_inf_simulate<R: Rng + ?Sized>(n: u32, b: u32, p: f64, rng: &mut R) -> u64 {
    let q = 1.0 - p;
    let mut have = vec![0u32; n as usize];
    let mut pending = n as usize;
    let mut slots = 0;
    while pending > 0 {
        slots += 1;
        for h in have.iter_mut().filter(|h| **h < b) {
            if rng.gen_bool(q) {
                *h += 1;
                if *h == b {
                    pending -= 1;
                }
            }
        }
    }
    slots
}

/// Retransmission phase of the coded baseline on a network whose natives have
/// already been sent. APs alternate; an AP with nothing left yields its turn.
/// Returns the slot count.
pub fn run_dnc(net: &mut Network, channel: &mut Channel, budget: u64) -> Result<u64, BudgetExceeded> {
    let mut remaining: [Vec<u32>; 2] = Ap::BOTH.map(|ap| {
        net.topology()
            .home(ap)
            .iter()
            .map(|r| net.batch() - net.knowledge(r.id).decoded_count(ap) as u32)
            .collect()
    });
    let mut slots = 0u64;
    let mut turn = Ap::One;
    loop {
        let busy = |ap: Ap| remaining[ap.index()].iter().any(|&r| r > 0);
        let ap = if busy(turn) {
            turn
        } else if busy(turn.other()) {
            turn.other()
        } else {
            break;
        };
        if slots >= budget {
            return Err(BudgetExceeded(budget));
        }
        slots += 1;
        let mut record = net.tracing().then(|| SlotRecord {
            phase: Phase::Dnc,
            tx: Transmission::Dense { ap },
            absorbed: Vec::new(),
            decoded: Vec::new(),
            dense_hits: Vec::new(),
        });
        for (i, left) in remaining[ap.index()].iter_mut().enumerate() {
            if *left > 0 && channel.clean_arrives() {
                *left -= 1;
                if let Some(rec) = record.as_mut() {
                    rec.dense_hits.push(net.topology().home(ap)[i].id);
                }
            }
        }
        if let Some(rec) = record {
            net.push_record(rec);
        }
        turn = ap.other();
    }
    Ok(slots)
}
