//! Independent Bernoulli erasure channel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::topology::{ReceiverId, ReceiverProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0} is outside the interference region and cannot receive a collided packet")]
pub struct DomainError(pub ReceiverId);

/// RNG stream for one trial. Trial `t` of a run seeded with `seed` always gets
/// the same stream, whichever protocol consumes it.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ trial)
}

/// Per-slot delivery draws. A clean packet reaches each listener with
/// probability `1 - p`; a collided packet needs both colliding packets, so
/// `(1 - p)^2`.
#[derive(Debug, Clone)]
pub struct Channel {
    clean: f64,
    collided: f64,
    rng: ChaCha8Rng,
}

impl Channel {
    pub fn new(p: f64, rng: ChaCha8Rng) -> Self {
        assert!((0.0..=1.0).contains(&p), "loss probability {p} outside [0, 1]");
        let clean = 1.0 - p;
        Channel { clean, collided: clean * clean, rng }
    }

    /// Every transmission arrives.
    pub fn lossless() -> Self {
        Channel::new(0.0, ChaCha8Rng::seed_from_u64(0))
    }

    pub fn loss(&self) -> f64 {
        1.0 - self.clean
    }

    pub fn clean_arrives(&mut self) -> bool {
        self.rng.gen_bool(self.clean)
    }

    pub fn collided_arrives(&mut self) -> bool {
        self.rng.gen_bool(self.collided)
    }

    pub fn deliver_clean(&mut self, targets: &[ReceiverId]) -> Vec<bool> {
        targets.iter().map(|_| self.clean_arrives()).collect()
    }

    /// Fails without drawing anything if a target is outside the overlap.
    pub fn deliver_collided(&mut self, targets: &[ReceiverProfile]) -> Result<Vec<bool>, DomainError> {
        if let Some(r) = targets.iter().find(|r| !r.in_overlap) {
            return Err(DomainError(r.id));
        }
        Ok(targets.iter().map(|_| self.collided_arrives()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::Ap;

    fn overlap(id: u32) -> ReceiverProfile {
        ReceiverProfile { id: ReceiverId(id), home_ap: Ap::One, in_overlap: true }
    }

    fn ids(n: u32) -> Vec<ReceiverId> {
        (1..=n).map(ReceiverId).collect()
    }

    #[test]
    fn extremes_are_deterministic() {
        let mut perfect = Channel::new(0.0, trial_rng(1, 0));
        assert!(perfect.deliver_clean(&ids(50)).iter().all(|&b| b));
        assert!(perfect.deliver_collided(&[overlap(1), overlap(2)]).unwrap().iter().all(|&b| b));
        let mut dead = Channel::new(1.0, trial_rng(1, 0));
        assert!(dead.deliver_clean(&ids(50)).iter().all(|&b| !b));
        assert!(dead.deliver_collided(&[overlap(1)]).unwrap().iter().all(|&b| !b));
    }

    #[test]
    fn collided_delivery_rejects_non_overlap() {
        let mut ch = Channel::new(0.1, trial_rng(1, 0));
        let outside = ReceiverProfile { id: ReceiverId(3), home_ap: Ap::One, in_overlap: false };
        assert_eq!(ch.deliver_collided(&[overlap(1), outside]), Err(DomainError(ReceiverId(3))));
    }

    #[test]
    fn same_seed_same_draws() {
        let mut a = Channel::new(0.3, trial_rng(42, 7));
        let mut b = Channel::new(0.3, trial_rng(42, 7));
        assert_eq!(a.deliver_clean(&ids(1000)), b.deliver_clean(&ids(1000)));
        let mut c = Channel::new(0.3, trial_rng(42, 8));
        assert_ne!(a.deliver_clean(&ids(1000)), c.deliver_clean(&ids(1000)));
    }

    #[test]
    fn empirical_rates_within_three_sigma() {
        let draws = 100_000usize;
        for p in [0.1, 0.3] {
            let mut ch = Channel::new(p, trial_rng(99, 0));
            let clean = ch.deliver_clean(&ids(draws as u32)).iter().filter(|&&b| b).count();
            let targets: Vec<ReceiverProfile> = (1..=draws as u32).map(overlap).collect();
            let coll = ch.deliver_collided(&targets).unwrap().iter().filter(|&&b| b).count();
            for (hits, q) in [(clean, 1.0 - p), (coll, (1.0 - p) * (1.0 - p))] {
                let sigma = (q * (1.0 - q) / draws as f64).sqrt();
                let rate = hits as f64 / draws as f64;
                assert!((rate - q).abs() <= 3.0 * sigma, "p={p}: rate {rate} vs {q}");
            }
        }
    }
}
