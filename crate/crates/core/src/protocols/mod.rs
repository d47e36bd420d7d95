//! Retransmission schemes: plain ARQ, the unbounded-field coded baseline, and
//! joint XOR/collision coding.

mod ancr;
mod arq;
mod benefit;
mod dnc;
mod jnccr;
mod network;

use thiserror::Error;

pub use ancr::{ancr_decide, collision_decoders, Benefits, Decision, DecisionKind};
pub use arq::run_arq;
pub use benefit::benefit_select;
pub use dnc::{dnc_expected_transmissions, rlnc_inf_simulate, run_dnc, DncError};
pub use jnccr::{jnccr_stage1_slot, jnccr_stage2_slot, run_jnccr, JncCrCounts};
pub use network::{collision_yield, ApState, Network, Phase, Reception, SlotRecord, Transmission};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("slot budget of {0} exhausted before every receiver completed")]
pub struct BudgetExceeded(pub u64);
