//! Simulator for joint XOR and collision (analog) network coding
//! retransmission between two interfering wireless multicast cells.

pub mod channel;
pub mod coding;
pub mod matrix;
pub mod protocols;
pub mod sim;
pub mod topology;
