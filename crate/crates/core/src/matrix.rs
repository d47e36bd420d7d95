//! Plain-text reception matrix used to replay a fixed loss pattern.
//!
//! ```text
//! N M B
//! <receiver id> <2B symbols>
//! ...
//! ```
//!
//! One line per receiver `1..=2N`. Columns are AP1's packets `1..B` followed
//! by AP2's packets `1..B`. `0` means received, `1` means lost and `-` means
//! the receiver is out of range of that packet's AP, which is only allowed
//! (and then required) for the other cell's packets at a non-overlap receiver.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coding::{Ap, KnowledgeState, PacketId};
use crate::protocols::Network;
use crate::topology::{build_topology, NetworkConfig, Topology};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Received,
    Lost,
    OutOfRange,
}

impl Cell {
    fn symbol(self) -> char {
        match self {
            Cell::Received => '0',
            Cell::Lost => '1',
            Cell::OutOfRange => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReceptionMatrix {
    pub n: u32,
    pub m: u32,
    pub b: u32,
    /// `rows[r]` belongs to receiver `r + 1` and has `2B` cells.
    pub rows: Vec<Vec<Cell>>,
}

impl ReceptionMatrix {
    pub fn config(&self) -> NetworkConfig {
        NetworkConfig { n: self.n, m: self.m, p: 0.0, b: self.b, seed: 0 }
    }

    pub fn topology(&self) -> Topology {
        build_topology(&self.config()).expect("validated on parse")
    }

    fn column(&self, col: usize) -> PacketId {
        let b = self.b as usize;
        if col < b {
            PacketId::new(Ap::One, col as u32 + 1)
        } else {
            PacketId::new(Ap::Two, (col - b) as u32 + 1)
        }
    }

    /// Receiver knowledge implied by the matrix. Received packets of the other
    /// cell count as overheard.
    pub fn network(&self) -> Network {
        let states = self
            .rows
            .iter()
            .map(|row| {
                KnowledgeState::with_decoded(
                    self.b,
                    row.iter().enumerate().filter(|(_, c)| **c == Cell::Received).map(|(i, _)| self.column(i)),
                )
            })
            .collect();
        Network::from_states(self.topology(), self.b, states)
    }
}

impl FromStr for ReceptionMatrix {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| err(1, "empty matrix file"))?;
        let dims: Vec<u32> = header
            .split_whitespace()
            .map(|t| t.parse::<u32>().map_err(|_| err(hline, format!("bad header field {t:?}"))))
            .collect::<Result<_, _>>()?;
        let [n, m, b] = dims[..] else {
            return Err(err(hline, "header must be \"N M B\""));
        };
        let cfg = NetworkConfig { n, m, p: 0.0, b, seed: 0 };
        let topo = build_topology(&cfg).map_err(|e| err(hline, e.to_string()))?;

        let mut rows: Vec<Option<Vec<Cell>>> = vec![None; 2 * n as usize];
        for (ln, line) in lines {
            let mut tokens = line.split_whitespace();
            let id: usize = tokens
                .next()
                .and_then(|t| t.trim_start_matches(['R', 'r']).parse().ok())
                .ok_or_else(|| err(ln, "expected receiver id"))?;
            if id == 0 || id > rows.len() {
                return Err(err(ln, format!("receiver id {id} outside 1..={}", rows.len())));
            }
            if rows[id - 1].is_some() {
                return Err(err(ln, format!("receiver {id} listed twice")));
            }
            let profile = topo.receivers()[id - 1];
            let cells: Vec<Cell> = tokens
                .map(|t| match t {
                    "0" => Ok(Cell::Received),
                    "1" => Ok(Cell::Lost),
                    "-" => Ok(Cell::OutOfRange),
                    other => Err(err(ln, format!("bad symbol {other:?}"))),
                })
                .collect::<Result<_, _>>()?;
            if cells.len() != 2 * b as usize {
                return Err(err(ln, format!("expected {} symbols, found {}", 2 * b, cells.len())));
            }
            for (col, cell) in cells.iter().enumerate() {
                let ap = if col < b as usize { Ap::One } else { Ap::Two };
                let reachable = ap == profile.home_ap || profile.in_overlap;
                if reachable == (*cell == Cell::OutOfRange) {
                    let what = if reachable { "'-' for a packet in range" } else { "a reception status out of range" };
                    return Err(err(ln, format!("receiver {id} has {what} (column {})", col + 1)));
                }
            }
            rows[id - 1] = Some(cells);
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| err(hline, format!("missing row for receiver {}", i + 1))))
            .collect::<Result<_, _>>()?;
        Ok(ReceptionMatrix { n, m, b, rows })
    }
}

impl fmt::Display for ReceptionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.n, self.m, self.b)?;
        for (i, row) in self.rows.iter().enumerate() {
            write!(f, "{}", i + 1)?;
            for c in row {
                write!(f, " {}", c.symbol())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The four-receiver example: AP1 sends c1, c2 to R1, R2; AP2 sends c3, c4 to
/// R3, R4; R1 and R3 overlap.
pub const WORKED_EXAMPLE: &str = "\
2 1 2
1 1 0 0 0
2 0 1 - -
3 0 0 0 1
4 - - 1 0
";
