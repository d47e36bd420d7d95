//! CSV rows and console summaries for aggregated results.

use std::io::Write;

use jnc_core::sim::AggregateStats;

use crate::format::sig;

pub const CSV_HEADER: [&str; 12] = [
    "protocol",
    "p",
    "N",
    "M",
    "B",
    "seed",
    "trials",
    "mean_retx",
    "ci95",
    "mean_tx_per_packet",
    "slots_stage1",
    "slots_stage2",
];

const CSV_DIGITS: usize = 12;
const SUMMARY_DIGITS: usize = 6;

fn record(s: &AggregateStats) -> [String; 12] {
    let c = &s.config;
    [
        s.protocol.tag().to_string(),
        sig(c.p, CSV_DIGITS),
        c.n.to_string(),
        c.m.to_string(),
        c.b.to_string(),
        c.seed.to_string(),
        s.trials.to_string(),
        sig(s.mean_retx, CSV_DIGITS),
        sig(s.ci95, CSV_DIGITS),
        sig(s.mean_tx_per_packet, CSV_DIGITS),
        sig(s.mean_stage1, CSV_DIGITS),
        sig(s.mean_stage2, CSV_DIGITS),
    ]
}

pub fn write_csv<W: Write>(out: W, rows: &[AggregateStats]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(record(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[AggregateStats]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

pub fn summary_line(s: &AggregateStats) -> String {
    let c = &s.config;
    format!(
        "{:<4} N={} M={} B={} p={}: mean retx {} ± {} over {} trials, {} tx/packet (stage1 {}, stage2 {})",
        s.protocol.tag(),
        c.n,
        c.m,
        c.b,
        sig(c.p, SUMMARY_DIGITS),
        sig(s.mean_retx, SUMMARY_DIGITS),
        sig(s.ci95, SUMMARY_DIGITS),
        s.trials,
        sig(s.mean_tx_per_packet, SUMMARY_DIGITS),
        sig(s.mean_stage1, SUMMARY_DIGITS),
        sig(s.mean_stage2, SUMMARY_DIGITS),
    )
}
