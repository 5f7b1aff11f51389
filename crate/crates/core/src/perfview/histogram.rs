use super::FULL_FEED_TOL;
use crate::error::{invalid, Result};
use crate::feedsim::SimResult;
use crate::toolpath::IsoProgram;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

/// Lower edges of the block-length bins, mm; the last bin is open.
pub const LENGTH_EDGES: [f64; 7] = [0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HistUnit {
    Millimetre,
    /// Mean feed over set point.
    SetPointFraction,
}

/// `[low, high)`; `high = None` is open-ended, `low == high` holds exactly that value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistBin {
    pub low: f64,
    pub high: Option<f64>,
    pub count: usize,
    /// Share of the total path length.
    pub length_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub unit: HistUnit,
    pub bins: Vec<HistBin>,
}

impl Histogram {
    fn build(unit: HistUnit, edges: Vec<(f64, Option<f64>)>, items: impl Iterator<Item = (usize, f64)>) -> Self {
        let mut bins: Vec<HistBin> =
            edges.into_iter().map(|(low, high)| HistBin { low, high, count: 0, length_share: 0.0 }).collect();
        let mut total = 0.0;
        for (b, len) in items {
            bins[b].count += 1;
            bins[b].length_share += len;
            total += len;
        }
        if total > 0.0 {
            for b in &mut bins {
                b.length_share /= total;
            }
        }
        Histogram { unit, bins }
    }

    pub fn total_count(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum()
    }

    /// `bin_low,bin_high,count,length_share`; an open upper edge is written `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_low,bin_high,count,length_share\n");
        for b in &self.bins {
            let high = b.high.map_or("inf".to_string(), |h| h.to_string());
            writeln!(out, "{},{},{},{}", b.low, high, b.count, b.length_share).unwrap();
        }
        out
    }
}

fn length_bin(len: f64) -> usize {
    LENGTH_EDGES.partition_point(|&e| e <= len).max(1) - 1
}

/// Block counts and length shares over [`LENGTH_EDGES`].
pub fn block_length_hist(program: &IsoProgram) -> Result<Histogram> {
    if program.blocks().is_empty() {
        return invalid("histogram of an empty program");
    }
    let edges = LENGTH_EDGES
        .iter()
        .enumerate()
        .map(|(i, &lo)| (lo, LENGTH_EDGES.get(i + 1).copied()))
        .collect();
    let items = program.blocks().iter().map(|b| {
        let l = b.length();
        (length_bin(l), l)
    });
    Ok(Histogram::build(HistUnit::Millimetre, edges, items))
}

/// Mean feed in tenths of the set point, plus a bin for blocks at the full set point.
pub fn feed_hist(sim: &SimResult) -> Result<Histogram> {
    if sim.blocks.is_empty() {
        return invalid("histogram of an empty simulation");
    }
    let mut edges: Vec<(f64, Option<f64>)> = (0..10).map(|i| (i as f64 / 10.0, Some((i + 1) as f64 / 10.0))).collect();
    edges.push((1.0, Some(1.0)));
    let items = sim.blocks.iter().map(|b| {
        let f = b.mean_feed / sim.set_point;
        let bin = if f >= 1.0 - FULL_FEED_TOL { 10 } else { ((f * 10.0).floor().max(0.0) as usize).min(9) };
        (bin, b.len_mm)
    });
    Ok(Histogram::build(HistUnit::SetPointFraction, edges, items))
}
