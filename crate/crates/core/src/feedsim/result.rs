use serde::{Deserialize, Serialize};

/// Timing of one block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockPlan {
    pub i: usize,
    pub len_mm: f64,
    pub v_in: f64,
    pub v_peak: f64,
    pub v_out: f64,
    /// Time spent on the block, s.
    pub t_s: f64,
    /// `len_mm / t_s`, mm/s.
    pub mean_feed: f64,
}

/// Simulated execution of a program at one set point (mm/s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub set_point: f64,
    pub total_time_s: f64,
    pub blocks: Vec<BlockPlan>,
}

impl SimResult {
    pub fn from_blocks(set_point: f64, blocks: Vec<BlockPlan>) -> Self {
        let total_time_s = blocks.iter().map(|b| b.t_s).sum();
        SimResult { set_point, total_time_s, blocks }
    }

    pub fn total_length(&self) -> f64 {
        self.blocks.iter().map(|b| b.len_mm).sum()
    }
}
