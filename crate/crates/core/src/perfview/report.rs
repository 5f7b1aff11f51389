use super::{block_length_hist, feed_hist, Histogram, SLOW_THRESHOLD};
use crate::error::{invalid, Result};
use crate::feedsim::SimResult;
use crate::geometry::station::StationIndex;
use crate::geometry::{FeatureModel, Point3};
use crate::toolpath::{stepover_from_cusp, IsoProgram};
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA: u32 = 1;

/// Sampling pitch along blocks for band membership, mm.
pub const BAND_SAMPLE: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportOptions {
    /// Share of the set point below which a block is slow.
    pub slow_threshold: f64,
    /// Width of the boundary bands in stepovers.
    pub band_stepovers: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { slow_threshold: SLOW_THRESHOLD, band_stepovers: 2.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaBreakdown {
    pub area: usize,
    pub blocks: usize,
    pub length_mm: f64,
    pub time_s: f64,
    pub slow_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerfReport {
    pub schema: u32,
    pub set_point: f64,
    pub total_time_s: f64,
    pub total_length_mm: f64,
    pub block_count: usize,
    /// Count share of blocks shorter than 1 mm.
    pub short_block_share: f64,
    pub block_length_hist: Histogram,
    pub feed_hist: Histogram,
    pub slow_threshold: f64,
    pub slow_fraction: f64,
    /// Slow fraction of the path lying near either boundary; `None` without a feature
    /// or when no block lies in the bands.
    pub band_slow_fraction: Option<f64>,
    pub areas: Vec<AreaBreakdown>,
}

/// Path-length share of blocks whose mean feed is below `threshold` times the set point.
pub fn slow_fraction(sim: &SimResult, threshold: f64) -> f64 {
    let (slow, total) = sim.blocks.iter().fold((0.0, 0.0), |(s, t), b| {
        (if b.mean_feed < threshold * sim.set_point { s + b.len_mm } else { s }, t + b.len_mm)
    });
    if total > 0.0 {
        slow / total
    } else {
        0.0
    }
}

/// Station pitch of the boundary tables used by [`BoundaryBand`], mm.
const BAND_TABLE_STEP: f64 = 0.05;

/// Lateral position of a curve tabulated over its station extent.
struct LateralTable {
    start: f64,
    step: f64,
    lateral: Vec<f64>,
}

impl LateralTable {
    fn new(index: &StationIndex<'_>) -> Result<Self> {
        let (lo, hi) = index.extent();
        let n = ((hi - lo) / BAND_TABLE_STEP).ceil().max(1.0) as usize;
        let step = (hi - lo) / n as f64;
        let lateral = (0..=n).map(|i| index.lateral(lo + step * i as f64)).collect::<Result<_>>()?;
        Ok(LateralTable { start: lo, step, lateral })
    }

    fn at(&self, station: f64) -> Option<f64> {
        let u = (station - self.start) / self.step;
        let last = self.lateral.len() - 1;
        if !(u >= -1e-9 && u <= last as f64 + 1e-9) {
            return None;
        }
        let i = (u.floor().max(0.0) as usize).min(last.saturating_sub(1));
        let f = (u - i as f64).clamp(0.0, 1.0);
        Some(self.lateral[i] + f * (self.lateral[(i + 1).min(last)] - self.lateral[i]))
    }
}

/// Strips of a given width along both boundaries of a feature.
pub struct BoundaryBand {
    dir: crate::geometry::Vec2,
    tables: [LateralTable; 2],
    width: f64,
}

impl BoundaryBand {
    pub fn new(feature: &FeatureModel, width: f64) -> Result<Self> {
        if !(width >= 0.0) {
            return invalid(format!("band width must be non-negative, got {width}"));
        }
        let dir = feature.machining_dir;
        let tables = [
            LateralTable::new(&StationIndex::new(&feature.boundary1, dir))?,
            LateralTable::new(&StationIndex::new(&feature.boundary2, dir))?,
        ];
        Ok(BoundaryBand { dir, tables, width })
    }

    /// Whether `p` lies within the band width of either boundary, measured across the
    /// machining direction. Points beyond a boundary's station extent are outside.
    pub fn contains(&self, p: Point3) -> bool {
        let s = p.xy().dot(self.dir);
        let lat = p.xy().dot(self.dir.perp());
        self.tables.iter().any(|t| t.at(s).is_some_and(|l| (lat - l).abs() <= self.width))
    }

    /// Approximate length of the segment `a`-`b` inside the band, sampled every
    /// [`BAND_SAMPLE`] mm.
    pub fn length_inside(&self, a: Point3, b: Point3) -> f64 {
        let len = (b - a).norm();
        let n = (len / BAND_SAMPLE).ceil().max(1.0) as usize;
        let hits = (0..n).filter(|&i| self.contains(a + (b - a) * ((i as f64 + 0.5) / n as f64))).count();
        len * hits as f64 / n as f64
    }
}

/// Summarises a simulated program; with a feature the boundary bands are also evaluated.
pub fn report(
    program: &IsoProgram,
    sim: &SimResult,
    feature: Option<&FeatureModel>,
    opts: &ReportOptions,
) -> Result<PerfReport> {
    if sim.blocks.len() != program.blocks().len() {
        return invalid(format!("simulation has {} blocks, program {}", sim.blocks.len(), program.blocks().len()));
    }
    if !(opts.slow_threshold > 0.0 && opts.slow_threshold <= 1.0) {
        return invalid(format!("slow threshold must lie in (0, 1], got {}", opts.slow_threshold));
    }
    let slow = |b: &crate::feedsim::BlockPlan| b.mean_feed < opts.slow_threshold * sim.set_point;
    let band_slow_fraction = match feature {
        Some(f) => {
            let width = opts.band_stepovers * stepover_from_cusp(&program.tool, program.params.cusp_height)?;
            let band = BoundaryBand::new(f, width)?;
            let (mut s, mut t) = (0.0, 0.0);
            for (b, p) in program.blocks().iter().zip(&sim.blocks) {
                let inside = band.length_inside(b.start, b.end);
                t += inside;
                if slow(p) {
                    s += inside;
                }
            }
            (t > 0.0).then(|| s / t)
        }
        None => None,
    };
    let mut areas: Vec<AreaBreakdown> = Vec::new();
    let mut slow_len: Vec<f64> = Vec::new();
    for pass in program.passes() {
        let idx = match areas.iter().position(|a| a.area == pass.area) {
            Some(i) => i,
            None => {
                areas.push(AreaBreakdown { area: pass.area, blocks: 0, length_mm: 0.0, time_s: 0.0, slow_fraction: 0.0 });
                slow_len.push(0.0);
                areas.len() - 1
            }
        };
        for p in &sim.blocks[pass.first_block..pass.end_block] {
            let a = &mut areas[idx];
            a.blocks += 1;
            a.length_mm += p.len_mm;
            a.time_s += p.t_s;
            if slow(p) {
                slow_len[idx] += p.len_mm;
            }
        }
    }
    for (a, s) in areas.iter_mut().zip(slow_len) {
        a.slow_fraction = if a.length_mm > 0.0 { s / a.length_mm } else { 0.0 };
    }
    areas.sort_by_key(|a| a.area);
    let n = program.blocks().len();
    Ok(PerfReport {
        schema: REPORT_SCHEMA,
        set_point: sim.set_point,
        total_time_s: sim.total_time_s,
        total_length_mm: sim.total_length(),
        block_count: n,
        short_block_share: program.blocks().iter().filter(|b| b.length() < 1.0).count() as f64 / n as f64,
        block_length_hist: block_length_hist(program)?,
        feed_hist: feed_hist(sim)?,
        slow_threshold: opts.slow_threshold,
        slow_fraction: slow_fraction(sim, opts.slow_threshold),
        band_slow_fraction,
        areas,
    })
}
