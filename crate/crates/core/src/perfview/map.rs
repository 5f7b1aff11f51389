use crate::error::{invalid, Result};
use crate::feedsim::SimResult;
use crate::toolpath::IsoProgram;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

/// Colour class of a block on the feed map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedBand {
    /// At least 95 % of the set point.
    Green,
    /// 60 % to 95 %.
    Yellow,
    Red,
}

impl FeedBand {
    pub fn of(fraction: f64) -> Self {
        if fraction >= 0.95 {
            FeedBand::Green
        } else if fraction >= 0.6 {
            FeedBand::Yellow
        } else {
            FeedBand::Red
        }
    }

    fn colour(self) -> &'static str {
        match self {
            FeedBand::Green => "#2ca02c",
            FeedBand::Yellow => "#e6b800",
            FeedBand::Red => "#d62728",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedMapRow {
    pub i: usize,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub mean_feed: f64,
    pub fraction: f64,
}

pub fn feed_map(sim: &SimResult, program: &IsoProgram) -> Result<Vec<FeedMapRow>> {
    if sim.blocks.len() != program.blocks().len() {
        return invalid(format!("simulation has {} blocks, program {}", sim.blocks.len(), program.blocks().len()));
    }
    Ok(program
        .blocks()
        .iter()
        .zip(&sim.blocks)
        .enumerate()
        .map(|(i, (b, p))| {
            let m = b.midpoint();
            FeedMapRow { i, x: m.x, y: m.y, z: m.z, mean_feed: p.mean_feed, fraction: p.mean_feed / sim.set_point }
        })
        .collect())
}

pub fn feed_map_csv(rows: &[FeedMapRow]) -> String {
    let mut out = String::from("i,x,y,z,mean_feed,fraction\n");
    for r in rows {
        writeln!(out, "{},{:.4},{:.4},{:.4},{:.4},{:.6}", r.i, r.x, r.y, r.z, r.mean_feed, r.fraction).unwrap();
    }
    out
}

/// Top view of the program, one polyline per run of equally coloured blocks.
pub fn feed_map_svg(sim: &SimResult, program: &IsoProgram) -> Result<String> {
    let rows = feed_map(sim, program)?;
    let blocks = program.blocks();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for b in blocks {
        for p in [b.start, b.end] {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
    }
    let margin = 2.0;
    let (w, h) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:.3} {h:.3}" width="{:.0}" height="{:.0}">"#,
        w * 8.0,
        h * 8.0
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    let px = |x: f64| x - x0 + margin;
    let py = |y: f64| y1 - y + margin;
    for pass in program.passes() {
        let mut i = pass.first_block;
        while i < pass.end_block {
            let band = FeedBand::of(rows[i].fraction);
            let mut pts = format!("{:.3},{:.3}", px(blocks[i].start.x), py(blocks[i].start.y));
            while i < pass.end_block && FeedBand::of(rows[i].fraction) == band {
                write!(pts, " {:.3},{:.3}", px(blocks[i].end.x), py(blocks[i].end.y)).unwrap();
                i += 1;
            }
            writeln!(
                out,
                r#"<polyline points="{pts}" fill="none" stroke="{}" stroke-width="0.15"/>"#,
                band.colour()
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feedsim::BlockPlan;
    use crate::geometry::Point3;
    use crate::toolpath::{IsoBlock, StrategyParams, Tool};

    #[test]
    fn uniform_feed_is_one_colour() {
        let blocks: Vec<IsoBlock> = (0..5)
            .map(|i| IsoBlock::new(Point3::new(i as f64, 0.0, 0.0), Point3::new(i as f64 + 1.0, 0.0, 0.0), 6000.0).unwrap())
            .collect();
        let prog = IsoProgram::from_passes(Tool::default(), StrategyParams::default(), [(0, 0, blocks)]).unwrap();
        let plans = (0..5)
            .map(|i| BlockPlan { i, len_mm: 1.0, v_in: 100.0, v_peak: 100.0, v_out: 100.0, t_s: 0.01, mean_feed: 100.0 })
            .collect();
        let sim = SimResult::from_blocks(100.0, plans);
        let rows = feed_map(&sim, &prog).unwrap();
        assert_eq!(feed_map_csv(&rows).lines().count(), 6);
        let svg = feed_map_svg(&sim, &prog).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(svg.contains("#2ca02c") && !svg.contains("#d62728"));
        assert_eq!(FeedBand::of(0.6), FeedBand::Yellow);
        assert_eq!(FeedBand::of(0.59), FeedBand::Red);
    }
}
