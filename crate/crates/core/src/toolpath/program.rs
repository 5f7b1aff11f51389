use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{StrategyParams, Tool};
use crate::error::{invalid, Error, Result};
use crate::geometry::Point3;

/// One linear feed move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockDoc")]
pub struct IsoBlock {
    pub start: Point3,
    pub end: Point3,
    /// Programmed feed, mm/min.
    pub feed: f64,
}

#[derive(Deserialize)]
struct BlockDoc {
    start: Point3,
    end: Point3,
    feed: f64,
}

impl TryFrom<BlockDoc> for IsoBlock {
    type Error = Error;
    fn try_from(d: BlockDoc) -> Result<Self> {
        IsoBlock::new(d.start, d.end, d.feed)
    }
}

impl IsoBlock {
    pub fn new(start: Point3, end: Point3, feed: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite()) {
            return invalid("non-finite block endpoint");
        }
        if start.distance(end) <= 1e-12 {
            return Err(Error::Degenerate(format!("zero-length block at {start:?}")));
        }
        if !(feed > 0.0 && feed.is_finite()) {
            return invalid(format!("block feed must be positive, got {feed}"));
        }
        Ok(IsoBlock { start, end, feed })
    }

    pub fn length(&self) -> f64 {
        self.start.distance(self.end)
    }

    /// Unit direction of travel.
    pub fn direction(&self) -> Point3 {
        (self.end - self.start) * (1.0 / self.length())
    }

    pub fn midpoint(&self) -> Point3 {
        self.start.lerp(self.end, 0.5)
    }
}

/// Blocks `first_block .. end_block` form one continuous cut; the tool
/// enters before the first and leaves after the last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassRange {
    pub first_block: usize,
    pub end_block: usize,
    /// Elementary area the pass belongs to.
    pub area: usize,
    /// Position of the pass across its area, from the first swept side.
    pub lane: usize,
}

/// A linear-block machining program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProgramDoc")]
pub struct IsoProgram {
    pub tool: Tool,
    pub params: StrategyParams,
    blocks: Vec<IsoBlock>,
    passes: Vec<PassRange>,
}

#[derive(Deserialize)]
struct ProgramDoc {
    tool: Tool,
    params: StrategyParams,
    blocks: Vec<IsoBlock>,
    passes: Vec<PassRange>,
}

impl TryFrom<ProgramDoc> for IsoProgram {
    type Error = Error;
    fn try_from(d: ProgramDoc) -> Result<Self> {
        IsoProgram::new(d.tool, d.params, d.blocks, d.passes)
    }
}

impl IsoProgram {
    /// Validates pass ranges: contiguous, covering every block, and connected
    /// end-to-start inside each pass.
    pub fn new(tool: Tool, params: StrategyParams, blocks: Vec<IsoBlock>, passes: Vec<PassRange>) -> Result<Self> {
        if passes.is_empty() || blocks.is_empty() {
            return Err(Error::EmptyProgram("a program needs at least one pass".into()));
        }
        let mut next = 0;
        for p in &passes {
            if p.first_block != next || p.end_block <= p.first_block || p.end_block > blocks.len() {
                return invalid(format!("bad pass range {p:?}"));
            }
            for w in blocks[p.first_block..p.end_block].windows(2) {
                if w[0].end != w[1].start {
                    return invalid(format!("pass {p:?} is not continuous at {:?}", w[0].end));
                }
            }
            next = p.end_block;
        }
        if next != blocks.len() {
            return invalid("pass ranges do not cover every block");
        }
        Ok(IsoProgram { tool, params, blocks, passes })
    }

    /// Program from per-pass block lists tagged `(area, lane)`.
    pub fn from_passes(
        tool: Tool,
        params: StrategyParams,
        passes: impl IntoIterator<Item = (usize, usize, Vec<IsoBlock>)>,
    ) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut ranges = Vec::new();
        for (area, lane, b) in passes {
            if b.is_empty() {
                continue;
            }
            let first = blocks.len();
            blocks.extend(b);
            ranges.push(PassRange { first_block: first, end_block: blocks.len(), area, lane });
        }
        IsoProgram::new(tool, params, blocks, ranges)
    }

    pub fn blocks(&self) -> &[IsoBlock] {
        &self.blocks
    }

    pub fn passes(&self) -> &[PassRange] {
        &self.passes
    }

    pub fn pass_blocks(&self, i: usize) -> &[IsoBlock] {
        let p = self.passes[i];
        &self.blocks[p.first_block..p.end_block]
    }

    pub fn total_length(&self) -> f64 {
        self.blocks.iter().map(IsoBlock::length).sum()
    }

    /// Concatenates programs, renumbering areas after those already present.
    pub fn concat(parts: Vec<IsoProgram>) -> Result<Self> {
        let mut it = parts.into_iter();
        let mut out = it.next().ok_or_else(|| Error::EmptyProgram("nothing to concatenate".into()))?;
        for p in it {
            let area0 = out.passes.iter().map(|r| r.area + 1).max().unwrap_or(0);
            let off = out.blocks.len();
            out.passes.extend(p.passes.iter().map(|r| PassRange {
                first_block: r.first_block + off,
                end_block: r.end_block + off,
                area: r.area + area0,
                lane: r.lane,
            }));
            out.blocks.extend(p.blocks);
        }
        Ok(out)
    }

    /// G-code: a header comment, a rapid move to each pass start, then one
    /// numbered `G1` line per block.
    pub fn to_gcode(&self) -> String {
        let mut s = String::new();
        let p = &self.params;
        let _ = writeln!(
            s,
            "(curveguide: ball radius {} mm, chordal tolerance {} mm, cusp {} mm, {} blocks, {} passes)",
            self.tool.ball_radius(),
            p.chordal_tolerance,
            p.cusp_height,
            self.blocks.len(),
            self.passes.len()
        );
        let mut n = 1;
        for r in &self.passes {
            let a = self.blocks[r.first_block].start;
            let _ = writeln!(s, "G0 X{:.4} Y{:.4} Z{:.4}", a.x, a.y, a.z);
            for b in &self.blocks[r.first_block..r.end_block] {
                let e = b.end;
                let _ = writeln!(s, "N{n} G1 X{:.4} Y{:.4} Z{:.4} F{:.1}", e.x, e.y, e.z, b.feed);
                n += 1;
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x0: f64, x1: f64) -> IsoBlock {
        IsoBlock::new(Point3::new(x0, 0.0, 0.0), Point3::new(x1, 0.0, 0.0), 6000.0).unwrap()
    }

    fn prog() -> IsoProgram {
        IsoProgram::from_passes(
            Tool::default(),
            StrategyParams::default(),
            vec![(0, 0, vec![b(0.0, 1.0), b(1.0, 3.0)]), (0, 1, vec![b(3.0, 2.0)])],
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(IsoBlock::new(Point3::ZERO, Point3::ZERO, 100.0).is_err());
        let p = prog();
        assert_eq!(p.passes().len(), 2);
        assert_eq!(p.total_length(), 4.0);
        let broken = IsoProgram::new(
            Tool::default(),
            StrategyParams::default(),
            vec![b(0.0, 1.0), b(2.0, 3.0)],
            vec![PassRange { first_block: 0, end_block: 2, area: 0, lane: 0 }],
        );
        assert!(broken.is_err());
        assert!(matches!(
            IsoProgram::from_passes(Tool::default(), StrategyParams::default(), vec![]),
            Err(Error::EmptyProgram(_))
        ));
    }

    #[test]
    fn gcode_and_json() {
        let p = prog();
        let g = p.to_gcode();
        let lines: Vec<&str> = g.lines().collect();
        assert!(lines[0].starts_with('('));
        assert_eq!(lines[1], "G0 X0.0000 Y0.0000 Z0.0000");
        assert_eq!(lines[2], "N1 G1 X1.0000 Y0.0000 Z0.0000 F6000.0");
        assert_eq!(lines[5], "N3 G1 X2.0000 Y0.0000 Z0.0000 F6000.0");
        let back: IsoProgram = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn concat_renumbers_areas() {
        let c = IsoProgram::concat(vec![prog(), prog()]).unwrap();
        assert_eq!(c.passes().len(), 4);
        assert_eq!(c.passes()[2].area, 1);
        assert_eq!(c.passes()[2].first_block, 3);
    }
}
