//! Finishing toolpaths over machining areas: parallel planes and guidance
//! (morphing between two guides), linearised into ISO blocks.

mod guidance;
mod linearize;
mod planes;
mod program;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{Point3, SurfacePatch};

pub use guidance::{
    composed_passes, guidance_passes, guidance_toolpath, pass_count, program_for_composed, CompositionOptions,
};
pub use linearize::{linearize, linearize_points, max_chord_deviation};
pub use planes::{parallel_plane_passes, parallel_planes_toolpath};
pub use program::{IsoBlock, IsoProgram, PassRange};

/// Dense resampling step (mm) of passes before linearisation.
pub const DENSE_STEP: f64 = 0.05;

/// A pass before linearisation, sampled every [`DENSE_STEP`] along its station.
#[derive(Debug, Clone, PartialEq)]
pub struct DensePass {
    pub area: usize,
    pub lane: usize,
    /// Blend between the area guides (guidance) or relative plane position (planes).
    pub blend: f64,
    pub points: Vec<Point3>,
}

/// Ball-end mill.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ToolDoc")]
pub struct Tool {
    ball_radius: f64,
}

#[derive(Deserialize)]
struct ToolDoc {
    ball_radius: f64,
}

impl TryFrom<ToolDoc> for Tool {
    type Error = Error;
    fn try_from(d: ToolDoc) -> Result<Self> {
        Tool::new(d.ball_radius)
    }
}

impl Tool {
    pub fn new(ball_radius: f64) -> Result<Self> {
        if !(ball_radius > 0.0 && ball_radius.is_finite()) {
            return invalid(format!("tool radius must be positive, got {ball_radius}"));
        }
        Ok(Tool { ball_radius })
    }

    pub fn ball_radius(&self) -> f64 {
        self.ball_radius
    }
}

impl Default for Tool {
    /// A 4 mm ball-end mill.
    fn default() -> Self {
        Tool { ball_radius: 2.0 }
    }
}

/// Order of passes across an area.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sweep {
    OneWay,
    #[default]
    Zigzag,
}

/// Machining parameters shared by both strategies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StrategyParams {
    /// Maximum chord deviation of a block from the pass (mm).
    pub chordal_tolerance: f64,
    /// Scallop height left between passes (mm).
    pub cusp_height: f64,
    pub sweep: Sweep,
    /// Straight extension added at both ends of every pass (mm).
    pub overrun: f64,
    /// Programmed feed, mm/min.
    pub feed_set_point: f64,
}

impl Default for StrategyParams {
    fn default() -> Self {
        StrategyParams {
            chordal_tolerance: 0.01,
            cusp_height: 0.01,
            sweep: Sweep::Zigzag,
            overrun: 0.0,
            feed_set_point: 6000.0,
        }
    }
}

impl StrategyParams {
    pub fn validate(&self, tool: &Tool) -> Result<()> {
        if !(self.chordal_tolerance > 0.0 && self.chordal_tolerance.is_finite()) {
            return invalid("chordal tolerance must be positive");
        }
        if !(self.cusp_height > 0.0 && self.cusp_height < tool.ball_radius) {
            return invalid(format!(
                "cusp height must lie in (0, {}) for this tool, got {}",
                tool.ball_radius, self.cusp_height
            ));
        }
        if !(self.overrun >= 0.0 && self.overrun.is_finite()) {
            return invalid("overrun must be non-negative");
        }
        if !(self.feed_set_point > 0.0 && self.feed_set_point.is_finite()) {
            return invalid("feed set point must be positive");
        }
        Ok(())
    }
}

/// Distance between adjacent ball positions leaving a scallop of height
/// `cusp` on a plane: `2 sqrt(2 R h - h^2)`.
pub fn stepover_from_cusp(tool: &Tool, cusp: f64) -> Result<f64> {
    let r = tool.ball_radius;
    if !(cusp > 0.0 && cusp < r) {
        return invalid(format!("cusp height must lie in (0, {r}), got {cusp}"));
    }
    Ok(2.0 * (2.0 * r * cusp - cusp * cusp).sqrt())
}

/// Stepover reduced for the most convex part of the surface: a ball of radius
/// `R` on a sphere of radius `rho` leaves the flat scallop at `w sqrt(rho / (rho + R))`.
pub fn effective_stepover(tool: &Tool, cusp: f64, surface: &SurfacePatch) -> Result<f64> {
    let w = stepover_from_cusp(tool, cusp)?;
    let k = surface.max_normal_curvature(120);
    if k <= 1e-12 {
        return Ok(w);
    }
    let rho = 1.0 / k;
    Ok(w * (rho / (rho + tool.ball_radius)).sqrt())
}
