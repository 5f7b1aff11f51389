//! Morphing passes between the two guides of an area.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{effective_stepover, linearize, DensePass, IsoProgram, StrategyParams, Sweep, Tool, DENSE_STEP};
use crate::curvenet::{ComposedArea, MachiningArea};
use crate::error::{Error, Result};
use crate::geometry::{FeatureModel, Point3, StationIndex, SurfacePatch, Vec2};

/// Guide positions on a dense station grid.
struct GuideSamples {
    lower: Vec<Vec2>,
    upper: Vec<Vec2>,
}

impl GuideSamples {
    fn new(feature: &FeatureModel, area: &MachiningArea) -> Result<Self> {
        let dir = feature.machining_dir;
        let il = StationIndex::new(&area.lower, dir);
        let iu = StationIndex::new(&area.upper, dir);
        let (l0, l1) = il.extent();
        let (u0, u1) = iu.extent();
        let (lo, hi) = (l0.max(u0), l1.min(u1));
        if hi <= lo {
            return Err(Error::Geometry("area guides share no station range".into()));
        }
        let n = ((hi - lo) / DENSE_STEP).ceil().max(1.0) as usize;
        let mut lower = Vec::with_capacity(n + 1);
        let mut upper = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let s = lo + (hi - lo) * i as f64 / n as f64;
            lower.push(il.crossing(s)?.1.xy());
            upper.push(iu.crossing(s)?.1.xy());
        }
        Ok(GuideSamples { lower, upper })
    }

    fn point(&self, surface: &SurfacePatch, i: usize, blend: f64) -> Point3 {
        let q = self.lower[i] + (self.upper[i] - self.lower[i]) * blend;
        surface.drape(q.x, q.y)
    }

    fn pass(&self, surface: &SurfacePatch, blend: f64) -> Vec<Point3> {
        (0..self.lower.len()).map(|i| self.point(surface, i, blend)).collect()
    }

    fn mean_z(&self, surface: &SurfacePatch, blend: f64) -> f64 {
        self.pass(surface, blend).iter().map(|p| p.z).sum::<f64>() / self.lower.len() as f64
    }

    /// Smallest pass count whose adjacent passes stay within `w` at every station;
    /// 1 when the guides themselves are that close.
    fn count(&self, surface: &SurfacePatch, w: f64) -> usize {
        let n = self.lower.len();
        let widest = (0..n).map(|i| self.point(surface, i, 0.0).distance(self.point(surface, i, 1.0))).fold(0.0, f64::max);
        if widest <= w {
            return 1;
        }
        let fits = |count: usize| {
            (0..n).into_par_iter().all(|i| {
                let mut prev = self.point(surface, i, 0.0);
                (1..count).all(|k| {
                    let p = self.point(surface, i, k as f64 / (count - 1) as f64);
                    let ok = p.distance(prev) <= w;
                    prev = p;
                    ok
                })
            })
        };
        let mut count = ((widest / w).ceil() as usize + 1).max(2);
        while !fits(count) {
            count += 1;
        }
        count
    }
}

fn blends(count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.5];
    }
    (0..count).map(|k| k as f64 / (count - 1) as f64).collect()
}

/// Straight extension of `overrun` mm before the first and after the last point.
pub(super) fn extend(mut pts: Vec<Point3>, overrun: f64) -> Vec<Point3> {
    if overrun <= 0.0 || pts.len() < 2 {
        return pts;
    }
    let n = pts.len();
    if let Some(d) = (pts[0] - pts[1]).normalized() {
        pts.insert(0, pts[0] + d * overrun);
    }
    if let Some(d) = (pts[n] - pts[n - 1]).normalized() {
        let last = pts[n];
        pts.push(last + d * overrun);
    }
    pts
}

/// Number of morphing passes the area needs for the scallop limit.
pub fn pass_count(feature: &FeatureModel, area: &MachiningArea, tool: &Tool, params: &StrategyParams) -> Result<usize> {
    params.validate(tool)?;
    let w = effective_stepover(tool, params.cusp_height, &feature.surface)?;
    Ok(GuideSamples::new(feature, area)?.count(&feature.surface, w))
}

/// Dense morphing passes of one area in sweep order, starting from the guide
/// with the lower mean height. Zigzag reverses every other pass.
pub fn guidance_passes(
    feature: &FeatureModel,
    area: &MachiningArea,
    tool: &Tool,
    params: &StrategyParams,
) -> Result<Vec<DensePass>> {
    params.validate(tool)?;
    let w = effective_stepover(tool, params.cusp_height, &feature.surface)?;
    let g = GuideSamples::new(feature, area)?;
    let surface = &feature.surface;
    let from_lower = g.mean_z(surface, 0.0) <= g.mean_z(surface, 1.0);
    Ok(area_passes(&g, surface, w, from_lower, false, params, 0, 0))
}

#[allow(clippy::too_many_arguments)]
fn area_passes(
    g: &GuideSamples,
    surface: &SurfacePatch,
    w: f64,
    from_lower: bool,
    skip_first: bool,
    params: &StrategyParams,
    area: usize,
    parity: usize,
) -> Vec<DensePass> {
    let mut bs = blends(g.count(surface, w));
    if !from_lower {
        bs.reverse();
    }
    let skip = usize::from(skip_first && bs.len() > 1);
    bs[skip..]
        .par_iter()
        .enumerate()
        .map(|(lane, &blend)| {
            let mut points = g.pass(surface, blend);
            if params.sweep == Sweep::Zigzag && (lane + parity) % 2 == 1 {
                points.reverse();
            }
            DensePass { area, lane, blend, points: extend(points, params.overrun) }
        })
        .collect()
}

pub(super) fn program_from_dense(tool: &Tool, params: &StrategyParams, passes: &[DensePass]) -> Result<IsoProgram> {
    let blocks: Vec<(usize, usize, Vec<_>)> = passes
        .par_iter()
        .map(|p| Ok((p.area, p.lane, linearize(&p.points, params.chordal_tolerance, params.feed_set_point)?)))
        .collect::<Result<_>>()?;
    IsoProgram::from_passes(*tool, *params, blocks)
}

/// Morphing toolpath of one area.
pub fn guidance_toolpath(
    feature: &FeatureModel,
    area: &MachiningArea,
    tool: &Tool,
    params: &StrategyParams,
) -> Result<IsoProgram> {
    program_from_dense(tool, params, &guidance_passes(feature, area, tool, params)?)
}

/// How elementary areas are chained into one program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompositionOptions {
    /// Cut a guide shared by two adjacent areas once instead of once per area.
    pub share_guides: bool,
}

impl Default for CompositionOptions {
    fn default() -> Self {
        CompositionOptions { share_guides: true }
    }
}

/// Dense passes of every area of a composed area, in machining order.
pub fn composed_passes(
    feature: &FeatureModel,
    composed: &ComposedArea,
    tool: &Tool,
    params: &StrategyParams,
    opts: &CompositionOptions,
) -> Result<Vec<DensePass>> {
    params.validate(tool)?;
    let w = effective_stepover(tool, params.cusp_height, &feature.surface)?;
    let surface = &feature.surface;
    let areas = composed.areas();
    let samples: Vec<GuideSamples> =
        areas.par_iter().map(|a| GuideSamples::new(feature, a)).collect::<Result<_>>()?;
    // Sweep the whole feature from the boundary with the lower mean height.
    let from_b1 = samples[0].mean_z(surface, 0.0) <= samples[samples.len() - 1].mean_z(surface, 1.0);
    let order: Vec<usize> = if from_b1 { (0..areas.len()).collect() } else { (0..areas.len()).rev().collect() };
    let mut out: Vec<DensePass> = Vec::new();
    for (rank, &i) in order.iter().enumerate() {
        let skip = opts.share_guides && rank > 0;
        out.extend(area_passes(&samples[i], surface, w, from_b1, skip, params, i, out.len()));
    }
    Ok(out)
}

/// Morphing toolpaths of every elementary area, concatenated in machining order.
pub fn program_for_composed(
    feature: &FeatureModel,
    composed: &ComposedArea,
    tool: &Tool,
    params: &StrategyParams,
    opts: &CompositionOptions,
) -> Result<IsoProgram> {
    program_from_dense(tool, params, &composed_passes(feature, composed, tool, params, opts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::SplineCurve;

    fn area_of(f: &FeatureModel) -> MachiningArea {
        MachiningArea { lower: f.boundary1.clone(), upper: f.boundary2.clone() }
    }

    #[test]
    fn parallel_guides_give_straight_equal_passes() {
        let f = fixtures::flat_straight();
        let p = guidance_toolpath(&f, &area_of(&f), &Tool::default(), &StrategyParams::default()).unwrap();
        assert_eq!(p.passes().len(), 27);
        assert_eq!(p.blocks().len(), 27);
        for b in p.blocks() {
            assert!((b.length() - 100.0).abs() < 1e-9);
        }
        // Zigzag alternates direction.
        assert!(p.blocks()[0].direction().x > 0.0 && p.blocks()[1].direction().x < 0.0);
    }

    #[test]
    fn end_passes_follow_the_guides() {
        let f = fixtures::wavy(&fixtures::WavySpec::default()).unwrap();
        let params = StrategyParams::default();
        let passes = guidance_passes(&f, &area_of(&f), &Tool::default(), &params).unwrap();
        let first = &passes[0];
        let last = &passes[passes.len() - 1];
        let i1 = StationIndex::new(&f.boundary1, Vec2::X);
        let i2 = StationIndex::new(&f.boundary2, Vec2::X);
        for p in &first.points {
            assert!((i1.lateral(p.x).unwrap() - p.y).abs() < 1e-9);
        }
        for p in &last.points {
            assert!((i2.lateral(p.x).unwrap() - p.y).abs() < 1e-9);
        }
    }

    #[test]
    fn narrow_area_is_a_single_pass() {
        let f = fixtures::flat_straight();
        let a = MachiningArea {
            lower: f.boundary1.clone(),
            upper: SplineCurve::line(Point3::new(0.0, 0.3, 0.0), Point3::new(100.0, 0.3, 0.0)),
        };
        let p = guidance_passes(&f, &a, &Tool::default(), &StrategyParams::default()).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p[0].points[0].y - 0.15).abs() < 1e-12);
    }

    #[test]
    fn single_area_composition_matches() {
        let f = fixtures::converging();
        let t = Tool::default();
        let params = StrategyParams::default();
        let single = guidance_toolpath(&f, &area_of(&f), &t, &params).unwrap();
        let comp = program_for_composed(&f, &ComposedArea::single(&f), &t, &params, &CompositionOptions::default())
            .unwrap();
        assert_eq!(single, comp);
    }

    #[test]
    fn overrun_extends_passes() {
        let f = fixtures::flat_straight();
        let params = StrategyParams { overrun: 2.0, ..Default::default() };
        let p = guidance_toolpath(&f, &area_of(&f), &Tool::default(), &params).unwrap();
        assert!((p.blocks()[0].length() - 104.0).abs() < 1e-9);
    }
}
