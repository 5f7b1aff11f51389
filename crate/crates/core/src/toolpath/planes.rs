//! Parallel-plane passes: vertical planes along a basic direction, clipped to the area.

use rayon::prelude::*;

use super::guidance::{extend, program_from_dense};
use super::{effective_stepover, DensePass, IsoProgram, StrategyParams, Sweep, Tool, DENSE_STEP};
use crate::curvenet::MachiningArea;
use crate::error::{invalid, Error, Result};
use crate::geometry::{FeatureModel, Point3, StationIndex, Vec2};

/// Points this close (mm) to a guide or an end station count as inside.
const INSIDE_EPS: f64 = 1e-9;

/// Guide laterals tabulated on a uniform station grid for fast inside tests.
struct LateralTable {
    s0: f64,
    step: f64,
    values: Vec<f64>,
}

impl LateralTable {
    fn new(index: &StationIndex<'_>, lo: f64, hi: f64) -> Result<Self> {
        let n = ((hi - lo) / DENSE_STEP).ceil().max(1.0) as usize;
        let step = (hi - lo) / n as f64;
        let values = (0..=n).map(|i| index.lateral(lo + step * i as f64)).collect::<Result<_>>()?;
        Ok(LateralTable { s0: lo, step, values })
    }

    fn at(&self, s: f64) -> f64 {
        let f = ((s - self.s0) / self.step).clamp(0.0, (self.values.len() - 1) as f64);
        let i = (f.floor() as usize).min(self.values.len() - 2);
        let u = f - i as f64;
        self.values[i] * (1.0 - u) + self.values[i + 1] * u
    }
}

struct Region<'a> {
    dir: Vec2,
    lower: StationIndex<'a>,
    upper: StationIndex<'a>,
    lo_table: LateralTable,
    up_table: LateralTable,
    range: (f64, f64),
}

impl<'a> Region<'a> {
    fn new(feature: &FeatureModel, area: &'a MachiningArea) -> Result<Self> {
        let dir = feature.machining_dir;
        let lower = StationIndex::new(&area.lower, dir);
        let upper = StationIndex::new(&area.upper, dir);
        let (l0, l1) = lower.extent();
        let (u0, u1) = upper.extent();
        let range = (l0.max(u0), l1.min(u1));
        if range.1 <= range.0 {
            return Err(Error::Geometry("area guides share no station range".into()));
        }
        let lo_table = LateralTable::new(&lower, range.0, range.1)?;
        let up_table = LateralTable::new(&upper, range.0, range.1)?;
        Ok(Region { dir, lower, upper, lo_table, up_table, range })
    }

    fn inside_fast(&self, q: Vec2) -> bool {
        let s = q.dot(self.dir);
        if s < self.range.0 - INSIDE_EPS || s > self.range.1 + INSIDE_EPS {
            return false;
        }
        let l = q.dot(self.dir.perp());
        let (a, b) = (self.lo_table.at(s), self.up_table.at(s));
        l >= a.min(b) - INSIDE_EPS && l <= a.max(b) + INSIDE_EPS
    }

    fn inside_exact(&self, q: Vec2) -> bool {
        let s = q.dot(self.dir);
        if s < self.range.0 - INSIDE_EPS || s > self.range.1 + INSIDE_EPS {
            return false;
        }
        let l = q.dot(self.dir.perp());
        let s = s.clamp(self.range.0, self.range.1);
        match (self.lower.lateral(s), self.upper.lateral(s)) {
            (Ok(a), Ok(b)) => l >= a.min(b) - INSIDE_EPS && l <= a.max(b) + INSIDE_EPS,
            _ => false,
        }
    }
}

/// Dense passes of the parallel-plane strategy, one per connected piece of
/// each plane inside the area.
pub fn parallel_plane_passes(
    feature: &FeatureModel,
    area: &MachiningArea,
    basic_dir: Vec2,
    tool: &Tool,
    params: &StrategyParams,
) -> Result<Vec<DensePass>> {
    params.validate(tool)?;
    let bd = basic_dir.normalized().ok_or_else(|| Error::InvalidInput("zero basic direction".into()))?;
    let across = bd.perp();
    let region = Region::new(feature, area)?;
    let surface = &feature.surface;

    let w = effective_stepover(tool, params.cusp_height, surface)?;
    let spacing = w / surface.max_slope_factor(across, 120);

    let guide_pts: Vec<Vec2> = [&area.lower, &area.upper].iter().flat_map(|c| c.sample(2000)).map(|p| p.xy()).collect();
    let (mut umin, mut umax, mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for q in &guide_pts {
        umin = umin.min(q.dot(bd));
        umax = umax.max(q.dot(bd));
        vmin = vmin.min(q.dot(across));
        vmax = vmax.max(q.dot(across));
    }
    if vmax - vmin <= 0.0 {
        return Err(Error::EmptyProgram("area has no lateral extent".into()));
    }
    let planes = ((vmax - vmin) / spacing).ceil().max(1.0) as usize;
    let mean_v = |c: &crate::geometry::SplineCurve| c.sample(200).iter().map(|p| p.xy().dot(across)).sum::<f64>();
    let mean_z = |c: &crate::geometry::SplineCurve| c.sample(200).iter().map(|p| p.z).sum::<f64>();
    // Start at the guide with the lower mean height.
    let start_lower = mean_z(&area.lower) <= mean_z(&area.upper);
    let start_guide_low_v = (mean_v(&area.lower) <= mean_v(&area.upper)) == start_lower;
    let vs: Vec<f64> = (0..=planes)
        .map(|k| {
            let k = if start_guide_low_v { k } else { planes - k };
            vmin + (vmax - vmin) * k as f64 / planes as f64
        })
        .collect();

    let nu = ((umax - umin) / DENSE_STEP).ceil().max(1.0) as usize;
    let at = |u: f64, v: f64| bd * u + across * v;
    let pieces_per_plane: Vec<Vec<Vec<Point3>>> = vs
        .par_iter()
        .map(|&v| {
            let us: Vec<f64> = (0..=nu).map(|i| umin + (umax - umin) * i as f64 / nu as f64).collect();
            let inside: Vec<bool> = us.iter().map(|&u| region.inside_fast(at(u, v))).collect();
            // Edge between an inside and an outside sample, by bisection.
            let edge = |a: f64, b: f64| {
                let (mut a, mut b) = (a, b);
                let ina = region.inside_exact(at(a, v));
                for _ in 0..50 {
                    let m = 0.5 * (a + b);
                    if region.inside_exact(at(m, v)) == ina {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                if ina { a } else { b }
            };
            let mut pieces = Vec::new();
            let mut i = 0;
            while i <= nu {
                if !inside[i] {
                    i += 1;
                    continue;
                }
                let first = i;
                while i < nu && inside[i + 1] {
                    i += 1;
                }
                let last = i;
                let mut u_line: Vec<f64> = Vec::with_capacity(last - first + 3);
                if first > 0 {
                    u_line.push(edge(us[first], us[first - 1]));
                }
                u_line.extend_from_slice(&us[first..=last]);
                if last < nu {
                    u_line.push(edge(us[last], us[last + 1]));
                }
                u_line.dedup_by(|b, a| (*b - *a).abs() < 1e-12);
                if u_line.len() >= 2 && u_line[u_line.len() - 1] - u_line[0] > 1e-6 {
                    pieces.push(u_line.iter().map(|&u| { let q = at(u, v); surface.drape(q.x, q.y) }).collect());
                }
                i += 1;
            }
            pieces
        })
        .collect();

    let mut out = Vec::new();
    let mut row = 0;
    for (lane, mut pieces) in pieces_per_plane.into_iter().enumerate() {
        if pieces.is_empty() {
            continue;
        }
        if params.sweep == Sweep::Zigzag && row % 2 == 1 {
            pieces.reverse();
            for p in &mut pieces {
                p.reverse();
            }
        }
        row += 1;
        let blend = lane as f64 / planes as f64;
        out.extend(pieces.into_iter().map(|points| DensePass { area: 0, lane, blend, points: extend(points, params.overrun) }));
    }
    if out.is_empty() {
        return Err(Error::EmptyProgram("no plane crosses the area".into()));
    }
    Ok(out)
}

/// Parallel-plane toolpath of one area.
pub fn parallel_planes_toolpath(
    feature: &FeatureModel,
    area: &MachiningArea,
    basic_dir: Vec2,
    tool: &Tool,
    params: &StrategyParams,
) -> Result<IsoProgram> {
    if !(basic_dir.x.is_finite() && basic_dir.y.is_finite()) {
        return invalid("non-finite basic direction");
    }
    program_from_dense(tool, params, &parallel_plane_passes(feature, area, basic_dir, tool, params)?)
}
