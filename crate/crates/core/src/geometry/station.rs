//! Discretisation planes perpendicular to the machining direction and the
//! curve/plane crossings computed on them.

use serde::{Deserialize, Serialize};

use super::{Point3, SplineCurve, Vec2};
use crate::error::{invalid, Error, Result};

/// Tolerance, in mm, on the plane residual of a crossing.
pub const CROSSING_TOL: f64 = 1e-9;

/// A vertical plane `{p : p.xy . normal = station}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscretizationPlane {
    pub station: f64,
    pub normal: Vec2,
}

impl DiscretizationPlane {
    pub fn new(station: f64, normal: Vec2) -> Result<Self> {
        if !normal.is_unit() {
            return invalid(format!("plane normal {normal:?} is not a unit vector"));
        }
        if !station.is_finite() {
            return invalid("non-finite station");
        }
        Ok(DiscretizationPlane { station, normal })
    }

    pub fn signed_distance(&self, p: Point3) -> f64 {
        p.xy().dot(self.normal) - self.station
    }
}

/// Planes at each of `stations` sharing one normal.
pub fn planes(stations: &[f64], normal: Vec2) -> Result<Vec<DiscretizationPlane>> {
    stations.iter().map(|&s| DiscretizationPlane::new(s, normal)).collect()
}

/// Pre-sampled station coordinate of a curve along a direction; answers
/// repeated plane-crossing queries with a bracket search and Newton refinement.
#[derive(Debug, Clone)]
pub struct StationIndex<'a> {
    curve: &'a SplineCurve,
    dir: Vec2,
    params: Vec<f64>,
    stations: Vec<f64>,
    monotone: Option<bool>,
    min: f64,
    max: f64,
}

impl<'a> StationIndex<'a> {
    pub fn new(curve: &'a SplineCurve, dir: Vec2) -> Self {
        let n = (64 * curve.control_points().len()).clamp(512, 8192);
        let params: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let stations: Vec<f64> = params.iter().map(|&t| curve.eval(t).xy().dot(dir)).collect();
        let increasing = stations.windows(2).all(|w| w[1] > w[0]);
        let decreasing = stations.windows(2).all(|w| w[1] < w[0]);
        let monotone = if increasing {
            Some(true)
        } else if decreasing {
            Some(false)
        } else {
            None
        };
        let min = stations.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = stations.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        StationIndex { curve, dir, params, stations, monotone, min, max }
    }

    pub fn curve(&self) -> &SplineCurve {
        self.curve
    }

    /// Station extent `[min, max]` of the curve.
    pub fn extent(&self) -> (f64, f64) {
        (self.min, self.max)
    }

    fn residual(&self, t: f64, station: f64) -> f64 {
        self.curve.eval(t).xy().dot(self.dir) - station
    }

    fn refine(&self, mut lo: f64, mut hi: f64, station: f64) -> f64 {
        let mut glo = self.residual(lo, station);
        if glo == 0.0 {
            return lo;
        }
        let ghi = self.residual(hi, station);
        if ghi == 0.0 {
            return hi;
        }
        let mut t = lo + (hi - lo) * glo / (glo - ghi);
        for _ in 0..100 {
            let [p, d1, _] = self.curve.derivatives(t);
            let g = p.xy().dot(self.dir) - station;
            if g.abs() <= 1e-13 * (1.0 + station.abs()) {
                return t;
            }
            if (g < 0.0) == (glo < 0.0) {
                lo = t;
                glo = g;
            } else {
                hi = t;
            }
            let dg = d1.xy().dot(self.dir);
            let newton = t - g / dg;
            t = if dg != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-16 {
                break;
            }
        }
        t
    }

    /// Parameter and point where the curve crosses the plane at `station`.
    pub fn crossing(&self, station: f64) -> Result<(f64, Point3)> {
        if !station.is_finite() {
            return invalid("non-finite station");
        }
        if station < self.min - CROSSING_TOL || station > self.max + CROSSING_TOL {
            return Err(Error::OutOfRange { station, min: self.min, max: self.max });
        }
        let s = station.clamp(self.min, self.max);
        let bracket = match self.monotone {
            Some(increasing) => {
                let idx = if increasing {
                    self.stations.partition_point(|&v| v < s)
                } else {
                    self.stations.partition_point(|&v| v > s)
                };
                let i = idx.clamp(1, self.stations.len() - 1);
                (i - 1, i)
            }
            None => {
                let hits: Vec<usize> = (1..self.stations.len())
                    .filter(|&i| {
                        let a = self.stations[i - 1] - s;
                        let b = self.stations[i] - s;
                        (a <= 0.0 && b >= 0.0 || a >= 0.0 && b <= 0.0) && !(b == 0.0 && i + 1 < self.stations.len())
                    })
                    .collect();
                match hits.len() {
                    0 => return Err(Error::OutOfRange { station, min: self.min, max: self.max }),
                    1 => (hits[0] - 1, hits[0]),
                    n => return Err(Error::Ambiguous { station, crossings: n }),
                }
            }
        };
        let t = self.refine(self.params[bracket.0], self.params[bracket.1], s);
        Ok((t, self.curve.eval(t)))
    }

    /// Lateral coordinate `p . perp(dir)` of the crossing at `station`.
    pub fn lateral(&self, station: f64) -> Result<f64> {
        Ok(self.crossing(station)?.1.xy().dot(self.dir.perp()))
    }
}

/// The unique point of `curve` on `plane`.
pub fn curve_plane_point(curve: &SplineCurve, plane: &DiscretizationPlane) -> Result<Point3> {
    Ok(StationIndex::new(curve, plane.normal).crossing(plane.station)?.1)
}

/// Minimum distance between two curves over a set of stations, with the station
/// where it occurs. A change of lateral order between adjacent stations counts
/// as a crossing and reports distance 0 at the interpolated crossing station.
pub fn min_distance(a: &SplineCurve, b: &SplineCurve, stations: &[DiscretizationPlane]) -> Result<(f64, f64)> {
    if stations.is_empty() {
        return invalid("empty station list");
    }
    let dir = stations[0].normal;
    if stations.iter().any(|p| p.normal != dir) {
        return invalid("stations must share one normal");
    }
    let ia = StationIndex::new(a, dir);
    let ib = StationIndex::new(b, dir);
    min_distance_indexed(&ia, &ib, stations.iter().map(|p| p.station))
}

pub(crate) fn min_distance_indexed(
    ia: &StationIndex<'_>,
    ib: &StationIndex<'_>,
    stations: impl IntoIterator<Item = f64>,
) -> Result<(f64, f64)> {
    let lat = ia.dir.perp();
    let mut best = (f64::INFINITY, f64::NAN);
    let mut prev: Option<(f64, f64)> = None;
    for s in stations {
        let pa = ia.crossing(s)?.1;
        let pb = ib.crossing(s)?.1;
        let d = pa.distance(pb);
        let side = (pb - pa).xy().dot(lat);
        if let Some((ps, pside)) = prev {
            if pside * side < 0.0 {
                let at = ps + (s - ps) * pside / (pside - side);
                return Ok((0.0, at));
            }
        }
        if d < best.0 - 1e-12 {
            best = (d, s);
        }
        if side != 0.0 {
            prev = Some((s, side));
        }
    }
    Ok(best)
}
