//! Height-field surfaces `z = f(x, y)` over a rectangular domain.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::Point3;
use crate::error::{invalid, Error, Result};

const DOMAIN_EPS: f64 = 1e-9;

/// Rectangular `(x, y)` domain, millimetres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

impl Domain {
    pub fn new(x: [f64; 2], y: [f64; 2]) -> Result<Self> {
        let ok = |r: [f64; 2]| r[0].is_finite() && r[1].is_finite() && r[0] < r[1];
        if !ok(x) || !ok(y) {
            return invalid(format!("empty or non-finite domain x={x:?} y={y:?}"));
        }
        Ok(Domain { x, y })
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x[0] - DOMAIN_EPS
            && x <= self.x[1] + DOMAIN_EPS
            && y >= self.y[0] - DOMAIN_EPS
            && y <= self.y[1] + DOMAIN_EPS
    }

    pub fn width(&self) -> f64 {
        self.x[1] - self.x[0]
    }

    pub fn height(&self) -> f64 {
        self.y[1] - self.y[0]
    }
}

/// The height function of a [`SurfacePatch`].
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceKind {
    /// `z = z0`.
    Flat { z: f64 },
    /// `z = a x + b y + c`.
    Plane { a: f64, b: f64, c: f64 },
    /// `z = amplitude * sin(2 pi x / x_period) * cos(pi y / y_period)`, the
    /// wavy floor of the `master-like` feature.
    Waves { amplitude: f64, x_period: f64, y_period: f64 },
    /// Uniform grid of heights, `grid[j][i]` at `(x_i, y_j)`, blended with
    /// C1 bicubic Catmull-Rom patches.
    Bicubic { grid: Vec<Vec<f64>> },
}

/// A bounded height-field surface patch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceDoc", into = "SurfaceDoc")]
pub struct SurfacePatch {
    kind: SurfaceKind,
    domain: Domain,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SurfaceDoc {
    kind: String,
    domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<BTreeMap<String, f64>>,
}

impl TryFrom<SurfaceDoc> for SurfacePatch {
    type Error = Error;
    fn try_from(d: SurfaceDoc) -> Result<Self> {
        let params = d.params.unwrap_or_default();
        let get = |k: &str, default: f64| params.get(k).copied().unwrap_or(default);
        let kind = match d.kind.as_str() {
            "bicubic" => SurfaceKind::Bicubic {
                grid: d.grid.ok_or_else(|| Error::InvalidInput("bicubic surface needs a grid".into()))?,
            },
            "fixture:flat" => SurfaceKind::Flat { z: get("z", 0.0) },
            "fixture:plane" => SurfaceKind::Plane { a: get("a", 0.0), b: get("b", 0.0), c: get("c", 0.0) },
            "fixture:waves" | "fixture:master-like" => SurfaceKind::Waves {
                amplitude: get("amplitude", 2.0),
                x_period: get("x_period", 35.0),
                y_period: get("y_period", 60.0),
            },
            other => return invalid(format!("unknown surface kind `{other}`")),
        };
        SurfacePatch::new(kind, d.domain)
    }
}

impl From<SurfacePatch> for SurfaceDoc {
    fn from(s: SurfacePatch) -> Self {
        let params = |kv: &[(&str, f64)]| Some(kv.iter().map(|(k, v)| (k.to_string(), *v)).collect());
        let (kind, grid, params) = match s.kind {
            SurfaceKind::Bicubic { grid } => ("bicubic", Some(grid), None),
            SurfaceKind::Flat { z } => ("fixture:flat", None, params(&[("z", z)])),
            SurfaceKind::Plane { a, b, c } => ("fixture:plane", None, params(&[("a", a), ("b", b), ("c", c)])),
            SurfaceKind::Waves { amplitude, x_period, y_period } => (
                "fixture:waves",
                None,
                params(&[("amplitude", amplitude), ("x_period", x_period), ("y_period", y_period)]),
            ),
        };
        SurfaceDoc { kind: kind.to_string(), domain: s.domain, grid, params }
    }
}

fn catmull_rom(p: [f64; 4], u: f64) -> (f64, f64) {
    let [p0, p1, p2, p3] = p;
    let a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    let b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    let c = -0.5 * p0 + 0.5 * p2;
    let d = p1;
    let v = ((a * u + b) * u + c) * u + d;
    let dv = (3.0 * a * u + 2.0 * b) * u + c;
    (v, dv)
}

/// Index of the cell containing `s` on `n` uniform nodes, the local coordinate and the spacing.
fn cell(s: f64, lo: f64, hi: f64, n: usize) -> (usize, f64, f64) {
    let h = (hi - lo) / (n - 1) as f64;
    let f = ((s - lo) / h).clamp(0.0, (n - 1) as f64);
    let i = (f.floor() as usize).min(n - 2);
    (i, f - i as f64, h)
}

/// Grid value with linear extrapolation one node past each edge.
fn node(grid: &[Vec<f64>], i: isize, j: isize) -> f64 {
    let ny = grid.len() as isize;
    let nx = grid[0].len() as isize;
    let at = |i: isize, j: isize| grid[j as usize][i as usize];
    let ci = i.clamp(0, nx - 1);
    let cj = j.clamp(0, ny - 1);
    let mut v = at(ci, cj);
    if i < 0 {
        v = 2.0 * at(0, cj) - at(1, cj);
    } else if i >= nx {
        v = 2.0 * at(nx - 1, cj) - at(nx - 2, cj);
    }
    if j < 0 || j >= ny {
        let (e, n) = if j < 0 { (0, 1) } else { (ny - 1, ny - 2) };
        let row = |jj: isize| {
            if i < 0 {
                2.0 * at(0, jj) - at(1, jj)
            } else if i >= nx {
                2.0 * at(nx - 1, jj) - at(nx - 2, jj)
            } else {
                at(ci, jj)
            }
        };
        v = 2.0 * row(e) - row(n);
    }
    v
}

impl SurfacePatch {
    pub fn new(kind: SurfaceKind, domain: Domain) -> Result<Self> {
        Domain::new(domain.x, domain.y)?;
        match &kind {
            SurfaceKind::Bicubic { grid } => {
                if grid.len() < 2 || grid[0].len() < 2 {
                    return invalid("bicubic grid needs at least 2x2 nodes");
                }
                if grid.iter().any(|r| r.len() != grid[0].len()) {
                    return invalid("bicubic grid rows differ in length");
                }
                if grid.iter().flatten().any(|v| !v.is_finite()) {
                    return invalid("bicubic grid contains non-finite heights");
                }
            }
            SurfaceKind::Waves { x_period, y_period, amplitude } => {
                if !(*x_period > 0.0 && *y_period > 0.0 && amplitude.is_finite()) {
                    return invalid("wave periods must be positive");
                }
            }
            SurfaceKind::Flat { z } => {
                if !z.is_finite() {
                    return invalid("non-finite flat height");
                }
            }
            SurfaceKind::Plane { a, b, c } => {
                if !(a.is_finite() && b.is_finite() && c.is_finite()) {
                    return invalid("non-finite plane coefficients");
                }
            }
        }
        Ok(SurfacePatch { kind, domain })
    }

    pub fn flat(z: f64, domain: Domain) -> Self {
        SurfacePatch { kind: SurfaceKind::Flat { z }, domain }
    }

    pub fn kind(&self) -> &SurfaceKind {
        &self.kind
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.domain.contains(x, y)
    }

    /// Height and gradient `(f, df/dx, df/dy)`; no domain check.
    pub fn eval_unchecked(&self, x: f64, y: f64) -> (f64, f64, f64) {
        match &self.kind {
            SurfaceKind::Flat { z } => (*z, 0.0, 0.0),
            SurfaceKind::Plane { a, b, c } => (a * x + b * y + c, *a, *b),
            SurfaceKind::Waves { amplitude, x_period, y_period } => {
                let wx = 2.0 * PI / x_period;
                let wy = PI / y_period;
                let (sx, cx) = (wx * x).sin_cos();
                let (sy, cy) = (wy * y).sin_cos();
                (amplitude * sx * cy, amplitude * wx * cx * cy, -amplitude * wy * sx * sy)
            }
            SurfaceKind::Bicubic { grid } => {
                let (nx, ny) = (grid[0].len(), grid.len());
                let (i, u, hx) = cell(x, self.domain.x[0], self.domain.x[1], nx);
                let (j, v, hy) = cell(y, self.domain.y[0], self.domain.y[1], ny);
                let mut rows = [0.0; 4];
                let mut drows = [0.0; 4];
                for (k, jj) in (j as isize - 1..=j as isize + 2).enumerate() {
                    let p = [
                        node(grid, i as isize - 1, jj),
                        node(grid, i as isize, jj),
                        node(grid, i as isize + 1, jj),
                        node(grid, i as isize + 2, jj),
                    ];
                    let (val, d) = catmull_rom(p, u);
                    rows[k] = val;
                    drows[k] = d;
                }
                let (z, dzdv) = catmull_rom(rows, v);
                let (dzdu, _) = catmull_rom(drows, v);
                (z, dzdu / hx, dzdv / hy)
            }
        }
    }

    /// Height at `(x, y)`, or an error outside the domain.
    pub fn height(&self, x: f64, y: f64) -> Result<f64> {
        if !self.contains(x, y) {
            return Err(Error::OutsideDomain { x, y });
        }
        Ok(self.eval_unchecked(x, y).0)
    }

    /// Upward unit normal.
    pub fn normal(&self, x: f64, y: f64) -> Point3 {
        let (_, fx, fy) = self.eval_unchecked(x, y);
        Point3::new(-fx, -fy, 1.0).normalized().unwrap()
    }

    /// Surface point above or below `(x, y)`, without a domain check.
    pub fn drape(&self, x: f64, y: f64) -> Point3 {
        Point3::new(x, y, self.eval_unchecked(x, y).0)
    }

    /// Largest absolute normal curvature over the domain, estimated from the
    /// Hessian on a `samples x samples` grid.
    pub fn max_normal_curvature(&self, samples: usize) -> f64 {
        let samples = samples.max(2);
        let d = self.domain;
        let h = 1e-4 * d.width().max(d.height());
        let mut worst: f64 = 0.0;
        for j in 0..samples {
            for i in 0..samples {
                let x = d.x[0] + d.width() * i as f64 / (samples - 1) as f64;
                let y = d.y[0] + d.height() * j as f64 / (samples - 1) as f64;
                let (_, gx, gy) = self.eval_unchecked(x, y);
                let (_, gxp, gyp) = self.eval_unchecked(x + h, y);
                let (_, gxm, gym) = self.eval_unchecked(x - h, y);
                let (_, gxq, gyq) = self.eval_unchecked(x, y + h);
                let (_, gxn, gyn) = self.eval_unchecked(x, y - h);
                let fxx = (gxp - gxm) / (2.0 * h);
                let fyy = (gyq - gyn) / (2.0 * h);
                let fxy = 0.5 * ((gyp - gym) / (2.0 * h) + (gxq - gxn) / (2.0 * h));
                let tr = 0.5 * (fxx + fyy);
                let disc = (0.25 * (fxx - fyy).powi(2) + fxy * fxy).sqrt();
                let eig = (tr.abs() + disc) / (1.0 + gx * gx + gy * gy).sqrt();
                worst = worst.max(eig);
            }
        }
        worst
    }

    /// Largest slope factor `sqrt(1 + (grad f . dir)^2)` across the domain for a
    /// horizontal unit direction `dir`.
    pub fn max_slope_factor(&self, dir: super::Vec2, samples: usize) -> f64 {
        let samples = samples.max(2);
        let d = self.domain;
        let mut worst: f64 = 1.0;
        for j in 0..samples {
            for i in 0..samples {
                let x = d.x[0] + d.width() * i as f64 / (samples - 1) as f64;
                let y = d.y[0] + d.height() * j as f64 / (samples - 1) as f64;
                let (_, gx, gy) = self.eval_unchecked(x, y);
                let s = gx * dir.x + gy * dir.y;
                worst = worst.max((1.0 + s * s).sqrt());
            }
        }
        worst
    }
}

/// Returns `(x, y, f(x, y))`.
pub fn project_to_surface(point: Point3, surface: &SurfacePatch) -> Result<Point3> {
    let z = surface.height(point.x, point.y)?;
    Ok(Point3::new(point.x, point.y, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom() -> Domain {
        Domain::new([0.0, 140.0], [0.0, 50.0]).unwrap()
    }

    #[test]
    fn projection_examples() {
        let flat = SurfacePatch::flat(0.0, dom());
        assert_eq!(project_to_surface(Point3::new(1.0, 2.0, 9.0), &flat).unwrap(), Point3::new(1.0, 2.0, 0.0));
        let plane = SurfacePatch::new(SurfaceKind::Plane { a: 1.0, b: 1.0, c: 0.0 }, dom()).unwrap();
        assert_eq!(project_to_surface(Point3::new(1.0, 2.0, 0.0), &plane).unwrap(), Point3::new(1.0, 2.0, 3.0));
        let waves = SurfacePatch::new(
            SurfaceKind::Waves { amplitude: 2.0, x_period: 35.0, y_period: 60.0 },
            dom(),
        )
        .unwrap();
        let corner = project_to_surface(Point3::new(140.0, 50.0, 0.0), &waves).unwrap();
        let expected = 2.0 * (2.0 * PI * 140.0 / 35.0).sin() * (PI * 50.0 / 60.0).cos();
        assert!((corner.z - expected).abs() < 1e-12);
        assert!(matches!(
            project_to_surface(Point3::new(-1.0, 0.0, 0.0), &flat),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn bicubic_reproduces_nodes_and_planes() {
        let d = Domain::new([0.0, 4.0], [0.0, 2.0]).unwrap();
        let grid: Vec<Vec<f64>> =
            (0..3).map(|j| (0..5).map(|i| 0.5 * i as f64 - 2.0 * j as f64 + 1.0).collect()).collect();
        let s = SurfacePatch::new(SurfaceKind::Bicubic { grid }, d).unwrap();
        for &(x, y) in &[(0.0, 0.0), (1.3, 0.2), (3.99, 1.7), (4.0, 2.0)] {
            let (z, fx, fy) = s.eval_unchecked(x, y);
            let exp = 0.5 * x - 2.0 * y + 1.0;
            assert!((z - exp).abs() < 1e-12, "{x} {y} {z} {exp}");
            assert!((fx - 0.5).abs() < 1e-12 && (fy + 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let grid: Vec<Vec<f64>> =
            (0..6).map(|j| (0..7).map(|i| ((i * j) as f64 * 0.3).sin()).collect()).collect();
        let s = SurfacePatch::new(SurfaceKind::Bicubic { grid }, dom()).unwrap();
        let h = 1e-6;
        for &(x, y) in &[(10.0, 10.0), (71.3, 22.2), (130.0, 48.0)] {
            let (_, fx, fy) = s.eval_unchecked(x, y);
            let dx = (s.eval_unchecked(x + h, y).0 - s.eval_unchecked(x - h, y).0) / (2.0 * h);
            let dy = (s.eval_unchecked(x, y + h).0 - s.eval_unchecked(x, y - h).0) / (2.0 * h);
            assert!((fx - dx).abs() < 1e-6 && (fy - dy).abs() < 1e-6);
        }
    }

    #[test]
    fn json_round_trip() {
        let s = SurfacePatch::new(
            SurfaceKind::Waves { amplitude: 2.0, x_period: 35.0, y_period: 60.0 },
            dom(),
        )
        .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"kind\":\"fixture:waves\""));
        assert_eq!(serde_json::from_str::<SurfacePatch>(&text).unwrap(), s);
        assert!(serde_json::from_str::<SurfacePatch>(r#"{"kind":"nurbs","domain":{"x":[0,1],"y":[0,1]}}"#).is_err());
    }
}
