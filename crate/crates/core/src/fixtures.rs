//! Synthetic features. `master-like` stands in for a die floor with two curved,
//! non-parallel flank edges on a wavy surface.

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::geometry::{fit_spline, Domain, FeatureModel, Point3, SplineCurve, SurfaceKind, SurfacePatch, Vec2};

/// Sampling pitch (mm) of the boundary curves fitted from analytic edges.
pub const EDGE_PITCH: f64 = 0.5;

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 4] = ["master-like", "flat-straight", "converging", "wavy"];

/// Spline through `y = f(x)` on `[x0, x1]`, draped on `surface`.
pub fn edge_on_surface(surface: &SurfacePatch, x0: f64, x1: f64, f: impl Fn(f64) -> f64) -> Result<SplineCurve> {
    let n = ((x1 - x0) / EDGE_PITCH).ceil().max(1.0) as usize;
    let pts: Vec<Point3> = (0..=n)
        .map(|i| {
            let x = x0 + (x1 - x0) * i as f64 / n as f64;
            surface.height(x, f(x)).map(|z| Point3::new(x, f(x), z))
        })
        .collect::<Result<_>>()?;
    fit_spline(&pts, 5)
}

/// `x` in `[0, 140]`, `B1: y = 10 + 6 sin(2 pi x / 70)`,
/// `B2: y = 40 - 0.1 x + 4 sin(2 pi x / 50 + 1)`,
/// floor `z = 2 sin(2 pi x / 35) cos(pi y / 60)`.
pub fn master_like() -> FeatureModel {
    let domain = Domain::new([0.0, 140.0], [0.0, 50.0]).expect("static domain");
    let surface = SurfacePatch::new(SurfaceKind::Waves { amplitude: 2.0, x_period: 35.0, y_period: 60.0 }, domain)
        .expect("static surface");
    let b1 = edge_on_surface(&surface, 0.0, 140.0, |x| 10.0 + 6.0 * (2.0 * PI * x / 70.0).sin()).expect("edge");
    let b2 = edge_on_surface(&surface, 0.0, 140.0, |x| 40.0 - 0.1 * x + 4.0 * (2.0 * PI * x / 50.0 + 1.0).sin())
        .expect("edge");
    FeatureModel::new(surface, b1, b2, Vec2::X).expect("master-like is valid")
}

/// Flat floor, guides `y = 0` and `y = 10` on `x` in `[0, 100]`.
pub fn flat_straight() -> FeatureModel {
    let surface = SurfacePatch::flat(0.0, Domain::new([0.0, 100.0], [-5.0, 15.0]).expect("static domain"));
    let line = |y: f64| SplineCurve::line(Point3::new(0.0, y, 0.0), Point3::new(100.0, y, 0.0));
    FeatureModel::new(surface, line(0.0), line(10.0), Vec2::X).expect("flat-straight is valid")
}

/// Flat floor, guides `y = 0` and `y = 10 - 0.4 x` on `x` in `[0, 20]`.
pub fn converging() -> FeatureModel {
    let surface = SurfacePatch::flat(0.0, Domain::new([0.0, 20.0], [-5.0, 15.0]).expect("static domain"));
    let b1 = SplineCurve::line(Point3::new(0.0, 0.0, 0.0), Point3::new(20.0, 0.0, 0.0));
    let b2 = SplineCurve::line(Point3::new(0.0, 10.0, 0.0), Point3::new(20.0, 2.0, 0.0));
    FeatureModel::new(surface, b1, b2, Vec2::X).expect("converging is valid")
}

/// Parameters of a flat feature with two sinusoidal guides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavySpec {
    pub length: f64,
    /// Mean distance between the guides.
    pub gap: f64,
    pub amplitude: [f64; 2],
    pub period: [f64; 2],
    pub phase: [f64; 2],
}

impl Default for WavySpec {
    fn default() -> Self {
        WavySpec { length: 80.0, gap: 20.0, amplitude: [3.0, 2.0], period: [40.0, 30.0], phase: [0.0, 1.0] }
    }
}

/// Guides `y = a_i sin(2 pi x / T_i + phi_i)` offset by `gap`, on a flat floor.
pub fn wavy(spec: &WavySpec) -> Result<FeatureModel> {
    let WavySpec { length, gap, amplitude: a, period: t, phase: ph } = *spec;
    if !(length > 0.0 && t[0] > 0.0 && t[1] > 0.0) {
        return invalid("wavy feature needs a positive length and periods");
    }
    if a[0].abs() + a[1].abs() >= gap {
        return invalid("wavy guides would touch");
    }
    let margin = a[0].abs().max(a[1].abs()) + 5.0;
    let surface = SurfacePatch::flat(0.0, Domain::new([0.0, length], [-margin, gap + margin])?);
    let b1 = edge_on_surface(&surface, 0.0, length, |x| a[0] * (2.0 * PI * x / t[0] + ph[0]).sin())?;
    let b2 = edge_on_surface(&surface, 0.0, length, |x| gap + a[1] * (2.0 * PI * x / t[1] + ph[1]).sin())?;
    FeatureModel::new(surface, b1, b2, Vec2::X)
}

/// Built-in fixture by name.
pub fn by_name(name: &str) -> Result<FeatureModel> {
    match name {
        "master-like" => Ok(master_like()),
        "flat-straight" => Ok(flat_straight()),
        "converging" => Ok(converging()),
        "wavy" => wavy(&WavySpec::default()),
        other => invalid(format!("unknown fixture `{other}` (known: {})", NAMES.join(", "))),
    }
}
