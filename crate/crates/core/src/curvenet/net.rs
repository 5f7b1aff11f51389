//! Intermediate curves and iterative curve nets.

use serde::{Deserialize, Serialize};

use super::{RatioK, StepP};
use crate::error::{invalid, Result};
use crate::geometry::{
    fit_spline_with, FeatureModel, FitMode, Point3, SplineCurve, StationIndex, DEFAULT_DEGREE,
};

/// How station points become a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveOptions {
    pub degree: usize,
    pub fit: FitMode,
    /// Lift each combined point back onto the feature surface before fitting.
    pub project: bool,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions { degree: DEFAULT_DEGREE, fit: FitMode::Interpolate, project: true }
    }
}

/// Station points of an intermediate curve before and after projection.
#[derive(Debug, Clone, PartialEq)]
pub struct StationPoint {
    pub station: f64,
    pub from: Point3,
    pub to: Point3,
    /// `from + K (to - from)`.
    pub combined: Point3,
    /// `combined` lifted onto the surface (equal to `combined` when projection is off).
    pub point: Point3,
}

/// Station-wise combination of two curves at ratio `K`.
pub fn intermediate_points(
    from: &SplineCurve,
    to: &SplineCurve,
    k: RatioK,
    p: &StepP,
    feature: &FeatureModel,
    opts: &CurveOptions,
) -> Result<Vec<StationPoint>> {
    let (lo, hi) = feature.station_range()?;
    let stations = p.stations(lo, hi);
    if stations.len() < 2 {
        return invalid("step P yields fewer than 2 stations");
    }
    let ia = StationIndex::new(from, feature.machining_dir);
    let ib = StationIndex::new(to, feature.machining_dir);
    stations
        .into_iter()
        .map(|s| {
            let a = ia.crossing(s)?.1;
            let b = ib.crossing(s)?.1;
            let combined = a + (b - a) * k.value();
            let point = if opts.project {
                crate::geometry::project_to_surface(combined, &feature.surface)?
            } else {
                combined
            };
            Ok(StationPoint { station: s, from: a, to: b, combined, point })
        })
        .collect()
}

/// The curve through the points dividing `[from(s), to(s)]` at ratio `K` on every station plane.
pub fn intermediate_curve(
    from: &SplineCurve,
    to: &SplineCurve,
    k: RatioK,
    p: &StepP,
    feature: &FeatureModel,
) -> Result<SplineCurve> {
    intermediate_curve_with(from, to, k, p, feature, &CurveOptions::default())
}

pub fn intermediate_curve_with(
    from: &SplineCurve,
    to: &SplineCurve,
    k: RatioK,
    p: &StepP,
    feature: &FeatureModel,
    opts: &CurveOptions,
) -> Result<SplineCurve> {
    let pts: Vec<Point3> =
        intermediate_points(from, to, k, p, feature, opts)?.into_iter().map(|sp| sp.point).collect();
    fit_spline_with(&pts, opts.degree, opts.fit)
}

/// The median curve, `K = 0.5` between the two boundaries.
pub fn median_curve(feature: &FeatureModel, p: &StepP) -> Result<SplineCurve> {
    intermediate_curve(&feature.boundary1, &feature.boundary2, RatioK::new(0.5)?, p, feature)
}

/// Stopping parameters of [`build_net`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetOptions {
    /// A candidate closer than this to the target (mm) is discarded and ends the net.
    pub stop_eps: f64,
    pub max_iters: usize,
    pub curve: CurveOptions,
}

impl Default for NetOptions {
    fn default() -> Self {
        NetOptions { stop_eps: 0.4, max_iters: 50, curve: CurveOptions::default() }
    }
}

/// Station spacing used by the stop test, so that overshoot crossings between
/// construction stations are seen.
const STOP_CHECK_STEP: f64 = 0.5;

/// Ordered curves `{start, C_1, ..., C_n, target}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveNet {
    /// Identifiers of the start and target curves.
    pub direction: [String; 2],
    #[serde(rename = "K")]
    pub k: RatioK,
    #[serde(rename = "P")]
    pub p: StepP,
    pub curves: Vec<SplineCurve>,
    /// True when `max_iters` ended the construction.
    #[serde(default)]
    pub truncated: bool,
}

impl CurveNet {
    pub fn start(&self) -> &SplineCurve {
        &self.curves[0]
    }

    pub fn target(&self) -> &SplineCurve {
        self.curves.last().unwrap()
    }

    /// The generated curves `C_1 ..= C_n`.
    pub fn interior(&self) -> &[SplineCurve] {
        &self.curves[1..self.curves.len() - 1]
    }

    pub fn interior_count(&self) -> usize {
        self.curves.len() - 2
    }
}

/// Distance below which a curve counts as touching the target, and whether it crossed.
fn gap_to_target(candidate: &SplineCurve, target: &StationIndex<'_>, feature: &FeatureModel) -> Result<f64> {
    let (lo, hi) = feature.station_range()?;
    let n = ((hi - lo) / STOP_CHECK_STEP).ceil().max(1.0) as usize;
    let ic = StationIndex::new(candidate, feature.machining_dir);
    let stations = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64);
    Ok(crate::geometry::station::min_distance_indexed(&ic, target, stations)?.0)
}

/// Builds `C_1 = I(start, target)`, `C_j = I(C_{j-1}, target)` until a candidate
/// comes within `stop_eps` of the target or crosses it; that candidate is dropped.
pub fn build_net(
    start: (&str, &SplineCurve),
    target: (&str, &SplineCurve),
    k: RatioK,
    p: &StepP,
    feature: &FeatureModel,
    opts: &NetOptions,
) -> Result<CurveNet> {
    if start.0 == target.0 {
        return invalid("start and target curves must differ");
    }
    if !(opts.stop_eps > 0.0) {
        return invalid("stop_eps must be positive");
    }
    if opts.max_iters == 0 {
        return invalid("max_iters must be at least 1");
    }
    let target_index = StationIndex::new(target.1, feature.machining_dir);
    let mut curves = vec![start.1.clone()];
    let mut truncated = true;
    for _ in 0..opts.max_iters {
        let prev = curves.last().unwrap();
        let candidate = intermediate_curve_with(prev, target.1, k, p, feature, &opts.curve)?;
        if gap_to_target(&candidate, &target_index, feature)? <= opts.stop_eps {
            truncated = false;
            break;
        }
        curves.push(candidate);
    }
    curves.push(target.1.clone());
    Ok(CurveNet {
        direction: [start.0.to_string(), target.0.to_string()],
        k,
        p: p.clone(),
        curves,
        truncated,
    })
}
