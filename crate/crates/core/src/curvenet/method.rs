//! Four-step guidance-curve definition: median, step adaptation, one
//! intermediate per half, candidate ratios.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::compose::{B1, B2, MEDIAN};
use super::{intermediate_curve, median_curve, ComposedArea, RatioK, StepOverride, StepP};
use crate::error::{invalid, Result};
use crate::geometry::{curvature_profile, inflection_stations, is_straight, min_radius, FeatureModel, SplineCurve};

const RADIUS_SAMPLES: usize = 512;

/// Ratio used for the intermediate curve of each half.
pub const HALF_RATIO: f64 = 0.75;

/// Refines `p0` between projected inflection stations of the two boundaries
/// closer than `2 p0`, so every such interval gets at least two stations.
pub fn determine_step(feature: &FeatureModel, p0: &StepP) -> StepP {
    let dir = feature.machining_dir;
    let mut stations = inflection_stations(&feature.boundary1, dir);
    stations.extend(inflection_stations(&feature.boundary2, dir));
    stations.sort_by(f64::total_cmp);
    stations.dedup_by(|b, a| (*b - *a).abs() < 1e-9);
    let limit = 2.0 * p0.value();
    let mut overrides: Vec<StepOverride> = stations
        .windows(2)
        .filter(|w| w[1] - w[0] < limit)
        .map(|w| StepOverride { from: w[0], to: w[1], step: 0.5 * (w[1] - w[0]) })
        .collect();
    if overrides.is_empty() {
        return p0.clone();
    }
    // Existing overrides that do not clash with the new ones are kept.
    for o in p0.overrides() {
        if overrides.iter().all(|n| o.to <= n.from || o.from >= n.to) {
            overrides.push(*o);
        }
    }
    StepP::with_overrides(p0.value(), overrides).expect("adjacent inflection intervals do not overlap")
}

/// Smallest radius of curvature of a guide, infinite for a straight one.
pub fn guide_min_radius(curve: &SplineCurve) -> f64 {
    if is_straight(curve) {
        return f64::INFINITY;
    }
    curvature_profile(curve, RADIUS_SAMPLES).map(|p| min_radius(&p)).unwrap_or(f64::INFINITY)
}

/// Which guide of a half the intermediate curve grows from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HalfStart {
    Boundary,
    Median,
    /// Both guides straight: the half stays a single area.
    None,
}

/// One candidate decomposition for a given ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuidanceCandidate {
    #[serde(rename = "K")]
    pub k: RatioK,
    pub starts: [HalfStart; 2],
    pub area: ComposedArea,
}

/// Output of [`guidance_method`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuidanceOutcome {
    /// The adapted station step shared by the median and the intermediates.
    #[serde(rename = "P")]
    pub p: StepP,
    pub candidates: Vec<GuidanceCandidate>,
}

impl GuidanceOutcome {
    /// The decomposition at the default half ratio, or the first candidate.
    pub fn primary(&self) -> &ComposedArea {
        let c = self
            .candidates
            .iter()
            .find(|c| (c.k.value() - HALF_RATIO).abs() < 1e-12)
            .unwrap_or(&self.candidates[0]);
        &c.area
    }
}

fn half_start(boundary: &SplineCurve, median: &SplineCurve) -> HalfStart {
    let (sb, sm) = (is_straight(boundary), is_straight(median));
    match (sb, sm) {
        (true, true) => HalfStart::None,
        (true, false) => HalfStart::Boundary,
        (false, true) => HalfStart::Median,
        _ => {
            if guide_min_radius(boundary) >= guide_min_radius(median) {
                HalfStart::Boundary
            } else {
                HalfStart::Median
            }
        }
    }
}

/// Median, adapted step, then one intermediate curve per half at each ratio in
/// `k_refine` (the default half ratio when empty).
pub fn guidance_method(feature: &FeatureModel, p0: &StepP, k_refine: &[RatioK]) -> Result<GuidanceOutcome> {
    let default = [RatioK::new(HALF_RATIO)?];
    let ks = if k_refine.is_empty() { &default[..] } else { k_refine };
    if ks.windows(2).any(|w| w[0] == w[1]) {
        return invalid("duplicate ratios in K_refine");
    }
    let p = determine_step(feature, p0);
    let med = median_curve(feature, &p)?;
    let starts = [half_start(&feature.boundary1, &med), half_start(&feature.boundary2, &med)];

    let candidates = ks
        .iter()
        .map(|&k| {
            let half = |b: &SplineCurve, start: HalfStart| -> Result<Option<SplineCurve>> {
                match start {
                    HalfStart::None => Ok(None),
                    HalfStart::Boundary => intermediate_curve(b, &med, k, &p, feature).map(Some),
                    HalfStart::Median => intermediate_curve(&med, b, k, &p, feature).map(Some),
                }
            };
            let (c1, c2) = rayon::join(|| half(&feature.boundary1, starts[0]), || half(&feature.boundary2, starts[1]));
            let (c1, c2) = (c1?, c2?);
            let mut curves = BTreeMap::from([
                (B1.to_string(), feature.boundary1.clone()),
                (B2.to_string(), feature.boundary2.clone()),
                (MEDIAN.to_string(), med.clone()),
            ]);
            let mut ids = vec![B1.to_string()];
            if let Some(c) = c1 {
                curves.insert("C1".into(), c);
                ids.push("C1".into());
            }
            ids.push(MEDIAN.into());
            if let Some(c) = c2 {
                curves.insert("C2".into(), c);
                ids.push("C2".into());
            }
            ids.push(B2.into());
            Ok(GuidanceCandidate { k, starts, area: ComposedArea::from_chain(&ids, curves)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GuidanceOutcome { p, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fit_spline, Domain, Point3, SurfacePatch, Vec2};

    fn flat(y: [f64; 2]) -> SurfacePatch {
        SurfacePatch::flat(0.0, Domain::new([0.0, 100.0], y).unwrap())
    }

    fn graph(f: impl Fn(f64) -> f64) -> SplineCurve {
        let pts: Vec<_> = (0..=200).map(|i| Point3::new(i as f64 * 0.5, f(i as f64 * 0.5), 0.0)).collect();
        fit_spline(&pts, 5).unwrap()
    }

    fn line(y: f64) -> SplineCurve {
        SplineCurve::line(Point3::new(0.0, y, 0.0), Point3::new(100.0, y, 0.0))
    }

    #[test]
    fn straight_boundaries_keep_the_step_and_give_two_areas() {
        let f = FeatureModel::new(flat([-1.0, 30.0]), line(0.0), line(20.0), Vec2::X).unwrap();
        let p0 = StepP::new(5.0).unwrap();
        assert_eq!(determine_step(&f, &p0), p0);
        let out = guidance_method(&f, &p0, &[]).unwrap();
        assert_eq!(out.primary().chain(), vec!["B1", "MED", "B2"]);
        assert_eq!(out.candidates[0].starts, [HalfStart::None, HalfStart::None]);
    }

    #[test]
    fn step_adapts_between_close_inflections() {
        // sin(x/10): inflections every 31.4 mm, wider than 2 P0.
        let f = FeatureModel::new(flat([-5.0, 30.0]), graph(|x| (x / 10.0).sin()), line(20.0), Vec2::X).unwrap();
        let p0 = StepP::new(5.0).unwrap();
        assert_eq!(determine_step(&f, &p0), p0);
        // Period 12 mm: inflections 6 mm apart -> 3 mm step.
        let w = std::f64::consts::PI / 6.0;
        let f = FeatureModel::new(flat([-5.0, 30.0]), graph(|x| (w * x).sin()), line(20.0), Vec2::X).unwrap();
        let p = determine_step(&f, &p0);
        assert!(!p.overrides().is_empty());
        for o in p.overrides() {
            assert!((o.step - 3.0).abs() < 1e-3, "{o:?}");
            assert!((o.to - o.from - 6.0).abs() < 2e-3, "{o:?}");
        }
    }

    #[test]
    fn wavy_and_straight_halves() {
        // B1 wavy, B2 straight: upper half starts from the straight boundary,
        // lower half from the (less curved) median.
        let b1 = graph(|x| 3.0 * (x / 8.0).sin());
        let f = FeatureModel::new(flat([-5.0, 30.0]), b1, line(24.0), Vec2::X).unwrap();
        let p0 = StepP::new(5.0).unwrap();
        let out = guidance_method(&f, &p0, &[]).unwrap();
        let c = &out.candidates[0];
        assert_eq!(c.starts, [HalfStart::Median, HalfStart::Boundary]);
        assert_eq!(c.area.len(), 4);
        assert!(guide_min_radius(&f.boundary1) < guide_min_radius(c.area.curve("MED").unwrap()));
        // C2 sits at 0.75 from B2 toward the median.
        let x = 40.0;
        let yb1 = 3.0 * (x / 8.0_f64).sin();
        let ymed = 0.5 * (yb1 + 24.0);
        let c2 = crate::geometry::StationIndex::new(c.area.curve("C2").unwrap(), Vec2::X).lateral(x).unwrap();
        assert!((c2 - (24.0 + 0.75 * (ymed - 24.0))).abs() < 1e-3, "{c2}");
        let many = guidance_method(&f, &p0, &[RatioK::new(0.6).unwrap(), RatioK::new(0.75).unwrap()]).unwrap();
        assert_eq!(many.candidates.len(), 2);
        assert_eq!(many.primary(), &c.area);
    }
}
