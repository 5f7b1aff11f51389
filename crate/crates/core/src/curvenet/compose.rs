//! Composed machining areas: ordered strips between consecutive guide curves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{build_net, median_curve, CurveNet, NetOptions, RatioK, StepP};
use crate::error::{invalid, Error, Result};
use crate::geometry::{FeatureModel, SplineCurve};

pub const B1: &str = "B1";
pub const B2: &str = "B2";
pub const MEDIAN: &str = "MED";

/// One strip of material between two guide curves.
#[derive(Debug, Clone, PartialEq)]
pub struct MachiningArea {
    pub lower: SplineCurve,
    pub upper: SplineCurve,
}

/// Guide identifiers of one elementary area.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AreaRef {
    pub lower: String,
    pub upper: String,
}

/// Elementary areas ordered from the `B1` side to the `B2` side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComposedDoc")]
pub struct ComposedArea {
    areas: Vec<AreaRef>,
    curves: BTreeMap<String, SplineCurve>,
    /// A net ran out of curves before the requested depth.
    #[serde(default)]
    truncated: bool,
}

#[derive(Deserialize)]
struct ComposedDoc {
    areas: Vec<AreaRef>,
    curves: BTreeMap<String, SplineCurve>,
    #[serde(default)]
    truncated: bool,
}

impl TryFrom<ComposedDoc> for ComposedArea {
    type Error = Error;
    fn try_from(d: ComposedDoc) -> Result<Self> {
        let mut c = ComposedArea::new(d.areas, d.curves)?;
        c.truncated = d.truncated;
        Ok(c)
    }
}

impl ComposedArea {
    /// Checks the chain: every guide is known, neighbours share a guide, and
    /// the chain runs from `B1` to `B2`.
    pub fn new(areas: Vec<AreaRef>, curves: BTreeMap<String, SplineCurve>) -> Result<Self> {
        if areas.is_empty() {
            return invalid("a composed area needs at least one area");
        }
        for a in &areas {
            for id in [&a.lower, &a.upper] {
                if !curves.contains_key(id) {
                    return invalid(format!("unknown guide curve '{id}'"));
                }
            }
            if a.lower == a.upper {
                return invalid(format!("area bounded twice by '{}'", a.lower));
            }
        }
        if areas.windows(2).any(|w| w[0].upper != w[1].lower) {
            return invalid("adjacent areas must share a guide");
        }
        if areas[0].lower != B1 || areas.last().unwrap().upper != B2 {
            return invalid("a composed area must run from B1 to B2");
        }
        Ok(ComposedArea { areas, curves, truncated: false })
    }

    /// The chain `ids[0] .. ids[n]` as `n` areas.
    pub fn from_chain(ids: &[String], curves: BTreeMap<String, SplineCurve>) -> Result<Self> {
        let areas = ids
            .windows(2)
            .map(|w| AreaRef { lower: w[0].clone(), upper: w[1].clone() })
            .collect();
        ComposedArea::new(areas, curves)
    }

    /// The whole feature as one area.
    pub fn single(feature: &FeatureModel) -> Self {
        let curves = BTreeMap::from([
            (B1.to_string(), feature.boundary1.clone()),
            (B2.to_string(), feature.boundary2.clone()),
        ]);
        ComposedArea::from_chain(&[B1.into(), B2.into()], curves).expect("two-guide chain")
    }

    pub fn len(&self) -> usize {
        self.areas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.areas.is_empty()
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn refs(&self) -> &[AreaRef] {
        &self.areas
    }

    pub fn curve(&self, id: &str) -> Option<&SplineCurve> {
        self.curves.get(id)
    }

    pub fn curves(&self) -> &BTreeMap<String, SplineCurve> {
        &self.curves
    }

    /// Guide identifiers from `B1` to `B2`.
    pub fn chain(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = vec![&self.areas[0].lower];
        ids.extend(self.areas.iter().map(|a| a.upper.as_str()));
        ids
    }

    pub fn area(&self, i: usize) -> Option<MachiningArea> {
        let r = self.areas.get(i)?;
        Some(MachiningArea { lower: self.curves[&r.lower].clone(), upper: self.curves[&r.upper].clone() })
    }

    pub fn areas(&self) -> Vec<MachiningArea> {
        (0..self.len()).filter_map(|i| self.area(i)).collect()
    }
}

/// `M_Aj`: the first `j` interior curves of a boundary-to-boundary net.
pub fn compose_boundary_direction(net: &CurveNet, j: usize) -> Result<ComposedArea> {
    let reversed = match (net.direction[0].as_str(), net.direction[1].as_str()) {
        (B1, B2) => false,
        (B2, B1) => true,
        _ => return invalid(format!("net {:?} does not join B1 and B2", net.direction)),
    };
    if j > net.interior_count() {
        return invalid(format!("j = {j} exceeds the {} interior curves of the net", net.interior_count()));
    }
    let mut ids = vec![net.direction[0].clone()];
    let mut curves = BTreeMap::new();
    curves.insert(net.direction[0].clone(), net.start().clone());
    curves.insert(net.direction[1].clone(), net.target().clone());
    for (i, c) in net.interior()[..j].iter().enumerate() {
        let id = format!("I{}", i + 1);
        curves.insert(id.clone(), c.clone());
        ids.push(id);
    }
    ids.push(net.direction[1].clone());
    if reversed {
        ids.reverse();
    }
    ComposedArea::from_chain(&ids, curves)
}

/// Whether the median-based nets grow from the boundaries or from the median.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MedianDirection {
    TowardMedian,
    FromMedian,
}

/// Median pre-decomposition plus `levels` net curves on each side of it.
pub fn compose_median(
    feature: &FeatureModel,
    k: RatioK,
    p: &StepP,
    direction: MedianDirection,
    levels: usize,
    opts: &NetOptions,
) -> Result<ComposedArea> {
    let (med, lower, upper) = median_nets(feature, k, p, direction, opts)?;
    median_composition(feature, &med, &lower, &upper, direction, levels)
}

/// Every symmetric median decomposition from 0 levels up to the shorter side net.
pub fn median_levels(
    feature: &FeatureModel,
    k: RatioK,
    p: &StepP,
    direction: MedianDirection,
    opts: &NetOptions,
) -> Result<Vec<ComposedArea>> {
    let (med, lower, upper) = median_nets(feature, k, p, direction, opts)?;
    let n = lower.interior_count().min(upper.interior_count());
    (0..=n).map(|levels| median_composition(feature, &med, &lower, &upper, direction, levels)).collect()
}

fn median_nets(
    feature: &FeatureModel,
    k: RatioK,
    p: &StepP,
    direction: MedianDirection,
    opts: &NetOptions,
) -> Result<(SplineCurve, CurveNet, CurveNet)> {
    let med = median_curve(feature, p)?;
    let side = |id: &'static str, b: &SplineCurve| match direction {
        MedianDirection::TowardMedian => build_net((id, b), (MEDIAN, &med), k, p, feature, opts),
        MedianDirection::FromMedian => build_net((MEDIAN, &med), (id, b), k, p, feature, opts),
    };
    let (lower, upper) = rayon::join(|| side(B1, &feature.boundary1), || side(B2, &feature.boundary2));
    Ok((med, lower?, upper?))
}

fn median_composition(
    feature: &FeatureModel,
    med: &SplineCurve,
    lower: &CurveNet,
    upper: &CurveNet,
    direction: MedianDirection,
    levels: usize,
) -> Result<ComposedArea> {
    let mut curves = BTreeMap::new();
    curves.insert(B1.to_string(), feature.boundary1.clone());
    curves.insert(B2.to_string(), feature.boundary2.clone());
    curves.insert(MEDIAN.to_string(), med.clone());
    // Curves of each half listed from its boundary toward the median.
    let take = |net: &CurveNet, tag: &str, curves: &mut BTreeMap<String, SplineCurve>| -> Vec<String> {
        let n = levels.min(net.interior_count());
        let mut picked: Vec<(String, SplineCurve)> =
            net.interior()[..n].iter().enumerate().map(|(i, c)| (format!("{tag}{}", i + 1), c.clone())).collect();
        if direction == MedianDirection::FromMedian {
            picked.reverse();
        }
        picked
            .into_iter()
            .map(|(id, c)| {
                curves.insert(id.clone(), c);
                id
            })
            .collect()
    };
    let low_ids = take(lower, "L", &mut curves);
    let mut up_ids = take(upper, "U", &mut curves);
    up_ids.reverse();
    let truncated = low_ids.len() < levels || up_ids.len() < levels;

    let mut ids = vec![B1.to_string()];
    ids.extend(low_ids);
    ids.push(MEDIAN.to_string());
    ids.extend(up_ids);
    ids.push(B2.to_string());
    let mut out = ComposedArea::from_chain(&ids, curves)?;
    out.truncated = truncated;
    Ok(out)
}
