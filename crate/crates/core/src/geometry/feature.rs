use serde::{Deserialize, Serialize};

use super::station::min_distance_indexed;
use super::{SplineCurve, StationIndex, SurfacePatch, Vec2};
use crate::error::{invalid, Error, Result};

/// Boundary curves must lie on the surface within this height tolerance (mm).
pub const ON_SURFACE_TOL: f64 = 1e-6;

const CHECK_SAMPLES: usize = 400;

/// Which closed boundary of a feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    B1,
    B2,
}

/// A bottom machining feature: the floor surface, the two flank-contact
/// boundaries and the machining direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureModel {
    pub surface: SurfacePatch,
    pub boundary1: SplineCurve,
    pub boundary2: SplineCurve,
    pub machining_dir: Vec2,
}

impl FeatureModel {
    /// Builds and validates a feature.
    pub fn new(
        surface: SurfacePatch,
        boundary1: SplineCurve,
        boundary2: SplineCurve,
        machining_dir: Vec2,
    ) -> Result<Self> {
        let f = FeatureModel { surface, boundary1, boundary2, machining_dir };
        f.validate()?;
        Ok(f)
    }

    pub fn boundary(&self, which: Boundary) -> &SplineCurve {
        match which {
            Boundary::B1 => &self.boundary1,
            Boundary::B2 => &self.boundary2,
        }
    }

    /// Unit vector across the machining direction (counter-clockwise).
    pub fn lateral_dir(&self) -> Vec2 {
        self.machining_dir.perp()
    }

    /// Station interval covered by both boundaries.
    pub fn station_range(&self) -> Result<(f64, f64)> {
        let (a0, a1) = StationIndex::new(&self.boundary1, self.machining_dir).extent();
        let (b0, b1) = StationIndex::new(&self.boundary2, self.machining_dir).extent();
        let (lo, hi) = (a0.max(b0), a1.min(b1));
        if hi <= lo {
            return Err(Error::Geometry("boundaries share no station range".into()));
        }
        Ok((lo, hi))
    }

    /// Checks the feature invariants: unit machining direction, boundaries on
    /// the surface, one crossing per station plane and no contact between boundaries.
    pub fn validate(&self) -> Result<()> {
        if !self.machining_dir.is_unit() {
            return invalid(format!("machining direction {:?} is not a unit vector", self.machining_dir));
        }
        for (name, c) in [("B1", &self.boundary1), ("B2", &self.boundary2)] {
            for p in c.sample(CHECK_SAMPLES) {
                if !self.surface.contains(p.x, p.y) {
                    return Err(Error::Geometry(format!("{name} leaves the surface domain at {p:?}")));
                }
                let dz = (p.z - self.surface.eval_unchecked(p.x, p.y).0).abs();
                if dz > ON_SURFACE_TOL {
                    return Err(Error::Geometry(format!("{name} is {dz:.3e} mm off the surface at {p:?}")));
                }
            }
        }
        let ia = StationIndex::new(&self.boundary1, self.machining_dir);
        let ib = StationIndex::new(&self.boundary2, self.machining_dir);
        let (lo, hi) = self.station_range()?;
        let stations = (0..=CHECK_SAMPLES).map(|i| lo + (hi - lo) * i as f64 / CHECK_SAMPLES as f64);
        let (d, s) = min_distance_indexed(&ia, &ib, stations)?;
        if d <= 0.0 {
            return Err(Error::Geometry(format!("boundaries touch near station {s}")));
        }
        Ok(())
    }
}
