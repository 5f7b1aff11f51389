//! Curve and surface kernel: clamped B-splines, height-field surfaces, plane
//! crossings, curvature and inflection analysis, and the feature model.

mod analysis;
mod feature;
mod point;
mod spline;
pub(crate) mod station;
mod surface;

pub use analysis::{curvature_profile, inflection_stations, is_straight, min_radius, CurvatureSample};
pub use feature::{Boundary, FeatureModel, ON_SURFACE_TOL};
pub use point::{Point3, Vec2};
pub use spline::{fit_spline, fit_spline_with, FitMode, SplineCurve, DEFAULT_DEGREE};
pub use station::{curve_plane_point, min_distance, planes, DiscretizationPlane, StationIndex, CROSSING_TOL};
pub use surface::{project_to_surface, Domain, SurfaceKind, SurfacePatch};
