//! Intermediate curves, curve nets, composed machining areas and the
//! four-step guidance-curve definition method.

mod compose;
mod method;
mod net;
mod params;

pub use compose::{
    compose_boundary_direction, compose_median, median_levels, AreaRef, ComposedArea, MachiningArea, MedianDirection, B1, B2, MEDIAN,
};
pub use method::{
    determine_step, guidance_method, guide_min_radius, GuidanceCandidate, GuidanceOutcome, HalfStart, HALF_RATIO,
};
pub use net::{
    build_net, intermediate_curve, intermediate_curve_with, intermediate_points, median_curve, CurveNet, CurveOptions,
    NetOptions, StationPoint,
};
pub use params::{RatioK, StepOverride, StepP};
