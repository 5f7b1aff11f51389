//! Machining-area decomposition of bottom features with guidance curves.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] B-spline curves, height-field surfaces, plane crossings and curvature.
//! * [`curvenet`] intermediate curves built station by station at a ratio `K`,
//!   curve nets, composed machining areas and the four-step guidance method.
//! * [`toolpath`] parallel-plane and guidance (morphing) finishing toolpaths,
//!   linearised into ISO blocks.
//! * [`feedsim`] a jerk-limited feed-rate simulator with junction limits and lookahead.
//! * [`perfview`] histograms, feed maps, reports and candidate ranking.
//! * [`fixtures`] synthetic features used by the CLI and the test-suites.
//!
//! The guide in `book/` walks through the same pipeline; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod curvenet;
mod error;
pub mod feedsim;
pub mod fixtures;
pub mod geometry;
pub mod perfview;
pub mod toolpath;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/curve_nets.md")]
    mod curve_nets {}
    #[doc = include_str!("../../../book/src/toolpaths.md")]
    mod toolpaths {}
    #[doc = include_str!("../../../book/src/feed_simulation.md")]
    mod feed_simulation {}
    #[doc = include_str!("../../../book/src/performance.md")]
    mod performance {}
    #[doc = include_str!("../../../book/src/method.md")]
    mod method {}
}
