//! Performance viewer: block-length and feed histograms, feed maps, reports,
//! comparisons and candidate ranking.

mod compare;
mod histogram;
mod map;
mod report;

pub use compare::{compare, compare_by, rank_candidates, Comparison, ComparisonRow, RankBy, Ranking};
pub use histogram::{block_length_hist, feed_hist, HistBin, HistUnit, Histogram, LENGTH_EDGES};
pub use map::{feed_map, feed_map_csv, feed_map_svg, FeedBand, FeedMapRow};
pub use report::{report, slow_fraction, AreaBreakdown, BoundaryBand, PerfReport, ReportOptions, REPORT_SCHEMA};

/// Share of the set point below which a block counts as slowed down.
pub const SLOW_THRESHOLD: f64 = 0.95;

/// Relative tolerance for a mean feed to count as the full set point.
pub(crate) const FULL_FEED_TOL: f64 = 1e-6;
