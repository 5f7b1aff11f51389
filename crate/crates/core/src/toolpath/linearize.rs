//! Greedy chord linearisation of dense passes.

use super::IsoBlock;
use crate::error::{Error, Result};
use crate::geometry::Point3;

/// Largest distance from `pts[i..=j]` to the chord `pts[i] -> pts[j]`.
pub fn max_chord_deviation(pts: &[Point3], i: usize, j: usize) -> f64 {
    let (a, b) = (pts[i], pts[j]);
    pts[i + 1..j].iter().fold(0.0, |m, p| m.max(p.distance_to_segment(a, b)))
}

/// Vertex indices of the greedy chord subdivision: from each vertex, the
/// farthest next vertex whose chord stays within `tol` of the polyline.
fn chord_indices(pts: &[Point3], tol: f64) -> Vec<usize> {
    let n = pts.len();
    let ok = |i: usize, j: usize| max_chord_deviation(pts, i, j) <= tol;
    let mut out = vec![0];
    let mut i = 0;
    while i < n - 1 {
        // Gallop to bracket the first failing span, then bisect.
        let mut good = i + 1;
        let mut step = 1;
        let mut bad = None;
        while good < n - 1 {
            let cand = (good + step).min(n - 1);
            if ok(i, cand) {
                good = cand;
                step *= 2;
            } else {
                bad = Some(cand);
                break;
            }
        }
        if let Some(mut hi) = bad {
            while hi - good > 1 {
                let mid = (good + hi) / 2;
                if ok(i, mid) {
                    good = mid;
                } else {
                    hi = mid;
                }
            }
        }
        out.push(good);
        i = good;
    }
    out
}

/// Drops consecutive duplicates; errors when fewer than two distinct points remain.
fn dedup(points: &[Point3]) -> Result<Vec<Point3>> {
    let mut pts: Vec<Point3> = Vec::with_capacity(points.len());
    for &p in points {
        if !p.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite pass point {p:?}")));
        }
        if pts.last().is_none_or(|q| q.distance(p) > 1e-12) {
            pts.push(p);
        }
    }
    if pts.len() < 2 {
        return Err(Error::Degenerate("a pass needs two distinct points".into()));
    }
    Ok(pts)
}

/// Vertices of the linearised pass.
pub fn linearize_points(points: &[Point3], tol: f64) -> Result<Vec<Point3>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("chordal tolerance must be positive".into()));
    }
    let pts = dedup(points)?;
    Ok(chord_indices(&pts, tol).into_iter().map(|i| pts[i]).collect())
}

/// Longest chords within `tol` of the dense polyline, as blocks at `feed` mm/min.
pub fn linearize(points: &[Point3], tol: f64, feed: f64) -> Result<Vec<IsoBlock>> {
    let v = linearize_points(points, tol)?;
    v.windows(2).map(|w| IsoBlock::new(w[0], w[1], feed)).collect()
}
