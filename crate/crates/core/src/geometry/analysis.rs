//! Curvature and inflection analysis of guide curves.

use super::{SplineCurve, Vec2};
use crate::error::{invalid, Result};

/// Curvature at one sample; `None` where the first derivative vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub param: f64,
    pub curvature: Option<f64>,
}

/// `kappa = |c' x c''| / |c'|^3` at `samples` uniformly spaced parameters.
pub fn curvature_profile(curve: &SplineCurve, samples: usize) -> Result<Vec<CurvatureSample>> {
    if samples < 2 {
        return invalid("curvature profile needs at least 2 samples");
    }
    Ok((0..samples)
        .map(|i| {
            let t = i as f64 / (samples - 1) as f64;
            let [_, d1, d2] = curve.derivatives(t);
            let speed = d1.norm();
            let curvature = if speed > 1e-12 { Some(d1.cross(d2).norm() / speed.powi(3)) } else { None };
            CurvatureSample { param: t, curvature }
        })
        .collect())
}

/// Smallest radius of curvature, `f64::INFINITY` for a straight curve.
pub fn min_radius(profile: &[CurvatureSample]) -> f64 {
    let kmax = profile.iter().filter_map(|s| s.curvature).fold(0.0, f64::max);
    if kmax <= 1e-12 {
        f64::INFINITY
    } else {
        1.0 / kmax
    }
}

/// True when the curve has no measurable curvature.
pub fn is_straight(curve: &SplineCurve) -> bool {
    curve.degree() == 1 && curve.control_points().len() == 2
        || curvature_profile(curve, 256).map(|p| min_radius(&p).is_infinite()).unwrap_or(false)
}

fn signed_planar_curvature(curve: &SplineCurve, t: f64) -> f64 {
    let [_, d1, d2] = curve.derivatives(t);
    let speed = d1.xy().norm();
    if speed <= 1e-12 {
        return 0.0;
    }
    (d1.x * d2.y - d1.y * d2.x) / speed.powi(3)
}

const INFLECTION_SAMPLES: usize = 1024;
/// Samples whose planar curvature is below this fraction of the peak are treated as flat.
const FLAT_FRACTION: f64 = 1e-3;
/// A run of same-sign curvature counts only if its peak reaches this fraction
/// of the global peak; weaker runs are fitting ripple, typically at the ends.
const LOBE_FRACTION: f64 = 0.05;

/// Station offsets along `dir` where the planar (xy) curvature changes sign.
/// Endpoints are excluded; a straight curve or a constant-sign curve gives `[]`.
pub fn inflection_stations(curve: &SplineCurve, dir: Vec2) -> Vec<f64> {
    let ts: Vec<f64> = (0..=INFLECTION_SAMPLES).map(|i| i as f64 / INFLECTION_SAMPLES as f64).collect();
    let ks: Vec<f64> = ts.iter().map(|&t| signed_planar_curvature(curve, t)).collect();
    let peak = ks.iter().fold(0.0f64, |m, k| m.max(k.abs()));
    if peak <= 1e-9 {
        return Vec::new();
    }
    let flat = FLAT_FRACTION * peak;
    // Same-sign runs as (first index, last index, sign, peak |k|).
    let mut lobes: Vec<(usize, usize, f64, f64)> = Vec::new();
    for (i, &k) in ks.iter().enumerate() {
        if k.abs() < flat {
            continue;
        }
        match lobes.last_mut() {
            Some(l) if l.2 == k.signum() => {
                l.1 = i;
                l.3 = l.3.max(k.abs());
            }
            _ => lobes.push((i, i, k.signum(), k.abs())),
        }
    }
    lobes.retain(|l| l.3 >= LOBE_FRACTION * peak);
    lobes.dedup_by(|b, a| {
        if a.2 == b.2 {
            a.1 = b.1;
            a.3 = a.3.max(b.3);
            true
        } else {
            false
        }
    });
    let station = |t: f64| curve.eval(t).xy().dot(dir);
    lobes
        .windows(2)
        .map(|w| {
            // Bisect on the sign of the curvature down to 1e-6 mm in station.
            let (mut lo, mut hi) = (ts[w[0].1], ts[w[1].0]);
            let slo = w[0].2;
            while (station(hi) - station(lo)).abs() > 1e-6 && hi - lo > 1e-15 {
                let mid = 0.5 * (lo + hi);
                if signed_planar_curvature(curve, mid).signum() == slo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            station(0.5 * (lo + hi))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::{fit_spline, Point3};

    fn sine(k: f64, n: usize) -> SplineCurve {
        let pts: Vec<_> = (0..n)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / (n - 1) as f64;
                Point3::new(x, (k * x).sin(), 0.0)
            })
            .collect();
        fit_spline(&pts, 5).unwrap()
    }

    fn arc(radius: f64, n: usize) -> SplineCurve {
        let pts: Vec<_> = (0..n)
            .map(|i| {
                let a = PI * i as f64 / (n - 1) as f64;
                Point3::new(-radius * a.cos(), radius * a.sin(), 0.0)
            })
            .collect();
        fit_spline(&pts, 5).unwrap()
    }

    #[test]
    fn straight_line_has_no_curvature() {
        let c = SplineCurve::line(Point3::ZERO, Point3::new(5.0, 1.0, 0.0));
        let prof = curvature_profile(&c, 10).unwrap();
        assert!(prof.iter().all(|s| s.curvature == Some(0.0)));
        assert!(min_radius(&prof).is_infinite());
        assert!(inflection_stations(&c, Vec2::X).is_empty());
        assert!(is_straight(&c));
    }

    #[test]
    fn circle_arcs() {
        for r in [2.0, 7.0, 50.0] {
            let c = arc(r, 20);
            let prof = curvature_profile(&c, 200).unwrap();
            for s in &prof[1..199] {
                let k = s.curvature.unwrap();
                assert!((k * r - 1.0).abs() < 0.01, "r={r} t={} k={k}", s.param);
            }
            assert!(inflection_stations(&c, Vec2::X).is_empty());
        }
    }

    #[test]
    fn sine_peak_curvature_and_inflections() {
        let c = sine(1.0, 40);
        let prof = curvature_profile(&c, 2001).unwrap();
        let kmax = prof.iter().filter_map(|s| s.curvature).fold(0.0, f64::max);
        assert!((kmax - 1.0).abs() < 0.02, "{kmax}");
        let inf = inflection_stations(&c, Vec2::X);
        assert_eq!(inf.len(), 1, "{inf:?}");
        assert!((inf[0] - PI).abs() < 1e-3);
        for k in [2.0, 3.0] {
            let inf = inflection_stations(&sine(k, 120), Vec2::X);
            assert_eq!(inf.len(), 2 * k as usize - 1, "k={k} {inf:?}");
        }
    }

    #[test]
    fn too_few_samples() {
        let c = SplineCurve::line(Point3::ZERO, Point3::new(1.0, 0.0, 0.0));
        assert!(curvature_profile(&c, 1).is_err());
    }
}
