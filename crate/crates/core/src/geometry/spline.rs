//! Clamped B-spline curves and global interpolation.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::Point3;
use crate::error::{invalid, Error, Result};

/// Default degree of constructed guide curves.
pub const DEFAULT_DEGREE: usize = 5;

/// How a point sequence is turned into a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMode {
    /// The curve passes through every point.
    #[default]
    Interpolate,
    /// The points are used directly as the control polygon.
    ControlPolygon,
}

/// A clamped, non-rational B-spline curve on the parameter domain `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SplineDoc")]
pub struct SplineCurve {
    degree: usize,
    control_points: Vec<Point3>,
    knots: Vec<f64>,
}

#[derive(Deserialize)]
struct SplineDoc {
    degree: usize,
    control_points: Vec<Point3>,
    knots: Vec<f64>,
}

impl TryFrom<SplineDoc> for SplineCurve {
    type Error = Error;
    fn try_from(d: SplineDoc) -> Result<Self> {
        SplineCurve::new(d.degree, d.control_points, d.knots)
    }
}

impl SplineCurve {
    /// Builds a curve, checking the clamped-knot invariants.
    pub fn new(degree: usize, control_points: Vec<Point3>, knots: Vec<f64>) -> Result<Self> {
        if degree == 0 {
            return invalid("spline degree must be at least 1");
        }
        if control_points.len() < degree + 1 {
            return invalid(format!(
                "degree {degree} needs at least {} control points, got {}",
                degree + 1,
                control_points.len()
            ));
        }
        if knots.len() != control_points.len() + degree + 1 {
            return invalid(format!(
                "expected {} knots, got {}",
                control_points.len() + degree + 1,
                knots.len()
            ));
        }
        if control_points.iter().any(|p| !p.is_finite()) || knots.iter().any(|k| !k.is_finite()) {
            return invalid("non-finite spline data");
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return invalid("knot vector must be non-decreasing");
        }
        let m = knots.len() - 1;
        let clamped = (0..=degree).all(|i| knots[i] == 0.0 && knots[m - i] == 1.0);
        if !clamped {
            return invalid("knot vector must be clamped to [0, 1]");
        }
        Ok(SplineCurve { degree, control_points, knots })
    }

    /// The straight segment from `a` to `b` as a degree-1 curve.
    pub fn line(a: Point3, b: Point3) -> Self {
        SplineCurve { degree: 1, control_points: vec![a, b], knots: vec![0.0, 0.0, 1.0, 1.0] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn control_points(&self) -> &[Point3] {
        &self.control_points
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn start(&self) -> Point3 {
        self.control_points[0]
    }

    pub fn end(&self) -> Point3 {
        *self.control_points.last().unwrap()
    }

    fn find_span(&self, t: f64) -> usize {
        let n = self.control_points.len() - 1;
        let p = self.degree;
        if t >= self.knots[n + 1] {
            return n;
        }
        if t <= self.knots[p] {
            return p;
        }
        let (mut lo, mut hi) = (p, n + 1);
        let mut mid = (lo + hi) / 2;
        while t < self.knots[mid] || t >= self.knots[mid + 1] {
            if t < self.knots[mid] {
                hi = mid;
            } else {
                lo = mid;
            }
            mid = (lo + hi) / 2;
        }
        mid
    }

    /// Non-zero basis functions and their derivatives up to `nd` at `t`.
    /// Row `k` holds the k-th derivatives of `N_{span-p..=span, p}`.
    fn basis_derivs(&self, span: usize, t: f64, nd: usize) -> Vec<Vec<f64>> {
        let p = self.degree;
        let u = &self.knots;
        let mut ndu = vec![vec![0.0; p + 1]; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        ndu[0][0] = 1.0;
        for j in 1..=p {
            left[j] = t - u[span + 1 - j];
            right[j] = u[span + j] - t;
            let mut saved = 0.0;
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        let nd = nd.min(p);
        let mut ders = vec![vec![0.0; p + 1]; nd + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }
        let mut a = vec![vec![0.0; p + 1]; 2];
        for r in 0..=p {
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = 1.0;
            for k in 1..=nd {
                let mut d = 0.0;
                let rk = r as isize - k as isize;
                let pk = p - k;
                if r >= k {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if (r as isize - 1) <= pk as isize { k - 1 } else { p - r };
                for j in j1..=j2 {
                    let idx = (rk + j as isize) as usize;
                    a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                    d += a[s2][j] * ndu[idx][pk];
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    d += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut f = p as f64;
        for (k, row) in ders.iter_mut().enumerate().skip(1) {
            for v in row.iter_mut() {
                *v *= f;
            }
            f *= (p - k) as f64;
        }
        ders
    }

    /// Point and derivatives `[C(t), C'(t), C''(t)]` (the second derivative is zero for degree 1).
    pub fn derivatives(&self, t: f64) -> [Point3; 3] {
        let t = t.clamp(0.0, 1.0);
        let span = self.find_span(t);
        let ders = self.basis_derivs(span, t, 2);
        let p = self.degree;
        let mut out = [Point3::ZERO; 3];
        for (k, row) in ders.iter().enumerate() {
            let mut acc = Point3::ZERO;
            for (j, &b) in row.iter().enumerate() {
                acc = acc + self.control_points[span - p + j] * b;
            }
            out[k] = acc;
        }
        out
    }

    /// Curve point at parameter `t` (clamped to `[0, 1]`).
    pub fn eval(&self, t: f64) -> Point3 {
        let t = t.clamp(0.0, 1.0);
        if t == 0.0 {
            return self.start();
        }
        if t == 1.0 {
            return self.end();
        }
        let span = self.find_span(t);
        let p = self.degree;
        let basis = self.basis_derivs(span, t, 0);
        basis[0]
            .iter()
            .enumerate()
            .fold(Point3::ZERO, |acc, (j, &b)| acc + self.control_points[span - p + j] * b)
    }

    /// `n` points at uniformly spaced parameters, endpoints included.
    pub fn sample(&self, n: usize) -> Vec<Point3> {
        let n = n.max(2);
        (0..n).map(|i| self.eval(i as f64 / (n - 1) as f64)).collect()
    }

    /// Same curve with every control point mapped through `f`.
    pub fn map_points(&self, f: impl Fn(Point3) -> Point3) -> SplineCurve {
        SplineCurve {
            degree: self.degree,
            control_points: self.control_points.iter().map(|&p| f(p)).collect(),
            knots: self.knots.clone(),
        }
    }
}

/// Chord-length parameters of a point sequence, normalised to `[0, 1]`.
fn chord_params(points: &[Point3]) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; points.len()];
    for i in 1..points.len() {
        let d = points[i].distance(points[i - 1]);
        if d <= 1e-12 {
            return Err(Error::Degenerate(format!("points {} and {i} coincide", i - 1)));
        }
        acc[i] = acc[i - 1] + d;
    }
    let total = acc[points.len() - 1];
    for a in acc.iter_mut() {
        *a /= total;
    }
    *acc.last_mut().unwrap() = 1.0;
    Ok(acc)
}

/// Knot vector by averaging the parameters (keeps the collocation matrix well posed).
fn averaged_knots(params: &[f64], degree: usize) -> Vec<f64> {
    let n = params.len() - 1;
    let mut knots = vec![0.0; n + degree + 2];
    for j in 1..=(n - degree) {
        let s: f64 = params[j..j + degree].iter().sum();
        knots[j + degree] = s / degree as f64;
    }
    for k in knots.iter_mut().skip(n + 1) {
        *k = 1.0;
    }
    knots
}

/// Interpolates `points` with a clamped B-spline of degree `min(target_degree, n - 1)`
/// using chord-length parameters.
pub fn fit_spline(points: &[Point3], target_degree: usize) -> Result<SplineCurve> {
    fit_spline_with(points, target_degree, FitMode::Interpolate)
}

pub fn fit_spline_with(points: &[Point3], target_degree: usize, mode: FitMode) -> Result<SplineCurve> {
    if points.len() < 2 {
        return invalid(format!("at least 2 points are required, got {}", points.len()));
    }
    if target_degree == 0 {
        return invalid("target degree must be at least 1");
    }
    if points.iter().any(|p| !p.is_finite()) {
        return invalid("non-finite point");
    }
    let degree = target_degree.min(points.len() - 1);
    let params = chord_params(points)?;
    let knots = averaged_knots(&params, degree);
    if mode == FitMode::ControlPolygon {
        return SplineCurve::new(degree, points.to_vec(), knots);
    }
    let n = points.len();
    let proto = SplineCurve { degree, control_points: points.to_vec(), knots };
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (k, &t) in params.iter().enumerate() {
        let span = proto.find_span(t);
        let basis = proto.basis_derivs(span, t, 0);
        for (j, &b) in basis[0].iter().enumerate() {
            a[(k, span - degree + j)] = b;
        }
    }
    let lu = a.lu();
    let mut cps = vec![Point3::ZERO; n];
    for axis in 0..3 {
        let rhs = DVector::from_iterator(
            n,
            points.iter().map(|p| match axis {
                0 => p.x,
                1 => p.y,
                _ => p.z,
            }),
        );
        let sol = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Degenerate("singular interpolation system".into()))?;
        for (i, v) in sol.iter().enumerate() {
            match axis {
                0 => cps[i].x = *v,
                1 => cps[i].y = *v,
                _ => cps[i].z = *v,
            }
        }
    }
    // End control points of a clamped interpolant are the end data points.
    cps[0] = points[0];
    cps[n - 1] = points[n - 1];
    let knots = proto.knots;
    SplineCurve::new(degree, cps, knots)
}
