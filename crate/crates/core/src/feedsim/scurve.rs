//! Seven-phase jerk-limited velocity profiles with zero acceleration at both ends.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constant-jerk interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Phase {
    pub duration: f64,
    pub jerk: f64,
}

/// Kinematic state at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MotionState {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub a: f64,
    pub j: f64,
}

/// Path acceleration and jerk bounds of one profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLimits {
    pub v_max: f64,
    pub a_max: f64,
    pub j_max: f64,
}

/// Phases taking the speed from `v0` to `v1` at rest acceleration.
fn transition_phases(v0: f64, v1: f64, a: f64, j: f64) -> Vec<Phase> {
    let dv = (v1 - v0).abs();
    if dv <= 0.0 {
        return Vec::new();
    }
    let s = if v1 > v0 { 1.0 } else { -1.0 };
    if dv >= a * a / j {
        let tj = a / j;
        let ta = dv / a - tj;
        vec![
            Phase { duration: tj, jerk: s * j },
            Phase { duration: ta, jerk: 0.0 },
            Phase { duration: tj, jerk: -s * j },
        ]
    } else {
        let tj = (dv / j).sqrt();
        vec![Phase { duration: tj, jerk: s * j }, Phase { duration: tj, jerk: -s * j }]
    }
}

/// Duration of a rest-acceleration speed change.
pub fn transition_time(v0: f64, v1: f64, a: f64, j: f64) -> f64 {
    let dv = (v1 - v0).abs();
    if dv >= a * a / j {
        dv / a + a / j
    } else {
        2.0 * (dv / j).sqrt()
    }
}

/// Distance covered by a rest-acceleration speed change; the acceleration
/// pulse is symmetric, so the mean speed is `(v0 + v1) / 2`.
pub fn transition_distance(v0: f64, v1: f64, a: f64, j: f64) -> f64 {
    0.5 * (v0 + v1) * transition_time(v0, v1, a, j)
}

/// Highest speed reachable from `v0` within `distance`, capped at `lim.v_max`.
pub fn reachable_speed(v0: f64, distance: f64, lim: &PathLimits) -> f64 {
    if transition_distance(v0, lim.v_max, lim.a_max, lim.j_max) <= distance {
        return lim.v_max;
    }
    let (mut lo, mut hi) = (v0, lim.v_max);
    for _ in 0..100 {
        let m = 0.5 * (lo + hi);
        if transition_distance(v0, m, lim.a_max, lim.j_max) <= distance {
            lo = m;
        } else {
            hi = m;
        }
    }
    lo
}

/// A rest-to-rest-acceleration profile over a fixed distance: rise to a peak,
/// cruise, fall to the exit speed.
#[derive(Debug, Clone, PartialEq)]
pub struct SCurve {
    length: f64,
    peak: f64,
    phases: Vec<Phase>,
    /// State at the start of every phase, plus the final state.
    marks: Vec<MotionState>,
    /// Time interval spent at the peak speed.
    plateau: (f64, f64),
}

fn advance(s: MotionState, jerk: f64, dt: f64) -> MotionState {
    MotionState {
        t: s.t + dt,
        x: s.x + s.v * dt + 0.5 * s.a * dt * dt + jerk * dt * dt * dt / 6.0,
        v: s.v + s.a * dt + 0.5 * jerk * dt * dt,
        a: s.a + jerk * dt,
        j: jerk,
    }
}

impl SCurve {
    /// Fastest profile from `v0` to `v1` over `length` within `lim`.
    pub fn plan(v0: f64, v1: f64, length: f64, lim: &PathLimits) -> Result<SCurve> {
        let PathLimits { v_max, a_max: a, j_max: j } = *lim;
        if !(length > 0.0 && a > 0.0 && j > 0.0 && v_max > 0.0) {
            return Err(Error::Kinematics(format!("bad profile request L={length} {lim:?}")));
        }
        let slack = 1e-9 * v_max.max(1.0);
        if v0 < 0.0 || v1 < 0.0 || v0 > v_max + slack || v1 > v_max + slack {
            return Err(Error::Kinematics(format!("end speeds {v0}, {v1} outside [0, {v_max}]")));
        }
        let (v0, v1) = (v0.min(v_max), v1.min(v_max));
        let need = |vp: f64| transition_distance(v0, vp, a, j) + transition_distance(vp, v1, a, j);
        let floor = v0.max(v1);
        let min_len = need(floor);
        if min_len > length * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::Kinematics(format!(
                "speed change {v0} -> {v1} needs {min_len} mm, only {length} mm available"
            )));
        }
        let peak = if need(v_max) <= length {
            v_max
        } else {
            let (mut lo, mut hi) = (floor, v_max);
            for _ in 0..200 {
                let m = 0.5 * (lo + hi);
                if need(m) <= length {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            lo
        };
        let cruise = ((length - need(peak)) / peak).max(0.0);
        let mut phases = transition_phases(v0, peak, a, j);
        let rise: f64 = phases.iter().map(|p| p.duration).sum();
        if cruise > 0.0 {
            phases.push(Phase { duration: cruise, jerk: 0.0 });
        }
        phases.extend(transition_phases(peak, v1, a, j));
        let mut marks = vec![MotionState { v: v0, ..MotionState::default() }];
        for p in &phases {
            let s = *marks.last().unwrap();
            marks.push(advance(s, p.jerk, p.duration));
        }
        // Remove accumulated rounding from the final state.
        let end = marks.last_mut().unwrap();
        end.x = length;
        end.v = v1;
        end.a = 0.0;
        Ok(SCurve { length, peak, phases, marks, plateau: (rise, rise + cruise) })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn duration(&self) -> f64 {
        self.marks.last().unwrap().t
    }

    pub fn start_speed(&self) -> f64 {
        self.marks[0].v
    }

    pub fn end_speed(&self) -> f64 {
        self.marks.last().unwrap().v
    }

    /// Time interval spent at the peak speed (empty when the peak is a point).
    pub fn plateau(&self) -> (f64, f64) {
        self.plateau
    }

    pub fn state_at(&self, t: f64) -> MotionState {
        let t = t.clamp(0.0, self.duration());
        if t == self.duration() {
            return *self.marks.last().unwrap();
        }
        let i = self.marks[..self.phases.len()].partition_point(|m| m.t <= t).max(1) - 1;
        if self.phases.is_empty() {
            return self.marks[0];
        }
        let mut s = advance(self.marks[i], self.phases[i].jerk, t - self.marks[i].t);
        s.t = t;
        s
    }

    /// Time at which the profile has covered `x`.
    pub fn time_at(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= self.length {
            return self.duration();
        }
        let i = self.marks.partition_point(|m| m.x <= x).clamp(1, self.phases.len()) - 1;
        let m = self.marks[i];
        let jerk = self.phases[i].jerk;
        let (mut lo, mut hi) = (0.0, self.phases[i].duration);
        let mut dt = if m.v > 0.0 { ((x - m.x) / m.v).min(hi) } else { 0.5 * hi };
        for _ in 0..100 {
            let s = advance(m, jerk, dt);
            let g = s.x - x;
            if g.abs() <= 1e-12 * (1.0 + x) {
                break;
            }
            if g < 0.0 {
                lo = dt;
            } else {
                hi = dt;
            }
            let next = if s.v > 0.0 { dt - g / s.v } else { f64::NAN };
            dt = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-15 {
                break;
            }
        }
        m.t + dt
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: PathLimits = PathLimits { v_max: 100.0, a_max: 2500.0, j_max: 5000.0 };

    #[test]
    fn reference_rest_to_rest_block() {
        let p = SCurve::plan(0.0, 0.0, 100.0, &X).unwrap();
        assert!((p.duration() - 1.2828).abs() < 1e-3, "{}", p.duration());
        assert!((100.0 / p.duration() - 77.9).abs() < 0.1);
        assert_eq!(p.peak(), 100.0);
        // Jerk-limited triangle: 0.1414 s of +j then -j.
        assert!((p.phases()[0].duration - 0.02_f64.sqrt()).abs() < 1e-12);
        assert!((transition_distance(0.0, 100.0, 2500.0, 5000.0) - 14.142).abs() < 1e-3);
    }

    #[test]
    fn short_block_never_reaches_cruise() {
        let p = SCurve::plan(0.0, 0.0, 1.0, &X).unwrap();
        assert!(p.peak() < 100.0);
        assert!((p.state_at(p.duration()).x - 1.0).abs() < 1e-9);
        assert!(p.plateau().0 == p.plateau().1);
    }

    #[test]
    fn asymmetric_ends_and_time_lookup() {
        let p = SCurve::plan(20.0, 60.0, 30.0, &X).unwrap();
        assert_eq!(p.start_speed(), 20.0);
        assert_eq!(p.end_speed(), 60.0);
        for x in [0.5, 3.0, 12.0, 29.9] {
            let t = p.time_at(x);
            assert!((p.state_at(t).x - x).abs() < 1e-9);
        }
    }

    #[test]
    fn infeasible_request() {
        assert!(matches!(SCurve::plan(0.0, 100.0, 1.0, &X), Err(Error::Kinematics(_))));
        let v = reachable_speed(0.0, 1.0, &X);
        assert!(SCurve::plan(0.0, v, 1.0, &X).is_ok());
    }
}
