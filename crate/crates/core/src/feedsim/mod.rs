//! Jerk-limited feed-rate simulation of ISO programs: per-axis limits, a
//! discontinuity-crossing junction model, lookahead and per-block timing.

mod planner;
mod result;
mod scurve;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::Point3;

pub use planner::{plan_motion, plan_program, simulate, AxisSample, Motion, RunMotion};
pub use result::{BlockPlan, SimResult};
pub use scurve::{reachable_speed, transition_distance, transition_time, MotionState, PathLimits, Phase, SCurve};

/// Set points of the experiments, mm/s (2, 4 and 6 m/min).
pub const SET_POINTS: [f64; 3] = [100.0 / 3.0, 200.0 / 3.0, 100.0];

/// Per-axis (X, Y, Z) limits of the machine and its interpolation cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KinDoc", into = "KinDoc")]
pub struct MachineKinematics {
    v_max: [f64; 3],
    a_max: [f64; 3],
    j_max: [f64; 3],
    t_cycle: f64,
}

#[derive(Serialize, Deserialize)]
struct KinDoc {
    v_max: [f64; 3],
    a_max: [f64; 3],
    j_max: [f64; 3],
    t_cycle: f64,
}

impl TryFrom<KinDoc> for MachineKinematics {
    type Error = Error;
    fn try_from(d: KinDoc) -> Result<Self> {
        MachineKinematics::new(d.v_max, d.a_max, d.j_max, d.t_cycle)
    }
}

impl From<MachineKinematics> for KinDoc {
    fn from(k: MachineKinematics) -> Self {
        KinDoc { v_max: k.v_max, a_max: k.a_max, j_max: k.j_max, t_cycle: k.t_cycle }
    }
}

impl Default for MachineKinematics {
    /// 30 m/min on every axis; 2.5 / 3 / 2 m/s^2; 5 / 5 / 50 m/s^3; 12 ms cycle.
    fn default() -> Self {
        MachineKinematics {
            v_max: [500.0; 3],
            a_max: [2500.0, 3000.0, 2000.0],
            j_max: [5000.0, 5000.0, 50000.0],
            t_cycle: 0.012,
        }
    }
}

fn axes(u: Point3) -> [f64; 3] {
    [u.x.abs(), u.y.abs(), u.z.abs()]
}

/// `min_i limit_i / |u_i|` over axes the direction moves.
fn projected(limits: &[f64; 3], u: Point3) -> f64 {
    axes(u)
        .iter()
        .zip(limits)
        .filter(|(c, _)| **c > 1e-15)
        .map(|(c, l)| l / c)
        .fold(f64::INFINITY, f64::min)
}

impl MachineKinematics {
    pub fn new(v_max: [f64; 3], a_max: [f64; 3], j_max: [f64; 3], t_cycle: f64) -> Result<Self> {
        let all = v_max.iter().chain(&a_max).chain(&j_max).chain(std::iter::once(&t_cycle));
        if all.clone().any(|v| !(*v > 0.0 && v.is_finite())) {
            return invalid("machine limits must be positive and finite");
        }
        Ok(MachineKinematics { v_max, a_max, j_max, t_cycle })
    }

    pub fn v_max(&self) -> [f64; 3] {
        self.v_max
    }

    pub fn a_max(&self) -> [f64; 3] {
        self.a_max
    }

    pub fn j_max(&self) -> [f64; 3] {
        self.j_max
    }

    pub fn t_cycle(&self) -> f64 {
        self.t_cycle
    }

    /// Copy with one axis limit replaced; `which` is `"v"`, `"a"` or `"j"`.
    pub fn with_limit(mut self, which: &str, axis: usize, value: f64) -> Result<Self> {
        let slot = match which {
            "v" => &mut self.v_max,
            "a" => &mut self.a_max,
            "j" => &mut self.j_max,
            _ => return invalid(format!("unknown limit `{which}`")),
        };
        if axis > 2 {
            return invalid(format!("axis index {axis} out of range"));
        }
        slot[axis] = value;
        MachineKinematics::new(self.v_max, self.a_max, self.j_max, self.t_cycle)
    }

    /// Path acceleration and jerk bounds along a unit direction.
    pub fn path_limits(&self, u: Point3, set_point: f64) -> PathLimits {
        PathLimits {
            v_max: set_point.min(projected(&self.v_max, u)),
            a_max: projected(&self.a_max, u),
            j_max: projected(&self.j_max, u),
        }
    }
}

fn unit(u: Point3) -> Result<Point3> {
    let n = u.norm();
    if !(n > 1e-12) {
        return invalid("zero direction");
    }
    if (n - 1.0).abs() > 1e-9 {
        return invalid(format!("direction {u:?} is not a unit vector"));
    }
    Ok(u)
}

/// Feed along `direction` after projecting the axis speed limits.
pub fn axis_limited_feed(direction: Point3, kin: &MachineKinematics, set_point: f64) -> Result<f64> {
    let u = unit(direction)?;
    Ok(set_point.min(projected(&kin.v_max, u)))
}

/// Crossing speed of a block junction: the velocity step per interpolation
/// cycle may not exceed any axis acceleration.
pub fn junction_feed(dir_in: Point3, dir_out: Point3, kin: &MachineKinematics, set_point: f64) -> Result<f64> {
    let a = axis_limited_feed(dir_in, kin, set_point)?;
    let b = axis_limited_feed(dir_out, kin, set_point)?;
    let corner = projected(&kin.a_max.map(|x| x * kin.t_cycle), dir_out - dir_in);
    Ok(a.min(b).min(corner))
}

/// Speed bound on a curved stretch: centripetal acceleration `v^2 kappa` and
/// jerk `v^3 kappa^2` kept within the axis limits. `kappa` is the turning
/// angle over the mean length of the two blocks.
pub fn curvature_feed(dir_in: Point3, dir_out: Point3, len_in: f64, len_out: f64, kin: &MachineKinematics) -> f64 {
    let turn = dir_out - dir_in;
    let Some(normal) = turn.normalized() else {
        return f64::INFINITY;
    };
    let angle = dir_in.dot(dir_out).clamp(-1.0, 1.0).acos();
    let kappa = angle / (0.5 * (len_in + len_out));
    if !(kappa > 0.0) {
        return f64::INFINITY;
    }
    let tangent = (dir_in + dir_out).normalized().unwrap_or(dir_out);
    let centripetal = (projected(&kin.a_max, normal) / kappa).sqrt();
    let jerk = (projected(&kin.j_max, tangent) / (kappa * kappa)).cbrt();
    centripetal.min(jerk)
}

/// Planner switches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlannerOptions {
    /// Apply [`curvature_feed`] at junctions.
    pub curvature_limit: bool,
    /// Blocks of lookahead; `None` plans each pass as a whole.
    pub lookahead: Option<usize>,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        PlannerOptions { curvature_limit: true, lookahead: None }
    }
}
