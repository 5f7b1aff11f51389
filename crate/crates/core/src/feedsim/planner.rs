//! Lookahead planning. A pass is split at anchors (pass ends and junctions
//! whose speed cap binds); each stretch between anchors runs one jerk-limited
//! profile, so junctions inside a stretch are crossed without stopping the
//! acceleration. Anchors are added until no cap is exceeded.

use super::scurve::{reachable_speed, PathLimits, SCurve};
use super::{curvature_feed, junction_feed, BlockPlan, MachineKinematics, PlannerOptions, SimResult};
use crate::error::{invalid, Error, Result};
use crate::geometry::Point3;
use crate::toolpath::IsoProgram;

const SPEED_SLACK: f64 = 1e-9;

/// One profile spanning blocks `first_block .. end_block`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMotion {
    pub first_block: usize,
    pub end_block: usize,
    /// Distance from the run start to each block start, plus the run length.
    pub offsets: Vec<f64>,
    pub profile: SCurve,
    /// Program time at which the run starts.
    pub t_start: f64,
}

/// Per-axis kinematics at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSample {
    pub t: f64,
    pub block: usize,
    pub v: [f64; 3],
    pub a: [f64; 3],
    pub j: [f64; 3],
}

/// Planned motion of a whole program.
#[derive(Debug, Clone, PartialEq)]
pub struct Motion {
    pub runs: Vec<RunMotion>,
    directions: Vec<Point3>,
    result: SimResult,
}

impl Motion {
    pub fn result(&self) -> &SimResult {
        &self.result
    }

    pub fn into_result(self) -> SimResult {
        self.result
    }

    /// Axis velocity, acceleration and jerk at `count` evenly spaced instants.
    pub fn samples(&self, count: usize) -> Vec<AxisSample> {
        let total = self.result.total_time_s;
        (0..count)
            .map(|k| {
                let t = total * (k as f64 + 0.5) / count as f64;
                self.sample_at(t)
            })
            .collect()
    }

    pub fn sample_at(&self, t: f64) -> AxisSample {
        let r = self.runs.partition_point(|r| r.t_start <= t).max(1) - 1;
        let run = &self.runs[r];
        let s = run.profile.state_at(t - run.t_start);
        let local = run.offsets.partition_point(|&o| o <= s.x).clamp(1, run.offsets.len() - 1) - 1;
        let block = (run.first_block + local).min(run.end_block - 1);
        let u = self.directions[block];
        let c = [u.x.abs(), u.y.abs(), u.z.abs()];
        AxisSample { t, block, v: c.map(|x| x * s.v), a: c.map(|x| x * s.a.abs()), j: c.map(|x| x * s.j.abs()) }
    }

    /// Fails when a sampled axis quantity exceeds its limit by more than `slack`.
    pub fn check_limits(&self, kin: &MachineKinematics, count: usize, slack: f64) -> Result<()> {
        for s in self.samples(count) {
            for i in 0..3 {
                let over = [
                    ("velocity", s.v[i], kin.v_max()[i]),
                    ("acceleration", s.a[i], kin.a_max()[i]),
                    ("jerk", s.j[i], kin.j_max()[i]),
                ];
                for (what, got, lim) in over {
                    if got > lim * (1.0 + 1e-9) + slack {
                        return Err(Error::Kinematics(format!(
                            "axis {i} {what} {got} exceeds {lim} at t={} (block {})",
                            s.t, s.block
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

struct PassPlan {
    runs: Vec<(usize, usize, SCurve)>,
}

fn min_limits(lims: &[PathLimits]) -> PathLimits {
    lims.iter().fold(
        PathLimits { v_max: f64::INFINITY, a_max: f64::INFINITY, j_max: f64::INFINITY },
        |m, l| PathLimits { v_max: m.v_max.min(l.v_max), a_max: m.a_max.min(l.a_max), j_max: m.j_max.min(l.j_max) },
    )
}

fn plan_pass(
    lens: &[f64],
    dirs: &[Point3],
    kin: &MachineKinematics,
    set_point: f64,
    opts: &PlannerOptions,
) -> Result<PassPlan> {
    let n = lens.len();
    let lims: Vec<PathLimits> = dirs.iter().map(|&u| kin.path_limits(u, set_point)).collect();
    let mut pos = vec![0.0; n + 1];
    for i in 0..n {
        pos[i + 1] = pos[i] + lens[i];
    }
    // caps[k]: speed bound at the boundary before block k; ends are full stops.
    let mut caps = vec![0.0; n + 1];
    for k in 1..n {
        let mut c = junction_feed(dirs[k - 1], dirs[k], kin, set_point)?;
        if opts.curvature_limit {
            c = c.min(curvature_feed(dirs[k - 1], dirs[k], lens[k - 1], lens[k], kin));
        }
        caps[k] = c.min(lims[k - 1].v_max).min(lims[k].v_max);
    }
    if let Some(w) = opts.lookahead {
        let w = w.max(1);
        for k in 1..n {
            let end = (k + w).min(n);
            let window = min_limits(&lims[k..end]);
            caps[k] = caps[k].min(reachable_speed(0.0, pos[end] - pos[k], &window));
        }
    }

    let mut anchors: Vec<usize> = vec![0, n];
    loop {
        let m = anchors.len();
        let run_lims: Vec<PathLimits> = anchors.windows(2).map(|w| min_limits(&lims[w[0]..w[1]])).collect();
        let mut v: Vec<f64> = anchors.iter().map(|&k| caps[k]).collect();
        for i in 0..m - 1 {
            let d = pos[anchors[i + 1]] - pos[anchors[i]];
            v[i] = v[i].min(run_lims[i].v_max);
            v[i + 1] = v[i + 1].min(run_lims[i].v_max).min(reachable_speed(v[i], d, &run_lims[i]));
        }
        for i in (0..m - 1).rev() {
            let d = pos[anchors[i + 1]] - pos[anchors[i]];
            v[i] = v[i].min(reachable_speed(v[i + 1], d, &run_lims[i]));
        }
        let mut runs = Vec::with_capacity(m - 1);
        let mut added = Vec::new();
        for i in 0..m - 1 {
            let (a, b) = (anchors[i], anchors[i + 1]);
            let prof = SCurve::plan(v[i], v[i + 1], pos[b] - pos[a], &run_lims[i])?;
            // Worst excess over a junction cap or a block speed limit.
            let mut worst: Option<(f64, usize, usize)> = None;
            let mut note = |ratio: f64, lo: usize, hi: usize| {
                if ratio > 1.0 + SPEED_SLACK && worst.is_none_or(|w| ratio > w.0) {
                    worst = Some((ratio, lo, hi));
                }
            };
            let times: Vec<f64> = (a..=b).map(|k| prof.time_at(pos[k] - pos[a])).collect();
            let speeds: Vec<f64> = times.iter().map(|&t| prof.state_at(t).v).collect();
            for k in a + 1..b {
                note(speeds[k - a] / caps[k].max(1e-300), k, k);
            }
            let (p0, p1) = prof.plateau();
            for blk in a..b {
                let (t0, t1) = (times[blk - a], times[blk - a + 1]);
                let top = if t0 <= p1 && t1 >= p0 { prof.peak() } else { speeds[blk - a].max(speeds[blk - a + 1]) };
                note(top / lims[blk].v_max, blk, blk + 1);
            }
            if let Some((_, lo, hi)) = worst {
                added.extend([lo, hi].into_iter().filter(|k| *k > a && *k < b));
            }
            runs.push((a, b, prof));
        }
        if added.is_empty() {
            return Ok(PassPlan { runs });
        }
        anchors.extend(added);
        anchors.sort_unstable();
        anchors.dedup();
    }
}

/// Plans every pass of `program` at `set_point` mm/s.
pub fn plan_motion(
    program: &IsoProgram,
    kin: &MachineKinematics,
    set_point: f64,
    opts: &PlannerOptions,
) -> Result<Motion> {
    if !(set_point > 0.0 && set_point.is_finite()) {
        return invalid(format!("set point must be positive, got {set_point}"));
    }
    let blocks = program.blocks();
    let directions: Vec<Point3> = blocks.iter().map(|b| b.direction()).collect();
    let mut plans = Vec::with_capacity(blocks.len());
    let mut runs = Vec::new();
    let mut clock = 0.0;
    for range in program.passes() {
        let (f, e) = (range.first_block, range.end_block);
        let lens: Vec<f64> = blocks[f..e].iter().map(|b| b.length()).collect();
        let pass = plan_pass(&lens, &directions[f..e], kin, set_point, opts)?;
        for (a, b, profile) in pass.runs {
            let mut offsets = vec![0.0];
            for l in &lens[a..b] {
                offsets.push(offsets.last().unwrap() + l);
            }
            let mut times: Vec<f64> = offsets.iter().map(|&x| profile.time_at(x)).collect();
            // Summed lengths may fall a rounding error short of the profile length.
            *times.last_mut().unwrap() = profile.duration();
            let (p0, p1) = profile.plateau();
            for (j, k) in (a..b).enumerate() {
                let (t0, t1) = (times[j], times[j + 1]);
                let (v_in, v_out) = (profile.state_at(t0).v, profile.state_at(t1).v);
                let v_peak = if t0 <= p1 && t1 >= p0 { profile.peak() } else { v_in.max(v_out) };
                let t_s = t1 - t0;
                if !(t_s > 0.0) {
                    return Err(Error::Kinematics(format!("block {} has no duration", f + k)));
                }
                plans.push(BlockPlan { i: f + k, len_mm: lens[k], v_in, v_peak, v_out, t_s, mean_feed: lens[k] / t_s });
            }
            let duration = profile.duration();
            runs.push(RunMotion { first_block: f + a, end_block: f + b, offsets, profile, t_start: clock });
            clock += duration;
        }
    }
    Ok(Motion { runs, directions, result: SimResult::from_blocks(set_point, plans) })
}

/// Block timings of `program` with the default planner options.
pub fn plan_program(program: &IsoProgram, kin: &MachineKinematics, set_point: f64) -> Result<SimResult> {
    Ok(plan_motion(program, kin, set_point, &PlannerOptions::default())?.into_result())
}

/// [`plan_program`] plus a check of the axis limits at 1000 instants.
pub fn simulate(
    program: &IsoProgram,
    kin: &MachineKinematics,
    set_point: f64,
    opts: &PlannerOptions,
) -> Result<SimResult> {
    let motion = plan_motion(program, kin, set_point, opts)?;
    motion.check_limits(kin, 1000, 1e-6)?;
    Ok(motion.into_result())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toolpath::{IsoBlock, StrategyParams, Tool};

    fn program(passes: Vec<Vec<Point3>>) -> IsoProgram {
        let p = passes.into_iter().enumerate().map(|(lane, pts)| {
            let blocks = pts.windows(2).map(|w| IsoBlock::new(w[0], w[1], 6000.0).unwrap()).collect();
            (0, lane, blocks)
        });
        IsoProgram::from_passes(Tool::default(), StrategyParams::default(), p).unwrap()
    }

    fn xs(v: &[f64]) -> Vec<Point3> {
        v.iter().map(|&x| Point3::new(x, 0.0, 0.0)).collect()
    }

    #[test]
    fn single_block_reference() {
        let r = plan_program(&program(vec![xs(&[0.0, 100.0])]), &MachineKinematics::default(), 100.0).unwrap();
        assert!((r.total_time_s - 1.2828).abs() < 1e-3);
        assert!((r.blocks[0].mean_feed - 77.9).abs() < 0.1);
    }

    #[test]
    fn collinear_split_is_transparent() {
        let k = MachineKinematics::default();
        let one = plan_program(&program(vec![xs(&[0.0, 100.0])]), &k, 100.0).unwrap();
        let two = plan_program(&program(vec![xs(&[0.0, 50.0, 100.0])]), &k, 100.0).unwrap();
        assert!((one.total_time_s - two.total_time_s).abs() < 1e-9);
        let many = plan_program(&program(vec![xs(&[0.0, 0.5, 1.0, 3.0, 7.0, 100.0])]), &k, 100.0).unwrap();
        assert!((one.total_time_s - many.total_time_s).abs() < 1e-9);
    }

    #[test]
    fn reversals_cap_junctions() {
        let mut pts = Vec::new();
        for i in 0..10 {
            pts.push(Point3::new(if i % 2 == 0 { 0.0 } else { 20.0 }, 0.0, 0.0));
        }
        let k = MachineKinematics::default();
        let r = plan_program(&program(vec![pts]), &k, 100.0).unwrap();
        for w in r.blocks.windows(2) {
            assert!(w[0].v_out <= 15.0 + 1e-9);
            assert!((w[0].v_out - w[1].v_in).abs() < 1e-9);
        }
        assert!(r.blocks.iter().all(|b| b.mean_feed < 0.95 * 100.0));
    }

    #[test]
    fn corner_speed_and_limits() {
        let pts = vec![Point3::new(0.0, 0.0, 0.0), Point3::new(50.0, 0.0, 0.0), Point3::new(50.0, 50.0, 0.0)];
        let k = MachineKinematics::default();
        let m = plan_motion(&program(vec![pts]), &k, 100.0, &PlannerOptions::default()).unwrap();
        let r = m.result();
        assert!((r.blocks[0].v_out - 30.0).abs() < 1e-9);
        m.check_limits(&k, 5000, 1e-6).unwrap();
    }

    #[test]
    fn set_point_monotonicity_and_lookahead() {
        let pts: Vec<Point3> = (0..200).map(|i| {
            let a = i as f64 * 0.02;
            Point3::new(30.0 * a.cos(), 30.0 * a.sin(), 0.0)
        }).collect();
        let p = program(vec![pts]);
        let k = MachineKinematics::default();
        let times: Vec<f64> = [100.0 / 3.0, 200.0 / 3.0, 100.0].iter().map(|&s| plan_program(&p, &k, s).unwrap().total_time_s).collect();
        assert!(times[0] > times[1] && times[1] > times[2], "{times:?}");
        let windowed = plan_motion(&p, &k, 100.0, &PlannerOptions { lookahead: Some(3), ..Default::default() }).unwrap();
        assert!(windowed.result().total_time_s >= times[2] - 1e-9);
        assert!(plan_program(&p, &k, 0.0).is_err());
    }
}
