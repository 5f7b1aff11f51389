//! Acceptance suite. Prints one line per criterion; exits non-zero when a
//! criterion outside `KNOWN_UNMET` fails.

use curveguide::curvenet::{
    build_net, compose_boundary_direction, compose_median, guidance_method, intermediate_curve_with, intermediate_points,
    ComposedArea, CurveOptions, MachiningArea, MedianDirection, NetOptions, RatioK, StepP, B1, B2,
};
use curveguide::feedsim::{plan_motion, MachineKinematics, PlannerOptions, SET_POINTS};
use curveguide::fixtures::{self, WavySpec};
use curveguide::geometry::{Domain, FeatureModel, Point3, SplineCurve, SurfacePatch, Vec2};
use curveguide::perfview::{report, PerfReport, ReportOptions};
use curveguide::toolpath::{
    composed_passes, effective_stepover, parallel_plane_passes, program_for_composed, stepover_from_cusp,
    CompositionOptions, DensePass, IsoProgram, StrategyParams, Tool,
};
use curveguide_cli::{cmd_pipeline, pipeline::artifact_list, OutDir, PipelineConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Criteria that do not hold on the synthetic fixture; see the project notes.
const KNOWN_UNMET: &[u32] = &[7, 9];

const CUSP: f64 = 0.01;
const CHORDAL: f64 = 0.01;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

// ---------------------------------------------------------------- oracles

/// Curve point on the plane `x = station`, by bisection on the parameter.
fn crossing_x(c: &SplineCurve, station: f64) -> Point3 {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let increasing = c.eval(1.0).x > c.eval(0.0).x;
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if (c.eval(m).x < station) == increasing {
            lo = m;
        } else {
            hi = m;
        }
    }
    c.eval(0.5 * (lo + hi))
}

fn xy_dist(a: Point3, b: Point3) -> f64 {
    ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt()
}

fn seg_dist(p: Point3, a: Point3, b: Point3) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Closest point of a polyline to `p`, and whether it is interior to the polyline.
fn closest_on(poly: &[Point3], p: Point3) -> (Point3, bool) {
    let mut best = (f64::INFINITY, poly[0], false);
    for (i, w) in poly.windows(2).enumerate() {
        let ab = w[1] - w[0];
        let t = ((p - w[0]).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
        let q = w[0] + ab * t;
        let d = (p - q).norm();
        if d < best.0 {
            let interior = !((i == 0 && t == 0.0) || (i == poly.len() - 2 && t == 1.0));
            best = (d, q, interior);
        }
    }
    (best.1, best.2)
}

/// Ridge height left between two ball positions touching the surface at `p1` and `p2`.
fn scallop(surface: &SurfacePatch, r: f64, p1: Point3, p2: Point3) -> f64 {
    let (n1, n2) = (surface.normal(p1.x, p1.y), surface.normal(p2.x, p2.y));
    let (c1, c2) = (p1 + n1 * r, p2 + n2 * r);
    let d = (c2 - c1).norm();
    let e = (c2 - c1) * (1.0 / d);
    let down = -(n1 + n2) * 0.5;
    let g = (down - e * down.dot(e)).normalized().unwrap();
    let q = (c1 + c2) * 0.5 + g * (r * r - 0.25 * d * d).sqrt();
    let foot = surface.drape(q.x, q.y);
    (q.z - foot.z) * surface.normal(q.x, q.y).z
}

fn whole(f: &FeatureModel) -> MachiningArea {
    MachiningArea { lower: f.boundary1.clone(), upper: f.boundary2.clone() }
}

fn program_of(passes: &[DensePass], tool: &Tool, params: &StrategyParams) -> IsoProgram {
    let parts = passes
        .iter()
        .map(|p| {
            let blocks = curveguide::toolpath::linearize(&p.points, params.chordal_tolerance, params.feed_set_point).unwrap();
            (p.area, p.lane, blocks)
        })
        .collect::<Vec<_>>();
    IsoProgram::from_passes(*tool, *params, parts).unwrap()
}

fn simulate_report(f: &FeatureModel, program: &IsoProgram, sp: f64) -> PerfReport {
    let m = plan_motion(program, &MachineKinematics::default(), sp, &PlannerOptions::default()).unwrap();
    report(program, m.result(), Some(f), &ReportOptions::default()).unwrap()
}

// ---------------------------------------------------------------- criteria

fn c1_profile_oracle() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let kin = MachineKinematics::default();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let len = rng.random_range(1.0..500.0);
        let sp = rng.random_range(10.0..500.0);
        let u = loop {
            let v = Point3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-0.3..0.3));
            if let Some(u) = v.normalized() {
                break u;
            }
        };
        let block = curveguide::toolpath::IsoBlock::new(Point3::ZERO, u * len, 6000.0).unwrap();
        let prog = IsoProgram::from_passes(Tool::default(), StrategyParams::default(), [(0, 0, vec![block])]).unwrap();
        let m = plan_motion(&prog, &kin, sp, &PlannerOptions::default()).unwrap();
        let analytic = m.result().blocks[0].t_s;
        // Integrate the jerk sequence at 1 us and time the arrival at the block end.
        let (mut a, mut v, mut x, mut t) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
        let mut arrival = None;
        for ph in m.runs[0].profile.phases() {
            let n = (ph.duration / 1e-6).ceil() as usize;
            if n == 0 {
                continue;
            }
            let dt = ph.duration / n as f64;
            for _ in 0..n {
                let (a0, v0) = (a, v);
                a += ph.jerk * dt;
                v += 0.5 * (a0 + a) * dt;
                let x0 = x;
                x += v0 * dt + a0 * dt * dt / 2.0 + ph.jerk * dt * dt * dt / 6.0;
                t += dt;
                if arrival.is_none() && x >= len {
                    arrival = Some(t - dt + dt * (len - x0) / (x - x0));
                }
            }
        }
        // Rounding can leave the integrated end a hair short of the block length.
        let numeric = arrival.unwrap_or(if len - x < 1e-6 { t } else { f64::INFINITY });
        worst = worst.max((numeric - analytic).abs() / analytic);
    }
    let secs = t0.elapsed().as_secs_f64();
    outcome(worst <= 0.005 && secs < 10.0, format!("max relative duration error {worst:.2e} (<= 5e-3), {secs:.1} s (< 10 s)"))
}

fn fixture_programs() -> Vec<(String, FeatureModel, IsoProgram)> {
    let tool = Tool::default();
    let params = StrategyParams::default();
    let mut out = Vec::new();
    for name in fixtures::NAMES {
        let f = fixtures::by_name(name).unwrap();
        let single = ComposedArea::single(&f);
        let g = program_for_composed(&f, &single, &tool, &params, &CompositionOptions::default()).unwrap();
        let p = program_of(&parallel_plane_passes(&f, &whole(&f), Vec2::X, &tool, &params).unwrap(), &tool, &params);
        out.push((format!("{name}/guidance"), f.clone(), g));
        out.push((format!("{name}/planes"), f, p));
    }
    out
}

fn c2_feasibility(programs: &[(String, FeatureModel, IsoProgram)]) -> Outcome {
    let kin = MachineKinematics::default();
    let mut worst = (0.0_f64, String::new());
    for (name, _, prog) in programs {
        for sp in SET_POINTS {
            let m = plan_motion(prog, &kin, sp, &PlannerOptions::default()).unwrap();
            for s in m.samples(1000) {
                for i in 0..3 {
                    for (got, lim, what) in [(s.v[i], kin.v_max()[i], "v"), (s.a[i], kin.a_max()[i], "a"), (s.j[i], kin.j_max()[i], "j")] {
                        let excess = got - lim;
                        if excess > worst.0 {
                            worst = (excess, format!("{name} at {sp:.1} mm/s, axis {i} {what}"));
                        }
                    }
                }
            }
        }
    }
    let n = programs.len() * SET_POINTS.len();
    outcome(worst.0 <= 1e-6, format!("{n} programs x 1000 instants; worst excess over a limit {:.2e} {}", worst.0, worst.1))
}

fn random_feature(rng: &mut ChaCha8Rng) -> FeatureModel {
    let spec = WavySpec {
        length: rng.random_range(40.0..120.0),
        gap: rng.random_range(8.0..30.0),
        amplitude: [rng.random_range(0.0..3.0), rng.random_range(0.0..3.0)],
        period: [rng.random_range(25.0..80.0), rng.random_range(25.0..80.0)],
        phase: [rng.random_range(0.0..6.3), rng.random_range(0.0..6.3)],
    };
    fixtures::wavy(&spec).unwrap()
}

fn c3_ratio_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let opts = CurveOptions::default();
    let (mut ratio_err, mut dual_err, mut curve_err) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut cases = 0;
    while cases < 1000 {
        let f = random_feature(&mut rng);
        let k = RatioK::new(rng.random_range(0.05..0.95)).unwrap();
        let p = StepP::new(rng.random_range(2.0..20.0)).unwrap();
        let (a, b) = (&f.boundary1, &f.boundary2);
        let pts = intermediate_points(a, b, k, &p, &f, &opts).unwrap();
        let dual = intermediate_points(b, a, k.complement(), &p, &f, &opts).unwrap();
        let curve = intermediate_curve_with(a, b, k, &p, &f, &opts).unwrap();
        for _ in 0..10 {
            let i = rng.random_range(0..pts.len());
            let s = pts[i].station;
            let (pa, pb) = (crossing_x(a, s), crossing_x(b, s));
            let expect = pa + (pb - pa) * k.value();
            ratio_err = ratio_err.max(xy_dist(pts[i].combined, expect));
            dual_err = dual_err.max(xy_dist(dual[i].combined, pts[i].combined));
            curve_err = curve_err.max(xy_dist(crossing_x(&curve, s), expect));
            cases += 1;
        }
    }
    let pass = ratio_err <= 1e-9 && dual_err <= 1e-9 && curve_err <= 1e-9;
    outcome(
        pass,
        format!("{cases} cases: ratio {ratio_err:.1e}, K/1-K duality {dual_err:.1e}, fitted curve at station {curve_err:.1e} (all <= 1e-9 mm)"),
    )
}

fn c4_net_termination() -> Outcome {
    let p = StepP::new(5.0).unwrap();
    let conv = fixtures::converging();
    let opts = NetOptions { stop_eps: 0.4, ..NetOptions::default() };
    let k = RatioK::new(0.75).unwrap();
    let net = build_net((B1, &conv.boundary1), (B2, &conv.boundary2), k, &p, &conv, &opts).unwrap();
    // Remaining gap after j curves is 0.25^j of the original, narrowest 2 mm at x = 20.
    let oracle = (1..).find(|&j| 2.0 * 0.25_f64.powi(j) <= 0.4).unwrap() - 1;
    let conv_ok = net.interior_count() as i32 == oracle;

    let dom = Domain::new([0.0, 20.0], [-2.0, 3.0]).unwrap();
    let surf = SurfacePatch::flat(0.0, dom);
    let l = |y: f64| SplineCurve::line(Point3::new(0.0, y, 0.0), Point3::new(20.0, y, 0.0));
    let par = FeatureModel::new(surf, l(0.0), l(1.0), Vec2::X).unwrap();
    let wide = NetOptions { stop_eps: 2.0, ..NetOptions::default() };
    let pnet = build_net((B1, &par.boundary1), (B2, &par.boundary2), RatioK::new(0.25).unwrap(), &p, &par, &wide).unwrap();
    let par_ok = pnet.interior_count() == 0;

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut terminated = 0;
    for _ in 0..200 {
        let f = random_feature(&mut rng);
        let k = RatioK::new(rng.random_range(0.2..0.8)).unwrap();
        let pp = StepP::new(rng.random_range(3.0..15.0)).unwrap();
        if let Ok(n) = build_net((B1, &f.boundary1), (B2, &f.boundary2), k, &pp, &f, &NetOptions::default()) {
            if n.interior_count() <= NetOptions::default().max_iters {
                terminated += 1;
            }
        }
    }
    outcome(
        conv_ok && par_ok && terminated == 200,
        format!(
            "converging: {} interior (oracle {oracle}); parallel/eps 2: {}; wavy nets terminated {terminated}/200",
            net.interior_count(),
            pnet.interior_count()
        ),
    )
}

fn c5_scallop() -> Outcome {
    let f = fixtures::master_like();
    let tool = Tool::default();
    let params = StrategyParams::default();
    let r = tool.ball_radius();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let guidance = composed_passes(&f, &ComposedArea::single(&f), &tool, &params, &CompositionOptions::default()).unwrap();
    let planes = parallel_plane_passes(&f, &whole(&f), Vec2::X, &tool, &params).unwrap();
    let w = effective_stepover(&tool, CUSP, &f.surface).unwrap();
    let mut worst = [0.0_f64; 2];
    for (slot, passes) in [&guidance, &planes].into_iter().enumerate() {
        let mut n = 0;
        while n < 100 {
            let i = rng.random_range(0..passes.len());
            let a = &passes[i];
            let next: Vec<&DensePass> = passes.iter().filter(|p| p.area == a.area && p.lane == a.lane + 1).collect();
            if next.is_empty() {
                continue;
            }
            let p1 = a.points[rng.random_range(0..a.points.len())];
            let Some((p2, _)) = next
                .iter()
                .map(|q| closest_on(&q.points, p1))
                .filter(|(_, interior)| *interior)
                .min_by(|x, y| (x.0 - p1).norm().total_cmp(&(y.0 - p1).norm()))
            else {
                continue;
            };
            // Samples facing the end of a shorter neighbour are not adjacent ridges.
            if (p2 - p1).norm() > 2.0 * w {
                continue;
            }
            worst[slot] = worst[slot].max(scallop(&f.surface, r, p1, p2));
            n += 1;
        }
    }
    let step = stepover_from_cusp(&tool, CUSP).unwrap();
    let pass = worst.iter().all(|&h| h <= 1.05 * CUSP) && (step - 0.399_50).abs() <= 1e-5 && (step - 0.399_499_687_1).abs() <= 1e-9;
    outcome(
        pass,
        format!(
            "max scallop guidance {:.5} mm, planes {:.5} mm (<= {:.5}); stepover_from_cusp(2, 0.01) = {step:.10}",
            worst[0],
            worst[1],
            1.05 * CUSP
        ),
    )
}

fn c6_chordal() -> Outcome {
    let f = fixtures::master_like();
    let tool = Tool::default();
    let params = StrategyParams::default();
    let method = guidance_method(&f, &StepP::new(5.0).unwrap(), &[]).unwrap();
    let sets = [
        composed_passes(&f, &ComposedArea::single(&f), &tool, &params, &CompositionOptions::default()).unwrap(),
        composed_passes(&f, method.primary(), &tool, &params, &CompositionOptions::default()).unwrap(),
        parallel_plane_passes(&f, &whole(&f), Vec2::X, &tool, &params).unwrap(),
    ];
    let (mut worst, mut blocks) = (0.0_f64, 0usize);
    for passes in &sets {
        let prog = program_of(passes, &tool, &params);
        for (pass, range) in passes.iter().zip(prog.passes()) {
            let dense = &pass.points;
            let mut at = 0;
            for b in &prog.blocks()[range.first_block..range.end_block] {
                let end = at + dense[at..].iter().skip(1).position(|&q| q == b.end).expect("block ends on a dense point") + 1;
                for k in at..end {
                    // Dense vertices and the midpoints of the dense segments.
                    let mid = (dense[k] + dense[k + 1]) * 0.5;
                    worst = worst.max(seg_dist(dense[k], b.start, b.end)).max(seg_dist(mid, b.start, b.end));
                }
                at = end;
                blocks += 1;
            }
        }
    }
    outcome(worst <= CHORDAL + 1e-12, format!("{blocks} blocks, max deviation {worst:.6} mm (<= {CHORDAL})"))
}

fn short_share(p: &IsoProgram) -> f64 {
    p.blocks().iter().filter(|b| b.length() < 1.0).count() as f64 / p.blocks().len() as f64
}

fn c7_short_blocks(programs: &[(String, FeatureModel, IsoProgram)]) -> Outcome {
    let get = |n: &str| &programs.iter().find(|(name, _, _)| name == n).unwrap().2;
    let (g, p) = (short_share(get("master-like/guidance")), short_share(get("master-like/planes")));
    outcome(
        p >= 4.0 * g && g < 0.05,
        format!("short (<1 mm) share: planes {:.2}%, guidance {:.2}%, ratio {:.2} (>= 4), guidance < 5%", 100.0 * p, 100.0 * g, p / g),
    )
}

fn c8_boundary_direction() -> Outcome {
    let f = fixtures::master_like();
    let tool = Tool::default();
    let params = StrategyParams::default();
    let net = build_net(
        (B1, &f.boundary1),
        (B2, &f.boundary2),
        RatioK::new(0.25).unwrap(),
        &StepP::new(5.0).unwrap(),
        &f,
        &NetOptions::default(),
    )
    .unwrap();
    if net.interior_count() < 9 {
        return outcome(false, format!("net has only {} interior curves", net.interior_count()));
    }
    let progs: Vec<IsoProgram> = [0, 1, 5, 9]
        .iter()
        .map(|&j| {
            let c = compose_boundary_direction(&net, j).unwrap();
            program_for_composed(&f, &c, &tool, &params, &CompositionOptions::default()).unwrap()
        })
        .collect();
    let mut pass = true;
    let mut detail = Vec::new();
    for sp in SET_POINTS {
        let t: Vec<f64> = progs.iter().map(|p| simulate_report(&f, p, sp).total_time_s).collect();
        let ok = t[1] <= 1.01 * t[2] && t[2] <= 1.01 * t[3] && t[3] <= 1.35 * t[0];
        pass &= ok;
        detail.push(format!("{:.0} mm/min: single {:.1} s, MA1 {:.1}, MA5 {:.1}, MA9 {:.1} (x{:.3})", sp * 60.0, t[0], t[1], t[2], t[3], t[3] / t[0]));
    }
    outcome(pass, detail.join("; "))
}

fn c9_median() -> Outcome {
    let f = fixtures::master_like();
    let tool = Tool::default();
    let params = StrategyParams::default();
    let p = StepP::new(5.0).unwrap();
    let opts = NetOptions::default();
    let four = compose_median(&f, RatioK::new(0.75).unwrap(), &p, MedianDirection::FromMedian, 1, &opts).unwrap();
    let fourteen = compose_median(&f, RatioK::new(0.25).unwrap(), &p, MedianDirection::FromMedian, 6, &opts).unwrap();
    if four.len() != 4 || fourteen.len() != 14 {
        return outcome(false, format!("decompositions have {} and {} areas", four.len(), fourteen.len()));
    }
    let prog = |c: &ComposedArea| program_for_composed(&f, c, &tool, &params, &CompositionOptions::default()).unwrap();
    let progs = [prog(&ComposedArea::single(&f)), prog(&four), prog(&fourteen)];
    let mut pass = true;
    let mut detail = Vec::new();
    for sp in SET_POINTS {
        let r: Vec<PerfReport> = progs.iter().map(|p| simulate_report(&f, p, sp)).collect();
        let band = |i: usize| r[i].band_slow_fraction.unwrap();
        let band_ok = band(1) <= band(0);
        let time_ok = (r[1].total_time_s - r[2].total_time_s).abs() <= 0.10 * r[2].total_time_s;
        let slow_ok = (r[1].slow_fraction - r[2].slow_fraction).abs() <= 0.10 * r[2].slow_fraction;
        pass &= band_ok && time_ok && slow_ok;
        detail.push(format!(
            "{:.0} mm/min: band slow 4-area {:.4} vs single {:.4} [{}], time 4/14 {:.1}/{:.1} s [{}], slow 4/14 {:.4}/{:.4} [{}]",
            sp * 60.0,
            band(1),
            band(0),
            if band_ok { "ok" } else { "x" },
            r[1].total_time_s,
            r[2].total_time_s,
            if time_ok { "ok" } else { "x" },
            r[1].slow_fraction,
            r[2].slow_fraction,
            if slow_ok { "ok" } else { "x" },
        ));
    }
    outcome(pass, detail.join("; "))
}

fn c10_method() -> Outcome {
    let f = fixtures::master_like();
    let out = guidance_method(&f, &StepP::new(5.0).unwrap(), &[]).unwrap();
    let area = out.primary();
    let chain = area.chain();
    let cand = &out.candidates[0];
    let (lo, hi) = f.station_range().unwrap();
    let mut worst: f64 = 0.0;
    for s in out.p.stations(lo, hi) {
        let (b1, b2) = (crossing_x(&f.boundary1, s), crossing_x(&f.boundary2, s));
        let med = b1 + (b2 - b1) * 0.5;
        worst = worst.max(xy_dist(crossing_x(area.curve("MED").unwrap(), s), med));
        for (id, b, start) in [("C1", b1, cand.starts[0]), ("C2", b2, cand.starts[1])] {
            let expect = match start {
                curveguide::curvenet::HalfStart::Boundary => b + (med - b) * 0.75,
                curveguide::curvenet::HalfStart::Median => med + (b - med) * 0.75,
                curveguide::curvenet::HalfStart::None => continue,
            };
            let Some(c) = area.curve(id) else {
                worst = f64::INFINITY;
                continue;
            };
            worst = worst.max(xy_dist(crossing_x(c, s), expect));
        }
    }
    let straight = fixtures::flat_straight();
    let two = guidance_method(&straight, &StepP::new(5.0).unwrap(), &[]).unwrap().primary().len();
    outcome(
        area.len() == 4 && worst <= 1e-9 && two == 2,
        format!("master-like: {} areas {:?}, max station error {worst:.1e} mm; straight boundaries: {two} areas", area.len(), chain),
    )
}

fn c11_determinism() -> Outcome {
    let cfg = PipelineConfig::default();
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let t0 = Instant::now();
    let s = cmd_pipeline(&OutDir::new(d1.path()), &cfg);
    let first = t0.elapsed().as_secs_f64();
    let s2 = cmd_pipeline(&OutDir::new(d2.path()), &cfg);
    if let Err(e) = s.as_ref().and(s2.as_ref()) {
        return outcome(false, format!("pipeline failed: {e}"));
    }
    let (a, b) = (artifact_list(&OutDir::new(d1.path())).unwrap(), artifact_list(&OutDir::new(d2.path())).unwrap());
    let same_files = a == b;
    let differing = a
        .iter()
        .filter(|rel| std::fs::read(d1.path().join(rel)).unwrap() != std::fs::read(d2.path().join(rel)).unwrap())
        .count();
    outcome(
        same_files && differing == 0 && first < 300.0,
        format!(
            "{} cells, {} artifacts, {differing} differ between runs; first run {first:.0} s on {} thread(s) (< 300 s)",
            s.unwrap().cells.len(),
            a.len(),
            rayon::current_num_threads()
        ),
    )
}

fn main() {
    let programs = fixture_programs();
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, "feed-profile oracle equivalence", Box::new(c1_profile_oracle)),
        (2, "kinematic feasibility", Box::new(|| c2_feasibility(&programs))),
        (3, "intermediate-curve ratio exactness", Box::new(c3_ratio_exactness)),
        (4, "net termination and derived count", Box::new(c4_net_termination)),
        (5, "scallop bound", Box::new(c5_scallop)),
        (6, "chordal bound", Box::new(c6_chordal)),
        (7, "short blocks, planes vs guidance", Box::new(|| c7_short_blocks(&programs))),
        (8, "boundary-direction time trend", Box::new(c8_boundary_direction)),
        (9, "median decompositions", Box::new(c9_median)),
        (10, "four-step method conformance", Box::new(c10_method)),
        (11, "pipeline determinism and runtime", Box::new(c11_determinism)),
    ];
    // Optional positional arguments pick criteria by number.
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    for (n, name, run) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let o = run();
        println!("criterion {n:>2} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass && !KNOWN_UNMET.contains(&n) {
            unexpected.push(n);
        }
        if o.pass && KNOWN_UNMET.contains(&n) {
            println!("             criterion {n} is listed as unmet but passed");
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
