//! One function per subcommand, plus the in-memory steps they share with the pipeline.

use crate::config::{DecompositionKind, NetDirection, PipelineConfig, Strategy};
use crate::error::{validation, CliResult};
use crate::io::OutDir;
use curveguide::curvenet::{
    build_net, compose_boundary_direction, compose_median, guidance_method, ComposedArea, CurveNet, B1, B2,
};
use curveguide::feedsim::{simulate, SimResult};
use curveguide::fixtures;
use curveguide::geometry::FeatureModel;
use curveguide::perfview::{compare, feed_map, feed_map_csv, feed_map_svg, report, PerfReport};
use curveguide::toolpath::{parallel_planes_toolpath, program_for_composed, CompositionOptions, IsoProgram};
use std::path::{Path, PathBuf};

pub fn cmd_make_feature(out: &OutDir, name: &str, output: &str) -> CliResult<PathBuf> {
    if !fixtures::NAMES.contains(&name) {
        return validation(format!("unknown fixture `{name}` (known: {})", fixtures::NAMES.join(", ")));
    }
    let f = fixtures::by_name(name)?;
    f.validate()?;
    out.write_json(output, &f)
}

pub fn net(cfg: &PipelineConfig, feature: &FeatureModel, k: f64, direction: NetDirection) -> CliResult<CurveNet> {
    let k = curveguide::curvenet::RatioK::new(k)?;
    let (b1, b2) = ((B1, &feature.boundary1), (B2, &feature.boundary2));
    let (start, target) = match direction {
        NetDirection::B1ToB2 => (b1, b2),
        NetDirection::B2ToB1 => (b2, b1),
    };
    Ok(build_net(start, target, k, &cfg.p()?, feature, &cfg.net)?)
}

pub fn cmd_net(out: &OutDir, cfg: &PipelineConfig, output: &str) -> CliResult<PathBuf> {
    let f = cfg.load_feature(out)?;
    out.write_json(output, &net(cfg, &f, cfg.decomposition.k, cfg.decomposition.net_direction)?)
}

pub fn decompose(cfg: &PipelineConfig, feature: &FeatureModel) -> CliResult<ComposedArea> {
    let d = &cfg.decomposition;
    Ok(match d.kind {
        DecompositionKind::Single => ComposedArea::single(feature),
        DecompositionKind::BoundaryDirection => {
            let n = net(cfg, feature, d.k, d.net_direction)?;
            if d.j > n.interior_count() {
                return validation(format!("j = {} but the net has only {} interior curves", d.j, n.interior_count()));
            }
            compose_boundary_direction(&n, d.j)?
        }
        DecompositionKind::Median => compose_median(feature, cfg.k()?, &cfg.p()?, d.median_direction, d.levels, &cfg.net)?,
        DecompositionKind::Method4Step => guidance_method(feature, &cfg.p()?, &cfg.k_refine()?)?.primary().clone(),
    })
}

pub fn cmd_decompose(out: &OutDir, cfg: &PipelineConfig, output: &str) -> CliResult<PathBuf> {
    let f = cfg.load_feature(out)?;
    out.write_json(output, &decompose(cfg, &f)?)
}

pub fn toolpath(cfg: &PipelineConfig, feature: &FeatureModel, composed: &ComposedArea) -> CliResult<IsoProgram> {
    Ok(match cfg.strategy {
        Strategy::Guidance => program_for_composed(feature, composed, &cfg.tool, &cfg.params, &CompositionOptions::default())?,
        Strategy::ParallelPlanes => {
            let dir = cfg.basic_dir()?;
            let parts = composed
                .areas()
                .iter()
                .map(|a| parallel_planes_toolpath(feature, a, dir, &cfg.tool, &cfg.params))
                .collect::<Result<Vec<_>, _>>()?;
            IsoProgram::concat(parts)?
        }
    })
}

fn with_extension(path: &str, ext: &str) -> String {
    Path::new(path).with_extension(ext).to_string_lossy().into_owned()
}

/// Writes the program JSON and its G-code next to it.
pub fn cmd_toolpath(out: &OutDir, cfg: &PipelineConfig, decomposition: Option<&str>, output: &str) -> CliResult<PathBuf> {
    let f = cfg.load_feature(out)?;
    let composed = match decomposition {
        Some(path) => out.read_json(path)?,
        None => decompose(cfg, &f)?,
    };
    let program = toolpath(cfg, &f, &composed)?;
    out.write(with_extension(output, "nc"), program.to_gcode().as_bytes())?;
    out.write_json(output, &program)
}

pub fn cmd_simulate(out: &OutDir, cfg: &PipelineConfig, program: &str, set_point: f64, output: &str) -> CliResult<PathBuf> {
    if !(set_point > 0.0 && set_point.is_finite()) {
        return validation(format!("set point must be positive, got {set_point}"));
    }
    let program: IsoProgram = out.read_json(program)?;
    out.write_json(output, &simulate(&program, &cfg.kinematics, set_point, &cfg.planner)?)
}

/// Report JSON, both histograms as CSV and the feed map as CSV and SVG, all named after `output`.
pub fn write_report(
    out: &OutDir,
    output: &str,
    program: &IsoProgram,
    sim: &SimResult,
    feature: Option<&FeatureModel>,
    cfg: &PipelineConfig,
    with_map: bool,
) -> CliResult<PerfReport> {
    let r = report(program, sim, feature, &cfg.report)?;
    let stem = with_extension(output, "");
    let stem = stem.trim_end_matches('.');
    out.write(format!("{stem}-length-hist.csv"), r.block_length_hist.to_csv().as_bytes())?;
    out.write(format!("{stem}-feed-hist.csv"), r.feed_hist.to_csv().as_bytes())?;
    if with_map {
        out.write(format!("{stem}-feed-map.csv"), feed_map_csv(&feed_map(sim, program)?).as_bytes())?;
        out.write(format!("{stem}-feed-map.svg"), feed_map_svg(sim, program)?.as_bytes())?;
    }
    out.write_json(output, &r)?;
    Ok(r)
}

pub fn cmd_report(out: &OutDir, cfg: &PipelineConfig, program: &str, sim: &str, output: &str) -> CliResult<PathBuf> {
    let program: IsoProgram = out.read_json(program)?;
    let sim: SimResult = out.read_json(sim)?;
    let f = cfg.load_feature(out)?;
    write_report(out, output, &program, &sim, Some(&f), cfg, true)?;
    Ok(out.path(output))
}

/// Comparison table of report files, named by file stem, as CSV.
pub fn cmd_compare(out: &OutDir, reports: &[String], output: &str) -> CliResult<PathBuf> {
    if reports.len() < 2 {
        return validation("--compare needs at least two reports");
    }
    let named = reports
        .iter()
        .map(|p| {
            let name = Path::new(p).file_stem().map_or(p.clone(), |s| s.to_string_lossy().into_owned());
            Ok((name, out.read_json::<PerfReport>(p)?))
        })
        .collect::<CliResult<Vec<_>>>()?;
    out.write(output, compare(&named)?.to_csv().as_bytes())
}
