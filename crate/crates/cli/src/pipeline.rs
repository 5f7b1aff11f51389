//! The full experiment matrix on one feature.

use crate::commands::{net, toolpath, write_report};
use crate::config::{NetDirection, PipelineConfig, Strategy};
use crate::error::{CliError, CliResult};
use crate::io::OutDir;
use curveguide::curvenet::{compose_boundary_direction, guidance_method, median_levels, ComposedArea, MedianDirection, RatioK, StepP};
use curveguide::feedsim::simulate;
use curveguide::geometry::FeatureModel;
use curveguide::perfview::{compare, PerfReport};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write;
use std::path::PathBuf;

/// One decomposition and strategy to evaluate.
#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub id: String,
    pub family: &'static str,
    pub strategy: Strategy,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    #[serde(rename = "P")]
    pub p: Option<f64>,
    pub direction: Option<String>,
    /// `j` of a boundary-direction area, levels of a median one.
    pub index: usize,
    #[serde(skip)]
    pub composed: ComposedArea,
    /// Reference cells also get G-code and feed maps.
    #[serde(skip)]
    pub reference: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellOutcome {
    pub cell: Cell,
    pub areas: usize,
    pub truncated: bool,
    pub blocks: usize,
    pub length_mm: f64,
    pub reports: Vec<PerfReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineSummary {
    pub set_points: Vec<f64>,
    pub cells: Vec<CellOutcome>,
    /// Best four-step candidate at the highest set point.
    pub method_best: Option<String>,
}

/// File-name label of a set point, e.g. `6000mm_min` for 100 mm/s.
pub fn set_point_label(sp: f64) -> String {
    format!("{}mm_min", (sp * 60.0).round())
}

fn fmt_k(k: f64) -> String {
    format!("{k:.2}")
}

fn cell(id: String, family: &'static str, composed: ComposedArea) -> Cell {
    Cell { id, family, strategy: Strategy::Guidance, k: None, p: None, direction: None, index: 0, composed, reference: false }
}

/// Every decomposition of the matrix, in a fixed order.
pub fn matrix_cells(cfg: &PipelineConfig, feature: &FeatureModel) -> CliResult<Vec<Cell>> {
    let m = &cfg.matrix;
    let mut cells = Vec::new();
    let single = ComposedArea::single(feature);
    cells.push(Cell { reference: true, ..cell("single".into(), "single", single.clone()) });
    if m.parallel_planes {
        cells.push(Cell { strategy: Strategy::ParallelPlanes, reference: true, ..cell("planes-single".into(), "single", single) });
    }

    let mut bd_cfg = cfg.clone();
    bd_cfg.decomposition.p = m.boundary_p;
    let bd_specs: Vec<(f64, NetDirection)> =
        m.boundary_k.iter().flat_map(|&k| [(k, NetDirection::B1ToB2), (k, NetDirection::B2ToB1)]).collect();
    let nets = bd_specs.par_iter().map(|&(k, d)| net(&bd_cfg, feature, k, d)).collect::<CliResult<Vec<_>>>()?;
    for ((k, d), n) in bd_specs.iter().zip(&nets) {
        let tag = match d {
            NetDirection::B1ToB2 => "b1-b2",
            NetDirection::B2ToB1 => "b2-b1",
        };
        for j in 1..=n.interior_count() {
            let mut c = cell(format!("bd-{tag}-K{}-j{j}", fmt_k(*k)), "boundary-direction", compose_boundary_direction(n, j)?);
            (c.k, c.p, c.direction, c.index) = (Some(*k), Some(m.boundary_p), Some(tag.into()), j);
            cells.push(c);
        }
    }

    let med_specs: Vec<(f64, f64, MedianDirection)> = m
        .median_k
        .iter()
        .flat_map(|&k| m.median_p.iter().map(move |&p| (k, p)))
        .flat_map(|(k, p)| [(k, p, MedianDirection::TowardMedian), (k, p, MedianDirection::FromMedian)])
        .collect();
    let levels = med_specs
        .par_iter()
        .map(|&(k, p, d)| Ok(median_levels(feature, RatioK::new(k)?, &StepP::new(p)?, d, &cfg.net)?))
        .collect::<CliResult<Vec<_>>>()?;
    for ((k, p, d), all) in med_specs.iter().zip(levels) {
        let tag = match d {
            MedianDirection::TowardMedian => "to-med",
            MedianDirection::FromMedian => "from-med",
        };
        for (l, composed) in all.into_iter().enumerate() {
            let mut c = cell(format!("med-{tag}-K{}-P{p}-l{l}", fmt_k(*k)), "median", composed);
            (c.k, c.p, c.direction, c.index) = (Some(*k), Some(*p), Some(tag.into()), l);
            cells.push(c);
        }
    }

    let ks = m.method_k.iter().map(|&k| RatioK::new(k)).collect::<Result<Vec<_>, _>>()?;
    let outcome = guidance_method(feature, &cfg.p()?, &ks)?;
    for cand in outcome.candidates {
        let primary = (cand.k.value() - curveguide::curvenet::HALF_RATIO).abs() < 1e-12;
        let mut c = cell(format!("method-K{}", fmt_k(cand.k.value())), "method-4step", cand.area);
        (c.k, c.p, c.reference) = (Some(cand.k.value()), Some(cfg.decomposition.p), primary);
        cells.push(c);
    }
    Ok(cells)
}

fn evaluate(out: &OutDir, cfg: &PipelineConfig, feature: &FeatureModel, cell: Cell) -> CellOutcome {
    let dir = format!("cells/{}", cell.id);
    let mut outcome = CellOutcome {
        areas: cell.composed.len(),
        truncated: cell.composed.is_truncated(),
        blocks: 0,
        length_mm: 0.0,
        reports: Vec::new(),
        error: None,
        cell,
    };
    let run = |o: &mut CellOutcome| -> CliResult<()> {
        out.write_json(format!("{dir}/decomposition.json"), &o.cell.composed)?;
        let mut c = cfg.clone();
        c.strategy = o.cell.strategy;
        let program = toolpath(&c, feature, &o.cell.composed)?;
        o.blocks = program.blocks().len();
        o.length_mm = program.total_length();
        if o.cell.reference && cfg.matrix.artifacts {
            out.write(format!("{dir}/toolpath.nc"), program.to_gcode().as_bytes())?;
        }
        for &sp in &cfg.set_points {
            let sim = simulate(&program, &cfg.kinematics, sp, &cfg.planner)?;
            let map = o.cell.reference && cfg.matrix.artifacts;
            let path = format!("{dir}/report-{}.json", set_point_label(sp));
            o.reports.push(write_report(out, &path, &program, &sim, Some(feature), cfg, map)?);
        }
        Ok(())
    };
    if let Err(e) = run(&mut outcome) {
        outcome.error = Some(e.to_string());
    }
    outcome
}

fn summary_csv(s: &PipelineSummary) -> String {
    let mut out = String::from("cell,family,strategy,K,P,direction,index,areas,truncated,blocks,length_mm,short_block_share,status");
    for &sp in &s.set_points {
        let l = set_point_label(sp);
        write!(out, ",time_s_{l},slow_fraction_{l},band_slow_fraction_{l}").unwrap();
    }
    out.push('\n');
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    for o in &s.cells {
        let c = &o.cell;
        let strategy = match c.strategy {
            Strategy::Guidance => "guidance",
            Strategy::ParallelPlanes => "parallel-planes",
        };
        let short = o.reports.first().map(|r| r.short_block_share);
        write!(
            out,
            "{},{},{strategy},{},{},{},{},{},{},{},{},{},{}",
            c.id,
            c.family,
            opt(c.k),
            opt(c.p),
            c.direction.clone().unwrap_or_default(),
            c.index,
            o.areas,
            o.truncated,
            o.blocks,
            o.length_mm,
            opt(short),
            if o.error.is_some() { "failed" } else { "ok" }
        )
        .unwrap();
        for i in 0..s.set_points.len() {
            match o.reports.get(i) {
                Some(r) => write!(out, ",{},{},{}", r.total_time_s, r.slow_fraction, opt(r.band_slow_fraction)).unwrap(),
                None => out.push_str(",,,"),
            }
        }
        out.push('\n');
    }
    out
}

/// Runs the whole matrix. Finished cells stay on disk when others fail.
pub fn cmd_pipeline(out: &OutDir, cfg: &PipelineConfig) -> CliResult<PipelineSummary> {
    cfg.validate()?;
    let feature = cfg.load_feature(out)?;
    out.write_json("config.json", cfg)?;
    out.write_json("feature.json", &feature)?;
    let cells = matrix_cells(cfg, &feature)?;
    let outcomes: Vec<CellOutcome> = cells.into_par_iter().map(|c| evaluate(out, cfg, &feature, c)).collect();

    let ok: Vec<&CellOutcome> = outcomes.iter().filter(|o| o.error.is_none()).collect();
    for (i, &sp) in cfg.set_points.iter().enumerate() {
        let named: Vec<(String, PerfReport)> = ok.iter().map(|o| (o.cell.id.clone(), o.reports[i].clone())).collect();
        if named.len() >= 2 {
            out.write(format!("comparison-{}.csv", set_point_label(sp)), compare(&named)?.to_csv().as_bytes())?;
        }
    }
    let top = cfg.set_points.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
    let method: Vec<(String, PerfReport)> = ok
        .iter()
        .filter(|o| o.cell.family == "method-4step")
        .map(|o| (o.cell.id.clone(), o.reports[top].clone()))
        .collect();
    let method_best = if method.is_empty() {
        None
    } else {
        let table = compare(&method)?;
        out.write("method-ranking.csv", table.to_csv().as_bytes())?;
        Some(table.rows[table.best()].name.clone())
    };
    let summary = PipelineSummary { set_points: cfg.set_points.clone(), cells: outcomes, method_best };
    out.write("summary.csv", summary_csv(&summary).as_bytes())?;
    out.write_json("summary.json", &summary)?;
    let failed = summary.cells.iter().filter(|o| o.error.is_some()).count();
    if failed > 0 {
        return Err(CliError::Pipeline { failed });
    }
    Ok(summary)
}

/// Relative paths of every file under the output directory, sorted.
pub fn artifact_list(out: &OutDir) -> CliResult<Vec<PathBuf>> {
    fn walk(root: &std::path::Path, dir: &std::path::Path, acc: &mut Vec<PathBuf>) -> std::io::Result<()> {
        for e in std::fs::read_dir(dir)? {
            let p = e?.path();
            if p.is_dir() {
                walk(root, &p, acc)?;
            } else {
                acc.push(p.strip_prefix(root).unwrap().to_path_buf());
            }
        }
        Ok(())
    }
    let mut acc = Vec::new();
    walk(out.root(), out.root(), &mut acc).map_err(|source| CliError::Io { path: out.root().to_path_buf(), source })?;
    acc.sort();
    Ok(acc)
}
