use super::{report, PerfReport, ReportOptions};
use crate::curvenet::ComposedArea;
use crate::error::{invalid, Result};
use crate::feedsim::{simulate, MachineKinematics, PlannerOptions};
use crate::geometry::FeatureModel;
use crate::toolpath::{program_for_composed, CompositionOptions, StrategyParams, Tool};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt::Write;

/// Lexicographic ranking key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankBy {
    /// Slow fraction first, machining time on ties.
    #[default]
    SlowThenTime,
    TimeThenSlow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub name: String,
    pub total_time_s: f64,
    /// Time difference to the first report, percent.
    pub delta_pct: f64,
    pub slow_fraction: f64,
    pub band_slow_fraction: Option<f64>,
    /// 1 is best.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub set_point: f64,
    pub rank_by: RankBy,
    /// In input order.
    pub rows: Vec<ComparisonRow>,
}

impl Comparison {
    /// Index of the rank-1 row.
    pub fn best(&self) -> usize {
        self.rows.iter().position(|r| r.rank == 1).unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,total_time_s,delta_pct,slow_fraction,band_slow_fraction,rank\n");
        for r in &self.rows {
            let band = r.band_slow_fraction.map_or(String::new(), |b| b.to_string());
            writeln!(out, "{},{},{},{},{},{}", r.name, r.total_time_s, r.delta_pct, r.slow_fraction, band, r.rank).unwrap();
        }
        out
    }
}

pub fn compare(reports: &[(String, PerfReport)]) -> Result<Comparison> {
    compare_by(reports, RankBy::default())
}

pub fn compare_by(reports: &[(String, PerfReport)], rank_by: RankBy) -> Result<Comparison> {
    let Some((_, first)) = reports.first() else {
        return invalid("nothing to compare");
    };
    if let Some((name, r)) = reports.iter().find(|(_, r)| r.set_point != first.set_point) {
        return invalid(format!("report {name} has set point {} but the first has {}", r.set_point, first.set_point));
    }
    let key = |r: &PerfReport| match rank_by {
        RankBy::SlowThenTime => (r.slow_fraction, r.total_time_s),
        RankBy::TimeThenSlow => (r.total_time_s, r.slow_fraction),
    };
    let mut order: Vec<usize> = (0..reports.len()).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(&reports[a].1), key(&reports[b].1));
        ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(Ordering::Equal)
    });
    let mut rank = vec![0; reports.len()];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = pos + 1;
    }
    let rows = reports
        .iter()
        .zip(rank)
        .map(|((name, r), rank)| ComparisonRow {
            name: name.clone(),
            total_time_s: r.total_time_s,
            delta_pct: 100.0 * (r.total_time_s - first.total_time_s) / first.total_time_s,
            slow_fraction: r.slow_fraction,
            band_slow_fraction: r.band_slow_fraction,
            rank,
        })
        .collect();
    Ok(Comparison { set_point: first.set_point, rank_by, rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    pub best: ComposedArea,
    pub reports: Vec<PerfReport>,
    pub table: Comparison,
}

/// Simulates the morphing program of each candidate and picks the best by the
/// default ranking; ties go to the earlier candidate.
pub fn rank_candidates(
    feature: &FeatureModel,
    candidates: &[ComposedArea],
    tool: &Tool,
    params: &StrategyParams,
    kin: &MachineKinematics,
    set_point: f64,
    opts: &ReportOptions,
) -> Result<Ranking> {
    if candidates.is_empty() {
        return invalid("no candidate to rank");
    }
    let reports: Vec<PerfReport> = candidates
        .par_iter()
        .map(|c| {
            let program = program_for_composed(feature, c, tool, params, &CompositionOptions::default())?;
            let sim = simulate(&program, kin, set_point, &PlannerOptions::default())?;
            report(&program, &sim, Some(feature), opts)
        })
        .collect::<Result<_>>()?;
    let named: Vec<(String, PerfReport)> =
        reports.iter().enumerate().map(|(i, r)| (format!("candidate-{i}"), r.clone())).collect();
    let table = compare(&named)?;
    Ok(Ranking { best: candidates[table.best()].clone(), reports, table })
}
