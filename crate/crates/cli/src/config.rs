//! Pipeline configuration file (JSON). Command-line flags override its fields.

use crate::error::{validation, CliResult};
use crate::io::OutDir;
use curveguide::curvenet::{MedianDirection, NetOptions, RatioK, StepP};
use curveguide::feedsim::{MachineKinematics, PlannerOptions, SET_POINTS};
use curveguide::fixtures;
use curveguide::geometry::{FeatureModel, Vec2};
use curveguide::perfview::ReportOptions;
use curveguide::toolpath::{StrategyParams, Tool};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureSource {
    Fixture(String),
    /// Feature JSON, relative to the output directory.
    File(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    #[default]
    Guidance,
    ParallelPlanes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DecompositionKind {
    #[default]
    Single,
    BoundaryDirection,
    Median,
    #[value(name = "method-4step")]
    #[serde(rename = "method-4step")]
    Method4Step,
}

/// Build direction of a boundary-to-boundary net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum NetDirection {
    #[default]
    B1ToB2,
    B2ToB1,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecompositionSpec {
    #[serde(rename = "type")]
    pub kind: DecompositionKind,
    #[serde(rename = "K")]
    pub k: f64,
    /// Station step, mm.
    #[serde(rename = "P")]
    pub p: f64,
    /// Median levels on each side.
    pub levels: usize,
    /// Interior curves used by a boundary-direction decomposition.
    pub j: usize,
    pub net_direction: NetDirection,
    pub median_direction: MedianDirection,
    /// Candidate ratios of the four-step method.
    pub k_refine: Vec<f64>,
}

impl Default for DecompositionSpec {
    fn default() -> Self {
        DecompositionSpec {
            kind: DecompositionKind::Single,
            k: 0.75,
            p: 5.0,
            levels: 1,
            j: 1,
            net_direction: NetDirection::B1ToB2,
            median_direction: MedianDirection::FromMedian,
            k_refine: vec![0.75],
        }
    }
}

/// Experiment matrix of the `pipeline` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatrixSpec {
    /// Ratios of the boundary-direction nets, built in both directions.
    pub boundary_k: Vec<f64>,
    /// Station step of the boundary-direction nets, mm.
    pub boundary_p: f64,
    pub median_k: Vec<f64>,
    pub median_p: Vec<f64>,
    /// Candidate ratios ranked for the four-step method.
    pub method_k: Vec<f64>,
    /// Also cut the single area with parallel planes.
    pub parallel_planes: bool,
    /// Write G-code and feed maps for the reference cells.
    pub artifacts: bool,
}

impl Default for MatrixSpec {
    fn default() -> Self {
        MatrixSpec {
            boundary_k: vec![0.25, 0.75],
            boundary_p: 5.0,
            median_k: vec![0.25, 0.5, 0.75],
            median_p: vec![5.0, 10.0, 20.0],
            method_k: vec![0.70, 0.75, 0.80],
            parallel_planes: true,
            artifacts: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub feature: FeatureSource,
    pub strategy: Strategy,
    /// Plane direction of the parallel-plane strategy (xy).
    pub basic_dir: [f64; 2],
    pub tool: Tool,
    pub params: StrategyParams,
    pub decomposition: DecompositionSpec,
    pub net: NetOptions,
    pub kinematics: MachineKinematics,
    pub planner: PlannerOptions,
    /// mm/s.
    pub set_points: Vec<f64>,
    pub report: ReportOptions,
    pub matrix: MatrixSpec,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            feature: FeatureSource::Fixture("master-like".into()),
            strategy: Strategy::Guidance,
            basic_dir: [1.0, 0.0],
            tool: Tool::default(),
            params: StrategyParams::default(),
            decomposition: DecompositionSpec::default(),
            net: NetOptions::default(),
            kinematics: MachineKinematics::default(),
            planner: PlannerOptions::default(),
            set_points: SET_POINTS.to_vec(),
            report: ReportOptions::default(),
            matrix: MatrixSpec::default(),
        }
    }
}

fn ratio(what: &str, k: f64) -> CliResult<RatioK> {
    RatioK::new(k).or_else(|_| validation(format!("{what} must lie strictly between 0 and 1, got {k}")))
}

fn step(what: &str, p: f64) -> CliResult<StepP> {
    StepP::new(p).or_else(|_| validation(format!("{what} must be a positive length in mm, got {p}")))
}

impl PipelineConfig {
    /// Checks every range; messages name the offending field.
    pub fn validate(&self) -> CliResult<()> {
        if let FeatureSource::Fixture(name) = &self.feature {
            if !fixtures::NAMES.contains(&name.as_str()) {
                return validation(format!("unknown fixture `{name}` (known: {})", fixtures::NAMES.join(", ")));
            }
        }
        if self.params.cusp_height >= self.tool.ball_radius() {
            return validation(format!(
                "params.cusp_height {} must be smaller than the tool radius {}",
                self.params.cusp_height,
                self.tool.ball_radius()
            ));
        }
        self.params.validate(&self.tool)?;
        self.basic_dir()?;
        ratio("decomposition.K", self.decomposition.k)?;
        step("decomposition.P", self.decomposition.p)?;
        self.k_refine()?;
        if !(self.net.stop_eps > 0.0) || self.net.max_iters == 0 {
            return validation("net.stop_eps must be positive and net.max_iters at least 1");
        }
        if self.set_points.is_empty() {
            return validation("set_points must not be empty");
        }
        if let Some(s) = self.set_points.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return validation(format!("set points must be positive, got {s}"));
        }
        if !(self.report.slow_threshold > 0.0 && self.report.slow_threshold <= 1.0) {
            return validation("report.slow_threshold must lie in (0, 1]");
        }
        for &k in self.matrix.boundary_k.iter().chain(&self.matrix.median_k).chain(&self.matrix.method_k) {
            ratio("matrix ratios", k)?;
        }
        for &p in self.matrix.median_p.iter().chain([&self.matrix.boundary_p]) {
            step("matrix steps", p)?;
        }
        Ok(())
    }

    pub fn basic_dir(&self) -> CliResult<Vec2> {
        Vec2::new(self.basic_dir[0], self.basic_dir[1])
            .normalized()
            .map_or_else(|| validation("basic_dir must be a non-zero xy vector"), Ok)
    }

    pub fn k(&self) -> CliResult<RatioK> {
        ratio("decomposition.K", self.decomposition.k)
    }

    pub fn p(&self) -> CliResult<StepP> {
        step("decomposition.P", self.decomposition.p)
    }

    pub fn k_refine(&self) -> CliResult<Vec<RatioK>> {
        self.decomposition.k_refine.iter().map(|&k| ratio("decomposition.k_refine", k)).collect()
    }

    pub fn load_feature(&self, out: &OutDir) -> CliResult<FeatureModel> {
        let f: FeatureModel = match &self.feature {
            FeatureSource::Fixture(name) => fixtures::by_name(name)?,
            FeatureSource::File(path) => out.read_json(path)?,
        };
        f.validate()?;
        Ok(f)
    }
}
