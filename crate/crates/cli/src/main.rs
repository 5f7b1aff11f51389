use clap::{Args, Parser, Subcommand};
use curveguide::curvenet::MedianDirection;
use curveguide::toolpath::{Sweep, Tool};
use curveguide_cli::config::{DecompositionKind, FeatureSource, NetDirection, Strategy};
use curveguide_cli::{CliError, CliResult, OutDir, PipelineConfig};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "curveguide", version, about = "Guidance-curve decomposition and feed-rate simulation of bottom features")]
struct Cli {
    /// Directory that every relative path refers to.
    #[arg(long, global = true, default_value = ".")]
    out: String,
    /// Pipeline configuration (JSON); flags override its fields.
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(flatten)]
    flags: Overrides,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Overrides {
    /// Built-in fixture name.
    #[arg(long, global = true)]
    fixture: Option<String>,
    /// Feature JSON file.
    #[arg(long, global = true, conflicts_with = "fixture")]
    feature: Option<String>,
    #[arg(long, global = true, value_enum)]
    strategy: Option<Strategy>,
    #[arg(long = "type", global = true, value_enum)]
    kind: Option<DecompositionKind>,
    #[arg(long = "K", global = true)]
    k: Option<f64>,
    #[arg(long = "P", global = true)]
    p: Option<f64>,
    #[arg(long, global = true)]
    levels: Option<usize>,
    #[arg(long, global = true)]
    j: Option<usize>,
    #[arg(long, global = true, value_enum)]
    net_direction: Option<NetDirection>,
    #[arg(long, global = true, value_parser = parse_median_direction)]
    median_direction: Option<MedianDirection>,
    #[arg(long, global = true, value_delimiter = ',')]
    k_refine: Option<Vec<f64>>,
    #[arg(long, global = true)]
    stop_eps: Option<f64>,
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    #[arg(long, global = true)]
    tool_radius: Option<f64>,
    #[arg(long, global = true)]
    cusp: Option<f64>,
    #[arg(long, global = true)]
    chordal_tolerance: Option<f64>,
    #[arg(long, global = true, value_parser = parse_sweep)]
    sweep: Option<Sweep>,
    #[arg(long, global = true)]
    overrun: Option<f64>,
    /// Plane direction of the parallel-plane strategy, `x,y`.
    #[arg(long, global = true, value_delimiter = ',', num_args = 2)]
    basic_dir: Option<Vec<f64>>,
    /// Set points of `pipeline`, mm/s.
    #[arg(long, global = true, value_delimiter = ',')]
    set_points: Option<Vec<f64>>,
    #[arg(long, global = true)]
    lookahead: Option<usize>,
    #[arg(long, global = true)]
    no_curvature_limit: bool,
    #[arg(long, global = true)]
    slow_threshold: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a built-in fixture as feature JSON.
    MakeFeature {
        name: String,
        #[arg(long, default_value = "feature.json")]
        output: String,
    },
    /// Build an intermediate-curve net between the boundaries.
    Net {
        #[arg(long, default_value = "net.json")]
        output: String,
    },
    /// Build a composed machining area.
    Decompose {
        #[arg(long, default_value = "decomposition.json")]
        output: String,
    },
    /// Generate the toolpath of a decomposition (JSON plus G-code).
    Toolpath {
        /// Composed area JSON; built from the flags when omitted.
        #[arg(long)]
        decomposition: Option<String>,
        #[arg(long, default_value = "toolpath.json")]
        output: String,
    },
    /// Simulate a toolpath at one set point.
    Simulate {
        #[arg(long, default_value = "toolpath.json")]
        toolpath: String,
        /// mm/s.
        #[arg(long)]
        set_point: f64,
        #[arg(long, default_value = "sim.json")]
        output: String,
    },
    /// Performance report of a simulation, or a comparison of reports.
    Report {
        #[arg(long, default_value = "toolpath.json")]
        toolpath: String,
        #[arg(long, default_value = "sim.json")]
        sim: String,
        /// Compare these report files instead.
        #[arg(long, num_args = 2..)]
        compare: Option<Vec<String>>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Run the full experiment matrix.
    Pipeline,
}

fn parse_median_direction(s: &str) -> Result<MedianDirection, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| "expected toward-median or from-median".into())
}

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| "expected one-way or zigzag".into())
}

fn config(cli: &Cli, out: &OutDir) -> CliResult<PipelineConfig> {
    let mut c: PipelineConfig = match &cli.config {
        Some(path) => out.read_json(path)?,
        None => PipelineConfig::default(),
    };
    let f = &cli.flags;
    if let Some(n) = &f.fixture {
        c.feature = FeatureSource::Fixture(n.clone());
    }
    if let Some(p) = &f.feature {
        c.feature = FeatureSource::File(p.clone());
    }
    let d = &mut c.decomposition;
    macro_rules! set {
        ($($src:expr => $dst:expr),* $(,)?) => { $(if let Some(v) = $src.clone() { $dst = v; })* };
    }
    set!(f.strategy => c.strategy, f.kind => d.kind, f.k => d.k, f.p => d.p, f.levels => d.levels, f.j => d.j,
        f.net_direction => d.net_direction, f.median_direction => d.median_direction, f.k_refine => d.k_refine,
        f.stop_eps => c.net.stop_eps, f.max_iters => c.net.max_iters, f.cusp => c.params.cusp_height,
        f.chordal_tolerance => c.params.chordal_tolerance, f.sweep => c.params.sweep, f.overrun => c.params.overrun,
        f.set_points => c.set_points, f.slow_threshold => c.report.slow_threshold);
    if let Some(r) = f.tool_radius {
        c.tool = Tool::new(r)?;
    }
    if let Some(v) = &f.basic_dir {
        c.basic_dir = [v[0], v[1]];
    }
    if f.lookahead.is_some() {
        c.planner.lookahead = f.lookahead;
    }
    if f.no_curvature_limit {
        c.planner.curvature_limit = false;
    }
    c.validate()?;
    Ok(c)
}

fn run(cli: Cli) -> CliResult<()> {
    let out = OutDir::new(&cli.out);
    if let Command::MakeFeature { name, output } = &cli.command {
        println!("{}", curveguide_cli::cmd_make_feature(&out, name, output)?.display());
        return Ok(());
    }
    let cfg = config(&cli, &out)?;
    let written = match &cli.command {
        Command::MakeFeature { .. } => unreachable!(),
        Command::Net { output } => curveguide_cli::cmd_net(&out, &cfg, output)?,
        Command::Decompose { output } => curveguide_cli::cmd_decompose(&out, &cfg, output)?,
        Command::Toolpath { decomposition, output } => {
            curveguide_cli::cmd_toolpath(&out, &cfg, decomposition.as_deref(), output)?
        }
        Command::Simulate { toolpath, set_point, output } => {
            curveguide_cli::cmd_simulate(&out, &cfg, toolpath, *set_point, output)?
        }
        Command::Report { toolpath, sim, compare: Some(files), output } => {
            let _ = (toolpath, sim);
            curveguide_cli::cmd_compare(&out, files, output.as_deref().unwrap_or("comparison.csv"))?
        }
        Command::Report { toolpath, sim, compare: None, output } => {
            curveguide_cli::cmd_report(&out, &cfg, toolpath, sim, output.as_deref().unwrap_or("report.json"))?
        }
        Command::Pipeline => {
            let s = curveguide_cli::cmd_pipeline(&out, &cfg)?;
            println!("{} cells evaluated", s.cells.len());
            out.path("summary.csv")
        }
    };
    println!("{}", written.display());
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Pipeline { .. } = e {
                eprintln!("completed cells were kept");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
