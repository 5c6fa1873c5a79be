//! Command-line front end: preset studies, single solves and configured moment runs.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::value::{Error as ValueError, StrDeserializer};
use serde::de::{Deserialize, IntoDeserializer};

use stochcol::config::{Mode, RunConfig};
use stochcol::experiments::{self, run_study, Orientation, StudyPlan};
use stochcol::splines::ShapeGoal;
use stochcol::uq::{NodeRule, SplineKind};
use stochcol::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "stochcol", version, about = "Stochastic collocation for 1-D conservation laws")]
struct Cli {
    /// Worker threads for the realization ensemble.
    #[arg(long, global = true, default_value_t = default_jobs())]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Burgers Riemann preset with gPC, cubic and shape-preserving spline outputs.
    RunExample1 {
        #[arg(long, default_value = "shock", value_parser = parse_enum::<Orientation>)]
        orientation: Orientation,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Shallow-water preset over the uncertain bump.
    RunExample2 {
        #[arg(long, default_value_t = 16)]
        points: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Solve one realization and write `{prefix}_snapshot.csv`.
    Solve {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        xi: f64,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Run the configured collocation study and write its moments.
    Moments {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Check the preset oracles.
    Selftest,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// TOML run configuration; the built-in Burgers default when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    prefix: Option<String>,
    #[arg(long)]
    final_time: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    #[arg(long)]
    minmod_theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,
    #[arg(long)]
    n_cells: Option<usize>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_parser = parse_enum::<Mode>)]
    mode: Option<Mode>,
    #[arg(long, value_parser = parse_enum::<NodeRule>)]
    node_rule: Option<NodeRule>,
    #[arg(long, value_parser = parse_enum::<SplineKind>)]
    spline_kind: Option<SplineKind>,
    #[arg(long, value_parser = parse_enum::<ShapeGoal>)]
    shape_goal: Option<ShapeGoal>,
    #[arg(long)]
    quadrature_points: Option<usize>,
    #[arg(long)]
    surface_points: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    probe_x: Option<f64>,
    /// Also write `(x, xi)` surfaces.
    #[arg(long)]
    surface: bool,
}

impl ConfigArgs {
    fn resolve(self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::burgers_default(),
        };
        if let Some(v) = self.out {
            c.output.dir = v;
        }
        if let Some(v) = self.prefix {
            c.output.prefix = v;
        }
        if let Some(v) = self.final_time {
            c.solver.final_time = v;
        }
        if let Some(v) = self.cfl {
            c.solver.cfl = v;
        }
        if let Some(v) = self.minmod_theta {
            c.solver.minmod_theta = v;
        }
        if let Some(v) = self.x_min {
            c.grid.x_min = v;
        }
        if let Some(v) = self.x_max {
            c.grid.x_max = v;
        }
        if let Some(v) = self.n_cells {
            c.grid.n_cells = v;
        }
        if let Some(v) = self.points {
            c.uq.points = v;
        }
        if let Some(v) = self.mode {
            c.uq.mode = v;
        }
        if self.node_rule.is_some() {
            c.uq.node_rule = self.node_rule;
        }
        if let Some(v) = self.spline_kind {
            c.uq.spline_kind = v;
        }
        if let Some(v) = self.shape_goal {
            c.uq.shape_goal = v;
        }
        if let Some(v) = self.quadrature_points {
            c.uq.quadrature_points = v;
        }
        if let Some(v) = self.surface_points {
            c.uq.surface_points = v;
        }
        if self.probe_x.is_some() {
            c.uq.probe_x = self.probe_x;
        }
        c.output.surface |= self.surface;
        c.validate()?;
        Ok(c)
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn parse_enum<T: for<'de> Deserialize<'de>>(s: &str) -> std::result::Result<T, String> {
    let de: StrDeserializer<'_, ValueError> = s.into_deserializer();
    T::deserialize(de).map_err(|e| e.to_string())
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn write_study(plan: &StudyPlan, dir: &std::path::Path) -> Result<()> {
    let study = run_study(plan)?;
    print_paths(&study.write(dir)?);
    Ok(())
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::RunExample1 { orientation, out } => write_study(&experiments::example1(orientation), &out),
        Command::RunExample2 { points, out } => write_study(&experiments::example2(points)?, &out),
        Command::Solve { xi, config } => {
            let config = config.resolve()?;
            let table = experiments::snapshot(&config, xi)?;
            let dir = &config.output.dir;
            std::fs::create_dir_all(dir).map_err(|source| Error::Io {
                path: dir.clone(),
                source,
            })?;
            let path = dir.join(format!("{}_snapshot.csv", config.output.prefix));
            table.write(&path)?;
            print_paths(&[path]);
            Ok(())
        }
        Command::Moments { config } => {
            let config = config.resolve()?;
            write_study(&StudyPlan::from_config(&config)?, &config.output.dir)
        }
        Command::Selftest => {
            experiments::preset_selftest()?.iter().for_each(|l| println!("{l}"));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if cli.jobs == 0 {
        return Err(Error::Config("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| execute(cli.command))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error code={} message={:?}", e.code(), e.to_string());
            ExitCode::FAILURE
        }
    }
}
