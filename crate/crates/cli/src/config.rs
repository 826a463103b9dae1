//! Command line and config file. A config file holds `key = value` lines
//! (`#` starts a comment); each line is turned into `--key=value` and placed
//! ahead of the real arguments, so flags override the file and unknown keys
//! fail the same way in both places.

use std::path::{Path, PathBuf};

use clap::{ArgAction, Parser, ValueEnum};
use qsw_core::dynamics::{AmplitudeConvention, EvolveSettings, InitialState, Integrator};
use qsw_core::graph::{Topology, TopologySpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Build a graph; write it as text plus a drawing.
    Generate,
    /// Diameter, path length, clustering and spectrum of a graph.
    Metrics,
    /// E(t) and populations for one p.
    Evolve,
    /// E(p) at a fixed evaluation time, averaged over realizations.
    Sweep,
    /// Reproduce one figure; needs --preset.
    Experiment,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Chain,
    Ring,
    Star,
    Complete,
    Lattice,
    SmallWorld,
    RandomRegular,
    ScaleFree,
    KaryTree,
    Dendrimer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    SqrtRate,
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum IntegratorKind {
    Chebyshev,
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    Fig12,
    Fig13,
}

/// Initial condition as typed: a 1-based site, `center` or `average`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteArg {
    Site(usize),
    Center,
    Average,
}

impl SiteArg {
    pub fn resolve(self, n: usize) -> Result<InitialState, String> {
        match self {
            SiteArg::Site(s) if s <= n => Ok(InitialState::Site(s - 1)),
            SiteArg::Site(s) => Err(format!("site {s} exceeds the {n} nodes")),
            SiteArg::Center => Ok(InitialState::Site(n / 2)),
            SiteArg::Average => Ok(InitialState::Uniform),
        }
    }
}

fn parse_site(s: &str) -> Result<SiteArg, String> {
    match s {
        "center" => Ok(SiteArg::Center),
        "average" | "uniform" => Ok(SiteArg::Average),
        _ => match s.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("expected a site number >= 1, `center` or `average`, got `{s}`")),
            Ok(k) => Ok(SiteArg::Site(k)),
        },
    }
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("{x} is outside [0, 1]"))
    }
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} must be finite and non-negative"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let x = parse_non_negative(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err("must be positive".into())
    }
}

#[derive(Clone, Debug, Parser)]
#[command(name = "qsw", version, about = "Quantum stochastic walks on complex networks", args_override_self = true)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// Config file of `key = value` lines.
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "lattice")]
    pub topology: Family,
    /// Nodes for chain, ring, star, complete and scale-free graphs.
    #[arg(long, default_value_t = 35)]
    pub n: usize,
    /// Side of a square lattice; shorthand for --rows=m --cols=m.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 14)]
    pub rows: usize,
    #[arg(long, default_value_t = 14)]
    pub cols: usize,
    /// Small-world rewiring probability.
    #[arg(long, default_value_t = 0.1, value_parser = parse_unit)]
    pub r: f64,
    /// Links per new node in scale-free growth.
    #[arg(long, default_value_t = 2)]
    pub links: usize,
    #[arg(long, default_value_t = 2)]
    pub arity: usize,
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    #[arg(long, default_value_t = 3)]
    pub branching: usize,
    #[arg(long, default_value_t = 3)]
    pub generations: usize,
    /// Read the graph from a text file instead of generating it.
    #[arg(long)]
    pub graph: Option<PathBuf>,

    /// Master seed; every random choice derives from it.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1, value_parser = parse_unit)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_non_negative)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value = "sqrt-rate")]
    pub convention: Convention,
    /// Evaluation or final time; chosen automatically when absent.
    #[arg(long, value_parser = parse_positive)]
    pub t_final: Option<f64>,
    /// Initial site (1-based), `center`, or `average` over all sites.
    #[arg(long, default_value = "1", value_parser = parse_site)]
    pub site: SiteArg,
    /// Sink site (1-based); defaults to the last node.
    #[arg(long)]
    pub sink: Option<usize>,

    /// Number of equally spaced p values in [0, 1].
    #[arg(long, default_value_t = 21)]
    pub p_grid: usize,
    /// Realizations per point for random families.
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    /// Trajectory samples after t = 0.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "chebyshev")]
    pub integrator: IntegratorKind,
    /// RK4 step; defaults to a tenth of the inverse generator norm.
    #[arg(long, value_parser = parse_positive)]
    pub dt: Option<f64>,
    /// Add rho_ii columns to the trajectory.
    #[arg(long, action = ArgAction::Set, num_args = 0..=1, default_value_t = false, default_missing_value = "true")]
    pub populations: bool,

    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Parsed arguments plus the raw lines they came from.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub cli: Cli,
    /// Config file lines and command-line arguments, verbatim.
    pub echo: Vec<String>,
}

#[derive(Debug)]
pub enum ParseOutcome {
    Run(Box<RunConfig>),
    /// Help or version text; print and exit successfully.
    Info(String),
    Usage(String),
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
        if a == "--config" {
            return it.next().cloned();
        }
    }
    None
}

/// Turns config file text into `--key=value` arguments.
pub fn file_args(text: &str, path: &Path) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("{}:{}: expected `key = value`, found `{line}`", path.display(), k + 1));
        };
        let key = key.trim().replace('_', "-");
        if key == "config" {
            return Err(format!("{}:{}: `config` cannot be nested", path.display(), k + 1));
        }
        out.push(format!("--{key}={}", value.trim()));
    }
    Ok(out)
}

/// `args` excludes the program name.
pub fn parse(args: &[String]) -> ParseOutcome {
    let mut echo = Vec::new();
    let mut full = vec!["qsw".to_string()];
    if let Some(path) = config_path(args) {
        let path = PathBuf::from(path);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => return ParseOutcome::Usage(format!("cannot read config file {}: {e}", path.display())),
        };
        match file_args(&text, &path) {
            Ok(extra) => {
                echo.extend(text.lines().map(|l| format!("file: {l}")));
                full.extend(extra);
            }
            Err(e) => return ParseOutcome::Usage(e),
        }
    }
    echo.push(format!("args: {}", args.join(" ")));
    full.extend(args.iter().cloned());
    match Cli::try_parse_from(&full) {
        Ok(cli) => match cli.check() {
            Ok(()) => ParseOutcome::Run(Box::new(RunConfig { cli, echo })),
            Err(e) => ParseOutcome::Usage(e),
        },
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseOutcome::Info(e.to_string()),
                _ => ParseOutcome::Usage(e.to_string()),
            }
        }
    }
}

impl Cli {
    fn check(&self) -> Result<(), String> {
        if self.command == Command::Experiment && self.preset.is_none() {
            return Err("`experiment` needs --preset=figK".into());
        }
        if self.p_grid < 2 {
            return Err(format!("invalid value for `p-grid`: needs at least 2 points, got {}", self.p_grid));
        }
        if self.seeds == 0 {
            return Err("invalid value for `seeds`: needs at least 1".into());
        }
        if self.sink == Some(0) {
            return Err("invalid value for `sink`: sites are numbered from 1".into());
        }
        Ok(())
    }

    pub fn topology(&self) -> Topology {
        let (rows, cols) = self.m.map_or((self.rows, self.cols), |m| (m, m));
        match self.topology {
            Family::Chain => Topology::Chain { n: self.n },
            Family::Ring => Topology::Ring { n: self.n },
            Family::Star => Topology::Star { n: self.n },
            Family::Complete => Topology::Complete { n: self.n },
            Family::Lattice => Topology::SquareLattice { rows, cols },
            Family::SmallWorld => Topology::SmallWorld {
                rows,
                cols,
                rewiring: self.r,
            },
            Family::RandomRegular => Topology::RandomRegular { rows, cols },
            Family::ScaleFree => Topology::ScaleFree {
                n: self.n,
                links: self.links,
            },
            Family::KaryTree => Topology::KaryTree {
                arity: self.arity,
                depth: self.depth,
            },
            Family::Dendrimer => Topology::Dendrimer {
                branching: self.branching,
                generations: self.generations,
            },
        }
    }

    pub fn spec(&self) -> TopologySpec {
        TopologySpec::new(self.topology(), self.seed)
    }

    pub fn convention(&self) -> AmplitudeConvention {
        match self.convention {
            Convention::SqrtRate => AmplitudeConvention::SqrtRate,
            Convention::Literal => AmplitudeConvention::Literal,
        }
    }

    /// Settings for sweeps: only the final efficiency is needed.
    pub fn sweep_settings(&self) -> EvolveSettings {
        match self.integrator {
            IntegratorKind::Chebyshev => EvolveSettings::fast(),
            IntegratorKind::Rk4 => EvolveSettings {
                integrator: Integrator::Rk4 { dt: self.dt },
                samples: 1,
                ..EvolveSettings::default()
            },
        }
    }

    pub fn trajectory_settings(&self) -> EvolveSettings {
        EvolveSettings {
            samples: self.samples.max(1),
            record_populations: self.populations,
            ..self.sweep_settings()
        }
    }
}
