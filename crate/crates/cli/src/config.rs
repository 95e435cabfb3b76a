//! Run configuration: defaults, then a flat `key = value` file, then flags.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rmplate::{BoundaryCondition, MultiplierFamily, SolverChoice};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("config file line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },

    #[error("unknown config key `{key}` (line {line})")]
    UnknownKey { key: String, line: usize },

    #[error("invalid value for `{key}`: {message}")]
    Invalid { key: &'static str, message: String },
}

#[derive(Debug, Parser)]
#[command(name = "rmplate", version, about = "Locking-free mixed finite elements for Reissner-Mindlin plates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a uniformly loaded plate and export the fields.
    Solve(Overrides),
    /// Convergence study against the manufactured solution.
    Converge(Overrides),
    /// Centre deflection across a decreasing thickness sweep.
    Lock(LockArgs),
    /// Structural property checks with a pass/fail report.
    Check(Overrides),
    /// Mesh counts and quality statistics.
    MeshInfo(Overrides),
}

#[derive(Debug, Args)]
pub struct LockArgs {
    #[command(flatten)]
    pub common: Overrides,
    /// Use a conforming P1-P1 pure-penalty discretization instead (locks).
    #[arg(long)]
    pub naive: bool,
}

/// Every option is taken as text so flags and file entries share one parser.
#[derive(Debug, Args, Default)]
pub struct Overrides {
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `n=<subdivisions>` for the built-in unit square, or a mesh file path.
    #[arg(long)]
    pub mesh: Option<String>,
    /// `clamped` or `simply-supported`.
    #[arg(long)]
    pub bc: Option<String>,
    /// `dual` or `p1`.
    #[arg(long)]
    pub multiplier: Option<String>,
    #[arg(long)]
    pub youngs: Option<String>,
    #[arg(long)]
    pub poisson: Option<String>,
    /// Thickness, or a comma-separated list.
    #[arg(long)]
    pub t: Option<String>,
    /// `auto`, `saddle` or `condensed`.
    #[arg(long)]
    pub solver: Option<String>,
    /// Number of mesh levels for `converge`.
    #[arg(long)]
    pub levels: Option<String>,
    #[arg(long)]
    pub csv: Option<String>,
    #[arg(long)]
    pub json: Option<String>,
    #[arg(long)]
    pub vtk: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Solve,
    Converge,
    Lock,
    Check,
    MeshInfo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeshSource {
    UnitSquare(usize),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub mesh: MeshSource,
    pub bc: BoundaryCondition,
    pub multiplier: MultiplierFamily,
    pub youngs: f64,
    pub poisson: f64,
    pub thickness: Vec<f64>,
    pub solver: SolverChoice,
    pub levels: usize,
    pub naive: bool,
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub vtk: Option<PathBuf>,
}

const KEYS: [&str; 11] =
    ["mesh", "bc", "multiplier", "youngs", "poisson", "t", "solver", "levels", "csv", "json", "vtk"];

impl RunConfig {
    pub fn defaults(command: CommandKind) -> Self {
        let (n, thickness) = match command {
            CommandKind::Lock => (8, vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-6]),
            _ => (4, vec![0.1]),
        };
        Self {
            command,
            mesh: MeshSource::UnitSquare(n),
            bc: BoundaryCondition::Clamped,
            multiplier: MultiplierFamily::Dual,
            youngs: 1.0,
            poisson: 0.3,
            thickness,
            solver: SolverChoice::Auto,
            levels: 4,
            naive: false,
            csv: None,
            json: None,
            vtk: None,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self, ConfigError> {
        let (kind, overrides, naive) = match cli.command {
            Command::Solve(o) => (CommandKind::Solve, o, false),
            Command::Converge(o) => (CommandKind::Converge, o, false),
            Command::Lock(a) => (CommandKind::Lock, a.common, a.naive),
            Command::Check(o) => (CommandKind::Check, o, false),
            Command::MeshInfo(o) => (CommandKind::MeshInfo, o, false),
        };
        let mut config = Self::defaults(kind);
        config.naive = naive;
        if let Some(path) = &overrides.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::Io { path: path.clone(), message: e.to_string() })?;
            for (_, key, value) in parse_file(&text)? {
                config.set(&key, &value)?;
            }
        }
        let flags = [
            ("mesh", &overrides.mesh),
            ("bc", &overrides.bc),
            ("multiplier", &overrides.multiplier),
            ("youngs", &overrides.youngs),
            ("poisson", &overrides.poisson),
            ("t", &overrides.t),
            ("solver", &overrides.solver),
            ("levels", &overrides.levels),
            ("csv", &overrides.csv),
            ("json", &overrides.json),
            ("vtk", &overrides.vtk),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        config.validate()?;
        Ok(config)
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = value.trim();
        match key {
            "mesh" => self.mesh = parse_mesh(value)?,
            "bc" => {
                self.bc = match value {
                    "clamped" => BoundaryCondition::Clamped,
                    "simply-supported" => BoundaryCondition::SimplySupported,
                    _ => return Err(invalid("bc", format!("expected `clamped` or `simply-supported`, got `{value}`"))),
                }
            }
            "multiplier" => {
                self.multiplier = match value {
                    "dual" => MultiplierFamily::Dual,
                    "p1" => MultiplierFamily::Linear,
                    _ => return Err(invalid("multiplier", format!("expected `dual` or `p1`, got `{value}`"))),
                }
            }
            "youngs" => self.youngs = parse_f64("youngs", value)?,
            "poisson" => self.poisson = parse_f64("poisson", value)?,
            "t" => {
                self.thickness = value.split(',').map(|s| parse_f64("t", s.trim())).collect::<Result<_, _>>()?;
            }
            "solver" => {
                self.solver = match value {
                    "auto" => SolverChoice::Auto,
                    "saddle" => SolverChoice::Saddle,
                    "condensed" => SolverChoice::Condensed,
                    _ => {
                        return Err(invalid(
                            "solver",
                            format!("expected `auto`, `saddle` or `condensed`, got `{value}`"),
                        ))
                    }
                }
            }
            "levels" => {
                self.levels =
                    value.parse().map_err(|_| invalid("levels", format!("expected an integer, got `{value}`")))?
            }
            "csv" => self.csv = Some(PathBuf::from(value)),
            "json" => self.json = Some(PathBuf::from(value)),
            "vtk" => self.vtk = Some(PathBuf::from(value)),
            _ => unreachable!("keys are checked before dispatch"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.youngs > 0.0 && self.youngs.is_finite()) {
            return Err(invalid("youngs", format!("must be positive, got {}", self.youngs)));
        }
        if !(0.0..0.5).contains(&self.poisson) {
            return Err(invalid("poisson", format!("must lie in [0, 0.5), got {}", self.poisson)));
        }
        if self.thickness.is_empty() {
            return Err(invalid("t", "at least one thickness is required".into()));
        }
        if let Some(t) = self.thickness.iter().find(|&&t| !(t > 0.0 && t < 1.0)) {
            return Err(invalid("t", format!("every thickness must lie in (0, 1), got {t}")));
        }
        match self.command {
            CommandKind::Solve | CommandKind::Check if self.thickness.len() != 1 => {
                return Err(invalid(
                    "t",
                    format!("this command takes a single thickness, got {}", self.thickness.len()),
                ));
            }
            CommandKind::Converge if self.levels < 3 => {
                return Err(invalid(
                    "levels",
                    format!("a convergence study needs at least 3 levels, got {}", self.levels),
                ));
            }
            CommandKind::Lock if self.thickness.windows(2).any(|w| w[1] >= w[0]) => {
                return Err(invalid("t", "the sweep must be strictly decreasing".into()));
            }
            _ => {}
        }
        if self.solver == SolverChoice::Condensed && self.multiplier != MultiplierFamily::Dual {
            return Err(invalid("solver", "the condensed solver requires `multiplier = dual`".into()));
        }
        Ok(())
    }
}

fn invalid(key: &'static str, message: String) -> ConfigError {
    ConfigError::Invalid { key, message }
}

fn parse_f64(key: &'static str, value: &str) -> Result<f64, ConfigError> {
    value.parse::<f64>().map_err(|_| invalid(key, format!("expected a number, got `{value}`")))
}

fn parse_mesh(value: &str) -> Result<MeshSource, ConfigError> {
    match value.strip_prefix("n=") {
        Some(n) => match n.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(MeshSource::UnitSquare(n)),
            _ => Err(invalid("mesh", format!("expected `n=<positive integer>`, got `{value}`"))),
        },
        None if value.is_empty() => Err(invalid("mesh", "empty mesh path".into())),
        None => Ok(MeshSource::File(Path::new(value).to_path_buf())),
    }
}

/// `(line, key, value)` triples; `#` starts a comment.
pub fn parse_file(text: &str) -> Result<Vec<(usize, String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax { line: i + 1, text: raw.to_string() });
        };
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey { key: key.to_string(), line: i + 1 });
        }
        out.push((i + 1, key.to_string(), value.trim().to_string()));
    }
    Ok(out)
}
