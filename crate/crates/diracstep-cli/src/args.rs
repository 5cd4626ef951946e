//! Command-line flags and their validation into a [`ScanRequest`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diracstep::units::{de_broglie_period_natural, NaturalUnits};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "diracstep", version, about = "Dirac-equation scattering at sharp and smooth potential steps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep one step parameter and write one row per grid point.
    Scan(ScanArgs),
    /// Print the SI conversions and the worked numeric example.
    Constants(ConstantsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    SharpSpatial,
    SharpTemporal,
    EmSpatial,
    EmTemporal,
    Smooth,
    Dispersion,
    OracleCompare,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::SharpSpatial => "sharp-spatial",
            Mode::SharpTemporal => "sharp-temporal",
            Mode::EmSpatial => "em-spatial",
            Mode::EmTemporal => "em-temporal",
            Mode::Smooth => "smooth",
            Mode::Dispersion => "dispersion",
            Mode::OracleCompare => "oracle-compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Inclusive scan range written `MIN:MAX`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
}

fn parse_grid(s: &str) -> Result<GridRange, String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected MIN:MAX, got '{s}'"))?;
    let min: f64 = a.trim().parse().map_err(|e| format!("bad grid minimum '{a}': {e}"))?;
    let max: f64 = b.trim().parse().map_err(|e| format!("bad grid maximum '{b}': {e}"))?;
    Ok(GridRange { min, max })
}

/// A transition constant, either in natural units or as a multiple of the
/// incident de Broglie period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TauSpec {
    Natural(f64),
    Periods(f64),
}

impl TauSpec {
    pub fn resolve(self, energy_ratio: f64, mass: f64) -> Result<f64, CliError> {
        match self {
            TauSpec::Natural(t) => Ok(t),
            TauSpec::Periods(f) => Ok(f * de_broglie_period_natural(energy_ratio, mass)?),
        }
    }
}

/// Accepts `0.3`, `tdb`, `2tdb`, `tdb/40` and `0.5tdb/2`.
pub fn parse_tau(s: &str) -> Result<TauSpec, String> {
    let lower = s.trim().to_ascii_lowercase();
    let Some((head, tail)) = lower.split_once("tdb") else {
        return lower.parse().map(TauSpec::Natural).map_err(|e| format!("bad tau '{s}': {e}"));
    };
    let factor: f64 =
        if head.is_empty() { 1.0 } else { head.parse().map_err(|e| format!("bad tau multiplier '{head}': {e}"))? };
    let divisor: f64 = match tail.strip_prefix('/') {
        None if tail.is_empty() => 1.0,
        Some(d) => d.parse().map_err(|e| format!("bad tau divisor '{d}': {e}"))?,
        None => return Err(format!("unexpected '{tail}' after tdb in '{s}'")),
    };
    Ok(TauSpec::Periods(factor / divisor))
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Incident energy in units of the rest mass, E/m.
    #[arg(long, default_value_t = 2.0)]
    pub energy_ratio: f64,
    /// Scan range MIN:MAX of the swept parameter (qV/m, qA/m or N).
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridRange>,
    /// Number of evenly spaced grid points, endpoints included.
    #[arg(long)]
    pub points: Option<usize>,
    /// Transition constant; repeat for several curves. Natural units, or
    /// de Broglie periods as in `tdb/40` or `2tdb`.
    #[arg(long = "tau", value_parser = parse_tau)]
    pub tau: Vec<TauSpec>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest accepted closed-form vs oracle deviation (oracle-compare).
    #[arg(long, default_value_t = 1e-6)]
    pub threshold: f64,
    /// Worker threads for the grid.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Energy ratio E/m used for the de Broglie period lines.
    #[arg(long, default_value_t = 2.0)]
    pub energy_ratio: f64,
}

pub const MAX_POINTS: usize = 10_000_000;

/// Validated scan parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRequest {
    pub mode: Mode,
    pub energy_ratio: f64,
    pub mass: f64,
    /// Swept values in output order.
    pub grid: Vec<f64>,
    pub grid_min: f64,
    pub grid_max: f64,
    pub tau_list: Vec<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threshold: f64,
    pub jobs: usize,
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

const ORACLE_QA: [f64; 5] = [0.5, 1.0, 2.0, 3.0, 3.5];
const ORACLE_TAU: [f64; 5] = [0.01, 0.1, 0.3, 1.0, 3.0];

impl ScanRequest {
    pub fn from_args(args: &ScanArgs) -> Result<Self, CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        let mass = NaturalUnits::default().mass;
        if !(args.energy_ratio.is_finite() && args.energy_ratio > 0.0) {
            return usage(format!("--energy-ratio must be positive, got {}", args.energy_ratio));
        }
        if args.mode != Mode::EmSpatial && args.mode != Mode::EmTemporal && !(args.energy_ratio > 1.0) {
            return usage(format!("--energy-ratio must exceed 1 for {}, got {}", args.mode.name(), args.energy_ratio));
        }
        if args.jobs == 0 {
            return usage("--jobs must be at least 1".into());
        }
        if !(args.threshold >= 0.0) {
            return usage(format!("--threshold must be non-negative, got {}", args.threshold));
        }

        let (default_range, default_points) = match args.mode {
            Mode::EmSpatial | Mode::EmTemporal => (GridRange { min: 0.5, max: 4.0 }, 351),
            Mode::OracleCompare => (GridRange { min: ORACLE_QA[0], max: ORACLE_QA[4] }, 5),
            _ => (GridRange { min: 0.0, max: 5.0 }, 501),
        };
        let range = args.grid.unwrap_or(default_range);
        let points = args.points.unwrap_or(default_points);
        if !(range.min.is_finite() && range.max.is_finite() && range.min < range.max) {
            return usage(format!("--grid needs MIN < MAX, got {}:{}", range.min, range.max));
        }
        if !(2..=MAX_POINTS).contains(&points) {
            return usage(format!("--points must be in [2, {MAX_POINTS}], got {points}"));
        }
        let grid = if args.mode == Mode::OracleCompare && args.grid.is_none() && args.points.is_none() {
            ORACLE_QA.to_vec()
        } else {
            linspace(range.min, range.max, points)
        };

        let mut tau_list =
            args.tau.iter().map(|t| t.resolve(args.energy_ratio, mass)).collect::<Result<Vec<_>, _>>()?;
        if tau_list.is_empty() {
            tau_list = match args.mode {
                Mode::Smooth => [1.0 / 40.0, 0.25, 2.0]
                    .iter()
                    .map(|&f| TauSpec::Periods(f).resolve(args.energy_ratio, mass))
                    .collect::<Result<Vec<_>, _>>()?,
                Mode::OracleCompare => ORACLE_TAU.to_vec(),
                _ => Vec::new(),
            };
        } else if !matches!(args.mode, Mode::Smooth | Mode::OracleCompare) {
            return usage(format!("--tau applies only to smooth and oracle-compare, not {}", args.mode.name()));
        }
        if let Some(bad) = tau_list.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return usage(format!("tau must be positive, got {bad}"));
        }

        Ok(Self {
            mode: args.mode,
            energy_ratio: args.energy_ratio,
            mass,
            grid_min: grid[0],
            grid_max: *grid.last().unwrap(),
            grid,
            tau_list,
            format: args.format,
            out: args.out.clone(),
            threshold: args.threshold,
            jobs: args.jobs,
        })
    }
}
