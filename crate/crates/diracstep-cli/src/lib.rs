//! Implementation of the `diracstep` command-line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod constants;
pub mod scan;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use args::{Cli, Command, Format, Mode, ScanRequest};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Library(#[from] diracstep::Error),
    #[error("maximum deviation {max:.3e} exceeds threshold {threshold:.3e} ({failures} failed points)")]
    ThresholdExceeded { max: f64, threshold: f64, failures: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ThresholdExceeded { .. } => 1,
            _ => 2,
        }
    }
}

fn sink(path: &Option<std::path::PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Scan(a) => {
            let req = ScanRequest::from_args(&a)?;
            let result = scan::run_scan(&req)?;
            let mut out = sink(&req.out)?;
            match req.format {
                Format::Csv => result.table.write_csv(&mut out)?,
                Format::Json => result.table.write_json(scan::header(&req, &result), &mut out)?,
            }
            out.flush()?;
            if req.mode == Mode::OracleCompare {
                let max = result.max_deviation.unwrap_or(f64::NAN);
                eprintln!(
                    "max |F_closed − F_oracle|, |B_closed − B_oracle| = {max:.3e} over {} points ({} failed), threshold {:.3e}",
                    result.table.rows.len(),
                    result.failures,
                    req.threshold
                );
                if !(max <= req.threshold) || result.failures > 0 {
                    return Err(CliError::ThresholdExceeded {
                        max,
                        threshold: req.threshold,
                        failures: result.failures,
                    });
                }
            }
            Ok(())
        }
        Command::Constants(a) => {
            let report = constants::run_constants(a.energy_ratio)?;
            let mut out = sink(&None)?;
            match a.format {
                Format::Csv => report.write_csv(&mut out)?,
                Format::Json => {
                    report.write_json(serde_json::json!({ "library_version": diracstep::VERSION }), &mut out)?
                }
            }
            out.flush()?;
            Ok(())
        }
    }
}
