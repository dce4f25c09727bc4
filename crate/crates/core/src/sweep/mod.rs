//! τ sweeps behind the `g2sweep` binary.

pub mod config;
pub mod output;
pub mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};

pub use config::{parse_config, CliArgs, Mode, OutputFormat, RunConfig};
pub use run::{
    derived_couplings, run_compare, run_sweep, tau_grid, CompareReport, CompareRow, COMPARE_REL_TOL,
};

use crate::error::{Error, Result};

/// Process exit status for a finished run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNDEFINED: i32 = 2;
pub const EXIT_COMPARE_FAILED: i32 = 3;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UndefinedCoherence => EXIT_UNDEFINED,
        _ => EXIT_USAGE,
    }
}

/// Runs the configured sweep and writes it out. Returns `Ok(false)` when a
/// compare run exceeded its tolerance; the report goes to `diag` either way.
pub fn execute<E: Write>(config: &RunConfig, diag: &mut E) -> Result<bool> {
    let params = derived_couplings(config)?;
    let mut sink: Box<dyn Write> = match &config.output_path {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let passed = match config.mode {
        Mode::Compare => {
            let (rows, report) = run_compare(config)?;
            match config.output_format {
                OutputFormat::Csv => output::write_compare_csv(&mut sink, config, &params, &rows)?,
                OutputFormat::Json => {
                    output::write_compare_json(&mut sink, config, &params, &rows, &report)?
                }
            }
            writeln!(
                diag,
                "compare: max_abs_err={:.3e} max_rel_err={:.3e} at tau={} (tolerance {:.0e}); \
                 truncation dim={} rel_change={:.3e} tail_mass={:.3e} converged={}",
                report.max_abs_err,
                report.max_rel_err,
                report.worst_tau,
                COMPARE_REL_TOL,
                report.convergence.dim,
                report.convergence.rel_change,
                report.convergence.tail_mass,
                report.convergence.converged,
            )?;
            report.passed()
        }
        _ => {
            let rows = run_sweep(config)?;
            match config.output_format {
                OutputFormat::Csv => output::write_csv(&mut sink, config, &params, &rows)?,
                OutputFormat::Json => output::write_json(&mut sink, config, &params, &rows)?,
            }
            true
        }
    };
    sink.flush()?;
    Ok(passed)
}
