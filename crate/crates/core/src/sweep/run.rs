use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{correlators, Correlators, Route, TruncationReport};
use crate::gaussian::{coherence_sample_with_couplings, n_of_tau, s_of_tau, CoherenceSample};
use crate::param_map::{hamiltonian_from_state, GenerationSpec, HamiltonianParams};
use crate::sweep::config::{Mode, RunConfig};

/// Compare runs fail when the closed form and oracle differ by more than this.
pub const COMPARE_REL_TOL: f64 = 1e-4;

/// Uniform grid of `steps + 1` delays on [0, tau_max].
pub fn tau_grid(tau_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|i| {
            if i == steps {
                tau_max
            } else {
                tau_max * i as f64 / steps as f64
            }
        })
        .collect()
}

fn generation(config: &RunConfig) -> Result<(GenerationSpec, HamiltonianParams)> {
    let spec = GenerationSpec::new(config.state, config.t_gen)?;
    if spec.state.is_vacuum() {
        return Err(Error::UndefinedCoherence);
    }
    Ok((spec, hamiltonian_from_state(&spec)))
}

/// Couplings the run will use, derived from the configured state.
pub fn derived_couplings(config: &RunConfig) -> Result<HamiltonianParams> {
    generation(config).map(|(_, h)| h)
}

fn oracle_sample(
    config: &RunConfig,
    params: &HamiltonianParams,
    tau: f64,
    traces: &Correlators,
) -> Result<CoherenceSample> {
    let state = &config.state;
    let r_tau = 2.0 * params.c.magnitude() * tau;
    Ok(CoherenceSample {
        tau,
        r_tau,
        mean_n: traces.mean_n_tau,
        n_tau: n_of_tau(state.nbar(), state.xi.r(), r_tau),
        s_tau: s_of_tau(state.nbar(), state.xi.r(), r_tau),
        g2: traces.g2()?,
        a_tau: traces.mean_field_tau.into(),
    })
}

/// Evaluates every grid point in the configured mode (compare mode yields
/// the closed-form rows). Rows come back in ascending τ.
pub fn run_sweep(config: &RunConfig) -> Result<Vec<CoherenceSample>> {
    let (spec, params) = generation(config)?;
    let grid = tau_grid(config.tau_max, config.steps);
    match config.mode {
        Mode::ClosedForm | Mode::Compare => grid
            .par_iter()
            .map(|&tau| coherence_sample_with_couplings(&spec.state, params.b, params.c, tau))
            .collect(),
        Mode::Oracle => grid
            .par_iter()
            .map(|&tau| {
                let traces = correlators(
                    &spec.state,
                    &params,
                    tau,
                    config.oracle_dim,
                    Route::Propagated,
                )?;
                oracle_sample(config, &params, tau, &traces)
            })
            .collect(),
    }
}

/// One compare-mode row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub sample: CoherenceSample,
    pub g2_oracle: f64,
    pub abs_err: f64,
    pub convergence: TruncationReport,
}

/// Worst-case disagreement over a compare run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareReport {
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    pub worst_tau: f64,
    /// The first non-converged report, or the one with the largest relative
    /// change when everything converged.
    pub convergence: TruncationReport,
}

impl CompareReport {
    pub fn passed(&self) -> bool {
        self.max_rel_err <= COMPARE_REL_TOL && self.convergence.converged
    }
}

/// Evaluates closed form and oracle at every τ, with a truncation check at
/// `oracle_dim` against `2·oracle_dim`.
pub fn run_compare(config: &RunConfig) -> Result<(Vec<CompareRow>, CompareReport)> {
    let (spec, params) = generation(config)?;
    let dim = config.oracle_dim;
    let rows: Vec<CompareRow> = tau_grid(config.tau_max, config.steps)
        .par_iter()
        .map(|&tau| {
            let sample = coherence_sample_with_couplings(&spec.state, params.b, params.c, tau)?;
            let at_dim = correlators(&spec.state, &params, tau, dim, Route::Propagated)?;
            let doubled = correlators(&spec.state, &params, tau, 2 * dim, Route::Propagated)?;
            let convergence = TruncationReport::from_pair(&at_dim, &doubled)?;
            let g2_oracle = at_dim.g2()?;
            Ok(CompareRow {
                sample,
                g2_oracle,
                abs_err: (sample.g2 - g2_oracle).abs(),
                convergence,
            })
        })
        .collect::<Result<_>>()?;

    let mut report = CompareReport {
        max_abs_err: 0.0,
        max_rel_err: 0.0,
        worst_tau: 0.0,
        convergence: rows[0].convergence,
    };
    for row in &rows {
        let rel = row.abs_err / row.sample.g2.abs();
        if rel > report.max_rel_err {
            report.max_rel_err = rel;
            report.worst_tau = row.sample.tau;
        }
        report.max_abs_err = report.max_abs_err.max(row.abs_err);
        let current = &report.convergence;
        if current.converged
            && (!row.convergence.converged || row.convergence.rel_change > current.rel_change)
        {
            report.convergence = row.convergence;
        }
    }
    Ok((rows, report))
}
