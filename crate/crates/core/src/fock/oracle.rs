//! Brute-force two-time correlators in a truncated Fock basis.
//!
//! g²(τ) = Tr[ρ_G a† a†(τ) a(τ) a] / (Tr[ρ_G a†a] · Tr[ρ_G a†(τ) a(τ)]),
//! with a(τ) = e^{iHτ} a e^{−iHτ} and ρ_G = D(α) S(ξ) ρ₀ S(−ξ) D(−α).
//!
//! Two evaluation routes give the same numbers at a given dimension:
//! [`Route::Dense`] builds every operator as a dense matrix, while
//! [`Route::Propagated`] writes ρ_G = Σ p_k |ψ_k⟩⟨ψ_k| with ψ_k = D S |k⟩
//! and only ever applies the banded generators to vectors, so dimensions in
//! the thousands stay cheap.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::matrix::{
    displacement_generator, gaussian_rho, heisenberg_a_matrix, ladder_operators, propagator,
    squeeze_generator, thermal_populations, FockMatrix,
};
use crate::fock::propagator::{apply_lowering, norm_sqr, BandedGenerator};
use crate::gaussian::GaussianStateParams;
use crate::param_map::HamiltonianParams;

/// Relative change of g² between dim and 2·dim accepted as converged.
pub const CONVERGENCE_REL_TOL: f64 = 1e-6;
/// Largest population allowed in the top tenth of the basis.
pub const TAIL_MASS_TOL: f64 = 1e-8;
/// Default truncation for oracle runs.
pub const DEFAULT_DIM: usize = 120;

/// Thermal components lighter than this (relative to p₀) are skipped by the
/// propagated route.
const THERMAL_CUTOFF: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    Dense,
    #[default]
    Propagated,
}

/// Raw traces computed by the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlators {
    pub dim: usize,
    /// Tr[ρ_G a†a].
    pub mean_n0: f64,
    /// Tr[ρ_G a†(τ) a(τ)].
    pub mean_n_tau: f64,
    /// Tr[ρ_G a† a†(τ) a(τ) a].
    pub numerator: Complex64,
    /// Tr[ρ_G a(τ)].
    pub mean_field_tau: Complex64,
    /// Population in the top tenth of the basis, maximised over ρ_G and the
    /// evolved states that enter the traces.
    pub tail_mass: f64,
}

impl Correlators {
    pub fn g2(&self) -> Result<f64> {
        let denom = self.mean_n0 * self.mean_n_tau;
        if !(denom > 0.0) {
            return Err(Error::UndefinedCoherence);
        }
        Ok(self.numerator.re / denom)
    }
}

fn check_inputs(state: &GaussianStateParams, tau: f64, dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::domain(format!(
            "Fock dimension must be >= 2, got {dim}"
        )));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::domain(format!(
            "τ must be finite and >= 0, got {tau}"
        )));
    }
    if state.is_vacuum() {
        return Err(Error::UndefinedCoherence);
    }
    Ok(())
}

/// First index of the top tenth of the basis.
pub fn tail_start(dim: usize) -> usize {
    dim - (dim / 10).max(1)
}

/// Evaluates all oracle traces at truncation `dim`.
pub fn correlators(
    state: &GaussianStateParams,
    params: &HamiltonianParams,
    tau: f64,
    dim: usize,
    route: Route,
) -> Result<Correlators> {
    check_inputs(state, tau, dim)?;
    match route {
        Route::Dense => dense_correlators(state, params, tau, dim),
        Route::Propagated => propagated_correlators(state, params, tau, dim),
    }
}

fn tail_of_diagonal(m: &FockMatrix) -> f64 {
    let dim = m.dim();
    let total: f64 = m.diagonal().iter().map(|z| z.re).sum();
    if total <= 0.0 {
        return 0.0;
    }
    m.diagonal()[tail_start(dim)..]
        .iter()
        .map(|z| z.re)
        .sum::<f64>()
        / total
}

fn dense_correlators(
    state: &GaussianStateParams,
    params: &HamiltonianParams,
    tau: f64,
    dim: usize,
) -> Result<Correlators> {
    let (a, adag) = ladder_operators(dim)?;
    let rho = gaussian_rho(state, dim)?;
    let a_tau = heisenberg_a_matrix(params, tau, dim)?;
    let n_tau_op = &a_tau.adjoint() * &a_tau;

    let mean_n0 = (&adag * &a).trace_product(&rho).re;
    let mean_n_tau = n_tau_op.trace_product(&rho).re;
    let mean_field_tau = a_tau.trace_product(&rho);
    let numerator = (&(&adag * &n_tau_op) * &a).trace_product(&rho);

    let u = propagator(params, tau, dim)?;
    let evolved = &(&u * &rho) * &u.adjoint();
    let kicked = &(&a * &rho) * &adag;
    let kicked_evolved = &(&u * &kicked) * &u.adjoint();
    let tail_mass = tail_of_diagonal(&rho)
        .max(tail_of_diagonal(&evolved))
        .max(tail_of_diagonal(&kicked_evolved));

    Ok(Correlators {
        dim,
        mean_n0,
        mean_n_tau,
        numerator,
        mean_field_tau,
        tail_mass,
    })
}

fn tail_weight(v: &[Complex64]) -> f64 {
    norm_sqr(&v[tail_start(v.len())..])
}

fn propagated_correlators(
    state: &GaussianStateParams,
    params: &HamiltonianParams,
    tau: f64,
    dim: usize,
) -> Result<Correlators> {
    let p = thermal_populations(state.nbar(), dim)?;
    let squeeze = BandedGenerator::new(&squeeze_generator(&state.xi), dim);
    let drive = BandedGenerator::new(&displacement_generator(state.alpha), dim);
    let amp = BandedGenerator::new(params, dim);

    let mut mean_n0 = 0.0;
    let mut mean_n_tau = 0.0;
    let mut numerator = 0.0;
    let mut mean_field_tau = Complex64::new(0.0, 0.0);
    let (mut tail_rho, mut tail_evolved, mut tail_kicked) = (0.0, 0.0, 0.0);

    let p0 = p[0];
    for (k, &pk) in p.iter().enumerate() {
        if pk < THERMAL_CUTOFF * p0 {
            break;
        }
        let mut basis = vec![Complex64::new(0.0, 0.0); dim];
        basis[k] = Complex64::new(1.0, 0.0);
        let psi = drive.propagate(1.0, &squeeze.propagate(1.0, &basis));
        let kicked = apply_lowering(&psi);
        mean_n0 += pk * norm_sqr(&kicked);
        tail_rho += pk * tail_weight(&psi);

        let psi_tau = amp.propagate(tau, &psi);
        let a_psi_tau = apply_lowering(&psi_tau);
        mean_n_tau += pk * norm_sqr(&a_psi_tau);
        mean_field_tau += pk
            * psi_tau
                .iter()
                .zip(&a_psi_tau)
                .map(|(l, r)| l.conj() * r)
                .sum::<Complex64>();
        tail_evolved += pk * tail_weight(&psi_tau);

        let kicked_tau = amp.propagate(tau, &kicked);
        numerator += pk * norm_sqr(&apply_lowering(&kicked_tau));
        tail_kicked += pk * tail_weight(&kicked_tau);
    }
    if mean_n0 > 0.0 {
        tail_kicked /= mean_n0;
    }

    Ok(Correlators {
        dim,
        mean_n0,
        mean_n_tau,
        numerator: Complex64::new(numerator, 0.0),
        mean_field_tau,
        tail_mass: tail_rho.max(tail_evolved).max(tail_kicked),
    })
}

/// g²(τ) from the dense two-time trace.
pub fn g2_oracle(
    state: &GaussianStateParams,
    params: &HamiltonianParams,
    tau: f64,
    dim: usize,
) -> Result<f64> {
    correlators(state, params, tau, dim, Route::Dense)?.g2()
}

/// Tr[ρ_G a†(τ) a(τ)] from the dense route.
pub fn mean_n_oracle(
    state: &GaussianStateParams,
    params: &HamiltonianParams,
    tau: f64,
    dim: usize,
) -> Result<f64> {
    Ok(correlators(state, params, tau, dim, Route::Dense)?.mean_n_tau)
}

/// Truncation diagnostics for one oracle evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationReport {
    pub dim: usize,
    pub tail_mass: f64,
    pub converged: bool,
    pub g2: f64,
    pub g2_doubled: f64,
    pub rel_change: f64,
}

impl TruncationReport {
    /// Builds the report from evaluations at `dim` and `2·dim`.
    pub fn from_pair(at_dim: &Correlators, doubled: &Correlators) -> Result<Self> {
        let g2 = at_dim.g2()?;
        let g2_doubled = doubled.g2()?;
        let rel_change = (g2 - g2_doubled).abs() / g2_doubled.abs();
        let converged = rel_change < CONVERGENCE_REL_TOL && at_dim.tail_mass < TAIL_MASS_TOL;
        Ok(Self {
            dim: at_dim.dim,
            tail_mass: at_dim.tail_mass,
            converged,
            g2,
            g2_doubled,
            rel_change,
        })
    }
}

/// Recomputes the oracle at `dim` and `2·dim`; converged when g² moves by
/// less than [`CONVERGENCE_REL_TOL`] and the tail mass at `dim` is below
/// [`TAIL_MASS_TOL`].
pub fn convergence_check(
    state: &GaussianStateParams,
    params: &HamiltonianParams,
    tau: f64,
    dim: usize,
) -> Result<TruncationReport> {
    let at_dim = correlators(state, params, tau, dim, Route::Propagated)?;
    let doubled = correlators(state, params, tau, 2 * dim, Route::Propagated)?;
    TruncationReport::from_pair(&at_dim, &doubled)
}

/// Oracle result after automatic dimension doubling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdaptiveOracle {
    pub correlators: Correlators,
    pub report: TruncationReport,
}

/// Starts at `start_dim` and doubles until [`convergence_check`] passes or
/// the next doubling would exceed `max_dim`. The last report is returned
/// either way; callers inspect `report.converged`.
pub fn adaptive_oracle(
    state: &GaussianStateParams,
    params: &HamiltonianParams,
    tau: f64,
    start_dim: usize,
    max_dim: usize,
) -> Result<AdaptiveOracle> {
    let mut dim = start_dim;
    let mut at_dim = correlators(state, params, tau, dim, Route::Propagated)?;
    loop {
        let doubled = correlators(state, params, tau, 2 * dim, Route::Propagated)?;
        let report = TruncationReport::from_pair(&at_dim, &doubled)?;
        if report.converged || 4 * dim > max_dim {
            return Ok(AdaptiveOracle {
                correlators: at_dim,
                report,
            });
        }
        dim *= 2;
        at_dim = doubled;
    }
}
