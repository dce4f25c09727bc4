//! Second-order coherence g²(τ) of displaced-squeezed thermal light produced
//! by a degenerate parametric amplifier.
//!
//! [`gaussian`] evaluates the closed forms, [`param_map`] converts between
//! state parameters and amplifier couplings, [`fock`] recomputes everything
//! by brute force in a truncated number basis, and [`sweep`] drives τ sweeps
//! for the `g2sweep` command-line tool.

pub mod amplitude;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod param_map;
pub mod sweep;

pub use amplitude::{ComplexAmplitude, SqueezeParam};
pub use error::{Error, Result};
pub use gaussian::{
    alpha_of_tau, coherence_sample, coherence_sample_with_couplings, g2, g2_with_couplings,
    heisenberg_flow, mean_field_of_tau, mean_photon_of_tau, n_of_tau, r_of_tau, s_of_tau,
    thermal_occupation, CoherenceSample, FlowResult, GaussianStateParams,
};
pub use param_map::{
    hamiltonian_from_state, state_from_hamiltonian, GenerationSpec, HamiltonianParams,
};
