//! Truncated Fock-space ground truth for the closed forms.

pub mod matrix;
pub mod oracle;
pub mod propagator;

pub use matrix::{
    commutator_defect, displaced_squeezed_a, displacement, flow_matrix, gaussian_rho,
    hamiltonian_matrix, heisenberg_a_matrix, ladder_operators, projected_distance, propagator,
    squeeze, thermal_populations, thermal_rho, unitarity_defect, FockMatrix,
};
pub use oracle::{
    adaptive_oracle, convergence_check, correlators, g2_oracle, mean_n_oracle, AdaptiveOracle,
    Correlators, Route, TruncationReport, CONVERGENCE_REL_TOL, DEFAULT_DIM, TAIL_MASS_TOL,
};
pub use propagator::BandedGenerator;
