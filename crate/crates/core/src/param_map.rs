//! Map between Gaussian-state parameters and parametric-amplifier couplings.
//!
//! Forward: couplings (b, c) acting for a time t generate ξ(t) = 2itc and
//! the displacement α(t). Inverse: a target (α, ξ) and generation time t fix
//! t·c = −(i/2)·r·e^{iθ} and t·b = −(i/2)·(α e^{−iθ} + α* coth(r/2))·r
//! (with ħ = 1).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitude::{ComplexAmplitude, SqueezeParam};
use crate::error::{Error, Result};
use crate::gaussian::{alpha_of_tau, GaussianStateParams};

/// Below this squeeze magnitude `r·coth(r/2)` is replaced by its series.
pub const SMALL_SQUEEZE: f64 = 1e-8;

/// Couplings of H = c a†² + c* a² + b a + b* a†.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HamiltonianParams {
    /// Linear drive.
    pub b: ComplexAmplitude,
    /// Parametric (two-photon) coupling.
    pub c: ComplexAmplitude,
}

impl HamiltonianParams {
    pub fn new(b: ComplexAmplitude, c: ComplexAmplitude) -> Result<Self> {
        if !(b.is_finite() && c.is_finite()) {
            return Err(Error::domain("Hamiltonian couplings must be finite"));
        }
        Ok(Self { b, c })
    }

    pub const fn free() -> Self {
        Self {
            b: ComplexAmplitude::ZERO,
            c: ComplexAmplitude::ZERO,
        }
    }

    /// Scales both couplings by `k` (used for generation-time rescaling).
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            b: (self.b.value() * k).into(),
            c: (self.c.value() * k).into(),
        }
    }
}

/// A target state together with the time over which H produces it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationSpec {
    pub state: GaussianStateParams,
    t: f64,
}

impl GenerationSpec {
    pub fn new(state: GaussianStateParams, t: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::domain(format!(
                "generation time must be > 0, got {t}"
            )));
        }
        Ok(Self { state, t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }
}

/// r·coth(r/2), finite at r = 0.
fn r_coth_half(r: f64) -> f64 {
    if r < SMALL_SQUEEZE {
        2.0 + r * r / 6.0
    } else {
        r / (r / 2.0).tanh()
    }
}

/// Couplings (b, c) that carry the thermal state into `spec.state` in time
/// `spec.t()`.
pub fn hamiltonian_from_state(spec: &GenerationSpec) -> HamiltonianParams {
    let state = &spec.state;
    let t = spec.t();
    let r = state.xi.r();
    let alpha = state.alpha.value();
    let minus_half_i = Complex64::new(0.0, -0.5);

    if r == 0.0 && alpha == Complex64::new(0.0, 0.0) {
        return HamiltonianParams::free();
    }

    // θ is canonical (0) when r = 0, and the α e^{−iθ}·r term vanishes anyway
    let phase = state.xi.phase_factor();
    let tc = minus_half_i * r * phase;
    let tb = minus_half_i * (alpha * phase.conj() * r + alpha.conj() * r_coth_half(r));

    HamiltonianParams {
        b: (tb / t).into(),
        c: (tc / t).into(),
    }
}

/// The displaced-squeezed state produced by `params` after time `t`; the
/// thermal occupation passes through unchanged.
pub fn state_from_hamiltonian(
    params: &HamiltonianParams,
    t: f64,
    nbar: f64,
) -> Result<GaussianStateParams> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!(
            "generation time must be > 0, got {t}"
        )));
    }
    let xi = SqueezeParam::from_complex(Complex64::new(0.0, 2.0 * t) * params.c.value())?;
    let alpha = alpha_of_tau(params.b, params.c, t)?;
    GaussianStateParams::new(alpha, xi, nbar)
}
