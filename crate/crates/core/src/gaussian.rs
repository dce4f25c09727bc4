//! Closed-form coherence of a displaced-squeezed thermal state driven by a
//! degenerate parametric amplifier.
//!
//! Units: ħ = 1, so τ, b and c are dimensionless. The squeeze phase used by
//! the flow is derived from c as e^{iθ} = i·c/|c|, never passed separately.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitude::{angle_distance, ComplexAmplitude, SqueezeParam};
use crate::error::{Error, Result};
use crate::param_map::{hamiltonian_from_state, GenerationSpec, HamiltonianParams};

/// Below this |c| the removable singularity of α(τ) is handled by series.
pub const SMALL_COUPLING: f64 = 1e-8;

/// Tolerance for matching the state's squeeze phase against the phase of c.
pub const PHASE_TOLERANCE: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Displaced-squeezed thermal state D(α) S(ξ) ρ₀ S(−ξ) D(−α).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianStateParams {
    pub alpha: ComplexAmplitude,
    pub xi: SqueezeParam,
    nbar: f64,
}

impl GaussianStateParams {
    pub fn new(alpha: ComplexAmplitude, xi: SqueezeParam, nbar: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::domain("displacement must be finite"));
        }
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(Error::domain(format!(
                "mean thermal occupation must be >= 0, got {nbar}"
            )));
        }
        Ok(Self { alpha, xi, nbar })
    }

    pub fn thermal(nbar: f64) -> Result<Self> {
        Self::new(ComplexAmplitude::ZERO, SqueezeParam::ZERO, nbar)
    }

    /// Mean occupation n̄ of the underlying thermal state.
    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    pub fn is_vacuum(&self) -> bool {
        self.alpha.is_zero() && self.xi.r() == 0.0 && self.nbar == 0.0
    }

    /// ⟨a†a⟩ in the state: (n̄ + 1/2) cosh 2r − 1/2 + |α|².
    pub fn mean_photon_number(&self) -> f64 {
        (self.nbar + 0.5) * (2.0 * self.xi.r()).cosh() - 0.5 + self.alpha.value().norm_sqr()
    }
}

/// Mean thermal occupation 1/(e^{βħω} − 1) for a mode at inverse
/// temperature β and frequency ω.
pub fn thermal_occupation(beta_hbar_omega: f64) -> Result<f64> {
    if !(beta_hbar_omega.is_finite() && beta_hbar_omega > 0.0) {
        return Err(Error::domain(format!(
            "βħω must be > 0, got {beta_hbar_omega}"
        )));
    }
    Ok(1.0 / beta_hbar_omega.exp_m1())
}

/// Heisenberg flow e^{iHτ} a e^{−iHτ} = u·a + v·a† + shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowResult {
    pub cosh_coeff: Complex64,
    pub sinh_coeff: Complex64,
    pub shift: ComplexAmplitude,
}

impl FlowResult {
    /// |u|² − |v|² − 1, zero for a canonical transformation.
    pub fn bogoliubov_defect(&self) -> f64 {
        self.cosh_coeff.norm_sqr() - self.sinh_coeff.norm_sqr() - 1.0
    }

    /// Image of a c-number mean field ⟨a⟩ = m under the flow.
    pub fn apply_to_mean(&self, m: Complex64) -> Complex64 {
        self.cosh_coeff * m + self.sinh_coeff * m.conj() + self.shift.value()
    }
}

/// One row of a τ sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceSample {
    pub tau: f64,
    pub r_tau: f64,
    pub mean_n: f64,
    pub n_tau: f64,
    pub s_tau: f64,
    pub g2: f64,
    pub a_tau: ComplexAmplitude,
}

fn check_tau(tau: f64) -> Result<()> {
    if tau.is_finite() && tau >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "τ must be finite and >= 0, got {tau}"
        )))
    }
}

/// e^{iθ} = i·c/|c|, or `None` when c = 0.
pub fn flow_phase(c: ComplexAmplitude) -> Option<Complex64> {
    let m = c.magnitude();
    (m > 0.0).then(|| I * c.value() / m)
}

/// r(τ) = 2|c|τ.
pub fn r_of_tau(c: ComplexAmplitude, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(2.0 * c.magnitude() * tau)
}

/// Displacement generated by H in time τ:
/// α(τ) = −i b* sinh r(τ)/(2|c|) − i b e^{iθ} (cosh r(τ) − 1)/(2|c|).
pub fn alpha_of_tau(
    b: ComplexAmplitude,
    c: ComplexAmplitude,
    tau: f64,
) -> Result<ComplexAmplitude> {
    let r = r_of_tau(c, tau)?;
    let b = b.value();
    let cm = c.magnitude();

    let value = if cm < SMALL_COUPLING {
        // sinh r/(2|c|) → τ(1 + r²/6); e^{iθ}(cosh r − 1)/(2|c|) → i c τ² (1 + r²/12)
        let r2 = r * r;
        -I * b.conj() * tau * (1.0 + r2 / 6.0) + b * c.value() * tau * tau * (1.0 + r2 / 12.0)
    } else {
        let phase = I * c.value() / cm;
        let half = 0.5 * r;
        let sinh_term = r.sinh() / (2.0 * cm);
        let cosh_m1_term = 2.0 * half.sinh() * half.sinh() / (2.0 * cm);
        -I * b.conj() * sinh_term - I * b * phase * cosh_m1_term
    };
    Ok(value.into())
}

/// Closed-form Heisenberg flow of the annihilation operator.
pub fn heisenberg_flow(b: ComplexAmplitude, c: ComplexAmplitude, tau: f64) -> Result<FlowResult> {
    let r = r_of_tau(c, tau)?;
    let cm = c.magnitude();
    // −i e^{iχ} with c = |c| e^{iχ}
    let sinh_coeff = if cm > 0.0 {
        -I * (c.value() / cm) * r.sinh()
    } else {
        Complex64::new(0.0, 0.0)
    };
    Ok(FlowResult {
        cosh_coeff: Complex64::new(r.cosh(), 0.0),
        sinh_coeff,
        shift: alpha_of_tau(b, c, tau)?,
    })
}

/// Squeeze phase factor governing the flow: from c when c ≠ 0, otherwise the
/// state's own θ. Rejects a state squeezed along a different axis than H,
/// for which the closed forms do not apply.
fn working_phase(state: &GaussianStateParams, c: ComplexAmplitude) -> Result<Complex64> {
    match flow_phase(c) {
        Some(phase) => {
            if state.xi.r() > 0.0 {
                let flow_theta = phase.arg();
                if angle_distance(flow_theta, state.xi.theta()) > PHASE_TOLERANCE {
                    return Err(Error::PhaseMismatch {
                        state: state.xi.theta(),
                        flow: crate::amplitude::normalize_angle(flow_theta),
                    });
                }
            }
            Ok(phase)
        }
        None => Ok(state.xi.phase_factor()),
    }
}

/// Mean field A(τ) = ⟨a(τ)⟩ in the state.
///
/// A(τ) = α cosh r(τ) − α* e^{iθ} sinh r(τ) + α(τ). The coefficient of α* is
/// the a† coefficient of the Heisenberg flow, −i e^{iχ} = −e^{iθ}.
pub fn mean_field_of_tau(
    state: &GaussianStateParams,
    b: ComplexAmplitude,
    c: ComplexAmplitude,
    tau: f64,
) -> Result<ComplexAmplitude> {
    working_phase(state, c)?;
    let flow = heisenberg_flow(b, c, tau)?;
    Ok(flow.apply_to_mean(state.alpha.value()).into())
}

fn mean_photon_from(state: &GaussianStateParams, r_tau: f64, a_tau: Complex64) -> f64 {
    (state.nbar + 0.5) * (2.0 * (state.xi.r() + r_tau)).cosh() - 0.5 + a_tau.norm_sqr()
}

/// ⟨a†(τ) a(τ)⟩ = (n̄ + 1/2) cosh[2(r + r(τ))] − 1/2 + |A(τ)|².
pub fn mean_photon_of_tau(
    state: &GaussianStateParams,
    b: ComplexAmplitude,
    c: ComplexAmplitude,
    tau: f64,
) -> Result<f64> {
    let r_tau = r_of_tau(c, tau)?;
    let a_tau = mean_field_of_tau(state, b, c, tau)?;
    Ok(mean_photon_from(state, r_tau, a_tau.value()))
}

/// n(τ) = (n̄ + 1/2) cosh(2r + r(τ)) − (1/2) cosh r(τ).
pub fn n_of_tau(nbar: f64, r: f64, r_tau: f64) -> f64 {
    (nbar + 0.5) * (2.0 * r + r_tau).cosh() - 0.5 * r_tau.cosh()
}

/// s(τ) = (n̄ + 1/2) sinh(2r + r(τ)) − (1/2) sinh r(τ).
pub fn s_of_tau(nbar: f64, r: f64, r_tau: f64) -> f64 {
    (nbar + 0.5) * (2.0 * r + r_tau).sinh() - 0.5 * r_tau.sinh()
}

/// The two bracketed combinations of the coherence numerator,
/// (α A* + α* A) and (α A e^{−iθ} + α* A* e^{iθ}). Both are real up to
/// rounding.
pub fn numerator_brackets(
    alpha: Complex64,
    a_tau: Complex64,
    phase: Complex64,
) -> (Complex64, Complex64) {
    let density = alpha * a_tau.conj() + alpha.conj() * a_tau;
    let anomalous = alpha * a_tau * phase.conj() + alpha.conj() * a_tau.conj() * phase;
    (density, anomalous)
}

/// Full closed-form sample for raw couplings (b, c).
///
/// The state's squeeze axis must agree with the phase of c whenever both are
/// nonzero (as it does for couplings obtained from [`hamiltonian_from_state`]).
pub fn coherence_sample_with_couplings(
    state: &GaussianStateParams,
    b: ComplexAmplitude,
    c: ComplexAmplitude,
    tau: f64,
) -> Result<CoherenceSample> {
    check_tau(tau)?;
    if state.is_vacuum() {
        return Err(Error::UndefinedCoherence);
    }
    let phase = working_phase(state, c)?;
    let r = state.xi.r();
    let r_tau = r_of_tau(c, tau)?;
    let a_tau = heisenberg_flow(b, c, tau)?.apply_to_mean(state.alpha.value());

    let mean_0 = state.mean_photon_number();
    let mean_tau = mean_photon_from(state, r_tau, a_tau);
    if !(mean_0 > 0.0 && mean_tau > 0.0) {
        return Err(Error::UndefinedCoherence);
    }

    let n = n_of_tau(state.nbar, r, r_tau);
    let s = s_of_tau(state.nbar, r, r_tau);
    let (density, anomalous) = numerator_brackets(state.alpha.value(), a_tau, phase);
    let numerator = n * n + s * s + density.re * n - anomalous.re * s;
    let g2 = 1.0 + numerator / (mean_0 * mean_tau);

    Ok(CoherenceSample {
        tau,
        r_tau,
        mean_n: mean_tau,
        n_tau: n,
        s_tau: s,
        g2,
        a_tau: a_tau.into(),
    })
}

/// g²(τ) for raw couplings (b, c).
pub fn g2_with_couplings(
    state: &GaussianStateParams,
    b: ComplexAmplitude,
    c: ComplexAmplitude,
    tau: f64,
) -> Result<f64> {
    coherence_sample_with_couplings(state, b, c, tau).map(|s| s.g2)
}

/// Closed-form sample for a state generated in time `spec.t()`; the
/// couplings are derived from the state.
pub fn coherence_sample(spec: &GenerationSpec, tau: f64) -> Result<CoherenceSample> {
    let HamiltonianParams { b, c } = hamiltonian_from_state(spec);
    coherence_sample_with_couplings(&spec.state, b, c, tau)
}

/// g²(τ) for a state generated in time `spec.t()`.
pub fn g2(spec: &GenerationSpec, tau: f64) -> Result<f64> {
    coherence_sample(spec, tau).map(|s| s.g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    fn amp(re: f64, im: f64) -> ComplexAmplitude {
        ComplexAmplitude::new(re, im)
    }

    fn state(alpha: ComplexAmplitude, r: f64, theta: f64, nbar: f64) -> GaussianStateParams {
        GaussianStateParams::new(alpha, SqueezeParam::new(r, theta).unwrap(), nbar).unwrap()
    }

    fn spec(s: GaussianStateParams, t: f64) -> GenerationSpec {
        GenerationSpec::new(s, t).unwrap()
    }

    /// τ at which the flow generated for `sp` reaches squeeze `r_tau`.
    fn tau_for(sp: &GenerationSpec, r_tau: f64) -> f64 {
        let c = hamiltonian_from_state(sp).c.magnitude();
        r_tau / (2.0 * c)
    }

    /// Integrates the Heisenberg equations du/dτ = −2ic v*, dv/dτ = −2ic u*,
    /// dβ/dτ = −2ic β* − i b* with classical RK4.
    fn integrate_flow(b: Complex64, c: Complex64, tau: f64) -> [Complex64; 3] {
        let rhs = |y: [Complex64; 3]| {
            let k = -2.0 * I * c;
            [
                k * y[1].conj(),
                k * y[0].conj(),
                k * y[2].conj() - I * b.conj(),
            ]
        };
        let steps = 20_000;
        let h = tau / steps as f64;
        let mut y = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let add = |y: [Complex64; 3], k: [Complex64; 3], s: f64| {
            [y[0] + k[0] * s, y[1] + k[1] * s, y[2] + k[2] * s]
        };
        for _ in 0..steps {
            let k1 = rhs(y);
            let k2 = rhs(add(y, k1, h / 2.0));
            let k3 = rhs(add(y, k2, h / 2.0));
            let k4 = rhs(add(y, k3, h));
            for i in 0..3 {
                y[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0);
            }
        }
        y
    }

    #[test]
    fn r_of_tau_examples() {
        assert_eq!(r_of_tau(amp(0.5, 0.0), 0.0).unwrap(), 0.0);
        assert!((r_of_tau(amp(0.5, 0.0), 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((r_of_tau(amp(0.0, 0.3), 2.0).unwrap() - 1.2).abs() < 1e-15);
        assert_eq!(r_of_tau(ComplexAmplitude::ZERO, 7.0).unwrap(), 0.0);
        assert!(matches!(
            r_of_tau(amp(0.5, 0.0), -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn alpha_of_tau_vanishes_at_zero() {
        for (b, c) in [
            (amp(1.0, 2.0), amp(0.3, -0.1)),
            (amp(-1.0, 0.5), ComplexAmplitude::ZERO),
        ] {
            assert!(alpha_of_tau(b, c, 0.0).unwrap().is_zero());
        }
    }

    #[test]
    fn alpha_of_tau_coupling_limit() {
        let a = alpha_of_tau(amp(1.0, 0.0), ComplexAmplitude::ZERO, 1.0).unwrap();
        assert!((a.value() - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        // just below and above the series threshold
        for cm in [0.5e-8, 2e-8, 1e-7] {
            let a = alpha_of_tau(amp(1.0, 0.0), amp(cm, 0.0), 1.0).unwrap();
            assert!(
                (a.value() - Complex64::new(0.0, -1.0)).norm() < 1e-6,
                "{cm}: {a}"
            );
        }
    }

    #[test]
    fn series_branch_is_continuous() {
        let b = amp(0.7, -0.2);
        let c_dir = Complex64::from_polar(1.0, 0.9);
        let (c_below, c_above) = (c_dir * 0.999e-8, c_dir * 1.001e-8);
        let below = alpha_of_tau(b, c_below.into(), 2.5).unwrap().value();
        let above = alpha_of_tau(b, c_above.into(), 2.5).unwrap().value();
        // near c = 0, α(τ) ≈ −i b* τ + b c τ²
        let expected = b.value() * (c_below - c_above) * 2.5 * 2.5;
        assert!((below - above - expected).norm() < 1e-15);
    }

    #[test]
    fn alpha_of_tau_matches_fock_shift() {
        // identity component of e^{iHτ} a e^{−iHτ}, b = 1, c = 0.5, τ = 1,
        // from an independent dense Fock computation at N = 600
        let a = alpha_of_tau(amp(1.0, 0.0), amp(0.5, 0.0), 1.0).unwrap();
        assert!((a.re - 0.543080634815241).abs() < 1e-12);
        assert!((a.im + 1.175201193643798).abs() < 1e-12);
    }

    #[test]
    fn flow_examples() {
        let f = heisenberg_flow(ComplexAmplitude::ZERO, ComplexAmplitude::ZERO, 3.0).unwrap();
        assert_eq!(f.cosh_coeff, Complex64::new(1.0, 0.0));
        assert_eq!(f.sinh_coeff, Complex64::new(0.0, 0.0));
        assert!(f.shift.is_zero());

        let f = heisenberg_flow(ComplexAmplitude::ZERO, amp(0.5, 0.0), 1.0).unwrap();
        assert!((f.cosh_coeff - Complex64::new(1f64.cosh(), 0.0)).norm() < 1e-15);
        assert!((f.sinh_coeff - Complex64::new(0.0, -1f64.sinh())).norm() < 1e-15);
        assert!(f.shift.is_zero());
    }

    #[test]
    fn flow_matches_integrated_heisenberg_equations() {
        for (b, c, tau) in [
            (amp(1.0, 0.0), amp(0.5, 0.0), 1.0),
            (amp(0.3, -0.7), amp(-0.2, 0.35), 1.3),
            (amp(-0.5, 0.2), amp(0.0, 0.05), 4.0),
        ] {
            let f = heisenberg_flow(b, c, tau).unwrap();
            let [u, v, beta] = integrate_flow(b.value(), c.value(), tau);
            assert!((f.cosh_coeff - u).norm() < 1e-10);
            assert!((f.sinh_coeff - v).norm() < 1e-10);
            assert!((f.shift.value() - beta).norm() < 1e-10);
        }
    }

    #[test]
    fn mean_field_starts_at_alpha() {
        let s = state(amp(0.4, -1.2), 0.7, 2.0, 0.3);
        let sp = spec(s, 1.7);
        let h = hamiltonian_from_state(&sp);
        let a0 = mean_field_of_tau(&s, h.b, h.c, 0.0).unwrap();
        assert_eq!(a0, s.alpha);
        assert!(mean_field_of_tau(
            &state(ComplexAmplitude::ZERO, 0.0, 0.0, 0.0),
            ComplexAmplitude::ZERO,
            amp(0.2, 0.1),
            2.0
        )
        .unwrap()
        .is_zero());
    }

    #[test]
    fn mean_field_matches_fock_trace() {
        // Tr[ρ_G a(τ)] from an independent dense Fock computation (N = 600),
        // α = 1, ξ = 0.3, n̄ = 0, t = 1, r(τ) = 0.4
        let sp = spec(state(amp(1.0, 0.0), 0.3, 0.0, 0.0), 1.0);
        let h = hamiltonian_from_state(&sp);
        let a = mean_field_of_tau(&sp.state, h.b, h.c, tau_for(&sp, 0.4)).unwrap();
        assert!((a.re - 1.942322865182523).abs() < 1e-12, "{a}");
        assert!(a.im.abs() < 1e-12);
    }

    #[test]
    fn mean_photon_examples() {
        let thermal = state(ComplexAmplitude::ZERO, 0.0, 0.0, 2.0);
        let h = hamiltonian_from_state(&spec(thermal, 1.0));
        assert_eq!(h, HamiltonianParams::free());
        for tau in [0.0, 1.0, 10.0] {
            assert!((mean_photon_of_tau(&thermal, h.b, h.c, tau).unwrap() - 2.0).abs() < 1e-15);
        }

        let s = state(amp(1.0, 0.0), 0.3, 0.0, 0.0);
        let h = hamiltonian_from_state(&spec(s, 1.0));
        let expected = 0.5 * 0.6f64.cosh() - 0.5 + 1.0;
        assert_eq!(mean_photon_of_tau(&s, h.b, h.c, 0.0).unwrap(), expected);

        // independent dense Fock trace at N = 600
        let sp = spec(state(amp(1.0, 0.0), 0.3, FRAC_PI_3, 0.5), 1.0);
        let h = hamiltonian_from_state(&sp);
        let m = mean_photon_of_tau(&sp.state, h.b, h.c, tau_for(&sp, 0.2)).unwrap();
        assert!((m - 3.631148543255642).abs() < 1e-11, "{m}");
    }

    #[test]
    fn n_and_s_examples() {
        assert_eq!(
            (n_of_tau(0.0, 0.0, 0.0), s_of_tau(0.0, 0.0, 0.0)),
            (0.0, 0.0)
        );
        assert_eq!(
            (n_of_tau(2.0, 0.0, 0.0), s_of_tau(2.0, 0.0, 0.0)),
            (2.0, 0.0)
        );
        assert!((n_of_tau(0.0, 0.8, 0.0) - 0.8f64.sinh().powi(2)).abs() < 1e-15);
        assert!((s_of_tau(0.0, 0.8, 0.0) - 0.5 * 1.6f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn g2_known_limits() {
        let thermal = spec(state(ComplexAmplitude::ZERO, 0.0, 0.0, 1.0), 1.0);
        let coherent = spec(state(amp(1.0, 0.0), 0.0, 0.0, 0.0), 1.0);
        for tau in [0.0, 0.3, 2.0, 10.0] {
            assert!((g2(&thermal, tau).unwrap() - 2.0).abs() < 1e-12);
            assert!((g2(&coherent, tau).unwrap() - 1.0).abs() < 1e-12);
        }
        let sv = spec(state(ComplexAmplitude::ZERO, 0.8, 0.0, 0.0), 1.0);
        let expected = 3.0 + 1.0 / 0.8f64.sinh().powi(2);
        assert!((g2(&sv, 0.0).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn g2_matches_fock_trace() {
        // independent dense Fock two-time traces at N = 600
        let cases = [
            (
                state(amp(1.0, 0.0), 0.5, FRAC_PI_4, 0.3),
                0.3,
                1.530014130783556,
            ),
            (state(amp(1.0, 0.0), 0.3, 0.0, 0.0), 0.4, 0.918342154981831),
            (
                state(
                    ComplexAmplitude::from_polar(0.5, FRAC_PI_4),
                    0.8,
                    FRAC_PI_3,
                    0.2,
                ),
                0.5,
                2.662994545003340,
            ),
        ];
        for (s, r_tau, expected) in cases {
            let sp = spec(s, 1.0);
            let v = g2(&sp, tau_for(&sp, r_tau)).unwrap();
            assert!((v - expected).abs() < 1e-11 * expected, "{v} vs {expected}");
        }
    }

    #[test]
    fn vacuum_is_undefined() {
        let vac = spec(state(ComplexAmplitude::ZERO, 0.0, 0.0, 0.0), 1.0);
        assert_eq!(g2(&vac, 0.5), Err(Error::UndefinedCoherence));
        assert_eq!(
            g2_with_couplings(&vac.state, ComplexAmplitude::ZERO, amp(0.3, 0.0), 1.0),
            Err(Error::UndefinedCoherence)
        );
    }

    #[test]
    fn misaligned_squeeze_is_rejected() {
        let s = state(amp(0.5, 0.0), 0.4, 0.0, 0.0);
        // e^{iθ} = i c/|c| = i for c real: θ = π/2, state has θ = 0
        let err = g2_with_couplings(&s, ComplexAmplitude::ZERO, amp(0.2, 0.0), 1.0).unwrap_err();
        assert!(matches!(err, Error::PhaseMismatch { .. }));
        // c = −0.2i gives θ = 0 and is accepted
        assert!(g2_with_couplings(&s, ComplexAmplitude::ZERO, amp(0.0, -0.2), 1.0).is_ok());
    }

    #[test]
    fn thermal_occupation_helper() {
        assert!((thermal_occupation(2f64.ln()).unwrap() - 1.0).abs() < 1e-15);
        assert!(thermal_occupation(0.0).is_err());
    }

    fn arb_state() -> impl Strategy<Value = GaussianStateParams> {
        (
            0.0f64..2.0,
            0.0f64..(2.0 * PI),
            0.0f64..1.5,
            0.0f64..(2.0 * PI),
            0.0f64..2.0,
        )
            .prop_filter("non-vacuum", |(m, _, r, _, n)| *m + *r + *n > 1e-3)
            .prop_map(|(m, phi, r, theta, nbar)| {
                state(ComplexAmplitude::from_polar(m, phi), r, theta, nbar)
            })
    }

    proptest! {
        #[test]
        fn bogoliubov_condition(
            b_re in -3.0f64..3.0, b_im in -3.0f64..3.0,
            c_re in -1.0f64..1.0, c_im in -1.0f64..1.0,
            tau in 0.0f64..4.0,
        ) {
            let f = heisenberg_flow(amp(b_re, b_im), amp(c_re, c_im), tau).unwrap();
            let scale = f.cosh_coeff.norm_sqr();
            prop_assert!(f.bogoliubov_defect().abs() < 1e-12 * scale.max(1.0));
        }

        #[test]
        fn tau_zero_reduction(s in arb_state(), t in 0.1f64..5.0) {
            let h = hamiltonian_from_state(&spec(s, t));
            prop_assert_eq!(r_of_tau(h.c, 0.0).unwrap(), 0.0);
            prop_assert!(alpha_of_tau(h.b, h.c, 0.0).unwrap().is_zero());
            prop_assert_eq!(mean_field_of_tau(&s, h.b, h.c, 0.0).unwrap(), s.alpha);
            let m = mean_photon_of_tau(&s, h.b, h.c, 0.0).unwrap();
            prop_assert!((m - s.mean_photon_number()).abs() <= 1e-14 * m.max(1.0));
        }

        #[test]
        fn thermal_and_coherent_reductions(
            nbar in 0.01f64..5.0, mag in 0.01f64..3.0, phi in 0.0f64..(2.0 * PI), tau in 0.0f64..10.0,
        ) {
            let th = spec(state(ComplexAmplitude::ZERO, 0.0, 0.0, nbar), 1.0);
            prop_assert!((g2(&th, tau).unwrap() - 2.0).abs() < 1e-12);
            let coh = spec(state(ComplexAmplitude::from_polar(mag, phi), 0.0, 0.0, 0.0), 1.0);
            prop_assert!((g2(&coh, tau).unwrap() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn numerator_brackets_are_real(s in arb_state(), t in 0.1f64..5.0, r_tau in 0.0f64..2.0) {
            let sp = spec(s, t);
            let h = hamiltonian_from_state(&sp);
            let cm = h.c.magnitude();
            let tau = if cm > 0.0 { r_tau / (2.0 * cm) } else { r_tau };
            let a_tau = mean_field_of_tau(&s, h.b, h.c, tau).unwrap().value();
            let phase = flow_phase(h.c).unwrap_or(s.xi.phase_factor());
            let (d, an) = numerator_brackets(s.alpha.value(), a_tau, phase);
            prop_assert!(d.im.abs() < 1e-12 && an.im.abs() < 1e-12);
        }

        #[test]
        fn g2_is_nonnegative(s in arb_state(), t in 0.1f64..5.0, tau in 0.0f64..3.0) {
            let sample = coherence_sample(&spec(s, t), tau).unwrap();
            prop_assert!(sample.g2 >= 0.0);
            prop_assert!(sample.mean_n >= 0.0);
        }
    }
}
