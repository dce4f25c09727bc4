//! Dense operators on a truncated number basis {|0⟩, …, |N−1⟩}.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::amplitude::{ComplexAmplitude, SqueezeParam};
use crate::error::{Error, Result};
use crate::gaussian::{FlowResult, GaussianStateParams};
use crate::param_map::HamiltonianParams;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense complex N×N matrix in the truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    entries: DMatrix<Complex64>,
}

impl FockMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            entries: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(diag[i], 0.0)
                } else {
                    ZERO
                }
            }),
        }
    }

    pub fn from_entries(entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::domain("Fock matrix must be square"));
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            entries: &self.entries * k,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// Tr[self · other] without forming the product.
    pub fn trace_product(&self, other: &FockMatrix) -> Complex64 {
        let n = self.dim();
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.entries[(i, k)] * other.entries[(k, i)];
            }
        }
        acc
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.entries.diagonal().iter().copied().collect()
    }

    /// Largest elementwise |M − M†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = self.hermitian_part();
        let mut ev: Vec<f64> = h.entries.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    fn hermitian_part(&self) -> Self {
        Self {
            entries: (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0),
        }
    }

    /// Top-left `k`×`k` block, i.e. P M P for P the projector onto the lowest
    /// `k` number states.
    pub fn project(&self, k: usize) -> Self {
        let k = k.min(self.dim());
        Self {
            entries: self.entries.view((0, 0), (k, k)).into_owned(),
        }
    }

    /// Spectral (largest singular value) norm.
    pub fn operator_norm(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.entries
            .singular_values()
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    /// e^{−i·self·t} for Hermitian `self`, via eigendecomposition so the
    /// result is unitary to rounding.
    pub fn hermitian_exp(&self, t: f64) -> Self {
        let eig = SymmetricEigen::new(self.hermitian_part().entries);
        let v = eig.eigenvectors;
        let phases = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                Complex64::from_polar(1.0, -eig.eigenvalues[i] * t)
            } else {
                ZERO
            }
        });
        Self {
            entries: &v * phases * v.adjoint(),
        }
    }
}

impl<'a> Mul<&'a FockMatrix> for &'a FockMatrix {
    type Output = FockMatrix;
    fn mul(self, rhs: &'a FockMatrix) -> FockMatrix {
        FockMatrix {
            entries: &self.entries * &rhs.entries,
        }
    }
}

impl<'a> Add<&'a FockMatrix> for &'a FockMatrix {
    type Output = FockMatrix;
    fn add(self, rhs: &'a FockMatrix) -> FockMatrix {
        FockMatrix {
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl<'a> Sub<&'a FockMatrix> for &'a FockMatrix {
    type Output = FockMatrix;
    fn sub(self, rhs: &'a FockMatrix) -> FockMatrix {
        FockMatrix {
            entries: &self.entries - &rhs.entries,
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        Err(Error::domain(format!(
            "Fock dimension must be >= 2, got {dim}"
        )))
    } else {
        Ok(())
    }
}

/// (a, a†) with a|n⟩ = √n |n−1⟩.
pub fn ladder_operators(dim: usize) -> Result<(FockMatrix, FockMatrix)> {
    check_dim(dim)?;
    let a = FockMatrix {
        entries: DMatrix::from_fn(dim, dim, |i, j| {
            if j == i + 1 {
                Complex64::new((j as f64).sqrt(), 0.0)
            } else {
                ZERO
            }
        }),
    };
    let adag = a.adjoint();
    Ok((a, adag))
}

/// Matrix of H = c a†² + c* a² + b a + b* a†.
///
/// All generators used here (drive, squeeze, amplifier) share this form.
pub fn hamiltonian_matrix(params: &HamiltonianParams, dim: usize) -> Result<FockMatrix> {
    check_dim(dim)?;
    let b = params.b.value();
    let c = params.c.value();
    let entries = DMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            b * (j as f64).sqrt()
        } else if i == j + 1 {
            b.conj() * (i as f64).sqrt()
        } else if j == i + 2 {
            c.conj() * ((i + 1) as f64 * (i + 2) as f64).sqrt()
        } else if i == j + 2 {
            c * ((j + 1) as f64 * (j + 2) as f64).sqrt()
        } else {
            ZERO
        }
    });
    Ok(FockMatrix { entries })
}

/// Hermitian K with D(α) = e^{−iK}: K = i(α a† − α* a).
pub(crate) fn displacement_generator(alpha: ComplexAmplitude) -> HamiltonianParams {
    HamiltonianParams {
        b: (Complex64::new(0.0, -1.0) * alpha.value().conj()).into(),
        c: ComplexAmplitude::ZERO,
    }
}

/// Hermitian K with S(ξ) = e^{−iK}: K = i(−ξ/2 a†² + ξ*/2 a²).
pub(crate) fn squeeze_generator(xi: &SqueezeParam) -> HamiltonianParams {
    HamiltonianParams {
        b: ComplexAmplitude::ZERO,
        c: (Complex64::new(0.0, -0.5) * xi.value()).into(),
    }
}

/// D(α) = exp(α a† − α* a).
pub fn displacement(alpha: ComplexAmplitude, dim: usize) -> Result<FockMatrix> {
    if alpha.is_zero() {
        check_dim(dim)?;
        return Ok(FockMatrix::identity(dim));
    }
    Ok(hamiltonian_matrix(&displacement_generator(alpha), dim)?.hermitian_exp(1.0))
}

/// S(ξ) = exp(−ξ/2 a†² + ξ*/2 a²).
pub fn squeeze(xi: &SqueezeParam, dim: usize) -> Result<FockMatrix> {
    if xi.r() == 0.0 {
        check_dim(dim)?;
        return Ok(FockMatrix::identity(dim));
    }
    Ok(hamiltonian_matrix(&squeeze_generator(xi), dim)?.hermitian_exp(1.0))
}

/// Thermal populations p_n ∝ (n̄/(n̄+1))ⁿ renormalised over the basis.
pub fn thermal_populations(nbar: f64, dim: usize) -> Result<Vec<f64>> {
    check_dim(dim)?;
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(Error::domain(format!(
            "mean thermal occupation must be >= 0, got {nbar}"
        )));
    }
    let mut p = vec![0.0; dim];
    if nbar == 0.0 {
        p[0] = 1.0;
        return Ok(p);
    }
    let q = nbar / (nbar + 1.0);
    let mut w = 1.0;
    for slot in p.iter_mut() {
        *slot = w;
        w *= q;
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    Ok(p)
}

/// Thermal density matrix with mean occupation n̄ (truncated, renormalised).
pub fn thermal_rho(nbar: f64, dim: usize) -> Result<FockMatrix> {
    Ok(FockMatrix::from_diagonal(&thermal_populations(nbar, dim)?))
}

/// ρ_G = D(α) S(ξ) ρ₀ S(−ξ) D(−α), built as W W† with W = D S √ρ₀ so it is
/// Hermitian and positive by construction.
pub fn gaussian_rho(state: &GaussianStateParams, dim: usize) -> Result<FockMatrix> {
    let p = thermal_populations(state.nbar(), dim)?;
    let ds = &displacement(state.alpha, dim)? * &squeeze(&state.xi, dim)?;
    let sqrt_p: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
    let w = &ds * &FockMatrix::from_diagonal(&sqrt_p);
    let rho = &w * &w.adjoint();
    let tr = rho.trace().re;
    Ok(rho.scale(Complex64::new(1.0 / tr, 0.0)))
}

/// e^{−iHτ}.
pub fn propagator(params: &HamiltonianParams, tau: f64, dim: usize) -> Result<FockMatrix> {
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::domain(format!(
            "τ must be finite and >= 0, got {tau}"
        )));
    }
    if tau == 0.0 || (params.b.is_zero() && params.c.is_zero()) {
        check_dim(dim)?;
        return Ok(FockMatrix::identity(dim));
    }
    Ok(hamiltonian_matrix(params, dim)?.hermitian_exp(tau))
}

/// a(τ) = e^{iHτ} a e^{−iHτ} in the truncated basis.
pub fn heisenberg_a_matrix(params: &HamiltonianParams, tau: f64, dim: usize) -> Result<FockMatrix> {
    let (a, _) = ladder_operators(dim)?;
    let u = propagator(params, tau, dim)?;
    Ok(&(&u.adjoint() * &a) * &u)
}

/// u·a + v·a† + β·I for a closed-form flow.
pub fn flow_matrix(flow: &FlowResult, dim: usize) -> Result<FockMatrix> {
    let (a, adag) = ladder_operators(dim)?;
    let shift = FockMatrix::identity(dim).scale(flow.shift.value());
    Ok(&(&a.scale(flow.cosh_coeff) + &adag.scale(flow.sinh_coeff)) + &shift)
}

/// a cosh r − a† e^{iθ} sinh r + α·I, the image of a under
/// (D(α)S(ξ))† a D(α)S(ξ).
pub fn displaced_squeezed_a(
    alpha: ComplexAmplitude,
    xi: &SqueezeParam,
    dim: usize,
) -> Result<FockMatrix> {
    flow_matrix(
        &FlowResult {
            cosh_coeff: Complex64::new(xi.r().cosh(), 0.0),
            sinh_coeff: -xi.phase_factor() * xi.r().sinh(),
            shift: alpha,
        },
        dim,
    )
}

/// ‖P (U†U − I) P‖ on the lowest `k` states.
pub fn unitarity_defect(u: &FockMatrix, k: usize) -> f64 {
    let g = &u.adjoint() * u;
    (&g - &FockMatrix::identity(u.dim()))
        .project(k)
        .operator_norm()
}

/// ‖P (lhs − rhs) P‖ on the lowest `k` states.
pub fn projected_distance(lhs: &FockMatrix, rhs: &FockMatrix, k: usize) -> f64 {
    (lhs - rhs).project(k).operator_norm()
}

/// [a, a†] − I; zero except the (N−1, N−1) entry, which is −N.
pub fn commutator_defect(dim: usize) -> Result<FockMatrix> {
    let (a, adag) = ladder_operators(dim)?;
    Ok(&(&(&a * &adag) - &(&adag * &a)) - &FockMatrix::identity(dim))
}
