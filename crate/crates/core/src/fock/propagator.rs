//! Action of e^{−iKt} on a state vector for the banded quadratic generators
//! K = c a†² + c* a² + b a + b* a†, by Chebyshev expansion.
//!
//! e^{−ixK̃} = J₀(x) + 2 Σ_{k≥1} (−i)^k J_k(x) T_k(K̃), with K̃ = K/R scaled
//! into [−1, 1] by a Gershgorin bound R and x = R·t. The series converges
//! super-exponentially once k exceeds x, so the truncation error is set by
//! the Bessel tail.

use num_complex::Complex64;

use crate::param_map::HamiltonianParams;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Expansion terms whose Bessel weight falls below this are dropped.
const SERIES_TOL: f64 = 1e-18;

/// K restricted to the lowest `dim` number states, stored as its two bands.
#[derive(Debug, Clone)]
pub struct BandedGenerator {
    dim: usize,
    b: Complex64,
    c: Complex64,
    /// √(i+1)
    s1: Vec<f64>,
    /// √((i+1)(i+2))
    s2: Vec<f64>,
}

impl BandedGenerator {
    pub fn new(params: &HamiltonianParams, dim: usize) -> Self {
        Self {
            dim,
            b: params.b.value(),
            c: params.c.value(),
            s1: (0..dim).map(|i| ((i + 1) as f64).sqrt()).collect(),
            s2: (0..dim)
                .map(|i| ((i + 1) as f64 * (i + 2) as f64).sqrt())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.b == ZERO && self.c == ZERO
    }

    /// Gershgorin bound on the spectral radius (the diagonal is zero).
    pub fn spectral_bound(&self) -> f64 {
        let n = self.dim;
        let (bm, cm) = (self.b.norm(), self.c.norm());
        (0..n)
            .map(|i| {
                let mut row = 0.0;
                if i + 1 < n {
                    row += bm * self.s1[i];
                }
                if i >= 1 {
                    row += bm * self.s1[i - 1];
                }
                if i + 2 < n {
                    row += cm * self.s2[i];
                }
                if i >= 2 {
                    row += cm * self.s2[i - 2];
                }
                row
            })
            .fold(0.0, f64::max)
    }

    /// out = (K/scale) x.
    fn apply_scaled(&self, x: &[Complex64], scale: f64, out: &mut [Complex64]) {
        let n = self.dim;
        let (b, bc) = (self.b / scale, self.b.conj() / scale);
        let (c, cc) = (self.c / scale, self.c.conj() / scale);
        for i in 0..n {
            let mut acc = ZERO;
            if i + 1 < n {
                acc += b * self.s1[i] * x[i + 1];
            }
            if i >= 1 {
                acc += bc * self.s1[i - 1] * x[i - 1];
            }
            if i + 2 < n {
                acc += cc * self.s2[i] * x[i + 2];
            }
            if i >= 2 {
                acc += c * self.s2[i - 2] * x[i - 2];
            }
            out[i] = acc;
        }
    }

    /// K x.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim];
        self.apply_scaled(x, 1.0, &mut out);
        out
    }

    /// e^{−iKt} v.
    pub fn propagate(&self, t: f64, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length must match the basis");
        let radius = self.spectral_bound();
        if t == 0.0 || radius == 0.0 {
            return v.to_vec();
        }
        // small margin keeps the scaled spectrum strictly inside [−1, 1]
        let scale = radius * (1.0 + 1e-12);
        let x = scale * t;
        let bessel = bessel_j_sequence(x, chebyshev_terms(x));
        let last = bessel
            .iter()
            .rposition(|j| j.abs() > SERIES_TOL)
            .unwrap_or(0);

        let n = self.dim;
        let mut prev = v.to_vec();
        let mut curr = vec![ZERO; n];
        self.apply_scaled(&prev, scale, &mut curr);
        let mut next = vec![ZERO; n];

        let coeff = |k: usize| -> Complex64 {
            let phase = match k % 4 {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, -1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, 1.0),
            };
            phase * if k == 0 { bessel[0] } else { 2.0 * bessel[k] }
        };

        let c0 = coeff(0);
        let c1 = coeff(1);
        let mut acc: Vec<Complex64> = prev
            .iter()
            .zip(&curr)
            .map(|(p, q)| c0 * p + c1 * q)
            .collect();
        for k in 2..=last {
            self.apply_scaled(&curr, scale, &mut next);
            let ck = coeff(k);
            for i in 0..n {
                let t_k = 2.0 * next[i] - prev[i];
                acc[i] += ck * t_k;
                next[i] = t_k;
            }
            std::mem::swap(&mut prev, &mut curr);
            std::mem::swap(&mut curr, &mut next);
        }
        acc
    }
}

/// Number of Chebyshev terms needed for argument x: past x the Bessel
/// weights decay like an Airy tail of width ~x^{1/3}.
fn chebyshev_terms(x: f64) -> usize {
    (x + 12.0 * x.cbrt() + 40.0).ceil() as usize
}

/// J_0(x), …, J_kmax(x) by Miller's downward recurrence, normalised with
/// J₀ + 2 Σ J_{2k} = 1.
pub fn bessel_j_sequence(x: f64, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let top = kmax.max(x.ceil() as usize);
    let mut start = top + (160.0 * top as f64).sqrt() as usize + 20;
    start += start % 2;

    let mut j_next = 0.0;
    let mut j_curr = 1e-300;
    let mut even_sum = 0.0;
    for k in (1..=start).rev() {
        let j_prev = (2.0 * k as f64 / x) * j_curr - j_next;
        j_next = j_curr;
        j_curr = j_prev;
        let idx = k - 1;
        if idx <= kmax {
            out[idx] = j_curr;
        }
        if idx % 2 == 0 && idx > 0 {
            even_sum += j_curr;
        }
        if j_curr.abs() > 1e250 {
            j_curr *= 1e-250;
            j_next *= 1e-250;
            even_sum *= 1e-250;
            out.iter_mut().skip(idx).for_each(|v| *v *= 1e-250);
        }
    }
    // loop exits with j_curr = J_0 (unnormalised)
    let norm = j_curr + 2.0 * even_sum;
    out.iter_mut().for_each(|v| *v /= norm);
    out
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// a v with a|n⟩ = √n |n−1⟩.
pub fn apply_lowering(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    (0..n)
        .map(|i| {
            if i + 1 < n {
                v[i + 1] * ((i + 1) as f64).sqrt()
            } else {
                ZERO
            }
        })
        .collect()
}
