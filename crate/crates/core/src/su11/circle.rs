//! Band-limited functions on the unit circle, the mock discrete
//! representation and its derived representation.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{fft_in_place, pairwise_sum, signed_frequency, HilbertVector, C64, I};
use crate::su11::group::{su11_inv, SU11Element};

/// Default number of circle samples.
pub const DEFAULT_CIRCLE_POINTS: usize = 256;

/// Spectrum in the top quarter above this fraction of the peak counts as
/// not band-limited.
pub const BAND_LIMIT_TOLERANCE: f64 = 1e-10;

/// Möbius denominators below this modulus are rejected.
pub const POLE_TOLERANCE: f64 = 1e-8;

const SPARSITY: f64 = 1e-17;

/// Samples at `θ_j = 2πj/N` together with Fourier coefficients
/// `f̂(n) = (1/N) Σ_j f(θ_j) e^{−inθ_j}` in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleFunction {
    samples: Vec<C64>,
    coeffs: Vec<C64>,
}

fn check_len(n: usize) -> Result<()> {
    if n < 8 || !n.is_power_of_two() {
        return Err(Error::InvalidGrid(format!("circle sample count must be a power of two >= 8, got {n}")));
    }
    Ok(())
}

impl CircleFunction {
    pub fn from_samples(samples: Vec<C64>) -> Result<Self> {
        check_len(samples.len())?;
        if let Some(i) = samples.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        let mut coeffs = samples.clone();
        fft_in_place(&mut coeffs, false);
        let inv = 1.0 / samples.len() as f64;
        coeffs.iter_mut().for_each(|c| *c *= inv);
        Ok(Self { samples, coeffs })
    }

    /// From Fourier coefficients in FFT order.
    pub fn from_coeffs(coeffs: Vec<C64>) -> Result<Self> {
        check_len(coeffs.len())?;
        if let Some(i) = coeffs.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        let mut samples = coeffs.clone();
        fft_in_place(&mut samples, true);
        Ok(Self { samples, coeffs })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> C64) -> Result<Self> {
        check_len(n)?;
        Self::from_samples((0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect())
    }

    /// `Σ c_k z^{n_k}` for the listed `(n_k, c_k)`.
    pub fn from_modes(n: usize, modes: &[(i64, C64)]) -> Result<Self> {
        check_len(n)?;
        let mut coeffs = vec![C64::new(0.0, 0.0); n];
        for &(mode, c) in modes {
            coeffs[mode_index(mode, n)?] += c;
        }
        Self::from_coeffs(coeffs)
    }

    pub fn monomial(n: usize, mode: i64) -> Result<Self> {
        Self::from_modes(n, &[(mode, C64::new(1.0, 0.0))])
    }

    /// `f₊(z) ≡ 1`.
    pub fn f_plus(n: usize) -> Result<Self> {
        Self::monomial(n, 0)
    }

    /// `f₋(z) = 1/z`.
    pub fn f_minus(n: usize) -> Result<Self> {
        Self::monomial(n, -1)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_modes(n, &[])
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.len() as f64
    }

    /// Largest mode `|n| < N/2` carried without touching the Nyquist bin.
    pub fn max_mode(&self) -> i64 {
        self.len() as i64 / 2 - 1
    }

    /// Coefficient of `zⁿ`; zero outside the resolved band.
    pub fn coeff(&self, mode: i64) -> C64 {
        mode_index(mode, self.len()).map(|i| self.coeffs[i]).unwrap_or_default()
    }

    /// Peak of the top quarter of the spectrum relative to the overall peak.
    pub fn band_ratio(&self) -> f64 {
        let n = self.len();
        let peak = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let top = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| signed_frequency(*k, n).map_or(true, |m| m.unsigned_abs() as usize >= n / 4))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        top / peak
    }

    pub fn check_band_limited(&self) -> Result<()> {
        let ratio = self.band_ratio();
        if ratio > BAND_LIMIT_TOLERANCE {
            return Err(Error::NotBandLimited { ratio });
        }
        Ok(())
    }

    /// Band-limited evaluation `Σ f̂(n) ζⁿ` at a point of the unit circle.
    pub fn eval(&self, zeta: C64) -> C64 {
        self.evaluator().eval(zeta)
    }

    pub(crate) fn evaluator(&self) -> Evaluator {
        let n = self.len();
        let peak = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let keep = |c: &C64| c.norm() > SPARSITY * peak;
        let pos: Vec<C64> = (0..n / 2).map(|k| self.coeffs[k]).collect();
        let neg: Vec<C64> = (1..n / 2).map(|k| self.coeffs[n - k]).collect();
        let trim = |v: Vec<C64>| {
            let end = v.iter().rposition(keep).map_or(0, |e| e + 1);
            v[..end].to_vec()
        };
        Evaluator { pos: trim(pos), neg: trim(neg) }
    }
}

/// Horner evaluation of the non-negative and negative halves of a spectrum.
pub(crate) struct Evaluator {
    pos: Vec<C64>,
    neg: Vec<C64>,
}

impl Evaluator {
    pub(crate) fn eval(&self, zeta: C64) -> C64 {
        let zeta = zeta / zeta.norm();
        let horner = |c: &[C64], z: C64| c.iter().rev().fold(C64::new(0.0, 0.0), |acc, a| acc * z + a);
        let p = horner(&self.pos, zeta);
        let q = horner(&self.neg, zeta.conj()) * zeta.conj();
        p + q
    }
}

fn mode_index(mode: i64, n: usize) -> Result<usize> {
    let half = n as i64 / 2;
    if mode.abs() >= half {
        return Err(Error::SpectrumOverflow { mode });
    }
    Ok(mode.rem_euclid(n as i64) as usize)
}

impl HilbertVector for CircleFunction {
    /// Normalized rotation-invariant measure: `(1/N) Σ f ḡ`.
    fn inner(&self, other: &Self) -> Result<C64> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch);
        }
        let terms: Vec<C64> = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).collect();
        Ok(pairwise_sum(&terms) / self.len() as f64)
    }

    fn scaled(&self, a: C64) -> Self {
        Self {
            samples: self.samples.iter().map(|v| v * a).collect(),
            coeffs: self.coeffs.iter().map(|v| v * a).collect(),
        }
    }

    fn combine(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch);
        }
        let mix = |x: &[C64], y: &[C64]| x.iter().zip(y).map(|(u, v)| u * a + v * b).collect();
        Ok(Self { samples: mix(&self.samples, &other.samples), coeffs: mix(&self.coeffs, &other.coeffs) })
    }

    fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::GridMismatch);
        }
        Ok(self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// `[π(g) f](z) = f((αz+β)/(β̄z+ᾱ)) / (β̄z+ᾱ)` where `(α, β)` are the
/// entries of `g⁻¹`.
pub fn mock_rep_apply(g: &SU11Element, f: &CircleFunction) -> Result<CircleFunction> {
    f.check_band_limited()?;
    let inv = su11_inv(g);
    let (alpha, beta) = (inv.alpha(), inv.beta());
    let eval = f.evaluator();
    let n = f.len();
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let z = C64::from_polar(1.0, f.theta(j));
        let den = beta.conj() * z + alpha.conj();
        if den.norm() < POLE_TOLERANCE {
            return Err(Error::NearPole { index: j, modulus: den.norm() });
        }
        out.push(eval.eval((alpha * z + beta) / den) / den);
    }
    CircleFunction::from_samples(out)
}

/// Elements of su(1,1) acted on by the derived representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DerivedGenerator {
    A,
    B,
    Z,
    BPlusIA,
    BMinusIA,
}

/// Exact action on Fourier coefficients:
/// `π_A = (i/2)(z + (z²+1)∂z)`, `π_B = ½(z + (z²−1)∂z)`, `π_Z = −i − 2iz∂z`,
/// so `π_{B+iA} = −∂z` and `π_{B−iA} = z + z²∂z`.
pub fn derived_rep_apply(x: DerivedGenerator, f: &CircleFunction) -> Result<CircleFunction> {
    f.check_band_limited()?;
    let n = f.len();
    let top = f.max_mode();
    let a = |m: i64| f.coeff(m);
    let mut out = vec![C64::new(0.0, 0.0); n];
    for m in -top..=top {
        let mf = m as f64;
        let lower = a(m - 1) * mf;
        let upper = a(m + 1) * (mf + 1.0);
        let b = match x {
            DerivedGenerator::A => (lower + upper) * (0.5 * I),
            DerivedGenerator::B => (lower - upper) * 0.5,
            DerivedGenerator::Z => a(m) * (-I * (1.0 + 2.0 * mf)),
            DerivedGenerator::BPlusIA => -upper,
            DerivedGenerator::BMinusIA => lower,
        };
        out[mode_index(m, n)?] = b;
    }
    CircleFunction::from_coeffs(out)
}
