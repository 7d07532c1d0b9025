//! Polar grids in the unit disk, the Hardy-space transforms and the disk
//! annihilator.
//!
//! Radii are Chebyshev–Lobatto points on `[0, ρ_max]`; derivatives use the
//! Chebyshev differentiation matrix in `ρ`, FFT in `θ`, and
//! `∂_w̄ = (e^{iθ}/2)(∂ρ + (i/ρ)∂θ)`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{fft_in_place, ratio_of_norms, signed_frequency, C64, I};
use crate::su11::circle::CircleFunction;

pub const DEFAULT_RADII: usize = 48;
pub const DEFAULT_ANGLES: usize = 256;
pub const DEFAULT_RHO_MAX: f64 = 0.95;
/// Residuals on the disk are measured on `0 < ρ ≤ RESIDUAL_RHO`.
pub const RESIDUAL_RHO: f64 = 0.9;

#[derive(Debug, Clone, PartialEq)]
pub struct DiskGeometry {
    rho_max: f64,
    radii: Vec<f64>,
    n_theta: usize,
}

impl DiskGeometry {
    pub fn new(n_radii: usize, n_theta: usize, rho_max: f64) -> Result<Self> {
        if !(rho_max > 0.0 && rho_max < 1.0) {
            return Err(Error::Geometry(format!("rho_max must lie in (0, 1), got {rho_max}")));
        }
        if n_radii < 4 {
            return Err(Error::Geometry(format!("need at least 4 radii, got {n_radii}")));
        }
        if n_theta < 8 || n_theta % 2 != 0 {
            return Err(Error::Geometry(format!("angle count must be even and >= 8, got {n_theta}")));
        }
        let k = (n_radii - 1) as f64;
        let radii = (0..n_radii).map(|i| 0.5 * rho_max * (1.0 - (PI * i as f64 / k).cos())).collect();
        Ok(Self { rho_max, radii, n_theta })
    }

    pub fn with_rho_max(rho_max: f64) -> Result<Self> {
        Self::new(DEFAULT_RADII, DEFAULT_ANGLES, rho_max)
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_radii(&self) -> usize {
        self.radii.len()
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_theta as f64
    }

    pub fn point(&self, i: usize, j: usize) -> C64 {
        C64::from_polar(self.radii[i], self.theta(j))
    }

    pub fn points(&self) -> Vec<C64> {
        (0..self.n_radii()).flat_map(|i| (0..self.n_theta).map(move |j| (i, j))).map(|(i, j)| self.point(i, j)).collect()
    }

    /// Barycentric weights of the Chebyshev–Lobatto radii.
    fn bary_weights(&self) -> Vec<f64> {
        let k = self.n_radii();
        (0..k)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                if i == 0 || i == k - 1 {
                    0.5 * s
                } else {
                    s
                }
            })
            .collect()
    }

    /// Differentiation matrix on the radii.
    pub fn radial_diff_matrix(&self) -> DMatrix<f64> {
        let k = self.n_radii();
        let w = self.bary_weights();
        let x = &self.radii;
        let mut d = DMatrix::zeros(k, k);
        for i in 0..k {
            let mut diag = 0.0;
            for j in 0..k {
                if i != j {
                    let v = (w[j] / w[i]) / (x[i] - x[j]);
                    d[(i, j)] = v;
                    diag -= v;
                }
            }
            d[(i, i)] = diag;
        }
        d
    }

    /// Barycentric interpolation weights at radius `r` (exact node hits
    /// return a unit vector).
    pub(crate) fn radial_interp(&self, r: f64) -> Vec<f64> {
        let w = self.bary_weights();
        if let Some(i) = self.radii.iter().position(|&x| x == r) {
            let mut e = vec![0.0; self.n_radii()];
            e[i] = 1.0;
            return e;
        }
        let terms: Vec<f64> = w.iter().zip(&self.radii).map(|(w, x)| w / (r - x)).collect();
        let total: f64 = terms.iter().sum();
        terms.into_iter().map(|t| t / total).collect()
    }
}

impl Default for DiskGeometry {
    fn default() -> Self {
        Self::new(DEFAULT_RADII, DEFAULT_ANGLES, DEFAULT_RHO_MAX).expect("default disk geometry is valid")
    }
}

/// Complex values on a [`DiskGeometry`], ring-major (`i * n_theta + j`).
#[derive(Debug, Clone, PartialEq)]
pub struct DiskField {
    geometry: Arc<DiskGeometry>,
    values: Vec<C64>,
}

impl DiskField {
    pub fn new(geometry: Arc<DiskGeometry>, values: Vec<C64>) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(Error::LengthMismatch { expected: geometry.len(), actual: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { geometry, values })
    }

    pub fn from_fn(geometry: Arc<DiskGeometry>, f: impl Fn(C64) -> C64 + Sync) -> Result<Self> {
        let values = geometry.points().into_par_iter().map(&f).collect();
        Self::new(geometry, values)
    }

    pub fn zeros(geometry: Arc<DiskGeometry>) -> Self {
        let values = vec![C64::new(0.0, 0.0); geometry.len()];
        Self { geometry, values }
    }

    pub fn geometry(&self) -> &Arc<DiskGeometry> {
        &self.geometry
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.geometry.n_theta + j]
    }

    pub fn map(&self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        let pts = self.geometry.points();
        Self::new(self.geometry.clone(), pts.iter().zip(&self.values).map(|(w, v)| f(*w, *v)).collect())
    }

    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        if self.geometry != other.geometry {
            return Err(Error::GridMismatch);
        }
        Self::new(self.geometry.clone(), self.values.iter().zip(&other.values).map(|(u, v)| u * a + v * b).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.geometry != other.geometry {
            return Err(Error::GridMismatch);
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Largest deviation from `f(w)` over grid points with `ρ ≤ rho_limit`.
    pub fn max_deviation_from(&self, rho_limit: f64, f: impl Fn(C64) -> C64) -> f64 {
        let g = &self.geometry;
        let mut worst = 0.0f64;
        for i in (0..g.n_radii()).filter(|&i| g.radii[i] <= rho_limit) {
            for j in 0..g.n_theta {
                worst = worst.max((self.get(i, j) - f(g.point(i, j))).norm());
            }
        }
        worst
    }

    /// Spectrally accurate interpolation at `w` with `|w| ≤ ρ_max`:
    /// trigonometric in `θ` on every ring, barycentric in `ρ`.
    pub fn interpolate(&self, w: C64) -> Option<C64> {
        self.interpolate_with_bound(w).map(|(v, _)| v)
    }

    /// Interpolated value and an error estimate: the part of the value carried
    /// by angular modes `|m| ≥ n_theta/4`.
    pub fn interpolate_with_bound(&self, w: C64) -> Option<(C64, f64)> {
        let g = &self.geometry;
        let r = w.norm();
        if r > g.rho_max {
            return None;
        }
        let theta = w.arg();
        let weights = g.radial_interp(r);
        let nt = g.n_theta;
        let mut total = C64::new(0.0, 0.0);
        let mut tail = C64::new(0.0, 0.0);
        for (i, wr) in weights.iter().enumerate() {
            if *wr == 0.0 {
                continue;
            }
            let mut ring = self.values[i * nt..(i + 1) * nt].to_vec();
            fft_in_place(&mut ring, false);
            let mut v = C64::new(0.0, 0.0);
            let mut high = C64::new(0.0, 0.0);
            for (k, c) in ring.iter().enumerate() {
                let term = match signed_frequency(k, nt) {
                    Some(m) => c * C64::from_polar(1.0, m as f64 * theta),
                    None => c * (nt as f64 / 2.0 * theta).cos(),
                };
                v += term;
                if signed_frequency(k, nt).is_none_or(|m| 4 * m.unsigned_abs() as usize >= nt) {
                    high += term;
                }
            }
            total += v * (*wr / nt as f64);
            tail += high * (*wr / nt as f64);
        }
        Some((total, tail.norm()))
    }
}

fn radial_derivative(f: &DiskField) -> Vec<C64> {
    let g = f.geometry();
    let d = g.radial_diff_matrix();
    let (k, nt) = (g.n_radii(), g.n_theta());
    let mut out = vec![C64::new(0.0, 0.0); g.len()];
    for j in 0..nt {
        for i in 0..k {
            let mut acc = C64::new(0.0, 0.0);
            for l in 0..k {
                acc += f.values[l * nt + j] * d[(i, l)];
            }
            out[i * nt + j] = acc;
        }
    }
    out
}

fn angular_derivative(f: &DiskField) -> Vec<C64> {
    let g = f.geometry();
    let nt = g.n_theta();
    let mut out = Vec::with_capacity(g.len());
    for i in 0..g.n_radii() {
        let mut ring = f.values[i * nt..(i + 1) * nt].to_vec();
        fft_in_place(&mut ring, false);
        for (k, c) in ring.iter_mut().enumerate() {
            *c *= match signed_frequency(k, nt) {
                Some(m) => I * (m as f64 / nt as f64),
                None => C64::new(0.0, 0.0),
            };
        }
        fft_in_place(&mut ring, true);
        out.extend(ring);
    }
    out
}

/// `e^{±iθ}/2 (∂ρ ± (i/ρ)∂θ)`; `sign = +1` gives `∂_w̄`, `−1` gives `∂_w`.
/// At `ρ = 0` the ray average of `e^{±iθ}∂ρ` is used.
fn wirtinger(f: &DiskField, sign: f64) -> Result<DiskField> {
    let g = f.geometry().clone();
    let dr = radial_derivative(f);
    let dt = angular_derivative(f);
    let nt = g.n_theta();
    let mut out = vec![C64::new(0.0, 0.0); g.len()];
    for i in 0..g.n_radii() {
        let rho = g.radii()[i];
        if rho == 0.0 {
            let mean = (0..nt).map(|j| C64::from_polar(1.0, sign * g.theta(j)) * dr[j]).sum::<C64>() / nt as f64;
            out[..nt].iter_mut().for_each(|v| *v = mean);
            continue;
        }
        for j in 0..nt {
            let idx = i * nt + j;
            let phase = C64::from_polar(0.5, sign * g.theta(j));
            out[idx] = phase * (dr[idx] + I * sign * dt[idx] / rho);
        }
    }
    DiskField::new(g, out)
}

pub fn dbar_disk(f: &DiskField) -> Result<DiskField> {
    wirtinger(f, 1.0)
}

pub fn dw_disk(f: &DiskField) -> Result<DiskField> {
    wirtinger(f, -1.0)
}

/// `‖R‖/‖V‖` over the grid points with `0 < ρ ≤ rho_limit`.
pub fn disk_residual(r: &DiskField, v: &DiskField, rho_limit: f64) -> Result<f64> {
    if r.geometry != v.geometry {
        return Err(Error::GridMismatch);
    }
    let g = r.geometry();
    let nt = g.n_theta();
    let mut num = Vec::new();
    let mut den = Vec::new();
    for (i, &rho) in g.radii().iter().enumerate() {
        if rho == 0.0 || rho > rho_limit {
            continue;
        }
        for j in 0..nt {
            num.push(r.values[i * nt + j].norm_sqr());
            den.push(v.values[i * nt + j].norm_sqr());
        }
    }
    Ok(ratio_of_norms(&num, &den))
}

fn hardy_fourier(v: &CircleFunction, geometry: &Arc<DiskGeometry>, conjugate: bool) -> Result<DiskField> {
    let top = v.max_mode();
    let coeffs: Vec<C64> = if conjugate {
        (1..=top).map(|n| v.coeff(-n)).collect()
    } else {
        (0..=top).map(|n| v.coeff(n)).collect()
    };
    DiskField::from_fn(geometry.clone(), |w| {
        let z = if conjugate { w.conj() } else { w };
        let series = coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
        series / (1.0 - w.norm_sqr()).sqrt()
    })
}

fn hardy_quadrature(v: &CircleFunction, geometry: &Arc<DiskGeometry>, conjugate: bool) -> Result<DiskField> {
    let n = v.len();
    let units: Vec<C64> = (0..n).map(|j| C64::from_polar(1.0, v.theta(j))).collect();
    let samples = v.samples().to_vec();
    DiskField::from_fn(geometry.clone(), |w| {
        let terms: Vec<C64> = samples
            .iter()
            .zip(&units)
            .map(|(s, z)| if conjugate { s * z / (1.0 - w.conj() * z) } else { s / (1.0 - w * z.conj()) })
            .collect();
        crate::numerics::pairwise_sum(&terms) / (n as f64 * (1.0 - w.norm_sqr()).sqrt())
    })
}

/// `ṽ(w) = (1/(2π√(1−|w|²))) ∫ v(e^{iθ}) dθ / (1 − w e^{−iθ})
///       = Σ_{n≥0} v̂(n) wⁿ / √(1−|w|²)`, evaluated by the series.
pub fn hardy_transform(v: &CircleFunction, geometry: &Arc<DiskGeometry>) -> Result<DiskField> {
    hardy_fourier(v, geometry, false)
}

/// [`hardy_transform`] by trapezoidal quadrature of the Cauchy integral.
/// Aliasing limits agreement with the series to about `ρ^N`.
pub fn hardy_transform_quadrature(v: &CircleFunction, geometry: &Arc<DiskGeometry>) -> Result<DiskField> {
    hardy_quadrature(v, geometry, false)
}

/// Conjugated Cauchy kernel: `Σ_{n≥1} v̂(−n) w̄^{n−1} / √(1−|w|²)`.
pub fn hardy_transform_conjugate(v: &CircleFunction, geometry: &Arc<DiskGeometry>) -> Result<DiskField> {
    hardy_fourier(v, geometry, true)
}

/// `(1/(2π√(1−|w|²))) ∫ v(e^{iθ}) e^{iθ} dθ / (1 − w̄ e^{iθ})` by quadrature.
pub fn hardy_transform_conjugate_quadrature(v: &CircleFunction, geometry: &Arc<DiskGeometry>) -> Result<DiskField> {
    hardy_quadrature(v, geometry, true)
}

/// `(−½w + (1−|w|²)∂_w̄) F`.
pub fn disk_annihilator(f: &DiskField) -> Result<DiskField> {
    let d = dbar_disk(f)?;
    let pts = f.geometry().points();
    let values = pts
        .iter()
        .zip(f.values.iter().zip(d.values()))
        .map(|(w, (v, dv))| -0.5 * w * v + (1.0 - w.norm_sqr()) * dv)
        .collect();
    DiskField::new(f.geometry().clone(), values)
}

/// `V(w) = √(1−|w|²) F(w)`.
pub fn weighted_disk_image(f: &DiskField) -> Result<DiskField> {
    f.map(|w, v| v * (1.0 - w.norm_sqr()).sqrt())
}

/// Relative `∂_w̄` residual of [`weighted_disk_image`] on `0 < ρ ≤ rho_limit`.
pub fn holomorphy_residual(f: &DiskField, rho_limit: f64) -> Result<f64> {
    let v = weighted_disk_image(f)?;
    disk_residual(&dbar_disk(&v)?, &v, rho_limit)
}

/// Relative `∂_w` residual of [`weighted_disk_image`], for anti-holomorphic images.
pub fn antiholomorphy_residual(f: &DiskField, rho_limit: f64) -> Result<f64> {
    let v = weighted_disk_image(f)?;
    disk_residual(&dw_disk(&v)?, &v, rho_limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> Arc<DiskGeometry> {
        Arc::new(DiskGeometry::default())
    }

    fn inv_sqrt(w: C64) -> f64 {
        1.0 / (1.0 - w.norm_sqr()).sqrt()
    }

    #[test]
    fn geometry_validates() {
        assert!(DiskGeometry::with_rho_max(1.0).is_err());
        assert!(DiskGeometry::with_rho_max(0.0).is_err());
        let g = DiskGeometry::default();
        assert_eq!(g.radii()[0], 0.0);
        assert!((g.radii()[47] - 0.95).abs() < 1e-15);
        assert!(g.radii().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn radial_matrix_differentiates_polynomials() {
        let g = DiskGeometry::default();
        let d = g.radial_diff_matrix();
        for i in 0..g.n_radii() {
            let row: f64 = (0..g.n_radii()).map(|l| d[(i, l)] * g.radii()[l].powi(5)).sum();
            assert!((row - 5.0 * g.radii()[i].powi(4)).abs() < 1e-10);
        }
    }

    #[test]
    fn hardy_mode_examples() {
        let g = geom();
        let n = 256;
        let fp = hardy_transform(&CircleFunction::f_plus(n).unwrap(), &g).unwrap();
        assert!(fp.max_deviation_from(0.95, |w| C64::new(inv_sqrt(w), 0.0)) < 1e-12);
        let one = hardy_transform(&CircleFunction::monomial(n, 1).unwrap(), &g).unwrap();
        assert!(one.max_deviation_from(0.95, |w| w * inv_sqrt(w)) < 1e-12);
        let neg = hardy_transform(&CircleFunction::monomial(n, -1).unwrap(), &g).unwrap();
        assert!(neg.max_abs() < 1e-12);
    }

    #[test]
    fn quadrature_path_agrees_inside() {
        let g = geom();
        let v = CircleFunction::from_modes(256, &[(0, C64::new(0.3, 0.2)), (3, C64::new(-1.0, 0.5)), (-4, C64::new(0.2, 0.0))])
            .unwrap();
        let a = hardy_transform(&v, &g).unwrap();
        let b = hardy_transform_quadrature(&v, &g).unwrap();
        let diff = a.combine(C64::new(1.0, 0.0), &b, C64::new(-1.0, 0.0)).unwrap();
        assert!(diff.max_deviation_from(0.9, |_| C64::new(0.0, 0.0)) < 1e-10);
        let c = hardy_transform_conjugate(&v, &g).unwrap();
        let d = hardy_transform_conjugate_quadrature(&v, &g).unwrap();
        let diff = c.combine(C64::new(1.0, 0.0), &d, C64::new(-1.0, 0.0)).unwrap();
        assert!(diff.max_deviation_from(0.9, |_| C64::new(0.0, 0.0)) < 1e-10);
    }

    #[test]
    fn conjugate_examples() {
        let g = geom();
        let n = 256;
        assert!(hardy_transform_conjugate(&CircleFunction::f_plus(n).unwrap(), &g).unwrap().max_abs() < 1e-12);
        let fm = hardy_transform_conjugate(&CircleFunction::f_minus(n).unwrap(), &g).unwrap();
        assert!(fm.max_deviation_from(0.95, |w| C64::new(inv_sqrt(w), 0.0)) < 1e-12);
        let two = hardy_transform_conjugate(&CircleFunction::monomial(n, -2).unwrap(), &g).unwrap();
        let weighted = weighted_disk_image(&two).unwrap();
        assert!(weighted.max_deviation_from(0.95, |w| w.conj()) < 1e-12);
        assert!(antiholomorphy_residual(&two, RESIDUAL_RHO).unwrap() < 1e-4);
        assert!(holomorphy_residual(&two, RESIDUAL_RHO).unwrap() > 0.1);
        assert_eq!(hardy_transform_conjugate(&CircleFunction::zeros(n).unwrap(), &g).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn annihilator_examples() {
        let g = geom();
        let fp = DiskField::from_fn(g.clone(), |w| C64::new(inv_sqrt(w), 0.0)).unwrap();
        assert!(disk_residual(&disk_annihilator(&fp).unwrap(), &fp, RESIDUAL_RHO).unwrap() < 1e-6);
        let v = CircleFunction::from_modes(256, &[(0, C64::new(0.5, 0.0)), (2, C64::new(0.0, 1.0)), (7, C64::new(0.3, -0.3))])
            .unwrap();
        let img = hardy_transform(&v, &g).unwrap();
        assert!(disk_residual(&disk_annihilator(&img).unwrap(), &img, RESIDUAL_RHO).unwrap() < 1e-4);
        let conj = hardy_transform_conjugate(&CircleFunction::monomial(256, -3).unwrap(), &g).unwrap();
        assert!(disk_residual(&disk_annihilator(&conj).unwrap(), &conj, RESIDUAL_RHO).unwrap() > 0.1);
        let zero = DiskField::zeros(g);
        assert_eq!(disk_annihilator(&zero).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn weighted_image_examples() {
        let g = geom();
        let fp = hardy_transform(&CircleFunction::f_plus(256).unwrap(), &g).unwrap();
        assert!(weighted_disk_image(&fp).unwrap().max_deviation_from(0.95, |_| C64::new(1.0, 0.0)) < 1e-12);
        let one = hardy_transform(&CircleFunction::monomial(256, 1).unwrap(), &g).unwrap();
        let v = weighted_disk_image(&one).unwrap();
        assert!(v.max_deviation_from(0.95, |w| w) < 1e-12);
        assert!(disk_residual(&dbar_disk(&v).unwrap(), &v, RESIDUAL_RHO).unwrap() < 1e-10);
    }

    #[test]
    fn interpolation_is_spectral() {
        let g = geom();
        let f = DiskField::from_fn(g, |w| (w * w + C64::new(0.2, 0.0) * w.conj()) * inv_sqrt(w)).unwrap();
        for w in [C64::new(0.31, -0.12), C64::new(-0.6, 0.5), C64::new(0.0, 0.93)] {
            let exact = (w * w + C64::new(0.2, 0.0) * w.conj()) * inv_sqrt(w);
            assert!((f.interpolate(w).unwrap() - exact).norm() < 1e-8);
        }
        assert!(f.interpolate(C64::new(0.96, 0.0)).is_none());
    }
}
