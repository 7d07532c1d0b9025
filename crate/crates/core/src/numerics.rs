//! Shared numerical substrate: uniform grids, trapezoidal quadrature,
//! spectral and finite-difference differentiation, complex field containers
//! and residual norms.
//!
//! Sums that feed norms and quadratures go through [`pairwise_sum`], so a
//! value never depends on how the caller splits work across threads.
//!
//! Periodic operations on a [`RealGrid`] treat the first `n - 1` samples as
//! one period of length `hi - lo`; the last sample is the image of the first.
//! Decaying data (which vanishes at both ends) and genuinely periodic data
//! both satisfy this.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Default relative amplitude below which a state counts as decayed at the
/// grid ends.
pub const DEFAULT_DECAY_THRESHOLD: f64 = 1e-8;

const PAIRWISE_BLOCK: usize = 16;

/// Pairwise (cascade) summation of complex terms.
pub fn pairwise_sum(terms: &[C64]) -> C64 {
    if terms.len() <= PAIRWISE_BLOCK {
        return terms.iter().fold(C64::new(0.0, 0.0), |acc, t| acc + t);
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}

/// Pairwise summation of real terms.
pub fn pairwise_sum_real(terms: &[f64]) -> f64 {
    if terms.len() <= PAIRWISE_BLOCK {
        return terms.iter().sum();
    }
    let mid = terms.len() / 2;
    pairwise_sum_real(&terms[..mid]) + pairwise_sum_real(&terms[mid..])
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place unnormalized FFT (`inverse` selects the sign `+i`).
pub(crate) fn fft_in_place(buf: &mut [C64], inverse: bool) {
    if buf.is_empty() {
        return;
    }
    let plan = PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        if inverse {
            planner.plan_fft_inverse(buf.len())
        } else {
            planner.plan_fft_forward(buf.len())
        }
    });
    plan.process(buf);
}

/// Signed frequency of FFT bin `k` out of `m`; `None` for the Nyquist bin of
/// an even-length transform.
pub(crate) fn signed_frequency(k: usize, m: usize) -> Option<i64> {
    if m % 2 == 0 && k == m / 2 {
        None
    } else if k <= (m - 1) / 2 {
        Some(k as i64)
    } else {
        Some(k as i64 - m as i64)
    }
}

/// Fourier derivative of one period of samples.
pub(crate) fn periodic_derivative(samples: &[C64], period: f64) -> Vec<C64> {
    let m = samples.len();
    let mut buf = samples.to_vec();
    fft_in_place(&mut buf, false);
    for (k, c) in buf.iter_mut().enumerate() {
        match signed_frequency(k, m) {
            Some(freq) => *c *= I * (2.0 * PI * freq as f64 / period),
            None => *c = C64::new(0.0, 0.0),
        }
    }
    fft_in_place(&mut buf, true);
    let scale = 1.0 / m as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Band-limited evaluation of `f(q + shift)` from one period of samples.
pub(crate) fn periodic_shift(samples: &[C64], period: f64, shift: f64) -> Vec<C64> {
    let m = samples.len();
    let mut buf = samples.to_vec();
    fft_in_place(&mut buf, false);
    for (k, c) in buf.iter_mut().enumerate() {
        match signed_frequency(k, m) {
            Some(freq) => *c *= C64::from_polar(1.0, 2.0 * PI * freq as f64 * shift / period),
            None => *c *= (PI * m as f64 * shift / period).cos(),
        }
    }
    fft_in_place(&mut buf, true);
    let scale = 1.0 / m as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Dense Fourier differentiation matrix acting on one period of `m` samples.
pub fn fourier_diff_matrix(m: usize, period: f64) -> nalgebra::DMatrix<C64> {
    let mut mat = nalgebra::DMatrix::<C64>::zeros(m, m);
    let mut unit = vec![C64::new(0.0, 0.0); m];
    for col in 0..m {
        unit[col] = C64::new(1.0, 0.0);
        let d = periodic_derivative(&unit, period);
        for (row, v) in d.into_iter().enumerate() {
            mat[(row, col)] = v;
        }
        unit[col] = C64::new(0.0, 0.0);
    }
    mat
}

/// A uniform grid on `[lo, hi]` with `n` samples, both endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RealGrid {
    lo: f64,
    hi: f64,
    n: usize,
}

impl RealGrid {
    pub const MIN_POINTS: usize = 8;

    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidGrid(format!("need finite lo < hi, got [{lo}, {hi}]")));
        }
        if n < Self::MIN_POINTS {
            return Err(Error::GridTooSmall { len: n, min: Self::MIN_POINTS });
        }
        Ok(Self { lo, hi, n })
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    /// `[-8, 8]` with 2048 samples.
    pub fn state_default() -> Self {
        Self { lo: -8.0, hi: 8.0, n: 2048 }
    }

    /// `[-4, 4]` with 257 samples.
    pub fn plane_default() -> Self {
        Self { lo: -4.0, hi: 4.0, n: 257 }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn period(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Trapezoidal weights.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.n];
        w[0] = 0.5 * h;
        w[self.n - 1] = 0.5 * h;
        w
    }

    /// Largest `|point|`.
    pub fn max_abs(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }
}

/// Which route produced a derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMethod {
    Spectral,
    FiniteDifference4,
}

/// Complex samples of a function on a [`RealGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction1D {
    grid: RealGrid,
    values: Vec<C64>,
}

impl GridFunction1D {
    pub fn new(grid: RealGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), actual: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: RealGrid, f: impl Fn(f64) -> C64) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn from_real_fn(grid: RealGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, |q| C64::new(f(q), 0.0))
    }

    pub fn zeros(grid: RealGrid) -> Self {
        Self { grid, values: vec![C64::new(0.0, 0.0); grid.len()] }
    }

    pub fn grid(&self) -> &RealGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Pointwise map `(q, f(q)) -> g(q)`.
    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Result<Self> {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| f(self.grid.point(i), *v))
            .collect();
        Self::new(self.grid, values)
    }

    /// True when both end samples are below `threshold * max|f|`.
    pub fn decays(&self, threshold: f64) -> bool {
        let peak = self.max_abs();
        if peak == 0.0 {
            return true;
        }
        let ends = self.values[0].norm().max(self.values[self.values.len() - 1].norm());
        ends < threshold * peak
    }

    /// Peak of the upper half of the periodic spectrum (|frequency| above a
    /// quarter of the bins) relative to the overall peak.
    pub fn spectral_tail_ratio(&self) -> f64 {
        let mut buf = self.period_samples().to_vec();
        let m = buf.len();
        fft_in_place(&mut buf, false);
        let peak = buf.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let tail = buf
            .iter()
            .enumerate()
            .filter(|(k, _)| signed_frequency(*k, m).map_or(true, |f| f.unsigned_abs() as usize >= m / 4))
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        tail / peak
    }

    /// The `n - 1` samples forming one period.
    pub(crate) fn period_samples(&self) -> &[C64] {
        &self.values[..self.values.len() - 1]
    }

    /// Rebuild from one period, closing it with a copy of the first sample.
    pub(crate) fn from_period(grid: RealGrid, mut period: Vec<C64>) -> Result<Self> {
        let first = period[0];
        period.push(first);
        Self::new(grid, period)
    }
}

/// Vectors of a complex Hilbert space with a conjugate-linear second slot.
pub trait HilbertVector: Clone + Send + Sync {
    fn inner(&self, other: &Self) -> Result<C64>;

    fn scaled(&self, a: C64) -> Self;

    /// `a * self + b * other`.
    fn combine(&self, a: C64, other: &Self, b: C64) -> Result<Self>;

    fn norm(&self) -> Result<f64> {
        Ok(self.inner(self)?.re.max(0.0).sqrt())
    }

    /// Largest pointwise modulus of `self - other`.
    fn max_abs_diff(&self, other: &Self) -> Result<f64>;
}

impl HilbertVector for GridFunction1D {
    fn inner(&self, other: &Self) -> Result<C64> {
        inner_product(self, other)
    }

    fn scaled(&self, a: C64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v * a).collect() }
    }

    fn combine(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x * a + y * b).collect();
        Self::new(self.grid, values)
    }

    fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self.values.iter().zip(&other.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    }
}

/// `∫ f(q) conj(g(q)) dq` by the trapezoidal rule.
pub fn inner_product(f: &GridFunction1D, g: &GridFunction1D) -> Result<C64> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    let w = f.grid.trapezoid_weights();
    let terms: Vec<C64> = f
        .values
        .iter()
        .zip(&g.values)
        .zip(&w)
        .map(|((a, b), w)| a * b.conj() * *w)
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Result of [`spectral_derivative`].
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub function: GridFunction1D,
    pub method: DerivativeMethod,
}

/// `df/dq`, spectrally when `f` decays at both ends, otherwise by fourth-order
/// finite differences.
pub fn spectral_derivative(f: &GridFunction1D) -> Result<Derivative> {
    spectral_derivative_with(f, DEFAULT_DECAY_THRESHOLD)
}

pub fn spectral_derivative_with(f: &GridFunction1D, decay_threshold: f64) -> Result<Derivative> {
    let grid = f.grid;
    if grid.len() < RealGrid::MIN_POINTS {
        return Err(Error::GridTooSmall { len: grid.len(), min: RealGrid::MIN_POINTS });
    }
    if f.decays(decay_threshold) {
        let d = periodic_derivative(f.period_samples(), grid.period());
        Ok(Derivative { function: GridFunction1D::from_period(grid, d)?, method: DerivativeMethod::Spectral })
    } else {
        let mut out = vec![C64::new(0.0, 0.0); grid.len()];
        fd_derivative_line(&f.values, 1, grid.len(), grid.spacing(), FdOrder::Fourth, &mut out, 1);
        Ok(Derivative { function: GridFunction1D::new(grid, out)?, method: DerivativeMethod::FiniteDifference4 })
    }
}

/// Axis of a [`PlaneField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Finite-difference order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdOrder {
    Second,
    Fourth,
}

impl FdOrder {
    /// Number of edge samples that use one-sided stencils.
    pub fn half_width(self) -> usize {
        match self {
            FdOrder::Second => 1,
            FdOrder::Fourth => 2,
        }
    }
}

/// Differentiate one strided line of `len` samples. Stencils are written as
/// weighted differences so that constants map to exactly zero.
fn fd_derivative_line(
    data: &[C64],
    stride: usize,
    len: usize,
    h: f64,
    order: FdOrder,
    out: &mut [C64],
    out_stride: usize,
) {
    let f = |i: usize| data[i * stride];
    match order {
        FdOrder::Second => {
            let s = 1.0 / (2.0 * h);
            out[0] = ((f(1) - f(0)) * 3.0 + (f(1) - f(2))) * s;
            for i in 1..len - 1 {
                out[i * out_stride] = (f(i + 1) - f(i - 1)) * s;
            }
            let n = len - 1;
            out[n * out_stride] = -((f(n - 1) - f(n)) * 3.0 + (f(n - 1) - f(n - 2))) * s;
        }
        FdOrder::Fourth => {
            let s = 1.0 / (12.0 * h);
            let fwd0 = |a: C64, b: C64, c: C64, d: C64, e: C64| {
                (b - a) * 25.0 + (b - c) * 23.0 - (c - d) * 13.0 + (d - e) * 3.0
            };
            let fwd1 = |a: C64, b: C64, c: C64, d: C64, e: C64| {
                (b - a) * 3.0 + (c - b) * 13.0 + (c - d) * 5.0 + (e - d)
            };
            out[0] = fwd0(f(0), f(1), f(2), f(3), f(4)) * s;
            out[out_stride] = fwd1(f(0), f(1), f(2), f(3), f(4)) * s;
            for i in 2..len - 2 {
                out[i * out_stride] = ((f(i - 2) - f(i + 2)) + (f(i + 1) - f(i - 1)) * 8.0) * s;
            }
            let n = len - 1;
            out[n * out_stride] = -fwd0(f(n), f(n - 1), f(n - 2), f(n - 3), f(n - 4)) * s;
            out[(n - 1) * out_stride] = -fwd1(f(n), f(n - 1), f(n - 2), f(n - 3), f(n - 4)) * s;
        }
    }
}

/// Complex field on the tensor grid `xgrid × ygrid`, stored x-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneField {
    xgrid: RealGrid,
    ygrid: RealGrid,
    values: Vec<C64>,
}

impl PlaneField {
    pub fn new(xgrid: RealGrid, ygrid: RealGrid, values: Vec<C64>) -> Result<Self> {
        let expected = xgrid.len() * ygrid.len();
        if values.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { xgrid, ygrid, values })
    }

    pub fn zeros(xgrid: RealGrid, ygrid: RealGrid) -> Self {
        Self { xgrid, ygrid, values: vec![C64::new(0.0, 0.0); xgrid.len() * ygrid.len()] }
    }

    /// Evaluate `f(x, y)` at every grid point (in parallel).
    pub fn from_fn(xgrid: RealGrid, ygrid: RealGrid, f: impl Fn(f64, f64) -> C64 + Sync) -> Result<Self> {
        let ny = ygrid.len();
        let values = (0..xgrid.len() * ny)
            .into_par_iter()
            .map(|idx| f(xgrid.point(idx / ny), ygrid.point(idx % ny)))
            .collect();
        Self::new(xgrid, ygrid, values)
    }

    pub fn xgrid(&self) -> &RealGrid {
        &self.xgrid
    }

    pub fn ygrid(&self) -> &RealGrid {
        &self.ygrid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.ygrid.len() + j]
    }

    pub fn same_grids(&self, other: &Self) -> bool {
        self.xgrid == other.xgrid && self.ygrid == other.ygrid
    }

    /// Pointwise map `(x, y, F) -> G`.
    pub fn map(&self, f: impl Fn(f64, f64, C64) -> C64 + Sync) -> Result<Self> {
        let ny = self.ygrid.len();
        let values = self
            .values
            .par_iter()
            .enumerate()
            .map(|(idx, v)| f(self.xgrid.point(idx / ny), self.ygrid.point(idx % ny), *v))
            .collect();
        Self::new(self.xgrid, self.ygrid, values)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        if !self.same_grids(other) {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| x * a + y * b).collect();
        Self::new(self.xgrid, self.ygrid, values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// A finite-difference partial derivative together with the width of the
/// edge band computed by one-sided stencils.
#[derive(Debug, Clone, PartialEq)]
pub struct Partial {
    pub field: PlaneField,
    pub edge_margin: usize,
}

/// Partial derivative along `axis`: central differences inside, one-sided
/// stencils of the same order on the edges.
pub fn fd_partial_2d(field: &PlaneField, axis: Axis, order: FdOrder) -> Result<Partial> {
    let (nx, ny) = (field.xgrid.len(), field.ygrid.len());
    let axis_len = match axis {
        Axis::X => nx,
        Axis::Y => ny,
    };
    if axis_len < 5 {
        return Err(Error::GridTooSmall { len: axis_len, min: 5 });
    }
    let mut out = vec![C64::new(0.0, 0.0); nx * ny];
    match axis {
        Axis::X => {
            let h = field.xgrid.spacing();
            for j in 0..ny {
                fd_derivative_line(&field.values[j..], ny, nx, h, order, &mut out[j..], ny);
            }
        }
        Axis::Y => {
            let h = field.ygrid.spacing();
            for i in 0..nx {
                let row = i * ny..(i + 1) * ny;
                fd_derivative_line(&field.values[row.clone()], 1, ny, h, order, &mut out[row], 1);
            }
        }
    }
    Ok(Partial { field: PlaneField::new(field.xgrid, field.ygrid, out)?, edge_margin: order.half_width() })
}

/// `‖R‖₂ / ‖V‖₂` over the points at least `exclude_margin` samples away from
/// every edge; `+∞` when `V` vanishes there.
pub fn relative_residual_norm(r: &PlaneField, v: &PlaneField, exclude_margin: usize) -> Result<f64> {
    relative_residual_norm_masked(r, v, exclude_margin, |_, _| true)
}

/// As [`relative_residual_norm`], further restricted to points where
/// `keep(x, y)` holds.
pub fn relative_residual_norm_masked(
    r: &PlaneField,
    v: &PlaneField,
    exclude_margin: usize,
    keep: impl Fn(f64, f64) -> bool,
) -> Result<f64> {
    if !r.same_grids(v) {
        return Err(Error::GridMismatch);
    }
    let (nx, ny) = (r.xgrid.len(), r.ygrid.len());
    let mut num = Vec::new();
    let mut den = Vec::new();
    for i in exclude_margin..nx.saturating_sub(exclude_margin) {
        let x = r.xgrid.point(i);
        for j in exclude_margin..ny.saturating_sub(exclude_margin) {
            if !keep(x, r.ygrid.point(j)) {
                continue;
            }
            num.push(r.get(i, j).norm_sqr());
            den.push(v.get(i, j).norm_sqr());
        }
    }
    Ok(ratio_of_norms(&num, &den))
}

pub(crate) fn ratio_of_norms(num_sq: &[f64], den_sq: &[f64]) -> f64 {
    let den = pairwise_sum_real(den_sq);
    if den == 0.0 {
        return f64::INFINITY;
    }
    (pairwise_sum_real(num_sq) / den).sqrt()
}
