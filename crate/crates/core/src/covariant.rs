//! The induced wavelet transform `ṽ(x) = ⟨v, π(s(x)) f⟩` for a group
//! representation with a section `s: G/H → G`, its covariance properties
//! and integrated representations.
//!
//! Both groups implement [`Representation`]: the Heisenberg group over the
//! plane `H¹/Z` and SU(1,1) over the unit disk `SU(1,1)/K`. The vacuum `f` is
//! assumed to transform by a character under `H`, `π(h) f = χ(h) f`, so that
//! `ṽ(s(x) h) = conj(χ(h)) ṽ(x)`.
//!
//! Delta-derivative kernels pair as `∫ δ′(x) φ(x) dx = +φ′(0)`, so
//! `π(δ′_x) = d/dt π(s(t, 0))`. On images, `W_{π(k)f} v = R(k̄) W_f v` with the
//! conjugation coming from the second slot of the inner product; hence
//! `(π(k₁) − ir π(k₂)) f = 0` corresponds to `(R(k₁) + ir R(k₂)) ṽ = 0`.

use std::f64::consts::PI;
use std::fmt::Debug;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{
    h_inv, h_mul, op_d, op_m, plane_transform_rows, schrodinger_apply, shift_state, HeisenbergElement,
    PlanckParams, CR_MARGIN,
};
use crate::numerics::{
    fd_partial_2d, relative_residual_norm, Axis, FdOrder, GridFunction1D, HilbertVector, PlaneField, RealGrid, C64, I,
};
use crate::su11::{
    derived_rep_apply, disk_residual, dbar_disk, dw_disk, mock_rep_apply, su11_inv, su11_mul, CircleFunction,
    DerivedGenerator, DiskField, DiskGeometry, SU11Element, RESIDUAL_RHO,
};

/// Direction of a delta-derivative kernel in the coordinates of `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    X,
    Y,
}

/// A kernel on the homogeneous space.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    /// `δ′` along the first coordinate at the base point.
    DeltaDerivativeX,
    /// `δ′` along the second coordinate at the base point.
    DeltaDerivativeY,
    /// Values at the representation's sample points with quadrature weights.
    Sampled { values: Vec<C64>, weights: Vec<f64> },
}

impl Kernel {
    pub fn sampled(values: Vec<C64>, weights: Vec<f64>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::LengthMismatch { expected: values.len(), actual: weights.len() });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Kernel::Sampled { values, weights })
    }

    fn direction(&self) -> Option<Direction> {
        match self {
            Kernel::DeltaDerivativeX => Some(Direction::X),
            Kernel::DeltaDerivativeY => Some(Direction::Y),
            Kernel::Sampled { .. } => None,
        }
    }
}

/// A unitary representation together with a section over a sampled
/// homogeneous space.
pub trait Representation: Send + Sync {
    type Element: Copy + Send + Sync + Debug;
    type State: HilbertVector;
    type Point: Copy + Send + Sync + Debug;
    type Field: Clone + Send + Sync;

    fn identity(&self) -> Self::Element;
    fn mul(&self, g: &Self::Element, h: &Self::Element) -> Self::Element;
    fn inv(&self, g: &Self::Element) -> Self::Element;
    fn apply(&self, g: &Self::Element, f: &Self::State) -> Result<Self::State>;
    fn section(&self, x: Self::Point) -> Result<Self::Element>;
    /// Writes `g = s(x) h` and returns `x` with the vacuum character `χ(h)`.
    fn decompose(&self, g: &Self::Element) -> (Self::Point, C64);
    /// Sample points of the space grid, in field storage order.
    fn points(&self) -> Vec<Self::Point>;
    fn quadrature_weights(&self) -> Vec<f64>;
    fn field_from_values(&self, values: Vec<C64>) -> Result<Self::Field>;
    fn field_values<'a>(&self, field: &'a Self::Field) -> &'a [C64];
    /// Interpolated value with an error estimate; `None` when `x` lies
    /// outside the region the interpolant covers.
    fn interpolate(&self, field: &Self::Field, x: Self::Point) -> Option<(C64, f64)>;
    /// `π(δ′) f` along `dir`.
    fn derived(&self, dir: Direction, f: &Self::State) -> Result<Self::State>;
    /// The right-invariant derivative `R(δ′)` along `dir` on an image.
    fn right_derived(&self, dir: Direction, image: &Self::Field) -> Result<Self::Field>;
    /// Relative residual norm on the trusted part of the space grid.
    fn field_residual(&self, r: &Self::Field, v: &Self::Field) -> Result<f64>;

    /// The whole image `W_f v`; implementations may use a faster route.
    fn transform(&self, v: &Self::State, f: &Self::State) -> Result<Self::Field> {
        let values = wavelet_transform_at(v, f, self, &self.points())?;
        self.field_from_values(values)
    }
}

/// `⟨v, π(s(x)) f⟩` at the listed points.
pub fn wavelet_transform_at<R: Representation + ?Sized>(
    v: &R::State,
    f: &R::State,
    rep: &R,
    points: &[R::Point],
) -> Result<Vec<C64>> {
    points.par_iter().map(|&x| v.inner(&rep.apply(&rep.section(x)?, f)?)).collect()
}

/// `ṽ(x) = ⟨v, π(s(x)) f⟩` on the space grid, one group action per point.
pub fn wavelet_transform<R: Representation + ?Sized>(v: &R::State, f: &R::State, rep: &R) -> Result<R::Field> {
    rep.field_from_values(wavelet_transform_at(v, f, rep, &rep.points())?)
}

/// Interpolated values whose error estimate exceeds this are left out of
/// deviation metrics.
pub const INTERPOLATION_BOUND: f64 = 1e-8;

/// Outcome of a covariance check over a point set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceCheck {
    /// Maximum deviation over the evaluated points.
    pub deviation: f64,
    pub evaluated: usize,
    /// Points skipped because the interpolation estimate exceeded [`INTERPOLATION_BOUND`].
    pub excluded: usize,
}

/// Values of the image at `element_at(s(x))`, read from the sampled field
/// through the character relation. Entries are `None` where the
/// interpolation estimate is too large.
fn shifted_image<R: Representation + ?Sized>(
    rep: &R,
    field: &R::Field,
    points: &[R::Point],
    element_at: impl Fn(&R::Element) -> R::Element,
) -> Result<Vec<Option<C64>>> {
    let mut dropped = Vec::new();
    let mut values = Vec::with_capacity(points.len());
    for &x in points {
        let (x2, chi) = rep.decompose(&element_at(&rep.section(x)?));
        match rep.interpolate(field, x2) {
            Some((val, bound)) => {
                values.push((bound <= INTERPOLATION_BOUND * (1.0 + val.norm())).then(|| chi.conj() * val))
            }
            None => dropped.push(format!("{x:?}")),
        }
    }
    if !dropped.is_empty() {
        return Err(Error::Coverage { dropped });
    }
    Ok(values)
}

fn compare(lhs: &[C64], rhs: &[Option<C64>]) -> CovarianceCheck {
    let mut check = CovarianceCheck { deviation: 0.0, evaluated: 0, excluded: 0 };
    for (a, b) in lhs.iter().zip(rhs) {
        match b {
            Some(b) => {
                check.deviation = check.deviation.max((a - b).norm());
                check.evaluated += 1;
            }
            None => check.excluded += 1,
        }
    }
    check
}

fn require_evaluated<P: Debug>(check: CovarianceCheck, points: &[P]) -> Result<CovarianceCheck> {
    if check.evaluated == 0 && !points.is_empty() {
        return Err(Error::Coverage { dropped: points.iter().map(|p| format!("{p:?}")).collect() });
    }
    Ok(check)
}

/// `|W_f(π(g) v)(x) − ṽ(g⁻¹ s(x))|` over the listed points.
pub fn left_intertwining<R: Representation + ?Sized>(
    v: &R::State,
    f: &R::State,
    g: &R::Element,
    rep: &R,
    points: &[R::Point],
) -> Result<CovarianceCheck> {
    let field = rep.transform(v, f)?;
    let g_inv = rep.inv(g);
    let rhs = shifted_image(rep, &field, points, |s| rep.mul(&g_inv, s))?;
    let lhs = wavelet_transform_at(&rep.apply(g, v)?, f, rep, points)?;
    require_evaluated(compare(&lhs, &rhs), points)
}

/// `|W_{π(g)f} v(x) − ṽ(s(x) g)|` over the listed points.
pub fn right_covariance<R: Representation + ?Sized>(
    v: &R::State,
    f: &R::State,
    g: &R::Element,
    rep: &R,
    points: &[R::Point],
) -> Result<CovarianceCheck> {
    let field = rep.transform(v, f)?;
    let rhs = shifted_image(rep, &field, points, |s| rep.mul(s, g))?;
    let lhs = wavelet_transform_at(v, &rep.apply(g, f)?, rep, points)?;
    require_evaluated(compare(&lhs, &rhs), points)
}

/// Maximum deviation of [`left_intertwining`].
pub fn check_left_intertwining<R: Representation + ?Sized>(
    v: &R::State,
    f: &R::State,
    g: &R::Element,
    rep: &R,
    points: &[R::Point],
) -> Result<f64> {
    left_intertwining(v, f, g, rep, points).map(|c| c.deviation)
}

/// Maximum deviation of [`right_covariance`].
pub fn check_right_covariance<R: Representation + ?Sized>(
    v: &R::State,
    f: &R::State,
    g: &R::Element,
    rep: &R,
    points: &[R::Point],
) -> Result<f64> {
    right_covariance(v, f, g, rep, points).map(|c| c.deviation)
}

/// `π(k) f = ∫ k(x) π(s(x)) f dμ(x)`; delta-derivative kernels use the
/// derived representation in closed form.
pub fn integrated_representation<R: Representation + ?Sized>(k: &Kernel, f: &R::State, rep: &R) -> Result<R::State> {
    if let Some(dir) = k.direction() {
        return rep.derived(dir, f);
    }
    let Kernel::Sampled { values, weights } = k else { unreachable!() };
    let points = rep.points();
    if values.len() != points.len() {
        return Err(Error::LengthMismatch { expected: points.len(), actual: values.len() });
    }
    let zero = f.scaled(C64::new(0.0, 0.0));
    let active: Vec<usize> = (0..points.len()).filter(|&i| values[i] * weights[i] != C64::new(0.0, 0.0)).collect();
    let terms: Vec<R::State> = active
        .par_iter()
        .map(|&i| Ok(rep.apply(&rep.section(points[i])?, f)?.scaled(values[i] * weights[i])))
        .collect::<Result<_>>()?;
    pairwise_state_sum(&terms).map(|s| s.unwrap_or(zero))
}

fn pairwise_state_sum<S: HilbertVector>(terms: &[S]) -> Result<Option<S>> {
    let one = C64::new(1.0, 0.0);
    match terms.len() {
        0 => Ok(None),
        1 => Ok(Some(terms[0].clone())),
        n => {
            let (a, b) = terms.split_at(n / 2);
            let (a, b) = (pairwise_state_sum(a)?.unwrap(), pairwise_state_sum(b)?.unwrap());
            Ok(Some(a.combine(one, &b, one)?))
        }
    }
}

/// `(R(k₁) + ir R(k₂)) ṽ` for delta-derivative kernels.
pub fn right_integrated_on_image<R: Representation + ?Sized>(
    k1: &Kernel,
    k2: &Kernel,
    r: f64,
    image: &R::Field,
    rep: &R,
) -> Result<R::Field> {
    let (Some(d1), Some(d2)) = (k1.direction(), k2.direction()) else {
        return Err(Error::Unsupported("right action of sampled kernels on images".into()));
    };
    let a = rep.right_derived(d1, image)?;
    let b = rep.right_derived(d2, image)?;
    let values = rep.field_values(&a).iter().zip(rep.field_values(&b)).map(|(x, y)| x + I * r * y).collect();
    rep.field_from_values(values)
}

/// Weights of the `n`-point Lagrange interpolant on a uniform grid with the
/// stencil centred on `x`; `None` when the stencil leaves the grid.
fn lagrange_stencil(grid: &RealGrid, x: f64, n: usize) -> Option<(usize, Vec<f64>)> {
    let t = (x - grid.lo()) / grid.spacing();
    if !t.is_finite() {
        return None;
    }
    let base = t.floor() as i64 - (n as i64 / 2 - 1);
    if base < 0 || base as usize + n > grid.len() {
        return None;
    }
    let nearest = t.round();
    if (t - nearest).abs() < 1e-12 {
        let mut w = vec![0.0; n];
        w[nearest as usize - base as usize] = 1.0;
        return Some((base as usize, w));
    }
    let w = (0..n)
        .map(|k| {
            let tk = (base + k as i64) as f64;
            (0..n)
                .filter(|&m| m != k)
                .map(|m| {
                    let tm = (base + m as i64) as f64;
                    (t - tm) / (tk - tm)
                })
                .product()
        })
        .collect();
    Some((base as usize, w))
}

fn tensor_lagrange(field: &PlaneField, x: f64, y: f64, n: usize) -> Option<C64> {
    let (i0, wx) = lagrange_stencil(field.xgrid(), x, n)?;
    let (j0, wy) = lagrange_stencil(field.ygrid(), y, n)?;
    let mut total = C64::new(0.0, 0.0);
    for (a, wa) in wx.iter().enumerate() {
        if *wa == 0.0 {
            continue;
        }
        let row: C64 = wy.iter().enumerate().map(|(b, wb)| field.get(i0 + a, j0 + b) * *wb).sum();
        total += row * *wa;
    }
    Some(total)
}

/// The Schrödinger representation over the plane `(x, y)` with section
/// `s(x, y) = (0, x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergRep {
    pub params: PlanckParams,
    pub xgrid: RealGrid,
    pub ygrid: RealGrid,
}

impl HeisenbergRep {
    pub fn new(params: PlanckParams, xgrid: RealGrid, ygrid: RealGrid) -> Self {
        Self { params, xgrid, ygrid }
    }
}

impl Representation for HeisenbergRep {
    type Element = HeisenbergElement;
    type State = GridFunction1D;
    type Point = (f64, f64);
    type Field = PlaneField;

    fn identity(&self) -> HeisenbergElement {
        HeisenbergElement::IDENTITY
    }

    fn mul(&self, g: &HeisenbergElement, h: &HeisenbergElement) -> HeisenbergElement {
        h_mul(g, h)
    }

    fn inv(&self, g: &HeisenbergElement) -> HeisenbergElement {
        h_inv(g)
    }

    fn apply(&self, g: &HeisenbergElement, f: &GridFunction1D) -> Result<GridFunction1D> {
        schrodinger_apply(g, f, &self.params)
    }

    fn section(&self, (x, y): (f64, f64)) -> Result<HeisenbergElement> {
        Ok(HeisenbergElement::new(0.0, x, y))
    }

    fn decompose(&self, g: &HeisenbergElement) -> ((f64, f64), C64) {
        ((g.x, g.y), C64::from_polar(1.0, 2.0 * PI * self.params.hbar() * g.s))
    }

    fn points(&self) -> Vec<(f64, f64)> {
        let (xg, yg) = (self.xgrid, self.ygrid);
        (0..xg.len()).flat_map(|i| (0..yg.len()).map(move |j| (xg.point(i), yg.point(j)))).collect()
    }

    fn quadrature_weights(&self) -> Vec<f64> {
        let (wx, wy) = (self.xgrid.trapezoid_weights(), self.ygrid.trapezoid_weights());
        wx.iter().flat_map(|a| wy.iter().map(move |b| a * b)).collect()
    }

    fn field_from_values(&self, values: Vec<C64>) -> Result<PlaneField> {
        PlaneField::new(self.xgrid, self.ygrid, values)
    }

    fn field_values<'a>(&self, field: &'a PlaneField) -> &'a [C64] {
        field.values()
    }

    /// 8-point tensor Lagrange; the estimate is the distance to the 6-point value.
    fn interpolate(&self, field: &PlaneField, (x, y): (f64, f64)) -> Option<(C64, f64)> {
        let fine = tensor_lagrange(field, x, y, 8)?;
        let coarse = tensor_lagrange(field, x, y, 6)?;
        Some((fine, (fine - coarse).norm()))
    }

    /// `π(δ′_x) = 2πM`, `π(δ′_y) = D`.
    fn derived(&self, dir: Direction, f: &GridFunction1D) -> Result<GridFunction1D> {
        match dir {
            Direction::X => Ok(op_m(f)?.scaled(C64::new(2.0 * PI, 0.0))),
            Direction::Y => op_d(f, &self.params),
        }
    }

    /// `R(δ′_x) = ∂x + iπħy`, `R(δ′_y) = ∂y − iπħx`.
    fn right_derived(&self, dir: Direction, image: &PlaneField) -> Result<PlaneField> {
        let hbar = self.params.hbar();
        let (axis, sign) = match dir {
            Direction::X => (Axis::X, 1.0),
            Direction::Y => (Axis::Y, -1.0),
        };
        let d = fd_partial_2d(image, axis, FdOrder::Fourth)?.field;
        let ny = image.ygrid().len();
        let values = image
            .values()
            .iter()
            .zip(d.values())
            .enumerate()
            .map(|(idx, (f, df))| {
                let other = match dir {
                    Direction::X => image.ygrid().point(idx % ny),
                    Direction::Y => image.xgrid().point(idx / ny),
                };
                df + I * (sign * PI * hbar * other) * f
            })
            .collect();
        PlaneField::new(*image.xgrid(), *image.ygrid(), values)
    }

    fn field_residual(&self, r: &PlaneField, v: &PlaneField) -> Result<f64> {
        relative_residual_norm(r, v, CR_MARGIN)
    }

    /// One band-limited shift of the vacuum per `y` row.
    fn transform(&self, v: &GridFunction1D, f: &GridFunction1D) -> Result<PlaneField> {
        if v.grid() != f.grid() {
            return Err(Error::GridMismatch);
        }
        let hbar = self.params.hbar();
        plane_transform_rows(v, &self.params, &self.xgrid, &self.ygrid, |y| {
            Ok(shift_state(f, hbar * y)?.values().iter().map(|c| c.conj()).collect())
        })
    }
}

/// The mock discrete representation over the disk with section `s(w)`.
/// `charge` is the weight `m` of the vacuum under `K`:
/// `π(e^{φZ}) f = e^{−imφ} f` (`m = 1` for `f₊`, `−1` for `f₋`, `2n + 1` for `zⁿ`).
#[derive(Debug, Clone, PartialEq)]
pub struct Su11Rep {
    pub geometry: Arc<DiskGeometry>,
    pub charge: i64,
}

impl Su11Rep {
    pub fn new(geometry: Arc<DiskGeometry>, charge: i64) -> Self {
        Self { geometry, charge }
    }
}

impl Default for Su11Rep {
    fn default() -> Self {
        Self { geometry: Arc::new(DiskGeometry::default()), charge: 1 }
    }
}

impl Representation for Su11Rep {
    type Element = SU11Element;
    type State = CircleFunction;
    type Point = C64;
    type Field = DiskField;

    fn identity(&self) -> SU11Element {
        SU11Element::IDENTITY
    }

    fn mul(&self, g: &SU11Element, h: &SU11Element) -> SU11Element {
        su11_mul(g, h)
    }

    fn inv(&self, g: &SU11Element) -> SU11Element {
        su11_inv(g)
    }

    fn apply(&self, g: &SU11Element, f: &CircleFunction) -> Result<CircleFunction> {
        mock_rep_apply(g, f)
    }

    fn section(&self, w: C64) -> Result<SU11Element> {
        SU11Element::section(w)
    }

    fn decompose(&self, g: &SU11Element) -> (C64, C64) {
        let (w, phi) = g.decompose();
        (w, C64::from_polar(1.0, -(self.charge as f64) * phi))
    }

    fn points(&self) -> Vec<C64> {
        self.geometry.points()
    }

    /// Area measure `ρ dρ dθ`: trapezoid on the radii, uniform in angle.
    fn quadrature_weights(&self) -> Vec<f64> {
        let r = self.geometry.radii();
        let k = r.len();
        let nt = self.geometry.n_theta();
        let dtheta = 2.0 * PI / nt as f64;
        let radial: Vec<f64> = (0..k)
            .map(|i| {
                let left = if i > 0 { r[i] - r[i - 1] } else { 0.0 };
                let right = if i + 1 < k { r[i + 1] - r[i] } else { 0.0 };
                0.5 * (left + right) * r[i]
            })
            .collect();
        radial.iter().flat_map(|w| std::iter::repeat(w * dtheta).take(nt)).collect()
    }

    fn field_from_values(&self, values: Vec<C64>) -> Result<DiskField> {
        DiskField::new(self.geometry.clone(), values)
    }

    fn field_values<'a>(&self, field: &'a DiskField) -> &'a [C64] {
        field.values()
    }

    fn interpolate(&self, field: &DiskField, w: C64) -> Option<(C64, f64)> {
        field.interpolate_with_bound(w)
    }

    /// `π(δ′_x) = 2π_B`, `π(δ′_y) = −2π_A` (from `∂u s(u) = 2B`, `∂v s(iv) = −2A`).
    fn derived(&self, dir: Direction, f: &CircleFunction) -> Result<CircleFunction> {
        match dir {
            Direction::X => Ok(derived_rep_apply(DerivedGenerator::B, f)?.scaled(C64::new(2.0, 0.0))),
            Direction::Y => Ok(derived_rep_apply(DerivedGenerator::A, f)?.scaled(C64::new(-2.0, 0.0))),
        }
    }

    /// `R(δ′_x) = 2R_B`, `R(δ′_y) = −2R_A` with
    /// `R_B = (im/2) Im w + ((1−|w|²)/2)(∂_w + ∂_w̄)` and
    /// `R_A = (im/2) Re w + ((1−|w|²)/2)(−i∂_w + i∂_w̄)`.
    fn right_derived(&self, dir: Direction, image: &DiskField) -> Result<DiskField> {
        let dw = dw_disk(image)?;
        let dwb = dbar_disk(image)?;
        let m = self.charge as f64;
        let values = self
            .geometry
            .points()
            .iter()
            .zip(image.values())
            .zip(dw.values().iter().zip(dwb.values()))
            .map(|((w, f), (a, b))| {
                let s = 1.0 - w.norm_sqr();
                match dir {
                    Direction::X => 2.0 * (I * (0.5 * m * w.im) * f + 0.5 * s * (a + b)),
                    Direction::Y => -2.0 * (I * (0.5 * m * w.re) * f + 0.5 * s * (-I * a + I * b)),
                }
            })
            .collect();
        DiskField::new(self.geometry.clone(), values)
    }

    fn field_residual(&self, r: &DiskField, v: &DiskField) -> Result<f64> {
        disk_residual(r, v, RESIDUAL_RHO)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{fsb_transform, vacuum};
    use crate::su11::{hardy_transform, Generator};

    fn small_heisenberg() -> HeisenbergRep {
        let g = RealGrid::symmetric(2.0, 129).unwrap();
        HeisenbergRep::new(PlanckParams::default(), g, g)
    }

    fn test_signal() -> GridFunction1D {
        GridFunction1D::from_fn(RealGrid::state_default(), |q| {
            C64::from_polar((-1.5 * (q - 0.3) * (q - 0.3)).exp(), 0.7 * q)
        })
        .unwrap()
    }

    #[test]
    fn identity_evaluation_gives_norm_squared() {
        let rep = small_heisenberg();
        let f = test_signal();
        let v = wavelet_transform_at(&f, &f, &rep, &[(0.0, 0.0)]).unwrap();
        assert!((v[0] - C64::new(f.norm().unwrap().powi(2), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn generic_matches_fsb() {
        let rep = small_heisenberg();
        let f = vacuum(RealGrid::state_default(), &rep.params).unwrap();
        let v = test_signal();
        let generic = wavelet_transform(&v, &f, &rep).unwrap();
        let fast = fsb_transform(&v, &rep.params, &rep.xgrid, &rep.ygrid).unwrap();
        let rows = rep.transform(&v, &f).unwrap();
        for k in 0..generic.values().len() {
            assert!((generic.values()[k] - fast.values()[k]).norm() < 1e-10);
            assert!((rows.values()[k] - fast.values()[k]).norm() < 1e-10);
        }
    }

    #[test]
    fn generic_matches_hardy_with_metric_factor() {
        let geometry = Arc::new(DiskGeometry::new(12, 64, 0.9).unwrap());
        let rep = Su11Rep::new(geometry.clone(), 1);
        let n = 512;
        let v = CircleFunction::from_modes(n, &[(0, C64::new(0.4, 0.0)), (2, C64::new(0.0, 1.0)), (-1, C64::new(0.3, 0.3))]).unwrap();
        let f = CircleFunction::f_plus(n).unwrap();
        let generic = wavelet_transform(&v, &f, &rep).unwrap();
        let hardy = hardy_transform(&v, &geometry).unwrap();
        let pts = geometry.points();
        for (k, w) in pts.iter().enumerate() {
            let scaled = hardy.values()[k] * (1.0 - w.norm_sqr());
            assert!((generic.values()[k] - scaled).norm() < 1e-10);
        }
    }

    #[test]
    fn orthogonal_vacuum_gives_zero_field() {
        let rep = Su11Rep::new(Arc::new(DiskGeometry::new(8, 32, 0.8).unwrap()), 1);
        let v = CircleFunction::monomial(256, -3).unwrap();
        let field = wavelet_transform(&v, &CircleFunction::f_plus(256).unwrap(), &rep).unwrap();
        assert!(field.max_abs() < 1e-12);
    }

    #[test]
    fn covariance_at_identity() {
        let rep = small_heisenberg();
        let f = vacuum(RealGrid::state_default(), &rep.params).unwrap();
        let v = test_signal();
        let pts = [(0.5, -0.25), (-1.0, 0.75)];
        assert!(check_left_intertwining(&v, &f, &rep.identity(), &rep, &pts).unwrap() < 1e-14);
        assert!(check_right_covariance(&v, &f, &rep.identity(), &rep, &pts).unwrap() < 1e-14);
    }

    #[test]
    fn heisenberg_covariance_small_elements() {
        let rep = small_heisenberg();
        let f = vacuum(RealGrid::state_default(), &rep.params).unwrap();
        let v = test_signal();
        let pts = [(0.3, -0.2), (-0.6, 0.4), (0.0, 0.9)];
        let g = HeisenbergElement::new(0.13, 0.21, -0.17);
        let c = left_intertwining(&v, &f, &g, &rep, &pts).unwrap();
        assert_eq!(c.excluded, 0);
        assert!(c.deviation < 1e-6);
        let g = HeisenbergElement::new(0.0, 0.1, 0.0);
        assert!(check_right_covariance(&v, &f, &g, &rep, &pts).unwrap() < 1e-6);
    }

    #[test]
    fn coverage_is_enforced() {
        let rep = small_heisenberg();
        let f = vacuum(RealGrid::state_default(), &rep.params).unwrap();
        let g = HeisenbergElement::new(0.0, 0.5, 0.0);
        let err = check_left_intertwining(&test_signal(), &f, &g, &rep, &[(0.0, 0.0), (-1.7, 0.0)]).unwrap_err();
        match err {
            Error::Coverage { dropped } => assert_eq!(dropped.len(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn isotropy_acts_by_character() {
        let rep = small_heisenberg();
        let f = vacuum(RealGrid::state_default(), &rep.params).unwrap();
        let v = test_signal();
        let s = 0.11;
        let h = HeisenbergElement::new(s, 0.0, 0.0);
        let pts = [(0.25, 0.5), (-0.5, 0.0), (1.0, -1.0)];
        let base = wavelet_transform_at(&v, &f, &rep, &pts).unwrap();
        let dev = check_right_covariance(&v, &f, &h, &rep, &pts).unwrap();
        assert!(dev < 1e-12);
        let chi = C64::from_polar(1.0, 2.0 * PI * s);
        let moved = wavelet_transform_at(&v, &rep.apply(&h, &f).unwrap(), &rep, &pts).unwrap();
        let pattern = (chi - 1.0).norm() * base.iter().map(|b| b.norm()).fold(0.0, f64::max);
        let dev = moved.iter().zip(&base).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!((dev - pattern).abs() < 1e-12);
    }

    #[test]
    fn su11_rotation_covariance() {
        let rep = Su11Rep::default();
        let f = CircleFunction::f_plus(256).unwrap();
        let v = CircleFunction::from_modes(256, &[(0, C64::new(1.0, 0.0)), (1, C64::new(0.2, -0.5)), (3, C64::new(0.0, 0.4))]).unwrap();
        let g = SU11Element::exp(Generator::Z, 0.3);
        let pts = [C64::new(0.2, 0.1), C64::new(-0.4, 0.3)];
        assert!(check_left_intertwining(&v, &f, &g, &rep, &pts).unwrap() < 1e-6);
        assert!(check_right_covariance(&v, &f, &g, &rep, &pts).unwrap() < 1e-6);
    }

    #[test]
    fn derived_kernel_matches_group_derivative() {
        let rep = small_heisenberg();
        let f = test_signal();
        let t = 1e-4;
        let plus = rep.apply(&HeisenbergElement::new(0.0, t, 0.0), &f).unwrap();
        let minus = rep.apply(&HeisenbergElement::new(0.0, -t, 0.0), &f).unwrap();
        let fd = plus.combine(C64::new(0.5 / t, 0.0), &minus, C64::new(-0.5 / t, 0.0)).unwrap();
        let exact = integrated_representation(&Kernel::DeltaDerivativeX, &f, &rep).unwrap();
        assert!(fd.max_abs_diff(&exact).unwrap() < 1e-6 * exact.max_abs());
    }

    #[test]
    fn sampled_bump_approximates_delta() {
        let eps = 0.003;
        let g = RealGrid::symmetric(6.0 * eps, 41).unwrap();
        let rep = HeisenbergRep::new(PlanckParams::default(), g, g);
        let f = test_signal();
        let bump: Vec<C64> = rep
            .points()
            .iter()
            .map(|(x, y)| C64::new((-(x * x + y * y) / (2.0 * eps * eps)).exp() / (2.0 * PI * eps * eps), 0.0))
            .collect();
        let weights = rep.quadrature_weights();
        let mass: C64 = bump.iter().zip(&weights).map(|(b, w)| b * w).sum();
        let out = integrated_representation(&Kernel::sampled(bump, weights).unwrap(), &f, &rep).unwrap();
        let err = out.combine(C64::new(1.0, 0.0), &f, -mass).unwrap().norm().unwrap();
        assert!(err < 1e-4 * f.norm().unwrap());
        let zero = Kernel::sampled(vec![C64::new(0.0, 0.0); rep.points().len()], rep.quadrature_weights()).unwrap();
        assert_eq!(integrated_representation(&zero, &f, &rep).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn right_operators_annihilate_vacuum_images() {
        let rep = HeisenbergRep::new(PlanckParams::default(), RealGrid::plane_default(), RealGrid::plane_default());
        let f = vacuum(RealGrid::state_default(), &rep.params).unwrap();
        let image = rep.transform(&test_signal(), &f).unwrap();
        let r = 2.0 * PI / (rep.params.hbar() * rep.params.c());
        let out = right_integrated_on_image(&Kernel::DeltaDerivativeX, &Kernel::DeltaDerivativeY, r, &image, &rep).unwrap();
        assert!(rep.field_residual(&out, &image).unwrap() < 1e-4);

        let su = Su11Rep::default();
        let fp = CircleFunction::f_plus(256).unwrap();
        let v = CircleFunction::from_modes(256, &[(0, C64::new(0.5, 0.0)), (2, C64::new(0.1, 0.8))]).unwrap();
        let image = su.transform(&v, &fp).unwrap();
        let out = right_integrated_on_image(&Kernel::DeltaDerivativeX, &Kernel::DeltaDerivativeY, 1.0, &image, &su).unwrap();
        assert!(su.field_residual(&out, &image).unwrap() < 1e-4);
        let zero = su.field_from_values(vec![C64::new(0.0, 0.0); su.points().len()]).unwrap();
        let out = right_integrated_on_image(&Kernel::DeltaDerivativeX, &Kernel::DeltaDerivativeY, 1.0, &zero, &su).unwrap();
        assert_eq!(out.max_abs(), 0.0);
    }
}
