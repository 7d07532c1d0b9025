//! The Heisenberg group, its Schrödinger representation on `L²(R)`, the
//! coordinate and momentum operators, the Fock–Segal–Bargmann transform and
//! its Cauchy–Riemann annihilator.
//!
//! Conventions (fixed so that the group law, the representation property
//! and the annihilation identity all hold at once):
//!
//! ```text
//! (s,x,y)·(s',x',y') = (s+s'+½(xy'−x'y), x+x', y+y')
//! [π(s,x,y) f](q)    = exp(2πiħ(s − xy/2) − 2πi x q) · f(q + ħy)
//! M = −iq = dπ/dt (0,t/2π,0),   D = ħ d/dq = dπ/dt (0,0,t)
//! ṽ(x,y)             = ⟨v, π(0,x,y) f⟩ = ∫ v(q) e^{πiħxy + 2πixq} e^{−c(q+ħy)²/2} dq
//! annihilator        = (ħ/2)(2πx + iħc y) + (ħc/2π)∂x + i∂y
//! ```
//!
//! The centre acts by `e^{2πiħs}`, so images on the group satisfy
//! `∂s = −2πiħ`. For `ħ = 1, c = 2π` the annihilator is `πz + 2∂_z̄` and
//! `e^{π|z|²/2} ṽ` is holomorphic.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    fd_partial_2d, pairwise_sum, periodic_shift, relative_residual_norm, relative_residual_norm_masked,
    spectral_derivative, Axis, FdOrder, GridFunction1D, PlaneField, RealGrid, C64, DEFAULT_DECAY_THRESHOLD, I,
};

/// Edge band excluded from residual norms of FD-differentiated fields.
pub const CR_MARGIN: usize = 2;

/// Gaussian window value at the state-grid edges above which the FSB
/// quadrature is refused.
pub const WINDOW_EDGE_TOLERANCE: f64 = 1e-12;

const WINDOW_CUTOFF: f64 = 1e-40;
const PHASE_REANCHOR: usize = 32;
const MAX_LOG_WEIGHT: f64 = 690.0;

/// An element `(s, x, y)` of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergElement {
    pub s: f64,
    pub x: f64,
    pub y: f64,
}

impl HeisenbergElement {
    pub const IDENTITY: Self = Self { s: 0.0, x: 0.0, y: 0.0 };

    pub fn new(s: f64, x: f64, y: f64) -> Self {
        Self { s, x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.s.is_finite() && self.x.is_finite() && self.y.is_finite()
    }
}

/// Planck constant `ħ` and Gaussian width `c` of the vacuum `e^{−cq²/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanckParams {
    hbar: f64,
    c: f64,
}

impl PlanckParams {
    pub fn new(hbar: f64, c: f64) -> Result<Self> {
        if !hbar.is_finite() || hbar == 0.0 {
            return Err(Error::InvalidParameter(format!("hbar must be finite and nonzero, got {hbar}")));
        }
        if !c.is_finite() || c <= 0.0 {
            return Err(Error::InvalidParameter(format!("c must be finite and positive, got {c}")));
        }
        Ok(Self { hbar, c })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

impl Default for PlanckParams {
    fn default() -> Self {
        Self { hbar: 1.0, c: 2.0 * PI }
    }
}

pub fn h_mul(g: &HeisenbergElement, h: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement {
        s: g.s + h.s + 0.5 * (g.x * h.y - h.x * g.y),
        x: g.x + h.x,
        y: g.y + h.y,
    }
}

pub fn h_inv(g: &HeisenbergElement) -> HeisenbergElement {
    HeisenbergElement { s: -g.s, x: -g.x, y: -g.y }
}

/// `q ↦ f(q + shift)` by band-limited interpolation, refusing shifts that
/// wrap non-negligible mass around the periodic extension.
pub(crate) fn shift_state(f: &GridFunction1D, shift: f64) -> Result<GridFunction1D> {
    if shift == 0.0 {
        return Ok(f.clone());
    }
    let grid = *f.grid();
    let peak = f.max_abs();
    if peak == 0.0 {
        return Ok(f.clone());
    }
    if shift.abs() >= grid.period() {
        return Err(Error::DomainOverflow { shift, edge_ratio: 1.0 });
    }
    let edge = f
        .values()
        .iter()
        .enumerate()
        .filter(|(i, _)| {
            let q = grid.point(*i);
            if shift > 0.0 {
                q <= grid.lo() + shift
            } else {
                q >= grid.hi() + shift
            }
        })
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max);
    let edge_ratio = edge / peak;
    if edge_ratio >= DEFAULT_DECAY_THRESHOLD {
        return Err(Error::DomainOverflow { shift, edge_ratio });
    }
    let shifted = periodic_shift(f.period_samples(), grid.period(), shift);
    GridFunction1D::from_period(grid, shifted)
}

/// `[π(g) f](q) = exp(2πiħ(s − xy/2) − 2πixq) f(q + ħy)`.
pub fn schrodinger_apply(g: &HeisenbergElement, f: &GridFunction1D, p: &PlanckParams) -> Result<GridFunction1D> {
    if !g.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite group element {g:?}")));
    }
    let shifted = shift_state(f, p.hbar * g.y)?;
    let central = 2.0 * PI * p.hbar * (g.s - 0.5 * g.x * g.y);
    shifted.map(|q, v| v * C64::from_polar(1.0, central - 2.0 * PI * g.x * q))
}

/// Coordinate operator `M = −iq`.
pub fn op_m(f: &GridFunction1D) -> Result<GridFunction1D> {
    f.map(|q, v| -I * q * v)
}

/// Momentum operator `D = ħ d/dq`.
pub fn op_d(f: &GridFunction1D, p: &PlanckParams) -> Result<GridFunction1D> {
    let d = spectral_derivative(f)?;
    d.function.map(|_, v| v * p.hbar)
}

/// The vacuum `e^{−cq²/2}`.
pub fn vacuum(grid: RealGrid, p: &PlanckParams) -> Result<GridFunction1D> {
    let c = p.c;
    GridFunction1D::from_real_fn(grid, |q| (-0.5 * c * q * q).exp())
}

/// First excited state `q e^{−cq²/2}`, used as the non-minimal control.
pub fn hermite1_vacuum(grid: RealGrid, p: &PlanckParams) -> Result<GridFunction1D> {
    let c = p.c;
    GridFunction1D::from_real_fn(grid, |q| q * (-0.5 * c * q * q).exp())
}

fn check_window(state: &RealGrid, ygrid: &RealGrid, p: &PlanckParams) -> Result<()> {
    for y in [ygrid.lo(), ygrid.hi()] {
        let centre = -p.hbar * y;
        let dist = (state.hi() - centre).min(centre - state.lo());
        let edge_value = if dist <= 0.0 { 1.0 } else { (-0.5 * p.c * dist * dist).exp() };
        if edge_value > WINDOW_EDGE_TOLERANCE {
            return Err(Error::QuadratureOverflow { centre, edge_value });
        }
    }
    Ok(())
}

/// Fock–Segal–Bargmann transform with the Gaussian vacuum, by direct
/// trapezoidal quadrature at every `(x, y)`.
pub fn fsb_transform(v: &GridFunction1D, p: &PlanckParams, xg: &RealGrid, yg: &RealGrid) -> Result<PlaneField> {
    check_window(v.grid(), yg, p)?;
    let c = p.c;
    fsb_transform_with_window(v, p, xg, yg, |u| (-0.5 * c * u * u).exp())
}

/// As [`fsb_transform`] with the real vacuum `window(u)` in place of
/// `e^{−cu²/2}`; the caller is responsible for its decay at the grid edges.
pub fn fsb_transform_with_window(
    v: &GridFunction1D,
    p: &PlanckParams,
    xg: &RealGrid,
    yg: &RealGrid,
    window: impl Fn(f64) -> f64 + Sync,
) -> Result<PlaneField> {
    let q = v.grid().points();
    let hbar = p.hbar;
    plane_transform_rows(v, p, xg, yg, |y| Ok(q.iter().map(|q| C64::new(window(q + hbar * y), 0.0)).collect()))
}

/// `⟨v, π(0,x,y) f⟩` over a plane grid, where `row(y)` returns the
/// conjugated vacuum `q ↦ conj f(q + ħy)` on the state grid.
///
/// Per row, terms below `1e−40` of the row peak are skipped and the phase
/// `e^{2πixq_j}` is advanced by recurrence, re-anchored every 32 steps.
pub(crate) fn plane_transform_rows(
    v: &GridFunction1D,
    p: &PlanckParams,
    xg: &RealGrid,
    yg: &RealGrid,
    row: impl Fn(f64) -> Result<Vec<C64>> + Sync,
) -> Result<PlaneField> {
    let state = *v.grid();
    let q = state.points();
    let w = state.trapezoid_weights();
    let h = state.spacing();
    let hbar = p.hbar;

    let columns: Vec<Vec<C64>> = (0..yg.len())
        .into_par_iter()
        .map(|j| -> Result<Vec<C64>> {
            let y = yg.point(j);
            let conj_vacuum = row(y)?;
            if conj_vacuum.len() != q.len() {
                return Err(Error::LengthMismatch { expected: q.len(), actual: conj_vacuum.len() });
            }
            let weighted: Vec<C64> =
                v.values().iter().zip(&conj_vacuum).zip(&w).map(|((val, f), w)| val * f * *w).collect();
            let peak = weighted.iter().map(|t| t.norm()).fold(0.0, f64::max);
            let cutoff = WINDOW_CUTOFF * peak;
            let start = weighted.iter().position(|t| t.norm() > cutoff);
            let end = weighted.iter().rposition(|t| t.norm() > cutoff);
            let (start, end) = match (start, end) {
                (Some(s), Some(e)) if peak > 0.0 => (s, e + 1),
                _ => return Ok(vec![C64::new(0.0, 0.0); xg.len()]),
            };
            let active = &weighted[start..end];
            let mut terms = vec![C64::new(0.0, 0.0); active.len()];
            Ok((0..xg.len())
                .map(|i| {
                    let x = xg.point(i);
                    let step = C64::from_polar(1.0, 2.0 * PI * x * h);
                    let mut phase = C64::new(1.0, 0.0);
                    for (k, (t, a)) in terms.iter_mut().zip(active).enumerate() {
                        if k % PHASE_REANCHOR == 0 {
                            phase = C64::from_polar(1.0, 2.0 * PI * x * q[start + k]);
                        }
                        *t = a * phase;
                        phase *= step;
                    }
                    pairwise_sum(&terms) * C64::from_polar(1.0, PI * hbar * x * y)
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let ny = yg.len();
    let mut values = vec![C64::new(0.0, 0.0); xg.len() * ny];
    for (j, col) in columns.into_iter().enumerate() {
        for (i, val) in col.into_iter().enumerate() {
            values[i * ny + j] = val;
        }
    }
    PlaneField::new(*xg, *yg, values)
}

/// `[(ħ/2)(2πx + iħcy) + (ħc/2π)∂x + i∂y] F` with fourth-order differences.
pub fn cr_operator(field: &PlaneField, p: &PlanckParams) -> Result<PlaneField> {
    let dx = fd_partial_2d(field, Axis::X, FdOrder::Fourth)?.field;
    let dy = fd_partial_2d(field, Axis::Y, FdOrder::Fourth)?.field;
    let (hbar, c) = (p.hbar, p.c);
    let ny = field.ygrid().len();
    let values = field
        .values()
        .iter()
        .enumerate()
        .map(|(idx, f)| {
            let x = field.xgrid().point(idx / ny);
            let y = field.ygrid().point(idx % ny);
            let mult = C64::new(PI * hbar * x, 0.5 * hbar * hbar * c * y);
            mult * f + dx.values()[idx] * (hbar * c / (2.0 * PI)) + I * dy.values()[idx]
        })
        .collect();
    PlaneField::new(*field.xgrid(), *field.ygrid(), values)
}

/// Interior relative residual of [`cr_operator`].
pub fn annihilation_residual(field: &PlaneField, p: &PlanckParams) -> Result<f64> {
    relative_residual_norm(&cr_operator(field, p)?, field, CR_MARGIN)
}

/// `V(x, y) = e^{π(x²+y²)/2} F(x, y)`.
pub fn weighted_image(field: &PlaneField) -> Result<PlaneField> {
    let radius = field.xgrid().max_abs().hypot(field.ygrid().max_abs());
    if 0.5 * PI * radius * radius > MAX_LOG_WEIGHT {
        return Err(Error::WeightOverflow { radius });
    }
    field.map(|x, y, f| f * (0.5 * PI * (x * x + y * y)).exp())
}

/// `∂_z̄ F = ½(∂x + i∂y) F` with fourth-order differences.
pub fn dbar(field: &PlaneField) -> Result<PlaneField> {
    let dx = fd_partial_2d(field, Axis::X, FdOrder::Fourth)?.field;
    let dy = fd_partial_2d(field, Axis::Y, FdOrder::Fourth)?.field;
    dx.combine(C64::new(0.5, 0.0), &dy, C64::new(0.0, 0.5))
}

/// Relative `∂_z̄` residual of the weighted image over the interior points
/// with `x² + y² ≤ radius²`.
///
/// The weight grows like `e^{π r²/2}` and amplifies quadrature rounding in
/// `F` by the same factor, so the radius has to stay moderate (3 keeps the
/// amplified noise near 1e-9).
pub fn weighted_dbar_residual(field: &PlaneField, radius: f64) -> Result<f64> {
    let weighted = weighted_image(field)?;
    let d = dbar(&weighted)?;
    relative_residual_norm_masked(&d, &weighted, CR_MARGIN, |x, y| x * x + y * y <= radius * radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{inner_product, HilbertVector};

    fn gaussian(grid: RealGrid) -> GridFunction1D {
        GridFunction1D::from_real_fn(grid, |q| (-q * q).exp()).unwrap()
    }

    #[test]
    fn group_law_examples() {
        let g = HeisenbergElement::new(0.3, -1.2, 2.5);
        assert_eq!(h_mul(&HeisenbergElement::IDENTITY, &g), g);
        let x = HeisenbergElement::new(0.0, 1.0, 0.0);
        let y = HeisenbergElement::new(0.0, 0.0, 1.0);
        assert_eq!(h_mul(&x, &y), HeisenbergElement::new(0.5, 1.0, 1.0));
        assert_eq!(h_mul(&y, &x), HeisenbergElement::new(-0.5, 1.0, 1.0));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(h_inv(&HeisenbergElement::IDENTITY), HeisenbergElement::new(-0.0, -0.0, -0.0));
        assert_eq!(h_inv(&HeisenbergElement::new(1.0, 2.0, 3.0)), HeisenbergElement::new(-1.0, -2.0, -3.0));
        let g = HeisenbergElement::new(0.5, 1.0, 1.0);
        let e = h_mul(&g, &h_inv(&g));
        assert_eq!((e.s, e.x, e.y), (0.0, 0.0, 0.0));
    }

    #[test]
    fn planck_params_validate() {
        assert!(PlanckParams::new(0.0, 1.0).is_err());
        assert!(PlanckParams::new(1.0, 0.0).is_err());
        assert!(PlanckParams::new(-1.0, 2.0).is_ok());
    }

    #[test]
    fn centre_acts_by_character() {
        let p = PlanckParams::default();
        let f = gaussian(RealGrid::state_default());
        let out = schrodinger_apply(&HeisenbergElement::new(0.37, 0.0, 0.0), &f, &p).unwrap();
        let chi = C64::from_polar(1.0, 2.0 * PI * 0.37);
        assert!(out.max_abs_diff(&f.scaled(chi)).unwrap() < 1e-15);
    }

    #[test]
    fn y_shift_translates_gaussian() {
        let p = PlanckParams::default();
        let f = gaussian(RealGrid::state_default());
        let y0 = 0.731;
        let out = schrodinger_apply(&HeisenbergElement::new(0.0, 0.0, y0), &f, &p).unwrap();
        let expected = GridFunction1D::from_real_fn(*f.grid(), |q| (-(q + y0) * (q + y0)).exp()).unwrap();
        assert!(out.max_abs_diff(&expected).unwrap() < 1e-8);
    }

    #[test]
    fn large_shift_overflows() {
        let p = PlanckParams::default();
        let f = gaussian(RealGrid::state_default());
        let err = schrodinger_apply(&HeisenbergElement::new(0.0, 0.0, 7.5), &f, &p).unwrap_err();
        assert!(matches!(err, Error::DomainOverflow { .. }));
    }

    #[test]
    fn coordinate_operator() {
        let g = RealGrid::new(-1.0, 1.0, 33).unwrap();
        let one = GridFunction1D::from_real_fn(g, |_| 1.0).unwrap();
        let m = op_m(&one).unwrap();
        for (i, v) in m.values().iter().enumerate() {
            assert_eq!(*v, -I * g.point(i));
        }
    }

    #[test]
    fn momentum_operator_and_commutator() {
        let p = PlanckParams::new(1.0, 1.0).unwrap();
        let f = gaussian(RealGrid::state_default());
        let d = op_d(&f, &p).unwrap();
        let expected = f.map(|q, v| v * (-2.0 * q)).unwrap();
        assert!(d.max_abs_diff(&expected).unwrap() < 1e-8);

        let p = PlanckParams::new(0.7, 1.0).unwrap();
        let md = op_m(&op_d(&f, &p).unwrap()).unwrap();
        let dm = op_d(&op_m(&f).unwrap(), &p).unwrap();
        let comm = md.combine(C64::new(1.0, 0.0), &dm, C64::new(-1.0, 0.0)).unwrap();
        let target = f.scaled(I * 0.7);
        assert!(comm.max_abs_diff(&target).unwrap() < 1e-7 * target.max_abs());
    }

    #[test]
    fn fsb_vacuum_at_origin() {
        let p = PlanckParams::default();
        let v = vacuum(RealGrid::state_default(), &p).unwrap();
        let g = RealGrid::symmetric(1.0, 9).unwrap();
        let field = fsb_transform(&v, &p, &g, &g).unwrap();
        assert!((field.get(4, 4) - C64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn fsb_of_zero_is_zero() {
        let p = PlanckParams::default();
        let v = GridFunction1D::zeros(RealGrid::state_default());
        let g = RealGrid::symmetric(2.0, 17).unwrap();
        assert_eq!(fsb_transform(&v, &p, &g, &g).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn fsb_refuses_window_off_grid() {
        let p = PlanckParams::default();
        let v = vacuum(RealGrid::symmetric(3.0, 512).unwrap(), &p).unwrap();
        let g = RealGrid::symmetric(4.0, 17).unwrap();
        assert!(matches!(fsb_transform(&v, &p, &g, &g), Err(Error::QuadratureOverflow { .. })));
    }

    #[test]
    fn fsb_respects_cauchy_schwarz() {
        let p = PlanckParams::default();
        let grid = RealGrid::state_default();
        let v = GridFunction1D::from_fn(grid, |q| C64::new((-(q - 0.4) * (q - 0.4)).exp(), 0.3 * q * (-q * q).exp())).unwrap();
        let bound = v.norm().unwrap() * vacuum(grid, &p).unwrap().norm().unwrap();
        let g = RealGrid::symmetric(3.0, 25).unwrap();
        let field = fsb_transform(&v, &p, &g, &g).unwrap();
        assert!(field.max_abs() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn cr_operator_on_constant() {
        let p = PlanckParams::new(1.3, 0.9).unwrap();
        let g = RealGrid::symmetric(2.0, 17).unwrap();
        let one = PlaneField::from_fn(g, g, |_, _| C64::new(1.0, 0.0)).unwrap();
        let out = cr_operator(&one, &p).unwrap();
        for i in 0..17 {
            for j in 0..17 {
                let (x, y) = (g.point(i), g.point(j));
                let expected = C64::new(PI * 1.3 * x, 0.5 * 1.3 * 1.3 * 0.9 * y);
                assert!((out.get(i, j) - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cr_operator_kills_vacuum_image_shape() {
        // ħ = 1, c = 2π: the vacuum's image is e^{−π(x²+y²)/2}/√2.
        let p = PlanckParams::default();
        let g = RealGrid::plane_default();
        let f = PlaneField::from_fn(g, g, |x, y| C64::new((-0.5 * PI * (x * x + y * y)).exp(), 0.0)).unwrap();
        assert!(annihilation_residual(&f, &p).unwrap() < 1e-4);
        let v = vacuum(RealGrid::state_default(), &p).unwrap();
        let small = RealGrid::symmetric(2.0, 9).unwrap();
        let image = fsb_transform(&v, &p, &small, &small).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                let (x, y) = (small.point(i), small.point(j));
                let expected = (-0.5 * PI * (x * x + y * y)).exp() * 0.5f64.sqrt();
                assert!((image.get(i, j) - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn weighted_image_examples() {
        let g = RealGrid::symmetric(2.0, 17).unwrap();
        assert_eq!(weighted_image(&PlaneField::zeros(g, g)).unwrap().max_abs(), 0.0);
        let f = PlaneField::from_fn(g, g, |_, _| C64::new(0.25, -1.0)).unwrap();
        assert_eq!(weighted_image(&f).unwrap().get(8, 8), C64::new(0.25, -1.0));
        let huge = RealGrid::symmetric(30.0, 17).unwrap();
        assert!(matches!(weighted_image(&PlaneField::zeros(huge, huge)), Err(Error::WeightOverflow { .. })));
    }

    #[test]
    fn unitarity_on_a_few_elements() {
        let p = PlanckParams::default();
        let f = gaussian(RealGrid::state_default());
        let n0 = inner_product(&f, &f).unwrap().re.sqrt();
        for g in [HeisenbergElement::new(0.2, -1.1, 0.8), HeisenbergElement::new(-3.0, 2.5, -1.7)] {
            let out = schrodinger_apply(&g, &f, &p).unwrap();
            assert!((out.norm().unwrap() - n0).abs() < 1e-10);
        }
    }
}
