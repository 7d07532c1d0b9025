//! Dispersions, the uncertainty relation with its equality condition,
//! kernel solving for minimal states, and the equivalence report linking
//! minimal uncertainty to annihilation of the transform image.
//!
//! The equality condition is used in the form `((A − a) − ir(B − b))φ = 0`
//! with real `r`. Minimizing `‖(A−a)φ − ir(B−b)φ‖` over `r` gives
//! `r* = Im⟨α, β⟩ / ‖β‖²` with `α = (A−a)φ`, `β = (B−b)φ`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::covariant::{integrated_representation, right_integrated_on_image, Kernel, Representation};
use crate::error::{Error, Result};
use crate::heisenberg::{op_d, op_m, PlanckParams};
use crate::numerics::{fourier_diff_matrix, GridFunction1D, HilbertVector, RealGrid, C64, DEFAULT_DECAY_THRESHOLD, I};

/// Relative size of the smallest singular value below which a kernel exists.
pub const KERNEL_TOLERANCE: f64 = 1e-8;
/// Required ratio between the two smallest singular values.
pub const KERNEL_SEPARATION: f64 = 10.0;
/// Largest admissible upper-spectrum fraction of a recovered grid state.
pub const RESOLUTION_TOLERANCE: f64 = 1e-3;
/// Gap tolerance for the post-solve check.
pub const POST_VERIFY_GAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hermiticity {
    Hermitian,
    AntiHermitian,
    Unknown,
}

/// States with a finite coordinate description, used to assemble operator
/// matrices for the kernel solver.
pub trait Discretized: HilbertVector {
    type Space: Sync;

    fn from_coordinates(space: &Self::Space, coords: &[C64]) -> Result<Self>;

    /// Whether a recovered kernel vector represents a normalizable state.
    fn is_normalizable(&self) -> bool {
        true
    }
}

impl Discretized for GridFunction1D {
    /// One period of samples: `n − 1` unknowns, the last grid point repeats the first.
    type Space = RealGrid;

    fn from_coordinates(space: &RealGrid, coords: &[C64]) -> Result<Self> {
        GridFunction1D::from_period(*space, coords.to_vec())
    }

    /// Decays at both ends and is resolved: grid-scale oscillations (the
    /// spurious kernels of the discretized first-order operator) are rejected.
    fn is_normalizable(&self) -> bool {
        self.decays(DEFAULT_DECAY_THRESHOLD) && self.spectral_tail_ratio() < RESOLUTION_TOLERANCE
    }
}

type ApplyFn<S> = Arc<dyn Fn(&S) -> Result<S> + Send + Sync>;
type MatrixFn<S> = Arc<dyn Fn(&<S as Discretized>::Space) -> Result<DMatrix<C64>> + Send + Sync>;

/// A linear operator on states, with an optional matrix form.
pub struct Observable<S: Discretized> {
    label: String,
    hermiticity: Hermiticity,
    apply: ApplyFn<S>,
    matrix: Option<MatrixFn<S>>,
}

impl<S: Discretized> Clone for Observable<S> {
    fn clone(&self) -> Self {
        Self {
            label: self.label.clone(),
            hermiticity: self.hermiticity,
            apply: self.apply.clone(),
            matrix: self.matrix.clone(),
        }
    }
}

impl<S: Discretized> fmt::Debug for Observable<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Observable")
            .field("label", &self.label)
            .field("hermiticity", &self.hermiticity)
            .field("has_matrix", &self.matrix.is_some())
            .finish()
    }
}

impl<S: Discretized + 'static> Observable<S> {
    pub fn new(
        label: impl Into<String>,
        hermiticity: Hermiticity,
        apply: impl Fn(&S) -> Result<S> + Send + Sync + 'static,
    ) -> Self {
        Self { label: label.into(), hermiticity, apply: Arc::new(apply), matrix: None }
    }

    pub fn with_matrix(mut self, build: impl Fn(&S::Space) -> Result<DMatrix<C64>> + Send + Sync + 'static) -> Self {
        self.matrix = Some(Arc::new(build));
        self
    }

    pub fn identity() -> Self {
        Self::new("I", Hermiticity::Hermitian, |f: &S| Ok(f.clone()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn hermiticity(&self) -> Hermiticity {
        self.hermiticity
    }

    pub fn apply(&self, f: &S) -> Result<S> {
        (self.apply)(f)
    }

    pub fn matrix(&self, space: &S::Space) -> Result<DMatrix<C64>> {
        match &self.matrix {
            Some(build) => build(space),
            None => Err(Error::NoMatrixForm(self.label.clone())),
        }
    }

    /// `a·A`.
    pub fn scaled(&self, a: C64) -> Self {
        let inner = self.apply.clone();
        let hermiticity = match (self.hermiticity, a.im == 0.0, a.re == 0.0) {
            (h, true, _) => h,
            (Hermiticity::Hermitian, false, true) => Hermiticity::AntiHermitian,
            (Hermiticity::AntiHermitian, false, true) => Hermiticity::Hermitian,
            _ => Hermiticity::Unknown,
        };
        let matrix = self.matrix.clone().map(|m| -> MatrixFn<S> { Arc::new(move |s| Ok(m(s)? * a)) });
        Self {
            label: format!("({a})*{}", self.label),
            hermiticity,
            apply: Arc::new(move |f| Ok(inner(f)?.scaled(a))),
            matrix,
        }
    }

    /// `A + λI`.
    pub fn shifted(&self, lambda: C64) -> Self {
        let inner = self.apply.clone();
        Self {
            label: format!("{}+({lambda})", self.label),
            hermiticity: if lambda.im == 0.0 { self.hermiticity } else { Hermiticity::Unknown },
            apply: Arc::new(move |f| inner(f)?.combine(C64::new(1.0, 0.0), f, lambda)),
            matrix: None,
        }
    }
}

/// `M = −iq` with its diagonal matrix on one period of samples.
pub fn observable_m() -> Observable<GridFunction1D> {
    Observable::new("M", Hermiticity::AntiHermitian, op_m).with_matrix(|grid: &RealGrid| {
        let m = grid.len() - 1;
        Ok(DMatrix::from_fn(m, m, |i, j| if i == j { -I * grid.point(i) } else { C64::new(0.0, 0.0) }))
    })
}

/// `D = ħ d/dq` with the Fourier differentiation matrix.
pub fn observable_d(p: PlanckParams) -> Observable<GridFunction1D> {
    Observable::new("D", Hermiticity::AntiHermitian, move |f: &GridFunction1D| op_d(f, &p)).with_matrix(
        move |grid: &RealGrid| Ok(fourier_diff_matrix(grid.len() - 1, grid.period()) * C64::new(p.hbar(), 0.0)),
    )
}

fn normalized<S: HilbertVector>(phi: &S) -> Result<S> {
    let n = phi.norm()?;
    if n == 0.0 || !n.is_finite() {
        return Err(Error::ZeroState);
    }
    Ok(phi.scaled(C64::new(1.0 / n, 0.0)))
}

fn centred<S: Discretized + 'static>(a: &Observable<S>, phi: &S, shift: Option<C64>) -> Result<(S, C64)> {
    let image = a.apply(phi)?;
    let mean = match shift {
        Some(s) => s,
        None => image.inner(phi)?,
    };
    Ok((image.combine(C64::new(1.0, 0.0), phi, -mean)?, mean))
}

/// `‖(A − Ā)φ‖` on the normalized state, with `Ā = ⟨Aφ, φ⟩`.
pub fn dispersion<S: Discretized + 'static>(a: &Observable<S>, phi: &S) -> Result<f64> {
    let phi = normalized(phi)?;
    centred(a, &phi, None)?.0.norm()
}

/// `½|⟨(AB − BA)φ, φ⟩|` on the normalized state.
pub fn uncertainty_bound<S: Discretized + 'static>(a: &Observable<S>, b: &Observable<S>, phi: &S) -> Result<f64> {
    let phi = normalized(phi)?;
    let ab = a.apply(&b.apply(&phi)?)?;
    let ba = b.apply(&a.apply(&phi)?)?;
    let comm = ab.combine(C64::new(1.0, 0.0), &ba, C64::new(-1.0, 0.0))?;
    Ok(0.5 * comm.inner(&phi)?.norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    pub disp_a: f64,
    pub disp_b: f64,
    pub product: f64,
    pub bound: f64,
    pub gap: f64,
    pub r_star: Option<f64>,
    pub residual_at_r_star: f64,
}

impl UncertaintyReport {
    pub fn is_equality(&self, tolerance: f64) -> bool {
        self.gap < tolerance
    }
}

pub fn uncertainty_report<S: Discretized + 'static>(
    a: &Observable<S>,
    b: &Observable<S>,
    phi: &S,
) -> Result<UncertaintyReport> {
    uncertainty_report_with(a, b, phi, None, None)
}

/// As [`uncertainty_report`] with the centring constants `a`, `b` fixed
/// instead of taken as expectations.
pub fn uncertainty_report_with<S: Discretized + 'static>(
    a: &Observable<S>,
    b: &Observable<S>,
    phi: &S,
    a_shift: Option<C64>,
    b_shift: Option<C64>,
) -> Result<UncertaintyReport> {
    let phi = normalized(phi)?;
    let (alpha, _) = centred(a, &phi, a_shift)?;
    let (beta, _) = centred(b, &phi, b_shift)?;
    let disp_a = alpha.norm()?;
    let disp_b = beta.norm()?;
    let bound = uncertainty_bound(a, b, &phi)?;
    let product = disp_a * disp_b;
    let beta_sq = disp_b * disp_b;
    let (r_star, residual_at_r_star) = if beta_sq > 0.0 {
        let r = alpha.inner(&beta)?.im / beta_sq;
        let res = alpha.combine(C64::new(1.0, 0.0), &beta, -I * r)?.norm()?;
        (Some(r), res)
    } else {
        (None, disp_a)
    };
    Ok(UncertaintyReport { disp_a, disp_b, product, bound, gap: product - bound, r_star, residual_at_r_star })
}

/// Null vector of the discretized `A − irB`, normalized with its largest
/// coordinate real and positive, then checked to attain equality.
pub fn minimal_state_solve<S: Discretized + 'static>(
    a: &Observable<S>,
    b: &Observable<S>,
    r: f64,
    space: &S::Space,
) -> Result<S> {
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!("r must be finite, got {r}")));
    }
    let op = a.matrix(space)? - b.matrix(space)? * (I * r);
    if op.ncols() == 0 || op.nrows() < op.ncols() {
        return Err(Error::Unsupported("operator matrix must have at least as many rows as columns".into()));
    }
    let svd = op.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let sigma_min = svd.singular_values[order[0]];
    let sigma_max = svd.singular_values[*order.last().unwrap()];
    let relative = if sigma_max > 0.0 { sigma_min / sigma_max } else { 0.0 };
    if relative > KERNEL_TOLERANCE {
        return Err(Error::NoNormalizableKernel { sigma_min, relative });
    }
    if let Some(&second) = order.get(1) {
        let sigma_next = svd.singular_values[second];
        if sigma_next < KERNEL_SEPARATION * sigma_min || sigma_max == 0.0 {
            return Err(Error::AmbiguousKernel { sigma_min, sigma_next });
        }
    }
    let mut coords: Vec<C64> = v_t.row(order[0]).iter().map(|c| c.conj()).collect();
    let peak = coords.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or_default();
    if peak.norm() > 0.0 {
        let phase = peak.conj() / peak.norm();
        coords.iter_mut().for_each(|c| *c *= phase);
    }
    let state = S::from_coordinates(space, &coords)?;
    if !state.is_normalizable() {
        return Err(Error::NoNormalizableKernel { sigma_min, relative });
    }
    let state = normalized(&state)?;
    let report = uncertainty_report(a, b, &state)?;
    if !(report.gap < POST_VERIFY_GAP) {
        return Err(Error::PostVerification { gap: report.gap });
    }
    Ok(state)
}

/// Thresholds for the two verdicts of [`equivalence_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceTolerances {
    pub gap: f64,
    pub residual: f64,
}

impl Default for EquivalenceTolerances {
    fn default() -> Self {
        Self { gap: 1e-6, residual: 1e-4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceRecord {
    pub report: UncertaintyReport,
    /// Largest relative residual of the image operator over the probes.
    pub transform_residual: f64,
    pub r_used: f64,
    pub gap_verdict: bool,
    pub residual_verdict: bool,
    pub agree: bool,
}

/// `π(k)` as an observable on the representation space.
pub fn kernel_observable<R>(label: impl Into<String>, k: &Kernel, rep: &R) -> Observable<R::State>
where
    R: Representation + Clone + 'static,
    R::State: Discretized + 'static,
{
    let (k, rep) = (k.clone(), rep.clone());
    Observable::new(label, Hermiticity::AntiHermitian, move |f: &R::State| integrated_representation(&k, f, &rep))
}

/// Compares minimal uncertainty of `π(k₁)`, `π(k₂)` on the vacuum `f` with
/// annihilation of the images `W_f v` of the probes by
/// `(R(k₁) − ā) + ir(R(k₂) − b̄)`, where `r = r*` from the report (0 when
/// undefined) and `a`, `b` are the expectations on `f`.
pub fn equivalence_report<R>(
    k1: &Kernel,
    k2: &Kernel,
    f: &R::State,
    probes: &[R::State],
    rep: &R,
    tolerances: EquivalenceTolerances,
) -> Result<EquivalenceRecord>
where
    R: Representation + Clone + 'static,
    R::State: Discretized + 'static,
{
    if probes.is_empty() {
        return Err(Error::InvalidParameter("at least one probe state is required".into()));
    }
    let a = kernel_observable("k1", k1, rep);
    let b = kernel_observable("k2", k2, rep);
    let report = uncertainty_report(&a, &b, f)?;
    let r = report.r_star.unwrap_or(0.0);
    let phi = normalized(f)?;
    let mean_a = a.apply(&phi)?.inner(&phi)?;
    let mean_b = b.apply(&phi)?.inner(&phi)?;
    let shift = mean_a.conj() + I * r * mean_b.conj();
    let mut transform_residual: f64 = 0.0;
    for v in probes {
        let image = rep.transform(v, f)?;
        let raw = right_integrated_on_image(k1, k2, r, &image, rep)?;
        let values = rep
            .field_values(&raw)
            .iter()
            .zip(rep.field_values(&image))
            .map(|(x, y)| x - shift * y)
            .collect();
        let out = rep.field_from_values(values)?;
        transform_residual = transform_residual.max(rep.field_residual(&out, &image)?);
    }
    let gap_verdict = report.gap < tolerances.gap;
    let residual_verdict = transform_residual < tolerances.residual;
    Ok(EquivalenceRecord {
        report,
        transform_residual,
        r_used: r,
        gap_verdict,
        residual_verdict,
        agree: gap_verdict == residual_verdict,
    })
}
