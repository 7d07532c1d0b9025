//! SU(1,1), its mock discrete representation on `L²(T)`, the derived
//! representation, the Hardy-space transform and the disk annihilator.

pub mod circle;
pub mod disk;
pub mod group;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use circle::{derived_rep_apply, mock_rep_apply, CircleFunction, DerivedGenerator, DEFAULT_CIRCLE_POINTS};
pub use disk::{
    antiholomorphy_residual, dbar_disk, disk_annihilator, disk_residual, dw_disk, hardy_transform,
    hardy_transform_conjugate, hardy_transform_conjugate_quadrature, hardy_transform_quadrature,
    holomorphy_residual, weighted_disk_image, DiskField, DiskGeometry, RESIDUAL_RHO,
};
pub use group::{
    generator_matrix, product_drift, su11_commutators_check, su11_inv, su11_mul, CommutatorReport, Generator, Mat2,
    SU11Element,
};

use crate::error::{Error, Result};
use crate::numerics::{C64, I};
use crate::uncertainty::{uncertainty_report, Discretized, Hermiticity, Observable, UncertaintyReport};

/// Mode window used by the kernel solver: inputs `−band..=band`, outputs
/// one mode wider on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleSpace {
    n: usize,
    band: i64,
}

impl CircleSpace {
    pub fn new(n: usize) -> Result<Self> {
        CircleFunction::zeros(n)?;
        Ok(Self { n, band: n as i64 / 4 - 1 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn band(&self) -> i64 {
        self.band
    }
}

impl Discretized for CircleFunction {
    type Space = CircleSpace;

    fn from_coordinates(space: &CircleSpace, coords: &[C64]) -> Result<Self> {
        let expected = (2 * space.band + 1) as usize;
        if coords.len() != expected {
            return Err(Error::LengthMismatch { expected, actual: coords.len() });
        }
        let modes: Vec<(i64, C64)> = coords.iter().enumerate().map(|(k, c)| (k as i64 - space.band, *c)).collect();
        CircleFunction::from_modes(space.n, &modes)
    }
}

/// Matrix of a derived generator from modes `−band..=band` to `−band−1..=band+1`.
pub fn derived_matrix(x: DerivedGenerator, space: &CircleSpace) -> DMatrix<C64> {
    let band = space.band;
    let rows = (2 * band + 3) as usize;
    let cols = (2 * band + 1) as usize;
    let mut m = DMatrix::zeros(rows, cols);
    for col in 0..cols {
        let k = col as i64 - band;
        let kf = k as f64;
        let row = |mode: i64| (mode + band + 1) as usize;
        let mut put = |mode: i64, v: C64| m[(row(mode), col)] += v;
        match x {
            DerivedGenerator::A => {
                put(k + 1, 0.5 * I * (kf + 1.0));
                put(k - 1, 0.5 * I * kf);
            }
            DerivedGenerator::B => {
                put(k + 1, C64::new(0.5 * (kf + 1.0), 0.0));
                put(k - 1, C64::new(-0.5 * kf, 0.0));
            }
            DerivedGenerator::Z => put(k, -I * (1.0 + 2.0 * kf)),
            DerivedGenerator::BPlusIA => put(k - 1, C64::new(-kf, 0.0)),
            DerivedGenerator::BMinusIA => put(k + 1, C64::new(kf + 1.0, 0.0)),
        }
    }
    m
}

/// Derived-representation operator as an observable on circle functions.
pub fn observable(x: DerivedGenerator) -> Observable<CircleFunction> {
    let hermiticity = match x {
        DerivedGenerator::A | DerivedGenerator::B | DerivedGenerator::Z => Hermiticity::AntiHermitian,
        _ => Hermiticity::Unknown,
    };
    Observable::new(format!("pi_{x:?}"), hermiticity, move |f: &CircleFunction| derived_rep_apply(x, f))
        .with_matrix(move |space: &CircleSpace| Ok(derived_matrix(x, space)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvectorDispersion {
    pub n: i64,
    pub product: f64,
    pub bound: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FPlusReport {
    pub report: UncertaintyReport,
    pub sweep: Vec<EigenvectorDispersion>,
    pub minimizer: i64,
    pub f_plus_minimal: bool,
    pub notes: Vec<String>,
}

/// Dispersions of `π_A`, `π_B` on `f₊` and on the `π(e^{tZ})` eigenvectors
/// `zⁿ`, `n = 0..=max_n`.
pub fn f_plus_dispersion_report_with(n_samples: usize, max_n: i64) -> Result<FPlusReport> {
    let (a, b) = (observable(DerivedGenerator::A), observable(DerivedGenerator::B));
    let report = uncertainty_report(&a, &b, &CircleFunction::f_plus(n_samples)?)?;
    let sweep = (0..=max_n)
        .map(|n| {
            let r = uncertainty_report(&a, &b, &CircleFunction::monomial(n_samples, n)?)?;
            Ok(EigenvectorDispersion { n, product: r.product, bound: r.bound, gap: r.gap })
        })
        .collect::<Result<Vec<_>>>()?;
    let minimizer = sweep
        .iter()
        .min_by(|x, y| x.product.total_cmp(&y.product))
        .map(|e| e.n)
        .unwrap_or(0);
    let f_plus_minimal = sweep.iter().skip(1).all(|e| e.product > sweep[0].product);
    let notes = vec![format!(
        "dispersion product on f+ is {:.6} with bound {:.6}; the often quoted constant 1/2 is not reproduced, equality holds",
        report.product, report.bound
    )];
    Ok(FPlusReport { report, sweep, minimizer, f_plus_minimal, notes })
}

pub fn f_plus_dispersion_report() -> Result<FPlusReport> {
    f_plus_dispersion_report_with(DEFAULT_CIRCLE_POINTS, 8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::HilbertVector;
    use crate::uncertainty::minimal_state_solve;

    #[test]
    fn f_plus_values() {
        let r = f_plus_dispersion_report().unwrap();
        assert!((r.report.disp_a - 0.5).abs() < 1e-14);
        assert!((r.report.disp_b - 0.5).abs() < 1e-14);
        assert!((r.report.product - 0.25).abs() < 1e-14);
        assert!((r.report.bound - 0.25).abs() < 1e-14);
        assert!(r.report.gap.abs() < 1e-10);
        assert_eq!(r.minimizer, 0);
        assert!(r.f_plus_minimal);
        for e in &r.sweep {
            let n = e.n as f64;
            assert!((e.product - 0.25 * ((n + 1.0).powi(2) + n * n)).abs() < 1e-12);
            assert!((e.bound - 0.25 * (1.0 + 2.0 * n)).abs() < 1e-12);
        }
        assert!(r.sweep[1].product > 0.25);
    }

    #[test]
    fn matrix_matches_fourier_action() {
        let space = CircleSpace::new(64).unwrap();
        let coords: Vec<C64> = (0..(2 * space.band() + 1)).map(|k| C64::new((k as f64 * 0.37).sin(), 0.1 * k as f64)).collect();
        let f = CircleFunction::from_coordinates(&space, &coords).unwrap();
        for x in [DerivedGenerator::A, DerivedGenerator::B, DerivedGenerator::Z, DerivedGenerator::BPlusIA, DerivedGenerator::BMinusIA] {
            let m = derived_matrix(x, &space);
            let out = &m * nalgebra::DVector::from_vec(coords.clone());
            let modes: Vec<(i64, C64)> = out.iter().enumerate().map(|(k, c)| (k as i64 - space.band() - 1, *c)).collect();
            let expected = CircleFunction::from_modes(64, &modes).unwrap();
            let direct = derived_rep_apply(x, &f).unwrap();
            assert!(direct.max_abs_diff(&expected).unwrap() < 1e-12, "{x:?}");
        }
    }

    #[test]
    fn kernel_solver_recovers_f_plus() {
        let space = CircleSpace::new(64).unwrap();
        let (a, b) = (observable(DerivedGenerator::A), observable(DerivedGenerator::B));
        let state = minimal_state_solve(&a, &b, 1.0, &space).unwrap();
        let fp = CircleFunction::f_plus(64).unwrap();
        assert!(state.max_abs_diff(&fp).unwrap() < 1e-8);
    }

    #[test]
    fn commutators_close_on_band_limited() {
        let f = CircleFunction::from_modes(128, &[(0, C64::new(0.2, 0.3)), (3, C64::new(1.0, 0.0)), (-5, C64::new(0.0, -0.7))]).unwrap();
        let ap = |x, g: &CircleFunction| derived_rep_apply(x, g).unwrap();
        use DerivedGenerator as G;
        let comm = |x, y| {
            let xy = ap(x, &ap(y, &f));
            let yx = ap(y, &ap(x, &f));
            xy.combine(C64::new(1.0, 0.0), &yx, C64::new(-1.0, 0.0)).unwrap()
        };
        let cases = [
            (comm(G::A, G::B), ap(G::Z, &f).scaled(C64::new(-0.5, 0.0))),
            (comm(G::Z, G::A), ap(G::B, &f).scaled(C64::new(2.0, 0.0))),
            (comm(G::Z, G::B), ap(G::A, &f).scaled(C64::new(-2.0, 0.0))),
        ];
        for (lhs, rhs) in cases {
            assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
        }
    }
}
