//! Shared inputs for the criterion benchmarks.

use covariant_lab::heisenberg::vacuum;
use covariant_lab::{CircleFunction, GridFunction1D, HilbertVector, PlanckParams, RealGrid, C64};

pub fn standard_params() -> PlanckParams {
    PlanckParams::new(1.0, 2.0 * std::f64::consts::PI).expect("standard scaling is valid")
}

/// Vacuum plus a displaced, modulated packet on the default state grid.
pub fn line_signal() -> GridFunction1D {
    let vac = vacuum(RealGrid::state_default(), &standard_params()).expect("vacuum fits the default grid");
    let packet = GridFunction1D::from_fn(RealGrid::state_default(), |q| C64::from_polar((-2.0 * (q - 0.3).powi(2)).exp(), 1.5 * q))
        .expect("packet fits the default grid");
    vac.combine(C64::new(1.0, 0.0), &packet, C64::new(0.5, 0.0)).expect("same grid")
}

/// Circle signal with modes -4..=12.
pub fn circle_signal(n: usize) -> CircleFunction {
    let modes: Vec<(i64, C64)> = (-4..=12).map(|m| (m, C64::new(1.0 / (1.0 + m as f64 * m as f64), 0.1 * m as f64))).collect();
    CircleFunction::from_modes(n, &modes).expect("power-of-two sample count")
}
