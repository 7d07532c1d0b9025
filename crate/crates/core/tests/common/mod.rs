#![allow(dead_code)]

use covariant_lab::heisenberg::HeisenbergElement;
use covariant_lab::su11::{su11_mul, CircleFunction, Generator, SU11Element};
use covariant_lab::{GridFunction1D, RealGrid, C64};
use proptest::prelude::*;

/// Parameters of `a·e^{−c(q−q₀)² + ikq}`.
#[derive(Debug, Clone, Copy)]
pub struct Packet {
    pub amp: f64,
    pub centre: f64,
    pub width: f64,
    pub momentum: f64,
}

impl Packet {
    pub fn eval(&self, q: f64) -> C64 {
        let d = q - self.centre;
        C64::from_polar(self.amp * (-self.width * d * d).exp(), self.momentum * q)
    }
}

pub fn packet() -> impl Strategy<Value = Packet> {
    (0.2f64..1.5, -1.5f64..1.5, 0.5f64..3.0, -3.0f64..3.0)
        .prop_map(|(amp, centre, width, momentum)| Packet { amp, centre, width, momentum })
}

pub fn packets_state(ps: &[Packet]) -> GridFunction1D {
    GridFunction1D::from_fn(RealGrid::state_default(), |q| ps.iter().map(|p| p.eval(q)).sum()).unwrap()
}

/// Sums of one to three Gaussian wave packets on the default state grid.
pub fn smooth_state() -> impl Strategy<Value = GridFunction1D> {
    prop::collection::vec(packet(), 1..=3).prop_map(|ps| packets_state(&ps))
}

/// A single packet near the origin, wide enough to survive shifts by `ħy`, `|y| ≤ 3`.
pub fn centred_state() -> impl Strategy<Value = GridFunction1D> {
    (0.2f64..1.5, -0.5f64..0.5, 1.0f64..3.0, -3.0f64..3.0)
        .prop_map(|(amp, centre, width, momentum)| packets_state(&[Packet { amp, centre, width, momentum }]))
}

/// Packets whose transform images are resolved by fourth-order differences on
/// the default plane grid: the image modulation grows with the packet's offset.
pub fn resolved_packet() -> impl Strategy<Value = Packet> {
    (0.2f64..1.5, -0.5f64..0.5, 0.8f64..3.0, -3.0f64..3.0)
        .prop_map(|(amp, centre, width, momentum)| Packet { amp, centre, width, momentum })
}

pub fn resolved_state() -> impl Strategy<Value = GridFunction1D> {
    prop::collection::vec(resolved_packet(), 1..=3).prop_map(|ps| packets_state(&ps))
}

pub fn complex(scale: f64) -> impl Strategy<Value = C64> {
    (-scale..scale, -scale..scale).prop_map(|(a, b)| C64::new(a, b))
}

/// Random coefficients on modes `lo..=hi`.
pub fn band_limited(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = CircleFunction> {
    prop::collection::vec(complex(1.0), (hi - lo + 1) as usize).prop_map(move |c| {
        let modes: Vec<(i64, C64)> = c.into_iter().enumerate().map(|(k, a)| (lo + k as i64, a)).collect();
        CircleFunction::from_modes(n, &modes).unwrap()
    })
}

pub fn small_heisenberg(scale: f64) -> impl Strategy<Value = HeisenbergElement> {
    (-scale..scale, -scale..scale, -scale..scale).prop_map(|(s, x, y)| HeisenbergElement::new(s, x, y))
}

/// `e^{aA} e^{bB} e^{zZ}` with parameters in `[−scale, scale]`.
pub fn small_su11(scale: f64) -> impl Strategy<Value = SU11Element> {
    (-scale..scale, -scale..scale, -PI_F..PI_F).prop_map(|(a, b, z)| {
        su11_mul(&su11_mul(&SU11Element::exp(Generator::A, a), &SU11Element::exp(Generator::B, b)), &SU11Element::exp(Generator::Z, z))
    })
}

const PI_F: f64 = std::f64::consts::PI;
