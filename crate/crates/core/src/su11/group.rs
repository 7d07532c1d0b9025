//! SU(1,1) as 2×2 complex matrices `(α β; β̄ ᾱ)` with `|α|² − |β|² = 1`.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{C64, I};

/// Relative tolerance on `|α|² − |β|² − 1` at construction.
pub const DET_TOLERANCE: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const HALF: C64 = C64::new(0.5, 0.0);

/// A plain 2×2 complex matrix, used for Lie-algebra arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    pub fn scale(&self, a: C64) -> Mat2 {
        let m = self.0;
        Mat2([[m[0][0] * a, m[0][1] * a], [m[1][0] * a, m[1][1] * a]])
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (self.0, rhs.0);
        Mat2([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(-ONE)
    }
}

/// Basis of the Lie algebra su(1,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    A,
    B,
    Z,
}

/// `A = ½(0 −i; i 0)`, `B = ½(0 1; 1 0)`, `Z = (i 0; 0 −i)`.
pub fn generator_matrix(x: Generator) -> Mat2 {
    match x {
        Generator::A => Mat2([[ZERO, -I * 0.5], [I * 0.5, ZERO]]),
        Generator::B => Mat2([[ZERO, HALF], [HALF, ZERO]]),
        Generator::Z => Mat2([[I, ZERO], [ZERO, -I]]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SU11Element {
    alpha: C64,
    beta: C64,
}

impl SU11Element {
    pub const IDENTITY: Self = Self { alpha: ONE, beta: ZERO };

    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite() && beta.re.is_finite() && beta.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite SU(1,1) entries".into()));
        }
        let scale = alpha.norm_sqr() + beta.norm_sqr();
        let drift = (alpha.norm_sqr() - beta.norm_sqr() - 1.0).abs();
        if drift > DET_TOLERANCE * scale {
            return Err(Error::InvalidParameter(format!("|alpha|^2 - |beta|^2 = 1 violated by {drift:e}")));
        }
        Ok(Self { alpha, beta })
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(alpha: C64, beta: C64) -> Self {
        Self { alpha, beta }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn det(&self) -> f64 {
        self.alpha.norm_sqr() - self.beta.norm_sqr()
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2([[self.alpha, self.beta], [self.beta.conj(), self.alpha.conj()]])
    }

    /// Reads `(α, β)` from the first row; the second row must match.
    pub fn from_matrix(m: &Mat2) -> Result<Self> {
        let [[a, b], [c, d]] = m.0;
        let tol = 1e-12 * (a.norm() + b.norm()).max(1.0);
        if (c - b.conj()).norm() > tol || (d - a.conj()).norm() > tol {
            return Err(Error::InvalidParameter("matrix is not of the form (α β; β̄ ᾱ)".into()));
        }
        Self::new(a, b)
    }

    /// `s(w) = (1/√(1−|w|²)) (1 w; w̄ 1)` for `|w| < 1`.
    pub fn section(w: C64) -> Result<Self> {
        let r2 = w.norm_sqr();
        if !(r2 < 1.0) {
            return Err(Error::Geometry(format!("section needs |w| < 1, got {}", r2.sqrt())));
        }
        let k = 1.0 / (1.0 - r2).sqrt();
        Ok(Self { alpha: C64::new(k, 0.0), beta: w * k })
    }

    /// Disk point `β/ᾱ` of the coset `gK`.
    pub fn project(&self) -> C64 {
        self.beta / self.alpha.conj()
    }

    /// `g = s(w) e^{φZ}`, returned as `(w, φ)`.
    pub fn decompose(&self) -> (C64, f64) {
        (self.project(), self.alpha.arg())
    }

    /// Möbius action `w ↦ (αw + β)/(β̄w + ᾱ)` on the disk.
    pub fn act_on_disk(&self, w: C64) -> C64 {
        (self.alpha * w + self.beta) / (self.beta.conj() * w + self.alpha.conj())
    }

    pub fn exp(x: Generator, t: f64) -> Self {
        let (ch, sh) = ((0.5 * t).cosh(), (0.5 * t).sinh());
        match x {
            Generator::A => Self { alpha: C64::new(ch, 0.0), beta: C64::new(0.0, -sh) },
            Generator::B => Self { alpha: C64::new(ch, 0.0), beta: C64::new(sh, 0.0) },
            Generator::Z => Self { alpha: C64::from_polar(1.0, t), beta: ZERO },
        }
    }
}

fn raw_product(g: &SU11Element, h: &SU11Element) -> (C64, C64) {
    (g.alpha * h.alpha + g.beta * h.beta.conj(), g.alpha * h.beta + g.beta * h.alpha.conj())
}

/// `|det(gh) − 1|` of the unnormalized product.
pub fn product_drift(g: &SU11Element, h: &SU11Element) -> f64 {
    let (a, b) = raw_product(g, h);
    (a.norm_sqr() - b.norm_sqr() - 1.0).abs()
}

pub fn su11_mul(g: &SU11Element, h: &SU11Element) -> SU11Element {
    let (alpha, beta) = raw_product(g, h);
    let det = alpha.norm_sqr() - beta.norm_sqr();
    let drift = (det - 1.0).abs();
    if drift > DET_TOLERANCE && det > 0.0 {
        log::debug!("renormalizing SU(1,1) product, determinant drift {drift:e}");
        let k = 1.0 / det.sqrt();
        return SU11Element { alpha: alpha * k, beta: beta * k };
    }
    SU11Element { alpha, beta }
}

pub fn su11_inv(g: &SU11Element) -> SU11Element {
    SU11Element { alpha: g.alpha.conj(), beta: -g.beta }
}

/// One line of the commutator table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorCheck {
    pub label: String,
    pub max_error: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub checks: Vec<CommutatorCheck>,
    pub all_exact: bool,
}

/// `[Z,A] = 2B`, `[Z,B] = −2A`, `[A,B] = −½Z` in exact matrix arithmetic.
pub fn su11_commutators_check() -> CommutatorReport {
    let (a, b, z) = (generator_matrix(Generator::A), generator_matrix(Generator::B), generator_matrix(Generator::Z));
    let cases = [
        ("[Z,A] = 2B", z.commutator(&a), b.scale(C64::new(2.0, 0.0))),
        ("[Z,B] = -2A", z.commutator(&b), a.scale(C64::new(-2.0, 0.0))),
        ("[A,B] = -Z/2", a.commutator(&b), z.scale(C64::new(-0.5, 0.0))),
    ];
    let checks: Vec<CommutatorCheck> = cases
        .iter()
        .map(|(label, lhs, rhs)| CommutatorCheck {
            label: label.to_string(),
            max_error: lhs.max_abs_diff(rhs),
            exact: lhs == rhs,
        })
        .collect();
    let all_exact = checks.iter().all(|c| c.exact);
    CommutatorReport { checks, all_exact }
}
