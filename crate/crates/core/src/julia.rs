//! Closed-form Julia sets of the Schröder map on `(z - a)^m (z - b)^n`.
//!
//! With the roots normalized to `+-1`, the Julia set is `M^{-1}` of the circle
//! `|w| = m/n`, i.e. the Apollonius circle `|z - 1| = (m/n) |z + 1|`. It
//! degenerates to the imaginary axis when `m = n`. For general roots it is the
//! image of that locus under `A^{-1}`.
//!
//! Centers and radii are formed in exact rational arithmetic and rounded once.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Complex, TwoRootPolynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocusError {
    #[error("need m >= n >= 1, got m = {m}, n = {n}")]
    InvalidMultiplicities { m: u32, n: u32 },
    #[error("need m > n >= 1, got m = {m}, n = {n}")]
    NotStrict { m: u32, n: u32 },
    #[error("roots a and b coincide")]
    CoincidentRoots,
    #[error("multiplicity quotient must be > 1, got {0}")]
    InvalidParameter(Ratio<u64>),
}

/// A line or a circle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JuliaLocus {
    /// `point + t * direction`, `|direction| = 1`.
    Line {
        point: Complex,
        direction: Complex,
    },
    Circle {
        center: Complex,
        radius: f64,
    },
}

impl JuliaLocus {
    /// Signed distance from `z`.
    ///
    /// Circle: `|z - center| - radius`, negative inside.
    /// Line: positive on the right of `direction` (the side reached by
    /// rotating `direction` clockwise). For the loci built here that is the
    /// side containing root `a`, e.g. `Re z > 0` for the imaginary axis with
    /// direction `i`.
    pub fn signed_distance(&self, z: Complex) -> f64 {
        match *self {
            JuliaLocus::Circle { center, radius } => (z - center).norm() - radius,
            JuliaLocus::Line { point, direction } => {
                let normal = direction * Complex::new(0.0, -1.0);
                ((z - point) * normal.conj()).re
            }
        }
    }

    pub fn center(&self) -> Option<Complex> {
        match *self {
            JuliaLocus::Circle { center, .. } => Some(center),
            JuliaLocus::Line { .. } => None,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        match *self {
            JuliaLocus::Circle { radius, .. } => Some(radius),
            JuliaLocus::Line { .. } => None,
        }
    }
}

/// Center (on the real axis) and radius of the normalized circle for `m > n`,
/// as exact reduced fractions: `-(m^2 + n^2)/(m^2 - n^2)` and `2mn/(m^2 - n^2)`.
pub fn normalized_circle_exact(m: u32, n: u32) -> Result<(Ratio<i64>, Ratio<i64>), LocusError> {
    if !(m > n && n >= 1) {
        return Err(LocusError::NotStrict { m, n });
    }
    let (m, n) = (m as i64, n as i64);
    let den = m * m - n * n;
    Ok((Ratio::new(-(m * m + n * n), den), Ratio::new(2 * m * n, den)))
}

fn ratio_to_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Julia set of `T_{m,n}`: the imaginary axis when `m = n`, otherwise the
/// circle `|z + (m^2+n^2)/(m^2-n^2)| = 2mn/(m^2-n^2)`.
pub fn julia_locus_normalized(m: u32, n: u32) -> Result<JuliaLocus, LocusError> {
    if !(m >= n && n >= 1) {
        return Err(LocusError::InvalidMultiplicities { m, n });
    }
    if m == n {
        return Ok(JuliaLocus::Line {
            point: Complex::ZERO,
            direction: Complex::new(0.0, 1.0),
        });
    }
    let (center, radius) = normalized_circle_exact(m, n)?;
    Ok(JuliaLocus::Circle {
        center: Complex::new(ratio_to_f64(center), 0.0),
        radius: ratio_to_f64(radius),
    })
}

/// Julia set of the Schröder map for `(z - a)^m (z - b)^n`, `m >= n`.
///
/// `m = n`: the perpendicular bisector of `[a, b]`.
/// `m > n`: center `(b m^2 - a n^2)/(m^2 - n^2)`, radius `m n |a - b| / (m^2 - n^2)`.
/// The circle surrounds `b`, the root of smaller multiplicity.
pub fn julia_locus_general(m: u32, n: u32, a: Complex, b: Complex) -> Result<JuliaLocus, LocusError> {
    if !(m >= n && n >= 1) {
        return Err(LocusError::InvalidMultiplicities { m, n });
    }
    if a == b {
        return Err(LocusError::CoincidentRoots);
    }
    let gap = a - b;
    if m == n {
        return Ok(JuliaLocus::Line {
            point: (a + b) / 2.0,
            direction: gap * Complex::new(0.0, 1.0) / gap.norm(),
        });
    }
    // integer coefficients are exact in f64 for any realistic multiplicity
    let (m2, n2) = ((m as u64 * m as u64) as f64, (n as u64 * n as u64) as f64);
    let den = m2 - n2;
    Ok(JuliaLocus::Circle {
        center: (b * m2 - a * n2) / den,
        radius: (m as f64 * n as f64) * gap.norm() / den,
    })
}

/// Julia set of the Schröder map for `poly` whatever the order of its
/// multiplicities; `None` for a single root (the map is constant).
pub fn schroeder_julia_set(poly: &TwoRootPolynomial) -> Option<JuliaLocus> {
    if !poly.has_second_root() {
        return None;
    }
    let q = if poly.m() >= poly.n() { *poly } else { poly.swapped() };
    julia_locus_general(q.m(), q.n(), q.a(), q.b()).ok()
}

/// The circle with the opposite center sign, `(a n^2 - b m^2)/(m^2 - n^2)`.
///
/// Not a Julia set. Kept so tests can show the empirical boundary rules it out.
pub fn mirrored_sign_circle(m: u32, n: u32, a: Complex, b: Complex) -> Result<JuliaLocus, LocusError> {
    match julia_locus_general(m, n, a, b)? {
        JuliaLocus::Circle { center, radius } => Ok(JuliaLocus::Circle {
            center: -center,
            radius,
        }),
        JuliaLocus::Line { .. } => Err(LocusError::NotStrict { m, n }),
    }
}

/// Center/radius pair `(x, y) = ((m^2+n^2)/(m^2-n^2), 2mn/(m^2-n^2))` and
/// `|x^2 - y^2 - 1|` in floating point.
pub fn hyperbola_check(m: u32, n: u32) -> Result<(f64, f64, f64), LocusError> {
    let (center, radius) = normalized_circle_exact(m, n)?;
    let x = -ratio_to_f64(center);
    let y = ratio_to_f64(radius);
    Ok((x, y, (x * x - y * y - 1.0).abs()))
}

/// `(m^2 + n^2)^2 - (2mn)^2 == (m^2 - n^2)^2` in integer arithmetic.
pub fn hyperbola_identity_exact(m: u32, n: u32) -> bool {
    let (m, n) = (m as i128, n as i128);
    let x = m * m + n * n;
    let y = 2 * m * n;
    let d = m * m - n * n;
    x * x - y * y == d * d
}

/// Julia circle shared by every `(m, n)` with `m / n = p`:
/// `|z + (p^2+1)/(p^2-1)| = 2p/(p^2-1)`.
pub fn p_class_locus(p: Ratio<u64>) -> Result<JuliaLocus, LocusError> {
    if p <= Ratio::from_integer(1) {
        return Err(LocusError::InvalidParameter(p));
    }
    let (m, n) = (*p.numer(), *p.denom());
    let to_i = |v: u64| i64::try_from(v).map_err(|_| LocusError::InvalidParameter(p));
    let (m, n) = (to_i(m)? as i128, to_i(n)? as i128);
    // (p^2 + 1)/(p^2 - 1) with p = m/n is (m^2 + n^2)/(m^2 - n^2)
    let den = m * m - n * n;
    let center = Ratio::new(-(m * m + n * n), den);
    let radius = Ratio::new(2 * m * n, den);
    let f = |r: Ratio<i128>| *r.numer() as f64 / *r.denom() as f64;
    Ok(JuliaLocus::Circle {
        center: Complex::new(f(center), 0.0),
        radius: f(radius),
    })
}
