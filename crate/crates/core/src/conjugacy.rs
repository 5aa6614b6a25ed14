//! Changes of coordinates that simplify the Schröder map on two-root
//! polynomials, and numerical certification of the resulting conjugacies.
//!
//! `A(z) = 1 + 2(z - a)/(a - b)` moves the roots to `+-1`, where the Schröder
//! map becomes [`t_mn`]. The Möbius map `M(z) = (z - 1)/(z + 1)` then sends
//! `+1 -> 0`, `-1 -> inf`, and turns `T_{m,n}` into `R_{m,n}(w) = -(n/m) w^2`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iterators::schroeder_step;
use crate::poly::{Complex, TwoRootPolynomial};

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtendedComplex {
    Finite(Complex),
    Infinity,
}

impl ExtendedComplex {
    pub fn finite(self) -> Option<Complex> {
        match self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }
}

impl From<Complex> for ExtendedComplex {
    fn from(z: Complex) -> Self {
        ExtendedComplex::Finite(z)
    }
}

use ExtendedComplex::{Finite, Infinity};

/// `(z - a)/(z - b)`; `b -> inf`, `inf -> 1`.
pub fn moebius(a: Complex, b: Complex, z: ExtendedComplex) -> ExtendedComplex {
    match z {
        Infinity => Finite(Complex::new(1.0, 0.0)),
        Finite(z) if z == b => Infinity,
        Finite(z) => Finite((z - a) / (z - b)),
    }
}

/// `(a - b w)/(1 - w)`; `1 -> inf`, `inf -> b`.
pub fn moebius_inverse(a: Complex, b: Complex, w: ExtendedComplex) -> ExtendedComplex {
    let one = Complex::new(1.0, 0.0);
    match w {
        Infinity => Finite(b),
        Finite(w) if w == one => Infinity,
        Finite(w) => Finite((a - b * w) / (one - w)),
    }
}

/// `1 + 2(z - a)/(a - b)`: sends `a -> 1`, `b -> -1`.
pub fn affine_a(a: Complex, b: Complex, z: Complex) -> Complex {
    (z - a) * 2.0 / (a - b) + 1.0
}

pub fn affine_a_inverse(a: Complex, b: Complex, w: Complex) -> Complex {
    a + (w - 1.0) * (a - b) / 2.0
}

/// The Schröder map of `(z - 1)^m (z + 1)^n`:
/// `[(m-n) z^2 + 2(m+n) z + (m-n)] / [(m+n) z^2 + 2(m-n) z + (m+n)]`.
pub fn t_mn(m: u32, n: u32, z: ExtendedComplex) -> ExtendedComplex {
    let (mf, nf) = (m as f64, n as f64);
    let (d, s) = (mf - nf, mf + nf);
    match z {
        Infinity => Finite(Complex::new(d / s, 0.0)),
        Finite(z) => {
            let num = z * z * d + z * (2.0 * s) + d;
            let den = z * z * s + z * (2.0 * d) + s;
            if den == Complex::ZERO {
                Infinity
            } else {
                Finite(num / den)
            }
        }
    }
}

/// `-(n/m) z^2`.
pub fn r_mn(m: u32, n: u32, z: ExtendedComplex) -> ExtendedComplex {
    match z {
        Infinity => Infinity,
        Finite(z) => Finite(-(z * z) * (n as f64 / m as f64)),
    }
}

/// The two poles of [`t_mn`], `[-(m-n) +- 2i sqrt(mn)] / (m+n)`. Both lie on
/// the unit circle.
pub fn t_mn_poles(m: u32, n: u32) -> [Complex; 2] {
    let (mf, nf) = (m as f64, n as f64);
    let re = -(mf - nf) / (mf + nf);
    let im = 2.0 * (mf * nf).sqrt() / (mf + nf);
    [Complex::new(re, im), Complex::new(re, -im)]
}

/// Samples closer than this to a pole are rejected by [`conjugacy_residual_t`].
pub const POLE_CLEARANCE: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConjugacyError {
    #[error("sample {sample} is within {clearance} of pole {pole}")]
    PoleProximity {
        sample: Complex,
        pole: Complex,
        clearance: f64,
    },
    #[error("multiplicities must both be at least 1")]
    InvalidMultiplicities,
    #[error("roots a and b coincide")]
    CoincidentRoots,
    #[error("non-finite sample")]
    NonFinite,
}

fn unit() -> Complex {
    Complex::new(1.0, 0.0)
}

/// Every finite point at which one of the maps in the two conjugacy
/// identities is singular: the poles of `T_{m,n}`, their images under `M`,
/// and `w = 1` (pole of `M^{-1}`).
pub fn residual_poles(m: u32, n: u32) -> Vec<Complex> {
    let poles = t_mn_poles(m, n);
    let mut out = poles.to_vec();
    for p in poles {
        if let Finite(w) = moebius(unit(), -unit(), Finite(p)) {
            out.push(w);
        }
    }
    out.push(unit());
    out
}

/// Max of `|A(S_f(A^{-1}(w))) - T_{m,n}(w)|` and `|M(T_{m,n}(M^{-1}(w))) - R_{m,n}(w)|`,
/// with `S_f` the production Schröder step for `(z - a)^m (z - b)^n` and `M`
/// taken with roots `+1, -1`.
pub fn conjugacy_residual_t(m: u32, n: u32, a: Complex, b: Complex, sample: Complex) -> Result<f64, ConjugacyError> {
    if m < 1 || n < 1 {
        return Err(ConjugacyError::InvalidMultiplicities);
    }
    if !sample.is_finite() {
        return Err(ConjugacyError::NonFinite);
    }
    let poly = TwoRootPolynomial::new(a, b, m, n).map_err(|_| ConjugacyError::CoincidentRoots)?;
    for pole in residual_poles(m, n) {
        if (sample - pole).norm() < POLE_CLEARANCE {
            return Err(ConjugacyError::PoleProximity {
                sample,
                pole,
                clearance: POLE_CLEARANCE,
            });
        }
    }

    let t = t_mn(m, n, Finite(sample))
        .finite()
        .expect("sample is away from the poles of T");
    let z = affine_a_inverse(a, b, sample);
    let s = schroeder_step(&poly, z).expect("sample is away from the poles of S_f");
    let first = (affine_a(a, b, s) - t).norm();

    let (one, minus_one) = (unit(), -unit());
    let pre = moebius_inverse(one, minus_one, Finite(sample));
    let lhs = moebius(one, minus_one, t_mn(m, n, pre));
    let rhs = r_mn(m, n, Finite(sample));
    let second = match (lhs, rhs) {
        (Finite(l), Finite(r)) => (l - r).norm(),
        (Infinity, Infinity) => 0.0,
        _ => f64::INFINITY,
    };
    Ok(first.max(second))
}
