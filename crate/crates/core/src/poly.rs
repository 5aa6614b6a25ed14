//! Two-root polynomials `f(z) = (z - a)^m (z - b)^n` and the derivative
//! quotients the iteration maps are built from.
//!
//! No coefficient form is ever materialized. Every quotient below is written
//! in terms of `u = z - a` and `v = z - b` with the common factor
//! `u^(m-1) v^(n-1)` cancelled, so evaluation stays finite for large
//! multiplicities and is exact at the roots.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Complex number used throughout the crate.
pub type Complex = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("multiplicity of root a must be at least 1")]
    ZeroMultiplicity,
    #[error("roots a and b coincide")]
    CoincidentRoots,
    #[error("root coordinates must be finite")]
    NonFiniteRoot,
}

/// Returned when a reduced closed-form denominator is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("closed-form denominator vanished")]
pub struct DenominatorVanished;

/// Which of the two roots a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Root {
    A,
    B,
}

impl Root {
    pub fn swapped(self) -> Root {
        match self {
            Root::A => Root::B,
            Root::B => Root::A,
        }
    }
}

/// `f(z) = (z - a)^m (z - b)^n` with `m >= 1`, `n >= 0`.
///
/// `n = 0` encodes the single-root polynomial `(z - a)^m`; `b` is then
/// carried along but never consulted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoly", into = "RawPoly")]
pub struct TwoRootPolynomial {
    a: Complex,
    b: Complex,
    m: u32,
    n: u32,
}

#[derive(Serialize, Deserialize)]
struct RawPoly {
    a: [f64; 2],
    b: [f64; 2],
    m: u32,
    n: u32,
}

impl TryFrom<RawPoly> for TwoRootPolynomial {
    type Error = PolyError;

    fn try_from(raw: RawPoly) -> Result<Self, Self::Error> {
        TwoRootPolynomial::new(
            Complex::new(raw.a[0], raw.a[1]),
            Complex::new(raw.b[0], raw.b[1]),
            raw.m,
            raw.n,
        )
    }
}

impl From<TwoRootPolynomial> for RawPoly {
    fn from(p: TwoRootPolynomial) -> Self {
        RawPoly {
            a: [p.a.re, p.a.im],
            b: [p.b.re, p.b.im],
            m: p.m,
            n: p.n,
        }
    }
}

impl TwoRootPolynomial {
    pub fn new(a: Complex, b: Complex, m: u32, n: u32) -> Result<Self, PolyError> {
        if m == 0 {
            return Err(PolyError::ZeroMultiplicity);
        }
        if !(a.is_finite() && b.is_finite()) {
            return Err(PolyError::NonFiniteRoot);
        }
        if n >= 1 && a == b {
            return Err(PolyError::CoincidentRoots);
        }
        Ok(TwoRootPolynomial { a, b, m, n })
    }

    /// `(z - a)^m`. The unused second root is parked at `a + 1`.
    pub fn single(a: Complex, m: u32) -> Result<Self, PolyError> {
        Self::new(a, a + 1.0, m, 0)
    }

    pub fn a(&self) -> Complex {
        self.a
    }

    pub fn b(&self) -> Complex {
        self.b
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn has_second_root(&self) -> bool {
        self.n >= 1
    }

    pub fn root(&self, which: Root) -> Complex {
        match which {
            Root::A => self.a,
            Root::B => self.b,
        }
    }

    /// Same polynomial with the labels `(a, m)` and `(b, n)` exchanged.
    ///
    /// Only meaningful when `n >= 1`; a single-root polynomial is returned
    /// unchanged.
    pub fn swapped(&self) -> Self {
        if self.n == 0 {
            return *self;
        }
        TwoRootPolynomial {
            a: self.b,
            b: self.a,
            m: self.n,
            n: self.m,
        }
    }

    /// The zero of `f'` that is not a root: `(m b + n a) / (m + n)`.
    pub fn critical_point(&self) -> Option<Complex> {
        if self.n == 0 {
            return None;
        }
        let (m, n) = (self.m as f64, self.n as f64);
        Some((self.b * m + self.a * n) / (m + n))
    }

    /// `f(z)`, by repeated squaring of each factor. Exactly zero at a root;
    /// overflows to a non-finite value for huge `|z|` or multiplicities.
    pub fn eval_f(&self, z: Complex) -> Complex {
        let fa = (z - self.a).powu(self.m);
        if self.n == 0 {
            fa
        } else {
            fa * (z - self.b).powu(self.n)
        }
    }

    /// `f(z) / f'(z) = u v / (m v + n u)`, or `u / m` for a single root.
    pub fn eval_f_over_fprime(&self, z: Complex) -> Result<Complex, DenominatorVanished> {
        let u = z - self.a;
        let m = self.m as f64;
        if self.n == 0 {
            return Ok(u / m);
        }
        let v = z - self.b;
        let den = v * m + u * self.n as f64;
        if u == Complex::ZERO || v == Complex::ZERO {
            return Ok(Complex::ZERO);
        }
        if den == Complex::ZERO {
            return Err(DenominatorVanished);
        }
        Ok(u * v / den)
    }

    /// `L_f(z) = f f'' / f'^2`, via
    /// `[m(m-1) v^2 + 2mn uv + n(n-1) u^2] / (m v + n u)^2`.
    ///
    /// For a single root this is the constant `(m - 1) / m`.
    pub fn eval_lf(&self, z: Complex) -> Result<Complex, DenominatorVanished> {
        let m = self.m as f64;
        if self.n == 0 {
            return Ok(Complex::new((m - 1.0) / m, 0.0));
        }
        let n = self.n as f64;
        let u = z - self.a;
        let v = z - self.b;
        let den = v * m + u * n;
        if den == Complex::ZERO {
            return Err(DenominatorVanished);
        }
        let num = v * v * (m * (m - 1.0)) + u * v * (2.0 * m * n) + u * u * (n * (n - 1.0));
        Ok(num / (den * den))
    }

    /// `1 - L_f(z) = (m v^2 + n u^2) / (m v + n u)^2`, formed without the
    /// cancellation that `1.0 - eval_lf(z)` would suffer.
    pub fn eval_one_minus_lf(&self, z: Complex) -> Result<Complex, DenominatorVanished> {
        let m = self.m as f64;
        if self.n == 0 {
            return Ok(Complex::new(1.0 / m, 0.0));
        }
        let n = self.n as f64;
        let u = z - self.a;
        let v = z - self.b;
        let den = v * m + u * n;
        if den == Complex::ZERO {
            return Err(DenominatorVanished);
        }
        Ok((v * v * m + u * u * n) / (den * den))
    }

    /// The Schröder correction `(f/f') / (1 - L_f) = u v (m v + n u) / (m v^2 + n u^2)`.
    ///
    /// The critical point of `f` is a removable singularity of this quotient
    /// (the correction is zero there); only the two zeros of `m v^2 + n u^2`
    /// are genuine poles.
    pub fn schroeder_correction(&self, z: Complex) -> Result<Complex, DenominatorVanished> {
        let u = z - self.a;
        if self.n == 0 {
            return Ok(u);
        }
        let (m, n) = (self.m as f64, self.n as f64);
        let v = z - self.b;
        let den = v * v * m + u * u * n;
        if den == Complex::ZERO {
            return Err(DenominatorVanished);
        }
        Ok(u * v * (v * m + u * n) / den)
    }
}
