//! Root-finding iteration maps and orbit driver.
//!
//! All three maps share the Newton correction `f/f'` and differ only in the
//! factor applied to it:
//!
//! | method            | factor                           |
//! |-------------------|----------------------------------|
//! | Newton            | `1`                              |
//! | Schröder          | `1 / (1 - L_f)`                  |
//! | Chebyshev-Halley  | `1 + (1/2) L_f / (1 - alpha L_f)` |
//!
//! Chebyshev is `alpha = 0`, Halley `alpha = 1/2`, and Newton is the limit
//! `|alpha| -> inf`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{Complex, Root, TwoRootPolynomial};

/// A step map hit a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("iteration map is singular at this point")]
pub struct HitSingularity;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("convergence tolerance must be positive and finite, got {0}")]
    ConvTol(f64),
    #[error("max_iter must be at least 1")]
    MaxIter,
    #[error("escape radius {radius} must exceed max(|a|, |b|) + 1 = {bound}")]
    EscapeRadius { radius: f64, bound: f64 },
    #[error("convergence tolerance {tol} must be below half the root separation {half_gap}")]
    TolVsSeparation { tol: f64, half_gap: f64 },
    #[error("alpha must be finite")]
    Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MethodSpec {
    Newton,
    Schroeder,
    ChebyshevHalley { alpha: f64 },
}

impl MethodSpec {
    pub const CHEBYSHEV: MethodSpec = MethodSpec::ChebyshevHalley { alpha: 0.0 };
    pub const HALLEY: MethodSpec = MethodSpec::ChebyshevHalley { alpha: 0.5 };

    pub fn validate(&self) -> Result<(), ParamError> {
        match self {
            MethodSpec::ChebyshevHalley { alpha } if !alpha.is_finite() => Err(ParamError::Alpha),
            _ => Ok(()),
        }
    }

    /// One application of the iteration map.
    pub fn step(&self, poly: &TwoRootPolynomial, z: Complex) -> Result<Complex, HitSingularity> {
        match *self {
            MethodSpec::Newton => newton_step(poly, z),
            MethodSpec::Schroeder => schroeder_step(poly, z),
            MethodSpec::ChebyshevHalley { alpha } => chebyshev_halley_step(poly, alpha, z),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MethodSpec::Newton => "newton",
            MethodSpec::Schroeder => "schroeder",
            MethodSpec::ChebyshevHalley { .. } => "chebyshev-halley",
        }
    }
}

/// `z - f(z)/f'(z)`.
pub fn newton_step(poly: &TwoRootPolynomial, z: Complex) -> Result<Complex, HitSingularity> {
    let q = poly.eval_f_over_fprime(z).map_err(|_| HitSingularity)?;
    Ok(z - q)
}

/// `z - f(z)/f'(z) / (1 - L_f(z))`.
///
/// Uses the fully reduced correction from
/// [`TwoRootPolynomial::schroeder_correction`], so the critical point of `f`
/// (where `f/f'` and `1/(1 - L_f)` are individually infinite) is handled as
/// the removable singularity it is. For `(z - a)^m` the map is constantly `a`.
pub fn schroeder_step(poly: &TwoRootPolynomial, z: Complex) -> Result<Complex, HitSingularity> {
    let q = poly.schroeder_correction(z).map_err(|_| HitSingularity)?;
    Ok(z - q)
}

/// `z - [1 + (1/2) L_f / (1 - alpha L_f)] f/f'`.
pub fn chebyshev_halley_step(poly: &TwoRootPolynomial, alpha: f64, z: Complex) -> Result<Complex, HitSingularity> {
    let q = poly.eval_f_over_fprime(z).map_err(|_| HitSingularity)?;
    if q == Complex::ZERO {
        return Ok(z);
    }
    let l = poly.eval_lf(z).map_err(|_| HitSingularity)?;
    let den = Complex::new(1.0, 0.0) - l * alpha;
    if den == Complex::ZERO {
        return Err(HitSingularity);
    }
    Ok(z - q * (l * 0.5 / den + 1.0))
}

/// Orbit stopping parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitParams {
    pub conv_tol: f64,
    pub max_iter: u32,
    pub escape_radius: f64,
}

impl Default for OrbitParams {
    fn default() -> Self {
        OrbitParams {
            conv_tol: 1e-9,
            max_iter: 200,
            escape_radius: 1e6,
        }
    }
}

impl OrbitParams {
    /// Checks the parameters against the polynomial they will be used with.
    pub fn validate_for(&self, poly: &TwoRootPolynomial) -> Result<(), ParamError> {
        if !(self.conv_tol > 0.0 && self.conv_tol.is_finite()) {
            return Err(ParamError::ConvTol(self.conv_tol));
        }
        if self.max_iter < 1 {
            return Err(ParamError::MaxIter);
        }
        let mut bound = poly.a().norm();
        if poly.has_second_root() {
            bound = bound.max(poly.b().norm());
        }
        bound += 1.0;
        if !(self.escape_radius > bound) {
            return Err(ParamError::EscapeRadius {
                radius: self.escape_radius,
                bound,
            });
        }
        if poly.has_second_root() {
            let half_gap = (poly.a() - poly.b()).norm() / 2.0;
            if !(self.conv_tol < half_gap) {
                return Err(ParamError::TolVsSeparation {
                    tol: self.conv_tol,
                    half_gap,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitStatus {
    ConvergedTo(Root),
    Diverged,
    MaxIterations,
    HitSingularity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitResult {
    pub status: OrbitStatus,
    /// Seed followed by every computed iterate.
    pub iterates: Vec<Complex>,
    /// `|z_k - root|` for every iterate when converged, otherwise empty.
    pub errors: Vec<f64>,
    pub steps: u32,
}

impl OrbitResult {
    pub fn root(&self) -> Option<Root> {
        match self.status {
            OrbitStatus::ConvergedTo(r) => Some(r),
            _ => None,
        }
    }

    pub fn last(&self) -> Complex {
        *self.iterates.last().expect("orbit always holds its seed")
    }
}

/// Nearest root within `tol`, if any.
fn captured_by(poly: &TwoRootPolynomial, z: Complex, tol: f64) -> Option<Root> {
    let da = (z - poly.a()).norm();
    if !poly.has_second_root() {
        return (da < tol).then_some(Root::A);
    }
    let db = (z - poly.b()).norm();
    let (root, d) = if db < da { (Root::B, db) } else { (Root::A, da) };
    (d < tol).then_some(root)
}

/// Iterates `method` from `z0`, validating `params` first.
pub fn run_orbit(
    poly: &TwoRootPolynomial,
    method: MethodSpec,
    z0: Complex,
    params: &OrbitParams,
) -> Result<OrbitResult, ParamError> {
    params.validate_for(poly)?;
    method.validate()?;
    Ok(run_orbit_unchecked(poly, method, z0, params))
}

/// Orbit driver for callers that already validated `params`.
///
/// The iterate sequence is recorded; use [`classify_seed`] when only the
/// outcome is needed.
pub(crate) fn run_orbit_unchecked(
    poly: &TwoRootPolynomial,
    method: MethodSpec,
    z0: Complex,
    params: &OrbitParams,
) -> OrbitResult {
    let mut iterates = vec![z0];
    let (status, steps) = drive(poly, method, z0, params, |z| iterates.push(z));
    let errors = match status {
        OrbitStatus::ConvergedTo(r) => {
            let root = poly.root(r);
            iterates.iter().map(|z| (z - root).norm()).collect()
        }
        _ => Vec::new(),
    };
    OrbitResult {
        status,
        iterates,
        errors,
        steps,
    }
}

/// Outcome and step count of an orbit, without recording iterates.
pub(crate) fn classify_seed(
    poly: &TwoRootPolynomial,
    method: MethodSpec,
    z0: Complex,
    params: &OrbitParams,
) -> (OrbitStatus, u32) {
    drive(poly, method, z0, params, |_| {})
}

fn drive(
    poly: &TwoRootPolynomial,
    method: MethodSpec,
    z0: Complex,
    params: &OrbitParams,
    mut record: impl FnMut(Complex),
) -> (OrbitStatus, u32) {
    if let Some(r) = captured_by(poly, z0, params.conv_tol) {
        return (OrbitStatus::ConvergedTo(r), 0);
    }
    let mut z = z0;
    for k in 1..=params.max_iter {
        z = match method.step(poly, z) {
            Ok(next) => next,
            Err(HitSingularity) => return (OrbitStatus::HitSingularity, k - 1),
        };
        record(z);
        if !z.is_finite() || z.norm() > params.escape_radius {
            return (OrbitStatus::Diverged, k);
        }
        if let Some(r) = captured_by(poly, z, params.conv_tol) {
            return (OrbitStatus::ConvergedTo(r), k);
        }
    }
    (OrbitStatus::MaxIterations, params.max_iter)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("need three consecutive strictly decreasing errors above the rounding floor")]
pub struct InsufficientData;

/// Errors at or below this are treated as rounding noise.
pub const ERROR_FLOOR: f64 = 1e2 * f64::EPSILON;

/// Computational order of convergence
/// `ln(e[k+1] / e[k]) / ln(e[k] / e[k-1])` from the last triple of
/// consecutive errors that are all above [`ERROR_FLOOR`] and strictly
/// decreasing.
pub fn estimate_convergence_order(errors: &[f64]) -> Result<f64, InsufficientData> {
    errors
        .windows(3)
        .rev()
        .find(|w| w[2] > ERROR_FLOOR && w[0] > w[1] && w[1] > w[2] && w[0].is_finite())
        .map(|w| (w[2] / w[1]).ln() / (w[1] / w[0]).ln())
        .ok_or(InsufficientData)
}
