//! Run configuration shared by the command line and config files, plus the
//! parsers for its textual flag values.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basin::{Palette, Viewport};
use crate::conjugacy::affine_a_inverse;
use crate::iterators::{MethodSpec, OrbitParams};
use crate::julia::{schroeder_julia_set, JuliaLocus};
use crate::poly::{Complex, TwoRootPolynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot parse complex number {0:?} (expected \"re\" or \"re,im\")")]
    Complex(String),
    #[error("cannot parse viewport {0:?} (expected \"center_re,center_im,width,height\")")]
    Viewport(String),
    #[error("cannot parse pixel size {0:?} (expected \"N\" or \"WxH\")")]
    Pixels(String),
    #[error("unknown method {0:?} (newton, schroeder, chebyshev, halley, chebyshev-halley:<alpha>)")]
    Method(String),
    #[error("config file: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

fn parse_real(s: &str) -> Option<f64> {
    let v: f64 = s.trim().parse().ok()?;
    v.is_finite().then_some(v)
}

/// `"re"` or `"re,im"`; the imaginary part defaults to 0.
pub fn parse_complex(s: &str) -> Result<Complex, ConfigError> {
    let err = || ConfigError::Complex(s.to_string());
    let mut parts = s.split(',');
    let re = parts.next().and_then(parse_real).ok_or_else(err)?;
    let im = match parts.next() {
        Some(p) => parse_real(p).ok_or_else(err)?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(err());
    }
    Ok(Complex::new(re, im))
}

/// `"center_re,center_im,width,height"`. Pixel counts are set separately.
pub fn parse_viewport(s: &str, px_w: u32, px_h: u32) -> Result<Viewport, ConfigError> {
    let err = || ConfigError::Viewport(s.to_string());
    let vals: Vec<f64> = s.split(',').map(parse_real).collect::<Option<_>>().ok_or_else(err)?;
    let [cre, cim, width, height] = vals[..] else {
        return Err(err());
    };
    let vp = Viewport {
        center: Complex::new(cre, cim),
        width,
        height,
        px_w,
        px_h,
    };
    vp.validate().map_err(|_| err())?;
    Ok(vp)
}

/// `"N"` (square) or `"WxH"`.
pub fn parse_pixels(s: &str) -> Result<(u32, u32), ConfigError> {
    let err = || ConfigError::Pixels(s.to_string());
    let num = |t: &str| t.trim().parse::<u32>().ok().filter(|&v| v >= 1);
    let (w, h) = match s.split_once(['x', 'X']) {
        Some((w, h)) => (num(w).ok_or_else(err)?, num(h).ok_or_else(err)?),
        None => {
            let v = num(s).ok_or_else(err)?;
            (v, v)
        }
    };
    if w as u64 * h as u64 > crate::ppm::MAX_PIXELS {
        return Err(err());
    }
    Ok((w, h))
}

pub fn parse_method(s: &str) -> Result<MethodSpec, ConfigError> {
    let err = || ConfigError::Method(s.to_string());
    let lower = s.trim().to_ascii_lowercase();
    match lower.as_str() {
        "newton" => Ok(MethodSpec::Newton),
        "schroeder" | "schroder" | "schröder" => Ok(MethodSpec::Schroeder),
        "chebyshev" => Ok(MethodSpec::CHEBYSHEV),
        "halley" => Ok(MethodSpec::HALLEY),
        other => {
            let alpha = other
                .strip_prefix("chebyshev-halley:")
                .and_then(parse_real)
                .ok_or_else(err)?;
            Ok(MethodSpec::ChebyshevHalley { alpha })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subcommand {
    Render,
    Certify,
    Converge,
}

/// Everything a run depends on. Thread count is deliberately absent: it
/// never changes outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub method: MethodSpec,
    pub m: u32,
    pub n: u32,
    pub a: Complex,
    pub b: Complex,
    pub viewport: Viewport,
    pub orbit: OrbitParams,
    pub palette: Palette,
    pub overlay: bool,
    pub out: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub n_rays: usize,
    pub bisect_tol: f64,
    /// Certification fails when the max deviation exceeds this.
    pub tolerance: f64,
    pub samples: usize,
    pub seed_radius: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            subcommand: Subcommand::Render,
            method: MethodSpec::Schroeder,
            m: 1,
            n: 1,
            a: Complex::new(1.0, 0.0),
            b: Complex::new(-1.0, 0.0),
            viewport: Viewport::wide(512),
            orbit: OrbitParams::default(),
            palette: Palette::default(),
            overlay: false,
            out: None,
            csv: None,
            n_rays: 64,
            bisect_tol: 1e-8,
            tolerance: 1e-5,
            samples: 20,
            seed_radius: 0.3,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(s).map_err(|e| ConfigError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    pub fn poly(&self) -> Result<TwoRootPolynomial, ConfigError> {
        TwoRootPolynomial::new(self.a, self.b, self.m, self.n).map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    /// Rejects any configuration a downstream module would refuse.
    pub fn validate(&self) -> Result<TwoRootPolynomial, ConfigError> {
        let invalid = |e: &dyn std::fmt::Display| ConfigError::Invalid(e.to_string());
        let poly = self.poly()?;
        self.method.validate().map_err(|e| invalid(&e))?;
        self.orbit.validate_for(&poly).map_err(|e| invalid(&e))?;
        match self.subcommand {
            Subcommand::Render => self.viewport.validate().map_err(|e| invalid(&e))?,
            Subcommand::Certify => {
                if !poly.has_second_root() {
                    return Err(ConfigError::Invalid("certify needs n >= 1".into()));
                }
                if self.n_rays < crate::validation::MIN_RAYS {
                    return Err(ConfigError::Invalid(format!(
                        "need at least {} rays",
                        crate::validation::MIN_RAYS
                    )));
                }
                if !(self.bisect_tol > 0.0 && self.bisect_tol.is_finite()) {
                    return Err(ConfigError::Invalid("bisect_tol must be positive".into()));
                }
                if !(self.tolerance > 0.0) {
                    return Err(ConfigError::Invalid("tolerance must be positive".into()));
                }
            }
            Subcommand::Converge => {
                if self.samples == 0 {
                    return Err(ConfigError::Invalid("need at least one sample".into()));
                }
                if !(self.seed_radius > 0.0 && self.seed_radius.is_finite()) {
                    return Err(ConfigError::Invalid("seed radius must be positive".into()));
                }
            }
        }
        Ok(poly)
    }
}

/// Viewport framing the Julia set of `poly`: the normalized default
/// (`-1`, 6 x 6 when `max(m,n)/min(m,n) >= 2`, else `0`, 8 x 8) carried over
/// to the actual roots by `A^{-1}`.
pub fn default_viewport(poly: &TwoRootPolynomial, px_w: u32, px_h: u32) -> Viewport {
    let q = if poly.m() >= poly.n() { *poly } else { poly.swapped() };
    let base = if !q.has_second_root() || q.m() >= 2 * q.n() {
        Viewport::collapsing(1)
    } else {
        Viewport::wide(1)
    };
    let (center, scale) = if q.has_second_root() {
        (
            affine_a_inverse(q.a(), q.b(), base.center),
            (q.a() - q.b()).norm() / 2.0,
        )
    } else {
        (q.a() + base.center, 1.0)
    };
    Viewport {
        center,
        width: base.width * scale,
        height: base.height * scale,
        px_w,
        px_h,
    }
}

/// JSON written next to a rendered image: the full run configuration plus
/// the analytic locus drawn (or drawable) on it. Loads back as a
/// [`RunConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(flatten)]
    pub config: RunConfig,
    pub analytic_locus: Option<JuliaLocus>,
}

impl Sidecar {
    pub fn new(config: &RunConfig) -> Self {
        let analytic_locus = config.poly().ok().as_ref().and_then(schroeder_julia_set);
        Sidecar {
            config: config.clone(),
            analytic_locus,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sidecar serializes") + "\n"
    }
}
