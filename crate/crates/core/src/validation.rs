//! Empirical certification of the analytic Julia sets and of convergence
//! rates.
//!
//! Basin boundaries are located by bisecting along rays: the basin indicator
//! is discontinuous, so only the classes of the two bracket endpoints are
//! ever trusted. Rays start at the analytic circle center (circle loci) or
//! cross the analytic line perpendicularly (line loci); the distance of each
//! crossing from the analytic locus is the reported deviation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iterators::{
    classify_seed, estimate_convergence_order, run_orbit_unchecked, MethodSpec, OrbitParams, OrbitStatus, ParamError,
};
use crate::julia::JuliaLocus;
use crate::parallel::with_threads;
use crate::poly::{Complex, Root, TwoRootPolynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbeError {
    #[error("both ray endpoints reach the same root")]
    NoSignChange,
    #[error("orbit from t = {t} did not converge ({status:?})")]
    NonConvergentEndpoint { t: f64, status: OrbitStatus },
    #[error("invalid probe arguments: {0}")]
    InvalidArgument(&'static str),
}

#[derive(Debug, Error)]
pub enum ValidationError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("need at least {min} rays, got {got}")]
    TooFewRays { min: usize, got: usize },
    #[error("{failed} of {total} rays failed")]
    TooManyFailures { failed: usize, total: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// A located basin boundary along `origin + t * direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub origin: Complex,
    pub direction: Complex,
    /// Final bracket; the two ends reach different roots.
    pub t_lo: f64,
    pub t_hi: f64,
    pub t: f64,
    pub point: Complex,
}

impl Crossing {
    pub fn against(&self, locus: &JuliaLocus) -> BoundaryProbe {
        BoundaryProbe {
            angle: self.direction.arg(),
            ray_origin: self.origin,
            ray_direction: self.direction,
            t: self.t,
            crossing: self.point,
            analytic_distance: locus.signed_distance(self.point).abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryProbe {
    /// Argument of the ray direction.
    pub angle: f64,
    pub ray_origin: Complex,
    pub ray_direction: Complex,
    pub t: f64,
    pub crossing: Complex,
    pub analytic_distance: f64,
}

fn classify_root(
    poly: &TwoRootPolynomial,
    method: MethodSpec,
    params: &OrbitParams,
    z: Complex,
    t: f64,
) -> Result<Root, ProbeError> {
    match classify_seed(poly, method, z, params).0 {
        OrbitStatus::ConvergedTo(r) => Ok(r),
        status => Err(ProbeError::NonConvergentEndpoint { t, status }),
    }
}

/// Bisects `t` in `[0, t_max]` until the bracket is narrower than
/// `bisect_tol`. `params` must already be valid for `poly`.
pub fn find_boundary_crossing(
    poly: &TwoRootPolynomial,
    method: MethodSpec,
    params: &OrbitParams,
    origin: Complex,
    direction: Complex,
    t_max: f64,
    bisect_tol: f64,
) -> Result<Crossing, ProbeError> {
    if !(bisect_tol > 0.0 && t_max > 0.0 && t_max.is_finite()) {
        return Err(ProbeError::InvalidArgument("need bisect_tol > 0 and finite t_max > 0"));
    }
    if !(origin.is_finite() && (direction.norm() - 1.0).abs() < 1e-12) {
        return Err(ProbeError::InvalidArgument("direction must have unit modulus"));
    }
    let at = |t: f64| origin + direction * t;
    let lo_root = classify_root(poly, method, params, at(0.0), 0.0)?;
    let hi_root = classify_root(poly, method, params, at(t_max), t_max)?;
    if lo_root == hi_root {
        return Err(ProbeError::NoSignChange);
    }
    let (mut lo, mut hi) = (0.0, t_max);
    while hi - lo >= bisect_tol {
        // a split point on the boundary itself never converges; step off it
        let mut split = None;
        let mut last_err = None;
        for frac in [0.5, 0.375, 0.625] {
            let mid = lo + frac * (hi - lo);
            if mid <= lo || mid >= hi {
                continue;
            }
            match classify_root(poly, method, params, at(mid), mid) {
                Ok(root) => {
                    split = Some((mid, root));
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        match (split, last_err) {
            (Some((mid, root)), _) if root == lo_root => lo = mid,
            (Some((mid, _)), _) => hi = mid,
            (None, Some(e)) => return Err(e),
            (None, None) => break,
        }
    }
    let t = 0.5 * (lo + hi);
    Ok(Crossing {
        origin,
        direction,
        t_lo: lo,
        t_hi: hi,
        t,
        point: at(t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySettings {
    pub orbit: OrbitParams,
    pub bisect_tol: f64,
    pub n_rays: usize,
}

impl Default for BoundarySettings {
    fn default() -> Self {
        BoundarySettings {
            orbit: OrbitParams::default(),
            bisect_tol: 1e-8,
            n_rays: 64,
        }
    }
}

pub const MIN_RAYS: usize = 8;

/// Origin, unit direction and length of ray `k` of `n`.
///
/// Circle: from the center at angle `2 pi k / n`, length twice the radius.
/// Line: perpendicular to it, from `|a - b|` on the negative side to
/// `1.25 |a - b|` on the positive side, with feet spread evenly over a span of
/// `4 |a - b|` along the line.
fn ray(locus: &JuliaLocus, scale: f64, k: usize, n: usize) -> (Complex, Complex, f64) {
    match *locus {
        JuliaLocus::Circle { center, radius } => {
            let theta = std::f64::consts::TAU * k as f64 / n as f64;
            (center, Complex::from_polar(1.0, theta), 2.0 * radius)
        }
        JuliaLocus::Line { point, direction } => {
            let normal = direction * Complex::new(0.0, -1.0);
            let s = ((k as f64 + 0.5) / n as f64 - 0.5) * 4.0 * scale;
            let foot = point + direction * s;
            (foot - normal * scale, normal, 2.25 * scale)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeFailure {
    pub index: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportConfig {
    Boundary {
        method: MethodSpec,
        poly: TwoRootPolynomial,
        settings: BoundarySettings,
        locus: JuliaLocus,
    },
    Convergence {
        method: MethodSpec,
        poly: TwoRootPolynomial,
        orbit: OrbitParams,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub seed: Complex,
    pub status: OrbitStatus,
    pub steps: u32,
    pub coc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootStats {
    pub root: Root,
    pub count: usize,
    pub mean_steps: f64,
    pub min_coc: Option<f64>,
    pub max_coc: Option<f64>,
}

/// Machine-readable report. Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: ReportConfig,
    pub probes: Vec<BoundaryProbe>,
    pub max_dev: Option<f64>,
    pub mean_dev: Option<f64>,
    pub coc: Vec<SeedOutcome>,
    pub per_root: Vec<RootStats>,
    pub failures: Vec<ProbeFailure>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// `angle,t,crossing_re,crossing_im,analytic_distance` per probe.
    pub fn probes_csv(&self) -> String {
        let mut out = String::from("angle,t,crossing_re,crossing_im,analytic_distance\n");
        for p in &self.probes {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.angle, p.t, p.crossing.re, p.crossing.im, p.analytic_distance
            ));
        }
        out
    }
}

/// Casts `settings.n_rays` rays across `locus`, bisects each for the basin
/// boundary, and measures how far the crossings lie from the locus.
pub fn boundary_report(
    poly: &TwoRootPolynomial,
    method: MethodSpec,
    locus: &JuliaLocus,
    settings: &BoundarySettings,
    threads: Option<usize>,
) -> Result<Report, ValidationError> {
    if settings.n_rays < MIN_RAYS {
        return Err(ValidationError::TooFewRays {
            min: MIN_RAYS,
            got: settings.n_rays,
        });
    }
    if !(settings.bisect_tol > 0.0) {
        return Err(ValidationError::InvalidArgument("bisect_tol must be positive"));
    }
    settings.orbit.validate_for(poly)?;
    method.validate()?;
    let scale = if poly.has_second_root() {
        (poly.a() - poly.b()).norm()
    } else {
        1.0
    };
    let n = settings.n_rays;
    let results: Vec<Result<BoundaryProbe, ProbeError>> = with_threads(threads, || {
        (0..n)
            .into_par_iter()
            .map(|k| {
                let (origin, dir, t_max) = ray(locus, scale, k, n);
                find_boundary_crossing(poly, method, &settings.orbit, origin, dir, t_max, settings.bisect_tol)
                    .map(|c| c.against(locus))
            })
            .collect()
    })?;

    let mut probes = Vec::with_capacity(n);
    let mut failures = Vec::new();
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => probes.push(p),
            Err(e) => failures.push(ProbeFailure {
                index,
                error: e.to_string(),
            }),
        }
    }
    if failures.len() * 10 > n {
        return Err(ValidationError::TooManyFailures {
            failed: failures.len(),
            total: n,
        });
    }
    let devs = probes.iter().map(|p| p.analytic_distance);
    let max_dev = devs.clone().fold(0.0, f64::max);
    let mean_dev = devs.sum::<f64>() / probes.len() as f64;
    Ok(Report {
        config: ReportConfig::Boundary {
            method,
            poly: *poly,
            settings: *settings,
            locus: *locus,
        },
        probes,
        max_dev: Some(max_dev),
        mean_dev: Some(mean_dev),
        coc: Vec::new(),
        per_root: Vec::new(),
        failures,
    })
}

/// Runs every seed to convergence and estimates its convergence order.
/// Seeds that fail to converge or yield too few errors are recorded with
/// `coc: None`.
pub fn convergence_report(
    poly: &TwoRootPolynomial,
    method: MethodSpec,
    seeds: &[Complex],
    orbit: &OrbitParams,
    threads: Option<usize>,
) -> Result<Report, ValidationError> {
    orbit.validate_for(poly)?;
    method.validate()?;
    let outcomes: Vec<SeedOutcome> = with_threads(threads, || {
        seeds
            .par_iter()
            .map(|&seed| {
                let o = run_orbit_unchecked(poly, method, seed, orbit);
                SeedOutcome {
                    seed,
                    status: o.status,
                    steps: o.steps,
                    coc: estimate_convergence_order(&o.errors).ok(),
                }
            })
            .collect()
    })?;

    let roots: &[Root] = if poly.has_second_root() {
        &[Root::A, Root::B]
    } else {
        &[Root::A]
    };
    let per_root = roots
        .iter()
        .map(|&root| {
            let mine: Vec<&SeedOutcome> = outcomes
                .iter()
                .filter(|o| o.status == OrbitStatus::ConvergedTo(root))
                .collect();
            let cocs = mine.iter().filter_map(|o| o.coc);
            RootStats {
                root,
                count: mine.len(),
                mean_steps: if mine.is_empty() {
                    0.0
                } else {
                    mine.iter().map(|o| o.steps as f64).sum::<f64>() / mine.len() as f64
                },
                min_coc: cocs.clone().reduce(f64::min),
                max_coc: cocs.reduce(f64::max),
            }
        })
        .collect();
    let failures = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| !matches!(o.status, OrbitStatus::ConvergedTo(_)))
        .map(|(index, o)| ProbeFailure {
            index,
            error: format!("{:?}", o.status),
        })
        .collect();
    Ok(Report {
        config: ReportConfig::Convergence {
            method,
            poly: *poly,
            orbit: *orbit,
        },
        probes: Vec::new(),
        max_dev: None,
        mean_dev: None,
        coc: outcomes,
        per_root,
        failures,
    })
}

/// `count` seeds alternating between the roots, each at a distance drawn
/// uniformly from `[radius / 10, radius]` in a uniform direction.
pub fn seeds_near_roots(poly: &TwoRootPolynomial, count: usize, radius: f64, rng_seed: u64) -> Vec<Complex> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    (0..count)
        .map(|k| {
            let root = if k % 2 == 1 && poly.has_second_root() {
                poly.b()
            } else {
                poly.a()
            };
            let r = rng.gen_range(0.1 * radius..=radius);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            root + Complex::from_polar(r, theta)
        })
        .collect()
}
