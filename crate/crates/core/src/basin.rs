//! Basin-of-attraction rasters.
//!
//! Every pixel is seeded at its center, iterated with the chosen method, and
//! classified by the root its orbit reaches. Cells are computed in parallel
//! and stored by index, so the grid does not depend on thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iterators::{classify_seed, MethodSpec, OrbitParams, OrbitStatus, ParamError};
use crate::julia::JuliaLocus;
use crate::parallel::with_threads;
use crate::poly::{Complex, Root, TwoRootPolynomial};
use crate::ppm;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("invalid viewport: {0}")]
    Viewport(&'static str),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// Rectangle of the complex plane sampled on a `px_w` x `px_h` raster.
/// Row 0 is the top edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub center: Complex,
    pub width: f64,
    pub height: f64,
    pub px_w: u32,
    pub px_h: u32,
}

impl Viewport {
    /// The collapsing-circle default: centered at `-1`, 6 x 6.
    pub fn collapsing(px: u32) -> Self {
        Viewport {
            center: Complex::new(-1.0, 0.0),
            width: 6.0,
            height: 6.0,
            px_w: px,
            px_h: px,
        }
    }

    /// The near-equal-multiplicity default: centered at `0`, 8 x 8.
    pub fn wide(px: u32) -> Self {
        Viewport {
            center: Complex::ZERO,
            width: 8.0,
            height: 8.0,
            px_w: px,
            px_h: px,
        }
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        if !self.center.is_finite() {
            return Err(RenderError::Viewport("center must be finite"));
        }
        if !(self.width > 0.0 && self.width.is_finite() && self.height > 0.0 && self.height.is_finite()) {
            return Err(RenderError::Viewport("width and height must be positive and finite"));
        }
        if self.px_w == 0 || self.px_h == 0 {
            return Err(RenderError::Viewport("pixel dimensions must be at least 1"));
        }
        if self.px_w as u64 * self.px_h as u64 > ppm::MAX_PIXELS {
            return Err(RenderError::Viewport("too many pixels"));
        }
        Ok(())
    }

    /// Complex coordinate of the center of pixel `(i, j)`.
    pub fn pixel_center(&self, i: u32, j: u32) -> Complex {
        let x = ((i as f64 + 0.5) / self.px_w as f64 - 0.5) * self.width;
        let y = (0.5 - (j as f64 + 0.5) / self.px_h as f64) * self.height;
        self.center + Complex::new(x, y)
    }

    pub fn pixel_diagonal(&self) -> f64 {
        (self.width / self.px_w as f64).hypot(self.height / self.px_h as f64)
    }

    pub fn len(&self) -> usize {
        self.px_w as usize * self.px_h as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Failure {
    Diverged,
    MaxIterations,
    HitSingularity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellClass {
    RootA { iters: u32 },
    RootB { iters: u32 },
    NoConvergence { reason: Failure, iters: u32 },
}

impl CellClass {
    fn from_orbit(status: OrbitStatus, iters: u32) -> Self {
        match status {
            OrbitStatus::ConvergedTo(Root::A) => CellClass::RootA { iters },
            OrbitStatus::ConvergedTo(Root::B) => CellClass::RootB { iters },
            OrbitStatus::Diverged => CellClass::NoConvergence {
                reason: Failure::Diverged,
                iters,
            },
            OrbitStatus::MaxIterations => CellClass::NoConvergence {
                reason: Failure::MaxIterations,
                iters,
            },
            OrbitStatus::HitSingularity => CellClass::NoConvergence {
                reason: Failure::HitSingularity,
                iters,
            },
        }
    }

    pub fn root(&self) -> Option<Root> {
        match self {
            CellClass::RootA { .. } => Some(Root::A),
            CellClass::RootB { .. } => Some(Root::B),
            CellClass::NoConvergence { .. } => None,
        }
    }

    pub fn iters(&self) -> u32 {
        match *self {
            CellClass::RootA { iters } | CellClass::RootB { iters } => iters,
            CellClass::NoConvergence { iters, .. } => iters,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinGrid {
    pub viewport: Viewport,
    pub params: OrbitParams,
    /// Row-major, `px_w * px_h` entries.
    pub cells: Vec<CellClass>,
}

impl BasinGrid {
    pub fn cell(&self, i: u32, j: u32) -> CellClass {
        self.cells[j as usize * self.viewport.px_w as usize + i as usize]
    }

    /// Compares every cell with the side of `locus` its center lies on
    /// (positive side -> root `a`, negative side -> root `b`).
    pub fn compare_with_locus(&self, locus: &JuliaLocus) -> LocusAgreement {
        let vp = &self.viewport;
        let band = vp.pixel_diagonal();
        let mut out = LocusAgreement {
            cells: self.cells.len(),
            ..LocusAgreement::default()
        };
        for j in 0..vp.px_h {
            for i in 0..vp.px_w {
                let sd = locus.signed_distance(vp.pixel_center(i, j));
                let expected = if sd > 0.0 { Root::A } else { Root::B };
                if self.cell(i, j).root() == Some(expected) {
                    continue;
                }
                out.disagreements += 1;
                out.max_disagreement_distance = out.max_disagreement_distance.max(sd.abs());
                if sd.abs() > band {
                    out.outside_band += 1;
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LocusAgreement {
    pub cells: usize,
    pub disagreements: usize,
    /// Disagreeing cells farther than one pixel diagonal from the locus.
    pub outside_band: usize,
    pub max_disagreement_distance: f64,
}

impl LocusAgreement {
    pub fn fraction(&self) -> f64 {
        self.disagreements as f64 / self.cells as f64
    }
}

/// Classifies every pixel of `viewport`. `threads` caps the worker count;
/// `None` uses the global pool.
pub fn classify_grid(
    poly: &TwoRootPolynomial,
    method: MethodSpec,
    viewport: &Viewport,
    params: &OrbitParams,
    threads: Option<usize>,
) -> Result<BasinGrid, RenderError> {
    viewport.validate()?;
    params.validate_for(poly)?;
    method.validate()?;
    let vp = *viewport;
    let work = || {
        (0..vp.len())
            .into_par_iter()
            .map(|idx| {
                let (i, j) = ((idx % vp.px_w as usize) as u32, (idx / vp.px_w as usize) as u32);
                let (status, iters) = classify_seed(poly, method, vp.pixel_center(i, j), params);
                CellClass::from_orbit(status, iters)
            })
            .collect::<Vec<_>>()
    };
    let cells = with_threads(threads, work)?;
    Ok(BasinGrid {
        viewport: vp,
        params: *params,
        cells,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub root_a: [u8; 3],
    pub root_b: [u8; 3],
    pub no_convergence: [u8; 3],
    pub overlay: [u8; 3],
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            root_a: [220, 50, 47],
            root_b: [38, 110, 210],
            no_convergence: [0, 0, 0],
            overlay: [255, 255, 255],
        }
    }
}

/// `base` scaled linearly from 100% at 0 iterations to 35% at `max_iter`,
/// in integer arithmetic.
fn shade(base: [u8; 3], iters: u32, max_iter: u32) -> [u8; 3] {
    let max = max_iter.max(1) as u64;
    let iters = (iters as u64).min(max);
    let num = 20 * max - 13 * iters;
    let den = 20 * max;
    base.map(|ch| ((ch as u64 * num + den / 2) / den) as u8)
}

/// Binary PPM of `grid`. Pixels within half a pixel diagonal of `overlay`
/// are painted with the overlay color.
pub fn render_ppm(grid: &BasinGrid, palette: &Palette, overlay: Option<&JuliaLocus>) -> Vec<u8> {
    let vp = &grid.viewport;
    let half_diag = 0.5 * vp.pixel_diagonal();
    let max_iter = grid.params.max_iter;
    let mut rgb = Vec::with_capacity(3 * vp.len());
    for j in 0..vp.px_h {
        for i in 0..vp.px_w {
            let on_locus = overlay.is_some_and(|l| l.signed_distance(vp.pixel_center(i, j)).abs() <= half_diag);
            let color = if on_locus {
                palette.overlay
            } else {
                match grid.cell(i, j) {
                    CellClass::RootA { iters } => shade(palette.root_a, iters, max_iter),
                    CellClass::RootB { iters } => shade(palette.root_b, iters, max_iter),
                    CellClass::NoConvergence { .. } => palette.no_convergence,
                }
            };
            rgb.extend_from_slice(&color);
        }
    }
    ppm::encode(vp.px_w, vp.px_h, &rgb)
}
