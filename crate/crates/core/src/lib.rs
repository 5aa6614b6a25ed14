//! Schröder's method and its comparators (Newton, Chebyshev-Halley) on
//! polynomials with two roots of arbitrary multiplicity.
//!
//! * [`poly`]: `(z - a)^m (z - b)^n` and its reduced derivative quotients.
//! * [`iterators`]: step maps, orbit driver, convergence-order estimate.
//! * [`conjugacy`]: the affine and Möbius changes of coordinates and
//!   numerical certification of the conjugacies they induce.
//! * [`julia`]: closed-form Julia sets (lines and circles).
//! * [`basin`]: basin-of-attraction rasters and PPM rendering.
//! * [`validation`]: empirical boundary location and reports.
//! * [`config`]: run configuration and flag parsers.

// Parameter checks are written `!(x > bound)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod basin;
pub mod config;
pub mod conjugacy;
pub mod iterators;
pub mod julia;
mod parallel;
pub mod poly;
pub mod ppm;
pub mod validation;

pub use basin::{classify_grid, render_ppm, BasinGrid, CellClass, Palette, Viewport};
pub use conjugacy::ExtendedComplex;
pub use iterators::{run_orbit, MethodSpec, OrbitParams, OrbitResult, OrbitStatus};
pub use julia::{julia_locus_general, julia_locus_normalized, JuliaLocus};
pub use poly::{Complex, Root, TwoRootPolynomial};
