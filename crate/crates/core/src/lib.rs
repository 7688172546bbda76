//! Numerics for the transcendental lens equation
//! `z - k/sin(conj z) = w` in the strip |Re z| < pi/2.
//!
//! The crate finds and classifies all solutions for given (k, w), traces
//! the critical curve and the caustic with exact cusp locations, computes
//! boundary indices via the argument principle for harmonic maps, predicts
//! per-region image counts, and renders attraction basins of the
//! associated anti-analytic iteration.
//!
//! Module map:
//! * [`map`] — the lens map, its Wirtinger jet, and the shear substitution;
//! * [`critical`] — closed-form critical-curve tracing;
//! * [`caustic`] — caustic arcs, cusps, the strip-boundary image;
//! * [`winding`] — winding numbers and the D^± boundary indices;
//! * [`solver`] — multi-start Newton plus an independent grid oracle;
//! * [`classify`] — (m, n) region prediction and grid sweeps;
//! * [`basins`] — basin rendering for the fixed-point iteration;
//! * [`acceptance`] — the executable acceptance checklist.

use serde::{Deserialize, Serialize};

pub mod acceptance;
pub mod basins;
pub mod caustic;
pub mod classify;
pub mod complex;
pub mod critical;
pub mod error;
pub mod map;
pub mod solver;
pub mod winding;

pub use complex::{format_complex, parse_complex};
pub use error::{Error, Result};
pub use map::{eval_f, jet, symmetry_images, LensParams, MapJet};
pub use num_complex::Complex64;
pub use solver::{find_all, find_all_shear, newton_solve, oracle_find_all, SolveReport, Solution};

/// An axis-aligned rectangle in the complex plane (source windows,
/// basin viewports).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn square(half_width: f64) -> Rect {
        Rect {
            x_min: -half_width,
            x_max: half_width,
            y_min: -half_width,
            y_max: half_width,
        }
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
}
