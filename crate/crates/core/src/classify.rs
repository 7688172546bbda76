//! Predicting image counts from boundary indices alone.
//!
//! With the region-on-left orientation and one pole in `D^-`, the argument
//! principle gives
//!
//! * `m` (orientation-reversing count) `= 1 - index_dminus`,
//! * `n` (orientation-preserving count) `= index_dplus`.
//!
//! The sign convention is pinned once at the reference point k = 1.1,
//! w = 0, where the solver finds 2 reversing and 2 preserving roots (see
//! the winding tests), and is re-verified against the solver on five
//! random cells of every sweep.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::caustic::{boundary_image, trace_caustic};
use crate::error::{Error, Result};
use crate::map::LensParams;
use crate::solver::find_all;
use crate::winding::{default_clip, IndexEngine};
use crate::Rect;

/// Query points within this distance of the caustic or the strip-boundary
/// image are labeled on-curve instead of classified.
pub const ON_CURVE_BAND: f64 = 1e-6;

/// Classification of a single source position.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionReport {
    pub w: Complex64,
    pub idx_minus: Option<i64>,
    pub idx_plus: Option<i64>,
    pub m_predicted: Option<i64>,
    pub n_predicted: Option<i64>,
    pub m_solver: Option<usize>,
    pub n_solver: Option<usize>,
    pub consistent: Option<bool>,
    pub on_curve: bool,
}

/// Distance queries against the sampled caustic and boundary-image curves.
pub struct CurveProximity {
    caustic_segments: Vec<(Complex64, Complex64)>,
    boundary_segments: Vec<(Complex64, Complex64)>,
}

fn polyline_segments(points: &[Complex64], out: &mut Vec<(Complex64, Complex64)>) {
    for w in points.windows(2) {
        out.push((w[0], w[1]));
    }
}

fn segment_distance(w: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let t = (((w - a).re * ab.re + (w - a).im * ab.im) / len2).clamp(0.0, 1.0);
    (w - (a + t * ab)).norm()
}

fn segments_cross(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> bool {
    let orient = |p: Complex64, q: Complex64, r: Complex64| -> f64 {
        (q.re - p.re) * (r.im - p.im) - (q.im - p.im) * (r.re - p.re)
    };
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

impl CurveProximity {
    /// Sample the curves out to |Im w| <= im_extent.
    pub fn new(params: &LensParams, im_extent: f64) -> Result<Self> {
        let caustic = trace_caustic(params, 2048)?;
        let mut caustic_segments = Vec::new();
        for arc in &caustic.arcs {
            polyline_segments(&arc.points, &mut caustic_segments);
        }
        let reach = im_extent + params.k() + 2.0;
        let n = ((reach * 512.0) as usize).clamp(1024, 16384);
        let (left, right) = boundary_image(params, reach, n);
        let mut boundary_segments = Vec::new();
        polyline_segments(&left, &mut boundary_segments);
        polyline_segments(&right, &mut boundary_segments);
        Ok(Self {
            caustic_segments,
            boundary_segments,
        })
    }

    /// Distance to the nearest of the two curve families.
    pub fn distance(&self, w: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for &(a, b) in self.caustic_segments.iter().chain(&self.boundary_segments) {
            best = best.min(segment_distance(w, a, b));
        }
        best
    }

    /// Proper crossings of segment (a, b) with the caustic.
    pub fn caustic_crossings(&self, a: Complex64, b: Complex64) -> usize {
        self.caustic_segments
            .iter()
            .filter(|&&(c, d)| segments_cross(a, b, c, d))
            .count()
    }

    /// Proper crossings of segment (a, b) with the boundary image.
    pub fn boundary_crossings(&self, a: Complex64, b: Complex64) -> usize {
        self.boundary_segments
            .iter()
            .filter(|&&(c, d)| segments_cross(a, b, c, d))
            .count()
    }

    /// Smallest distance between segment (a, b) and either curve family;
    /// zero if they properly intersect. Tangential touches (through a cusp
    /// vertex, say) report a tiny clearance even when no proper crossing
    /// is counted.
    pub fn segment_clearance(&self, a: Complex64, b: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for &(c, d) in self.caustic_segments.iter().chain(&self.boundary_segments) {
            if segments_cross(a, b, c, d) {
                return 0.0;
            }
            best = best
                .min(segment_distance(a, c, d))
                .min(segment_distance(b, c, d))
                .min(segment_distance(c, a, b))
                .min(segment_distance(d, a, b));
            if best == 0.0 {
                return 0.0;
            }
        }
        best
    }
}

fn on_curve_report(w: Complex64) -> RegionReport {
    RegionReport {
        w,
        idx_minus: None,
        idx_plus: None,
        m_predicted: None,
        n_predicted: None,
        m_solver: None,
        n_solver: None,
        consistent: None,
        on_curve: true,
    }
}

/// Predict (m, n) from indices and cross-check against the solver.
pub fn classify(params: &LensParams, w: Complex64) -> Result<RegionReport> {
    if params.has_shear() {
        return Err(Error::InvalidParam("classification requires alpha = 0".into()));
    }
    let proximity = CurveProximity::new(params, w.im.abs() + 1.0)?;
    let engine = IndexEngine::new(params)?;
    Ok(classify_with(params, &engine, &proximity, w, true))
}

/// Classification with reusable geometry; `run_solver` disables the solver
/// cross-check for bulk sweeps.
pub fn classify_with(
    params: &LensParams,
    engine: &IndexEngine,
    proximity: &CurveProximity,
    w: Complex64,
    run_solver: bool,
) -> RegionReport {
    if proximity.distance(w) < ON_CURVE_BAND {
        return on_curve_report(w);
    }
    let clip = default_clip(params, w);
    let (idx_minus, idx_plus) = match (engine.index_dminus(w), engine.index_dplus(w, clip)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return on_curve_report(w),
    };
    let m_predicted = 1 - idx_minus;
    let n_predicted = idx_plus;
    let (m_solver, n_solver, consistent) = if run_solver {
        match find_all(params, w) {
            Ok(report) => {
                let m = report.count_reversing() + report.count_degenerate();
                let n = report.count_preserving();
                let ok = m as i64 == m_predicted && n as i64 == n_predicted;
                (Some(m), Some(n), Some(ok))
            }
            Err(_) => (None, None, None),
        }
    } else {
        (None, None, None)
    };
    RegionReport {
        w,
        idx_minus: Some(idx_minus),
        idx_plus: Some(idx_plus),
        m_predicted: Some(m_predicted),
        n_predicted: Some(n_predicted),
        m_solver,
        n_solver,
        consistent,
        on_curve: false,
    }
}

/// One cell of a sweep grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub w: Complex64,
    pub m: Option<i64>,
    pub n: Option<i64>,
    pub on_curve: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepGrid {
    pub k: f64,
    pub window: Rect,
    pub resolution: usize,
    /// Row-major, rows from y_min upward.
    pub cells: Vec<SweepCell>,
    /// Cells where the solver contradicted the index prediction during the
    /// five-point calibration re-check (empty on a healthy run).
    pub spot_check_failures: Vec<Complex64>,
}

/// Classify a `resolution x resolution` grid of sources over `window` from
/// indices alone, re-verifying the sign convention against the solver at
/// five random cells.
pub fn sweep(params: &LensParams, window: Rect, resolution: usize) -> Result<SweepGrid> {
    if resolution < 16 {
        return Err(Error::InvalidParam(format!(
            "resolution must be >= 16, got {resolution}"
        )));
    }
    let im_extent = window.y_min.abs().max(window.y_max.abs()) + 1.0;
    let proximity = CurveProximity::new(params, im_extent)?;
    let engine = IndexEngine::new(params)?;
    let n = resolution;
    let cells: Vec<SweepCell> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let row = idx / n;
            let col = idx % n;
            let w = Complex64::new(
                window.x_min + (window.x_max - window.x_min) * col as f64 / (n - 1) as f64,
                window.y_min + (window.y_max - window.y_min) * row as f64 / (n - 1) as f64,
            );
            let rep = classify_with(params, &engine, &proximity, w, false);
            SweepCell {
                w,
                m: rep.m_predicted,
                n: rep.n_predicted,
                on_curve: rep.on_curve,
            }
        })
        .collect();

    // five-cell calibration re-check
    let mut rng = ChaCha8Rng::seed_from_u64(0xCA11);
    let mut spot_check_failures = Vec::new();
    let off_curve: Vec<&SweepCell> = cells.iter().filter(|c| !c.on_curve).collect();
    if !off_curve.is_empty() {
        for _ in 0..5 {
            let cell = off_curve[rng.gen_range(0..off_curve.len())];
            if let Ok(report) = find_all(params, cell.w) {
                let m = (report.count_reversing() + report.count_degenerate()) as i64;
                let n_count = report.count_preserving() as i64;
                if Some(m) != cell.m || Some(n_count) != cell.n {
                    spot_check_failures.push(cell.w);
                }
            }
        }
    }

    Ok(SweepGrid {
        k: params.k(),
        window,
        resolution,
        cells,
        spot_check_failures,
    })
}
