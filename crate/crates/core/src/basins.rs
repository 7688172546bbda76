//! Attraction basins of the fixed-point iteration `T(z) = w + k/sin(conj z)`.
//!
//! Solutions of `f(z) = w` are fixed points of T; the orientation-preserving
//! ones (|g'| < 1) are attracting. Pixels are classified by iterating T
//! until the orbit lands within 1e-6 of a known attractor.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{g_prime, sin_cos, LensParams};
use crate::solver::{find_all, Orientation};
use crate::Rect;

/// Orbit-to-attractor matching tolerance.
pub const ATTRACTOR_TOL: f64 = 1e-6;
/// Orbits beyond this |Im z| are abandoned.
pub const ESCAPE_IM: f64 = 50.0;
/// Default iteration budget per pixel.
pub const DEFAULT_MAX_ITER: usize = 500;

pub const UNRESOLVED: i16 = -1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationOutcome {
    Attractor(usize),
    Unresolved,
}

/// Per-pixel attractor labels over a viewport. Labels are row-major with
/// row 0 at the top of the image (raster order), `UNRESOLVED` where the
/// orbit did not settle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasinImage {
    pub viewport: Rect,
    pub width: usize,
    pub height: usize,
    pub labels: Vec<i16>,
    pub attractors: Vec<Complex64>,
    pub max_iter: usize,
}

impl BasinImage {
    pub fn resolved_fraction(&self) -> f64 {
        let resolved = self.labels.iter().filter(|&&l| l != UNRESOLVED).count();
        resolved as f64 / self.labels.len() as f64
    }

    pub fn label_at(&self, row: usize, col: usize) -> i16 {
        self.labels[row * self.width + col]
    }
}

#[inline]
fn t_map(params: &LensParams, w: Complex64, z: Complex64) -> Option<Complex64> {
    let (s, _) = sin_cos(z.conj());
    if s.norm() < crate::map::POLE_RADIUS {
        return None;
    }
    Some(w + params.k() / s)
}

/// Iterate T from `z0`, classifying against the precomputed attractors.
pub fn iterate_map(
    params: &LensParams,
    w: Complex64,
    attractors: &[Complex64],
    z0: Complex64,
    max_iter: usize,
) -> IterationOutcome {
    let mut z = z0;
    for _ in 0..=max_iter {
        for (id, &a) in attractors.iter().enumerate() {
            if (z - a).norm() < ATTRACTOR_TOL {
                return IterationOutcome::Attractor(id);
            }
        }
        if z.im.abs() > ESCAPE_IM {
            return IterationOutcome::Unresolved;
        }
        match t_map(params, w, z) {
            Some(next) => z = next,
            None => return IterationOutcome::Unresolved,
        }
    }
    IterationOutcome::Unresolved
}

/// Attractors for (k, w): the orientation-preserving solutions, ordered by
/// descending Im then ascending Re (so the palette echoes white/gray/black
/// from top attractor down).
pub fn attractors(params: &LensParams, w: Complex64) -> Result<Vec<Complex64>> {
    let report = find_all(params, w)?;
    let mut fixed: Vec<Complex64> = report
        .solutions
        .iter()
        .filter(|s| s.orientation == Orientation::Preserving)
        .map(|s| s.z)
        .collect();
    // descending Im with a tolerance so symmetric pairs tie, then ascending Re
    fixed.sort_by(|a, b| {
        let im = if (a.im - b.im).abs() < 1e-9 {
            std::cmp::Ordering::Equal
        } else {
            b.im.total_cmp(&a.im)
        };
        im.then(a.re.total_cmp(&b.re))
    });
    Ok(fixed)
}

/// Render the basins with attractors computed by the solver.
pub fn render_basins(
    params: &LensParams,
    w: Complex64,
    viewport: Rect,
    width: usize,
    height: usize,
) -> Result<BasinImage> {
    let att = attractors(params, w)?;
    render_basins_with(params, w, &att, viewport, width, height, DEFAULT_MAX_ITER)
}

/// Render against a caller-supplied attractor list.
pub fn render_basins_with(
    params: &LensParams,
    w: Complex64,
    attractors: &[Complex64],
    viewport: Rect,
    width: usize,
    height: usize,
    max_iter: usize,
) -> Result<BasinImage> {
    if attractors.is_empty() {
        return Err(Error::InvalidParam(
            "no attracting fixed points for this (k, w)".into(),
        ));
    }
    if width == 0 || height == 0 {
        return Err(Error::InvalidParam("empty image".into()));
    }
    for &a in attractors {
        debug_assert!(g_prime(params, a).map(|g| g.norm() < 1.0).unwrap_or(false));
    }
    let labels: Vec<i16> = (0..width * height)
        .into_par_iter()
        .map(|idx| {
            let row = idx / width;
            let col = idx % width;
            let x = viewport.x_min
                + (viewport.x_max - viewport.x_min) * (col as f64 + 0.5) / width as f64;
            let y = viewport.y_max
                - (viewport.y_max - viewport.y_min) * (row as f64 + 0.5) / height as f64;
            match iterate_map(params, w, attractors, Complex64::new(x, y), max_iter) {
                IterationOutcome::Attractor(id) => id as i16,
                IterationOutcome::Unresolved => UNRESOLVED,
            }
        })
        .collect();
    Ok(BasinImage {
        viewport,
        width,
        height,
        labels,
        attractors: attractors.to_vec(),
        max_iter,
    })
}

/// Basin palette: white, gray, black for the first three attractors
/// (matching the figure convention), muted tones beyond, red for
/// unresolved pixels.
pub fn palette_color(label: i16) -> [u8; 3] {
    match label {
        UNRESOLVED => [200, 40, 40],
        0 => [255, 255, 255],
        1 => [128, 128, 128],
        2 => [0, 0, 0],
        3 => [80, 120, 200],
        4 => [220, 180, 60],
        other => {
            let v = (37 * (other as i32 + 5) % 200 + 30) as u8;
            [v, v.wrapping_add(60), v.wrapping_add(120)]
        }
    }
}

/// Binary PPM (P6), 8-bit RGB, header `P6\n<w> <h>\n255\n`.
pub fn ppm_bytes(image: &BasinImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(20 + 3 * image.labels.len());
    out.extend_from_slice(format!("P6\n{} {}\n255\n", image.width, image.height).as_bytes());
    for &label in &image.labels {
        out.extend_from_slice(&palette_color(label));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: f64) -> LensParams {
        LensParams::new(k).unwrap()
    }

    fn golden() -> (LensParams, Complex64) {
        (p(1.92), Complex64::new(0.0, 0.67))
    }

    fn square(r: f64) -> Rect {
        Rect {
            x_min: -r,
            x_max: r,
            y_min: -r,
            y_max: r,
        }
    }

    #[test]
    fn golden_case_has_three_attractors() {
        let (params, w) = golden();
        let att = attractors(&params, w).unwrap();
        assert_eq!(att.len(), 3);
        // ordered by descending Im, ties by ascending Re
        assert!((att[0] - Complex64::new(0.0, 1.5363458)).norm() < 1e-6);
        assert!((att[1] - Complex64::new(-1.4617539, 0.7738876)).norm() < 1e-6);
        assert!((att[2] - Complex64::new(1.4617539, 0.7738876)).norm() < 1e-6);
        // each is an attracting fixed point of T
        for &a in &att {
            assert!(g_prime(&params, a).unwrap().norm() < 1.0);
            let t = t_map(&params, w, a).unwrap();
            assert!((t - a).norm() < 1e-10);
        }
    }

    #[test]
    fn attractor_point_resolves_immediately() {
        let (params, w) = golden();
        let att = attractors(&params, w).unwrap();
        assert_eq!(
            iterate_map(&params, w, &att, att[1], 0),
            IterationOutcome::Attractor(1)
        );
    }

    #[test]
    fn orbit_from_imaginary_axis_reaches_the_top_attractor() {
        let (params, w) = golden();
        let att = attractors(&params, w).unwrap();
        assert_eq!(
            iterate_map(&params, w, &att, Complex64::new(0.0, 1.4), 500),
            IterationOutcome::Attractor(0)
        );
    }

    #[test]
    fn small_render_resolves_and_is_deterministic() {
        let (params, w) = golden();
        let img1 = render_basins(&params, w, square(3.0), 64, 64).unwrap();
        let img2 = render_basins(&params, w, square(3.0), 64, 64).unwrap();
        assert_eq!(ppm_bytes(&img1), ppm_bytes(&img2));
        assert!(img1.resolved_fraction() > 0.95);
        // all three basins appear
        for id in 0..3 {
            assert!(img1.labels.iter().any(|&l| l == id));
        }
    }

    #[test]
    fn resolved_fraction_is_monotone_in_iteration_budget() {
        let (params, w) = golden();
        let att = attractors(&params, w).unwrap();
        let mut prev = 0.0;
        for max_iter in [100, 200, 500] {
            let img =
                render_basins_with(&params, w, &att, square(3.0), 48, 48, max_iter).unwrap();
            let frac = img.resolved_fraction();
            assert!(frac >= prev, "resolved fraction dropped at {max_iter}");
            prev = frac;
        }
    }

    #[test]
    fn mirror_symmetry_swaps_the_off_axis_basins() {
        // w purely imaginary: T commutes with z -> -conj(z), which swaps
        // the two off-axis attractors and fixes the axis one.
        let (params, w) = golden();
        let img = render_basins(&params, w, square(2.5), 41, 41).unwrap();
        for row in 0..41 {
            for col in 0..41 {
                let mirrored_col = 40 - col;
                let a = img.label_at(row, col);
                let b = img.label_at(row, mirrored_col);
                if a == UNRESOLVED || b == UNRESOLVED {
                    continue;
                }
                let expected = match a {
                    1 => 2,
                    2 => 1,
                    other => other,
                };
                assert_eq!(b, expected, "row {row} col {col}");
            }
        }
    }

    #[test]
    fn attractor_count_matches_preserving_count() {
        let params = p(1.0);
        let w = Complex64::new(0.0, 0.0);
        let report = find_all(&params, w).unwrap();
        let att = attractors(&params, w).unwrap();
        assert_eq!(att.len(), report.count_preserving());
        assert_eq!(att.len(), 2);
        // near the imaginary axis the orbit ladders out toward i*inf here
        // (the on-axis fixed point is repelling for w = 0), so only most
        // of the frame resolves
        let img = render_basins(&params, w, square(2.0), 32, 32).unwrap();
        assert!(img.resolved_fraction() > 0.6);
        for id in 0..2 {
            assert!(img.labels.iter().any(|&l| l == id));
        }
    }

    #[test]
    fn ppm_header_is_pinned() {
        let (params, w) = golden();
        let att = attractors(&params, w).unwrap();
        let img = render_basins_with(&params, w, &att, square(1.0), 5, 3, 50).unwrap();
        let bytes = ppm_bytes(&img);
        assert!(bytes.starts_with(b"P6\n5 3\n255\n"));
        assert_eq!(bytes.len(), "P6\n5 3\n255\n".len() + 3 * 15);
    }

    #[test]
    fn empty_attractor_list_is_rejected() {
        let (params, w) = golden();
        assert!(render_basins_with(&params, w, &[], square(1.0), 8, 8, 10).is_err());
    }
}
