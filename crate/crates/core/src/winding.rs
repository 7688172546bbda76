//! Integer winding numbers and the boundary indices of the two orientation
//! regions.
//!
//! `D^-` is the set where the map reverses orientation (it contains the
//! pole), `D^+` the set where it preserves orientation. Both indices are
//! taken with the region on the left:
//!
//! * for k < 2, the boundary of `D^-` is the critical-curve loop traversed
//!   counterclockwise;
//! * for k >= 2 it is the Jordan curve made of the four critical arcs and
//!   the four vertical strip-boundary intervals between their endpoints.
//!
//! The clipped `D^+` boundary decomposes as (strip rectangle, CCW) minus
//! (boundary of `D^-`, CCW), so its image index is the difference of the
//! two image windings. Winding numbers are accumulated as principal
//! turning angles of consecutive image samples, with parameter-space
//! bisection wherever a segment subtends an angle >= pi/2 at the query
//! point, so the reported integers are those of the true image curves.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::critical::{arc_samples, four_arc_specs, lift_near, loop_samples, strip_endpoints};
use crate::error::{Error, Result};
use crate::map::{eval_f, jet, LensParams};

/// Distance below which the winding number is ruled undefined.
pub const ON_CURVE_EPS: f64 = 1e-9;

/// A closed sampled curve with explicit orientation bookkeeping.
#[derive(Debug, Clone)]
pub struct OrientedLoop {
    pub points: Vec<Complex64>,
    pub orientation_note: String,
}

impl OrientedLoop {
    /// A closed polyline: first point equal to last, at least 8 points.
    pub fn new(points: Vec<Complex64>, orientation_note: impl Into<String>) -> Result<Self> {
        if points.len() < 8 {
            return Err(Error::InvalidParam(format!(
                "loop needs at least 8 points, got {}",
                points.len()
            )));
        }
        if points.first() != points.last() {
            return Err(Error::InvalidParam(
                "loop must be closed (first point == last point)".into(),
            ));
        }
        Ok(Self {
            points,
            orientation_note: orientation_note.into(),
        })
    }
}

fn point_segment_distance(w: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let t = ((w - a).re * ab.re + (w - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (w - (a + t * ab)).norm()
}

/// Winding number of a closed polyline about `w`.
///
/// Segments are chord-bisected until each subtends an angle < pi/2 at `w`;
/// the value is the rounded total turning.
pub fn winding_number(curve: &OrientedLoop, w: Complex64) -> Result<i64> {
    let pts = &curve.points;
    let mut total = 0.0;
    for seg in pts.windows(2) {
        if point_segment_distance(w, seg[0], seg[1]) < ON_CURVE_EPS {
            return Err(Error::OnCurve(point_segment_distance(w, seg[0], seg[1])));
        }
        total += chord_angle(seg[0], seg[1], w, 0);
    }
    let turns = total / (2.0 * PI);
    Ok(turns.round() as i64)
}

/// Turning angle of a straight segment seen from w, bisecting the chord
/// until each part subtends < pi/2.
fn chord_angle(a: Complex64, b: Complex64, w: Complex64, depth: u32) -> f64 {
    let ang = ((b - w) / (a - w)).arg();
    if ang.abs() < FRAC_PI_2 || depth >= 40 {
        ang
    } else {
        let m = (a + b) / 2.0;
        chord_angle(a, m, w, depth + 1) + chord_angle(m, b, w, depth + 1)
    }
}

/// How midpoints of a boundary piece are recomputed during refinement.
#[derive(Debug, Clone, Copy)]
enum PieceKind {
    /// Critical-curve arc; parameter is the lift parameter.
    Critical { k: f64 },
    /// Vertical strip segment x + i*param.
    Vertical { x: f64 },
    /// Horizontal cap param + i*y.
    Horizontal { y: f64 },
}

#[derive(Debug, Clone)]
struct Piece {
    kind: PieceKind,
    params: Vec<f64>,
    zs: Vec<Complex64>,
    images: Vec<Complex64>,
}

impl Piece {
    fn build(kind: PieceKind, samples: Vec<(f64, Complex64)>, lens: &LensParams) -> Piece {
        let (params, zs): (Vec<f64>, Vec<Complex64>) = samples.into_iter().unzip();
        let images = zs
            .iter()
            .map(|&z| eval_f(lens, z).expect("boundary pieces avoid the pole"))
            .collect();
        Piece {
            kind,
            params,
            zs,
            images,
        }
    }

    fn midpoint(&self, lens: &LensParams, t0: f64, t1: f64, z0: Complex64, z1: Complex64)
        -> (f64, Complex64, Complex64) {
        let tm = 0.5 * (t0 + t1);
        let zm = match self.kind {
            PieceKind::Critical { k } => {
                lift_near(k, tm, 0.5 * (z0 + z1)).unwrap_or_else(|| 0.5 * (z0 + z1))
            }
            PieceKind::Vertical { x } => Complex64::new(x, tm),
            PieceKind::Horizontal { y } => Complex64::new(tm, y),
        };
        let fm = eval_f(lens, zm).expect("boundary pieces avoid the pole");
        (tm, zm, fm)
    }
}

fn refined_angle(
    piece: &Piece,
    lens: &LensParams,
    w: Complex64,
    t0: f64,
    z0: Complex64,
    f0: Complex64,
    t1: f64,
    z1: Complex64,
    f1: Complex64,
    depth: u32,
) -> Result<f64> {
    let v0 = f0 - w;
    let v1 = f1 - w;
    let d0 = v0.norm();
    let d1 = v1.norm();
    if d0 < ON_CURVE_EPS || d1 < ON_CURVE_EPS {
        return Err(Error::OnCurve(d0.min(d1)));
    }
    let ang = (v1 / v0).arg();
    if ang.abs() < FRAC_PI_2 || depth >= 48 {
        return Ok(ang);
    }
    let (tm, zm, fm) = piece.midpoint(lens, t0, t1, z0, z1);
    Ok(
        refined_angle(piece, lens, w, t0, z0, f0, tm, zm, fm, depth + 1)?
            + refined_angle(piece, lens, w, tm, zm, fm, t1, z1, f1, depth + 1)?,
    )
}

fn winding_of_pieces(pieces: &[Piece], lens: &LensParams, w: Complex64) -> Result<i64> {
    let mut total = 0.0;
    for piece in pieces {
        for i in 0..piece.params.len() - 1 {
            total += refined_angle(
                piece,
                lens,
                w,
                piece.params[i],
                piece.zs[i],
                piece.images[i],
                piece.params[i + 1],
                piece.zs[i + 1],
                piece.images[i + 1],
                0,
            )?;
        }
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

/// Precomputed boundary geometry for repeated index queries at one `k`.
pub struct IndexEngine {
    params: LensParams,
    dminus: Vec<Piece>,
}

impl IndexEngine {
    pub fn new(params: &LensParams) -> Result<Self> {
        Self::with_density(params, 1)
    }

    /// `density` scales the initial sampling; used by refinement-stability
    /// tests.
    pub fn with_density(params: &LensParams, density: usize) -> Result<Self> {
        if params.has_shear() {
            return Err(Error::InvalidParam("indices require alpha = 0".into()));
        }
        let k = params.k();
        let d = density.max(1);
        // The pole sits in D^-: J < 0 just off the origin.
        debug_assert!(jet(params, Complex64::new(1e-3, 0.0)).unwrap().jacobian < 0.0);
        let mut dminus = Vec::new();
        if k < 2.0 {
            let samples = loop_samples(k, 2048 * d);
            dminus.push(Piece::build(PieceKind::Critical { k }, samples, params));
        } else {
            let se = strip_endpoints(params)?;
            let (t0, t2) = (se.t0, se.t2());
            let specs = four_arc_specs(k);
            let vseg = |x: f64, y_a: f64, y_b: f64| {
                let n = 128 * d;
                (0..=n)
                    .map(|j| {
                        let y = y_a + (y_b - y_a) * j as f64 / n as f64;
                        (y, Complex64::new(x, y))
                    })
                    .collect::<Vec<_>>()
            };
            // CCW around D^-: right arc, up the right side, top arc,
            // down the left side, left arc, down, bottom arc, back up.
            let arc = |i: usize, negate: bool| {
                Piece::build(
                    PieceKind::Critical { k },
                    arc_samples(k, &specs[i], 1024 * d, negate),
                    params,
                )
            };
            dminus.push(arc(0, false)); // right: pi/2 - i t0 -> pi/2 + i t0
            dminus.push(Piece::build(
                PieceKind::Vertical { x: FRAC_PI_2 },
                vseg(FRAC_PI_2, t0, t2),
                params,
            ));
            dminus.push(arc(1, false)); // top: pi/2 + i t2 -> -pi/2 + i t2
            dminus.push(Piece::build(
                PieceKind::Vertical { x: -FRAC_PI_2 },
                vseg(-FRAC_PI_2, t2, t0),
                params,
            ));
            dminus.push(arc(2, true)); // left: -pi/2 + i t0 -> -pi/2 - i t0
            dminus.push(Piece::build(
                PieceKind::Vertical { x: -FRAC_PI_2 },
                vseg(-FRAC_PI_2, -t0, -t2),
                params,
            ));
            dminus.push(arc(3, true)); // bottom: -pi/2 - i t2 -> pi/2 - i t2
            dminus.push(Piece::build(
                PieceKind::Vertical { x: FRAC_PI_2 },
                vseg(FRAC_PI_2, -t2, -t0),
                params,
            ));
        }
        Ok(Self {
            params: *params,
            dminus,
        })
    }

    /// Index about `w` of the image of the D^- boundary (D^- on the left).
    pub fn index_dminus(&self, w: Complex64) -> Result<i64> {
        winding_of_pieces(&self.dminus, &self.params, w)
    }

    /// Index about `w` of the image of the clipped D^+ boundary (D^+ on the
    /// left), closed with the images of the horizontal caps at Im z = ±clip.
    pub fn index_dplus(&self, w: Complex64, clip: f64) -> Result<i64> {
        if !(w.norm() < clip - self.params.k() - 1.0) {
            return Err(Error::InvalidParam(format!(
                "clip {clip} too small for |w| = {} (need |w| < clip - k - 1)",
                w.norm()
            )));
        }
        let rect = self.rect_pieces(clip);
        let rect_index = winding_of_pieces(&rect, &self.params, w)?;
        Ok(rect_index - self.index_dminus(w)?)
    }

    fn rect_pieces(&self, clip: f64) -> Vec<Piece> {
        let params = &self.params;
        // dense sampling where the boundary image actually bends
        let core = clip.min(8.0);
        let vline = |x: f64, up: bool| {
            let mut ys = Vec::new();
            let tail = 64;
            let dense = 512;
            for j in 0..=tail {
                ys.push(-clip + (clip - core) * j as f64 / tail as f64);
            }
            for j in 1..=dense {
                ys.push(-core + 2.0 * core * j as f64 / dense as f64);
            }
            for j in 1..=tail {
                ys.push(core + (clip - core) * j as f64 / tail as f64);
            }
            if !up {
                ys.reverse();
            }
            ys.into_iter()
                .map(|y| (y, Complex64::new(x, y)))
                .collect::<Vec<_>>()
        };
        let hcap = |y: f64, x_a: f64, x_b: f64| {
            let n = 64;
            (0..=n)
                .map(|j| {
                    let x = x_a + (x_b - x_a) * j as f64 / n as f64;
                    (x, Complex64::new(x, y))
                })
                .collect::<Vec<_>>()
        };
        vec![
            Piece::build(PieceKind::Vertical { x: FRAC_PI_2 }, vline(FRAC_PI_2, true), params),
            Piece::build(
                PieceKind::Horizontal { y: clip },
                hcap(clip, FRAC_PI_2, -FRAC_PI_2),
                params,
            ),
            Piece::build(
                PieceKind::Vertical { x: -FRAC_PI_2 },
                vline(-FRAC_PI_2, false),
                params,
            ),
            Piece::build(
                PieceKind::Horizontal { y: -clip },
                hcap(-clip, -FRAC_PI_2, FRAC_PI_2),
                params,
            ),
        ]
    }
}

/// Default clip height for [`index_dplus`]: `max(10, |w| + k + 5)`.
pub fn default_clip(params: &LensParams, w: Complex64) -> f64 {
    (w.norm() + params.k() + 5.0).max(10.0)
}

/// One-shot index of the D^- boundary image; build an [`IndexEngine`] for
/// repeated queries.
pub fn index_dminus(params: &LensParams, w: Complex64) -> Result<i64> {
    IndexEngine::new(params)?.index_dminus(w)
}

/// One-shot index of the clipped D^+ boundary image.
pub fn index_dplus(params: &LensParams, w: Complex64, clip: f64) -> Result<i64> {
    IndexEngine::new(params)?.index_dplus(w, clip)
}
