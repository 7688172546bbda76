//! File emission: CSV, SVG, JSON and PPM writers. Every text artifact
//! echoes the numeric inputs that produced it.

use isolens_core::basins::BasinImage;
use isolens_core::caustic::{Caustic, CuspFamily};
use isolens_core::classify::SweepGrid;
use isolens_core::critical::CriticalCurve;
use isolens_core::map::LensParams;
use isolens_core::solver::{Orientation, SolveReport};
use isolens_core::{format_complex, Complex64};
use serde_json::{json, Value};
use std::fmt::Write as _;

pub fn provenance_comment(params: &LensParams, extra: &[(&str, String)]) -> String {
    let mut line = format!(
        "# isolens k={} alpha={}",
        params.k(),
        format_complex(params.alpha())
    );
    for (key, value) in extra {
        let _ = write!(line, " {key}={value}");
    }
    line.push('\n');
    line
}

pub fn orientation_str(o: Orientation) -> &'static str {
    match o {
        Orientation::Preserving => "preserving",
        Orientation::Reversing => "reversing",
        Orientation::Degenerate => "degenerate",
    }
}

/// The JSON solve report: inputs echoed, solutions, counts by orientation.
pub fn solve_report_json(
    params: &LensParams,
    w: Complex64,
    seed: u64,
    report: &SolveReport,
) -> Value {
    json!({
        "k": params.k(),
        "alpha": {"re": params.alpha().re, "im": params.alpha().im},
        "w": {"re": w.re, "im": w.im},
        "seed": seed,
        "solutions": report.solutions.iter().map(|s| json!({
            "z": {"re": s.z.re, "im": s.z.im},
            "orientation": orientation_str(s.orientation),
            "residual": s.residual,
            "jacobian": s.jacobian,
        })).collect::<Vec<_>>(),
        "count": report.count(),
        "counts_by_orientation": {
            "preserving": report.count_preserving(),
            "reversing": report.count_reversing(),
            "degenerate": report.count_degenerate(),
        },
        "seeds_used": report.seeds_used,
        "oracle_agreement": report.oracle_agreement,
        "violation": report.violation,
    })
}

/// CSV of a critical curve: t, re_z, im_z, arc_id.
pub fn critical_csv(params: &LensParams, curve: &CriticalCurve, samples: usize) -> String {
    let mut out = provenance_comment(params, &[("samples", samples.to_string())]);
    out.push_str("t,re_z,im_z,arc_id\n");
    for (arc_id, arc) in curve.arcs.iter().enumerate() {
        for (&t, &z) in arc.ts.iter().zip(&arc.points) {
            let _ = writeln!(out, "{t},{},{},{arc_id}", z.re, z.im);
        }
    }
    out
}

/// CSV of a caustic: t, re_z, im_z, re_image, im_image, arc_id, is_cusp.
pub fn caustic_csv(params: &LensParams, caustic: &Caustic, samples: usize) -> String {
    let mut out = provenance_comment(params, &[("samples", samples.to_string())]);
    out.push_str("t,re_z,im_z,re_image,im_image,arc_id,is_cusp\n");
    for (arc_id, arc) in caustic.arcs.iter().enumerate() {
        let last = arc.points.len() - 1;
        for (i, ((&t, &z), &img)) in arc
            .ts
            .iter()
            .zip(&arc.z_points)
            .zip(&arc.points)
            .enumerate()
        {
            let is_cusp = (i == 0 && arc.start_cusp.is_some())
                || (i == last && arc.end_cusp.is_some());
            let _ = writeln!(
                out,
                "{t},{},{},{},{},{arc_id},{}",
                z.re, z.im, img.re, img.im, is_cusp as u8
            );
        }
    }
    out
}

pub fn cusp_family_str(family: CuspFamily) -> &'static str {
    match family {
        CuspFamily::AxisReal => "axis_real",
        CuspFamily::AxisImag => "axis_imag",
        CuspFamily::Oblique => "oblique",
    }
}

pub fn cusps_json(params: &LensParams, caustic: &Caustic) -> Value {
    json!({
        "k": params.k(),
        "alpha": {"re": params.alpha().re, "im": params.alpha().im},
        "count": caustic.cusps.len(),
        "cusps": caustic.cusps.iter().map(|c| json!({
            "z": {"re": c.z.re, "im": c.z.im},
            "image": {"re": c.image.re, "im": c.image.im},
            "family": cusp_family_str(c.family),
            "t": c.t,
            "s": {"re": c.s.re, "im": c.s.im},
            "r": c.r,
        })).collect::<Vec<_>>(),
    })
}

pub fn cusps_csv(params: &LensParams, caustic: &Caustic) -> String {
    let mut out = provenance_comment(params, &[]);
    out.push_str("re_z,im_z,re_image,im_image,family,t,re_s,im_s,r\n");
    for c in &caustic.cusps {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            c.z.re,
            c.z.im,
            c.image.re,
            c.image.im,
            cusp_family_str(c.family),
            c.t,
            c.s.re,
            c.s.im,
            c.r
        );
    }
    out
}

/// CSV of a sweep: re_w, im_w, m, n, on_curve.
pub fn sweep_csv(params: &LensParams, grid: &SweepGrid) -> String {
    let mut out = provenance_comment(
        params,
        &[
            ("window", format!(
                "{},{},{},{}",
                grid.window.x_min, grid.window.x_max, grid.window.y_min, grid.window.y_max
            )),
            ("resolution", grid.resolution.to_string()),
        ],
    );
    out.push_str("re_w,im_w,m,n,on_curve\n");
    for cell in &grid.cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            cell.w.re,
            cell.w.im,
            cell.m.map(|v| v.to_string()).unwrap_or_default(),
            cell.n.map(|v| v.to_string()).unwrap_or_default(),
            cell.on_curve as u8
        );
    }
    out
}

struct Frame {
    x_min: f64,
    y_max: f64,
    scale: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = Complex64>, size: f64) -> Frame {
        let mut x0 = f64::INFINITY;
        let mut x1 = f64::NEG_INFINITY;
        let mut y0 = f64::INFINITY;
        let mut y1 = f64::NEG_INFINITY;
        for p in points {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        let pad = 0.05 * ((x1 - x0).max(y1 - y0)).max(1e-6);
        x0 -= pad;
        x1 += pad;
        y0 -= pad;
        y1 += pad;
        let scale = size / (x1 - x0).max(y1 - y0);
        Frame {
            x_min: x0,
            y_max: y1,
            scale,
            width: (x1 - x0) * scale,
            height: (y1 - y0) * scale,
        }
    }

    fn map(&self, z: Complex64) -> (f64, f64) {
        ((z.re - self.x_min) * self.scale, (self.y_max - z.im) * self.scale)
    }

    fn path(&self, points: &[Complex64]) -> String {
        let mut d = String::new();
        for (i, &z) in points.iter().enumerate() {
            let (x, y) = self.map(z);
            let _ = write!(d, "{}{x:.3} {y:.3} ", if i == 0 { "M" } else { "L" });
        }
        d.trim_end().to_string()
    }
}

fn svg_open(frame: &Frame, desc: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
         viewBox=\"0 0 {:.0} {:.0}\">\n<desc>{desc}</desc>\n",
        frame.width, frame.height, frame.width, frame.height
    )
}

/// Critical curve as one path per arc.
pub fn critical_svg(params: &LensParams, curve: &CriticalCurve) -> String {
    let frame = Frame::fit(
        curve.arcs.iter().flat_map(|a| a.points.iter().copied()),
        760.0,
    );
    let mut out = svg_open(
        &frame,
        &format!("critical curve k={} alpha={}", params.k(), format_complex(params.alpha())),
    );
    for arc in &curve.arcs {
        let _ = writeln!(
            out,
            "<path d=\"{}\" fill=\"none\" stroke=\"#1a1a1a\" stroke-width=\"1.5\"/>",
            frame.path(&arc.points)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Caustic arcs solid, strip-boundary image dotted, cusps marked.
pub fn caustic_svg(
    params: &LensParams,
    caustic: &Caustic,
    boundary: &(Vec<Complex64>, Vec<Complex64>),
) -> String {
    let frame = Frame::fit(
        caustic
            .arcs
            .iter()
            .flat_map(|a| a.points.iter().copied())
            .chain(boundary.0.iter().copied())
            .chain(boundary.1.iter().copied()),
        760.0,
    );
    let mut out = svg_open(
        &frame,
        &format!("caustic k={} alpha={}", params.k(), format_complex(params.alpha())),
    );
    for line in [&boundary.0, &boundary.1] {
        let _ = writeln!(
            out,
            "<path d=\"{}\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1\" \
             stroke-dasharray=\"4 4\"/>",
            frame.path(line)
        );
    }
    for arc in &caustic.arcs {
        let _ = writeln!(
            out,
            "<path d=\"{}\" fill=\"none\" stroke=\"#0a0a0a\" stroke-width=\"1.5\"/>",
            frame.path(&arc.points)
        );
    }
    for cusp in &caustic.cusps {
        let (x, y) = frame.map(cusp.image);
        let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"3\" fill=\"#c03030\"/>");
    }
    out.push_str("</svg>\n");
    out
}

fn cell_fill(m: Option<i64>, n: Option<i64>, on_curve: bool) -> String {
    if on_curve {
        return "#888888".into();
    }
    match (m, n) {
        (Some(m), Some(n)) => {
            let hue = (47 * m + 101 * n).rem_euclid(360);
            let light = 82 - 9 * (m + n).clamp(0, 6);
            format!("hsl({hue},70%,{light}%)")
        }
        _ => "#888888".into(),
    }
}

/// Choropleth of a sweep with per-(m, n) fill.
pub fn sweep_svg(params: &LensParams, grid: &SweepGrid) -> String {
    let n = grid.resolution;
    let size = 780.0;
    let cell = size / n as f64;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size:.0}\" height=\"{size:.0}\" \
         viewBox=\"0 0 {size:.0} {size:.0}\">\n<desc>sweep k={} window {},{},{},{} resolution {}</desc>\n",
        params.k(),
        grid.window.x_min,
        grid.window.x_max,
        grid.window.y_min,
        grid.window.y_max,
        n
    );
    for (idx, c) in grid.cells.iter().enumerate() {
        let row = idx / n;
        let col = idx % n;
        let x = col as f64 * cell;
        // rows run from y_min upward; SVG y runs down
        let y = (n - 1 - row) as f64 * cell;
        let _ = writeln!(
            out,
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\">\
             <title>w={} m={:?} n={:?}</title></rect>",
            cell,
            cell,
            cell_fill(c.m, c.n, c.on_curve),
            format_complex(c.w),
            c.m,
            c.n
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn basins_ppm(image: &BasinImage) -> Vec<u8> {
    isolens_core::basins::ppm_bytes(image)
}

pub fn basins_metadata(params: &LensParams, w: Complex64, image: &BasinImage, path: &str) -> Value {
    json!({
        "k": params.k(),
        "alpha": {"re": params.alpha().re, "im": params.alpha().im},
        "w": {"re": w.re, "im": w.im},
        "viewport": {
            "x_min": image.viewport.x_min,
            "x_max": image.viewport.x_max,
            "y_min": image.viewport.y_min,
            "y_max": image.viewport.y_max,
        },
        "width": image.width,
        "height": image.height,
        "max_iter": image.max_iter,
        "attractors": image.attractors.iter().map(|a| json!({"re": a.re, "im": a.im})).collect::<Vec<_>>(),
        "resolved_fraction": image.resolved_fraction(),
        "palette": ["white", "gray", "black"],
        "unresolved_color": "red",
        "file": path,
    })
}
