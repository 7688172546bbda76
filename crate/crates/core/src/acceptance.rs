//! The acceptance checklist: ten executable criteria with pinned
//! tolerances. The integration test target runs every criterion and the
//! CLI `verify` subcommand runs the same code, so pass/fail is identical
//! in both places.
//!
//! Criteria 2, 5, 6 and 8 share one expensive sweep over ten k values and
//! a 41 x 41 source grid; build it once with [`sweep_data`] and hand it to
//! [`criterion`].

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

use crate::basins::{render_basins, UNRESOLVED};
use crate::caustic::{find_cusps, positive_root_p, CuspFamily};
use crate::classify::CurveProximity;
use crate::map::{eval_f, g_prime, jet, LensParams};
use crate::solver::{find_all, oracle_find_all, same_root_set, Orientation};
use crate::winding::{default_clip, IndexEngine};
use crate::Rect;

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:2} [{}] {} — {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.details
        )
    }
}

/// The ten k values of the theorem sweep.
pub fn sweep_k_values() -> [f64; 10] {
    [
        0.5,
        1.0,
        1.1,
        2.0 / 3.0f64.sqrt() + 0.01,
        1.5,
        1.92,
        2.0,
        2.01,
        2.2,
        3.0,
    ]
}

const SWEEP_RESOLUTION: usize = 41;
const SWEEP_HALF_WIDTH: f64 = 2.5;
const ORACLE_DENSITY: usize = 240;

/// Everything recorded about one grid cell during the sweep.
#[derive(Debug, Clone)]
pub struct CellRecord {
    pub w: Complex64,
    /// Within the on-curve band, indices undefined, or a degenerate root
    /// appeared; excluded from the count checks.
    pub excluded: bool,
    pub curve_distance: f64,
    pub m: usize,
    pub n: usize,
    pub oracle_agrees: bool,
    pub idx_minus: i64,
    pub idx_plus: i64,
    pub idx_plus_double_clip: i64,
}

pub struct KSweep {
    pub k: f64,
    /// Row-major, rows from y_min upward, 41 x 41.
    pub cells: Vec<CellRecord>,
    pub proximity: CurveProximity,
}

pub struct SweepData {
    pub sweeps: Vec<KSweep>,
    pub elapsed_secs: f64,
}

fn cell_w(row: usize, col: usize) -> Complex64 {
    let step = 2.0 * SWEEP_HALF_WIDTH / (SWEEP_RESOLUTION - 1) as f64;
    Complex64::new(
        -SWEEP_HALF_WIDTH + col as f64 * step,
        -SWEEP_HALF_WIDTH + row as f64 * step,
    )
}

/// Run the full sweep (minutes-scale; the dominant cost of the suite).
pub fn sweep_data() -> SweepData {
    let start = Instant::now();
    let sweeps = sweep_k_values()
        .iter()
        .map(|&k| {
            let params = LensParams::new(k).unwrap();
            let proximity = CurveProximity::new(&params, SWEEP_HALF_WIDTH + 1.0).unwrap();
            let engine = IndexEngine::new(&params).unwrap();
            let cells: Vec<CellRecord> = (0..SWEEP_RESOLUTION * SWEEP_RESOLUTION)
                .into_par_iter()
                .map(|idx| {
                    let w = cell_w(idx / SWEEP_RESOLUTION, idx % SWEEP_RESOLUTION);
                    build_cell(&params, &engine, &proximity, w)
                })
                .collect();
            KSweep {
                k,
                cells,
                proximity,
            }
        })
        .collect();
    SweepData {
        sweeps,
        elapsed_secs: start.elapsed().as_secs_f64(),
    }
}

fn build_cell(
    params: &LensParams,
    engine: &IndexEngine,
    proximity: &CurveProximity,
    w: Complex64,
) -> CellRecord {
    let curve_distance = proximity.distance(w);
    let mut record = CellRecord {
        w,
        excluded: true,
        curve_distance,
        m: 0,
        n: 0,
        oracle_agrees: true,
        idx_minus: 0,
        idx_plus: 0,
        idx_plus_double_clip: 0,
    };
    if curve_distance < crate::classify::ON_CURVE_BAND {
        return record;
    }
    let report = match find_all(params, w) {
        Ok(r) => r,
        Err(_) => return record,
    };
    if report.count_degenerate() > 0 {
        // the index is undefined on the caustic itself
        return record;
    }
    let oracle = oracle_find_all(params, w, ORACLE_DENSITY);
    let clip = default_clip(params, w);
    let (idx_minus, idx_plus, idx_plus_2) = match (
        engine.index_dminus(w),
        engine.index_dplus(w, clip),
        engine.index_dplus(w, 2.0 * clip),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        _ => return record,
    };
    record.excluded = false;
    record.m = report.count_reversing();
    record.n = report.count_preserving();
    record.oracle_agrees = same_root_set(&report.solutions, &oracle, 1e-6);
    record.idx_minus = idx_minus;
    record.idx_plus = idx_plus;
    record.idx_plus_double_clip = idx_plus_2;
    record
}

/// Whether a criterion needs the shared sweep.
pub fn needs_sweep(id: usize) -> bool {
    matches!(id, 2 | 5 | 6 | 8)
}

/// Run criterion `id` (1..=10).
pub fn criterion(id: usize, data: Option<&SweepData>) -> CriterionResult {
    match (id, data) {
        (1, _) => criterion_1(),
        (2, Some(d)) => criterion_2(d),
        (3, _) => criterion_3(),
        (4, _) => criterion_4(),
        (5, Some(d)) => criterion_5(d),
        (6, Some(d)) => criterion_6(d),
        (7, _) => criterion_7(),
        (8, Some(d)) => criterion_8(d),
        (9, _) => criterion_9(),
        (10, _) => criterion_10(),
        (2 | 5 | 6 | 8, None) => CriterionResult {
            id,
            name: criterion_name(id),
            passed: false,
            details: "sweep data not supplied".into(),
        },
        _ => CriterionResult {
            id,
            name: "unknown",
            passed: false,
            details: format!("no criterion {id}"),
        },
    }
}

pub fn criterion_name(id: usize) -> &'static str {
    match id {
        1 => "golden six-image example",
        2 => "theorem sweep count bounds and oracle agreement",
        3 => "cusp bifurcation",
        4 => "cubic p(r) facts",
        5 => "index bounds",
        6 => "classifier consistency and crossing parity",
        7 => "region-existence thresholds",
        8 => "count stability under perturbation",
        9 => "basin rendering",
        10 => "symmetry suite",
        _ => "unknown",
    }
}

/// Run every criterion, building the sweep once.
pub fn run_all() -> Vec<CriterionResult> {
    let data = sweep_data();
    (1..=10)
        .map(|id| criterion(id, Some(&data)))
        .collect()
}

fn criterion_1() -> CriterionResult {
    let start = Instant::now();
    let params = LensParams::new(1.92).unwrap();
    let w = Complex64::new(0.0, 0.67);
    let expected = [
        Complex64::new(0.0, 1.5363458),
        Complex64::new(0.0, -0.9885626),
        Complex64::new(1.2603941, 0.9732810),
        Complex64::new(-1.2603941, 0.9732810),
        Complex64::new(1.4617539, 0.7738876),
        Complex64::new(-1.4617539, 0.7738876),
    ];
    let preserving_expected = [
        Complex64::new(0.0, 1.5363458),
        Complex64::new(1.4617539, 0.7738876),
        Complex64::new(-1.4617539, 0.7738876),
    ];
    let report = match find_all(&params, w) {
        Ok(r) => r,
        Err(e) => {
            return CriterionResult {
                id: 1,
                name: criterion_name(1),
                passed: false,
                details: format!("solver error: {e}"),
            }
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    let mut ok = report.count() == 6 && elapsed < 2.0;
    let mut missing = Vec::new();
    for e in expected {
        let hit = report.solutions.iter().any(|s| {
            (s.z.re - e.re).abs() < 5e-7 && (s.z.im - e.im).abs() < 5e-7
        });
        if !hit {
            ok = false;
            missing.push(e);
        }
    }
    let preserving: Vec<Complex64> = report
        .solutions
        .iter()
        .filter(|s| s.orientation == Orientation::Preserving)
        .map(|s| s.z)
        .collect();
    if preserving.len() != 3
        || !preserving_expected
            .iter()
            .all(|e| preserving.iter().any(|z| (z - e).norm() < 5e-7))
    {
        ok = false;
    }
    CriterionResult {
        id: 1,
        name: criterion_name(1),
        passed: ok,
        details: format!(
            "{} roots, {} preserving, {:.3} s{}",
            report.count(),
            preserving.len(),
            elapsed,
            if missing.is_empty() {
                String::new()
            } else {
                format!(", missing {missing:?}")
            }
        ),
    }
}

fn criterion_2(data: &SweepData) -> CriterionResult {
    let mut checked = 0usize;
    let mut excluded = 0usize;
    let mut bad: Vec<String> = Vec::new();
    for sweep in &data.sweeps {
        for cell in &sweep.cells {
            if cell.excluded {
                excluded += 1;
                continue;
            }
            checked += 1;
            let total = cell.m + cell.n;
            if !(1..=6).contains(&total) {
                bad.push(format!("k={} w={} total={total}", sweep.k, cell.w));
            }
            if cell.n > 3 {
                bad.push(format!("k={} w={} preserving={}", sweep.k, cell.w, cell.n));
            }
            if cell.m > 3 {
                bad.push(format!("k={} w={} reversing={}", sweep.k, cell.w, cell.m));
            }
            if !cell.oracle_agrees {
                bad.push(format!("k={} w={} oracle disagrees", sweep.k, cell.w));
            }
        }
    }
    bad.truncate(5);
    CriterionResult {
        id: 2,
        name: criterion_name(2),
        passed: bad.is_empty(),
        details: format!(
            "{checked} cells checked, {excluded} excluded, sweep took {:.1} s{}",
            data.elapsed_secs,
            if bad.is_empty() {
                String::new()
            } else {
                format!("; failures: {bad:?}")
            }
        ),
    }
}

fn criterion_3() -> CriterionResult {
    let four_k = [1.0, 1.1, 2.0 / 3.0f64.sqrt(), 2.0, 2.01, 3.0];
    let eight_k = [1.16, 1.5, 1.92, 1.99];
    let mut bad: Vec<String> = Vec::new();
    for (ks, expect) in [(four_k.as_slice(), 4usize), (eight_k.as_slice(), 8)] {
        for &k in ks {
            let params = LensParams::new(k).unwrap();
            let cusps = match find_cusps(&params) {
                Ok(c) => c,
                Err(e) => {
                    bad.push(format!("k={k}: {e}"));
                    continue;
                }
            };
            if cusps.len() != expect {
                bad.push(format!("k={k}: {} cusps, expected {expect}", cusps.len()));
            }
            for c in &cusps {
                let gp = g_prime(&params, c.z).unwrap();
                if (gp.norm() - 1.0).abs() > 1e-8 {
                    bad.push(format!("k={k}: |g'| residual {}", (gp.norm() - 1.0).abs()));
                }
                let j = jet(&params, c.z).unwrap();
                let v = j.gpp * j.gpp / (gp * gp * gp);
                if v.im.abs() > 1e-8 || v.re <= 0.0 {
                    bad.push(format!("k={k}: cusp condition value {v}"));
                }
                match c.family {
                    CuspFamily::AxisReal => {
                        if c.image.re * c.z.re >= 0.0 {
                            bad.push(format!("k={k}: axis-real cusp image sign"));
                        }
                    }
                    CuspFamily::AxisImag => {
                        if c.image.im * c.z.im <= 0.0 {
                            bad.push(format!("k={k}: axis-imag cusp image sign"));
                        }
                    }
                    CuspFamily::Oblique => {}
                }
            }
        }
    }
    bad.truncate(5);
    CriterionResult {
        id: 3,
        name: criterion_name(3),
        passed: bad.is_empty(),
        details: if bad.is_empty() {
            "counts 4/8 as required, signs and residuals ok".into()
        } else {
            format!("{bad:?}")
        },
    }
}

fn criterion_4() -> CriterionResult {
    let mut bad: Vec<String> = Vec::new();
    if (positive_root_p(2.0) - 1.0).abs() > 1e-12 {
        bad.push(format!("r(2) = {}", positive_root_p(2.0)));
    }
    if (positive_root_p(2.0 / 3.0f64.sqrt()) - 3.0).abs() > 1e-10 {
        bad.push(format!("r(2/sqrt3) = {}", positive_root_p(2.0 / 3.0f64.sqrt())));
    }
    // The bound r(k) <= 3 holds exactly where the oblique-cusp system is
    // solvable, k >= 2/sqrt(3) (p(3) = 3k^2 - 4 < 0 below the threshold,
    // so there the unique positive root exceeds 3). Draw the random k from
    // the bound's domain and check sharpness on the other side.
    let threshold = 2.0 / 3.0f64.sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let k = rng.gen_range(threshold..5.0f64);
        let r = positive_root_p(k);
        if r > 3.0 + 1e-12 {
            bad.push(format!("r({k}) = {r} > 3"));
        }
    }
    for _ in 0..50 {
        let k = rng.gen_range(1e-6..threshold);
        let r = positive_root_p(k);
        if r <= 3.0 {
            bad.push(format!("r({k}) = {r} <= 3 below the threshold"));
        }
        // the root itself is still correct to 1e-12 residual
        let poly = |r: f64| ((r - 3.0) * r + (k * k - 1.0)) * r - 1.0;
        if poly(r).abs() > 1e-12 {
            bad.push(format!("residual {} at k={k}", poly(r)));
        }
    }
    // critical values of p for k < 2
    for j in 1..40 {
        let k = j as f64 * 0.05;
        if k >= 2.0 {
            break;
        }
        let d = ((4.0 - k * k) / 3.0f64).sqrt();
        let root = (12.0 - 3.0 * k * k).sqrt();
        let poly = |r: f64| ((r - 3.0) * r + (k * k - 1.0)) * r - 1.0;
        for (r_crit, sign) in [(1.0 + d, 1.0), (1.0 - d, -1.0)] {
            let expected = (k * k - 4.0) * (1.0 + sign * 2.0 / 9.0 * root);
            if (poly(r_crit) - expected).abs() > 1e-10 {
                bad.push(format!("critical value mismatch at k={k}"));
            }
        }
    }
    bad.truncate(5);
    CriterionResult {
        id: 4,
        name: criterion_name(4),
        passed: bad.is_empty(),
        details: if bad.is_empty() {
            "r(2)=1, r(2/sqrt3)=3, bound and critical values hold".into()
        } else {
            format!("{bad:?}")
        },
    }
}

fn criterion_5(data: &SweepData) -> CriterionResult {
    let mut bad: Vec<String> = Vec::new();
    let mut checked = 0usize;
    for sweep in &data.sweeps {
        for cell in &sweep.cells {
            if cell.excluded {
                continue;
            }
            checked += 1;
            if cell.idx_minus.abs() > 2 {
                bad.push(format!("k={} w={} idx_minus={}", sweep.k, cell.w, cell.idx_minus));
            }
            if cell.idx_plus.abs() > 3 {
                bad.push(format!("k={} w={} idx_plus={}", sweep.k, cell.w, cell.idx_plus));
            }
            if cell.idx_plus != cell.idx_plus_double_clip {
                bad.push(format!(
                    "k={} w={} clip dependence {} vs {}",
                    sweep.k, cell.w, cell.idx_plus, cell.idx_plus_double_clip
                ));
            }
        }
    }
    bad.truncate(5);
    CriterionResult {
        id: 5,
        name: criterion_name(5),
        passed: bad.is_empty(),
        details: format!(
            "{checked} cells: |I-|<=2, |I+|<=3, clip-stable{}",
            if bad.is_empty() {
                String::new()
            } else {
                format!("; failures {bad:?}")
            }
        ),
    }
}

fn criterion_6(data: &SweepData) -> CriterionResult {
    let mut off_curve = 0usize;
    let mut matches = 0usize;
    let mut stray_mismatch: Vec<String> = Vec::new();
    for sweep in &data.sweeps {
        for cell in &sweep.cells {
            if cell.excluded {
                continue;
            }
            off_curve += 1;
            let m_pred = 1 - cell.idx_minus;
            let n_pred = cell.idx_plus;
            if m_pred == cell.m as i64 && n_pred == cell.n as i64 {
                matches += 1;
            } else if cell.curve_distance > 1e-3 {
                stray_mismatch.push(format!(
                    "k={} w={} pred {}/{} solver {}/{} dist {:.1e}",
                    sweep.k, cell.w, m_pred, n_pred, cell.m, cell.n, cell.curve_distance
                ));
            }
        }
    }
    let fraction = matches as f64 / off_curve.max(1) as f64;

    // crossing parity on 100 transversal caustic crossings
    let mut crossings = 0usize;
    let mut parity_bad = 0usize;
    'outer: for sweep in &data.sweeps {
        let n = SWEEP_RESOLUTION;
        for row in 0..n {
            for col in 0..n {
                let idx = row * n + col;
                for (dr, dc) in [(0usize, 1usize), (1, 0)] {
                    let (r2, c2) = (row + dr, col + dc);
                    if r2 >= n || c2 >= n {
                        continue;
                    }
                    let a = &sweep.cells[idx];
                    let b = &sweep.cells[r2 * n + c2];
                    if a.excluded || b.excluded {
                        continue;
                    }
                    if sweep.proximity.caustic_crossings(a.w, b.w) == 1
                        && sweep.proximity.boundary_crossings(a.w, b.w) == 0
                    {
                        crossings += 1;
                        let da = (a.m + a.n) as i64;
                        let db = (b.m + b.n) as i64;
                        if (da - db).abs() != 2 {
                            parity_bad += 1;
                        }
                        if crossings >= 100 {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }

    stray_mismatch.truncate(5);
    let passed = fraction >= 0.995 && stray_mismatch.is_empty() && crossings >= 100 && parity_bad == 0;
    CriterionResult {
        id: 6,
        name: criterion_name(6),
        passed,
        details: format!(
            "agreement {:.3}% on {} off-curve cells; parity checked on {} crossings ({} bad){}",
            100.0 * fraction,
            off_curve,
            crossings,
            parity_bad,
            if stray_mismatch.is_empty() {
                String::new()
            } else {
                format!("; mismatches off-band: {stray_mismatch:?}")
            }
        ),
    }
}

fn criterion_7() -> CriterionResult {
    let mut bad: Vec<String> = Vec::new();

    // (a) k = 1.92: a total-6 cell exists within |w| < 1. The six-image
    // pocket is a sliver (about 0.02 wide near w = 0.67i), so probe a fine
    // line in the mirror-symmetric configuration first, then fall back to
    // a coarse grid with local refinement around any 5-count cell.
    let params = LensParams::new(1.92).unwrap();
    let proximity = CurveProximity::new(&params, 1.5).unwrap();
    let engine = IndexEngine::new(&params).unwrap();
    let probe = |w: Complex64| -> Option<i64> {
        if w.norm() >= 1.0 || proximity.distance(w) < 1e-5 {
            return None;
        }
        let im = engine.index_dminus(w).ok()?;
        let ip = engine.index_dplus(w, default_clip(&params, w)).ok()?;
        Some((1 - im) + ip)
    };
    let mut six_cell: Option<Complex64> = None;
    for j in 0..=400 {
        let w = Complex64::new(0.0, 0.4 + 0.5 * j as f64 / 400.0);
        if probe(w) == Some(6) {
            six_cell = Some(w);
            break;
        }
    }
    if six_cell.is_none() {
        let n = 81;
        'scan: for row in 0..n {
            for col in 0..n {
                let coarse = Complex64::new(
                    -1.0 + 2.0 * col as f64 / (n - 1) as f64,
                    -1.0 + 2.0 * row as f64 / (n - 1) as f64,
                );
                match probe(coarse) {
                    Some(6) => {
                        six_cell = Some(coarse);
                        break 'scan;
                    }
                    Some(5) => {
                        // refine around the adjacent five-count pocket
                        for dr in -6i32..=6 {
                            for dc in -6i32..=6 {
                                let w = coarse
                                    + 0.004 * Complex64::new(dc as f64, dr as f64);
                                if probe(w) == Some(6) {
                                    six_cell = Some(w);
                                    break 'scan;
                                }
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    match six_cell {
        Some(w) => {
            // confirm with the solver
            match find_all(&params, w) {
                Ok(r) if r.count() == 6 => {}
                Ok(r) => bad.push(format!("index said 6 at w={w}, solver found {}", r.count())),
                Err(e) => bad.push(format!("solver failed at w={w}: {e}")),
            }
        }
        None => bad.push("no total-6 cell found for k=1.92 within |w| < 1".into()),
    }

    // (b) k = 2.2: no cell with total >= 5 on a 201x201 grid over [-1,1]^2
    let params = LensParams::new(2.2).unwrap();
    let proximity = CurveProximity::new(&params, 1.5).unwrap();
    let engine = IndexEngine::new(&params).unwrap();
    let n = 201;
    let totals: Vec<Option<i64>> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let row = idx / n;
            let col = idx % n;
            let w = Complex64::new(
                -1.0 + 2.0 * col as f64 / (n - 1) as f64,
                -1.0 + 2.0 * row as f64 / (n - 1) as f64,
            );
            if proximity.distance(w) < crate::classify::ON_CURVE_BAND {
                return None;
            }
            let (Ok(im), Ok(ip)) = (
                engine.index_dminus(w),
                engine.index_dplus(w, default_clip(&params, w)),
            ) else {
                return None;
            };
            Some((1 - im) + ip)
        })
        .collect();
    let over = totals
        .iter()
        .flatten()
        .filter(|&&t| t >= 5)
        .count();
    if over > 0 {
        bad.push(format!("k=2.2: {over} cells with total >= 5"));
    }

    CriterionResult {
        id: 7,
        name: criterion_name(7),
        passed: bad.is_empty(),
        details: if bad.is_empty() {
            format!(
                "six-image cell at w={} for k=1.92; none >= 5 for k=2.2",
                six_cell.map(crate::format_complex).unwrap_or_default()
            )
        } else {
            format!("{bad:?}")
        },
    }
}

fn criterion_8(data: &SweepData) -> CriterionResult {
    // ten maximal-count cells, comfortably away from the curves; k values
    // whose maximal cells all hug a curve are backfilled with further
    // distinct maximal cells from the other grids
    let mut picks: Vec<(f64, Complex64, usize)> = Vec::new();
    for _round in 0..4 {
        for sweep in &data.sweeps {
            let max_total = sweep
                .cells
                .iter()
                .filter(|c| !c.excluded)
                .map(|c| c.m + c.n)
                .max()
                .unwrap_or(0);
            let mut cands: Vec<&CellRecord> = sweep
                .cells
                .iter()
                .filter(|c| !c.excluded && c.m + c.n == max_total && c.curve_distance > 1e-3)
                .collect();
            cands.sort_by(|a, b| b.curve_distance.total_cmp(&a.curve_distance));
            let fresh = cands.into_iter().find(|c| {
                picks
                    .iter()
                    .all(|(pk, pw, _)| *pk != sweep.k || (pw - c.w).norm() > 0.3)
            });
            if let Some(c) = fresh {
                picks.push((sweep.k, c.w, c.m + c.n));
            }
        }
        if picks.len() >= 10 {
            break;
        }
    }
    picks.truncate(10);
    let mut bad: Vec<String> = Vec::new();
    for &(k, w, total) in &picks {
        let params = LensParams::new(k).unwrap();
        for j in 0..8 {
            let theta = std::f64::consts::PI * j as f64 / 4.0;
            let wp = w + 1e-4 * Complex64::new(theta.cos(), theta.sin());
            match find_all(&params, wp) {
                Ok(r) if r.count() == total => {}
                Ok(r) => bad.push(format!(
                    "k={k} w={w} dir {j}: count {} vs {total}",
                    r.count()
                )),
                Err(e) => bad.push(format!("k={k} w={w} dir {j}: {e}")),
            }
        }
    }
    bad.truncate(5);
    CriterionResult {
        id: 8,
        name: criterion_name(8),
        passed: bad.is_empty() && picks.len() == 10,
        details: format!(
            "{} maximal-count points, 8 perturbations each{}",
            picks.len(),
            if bad.is_empty() {
                String::new()
            } else {
                format!("; failures {bad:?}")
            }
        ),
    }
}

fn criterion_9() -> CriterionResult {
    let params = LensParams::new(1.92).unwrap();
    let w = Complex64::new(0.0, 0.67);
    let viewport = Rect::square(3.0);
    let start = Instant::now();
    let img1 = match render_basins(&params, w, viewport, 400, 400) {
        Ok(i) => i,
        Err(e) => {
            return CriterionResult {
                id: 9,
                name: criterion_name(9),
                passed: false,
                details: format!("render failed: {e}"),
            }
        }
    };
    let img2 = render_basins(&params, w, viewport, 400, 400).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let bytes1 = crate::basins::ppm_bytes(&img1);
    let bytes2 = crate::basins::ppm_bytes(&img2);
    let deterministic = bytes1 == bytes2;
    let fraction = img1.resolved_fraction();
    let mut basins_present = [false; 3];
    for &l in &img1.labels {
        if (0..3).contains(&(l as i32)) {
            basins_present[l as usize] = true;
        }
    }
    let three = img1.attractors.len() == 3 && basins_present.iter().all(|&b| b);
    let no_fourth = img1.labels.iter().all(|&l| l == UNRESOLVED || l < 3);
    let passed = deterministic && fraction >= 0.99 && three && no_fourth;
    CriterionResult {
        id: 9,
        name: criterion_name(9),
        passed,
        details: format!(
            "resolved {:.2}%, 3 basins: {}, deterministic: {} ({:.1} s for two renders)",
            100.0 * fraction,
            three,
            deterministic,
            elapsed
        ),
    }
}

fn criterion_10() -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad = 0usize;
    let mut checked = 0usize;
    while checked < 1000 {
        let k = rng.gen_range(0.1..4.0);
        let z = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-3.0..3.0));
        let params = LensParams::new(k).unwrap();
        let Ok(f_z) = eval_f(&params, z) else { continue };
        let (Ok(f_conj), Ok(f_neg)) = (eval_f(&params, z.conj()), eval_f(&params, -z)) else {
            continue;
        };
        // skip points hugging the pole, where |f| blows up past the tolerance scale
        if f_z.norm() > 1e6 {
            continue;
        }
        checked += 1;
        if (f_conj - f_z.conj()).norm() > 1e-12 * f_z.norm().max(1.0) {
            bad += 1;
        }
        if (f_neg + f_z).norm() > 1e-12 * f_z.norm().max(1.0) {
            bad += 1;
        }
    }
    // conjugation-closed root sets for real sources
    let params = LensParams::new(1.3).unwrap();
    let mut root_bad = 0usize;
    for w in [Complex64::new(0.4, 0.0), Complex64::new(-2.0, 0.0)] {
        if let Ok(report) = find_all(&params, w) {
            for s in &report.solutions {
                if !report
                    .solutions
                    .iter()
                    .any(|t| (t.z - s.z.conj()).norm() < 1e-8)
                {
                    root_bad += 1;
                }
            }
        }
    }
    CriterionResult {
        id: 10,
        name: criterion_name(10),
        passed: bad == 0 && root_bad == 0,
        details: format!(
            "{checked} symmetry samples ({bad} failures); real-w root sets conjugation-closed ({root_bad} failures)"
        ),
    }
}
