//! Finding all solutions of `f(z) = w` in the strip.
//!
//! Two independent routes:
//!
//! * [`find_all`]: multi-start damped Newton on the harmonic linearization
//!   `a dz + b conj(dz) = r` with `a = f_z`, `b = f_zbar`,
//!   solved exactly by `dz = (conj(a) r - b conj(r)) / (|a|^2 - |b|^2)`;
//! * [`oracle_find_all`]: dense grid scan of `|f - w|` followed by
//!   derivative-free simplex descent on every local minimum. Shares only
//!   `eval_f` with the Newton path.
//!
//! A root with `J > 0` is orientation-preserving, `J < 0` reversing; the
//! root bound `|Im z| <= |w| + k` (from `|z - w| = k/|sin conj(z)|`)
//! confines the search rectangle.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::map::{eval_f, jet, shear_to_z, LensParams};

/// Newton convergence target.
const NEWTON_TOL: f64 = 1e-12;
/// Residual bound every reported solution must satisfy.
pub const SOLUTION_RESIDUAL: f64 = 1e-10;
/// Roots closer than this are considered the same solution.
pub const DEDUP_RADIUS: f64 = 1e-6;
/// |J| below this is tagged degenerate.
pub const DEGENERATE_JACOBIAN: f64 = 1e-8;
/// Default jitter stream for the Newton stall rule.
pub const DEFAULT_SEED: u64 = 42;

const STRIP_MARGIN: f64 = 1e-9;
const SEED_GRID_X: usize = 61;
const SEED_GRID_Y: usize = 121;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserving,
    Reversing,
    Degenerate,
}

/// A root of `f(z) = w` with its orientation data.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Solution {
    pub z: Complex64,
    pub orientation: Orientation,
    pub residual: f64,
    pub jacobian: f64,
}

impl Solution {
    fn from_root(params: &LensParams, z: Complex64, target: Complex64) -> Option<Solution> {
        let j = jet(params, z).ok()?;
        let residual = (j.value - target).norm();
        let orientation = if j.jacobian.abs() < DEGENERATE_JACOBIAN {
            Orientation::Degenerate
        } else if j.jacobian > 0.0 {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        };
        Some(Solution {
            z,
            orientation,
            residual,
            jacobian: j.jacobian,
        })
    }
}

/// Everything [`find_all`] learned about one query.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub solutions: Vec<Solution>,
    pub seeds_used: usize,
    pub oracle_agreement: Option<bool>,
    /// Set when the solution count leaves [1, 6] at alpha = 0; reported,
    /// never clamped.
    pub violation: Option<String>,
}

impl SolveReport {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn count_preserving(&self) -> usize {
        self.solutions
            .iter()
            .filter(|s| s.orientation == Orientation::Preserving)
            .count()
    }

    pub fn count_reversing(&self) -> usize {
        self.solutions
            .iter()
            .filter(|s| s.orientation == Orientation::Reversing)
            .count()
    }

    pub fn count_degenerate(&self) -> usize {
        self.solutions
            .iter()
            .filter(|s| s.orientation == Orientation::Degenerate)
            .count()
    }
}

fn clamp_to_strip(z: Complex64, y_bound: f64) -> Complex64 {
    Complex64::new(
        z.re.clamp(-FRAC_PI_2 + STRIP_MARGIN, FRAC_PI_2 - STRIP_MARGIN),
        z.im.clamp(-y_bound, y_bound),
    )
}

/// One damped-Newton run from `seed`; `None` on divergence or stall.
pub fn newton_solve(
    params: &LensParams,
    w: Complex64,
    seed: Complex64,
    max_iter: usize,
) -> Option<Solution> {
    newton_solve_seeded(params, w, seed, max_iter, DEFAULT_SEED)
}

/// Newton with an explicit jitter stream (the stall rule perturbs by 1e-4
/// in a random direction, at most 3 times, deterministically per seed).
pub fn newton_solve_seeded(
    params: &LensParams,
    w: Complex64,
    seed: Complex64,
    max_iter: usize,
    jitter_seed: u64,
) -> Option<Solution> {
    let y_bound = w.norm() + params.k().abs() + 5.0;
    let mut rng = ChaCha8Rng::seed_from_u64(
        jitter_seed ^ seed.re.to_bits().rotate_left(17) ^ seed.im.to_bits(),
    );
    let mut z = clamp_to_strip(seed, y_bound);
    let mut jitters = 0;
    let mut best = f64::INFINITY;
    let mut since_improvement = 0;
    for _ in 0..max_iter {
        let j = match jet(params, z) {
            Ok(j) => j,
            Err(_) => {
                // walked into the pole guard: nudge away or give up
                if jitters >= 3 {
                    return None;
                }
                jitters += 1;
                let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                z = clamp_to_strip(z + 1e-4 * Complex64::new(theta.cos(), theta.sin()), y_bound);
                continue;
            }
        };
        let r = w - j.value;
        let rn = r.norm();
        if rn < NEWTON_TOL {
            return Solution::from_root(params, z, w);
        }
        if rn < best * 0.75 {
            best = rn;
            since_improvement = 0;
        } else {
            since_improvement += 1;
            if since_improvement > 10 {
                return None;
            }
        }
        if j.jacobian.abs() < DEGENERATE_JACOBIAN {
            if jitters >= 3 {
                return None;
            }
            jitters += 1;
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            z = clamp_to_strip(z + 1e-4 * Complex64::new(theta.cos(), theta.sin()), y_bound);
            continue;
        }
        let dz = (j.d_z.conj() * r - j.d_zbar * r.conj()) / j.jacobian;
        z = clamp_to_strip(z + dz, y_bound);
    }
    None
}

/// Seeds that chase the root(s) adjacent to the pole: the fixed-point map
/// `S(z) = k/(conj(z) - conj(w))` contracts exactly where |g'| is large,
/// which is where the seed grid is coarsest relative to the Newton basin.
fn pole_adjacent_seeds(params: &LensParams, w: Complex64) -> Vec<Complex64> {
    let k = params.k_effective();
    let mut starts = vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.2, 0.0),
        Complex64::new(-0.2, 0.0),
        Complex64::new(0.0, 0.2),
        Complex64::new(0.0, -0.2),
    ];
    if w.norm() > 1e-9 {
        starts.push(-k / w.conj());
    }
    let mut seeds = Vec::new();
    'starts: for mut z in starts {
        for _ in 0..50 {
            let d = z.conj() - w.conj();
            if d.norm() < 1e-9 {
                continue 'starts;
            }
            let next = k / d;
            if !next.re.is_finite() || !next.im.is_finite() || next.norm() > 2.0 {
                continue 'starts;
            }
            if (next - z).norm() < 1e-10 {
                z = next;
                break;
            }
            z = next;
        }
        if z.norm() > 1e-3 && z.re.abs() < FRAC_PI_2 {
            seeds.push(z);
        }
    }
    seeds
}

/// Deterministic dedup: sort by residual, keep greedily at radius 1e-6.
fn dedup(mut candidates: Vec<Solution>) -> Vec<Solution> {
    candidates.sort_by(|a, b| {
        a.residual
            .total_cmp(&b.residual)
            .then(a.z.re.total_cmp(&b.z.re))
            .then(a.z.im.total_cmp(&b.z.im))
    });
    let mut kept: Vec<Solution> = Vec::new();
    for c in candidates {
        if kept.iter().all(|k| (k.z - c.z).norm() >= DEDUP_RADIUS) {
            kept.push(c);
        }
    }
    kept.sort_by(|a, b| b.z.im.total_cmp(&a.z.im).then(a.z.re.total_cmp(&b.z.re)));
    kept
}

fn multi_start(
    params: &LensParams,
    target: Complex64,
    y_half: f64,
    jitter_seed: u64,
) -> (Vec<Solution>, usize) {
    let delta = 0.01;
    let xs: Vec<f64> = (0..SEED_GRID_X)
        .map(|i| -FRAC_PI_2 + delta + (std::f64::consts::PI - 2.0 * delta) * i as f64 / (SEED_GRID_X - 1) as f64)
        .collect();
    let ys: Vec<f64> = (0..SEED_GRID_Y)
        .map(|j| -y_half + 2.0 * y_half * j as f64 / (SEED_GRID_Y - 1) as f64)
        .collect();
    let mut seeds: Vec<Complex64> = Vec::with_capacity(xs.len() * ys.len() + 8);
    for &y in &ys {
        for &x in &xs {
            let s = Complex64::new(x, y);
            if s.norm() >= 1e-3 {
                seeds.push(s);
            }
        }
    }
    seeds.extend(pole_adjacent_seeds(params, target));

    let max_iter = 48;
    let results: Vec<(Complex64, Option<Solution>)> = seeds
        .par_iter()
        .map(|&s| (s, newton_solve_seeded(params, target, s, max_iter, jitter_seed)))
        .collect();
    let mut seeds_used = seeds.len();

    let mut candidates: Vec<Solution> = Vec::new();
    let mut failures: Vec<Complex64> = Vec::new();
    for (seed, res) in results {
        match res {
            Some(sol) => candidates.push(sol),
            None => failures.push(seed),
        }
    }

    // perturbed re-seeds near failures
    failures.truncate(2000);
    let retried: Vec<Option<Solution>> = failures
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let mut rng = ChaCha8Rng::seed_from_u64(jitter_seed.wrapping_add(i as u64 + 1));
            let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let seed = s + 0.05 * Complex64::new(theta.cos(), theta.sin());
            newton_solve_seeded(params, target, seed, max_iter, jitter_seed)
        })
        .collect();
    seeds_used += failures.len();
    candidates.extend(retried.into_iter().flatten());

    let mut roots = dedup(candidates);

    // fold-twin sweep: a root just inside the caustic has a partner close
    // by; probe a small ring around every accepted root
    let ring: Vec<Complex64> = roots
        .iter()
        .flat_map(|r| {
            (0..8).map(move |j| {
                let theta = std::f64::consts::TAU * j as f64 / 8.0;
                r.z + 0.02 * Complex64::new(theta.cos(), theta.sin())
            })
        })
        .collect();
    let extra: Vec<Option<Solution>> = ring
        .par_iter()
        .map(|&s| newton_solve_seeded(params, target, s, max_iter, jitter_seed))
        .collect();
    seeds_used += ring.len();
    let mut all = std::mem::take(&mut roots);
    all.extend(extra.into_iter().flatten());
    let roots = dedup(all);

    (roots, seeds_used)
}

/// All solutions of `f(z) = w` in the strip (alpha = 0).
pub fn find_all(params: &LensParams, w: Complex64) -> Result<SolveReport> {
    find_all_seeded(params, w, DEFAULT_SEED)
}

/// [`find_all`] with an explicit jitter seed.
pub fn find_all_seeded(params: &LensParams, w: Complex64, jitter_seed: u64) -> Result<SolveReport> {
    if params.has_shear() {
        return Err(Error::InvalidParam(
            "find_all requires alpha = 0; use find_all_shear".into(),
        ));
    }
    let y_half = w.norm().max(1.0) + params.k() + 0.5;
    let (solutions, seeds_used) = multi_start(params, w, y_half, jitter_seed);
    let violation = if solutions.is_empty() || solutions.len() > 6 {
        Some(format!(
            "count {} outside [1, 6] at k={}, w={}",
            solutions.len(),
            params.k(),
            w
        ))
    } else {
        None
    };
    Ok(SolveReport {
        solutions,
        seeds_used,
        oracle_agreement: None,
        violation,
    })
}

/// All solutions of the sheared equation, solved in the substituted
/// variable `u = z - alpha conj(z)` (where the principal-branch constraint
/// is again |Re u| < pi/2) and mapped back. No count bound is asserted.
pub fn find_all_shear(params: &LensParams, w: Complex64) -> Result<SolveReport> {
    find_all_shear_seeded(params, w, DEFAULT_SEED)
}

pub fn find_all_shear_seeded(
    params: &LensParams,
    w: Complex64,
    jitter_seed: u64,
) -> Result<SolveReport> {
    let alpha = params.alpha();
    let target = w * (1.0 - alpha.norm_sqr());
    let spread = (1.0 - alpha.norm()).abs().max(0.2);
    // reduces exactly to find_all's bound at alpha = 0
    let y_half = (target.norm().max(1.0) + params.k_effective().abs()) / spread + 0.5;
    let (u_solutions, seeds_used) = multi_start(params, target, y_half, jitter_seed);
    let solutions = u_solutions
        .into_iter()
        .map(|mut s| {
            s.z = shear_to_z(params, s.z);
            s
        })
        .collect();
    Ok(SolveReport {
        solutions,
        seeds_used,
        oracle_agreement: None,
        violation: None,
    })
}

/// Finite-difference Jacobian of f, used by the oracle so its orientation
/// tags share nothing with the Newton jet.
fn jacobian_fd(params: &LensParams, z: Complex64) -> Option<f64> {
    let h = 1e-6;
    let i = Complex64::new(0.0, 1.0);
    let fx = (eval_f(params, z + h).ok()? - eval_f(params, z - h).ok()?) / (2.0 * h);
    let fy = (eval_f(params, z + i * h).ok()? - eval_f(params, z - i * h).ok()?) / (2.0 * h);
    let fz = (fx - i * fy) / 2.0;
    let fzbar = (fx + i * fy) / 2.0;
    Some(fz.norm_sqr() - fzbar.norm_sqr())
}

/// Nelder–Mead descent on |f - w|^2 with shrinking restarts.
fn simplex_refine(params: &LensParams, w: Complex64, start: Complex64, h: f64) -> Option<Complex64> {
    let cost = |z: Complex64| -> f64 {
        if z.re.abs() > FRAC_PI_2 - STRIP_MARGIN {
            return f64::INFINITY;
        }
        match eval_f(params, z) {
            Ok(v) => (v - w).norm_sqr(),
            Err(_) => f64::INFINITY,
        }
    };
    let mut best = start;
    for &size in &[h.max(1e-6), 1e-5, 1e-8] {
        let mut simplex = [
            best,
            best + Complex64::new(size, 0.0),
            best + Complex64::new(0.0, size),
        ];
        let mut values = simplex.map(&cost);
        for _ in 0..400 {
            // order: lowest first
            let mut idx = [0usize, 1, 2];
            idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            let (lo, mid, hi) = (idx[0], idx[1], idx[2]);
            if values[lo] < 1e-26 {
                break;
            }
            let centroid = (simplex[lo] + simplex[mid]) / 2.0;
            if (simplex[hi] - centroid).norm() < 1e-14 {
                break;
            }
            let reflected = centroid + (centroid - simplex[hi]);
            let fr = cost(reflected);
            if fr < values[lo] {
                let expanded = centroid + 2.0 * (centroid - simplex[hi]);
                let fe = cost(expanded);
                if fe < fr {
                    simplex[hi] = expanded;
                    values[hi] = fe;
                } else {
                    simplex[hi] = reflected;
                    values[hi] = fr;
                }
            } else if fr < values[mid] {
                simplex[hi] = reflected;
                values[hi] = fr;
            } else {
                let contracted = centroid + 0.5 * (simplex[hi] - centroid);
                let fc = cost(contracted);
                if fc < values[hi] {
                    simplex[hi] = contracted;
                    values[hi] = fc;
                } else {
                    // shrink toward the best vertex
                    for j in [mid, hi] {
                        simplex[j] = simplex[lo] + 0.5 * (simplex[j] - simplex[lo]);
                        values[j] = cost(simplex[j]);
                    }
                }
            }
        }
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        best = simplex[idx[0]];
    }
    if cost(best).sqrt() < SOLUTION_RESIDUAL {
        Some(best)
    } else {
        None
    }
}

/// Grid-scan oracle: local minima of |f - w| refined by simplex descent.
///
/// `grid_density` is the number of columns across the strip; rows scale
/// with the rectangle height (default 2000 gives a few thousand rows).
pub fn oracle_find_all(params: &LensParams, w: Complex64, grid_density: usize) -> Vec<Solution> {
    let k = params.k();
    let y_half = w.norm().max(1.0) + k + 0.5;
    let nx = grid_density.max(16);
    let ny = ((nx as f64 * (2.0 * y_half) / std::f64::consts::PI).ceil() as usize).max(16);
    let x0 = -FRAC_PI_2 + 1e-6;
    let x1 = FRAC_PI_2 - 1e-6;
    let dx = (x1 - x0) / (nx - 1) as f64;
    let dy = 2.0 * y_half / (ny - 1) as f64;
    let h = dx.max(dy);

    let values: Vec<f64> = (0..ny)
        .into_par_iter()
        .flat_map_iter(|row| {
            let y = -y_half + row as f64 * dy;
            (0..nx).map(move |col| {
                let z = Complex64::new(x0 + col as f64 * dx, y);
                if z.norm() < 1e-3 {
                    return f64::INFINITY;
                }
                match eval_f(params, z) {
                    Ok(v) => (v - w).norm(),
                    Err(_) => f64::INFINITY,
                }
            })
        })
        .collect();

    let at = |row: isize, col: isize| -> f64 {
        if row < 0 || col < 0 || row >= ny as isize || col >= nx as isize {
            f64::INFINITY
        } else {
            values[row as usize * nx + col as usize]
        }
    };

    let mut candidates: Vec<(Complex64, f64)> = Vec::new();
    for row in 0..ny as isize {
        for col in 0..nx as isize {
            let v = at(row, col);
            if !v.is_finite() {
                continue;
            }
            let mut is_min = true;
            let mut slope = 0.0f64;
            for dr in -1..=1 {
                for dc in -1..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let nb = at(row + dr, col + dc);
                    if nb < v {
                        is_min = false;
                    }
                    if nb.is_finite() {
                        slope = slope.max(nb - v);
                    }
                }
            }
            if is_min && (v < 0.05 || v < 5.0 * slope) {
                let z = Complex64::new(x0 + col as f64 * dx, -y_half + row as f64 * dy);
                candidates.push((z, v));
            }
        }
    }

    let refined: Vec<Complex64> = candidates
        .par_iter()
        .filter_map(|&(z, _)| simplex_refine(params, w, z, h))
        .collect();

    let mut roots: Vec<Complex64> = Vec::new();
    for z in refined {
        if roots.iter().all(|r| (r - z).norm() >= DEDUP_RADIUS) {
            roots.push(z);
        }
    }

    // fold-twin subscan: a fine window around each near-critical root
    // catches a partner the coarse grid blurred into the same basin;
    // roots with |J| this large sit far enough from the critical curve
    // that any partner is resolved by the coarse grid already
    let near_critical: Vec<Complex64> = roots
        .iter()
        .copied()
        .filter(|&z| jacobian_fd(params, z).map_or(true, |j| j.abs() < 0.4))
        .collect();
    let mut extra: Vec<Complex64> = Vec::new();
    for &root in &near_critical {
        let half = 8.0 * h;
        let fine = 81usize;
        let step = 2.0 * half / (fine - 1) as f64;
        let mut vals = vec![f64::INFINITY; fine * fine];
        for r in 0..fine {
            for c in 0..fine {
                let z = root + Complex64::new(-half + c as f64 * step, -half + r as f64 * step);
                if z.re.abs() > FRAC_PI_2 - STRIP_MARGIN || z.norm() < 1e-3 {
                    continue;
                }
                if let Ok(v) = eval_f(params, z) {
                    vals[r * fine + c] = (v - w).norm();
                }
            }
        }
        for r in 1..fine - 1 {
            for c in 1..fine - 1 {
                let v = vals[r * fine + c];
                if !v.is_finite() {
                    continue;
                }
                let mut is_min = true;
                let mut slope = 0.0f64;
                for dr in -1i32..=1 {
                    for dc in -1i32..=1 {
                        if dr == 0 && dc == 0 {
                            continue;
                        }
                        let nb = vals[(r as i32 + dr) as usize * fine + (c as i32 + dc) as usize];
                        if nb < v {
                            is_min = false;
                        }
                        if nb.is_finite() {
                            slope = slope.max(nb - v);
                        }
                    }
                }
                if is_min && v < 5.0 * slope.max(1e-3) {
                    let z = root + Complex64::new(-half + c as f64 * step, -half + r as f64 * step);
                    if let Some(refined) = simplex_refine(params, w, z, step) {
                        extra.push(refined);
                    }
                }
            }
        }
    }
    for z in extra {
        if roots.iter().all(|r| (r - z).norm() >= DEDUP_RADIUS) {
            roots.push(z);
        }
    }

    let mut solutions: Vec<Solution> = roots
        .into_iter()
        .filter_map(|z| {
            let value = eval_f(params, z).ok()?;
            let residual = (value - w).norm();
            if residual >= SOLUTION_RESIDUAL {
                return None;
            }
            let jac = jacobian_fd(params, z)?;
            let orientation = if jac.abs() < DEGENERATE_JACOBIAN {
                Orientation::Degenerate
            } else if jac > 0.0 {
                Orientation::Preserving
            } else {
                Orientation::Reversing
            };
            Some(Solution {
                z,
                orientation,
                residual,
                jacobian: jac,
            })
        })
        .collect();
    solutions.sort_by(|a, b| b.z.im.total_cmp(&a.z.im).then(a.z.re.total_cmp(&b.z.re)));
    solutions
}

/// Same multiset of roots (to 1e-6), position-wise.
pub fn same_root_set(a: &[Solution], b: &[Solution], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for sa in a {
        let mut matched = false;
        for (i, sb) in b.iter().enumerate() {
            if !used[i] && (sa.z - sb.z).norm() < tol {
                used[i] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return false;
        }
    }
    true
}
