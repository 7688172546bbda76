//! Closed-form tracing of the critical curve: the locus |g'(z)| = 1.
//!
//! Parametrized by `t = -arg g'`. On the curve `g'(z) = e^{-it}`, and with
//! `s = cos z` this reduces to the quadratic `s^2 + k e^{it} s - 1 = 0`,
//! whose roots multiply to -1, so exactly one root has `Re s > 0` away from
//! the strip boundary. The two cosine preimages `±acos(s)` give the curve.
//!
//! Topology: a single loop around the pole for `k < 2`; at `k = 2` the loop
//! bifurcates into four arcs ending on `Re z = ±pi/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::map::LensParams;

/// Re s below this is treated as "on the strip boundary".
const BOUNDARY_RE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    /// k < 2: one closed loop around the pole.
    OneLoop,
    /// k >= 2: four open arcs with endpoints on Re z = ±pi/2.
    FourArcs,
}

/// One sampled arc of the critical curve. `ts[i]` is the parameter of
/// `points[i]`; within an arc the parameter is monotone (it may exceed
/// 2*pi on the closed loop, which covers the parameter circle twice).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalArc {
    pub ts: Vec<f64>,
    pub points: Vec<Complex64>,
}

/// Endpoints of the curve on Re z = -pi/2 (k >= 2), with Im v2 < Im v1 < 0,
/// and the parameter `t0 = asinh(k/2 - sqrt(k^2/4 - 1))` locating v1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripEndpoints {
    pub v1: Complex64,
    pub v2: Complex64,
    pub t0: f64,
}

impl StripEndpoints {
    /// |Im v2| = asinh(k/2 + sqrt(k^2/4 - 1)).
    pub fn t2(&self) -> f64 {
        -self.v2.im
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalCurve {
    pub k: f64,
    pub topology: Topology,
    pub arcs: Vec<CriticalArc>,
    pub endpoints: Option<StripEndpoints>,
}

/// Both roots of `s^2 + k e^{it} s - 1 = 0`, stable root first.
///
/// The larger-magnitude root is computed without cancellation, the other
/// from the exact product `s1 * s2 = -1`. A vanishing discriminant (k = 2
/// at t = ±pi/2) collapses both roots to -k e^{it}/2.
pub fn critical_quadratic_roots(params: &LensParams, t: f64) -> (Complex64, Complex64) {
    quadratic_roots(params.k(), t)
}

fn quadratic_roots(k: f64, t: f64) -> (Complex64, Complex64) {
    let e = Complex64::new(t.cos(), t.sin());
    let b = k * e;
    let disc2 = b * b + 4.0;
    if disc2.norm() < 1e-13 {
        let s = -b / 2.0;
        return (s, s);
    }
    let disc = disc2.sqrt();
    // pick the sqrt sign that adds constructively to -b
    let d = if (-b).re * disc.re + (-b).im * disc.im >= 0.0 {
        disc
    } else {
        -disc
    };
    let s1 = (-b + d) / 2.0;
    let s2 = -1.0 / s1;
    (s1, s2)
}

/// The root with `Re s > 0` of the critical quadratic at parameter `t`.
///
/// Errors with [`Error::BoundaryCase`] when both roots are purely imaginary
/// (only possible for k >= 2 at t = ±pi/2).
pub fn critical_s(params: &LensParams, t: f64) -> Result<Complex64> {
    match s_positive(params.k(), t) {
        Some(s) => Ok(s),
        None => Err(Error::BoundaryCase(t)),
    }
}

pub(crate) fn s_positive(k: f64, t: f64) -> Option<Complex64> {
    let (s1, s2) = quadratic_roots(k, t);
    if s1.re > BOUNDARY_RE_EPS {
        Some(s1)
    } else if s2.re > BOUNDARY_RE_EPS {
        Some(s2)
    } else {
        None
    }
}

/// Preimage of `s(tau)` under cos nearest to `hint`; the branch choice
/// between ±acos realizes a continuous lift along the curve.
pub(crate) fn lift_near(k: f64, tau: f64, hint: Complex64) -> Option<Complex64> {
    let s = s_positive(k, tau)?;
    let a = s.acos();
    if (a - hint).norm() <= (-a - hint).norm() {
        Some(a)
    } else {
        Some(-a)
    }
}

/// Closed-loop samples for k < 2: the parameter runs over two full circles
/// (the cosine is a degree-2 cover), `n` samples per circle, first point
/// repeated at the end.
pub(crate) fn loop_samples(k: f64, n: usize) -> Vec<(f64, Complex64)> {
    let step = 2.0 * PI / n as f64;
    let mut out = Vec::with_capacity(2 * n + 1);
    let s0 = s_positive(k, 0.0).expect("t = 0 is never a boundary case");
    let mut prev = s0.acos(); // real, in (0, pi/2)
    out.push((0.0, prev));
    for j in 1..2 * n {
        let tau = j as f64 * step;
        let z = lift_near(k, tau, prev).expect("k < 2 has no boundary cases");
        out.push((tau, z));
        prev = z;
    }
    out.push((4.0 * PI, out[0].1));
    out
}

/// Arc specification for k >= 2: parameter interval and exact endpoints.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ArcSpec {
    pub t_a: f64,
    pub t_b: f64,
    pub z_a: Complex64,
    pub z_b: Complex64,
}

/// The four arcs for k >= 2 in order right, top, left, bottom.
pub(crate) fn four_arc_specs(k: f64) -> [ArcSpec; 4] {
    let root = (k * k / 4.0 - 1.0).max(0.0).sqrt();
    let t0 = (k / 2.0 - root).asinh();
    let t2 = (k / 2.0 + root).asinh();
    let right = ArcSpec {
        t_a: -FRAC_PI_2,
        t_b: FRAC_PI_2,
        z_a: Complex64::new(FRAC_PI_2, -t0),
        z_b: Complex64::new(FRAC_PI_2, t0),
    };
    let top = ArcSpec {
        t_a: FRAC_PI_2,
        t_b: 3.0 * FRAC_PI_2,
        z_a: Complex64::new(FRAC_PI_2, t2),
        z_b: Complex64::new(-FRAC_PI_2, t2),
    };
    let left = ArcSpec {
        t_a: -FRAC_PI_2,
        t_b: FRAC_PI_2,
        z_a: Complex64::new(-FRAC_PI_2, t0),
        z_b: Complex64::new(-FRAC_PI_2, -t0),
    };
    let bottom = ArcSpec {
        t_a: FRAC_PI_2,
        t_b: 3.0 * FRAC_PI_2,
        z_a: Complex64::new(-FRAC_PI_2, -t2),
        z_b: Complex64::new(FRAC_PI_2, -t2),
    };
    [right, top, left, bottom]
}

/// Sample one k >= 2 arc: exact endpoints, `n` lifted interior points.
/// The left/bottom arcs are the pointwise negation of right/top, selected
/// by `negate`.
pub(crate) fn arc_samples(k: f64, spec: &ArcSpec, n: usize, negate: bool) -> Vec<(f64, Complex64)> {
    let mut out = Vec::with_capacity(n + 2);
    out.push((spec.t_a, spec.z_a));
    let mut prev = spec.z_a;
    for j in 1..=n {
        let tau = spec.t_a + (spec.t_b - spec.t_a) * j as f64 / (n + 1) as f64;
        let base = lift_near(k, tau, if negate { -prev } else { prev })
            .expect("interior of arc interval has Re s > 0");
        let z = if negate { -base } else { base };
        out.push((tau, z));
        prev = z;
    }
    out.push((spec.t_b, spec.z_b));
    out
}

/// Trace the whole critical curve.
pub fn trace_critical(params: &LensParams, samples_per_arc: usize) -> Result<CriticalCurve> {
    if params.has_shear() {
        return Err(Error::InvalidParam(
            "critical curve tracing requires alpha = 0".into(),
        ));
    }
    if samples_per_arc < 16 {
        return Err(Error::InvalidParam(format!(
            "samples_per_arc must be >= 16, got {samples_per_arc}"
        )));
    }
    let k = params.k();
    if k < 2.0 {
        let samples = loop_samples(k, 2 * samples_per_arc);
        let (ts, points) = samples.into_iter().unzip();
        Ok(CriticalCurve {
            k,
            topology: Topology::OneLoop,
            arcs: vec![CriticalArc { ts, points }],
            endpoints: None,
        })
    } else {
        let specs = four_arc_specs(k);
        let arcs = specs
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                let negate = i >= 2; // left, bottom mirror right, top
                let (ts, points) = arc_samples(k, spec, samples_per_arc, negate)
                    .into_iter()
                    .unzip();
                CriticalArc { ts, points }
            })
            .collect();
        Ok(CriticalCurve {
            k,
            topology: Topology::FourArcs,
            arcs,
            endpoints: Some(strip_endpoints(params)?),
        })
    }
}

/// Endpoints of the curve on Re z = -pi/2 for k >= 2.
pub fn strip_endpoints(params: &LensParams) -> Result<StripEndpoints> {
    let k = params.k();
    if k < 2.0 {
        return Err(Error::InvalidParam(format!(
            "strip endpoints exist only for k >= 2, got k = {k}"
        )));
    }
    let root = (k * k / 4.0 - 1.0).sqrt();
    let t0 = (k / 2.0 - root).asinh();
    let t2 = (k / 2.0 + root).asinh();
    Ok(StripEndpoints {
        v1: Complex64::new(-FRAC_PI_2, -t0),
        v2: Complex64::new(-FRAC_PI_2, -t2),
        t0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{g_prime, jet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(k: f64) -> LensParams {
        LensParams::new(k).unwrap()
    }

    #[test]
    fn s_at_t_zero_is_the_small_positive_root() {
        for k in [0.5, 1.0, 1.1, 1.92, 2.0, 2.5, 3.0] {
            let s = critical_s(&p(k), 0.0).unwrap();
            let expect = -k / 2.0 + (k * k / 4.0 + 1.0).sqrt();
            assert!((s - expect).norm() < 1e-14, "k={k}");
            assert!(s.re > 0.0 && s.re < 1.0 && s.im.abs() < 1e-15);
        }
        // golden-ratio case
        let s = critical_s(&p(1.0), 0.0).unwrap();
        assert!((s.re - 0.618_033_988_749_894_9).abs() < 1e-15);
    }

    #[test]
    fn s_at_t_pi_exceeds_one() {
        for k in [0.5, 1.0, 1.92, 2.5] {
            let s = critical_s(&p(k), PI).unwrap();
            let expect = k / 2.0 + (k * k / 4.0 + 1.0).sqrt();
            assert!((s - expect).norm() < 1e-12, "k={k}");
            assert!(s.re > 1.0);
            // z = ±acos(s) is then purely imaginary
            let z = s.acos();
            assert!(z.re.abs() < 1e-12);
        }
    }

    #[test]
    fn quadratic_roots_multiply_to_minus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let k = rng.gen_range(0.05..5.0);
            let t = rng.gen_range(0.0..2.0 * PI);
            let (s1, s2) = critical_quadratic_roots(&p(k), t);
            assert!((s1 * s2 + 1.0).norm() < 1e-12, "k={k} t={t}");
            // and they satisfy the quadratic
            let e = Complex64::new(t.cos(), t.sin());
            for s in [s1, s2] {
                assert!((s * s + k * e * s - 1.0).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn boundary_case_at_half_pi_for_k_at_least_two() {
        assert!(matches!(
            critical_s(&p(2.01), FRAC_PI_2),
            Err(Error::BoundaryCase(_))
        ));
        assert!(matches!(
            critical_s(&p(2.0), FRAC_PI_2),
            Err(Error::BoundaryCase(_))
        ));
        // but fine for k < 2
        assert!(critical_s(&p(1.99), FRAC_PI_2).is_ok());
    }

    #[test]
    fn discriminant_vanishes_only_at_k_two() {
        // witness of the bifurcation: min over t of |k^2 e^{2it} + 4| = |k^2 - 4|
        for k in [1.5f64, 1.99, 2.0, 2.01, 3.0] {
            let min = (0..=2000)
                .map(|j| {
                    let t = j as f64 * PI / 1000.0;
                    let e2 = Complex64::new((2.0 * t).cos(), (2.0 * t).sin());
                    (k * k * e2 + 4.0).norm()
                })
                .fold(f64::INFINITY, f64::min);
            if (k - 2.0).abs() < 1e-15 {
                assert!(min < 1e-10, "k=2 should have vanishing discriminant");
            } else {
                assert!((min - (k * k - 4.0).abs()).abs() < 1e-4);
                assert!(min > 1e-3);
            }
        }
    }

    #[test]
    fn topology_switches_at_two() {
        assert_eq!(
            trace_critical(&p(1.1), 256).unwrap().topology,
            Topology::OneLoop
        );
        assert_eq!(
            trace_critical(&p(1.99), 256).unwrap().topology,
            Topology::OneLoop
        );
        assert_eq!(
            trace_critical(&p(2.0), 256).unwrap().topology,
            Topology::FourArcs
        );
        assert_eq!(
            trace_critical(&p(2.01), 256).unwrap().topology,
            Topology::FourArcs
        );
    }

    #[test]
    fn loop_is_closed_and_monotone_in_t() {
        let cc = trace_critical(&p(1.1), 512).unwrap();
        let arc = &cc.arcs[0];
        assert_eq!(arc.points.first(), arc.points.last());
        assert!(arc.ts.windows(2).all(|w| w[1] > w[0]));
        assert!(arc.points.len() >= 2 * 512);
    }

    #[test]
    fn every_sample_satisfies_the_defining_equation() {
        for k in [0.5, 1.1, 1.92, 2.0, 2.01, 3.0] {
            let cc = trace_critical(&p(k), 512).unwrap();
            for arc in &cc.arcs {
                for &z in &arc.points {
                    let gp = g_prime(&p(k), z).unwrap();
                    assert!(
                        (gp.norm() - 1.0).abs() < 1e-10,
                        "k={k} z={z} |g'|={}",
                        gp.norm()
                    );
                    assert!(z.re.abs() <= FRAC_PI_2 + 1e-12);
                    // consistency with the jet: J = 0 on the curve
                    assert!(jet(&p(k), z).unwrap().jacobian.abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn samples_match_parameter() {
        // each sample's t must equal -arg g'(z) (mod 2*pi)
        let k = 1.7;
        let cc = trace_critical(&p(k), 256).unwrap();
        for arc in &cc.arcs {
            for (&t, &z) in arc.ts.iter().zip(&arc.points) {
                let gp = g_prime(&p(k), z).unwrap();
                let t_z = -gp.arg();
                let diff = (t - t_z).rem_euclid(2.0 * PI);
                let diff = diff.min(2.0 * PI - diff);
                assert!(diff < 1e-9, "t={t} vs -arg g' = {t_z}");
            }
        }
    }

    #[test]
    fn four_fold_symmetry_of_sample_set() {
        for k in [1.1, 1.92, 2.01] {
            let cc = trace_critical(&p(k), 512).unwrap();
            let all: Vec<Complex64> = cc.arcs.iter().flat_map(|a| a.points.clone()).collect();
            let max_step = cc
                .arcs
                .iter()
                .flat_map(|a| a.points.windows(2).map(|w| (w[1] - w[0]).norm()))
                .fold(0.0f64, f64::max);
            for reflect in [
                |z: Complex64| z.conj(),
                |z: Complex64| -z,
                |z: Complex64| -z.conj(),
            ] {
                let hausdorff = all
                    .iter()
                    .map(|&z| {
                        let rz = reflect(z);
                        all.iter()
                            .map(|&u| (u - rz).norm())
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0f64, f64::max);
                assert!(
                    hausdorff < 2.0 * max_step,
                    "k={k}: hausdorff {hausdorff} vs step {max_step}"
                );
            }
        }
    }

    #[test]
    fn strip_endpoint_values() {
        // k = 2: sinh t0 = 1
        let se = strip_endpoints(&p(2.0)).unwrap();
        assert!((se.t0 - 1.0f64.asinh()).abs() < 1e-15);
        assert!((se.t0 - 0.881_373_587_019_543).abs() < 1e-12);
        assert_eq!(se.v1, se.v2); // degenerate touching

        // k = 2.01: frozen from direct evaluation of the formula
        let se = strip_endpoints(&p(2.01)).unwrap();
        assert!((se.t0.sinh() - 0.904_875_078_027_497_3).abs() < 1e-12);
        assert!((se.t0 - 0.812_486_163_386_316_3).abs() < 1e-12);
        assert!(se.v2.im < se.v1.im && se.v1.im < 0.0);

        // sinh t0 < 1 for k > 2
        for k in [2.01, 2.2, 3.0, 10.0] {
            let se = strip_endpoints(&p(k)).unwrap();
            assert!(se.t0.sinh() < 1.0, "k={k}");
            // endpoints actually on the curve
            for v in [se.v1, se.v2] {
                let gp = g_prime(&p(k), v).unwrap();
                assert!((gp.norm() - 1.0).abs() < 1e-10);
            }
        }

        assert!(strip_endpoints(&p(1.99)).is_err());
    }

    #[test]
    fn four_arcs_end_on_strip_boundary() {
        let cc = trace_critical(&p(2.01), 256).unwrap();
        assert_eq!(cc.arcs.len(), 4);
        for arc in &cc.arcs {
            let first = arc.points.first().unwrap();
            let last = arc.points.last().unwrap();
            assert!((first.re.abs() - FRAC_PI_2).abs() < 1e-12);
            assert!((last.re.abs() - FRAC_PI_2).abs() < 1e-12);
            assert!(arc.ts.windows(2).all(|w| w[1] > w[0]));
        }
        // k = 2: arcs touch at the degenerate endpoints
        let cc2 = trace_critical(&p(2.0), 256).unwrap();
        let se = cc2.endpoints.unwrap();
        assert_eq!(se.v1, se.v2);
    }
}
