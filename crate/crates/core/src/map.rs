//! The lens map `f(z) = z + conj(g(z))` with `g(z) = -k/sin z`, its
//! Wirtinger derivatives and Jacobian, and the sheared variant.
//!
//! Everything else in the crate is built on the jet returned by [`jet`]:
//! `f_z = 1`, `f_zbar = conj(g'(z))`, `J = |f_z|^2 - |f_zbar|^2`.
//! With a shear `alpha` the solve happens in the substituted variable
//! `u = z - alpha*conj(z)`, where the map becomes
//! `F(u) = u + alpha*conj(u) - k1/sin(conj u)` with `k1 = k(1-|alpha|^2)`;
//! [`jet`] evaluates exactly that when `alpha != 0`, so one Newton kernel
//! serves both cases.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Evaluation refuses |sin z| below this radius; keeps residuals meaningful
/// near the pole at 0 without masking genuine roots.
pub const POLE_RADIUS: f64 = 1e-13;

/// Model parameters: mass scale `k > 0` and optional shear `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LensParams {
    k: f64,
    alpha: Complex64,
}

impl LensParams {
    /// Shear-free lens with mass scale `k > 0`.
    pub fn new(k: f64) -> Result<Self> {
        Self::with_shear(k, Complex64::new(0.0, 0.0))
    }

    /// Lens with shear. Requires `k > 0` and `|alpha| != 1` (the variable
    /// substitution divides by `1 - |alpha|^2`).
    pub fn with_shear(k: f64, alpha: Complex64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidParam(format!("k must be positive, got {k}")));
        }
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::InvalidParam("alpha must be finite".into()));
        }
        if alpha != Complex64::new(0.0, 0.0) && (alpha.norm() - 1.0).abs() < 1e-12 {
            return Err(Error::InvalidParam(format!(
                "|alpha| = 1 is excluded, got alpha = {alpha}"
            )));
        }
        Ok(Self { k, alpha })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn has_shear(&self) -> bool {
        self.alpha != Complex64::new(0.0, 0.0)
    }

    /// `k1 = k (1 - |alpha|^2)`; equals `k` without shear.
    pub fn k_effective(&self) -> f64 {
        self.k * (1.0 - self.alpha.norm_sqr())
    }
}

/// Value and first/second derivative data of the map at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapJet {
    /// f(z) (or F(u) minus its constant term, with shear).
    pub value: Complex64,
    /// d f / d z; identically 1.
    pub d_z: Complex64,
    /// d f / d conj(z) = conj(g'(z)) (+ alpha with shear).
    pub d_zbar: Complex64,
    /// |d_z|^2 - |d_zbar|^2.
    pub jacobian: f64,
    /// g''(z) = -k (1 + cos^2 z)/sin^3 z (with k1 in place of k under shear).
    pub gpp: Complex64,
}

/// sin and cos of a complex argument with one real sin_cos/sinh/cosh each.
#[inline]
pub(crate) fn sin_cos(z: Complex64) -> (Complex64, Complex64) {
    let (sx, cx) = z.re.sin_cos();
    let shy = z.im.sinh();
    let chy = z.im.cosh();
    (
        Complex64::new(sx * chy, cx * shy),
        Complex64::new(cx * chy, -sx * shy),
    )
}

/// Evaluate the map. Without shear: `f(z) = z - k/sin(conj z)`.
/// With shear: the w-independent part `z + alpha*conj(z) - k1/sin(conj z)`.
pub fn eval_f(params: &LensParams, z: Complex64) -> Result<Complex64> {
    let (s, _) = sin_cos(z);
    let ns = s.norm();
    if ns < POLE_RADIUS {
        return Err(Error::Pole(ns));
    }
    let k1 = params.k_effective();
    let base = z - k1 / s.conj();
    if params.has_shear() {
        Ok(base + params.alpha * z.conj())
    } else {
        Ok(base)
    }
}

/// Full jet: value, Wirtinger pair, Jacobian and g''.
pub fn jet(params: &LensParams, z: Complex64) -> Result<MapJet> {
    let (s, c) = sin_cos(z);
    let ns = s.norm();
    if ns < POLE_RADIUS {
        return Err(Error::Pole(ns));
    }
    let k1 = params.k_effective();
    let s2 = s * s;
    let gp = k1 * c / s2;
    let gpp = -k1 * (1.0 + c * c) / (s2 * s);
    let mut value = z - k1 / s.conj();
    let mut d_zbar = gp.conj();
    if params.has_shear() {
        value += params.alpha * z.conj();
        d_zbar += params.alpha;
    }
    Ok(MapJet {
        value,
        d_z: Complex64::new(1.0, 0.0),
        d_zbar,
        jacobian: 1.0 - d_zbar.norm_sqr(),
        gpp,
    })
}

/// `g'(z) = k cos z / sin^2 z` alone (no shear term).
pub fn g_prime(params: &LensParams, z: Complex64) -> Result<Complex64> {
    let (s, c) = sin_cos(z);
    let ns = s.norm();
    if ns < POLE_RADIUS {
        return Err(Error::Pole(ns));
    }
    Ok(params.k_effective() * c / (s * s))
}

/// The three reflections `(conj z, -z, -conj z)` used by the symmetry
/// identities `f(conj z) = conj(f(z))` and `f(-z) = -f(z)`.
pub fn symmetry_images(z: Complex64) -> (Complex64, Complex64, Complex64) {
    (z.conj(), -z, -z.conj())
}

/// Map a shear-variable root `u` back to the physical variable:
/// `z = (u + alpha*conj(u)) / (1 - |alpha|^2)`.
pub fn shear_to_z(params: &LensParams, u: Complex64) -> Complex64 {
    (u + params.alpha * u.conj()) / (1.0 - params.alpha.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Independent Taylor-series sine, used as an oracle for eval_f checks.
    fn series_sin(z: Complex64) -> Complex64 {
        let mut term = z;
        let mut sum = z;
        let z2 = z * z;
        for n in 1..60 {
            term *= -z2 / ((2 * n) as f64 * (2 * n + 1) as f64);
            sum += term;
            if term.norm() < 1e-18 * sum.norm().max(1.0) {
                break;
            }
        }
        sum
    }

    fn p(k: f64) -> LensParams {
        LensParams::new(k).unwrap()
    }

    #[test]
    fn eval_at_i_matches_sinh_formula() {
        // f(iy) = i (y - k/sinh y); at k=1, y=1 this is 0.149082...i.
        let v = eval_f(&p(1.0), Complex64::new(0.0, 1.0)).unwrap();
        assert!((v - Complex64::new(0.0, 0.14908187176067844)).norm() < 1e-14);
        // cross-check against the series oracle
        let z = Complex64::new(0.0, 1.0);
        let via_series = z - 1.0 / series_sin(z.conj());
        assert!((v - via_series).norm() < 1e-13);
    }

    #[test]
    fn eval_on_strip_boundary() {
        // f(pi/2) = pi/2 - k, the value of phi at y = 0.
        let v = eval_f(&p(2.01), Complex64::new(std::f64::consts::FRAC_PI_2, 0.0)).unwrap();
        assert!((v.re - (std::f64::consts::FRAC_PI_2 - 2.01)).abs() < 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn real_axis_stays_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x: f64 = rng.gen_range(0.05..std::f64::consts::FRAC_PI_2);
            let k: f64 = rng.gen_range(0.1..4.0);
            let v = eval_f(&p(k), Complex64::new(x, 0.0)).unwrap();
            assert_eq!(v.im, 0.0);
            assert!((v.re - (x - k / x.sin())).abs() < 1e-12);
        }
    }

    #[test]
    fn jet_at_quarter_pi() {
        // |g'(pi/4)| = k cos / sin^2 = (sqrt2/2)/(1/2) = sqrt2 for k=1.
        let j = jet(&p(1.0), Complex64::new(std::f64::consts::FRAC_PI_4, 0.0)).unwrap();
        assert!((j.d_zbar.norm() - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((j.jacobian - (-1.0)).abs() < 1e-12);
        assert_eq!(j.d_z, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn jet_at_half_pi() {
        let j = jet(&p(1.7), Complex64::new(std::f64::consts::FRAC_PI_2, 0.0)).unwrap();
        assert!(j.d_zbar.norm() < 1e-15);
        assert!((j.jacobian - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pole_is_refused() {
        assert!(matches!(
            eval_f(&p(1.0), Complex64::new(1e-14, 0.0)),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            jet(&p(1.0), Complex64::new(0.0, 0.0)),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn symmetry_images_are_reflections() {
        let z = Complex64::new(1.0, 2.0);
        let (a, b, c) = symmetry_images(z);
        assert_eq!(a, Complex64::new(1.0, -2.0));
        assert_eq!(b, Complex64::new(-1.0, -2.0));
        assert_eq!(c, Complex64::new(-1.0, 2.0));
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(symmetry_images(zero), (zero, zero, zero));
    }

    #[test]
    fn jacobian_sign_near_pole_and_far_up() {
        // Near the pole |g'| blows up: J < 0. Far up the strip J -> 1.
        for theta in [0.0f64, 1.0, 2.5, 4.0] {
            let z = 0.05 * Complex64::new(theta.cos(), theta.sin());
            assert!(jet(&p(1.0), z).unwrap().jacobian < 0.0);
        }
        for x in [-1.2, 0.0, 1.2] {
            let z = Complex64::new(x, 5.0);
            assert!(jet(&p(1.0), z).unwrap().jacobian > 0.0);
        }
    }

    #[test]
    fn wirtinger_pair_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let params = p(1.3);
        let h = 1e-6;
        let mut checked = 0;
        while checked < 1000 {
            let z = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-3.0..3.0));
            let (s, _) = sin_cos(z);
            if s.norm() < 0.05 {
                continue;
            }
            let j = jet(&params, z).unwrap();
            let fx = (eval_f(&params, z + Complex64::new(h, 0.0)).unwrap()
                - eval_f(&params, z - Complex64::new(h, 0.0)).unwrap())
                / (2.0 * h);
            let fy = (eval_f(&params, z + Complex64::new(0.0, h)).unwrap()
                - eval_f(&params, z - Complex64::new(0.0, h)).unwrap())
                / (2.0 * h);
            let i = Complex64::new(0.0, 1.0);
            let dz = (fx - i * fy) / 2.0;
            let dzbar = (fx + i * fy) / 2.0;
            let scale = 1.0 + j.d_zbar.norm();
            assert!(
                (dz - j.d_z).norm() / scale < 1e-5,
                "d_z mismatch at {z}: {dz} vs {}",
                j.d_z
            );
            assert!(
                (dzbar - j.d_zbar).norm() / scale < 1e-5,
                "d_zbar mismatch at {z}: {dzbar} vs {}",
                j.d_zbar
            );
            checked += 1;
        }
    }

    #[test]
    fn gpp_matches_finite_differences() {
        let params = p(1.92);
        let h = 1e-5;
        for z in [
            Complex64::new(0.7, 0.4),
            Complex64::new(-1.1, 1.3),
            Complex64::new(0.3, -2.0),
        ] {
            let j = jet(&params, z).unwrap();
            let gp = |w: Complex64| g_prime(&params, w).unwrap();
            let fd = (gp(z + Complex64::new(h, 0.0)) - gp(z - Complex64::new(h, 0.0))) / (2.0 * h);
            assert!((fd - j.gpp).norm() / (1.0 + j.gpp.norm()) < 1e-6);
        }
    }

    #[test]
    fn shear_params_validation() {
        assert!(LensParams::new(0.0).is_err());
        assert!(LensParams::new(-1.0).is_err());
        assert!(LensParams::with_shear(1.0, Complex64::new(1.0, 0.0)).is_err());
        assert!(LensParams::with_shear(1.0, Complex64::new(0.6, 0.8)).is_err());
        assert!(LensParams::with_shear(1.0, Complex64::new(0.3, 0.0)).is_ok());
        assert!(LensParams::with_shear(1.0, Complex64::new(0.0, 0.0)).is_ok());
    }

    #[test]
    fn shear_jet_reduces_to_plain_jet_at_alpha_zero() {
        let plain = p(1.92);
        let z = Complex64::new(0.9, -0.7);
        let a = jet(&plain, z).unwrap();
        let sheared = LensParams::with_shear(1.92, Complex64::new(0.0, 0.0)).unwrap();
        let b = jet(&sheared, z).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shear_jet_wirtinger_consistency() {
        let params = LensParams::with_shear(1.92, Complex64::new(0.1, -0.05)).unwrap();
        let h = 1e-6;
        let i = Complex64::new(0.0, 1.0);
        for u in [Complex64::new(0.8, 0.5), Complex64::new(-0.4, -1.2)] {
            let j = jet(&params, u).unwrap();
            let fx = (eval_f(&params, u + Complex64::new(h, 0.0)).unwrap()
                - eval_f(&params, u - Complex64::new(h, 0.0)).unwrap())
                / (2.0 * h);
            let fy = (eval_f(&params, u + Complex64::new(0.0, h)).unwrap()
                - eval_f(&params, u - Complex64::new(0.0, h)).unwrap())
                / (2.0 * h);
            let dzbar = (fx + i * fy) / 2.0;
            assert!((dzbar - j.d_zbar).norm() < 1e-5);
            let dz = (fx - i * fy) / 2.0;
            assert!((dz - Complex64::new(1.0, 0.0)).norm() < 1e-5);
        }
    }

    #[test]
    fn shear_back_substitution_inverts_u_of_z() {
        let alpha = Complex64::new(0.2, 0.1);
        let params = LensParams::with_shear(1.5, alpha).unwrap();
        let z = Complex64::new(0.7, -1.1);
        let u = z - alpha * z.conj();
        assert!((shear_to_z(&params, u) - z).norm() < 1e-14);
    }
}
