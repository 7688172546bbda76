//! Property tests for the map symmetries, the literal grammar, and report
//! serialization.

use isolens_core::map::{eval_f, jet, LensParams};
use isolens_core::solver::{find_all, Solution};
use isolens_core::{format_complex, parse_complex, Complex64};
use proptest::prelude::*;

proptest! {
    #[test]
    fn conjugation_equivariance(
        k in 0.1f64..4.0,
        re in -1.5f64..1.5,
        im in -3.0f64..3.0,
    ) {
        let z = Complex64::new(re, im);
        let params = LensParams::new(k).unwrap();
        if let (Ok(a), Ok(b)) = (eval_f(&params, z.conj()), eval_f(&params, z)) {
            prop_assume!(b.norm() < 1e6);
            prop_assert!((a - b.conj()).norm() <= 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn odd_symmetry(
        k in 0.1f64..4.0,
        re in -1.5f64..1.5,
        im in -3.0f64..3.0,
    ) {
        let z = Complex64::new(re, im);
        let params = LensParams::new(k).unwrap();
        if let (Ok(a), Ok(b)) = (eval_f(&params, -z), eval_f(&params, z)) {
            prop_assume!(b.norm() < 1e6);
            prop_assert!((a + b).norm() <= 1e-12 * b.norm().max(1.0));
        }
    }

    #[test]
    fn jacobian_is_one_minus_gprime_squared(
        k in 0.1f64..4.0,
        re in -1.5f64..1.5,
        im in -3.0f64..3.0,
    ) {
        let z = Complex64::new(re, im);
        let params = LensParams::new(k).unwrap();
        if let Ok(j) = jet(&params, z) {
            prop_assert!((j.jacobian - (1.0 - j.d_zbar.norm_sqr())).abs() < 1e-14);
            prop_assert_eq!(j.d_z, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn complex_literals_round_trip(re in -1e4f64..1e4, im in -1e4f64..1e4) {
        let z = Complex64::new(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }
}

#[test]
fn solve_report_round_trips_through_json() {
    let params = LensParams::new(1.92).unwrap();
    let report = find_all(&params, Complex64::new(0.0, 0.67)).unwrap();
    let text = serde_json::to_string(&report.solutions).unwrap();
    let back: Vec<Solution> = serde_json::from_str(&text).unwrap();
    assert_eq!(report.solutions.len(), back.len());
    for (a, b) in report.solutions.iter().zip(&back) {
        assert_eq!(a.z, b.z);
        assert_eq!(a.residual, b.residual);
        assert_eq!(a.jacobian, b.jacobian);
        assert_eq!(a.orientation, b.orientation);
    }
}
