use hypasym::numerics::DD;
use hypasym::phase::{l1_phase, l1_phase_dd, main_term, temme_phase_F_dd};
use hypasym::EvalPoint;
use num_complex::Complex64;
use proptest::prelude::*;

// reference main terms, exp(2ir l1)/(1-(1-α²)z)^{1/4} at 50 digits
const TABLE1_MAIN: (f64, f64) = (2.61180263507, 0.517009715105);
const TABLE4_MAIN: (f64, f64) = (-2.26990817037, -2.15759355098);

fn close(got: Complex64, want: (f64, f64), tol: f64) -> bool {
    let w = Complex64::new(want.0, want.1);
    (got - w).norm() <= tol * w.norm()
}

#[test]
fn main_term_at_table_points() {
    let p = EvalPoint::new(100.0, 0.1, 0.99).unwrap();
    let m = main_term(&p).unwrap();
    assert!(close(m.value.to_c64(), TABLE1_MAIN, 1e-11), "{:?}", m.value);
    assert!((m.amplitude - 0.0199f64.powf(-0.25)).abs() < 1e-15);
    assert!((m.value.norm() - 2.662482).abs() < 1e-6);

    let p = EvalPoint::new(100.0, 0.02, 0.99).unwrap();
    assert!(close(
        main_term(&p).unwrap().value.to_c64(),
        TABLE4_MAIN,
        1e-11
    ));
}

#[test]
fn five_log_phase_matches_l1_at_named_points() {
    for (a, z) in [(0.1, 0.99), (0.02, 0.9999), (0.5, 0.5)] {
        let d = temme_phase_F_dd(a, z).unwrap() - l1_phase_dd(a, z).unwrap();
        assert!(d.abs().to_f64() <= 1e-28, "({a},{z}): {d:?}");
    }
}

#[test]
fn zero_phase_at_origin() {
    for a in [0.0, 0.3, 0.99] {
        assert_eq!(l1_phase_dd(a, 0.0).unwrap(), DD::ZERO);
        let p = EvalPoint::new(123.0, a, 0.0).unwrap();
        assert_eq!(
            main_term(&p).unwrap().value.to_c64(),
            Complex64::new(1.0, 0.0)
        );
    }
}

proptest! {
    #[test]
    fn modulus_is_the_amplitude(r in 1.0f64..1000.0, a in 0.0f64..0.99, z in 0.0f64..0.9999) {
        let p = EvalPoint::new(r, a, z).unwrap();
        let m = main_term(&p).unwrap();
        let want = (1.0 - (1.0 - a * a) * z).powf(-0.25);
        prop_assert!(m.amplitude > 0.0);
        prop_assert!((m.amplitude - want).abs() <= 4.0 * f64::EPSILON * want);
        prop_assert!((m.value.norm() - m.amplitude).abs() <= 4.0 * f64::EPSILON * want);
    }

    #[test]
    fn l1_identity_holds_off_grid(a in 0.001f64..0.999, z in 0.001f64..0.999) {
        let d = temme_phase_F_dd(a, z).unwrap() - l1_phase_dd(a, z).unwrap();
        prop_assert!(d.abs().to_f64() <= 1e-26);
    }

    #[test]
    fn l1_increases_in_z(a in 0.0f64..0.99, z in 0.01f64..0.98) {
        let h = 1e-3;
        prop_assert!(l1_phase(a, z + h).unwrap() > l1_phase(a, z).unwrap());
    }
}
