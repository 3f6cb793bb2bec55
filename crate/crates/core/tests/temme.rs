use hypasym::oracle::eval_f;
use hypasym::phase::main_term;
use hypasym::temme::{ftilde_ladder, temme_evaluate, TemmeContext};
use hypasym::EvalPoint;
use num_complex::Complex64;

// exact main terms at the two z = 0.9999 table points, 50-digit reference
const TABLE2_MAIN: (f64, f64) = (-2.58739251747, -1.80451225873);
const TABLE5_MAIN: (f64, f64) = (-3.38072136498, 5.77008419038);

#[test]
fn leading_order_at_table_points() {
    for (alpha, want) in [(0.1, TABLE2_MAIN), (0.02, TABLE5_MAIN)] {
        let p = EvalPoint::new(100.0, alpha, 0.9999).unwrap();
        let v = temme_evaluate(&p, 1).unwrap().value.to_c64();
        let w = Complex64::new(want.0, want.1);
        assert!((v - w).norm() <= 1e-10 * w.norm(), "alpha={alpha}: {v}");
        let m = main_term(&p).unwrap().value.to_c64();
        assert!((v - m).norm() <= 4.0 * f64::EPSILON * m.norm());
    }
}

#[test]
fn errors_fall_with_order() {
    for &(r, a, z) in &[
        (100.0, 0.1, 0.9999),
        (300.0, 0.3, 0.999),
        (100.0, 0.1, 0.99),
    ] {
        let p = EvalPoint::new(r, a, z).unwrap();
        let exact = eval_f(&p).unwrap().value;
        let errs: Vec<f64> = (1..=3)
            .map(|n| temme_evaluate(&p, n).unwrap().value.rel_error_to(&exact))
            .collect();
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
        if z == 0.9999 {
            assert!(errs[0] / errs[1] >= 3.0, "{errs:?}");
        }
    }
}

#[test]
fn ladder_head_is_f_at_alpha() {
    let c = TemmeContext::new(100.0, 0.1, 0.9999).unwrap();
    let ft = ftilde_ladder(&c, 3).unwrap();
    let f_alpha = hypasym::temme::f_of_t(&c, 0.1).unwrap();
    assert!((ft[0] - f_alpha).abs() <= 1e-14 * f_alpha);
    assert!(ft.iter().all(|v| v.is_finite()));
}

#[test]
fn regime_limits() {
    assert!(temme_evaluate(&EvalPoint::new(100.0, 0.1, 0.3).unwrap(), 1)
        .unwrap_err()
        .is_input_error());
    // αr below one
    assert!(temme_evaluate(&EvalPoint::new(5.0, 0.1, 0.99).unwrap(), 1).is_err());
    assert!(temme_evaluate(&EvalPoint::new(100.0, 0.1, 0.99).unwrap(), 4).is_err());
}
