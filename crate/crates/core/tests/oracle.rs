//! Reference-oracle checks against values frozen from a 150-digit
//! evaluation (inputs taken as the nearest doubles).

use std::time::Instant;

use hypasym::oracle::{self, OracleMethod};
use hypasym::EvalPoint;
use num_complex::Complex64;

const FROZEN: &[(f64, f64, f64, f64, f64)] = &[
    (
        100.0,
        0.1,
        0.99,
        2.611_880_246_921_587,
        0.517_422_636_609_710_6,
    ),
    (
        100.0,
        0.1,
        0.9999,
        -2.595_771_771_735_244,
        -1.792_471_289_279_549_8,
    ),
    (
        100.0,
        0.1,
        1e-5,
        1.000_002_392_985_825_5,
        0.000_405_005_403_705_368_7,
    ),
    (
        100.0,
        0.02,
        0.99,
        -2.258_587_649_971_740_3,
        -2.168_919_043_285_823,
    ),
    (
        100.0,
        0.02,
        0.9999,
        -3.328_488_373_840_789_5,
        5.815_264_147_375_949,
    ),
    (
        200.0,
        0.05,
        0.5,
        1.185_884_321_562_284_3,
        0.078_271_359_000_601_05,
    ),
    (
        100.0,
        0.1,
        0.5,
        1.186_032_434_657_877_2,
        0.022_764_588_367_028_97,
    ),
    (
        400.0,
        0.1,
        0.5,
        1.182_840_511_435_972,
        0.089_906_443_160_098_9,
    ),
    (
        800.0,
        0.1,
        0.5,
        1.172_640_627_004_885_7,
        0.179_189_809_969_270_7,
    ),
    (
        100.0,
        0.0,
        0.5,
        1.151_118_641_253_111_4,
        0.298_554_881_072_446_4,
    ),
    (
        1000.0,
        0.01,
        0.95,
        -0.812_886_641_238_757_8,
        -1.951_180_709_800_232_5,
    ),
    (
        300.0,
        0.3,
        0.999,
        1.722_807_636_667_128_3,
        -0.590_374_958_559_01,
    ),
];

fn rel(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

#[test]
fn eval_f_matches_frozen_values() {
    for &(r, a, z, re, im) in FROZEN {
        let p = EvalPoint::new(r, a, z).unwrap();
        let t = Instant::now();
        let res = oracle::eval_f(&p).unwrap_or_else(|e| panic!("({r},{a},{z}): {e}"));
        let err = rel(res.value.to_c64(), Complex64::new(re, im));
        eprintln!(
            "({r},{a},{z}) {:?} est={:.1e} err={err:.1e} {:.2}s",
            res.method,
            res.est_accuracy,
            t.elapsed().as_secs_f64()
        );
        assert!(err <= 1e-9, "({r},{a},{z}): rel error {err:e}");
        assert!(res.est_accuracy <= 1e-9);
    }
}

#[test]
fn table_one_and_five_digits() {
    let p = EvalPoint::new(100.0, 0.1, 0.99).unwrap();
    let v = oracle::eval_f(&p).unwrap().value;
    assert!((v.re() - 2.611880247).abs() < 5e-10);
    assert!((v.im() - 0.5174226366).abs() < 5e-11);
    let p = EvalPoint::new(100.0, 0.02, 0.9999).unwrap();
    let v = oracle::eval_f(&p).unwrap().value;
    assert!((v.re() + 3.328488374).abs() < 5e-10);
    assert!((v.im() - 5.815264147).abs() < 5e-10);
}

#[test]
fn transformed_route_at_table_two() {
    let p = EvalPoint::new(100.0, 0.1, 0.9999).unwrap();
    let v = oracle::eval_transformed(&p).unwrap();
    assert!((v.re() + 2.595771772).abs() < 5e-10);
    assert!((v.im() + 1.792471289).abs() < 5e-10);
}

#[test]
fn transformed_route_matches_series_at_table_one() {
    let p = EvalPoint::new(100.0, 0.1, 0.99).unwrap();
    let series = oracle::eval_gauss_series(&p).unwrap().0;
    let quad = oracle::eval_transformed(&p).unwrap();
    assert!(quad.rel_error_to(&series) <= 1e-9);
}

#[test]
fn transformed_route_tends_to_one() {
    for &z in &[1e-6, 1e-9] {
        let p = EvalPoint::new(100.0, 0.1, z).unwrap();
        let v = oracle::eval_transformed(&p).unwrap();
        assert!((v.to_c64() - 1.0).norm() < 1e-4, "z={z}");
    }
    let p = EvalPoint::new(100.0, 0.1, 0.0).unwrap();
    assert_eq!(
        oracle::eval_transformed(&p).unwrap().to_c64(),
        Complex64::new(1.0, 0.0)
    );
}

#[test]
fn small_z_uses_the_series() {
    let p = EvalPoint::new(100.0, 0.1, 0.3).unwrap();
    assert_eq!(
        oracle::eval_f(&p).unwrap().method,
        OracleMethod::GaussSeries
    );
}

#[test]
fn large_r_falls_back_to_quadrature() {
    let p = EvalPoint::new(800.0, 0.1, 0.5).unwrap();
    assert_eq!(
        oracle::eval_f(&p).unwrap().method,
        OracleMethod::QuadratureCrossCheck
    );
}

#[test]
fn continuity_probe() {
    // |F(z+h) - F(z)| <= C h r with a modest C
    let h = 1e-8;
    for &(r, a, z) in &[(100.0, 0.1, 0.3), (200.0, 0.05, 0.6), (100.0, 0.02, 0.9)] {
        let f0 = oracle::eval_f(&EvalPoint::new(r, a, z).unwrap())
            .unwrap()
            .value;
        let f1 = oracle::eval_f(&EvalPoint::new(r, a, z + h).unwrap())
            .unwrap()
            .value;
        let c = (f1 - f0).norm() / (h * r);
        assert!(c < 50.0, "({r},{a},{z}): C = {c}");
    }
}
