use perclab::special::*;
use perclab::C64;
use proptest::prelude::*;
use std::f64::consts::PI;

// Reference values computed with mpmath.loggamma at 30 digits.
const LOGGAMMA_REF: [(f64, f64, f64, f64); 15] = [
    (1.0, 1.0, -0.650_923_199_301_856_3, -0.301_640_320_467_533_2),
    (0.5, 0.0, 0.572_364_942_924_700_1, 0.0),
    (5.0, 0.0, 3.178_053_830_347_945_6, 0.0),
    (0.3, -7.2, -10.785_475_765_175_86, -6.702_235_798_194_666),
    (2.5, 40.0, -54.534_374_880_387_97, 110.647_830_737_087_83),
    (100.25, -3.0, 360.239_454_031_701, -13.808_465_854_267_778),
    (1000.0, 1000.0, 5466.222_521_629_902, 7039.334_291_911_193),
    (100000.0, -200000.0, 910_329.458_676_399, -2_374_243.202_442_172_5),
    (6.0, 1_000_000.0, -1_570_719.422_548_294_6, 12_815_519.197_328_988),
    (-3.7, 0.4, -2.163_773_066_394_115, -12.544_109_054_302_677),
    (-150.3, 2.2, -611.582_174_091_133_2, -462.716_991_238_506),
    (-999.5, 0.1, -5907.577_997_986_334, -3140.901_878_057_561_7),
    (0.75, -0.3, 0.094_952_005_442_887_86, 0.303_769_199_675_332_3),
    (13.0, 0.0, 19.987_214_495_661_886, 0.0),
    (-0.25, -25.0, -40.765_189_005_946_6, -54.284_215_386_312_3),
];

fn wrap(x: f64) -> f64 {
    let t = x.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

#[test]
fn log_gamma_matches_multiprecision_reference() {
    for (re, im, lre, lim) in LOGGAMMA_REF {
        let got = log_gamma(C64::new(re, im)).unwrap();
        let scale = C64::new(lre, lim).norm().max(1.0);
        assert!((got.re - lre).abs() <= 1e-12 * scale, "z={re}+{im}i: re {} vs {lre}", got.re);
        let dim = if re >= 0.5 { got.im - lim } else { wrap(got.im - lim) };
        assert!(dim.abs() <= 1e-12 * scale, "z={re}+{im}i: im {} vs {lim}", got.im);
    }
}

#[test]
fn log_gamma_examples() {
    let v = log_gamma(C64::new(5.0, 0.0)).unwrap();
    assert!((v.re - 24f64.ln()).abs() < 1e-14);
    let v = log_gamma(C64::new(0.5, 0.0)).unwrap();
    assert!((v.re - 0.572_364_94).abs() < 1e-8);
    let g = gamma(C64::new(1.0, 1.0)).unwrap();
    assert!((g.re - 0.498_015_7).abs() < 1e-7 && (g.im + 0.154_949_8).abs() < 1e-7, "{g}");
}

#[test]
fn f_a_examples() {
    for a in [0.5, 1.0, 3.0, 17.0, 250.0] {
        assert_eq!(f_a(a, C64::new(0.0, 0.0)).unwrap(), C64::new(0.0, 0.0));
        let v = a * f_a(a, C64::new(1.0, 0.0)).unwrap();
        assert!((v.re - 0.5).abs() < 1e-12 && v.im.abs() < 1e-15, "a={a}: {v}");
    }
    // a F_a(2) -> 2 with error O(1/a)
    let mut last = f64::INFINITY;
    for a in [1e3, 1e4] {
        let err = (a * f_a(a, C64::new(2.0, 0.0)).unwrap().re - 2.0).abs();
        assert!(err < 4.0 / a, "a={a}: err {err}");
        assert!(err < last);
        last = err;
    }
}

#[test]
fn f_a_tends_to_half_z_squared_over_a() {
    for z in [C64::new(0.5, 1.0), C64::new(-1.0, 2.0), C64::new(3.0, -0.5)] {
        let mut prev = f64::INFINITY;
        for a in [1e2, 1e3, 1e4, 1e5] {
            let err = (a * f_a(a, z).unwrap() - z * z / 2.0).norm();
            assert!(err < prev, "z={z} a={a}");
            prev = err;
        }
        assert!(prev < 1e-3);
    }
}

#[test]
fn h_alpha_examples() {
    let eta = C64::new(0.3, -1.7);
    assert!((h_alpha(eta, 0, 4, 9).unwrap() - 1.0).norm() < 1e-15);
    assert!((h_alpha(C64::new(0.0, 0.0), 5, 4, 9).unwrap() - 1.0).norm() < 1e-15);
    for (p, nu, ell) in [(1i64, 1u32, 1u32), (3, 4, 9), (7, 16, 256)] {
        let got = h_alpha(C64::new(1.0, 0.0), p, nu, ell).unwrap();
        let nu = nu as f64;
        let want = (p as f64 * (1.0 / (2.0 * nu) - 1.0 / (2.0 * (nu + ell as f64)))).exp();
        assert!((got.re - want).abs() < 1e-12 * want && got.im.abs() < 1e-14, "{got} {want}");
    }
}

#[test]
fn stirling_bounds() {
    for x in [0.5f64, 1.0, 5.0, 50.0, 500.0] {
        let lo = 0.5 * (2.0 * PI).ln() + (x - 0.5) * x.ln() - x;
        let lg = ln_gamma(x);
        assert!(lo < lg, "x={x}");
        assert!(lg < lo + 1.0 / (12.0 * x), "x={x}");
    }
}

proptest! {
    #[test]
    fn modulus_bounded_by_real_gamma(x in 0.05f64..60.0, y in -200.0f64..200.0) {
        let l = log_gamma(C64::new(x, y)).unwrap();
        prop_assert!(l.re <= ln_gamma(x) + 1e-12 * ln_gamma(x).abs().max(1.0));
    }

    #[test]
    fn ratio_bounded_by_exponential(x in 0.5f64..60.0, y in -200.0f64..200.0) {
        let l = ln_gamma(x) - log_gamma(C64::new(x, y)).unwrap().re;
        prop_assert!(l <= PI * y.abs() / 2.0 + 1e-10);
    }

    #[test]
    fn recurrence_holds(re in -40.0f64..40.0, im in 0.01f64..30.0) {
        let z = C64::new(re, im);
        let lhs = (log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap()).exp();
        prop_assert!((lhs - z).norm() <= 1e-11 * z.norm().max(1.0));
    }
}

#[test]
fn contour_examples() {
    let q = ContourPath::zeta_rectangle(4).discretize(4.0, 16);
    assert!(q.closure_defect() < 1e-14);
    assert!((q.integrate(|z| z.inv()) - 1.0).norm() < 1e-13);
    // Entire integrands vanish.
    assert!(q.integrate(|z| (z * z).exp() * z.sin()).norm() < 1e-12);
    // Refinement self-consistency.
    let f = |z: C64| (z - 1.0).inv() * z.exp();
    let a = q.integrate(f);
    let b = ContourPath::zeta_rectangle(4).discretize(8.0, 16).integrate(f);
    assert!((a - b).norm() < 1e-12);
    assert!((a - 1f64.exp()).norm() < 1e-12);
}

#[test]
fn build_contour_rejects_hopeless_tail() {
    let r = build_contour(
        ContourKind::VerticalLine { abscissa: -0.5, half_height: 10.0 },
        Some(DecayModel::Power { exponent: 1.5, scale: 1.0 }),
        1e-12,
    );
    assert!(r.is_err());
}

#[test]
fn residue_examples() {
    let zero = C64::new(0.0, 0.0);
    assert!((residue_circle(|z| z.inv(), zero, 0.25, 32) - 1.0).norm() < 1e-12);
    let (r, _) = residue_circle_converged(|z| gamma(z).unwrap(), zero, 0.25, 1e-10).unwrap();
    assert!((r - 1.0).norm() < 1e-12);
    let (r, _) = residue_circle_converged(|z| gamma(z).unwrap(), C64::new(-1.0, 0.0), 0.25, 1e-10).unwrap();
    assert!((r + 1.0).norm() < 1e-12);
    assert!(residue_circle(|z| (z * z).inv(), zero, 0.25, 32).norm() < 1e-12);
}

#[test]
fn meijer_examples_on_lines() {
    let v = meijer_g_line(&[4.0], &[1.0], 0.5, 1e-9).unwrap();
    assert!((v.value - 0.0625).abs() < 1e-8, "{v:?}");
    let v = meijer_g_line(&[4.0], &[1.0], 1.7, 1e-9).unwrap();
    assert!(v.value.abs() < 1e-8, "{v:?}");
    let v = meijer_g_line(&[], &[0.0], 1.0, 1e-10).unwrap();
    assert!((v.value - 0.367_879_4).abs() < 1e-7, "{v:?}");
    // Two-step Ginibre transition, checked against residues.
    let line = meijer_g_line(&[], &[0.0, 1.0], 0.8, 1e-11).unwrap();
    let res = meijer_g_residue(&[], &[0.0, 1.0], 0.8, 1e-12).unwrap();
    assert!((line.value - res.value).abs() < 1e-9, "{line:?} {res:?}");
    // Repeated parameters give a double pole.
    let line = meijer_g_line(&[], &[0.0, 0.0], 2.5, 1e-11).unwrap();
    let res = meijer_g_residue(&[], &[0.0, 0.0], 2.5, 1e-12).unwrap();
    assert!((line.value - res.value).abs() < 1e-9, "{line:?} {res:?}");
}
