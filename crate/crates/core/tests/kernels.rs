use perclab::env::{critical_centering, LayeredSpec};
use perclab::kernels::*;
use perclab::schur::{exp_limit_density, ExpLimitParams};
use perclab::special::ln_gamma;
use perclab::Error;

fn opts(backend: Backend) -> EvalOptions {
    EvalOptions::with_backend(backend)
}

fn part(p: Part) -> EvalOptions {
    EvalOptions { part: p, ..EvalOptions::default() }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

fn tu_spec() -> LayeredSpec {
    LayeredSpec::new(2, vec![1, 2, 1], vec![2, 2, 3]).unwrap()
}

fn grid_kernels() -> Vec<(KernelId, bool)> {
    vec![
        (KernelId::TruncatedUnitaryLog(tu_spec()), false),
        (KernelId::TruncatedUnitaryMult(tu_spec()), true),
        (KernelId::Ginibre { n: 2, nu: vec![1, 2, 1] }, false),
        (KernelId::HardEdge { nu: vec![1, 2, 1] }, false),
    ]
}

#[test]
fn n1_diagonal_is_the_density() {
    for (nu, ell) in [(1u32, 1u32), (1, 2), (2, 3), (3, 1)] {
        let spec = LayeredSpec::new(1, vec![nu], vec![ell]).unwrap();
        let p = ExpLimitParams::new(1, vec![nu], vec![ell]).unwrap();
        for x in [0.1, 0.7, 1.9, 4.0] {
            let d = exp_limit_density(&p, &[vec![x]]).unwrap();
            for b in [Backend::Quadrature, Backend::Residue] {
                let k = k_truncated_unitary_log(&spec, 1, x, 1, x, &opts(b)).unwrap();
                assert!(close(k.value, d, 1e-11), "({nu},{ell}) x={x} {b}: {} vs {d}", k.value);
            }
        }
    }
}

#[test]
fn ginibre_one_by_one_products() {
    // |g|^2 is Exp(1); a product of two has density 2 K_0(2 sqrt x).
    let o = EvalOptions::default();
    for x in [0.2, 1.0, 3.0] {
        let v = k_ginibre(1, &[1], 1, x, 1, x, &o).unwrap().value;
        assert!(close(v, (-x).exp(), 1e-12), "{v}");
    }
    let v = k_ginibre(1, &[1, 1], 2, 1.0, 2, 1.0, &o).unwrap().value;
    assert!(close(v, 0.227787745499067, 1e-11), "{v}");
    let v = k_ginibre(1, &[1, 1], 2, 0.5, 2, 0.5, &o).unwrap().value;
    assert!(close(v, 0.478284421452162, 1e-11), "{v}");
}

#[test]
fn backends_agree_on_the_sample_grid() {
    for (id, mult) in grid_kernels() {
        for &(q, x, r, y) in &SAMPLE_GRID {
            let (x, y) = if mult { ((-x).exp(), (-y).exp()) } else { (x, y) };
            let a = id.evaluate(q as f64, x, r as f64, y, &opts(Backend::Quadrature)).unwrap();
            let b = id.evaluate(q as f64, x, r as f64, y, &opts(Backend::Residue)).unwrap();
            assert!(close(a.value, b.value, 1e-8), "{id:?} at {:?}: {} vs {}", (q, x, r, y), a.value, b.value);
            assert!(a.est_error < 1e-9 && b.est_error < 1e-9, "{id:?}: {} {}", a.est_error, b.est_error);
        }
    }
}

#[test]
fn contour_perturbations_leave_values_unchanged() {
    for (id, mult) in grid_kernels() {
        for &(q, x, r, y) in SAMPLE_GRID.iter().step_by(3) {
            let (x, y) = if mult { ((-x).exp(), (-y).exp()) } else { (x, y) };
            let base = id.evaluate(q as f64, x, r as f64, y, &EvalOptions::default()).unwrap().value;
            for s in [0.9, 1.1] {
                for b in [Backend::Quadrature, Backend::Residue] {
                    let o = EvalOptions { contour_scale: s, ..opts(b) };
                    let v = id.evaluate(q as f64, x, r as f64, y, &o).unwrap().value;
                    assert!(close(v, base, 1e-8), "{id:?} s={s} {b}: {v} vs {base}");
                }
            }
        }
    }
}

#[test]
fn critical_sigma_line_can_move() {
    // Scale 0.5 puts the line at Re = -1/4, scale 2 at Re = -1.
    for (tau, x, t, y) in [(1.0, 0.0, 2.0, 0.0), (1.0, 1.0, 2.0, -1.0), (1.5, 0.3, 1.5, -0.2), (2.0, -0.5, 1.0, 0.5)] {
        let base = k_critical(tau, x, t, y, &EvalOptions::default()).unwrap().value;
        for s in [0.5, 2.0] {
            for b in [Backend::Quadrature, Backend::Residue] {
                let o = EvalOptions { contour_scale: s, ..opts(b) };
                let v = k_critical(tau, x, t, y, &o).unwrap().value;
                assert!(close(v, base, 1e-8), "s={s} {b}: {v} vs {base}");
            }
        }
    }
}

#[test]
fn first_term_closed_forms() {
    for b in [Backend::Quadrature, Backend::Residue] {
        let o = EvalOptions { backend: b, ..part(Part::FirstTerm) };
        // G^{1,0}_{0,1}(-; 0 | z) = e^{-z}
        for (x, y) in [(1.0, 1.0), (0.5, 2.0), (3.0, 0.2)] {
            let v = k_ginibre(2, &[2, 1], 1, x, 2, y, &o).unwrap().value;
            let want = -(-y / x).exp() / x;
            assert!(close(v, want, 1e-12), "{b} {x} {y}: {v} vs {want}");
            let h = k_hard_edge(&[2, 1], 1, x, 2, y, &o).unwrap().value;
            assert!(close(h, want, 1e-12));
        }
        assert_eq!(k_ginibre(2, &[1, 1], 2, 1.0, 1, 1.0, &o).unwrap().value, 0.0);
        assert_eq!(k_ginibre(2, &[1, 1], 2, 1.0, 2, 0.5, &o).unwrap().value, 0.0);
        let v = k_critical(1.0, 0.3, 2.0, 0.3, &o).unwrap().value;
        assert!(close(v, -0.3989422804014327, 1e-14), "{v}");
        assert_eq!(k_critical(2.0, 0.3, 1.0, 0.3, &o).unwrap().value, 0.0);
        // The truncated-unitary first term vanishes for x > y.
        let spec = tu_spec();
        for (x, y) in [(1.0, 0.5), (3.0, 2.9), (0.7, 0.1)] {
            assert_eq!(k_truncated_unitary_log(&spec, 1, x, 2, y, &o).unwrap().value, 0.0);
        }
        // With a single factor 1/(eta + nu) it is -e^{-nu (y - x)}.
        let one = LayeredSpec::new(1, vec![1, 3], vec![1, 1]).unwrap();
        let v = k_truncated_unitary_log(&one, 1, 0.5, 2, 1.25, &o).unwrap().value;
        assert!(close(v, -(-3.0 * 0.75f64).exp(), 1e-12), "{v}");
        let v = k_truncated_unitary_log(&one, 1, 0.5, 2, 0.5, &o).unwrap().value;
        assert!(close(v, -0.5, 1e-12), "{v}");
    }
}

#[test]
fn critical_first_term_never_vanishes_for_later_times() {
    let o = part(Part::FirstTerm);
    for (x, y) in [(0.0, 3.0), (3.0, 0.0), (-1.0, 1.0)] {
        assert!(k_critical(1.0, x, 3.0, y, &o).unwrap().value < 0.0);
    }
}

#[test]
fn log_and_multiplicative_kernels_are_gauge_equivalent() {
    let spec = tu_spec();
    let o = EvalOptions::default();
    for &(q, x, r, y) in &SAMPLE_GRID {
        let l = k_truncated_unitary_log(&spec, q, x, r, y, &o).unwrap().value;
        let m = k_truncated_unitary_mult(&spec, q, (-x).exp(), r, (-y).exp(), &o).unwrap().value;
        assert!(close(l, (-y).exp() * m, 1e-11), "{l} vs {}", (-y).exp() * m);
    }
}

#[test]
fn parts_add_up() {
    let spec = tu_spec();
    for &(q, x, r, y) in &SAMPLE_GRID[3..6] {
        let f = k_truncated_unitary_log(&spec, q, x, r, y, &part(Part::FirstTerm)).unwrap().value;
        let d = k_truncated_unitary_log(&spec, q, x, r, y, &part(Part::DoubleIntegral)).unwrap().value;
        let all = k_truncated_unitary_log(&spec, q, x, r, y, &part(Part::Full)).unwrap().value;
        assert!((f + d - all).abs() < 1e-13);
    }
}

#[test]
fn thm22_equals_the_shifted_last_passage_kernel() {
    let (n, nu, ell) = (2usize, 2u32, 6u32);
    let spec = LayeredSpec::uniform(n, nu, ell, 4).unwrap();
    let o = EvalOptions::default();
    for (tau, x, t, y) in [(1.0, 0.2, 2.0, -0.3), (1.0, 0.0, 1.0, 0.5), (2.0, 0.1, 1.0, 0.0), (1.0, -0.5, 1.5, 0.4)] {
        let pt = (tau * f64::from(nu)).floor();
        let ps = (t * f64::from(nu)).floor();
        let gt = critical_centering(n as u64, nu.into(), ell.into(), tau).unwrap();
        let gs = critical_centering(n as u64, nu.into(), ell.into(), t).unwrap();
        let k = k_truncated_unitary_log(&spec, pt as usize, x + gt, ps as usize, y + gs, &o).unwrap().value;
        let gauge = ((ps - pt) * (ln_gamma(f64::from(nu + ell)) - ln_gamma(f64::from(nu)))).exp();
        for b in [Backend::Quadrature, Backend::Residue] {
            let v = scaled_kernel_thm22(n, nu, ell, tau, x, t, y, &opts(b)).unwrap().value;
            assert!(close(v, gauge * k, 1e-10), "{b}: {v} vs {}", gauge * k);
        }
    }
}

#[test]
fn thm25_equals_the_rescaled_hard_edge_kernel() {
    let nu = 2u32;
    let c = f64::from(nu).ln() - 0.5 / f64::from(nu);
    let o = EvalOptions::default();
    for (tau, x, t, y) in [(1.0, 0.2, 1.5, -0.3), (1.0, 0.0, 1.0, 0.5), (1.5, 0.1, 1.0, 0.0), (1.0, 0.4, 2.0, 0.9)] {
        let pt = (tau * f64::from(nu)).floor();
        let ps = (t * f64::from(nu)).floor();
        let h = k_hard_edge(&[nu; 6], pt as usize, (pt * c - x).exp(), ps as usize, (ps * c - y).exp(), &o).unwrap();
        let lit = (ps * c - y - (ps - pt) * ln_gamma(f64::from(nu))).exp() * h.value;
        for b in [Backend::Quadrature, Backend::Residue] {
            let v = scaled_kernel_thm25(nu, tau, x, t, y, &opts(b)).unwrap().value;
            assert!(close(v, lit, 1e-9), "{b}: {v} vs {lit}");
        }
    }
}

#[test]
fn thm24_prefactor_cancels_at_equal_times() {
    // At q = r the gauge is 1/(n (ell + nu)) and the argument scale n (ell + nu).
    let spec = LayeredSpec::uniform(2, 1, 8, 2).unwrap();
    let o = EvalOptions::default();
    let v = scaled_kernel_thm24(&spec, 1, 1.0, 1, 2.0, &o).unwrap().value;
    let s = 2.0 * 9.0;
    let k = k_truncated_unitary_mult(&spec, 1, 1.0 / s, 1, 2.0 / s, &o).unwrap().value;
    assert!(close(v, k / s, 1e-12));
}

#[test]
fn hard_edge_limit_improves_with_n() {
    let o = EvalOptions::default();
    let kh = k_hard_edge(&[1; 2], 1, 1.0, 1, 1.0, &o).unwrap().value;
    let err = |n: usize| (k_ginibre(n, &[1; 2], 1, 1.0 / n as f64, 1, 1.0 / n as f64, &o).unwrap().value / n as f64 - kh).abs();
    let (e4, e8) = (err(4), err(8));
    assert!(e8 < e4, "{e4} {e8}");
}

#[test]
fn invalid_arguments_are_rejected() {
    let spec = tu_spec();
    let o = EvalOptions::default();
    assert!(matches!(k_truncated_unitary_log(&spec, 4, 1.0, 1, 1.0, &o), Err(Error::OutOfRange(_))));
    assert!(matches!(k_truncated_unitary_log(&spec, 0, 1.0, 1, 1.0, &o), Err(Error::OutOfRange(_))));
    assert!(k_truncated_unitary_log(&spec, 1, -1.0, 1, 1.0, &o).is_err());
    assert!(k_truncated_unitary_mult(&spec, 1, 1.5, 1, 0.5, &o).is_err());
    assert!(k_ginibre(2, &[], 1, 1.0, 1, 1.0, &o).is_err());
    assert!(k_hard_edge(&[0], 1, 1.0, 1, 1.0, &o).is_err());
    assert!(k_critical(0.0, 1.0, 1.0, 1.0, &o).is_err());
    assert!(scaled_kernel_thm25(4, 0.1, 0.0, 1.0, 0.0, &o).is_err());
    let bad = EvalOptions { contour_scale: 3.0, ..o };
    assert!(k_critical(1.0, 1.0, 1.0, 1.0, &bad).is_err());
    assert_eq!("residue".parse::<Backend>().unwrap(), Backend::Residue);
    assert!("other".parse::<Backend>().is_err());
}

#[test]
fn blocks_match_pointwise_values() {
    let k = TruncatedUnitary::log(tu_spec());
    let o = EvalOptions::default();
    let xs = [0.3, 1.1, 2.0];
    let ys = [0.5, 1.7];
    let b = k.block(1.0, &xs, 2.0, &ys, &o).unwrap();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let v = k.value(1.0, x, 2.0, y, &o).unwrap().value;
            assert!((b.values[(i, j)] - v).abs() < 1e-12);
        }
    }
}
