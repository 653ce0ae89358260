use perclab::env::{dkw_band, last_passage_time, sample_exponential_stream, LayeredSpec};
use perclab::rsk::Partition;
use perclab::schur::*;
use perclab::special::ln_gamma;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn part(s: &str) -> Partition {
    s.parse().unwrap()
}

#[test]
fn bialternant_examples() {
    assert_eq!(schur_bialternant(&Partition::empty(), &[0.5, 0.25]).unwrap(), 1.0);
    assert!((schur_bialternant(&part("1"), &[0.5, 0.25]).unwrap() - 0.75).abs() < 1e-15);
    assert!((schur_bialternant(&part("2,1"), &[0.5, 0.25]).unwrap() - 0.09375).abs() < 1e-15);
    assert!(schur_bialternant(&part("1,1,1"), &[0.5, 0.25]).is_err());
    // repeated arguments: s_(2,1)(x,x) = 2x^3
    assert!((schur_bialternant(&part("2,1"), &[0.3, 0.3]).unwrap() - 2.0 * 0.027).abs() < 1e-15);
}

#[test]
fn skew_examples() {
    let l = part("3,1");
    assert_eq!(skew_schur_tableau_sum(&l, &l, &[0.4, 0.2], DEFAULT_BUDGET).unwrap(), 1.0);
    assert_eq!(skew_schur_tableau_sum(&part("2"), &part("1"), &[0.7], DEFAULT_BUDGET).unwrap(), 0.7);
    assert_eq!(skew_schur_tableau_sum(&part("1"), &part("2"), &[0.7], DEFAULT_BUDGET).unwrap(), 0.0);
    // a vertical domino needs two labels
    assert_eq!(skew_schur_tableau_sum(&part("1,1"), &Partition::empty(), &[0.7], DEFAULT_BUDGET).unwrap(), 0.0);
    assert!(matches!(
        skew_schur_tableau_sum(&part("12,12,12"), &Partition::empty(), &[0.1; 6], 10),
        Err(perclab::Error::Budget(_))
    ));
}

/// Brute-force tableau enumeration: fill the skew cells row by row.
fn tableau_oracle(lambda: &Partition, mu: &Partition, y: &[f64]) -> f64 {
    let cells: Vec<(usize, u64)> = (0..lambda.length())
        .flat_map(|r| (mu.get(r)..lambda.get(r)).map(move |c| (r, c)))
        .collect();
    let mut labels = vec![0usize; cells.len()];
    fn rec(i: usize, cells: &[(usize, u64)], labels: &mut Vec<usize>, y: &[f64], acc: f64) -> f64 {
        if i == cells.len() {
            return acc;
        }
        let (r, c) = cells[i];
        let mut lo = 1;
        if let Some(k) = cells[..i].iter().position(|&(rr, cc)| rr == r && cc + 1 == c) {
            lo = lo.max(labels[k]);
        }
        if let Some(k) = cells[..i].iter().position(|&(rr, cc)| rr + 1 == r && cc == c) {
            lo = lo.max(labels[k] + 1);
        }
        let mut s = 0.0;
        for v in lo..=y.len() {
            labels[i] = v;
            s += rec(i + 1, cells, labels, y, acc * y[v - 1]);
        }
        s
    }
    rec(0, &cells, &mut labels, y, 1.0)
}

#[test]
fn skew_sum_agrees_with_bialternant_and_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for w in 0..=6 {
        for lambda in Partition::all_of_weight(w, 3) {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(0.05..0.95)).collect();
            let a = schur_bialternant(&lambda, &x).unwrap();
            let b = skew_schur_tableau_sum(&lambda, &Partition::empty(), &x, DEFAULT_BUDGET).unwrap();
            let c = tableau_oracle(&lambda, &Partition::empty(), &x);
            let jt = schur_jacobi_trudi(&lambda, &x).unwrap();
            assert!((a - b).abs() <= 1e-12 * b.max(1e-300), "{lambda}: {a} vs {b}");
            assert!((c - b).abs() <= 1e-13 * b, "{lambda}");
            assert!((jt - b).abs() <= 1e-12 * b, "{lambda}");
        }
    }
    let y = [0.3, 0.6, 0.2];
    for (l, m) in [("3,2,1", "1"), ("4,2", "2,1"), ("3,3", "1,1"), ("2,2,2", "1")] {
        let a = skew_schur_tableau_sum(&part(l), &part(m), &y, DEFAULT_BUDGET).unwrap();
        let b = tableau_oracle(&part(l), &part(m), &y);
        assert!((a - b).abs() <= 1e-14 * b.max(1e-300), "{l}/{m}");
    }
}

#[test]
fn pmf_examples() {
    let p = SchurProcessParams::new(vec![0.3, 0.5], vec![vec![0.2, 0.4], vec![0.6]]).unwrap();
    let e = Partition::empty();
    let expected = [0.2, 0.4, 0.6]
        .iter()
        .flat_map(|y| [0.3, 0.5].map(|x| 1.0 - x * y))
        .product::<f64>();
    assert!((schur_process_pmf(&p, &[e.clone(), e.clone()]).unwrap() - expected).abs() < 1e-15);
    // λ^(1) not inside λ^(2)
    assert_eq!(schur_process_pmf(&p, &[part("2"), part("1,1")]).unwrap(), 0.0);
    assert!(schur_process_pmf(&p, std::slice::from_ref(&e)).is_err());
    assert!(schur_process_pmf(&p, &[e, part("1,1,1")]).is_err());
}

#[test]
fn pmf_matches_rsk_frequencies() {
    use perclab::env::sample_geometric_blocks;
    use perclab::rsk::rsk_correspondence;
    let spec = LayeredSpec::new(2, vec![1, 1], vec![2, 1]).unwrap();
    let x = vec![0.5, 0.6];
    let y = vec![vec![0.4, 0.7], vec![0.5]];
    let params = SchurProcessParams::new(x.clone(), y.clone()).unwrap();
    let target = [part("2,1"), part("3,1")];
    let samples = 40_000u64;
    let mut hits = 0u64;
    for s in 0..samples {
        let a = perclab::env::sample_geometric_stream(&spec, 2, &x, &y, 9, s).unwrap();
        let l1 = rsk_correspondence(&a.prefix(1).unwrap()).unwrap().0.shape();
        let l2 = rsk_correspondence(&a).unwrap().0.shape();
        if l1 == target[0] && l2 == target[1] {
            hits += 1;
        }
    }
    let _ = sample_geometric_blocks;
    let p = schur_process_pmf(&params, &target).unwrap();
    let freq = hits as f64 / samples as f64;
    let sd = (p * (1.0 - p) / samples as f64).sqrt();
    assert!((freq - p).abs() < 5.0 * sd, "freq {freq} vs pmf {p}");
}

#[test]
fn truncated_mass_with_tail_bound() {
    let params = SchurProcessParams::new(vec![0.3; 2], vec![vec![0.3; 2], vec![0.3]]).unwrap();
    let report = schur_process_normalization(&params, 12).unwrap();
    let total = report.total();
    assert!(total >= 0.999);
    assert!(total <= 1.0 + 1e-12);
    assert!(1.0 - total <= report.tail_bound + 1e-12, "{total} {}", report.tail_bound);
    // the weight is negative binomial with 6 trials of ratio 0.09
    let r: f64 = 0.09;
    for &(w, m) in &report.strata {
        let nb = (ln_gamma(w as f64 + 6.0) - ln_gamma(w as f64 + 1.0) - ln_gamma(6.0)).exp()
            * (1.0 - r).powi(6)
            * r.powi(w as i32);
        assert!((m - nb).abs() < 1e-13, "weight {w}: {m} vs {nb}");
    }
    let csv = report.to_csv();
    assert!(csv.starts_with("weight,mass,cumulative\n"));
    assert_eq!(csv.lines().count(), 14);
}

fn log_beta_density(nu: f64, ell: f64, lambda: f64) -> f64 {
    let lb = ln_gamma(nu + ell) - ln_gamma(nu) - ln_gamma(ell);
    (lb - (nu + ell - 1.0) * lambda + (ell - 1.0) * lambda.exp_m1().ln()).exp()
}

#[test]
fn density_single_cell_is_log_beta() {
    for (nu, ell) in [(1u32, 1u32), (1, 2), (2, 3), (3, 1), (5, 4)] {
        let p = ExpLimitParams::new(1, vec![nu], vec![ell]).unwrap();
        for i in 1..=50 {
            let lam = 0.1 * i as f64;
            let d = exp_limit_density(&p, &[vec![lam]]).unwrap();
            let want = log_beta_density(nu as f64, ell as f64, lam);
            assert!((d - want).abs() < 1e-10, "nu={nu} ell={ell} λ={lam}: {d} vs {want}");
        }
    }
    let p = ExpLimitParams::new(1, vec![1], vec![1]).unwrap();
    assert!((exp_limit_density(&p, &[vec![0.7]]).unwrap() - (-0.7f64).exp()).abs() < 1e-15);
    assert!(exp_limit_density(&p, &[vec![0.0]]).is_err());
}

#[test]
fn density_vanishes_off_order() {
    let p = ExpLimitParams::new(2, vec![1, 2], vec![2, 2]).unwrap();
    let ok = exp_limit_density(&p, &[vec![1.0, 0.5], vec![1.5, 0.7]]).unwrap();
    assert!(ok > 0.0);
    assert_eq!(exp_limit_density(&p, &[vec![1.0, 0.5], vec![1.5, 0.4]]).unwrap(), 0.0);
    assert_eq!(exp_limit_density(&p, &[vec![1.0, 0.5], vec![0.9, 0.7]]).unwrap(), 0.0);
}

#[test]
fn density_integrates_to_one() {
    for (n, nu, ell) in [(1, vec![2], vec![3]), (2, vec![1], vec![2]), (2, vec![2], vec![3]), (1, vec![1, 2], vec![2, 1]), (1, vec![2, 1], vec![1, 3])] {
        let p = ExpLimitParams::new(n, nu.clone(), ell.clone()).unwrap();
        let q = p.q();
        let mass = exp_limit_marginal_cdf_lambda1(&p, q, f64::INFINITY, 1e-10).unwrap();
        assert!((mass - 1.0).abs() < 1e-6, "n={n} nu={nu:?} ell={ell:?}: {mass}");
    }
}

#[test]
fn marginal_cdf_examples() {
    let p = ExpLimitParams::new(1, vec![1], vec![1]).unwrap();
    let v = exp_limit_marginal_cdf_lambda1(&p, 1, 1.0, 1e-12).unwrap();
    assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-10);
    assert_eq!(exp_limit_marginal_cdf_lambda1(&p, 1, 0.0, 1e-12).unwrap(), 0.0);
    assert!(exp_limit_marginal_cdf_lambda1(&p, 1, 1e-9, 1e-12).unwrap() < 1e-8);
    let p = ExpLimitParams::new(1, vec![1], vec![2]).unwrap();
    let e1 = (-1.0f64).exp();
    let v = exp_limit_marginal_cdf_lambda1(&p, 1, 1.0, 1e-12).unwrap();
    assert!((v - (1.0 - 2.0 * e1 + e1 * e1)).abs() < 1e-10, "{v}");
    let p = ExpLimitParams::new(3, vec![1, 1], vec![3, 1]).unwrap();
    assert!(matches!(exp_limit_marginal_cdf_lambda1(&p, 2, 1.0, 1e-8), Err(perclab::Error::Budget(_))));
}

#[test]
fn marginal_cdf_matches_monte_carlo() {
    for (nu, ell, q) in [(vec![1], vec![2], 1usize), (vec![1, 2], vec![2, 2], 2)] {
        let spec = LayeredSpec::new(2, nu.clone(), ell.clone()).unwrap();
        let p = ExpLimitParams::from_spec(spec.clone()).unwrap();
        let samples = 20_000u64;
        let times: Vec<f64> = (0..samples)
            .map(|s| last_passage_time(&sample_exponential_stream(&spec, q, 21, s).unwrap()).unwrap())
            .collect();
        let band = dkw_band(samples);
        for s in [0.5, 1.0, 1.5, 2.5] {
            let emp = times.iter().filter(|&&t| t <= s).count() as f64 / samples as f64;
            let exact = exp_limit_marginal_cdf_lambda1(&p, q, s, 1e-9).unwrap();
            assert!((emp - exact).abs() < band, "nu={nu:?} s={s}: {emp} vs {exact}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn skew_equals_straight(w in 0u64..7, idx in 0usize..100, x in proptest::collection::vec(0.01f64..0.99, 3)) {
        let all = Partition::all_of_weight(w, 3);
        let lambda = &all[idx % all.len()];
        let a = schur_bialternant(lambda, &x).unwrap();
        let b = skew_schur_tableau_sum(lambda, &Partition::empty(), &x, DEFAULT_BUDGET).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * b.max(1e-300), "{} {} {}", lambda, a, b);
    }
}
