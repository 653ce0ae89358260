use crate::config::{BackendChoice, ExperimentConfig, Oracle, Rung};
use crate::CliError;
use perclab::env::{monte_carlo_joint_cdf, sample_lpp_process, ClockArray, LayeredSpec, Mode};
use perclab::fredholm::{nystrom_gap_probability, FredholmProblem};
use perclab::kernels::*;
use perclab::rsk::{lambda1_equals_lpp_check, restriction_commutes_check};
use perclab::schur::{exp_limit_marginal_cdf_lambda1, schur_process_normalization, ExpLimitParams, SchurProcessParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::time::Instant;

/// A CSV table; `pass` is false if any row failed its check.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub pass: bool,
}

impl Report {
    fn new(header: &[&str]) -> Self {
        Report { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new(), pass: true }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

fn status(ok: bool) -> String {
    if ok { "PASS" } else { "FAIL" }.to_string()
}

fn failed(e: perclab::Error) -> CliError {
    CliError::Failed(e.to_string())
}

fn need_spec(c: &ExperimentConfig) -> Result<LayeredSpec, CliError> {
    c.spec.as_ref().ok_or_else(|| CliError::Usage("this experiment needs a [spec] section".into()))?.build()
}

/// Integer block indices from the `times` list.
fn block_times(times: &[f64]) -> Result<Vec<usize>, CliError> {
    times
        .iter()
        .map(|&t| {
            if t >= 1.0 && t.fract() == 0.0 {
                Ok(t as usize)
            } else {
                Err(CliError::Usage(format!("time {t} is not a block index")))
            }
        })
        .collect()
}

fn cross(lists: &[Vec<f64>]) -> Vec<Vec<f64>> {
    lists.iter().fold(vec![vec![]], |acc, l| {
        acc.iter().flat_map(|p| l.iter().map(move |&v| [p.clone(), vec![v]].concat())).collect()
    })
}

fn fmt_list(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(":")
}

/// Fredholm gap probabilities on the threshold grid, optionally checked
/// against the cubature of the limit density or against Monte Carlo.
pub fn gap(c: &ExperimentConfig, seed: u64, tol: Option<f64>) -> Result<Report, CliError> {
    let times = &c.grid.times;
    if times.is_empty() || c.grid.thresholds.len() != times.len() {
        return Err(CliError::Usage("gap needs [grid] times and one threshold list per time".into()));
    }
    let (kernel, spec): (Box<dyn TimeKernel>, Option<LayeredSpec>) = match &c.kernel {
        Some(k) => (k.id()?.kernel().map_err(|e| CliError::Usage(e.to_string()))?, c.spec.as_ref().map(|s| s.build()).transpose()?),
        None => {
            let s = need_spec(c)?;
            (Box::new(TruncatedUnitary::log(s.clone())), Some(s))
        }
    };
    let oracle = c.check.oracle;
    let tol = tol.or(c.check.tol).unwrap_or(match oracle {
        Oracle::MonteCarlo => 1e-3,
        _ => 1e-6,
    });
    let samples = c.check.samples.unwrap_or(100_000);
    let blocks = if oracle == Oracle::None { Vec::new() } else { block_times(times)? };
    let spec = match (oracle, spec) {
        (Oracle::None, s) => s,
        (_, Some(s)) => Some(s),
        (_, None) => return Err(CliError::Usage("oracles need a [spec] section".into())),
    };
    if oracle == Oracle::Cubature && times.len() != 1 {
        return Err(CliError::Usage("the cubature oracle covers a single time".into()));
    }
    let mut header: Vec<String> = (1..=times.len()).map(|j| format!("s{j}")).collect();
    header.extend(
        ["probability", "est_error", "nodes", "runtime_ms", "oracle", "band", "tol", "claim", "status"].map(String::from),
    );
    let claim = match oracle {
        Oracle::MonteCarlo => "fredholm-vs-monte-carlo",
        Oracle::Cubature => "fredholm-vs-limit-density",
        Oracle::None => "fredholm-gap-probability",
    };
    let cells = cross(&c.grid.thresholds);
    let rows: Vec<(Vec<String>, bool)> = cells
        .par_iter()
        .map(|s| -> Result<(Vec<String>, bool), CliError> {
            let start = Instant::now();
            let p = FredholmProblem::new(kernel.as_ref(), times.clone(), s.clone()).map_err(failed)?;
            let r = nystrom_gap_probability(&p).map_err(failed)?;
            let ms = start.elapsed().as_millis();
            let (reference, band) = match (oracle, &spec) {
                (Oracle::Cubature, Some(sp)) => {
                    let params = ExpLimitParams::from_spec(sp.clone()).map_err(failed)?;
                    (Some(exp_limit_marginal_cdf_lambda1(&params, blocks[0], s[0], 1e-10).map_err(failed)?), 0.0)
                }
                (Oracle::MonteCarlo, Some(sp)) => {
                    let e = monte_carlo_joint_cdf(sp, &blocks, s, samples, seed).map_err(failed)?;
                    (Some(e.estimate), e.dkw_band)
                }
                _ => (None, 0.0),
            };
            let ok = r.converged
                && !r.out_of_range
                && reference.is_none_or(|v| (r.probability - v).abs() <= band + tol);
            let mut row: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            row.extend([
                r.probability.to_string(),
                r.est_error.to_string(),
                r.nodes.to_string(),
                ms.to_string(),
                reference.map_or(String::new(), |v| v.to_string()),
                band.to_string(),
                tol.to_string(),
                claim.to_string(),
                status(ok),
            ]);
            Ok((row, ok))
        })
        .collect::<Result<_, _>>()?;
    let mut rep = Report { header, rows: Vec::new(), pass: true };
    for (row, ok) in rows {
        rep.pass &= ok;
        rep.rows.push(row);
    }
    Ok(rep)
}

/// Simulated last-passage times, one row per environment. With thresholds
/// the rows are Monte Carlo estimates of the joint distribution function.
pub fn simulate(c: &ExperimentConfig, seed: u64) -> Result<Report, CliError> {
    let spec = need_spec(c)?;
    let blocks = block_times(&c.grid.times)?;
    if blocks.is_empty() {
        return Err(CliError::Usage("simulate needs [grid] times".into()));
    }
    let samples = c.check.samples.unwrap_or(1000);
    if c.grid.thresholds.is_empty() {
        let mut header = vec!["sample"];
        let names: Vec<String> = blocks.iter().map(|k| format!("T{k}")).collect();
        header.extend(names.iter().map(|s| s.as_str()));
        let mut rep = Report::new(&header);
        let values = sample_lpp_process(&spec, &blocks, samples, seed).map_err(failed)?;
        for (i, v) in values.iter().enumerate() {
            let mut row = vec![i.to_string()];
            row.extend(v.iter().map(|x| x.to_string()));
            rep.rows.push(row);
        }
        return Ok(rep);
    }
    let mut header: Vec<String> = (1..=blocks.len()).map(|j| format!("s{j}")).collect();
    header.extend(["estimate", "dkw_band", "samples", "seed", "json"].map(String::from));
    let mut rep = Report { header, rows: Vec::new(), pass: true };
    for s in cross(&c.grid.thresholds) {
        let e = monte_carlo_joint_cdf(&spec, &blocks, &s, samples, seed).map_err(failed)?;
        let mut row: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        row.extend([e.estimate.to_string(), e.dkw_band.to_string(), samples.to_string(), seed.to_string(), e.to_json()]);
        rep.rows.push(row);
    }
    Ok(rep)
}

fn params_string(id: &KernelId) -> (String, String) {
    match id {
        KernelId::TruncatedUnitaryLog(s) | KernelId::TruncatedUnitaryMult(s) => {
            let name = if matches!(id, KernelId::TruncatedUnitaryLog(_)) { "truncated-unitary-log" } else { "truncated-unitary-mult" };
            (name.into(), format!("n={};nu={};ell={}", s.n(), fmt_list(s.nu()), fmt_list(s.ell())))
        }
        KernelId::Ginibre { n, nu } => ("ginibre".into(), format!("n={n};nu={}", fmt_list(nu))),
        KernelId::HardEdge { nu } => ("hard-edge".into(), format!("nu={}", fmt_list(nu))),
        KernelId::Critical => ("critical".into(), String::new()),
    }
}

/// Kernel values at the configured points; with both backends, their
/// relative difference is checked against the tolerance.
pub fn kernel_eval(c: &ExperimentConfig, tol: Option<f64>) -> Result<Report, CliError> {
    let k = c.kernel.as_ref().ok_or_else(|| CliError::Usage("kernel-eval needs a [kernel] section".into()))?;
    if k.points.is_empty() {
        return Err(CliError::Usage("[kernel] points is empty".into()));
    }
    let id = k.id()?;
    let kernel = id.kernel().map_err(|e| CliError::Usage(e.to_string()))?;
    let (name, params) = params_string(&id);
    let tol = tol.or(c.check.tol).unwrap_or(1e-8);
    let mut rep = Report::new(&[
        "kernel", "params", "q", "x", "r", "y", "value", "backend", "est_error", "other_backend", "rel_diff", "tol", "claim",
        "status",
    ]);
    for &[q, x, r, y] in &k.points {
        let primary = k.backend.primary();
        let v = kernel.value(q, x, r, y, &EvalOptions::with_backend(primary)).map_err(failed)?;
        let (other, diff, ok) = if k.backend == BackendChoice::Both {
            let w = kernel.value(q, x, r, y, &EvalOptions::with_backend(Backend::Residue)).map_err(failed)?;
            let d = (v.value - w.value).abs() / v.value.abs().max(w.value.abs()).max(f64::MIN_POSITIVE);
            (w.value.to_string(), d.to_string(), d <= tol)
        } else {
            (String::new(), String::new(), v.est_error <= tol.max(v.value.abs() * tol))
        };
        rep.pass &= ok;
        rep.rows.push(vec![
            name.clone(),
            params.clone(),
            q.to_string(),
            x.to_string(),
            r.to_string(),
            y.to_string(),
            v.value.to_string(),
            v.backend.to_string(),
            v.est_error.to_string(),
            other,
            diff,
            tol.to_string(),
            "backend-agreement".into(),
            status(ok),
        ]);
    }
    Ok(rep)
}

/// The limit theorems, by their numbers or by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Critical,
    HardEdge,
    TruncatedHardEdge,
    HardToSoft,
}

impl Limit {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "2.2" | "critical" => Limit::Critical,
            "2.3" | "hard-edge" => Limit::HardEdge,
            "2.4" | "truncated-hard-edge" => Limit::TruncatedHardEdge,
            "2.5" | "hard-to-soft" => Limit::HardToSoft,
            _ => return Err(CliError::Usage(format!("unknown limit {s:?}"))),
        })
    }

    fn claim(self) -> &'static str {
        match self {
            Limit::Critical => "centered-kernel-to-critical",
            Limit::HardEdge => "ginibre-to-hard-edge",
            Limit::TruncatedHardEdge => "truncated-unitary-to-hard-edge",
            Limit::HardToSoft => "hard-edge-to-critical",
        }
    }

    fn default_rungs(self) -> Vec<Rung> {
        match self {
            Limit::Critical => vec![Rung::Triple([2, 8, 64]), Rung::Triple([3, 16, 256])],
            Limit::HardEdge => vec![Rung::One(16), Rung::One(32), Rung::One(64)],
            // n and l grow together; at fixed n the limit in l is the size-n Ginibre kernel
            Limit::TruncatedHardEdge => vec![Rung::Pair([2, 64]), Rung::Pair([3, 256]), Rung::Pair([4, 1024])],
            Limit::HardToSoft => vec![Rung::One(8), Rung::One(16), Rung::One(32)],
        }
    }

    fn default_points(self) -> Vec<[f64; 4]> {
        match self {
            Limit::Critical | Limit::HardToSoft => vec![[1.0, 0.0, 2.0, 0.0], [1.0, 1.0, 2.0, -1.0]],
            _ => vec![[1.0, 1.0, 1.0, 1.0], [1.0, 1.0, 2.0, 2.0]],
        }
    }
}

/// Convergence ladder: the error against the limit kernel must decrease
/// strictly along the rungs at every point.
pub fn converge(c: &ExperimentConfig, limit: Limit, tol: Option<f64>) -> Result<Report, CliError> {
    let rungs = if c.ladder.rungs.is_empty() { limit.default_rungs() } else { c.ladder.rungs.clone() };
    let points = if c.ladder.points.is_empty() { limit.default_points() } else { c.ladder.points.clone() };
    let last_max = tol.or(c.ladder.last_max).or((limit == Limit::HardEdge).then_some(1e-2));
    let n_tu = c.ladder.n.unwrap_or(2);
    let o = EvalOptions::default();
    let index = |v: f64| -> Result<usize, CliError> {
        if v >= 1.0 && v.fract() == 0.0 {
            Ok(v as usize)
        } else {
            Err(CliError::Usage(format!("time {v} is not a block index")))
        }
    };
    let mut rep = Report::new(&["claim", "point", "rung", "value", "limit", "error", "last_max", "status"]);
    for &[a, x, b, y] in &points {
        let reference = match limit {
            Limit::Critical | Limit::HardToSoft => k_critical(a, x, b, y, &o),
            _ => {
                let blocks = index(a)?.max(index(b)?);
                k_hard_edge(&vec![1; blocks], index(a)?, x, index(b)?, y, &o)
            }
        }
        .map_err(failed)?;
        let values: Vec<f64> = rungs
            .par_iter()
            .map(|&rung| -> Result<f64, CliError> {
                let v = match (limit, rung) {
                    (Limit::Critical, Rung::Triple([n, nu, ell])) => {
                        scaled_kernel_thm22(n as usize, nu, ell, a, x, b, y, &o)
                    }
                    (Limit::HardEdge, Rung::One(n)) => {
                        let (q, r) = (index(a)?, index(b)?);
                        let nf = f64::from(n);
                        k_ginibre(n as usize, &vec![1; q.max(r)], q, x / nf, r, y / nf, &o).map(|v| KernelValue {
                            value: v.value / nf,
                            ..v
                        })
                    }
                    (Limit::TruncatedHardEdge, Rung::One(ell) | Rung::Pair([_, ell])) => {
                        let n = match rung {
                            Rung::Pair([n, _]) => n as usize,
                            _ => n_tu,
                        };
                        let (q, r) = (index(a)?, index(b)?);
                        let spec = LayeredSpec::uniform(n, 1, ell, q.max(r)).map_err(failed)?;
                        scaled_kernel_thm24(&spec, q, x, r, y, &o)
                    }
                    (Limit::HardToSoft, Rung::One(nu)) => scaled_kernel_thm25(nu, a, x, b, y, &o),
                    _ => return Err(CliError::Usage(format!("rung {rung} does not fit this ladder"))),
                };
                Ok(v.map_err(failed)?.value)
            })
            .collect::<Result<_, _>>()?;
        let errs: Vec<f64> = values.iter().map(|v| (v - reference.value).abs()).collect();
        let ok = errs.windows(2).all(|w| w[1] < w[0])
            && last_max.is_none_or(|m| errs.last().is_some_and(|&e| e <= m));
        rep.pass &= ok;
        for ((rung, v), e) in rungs.iter().zip(&values).zip(&errs) {
            rep.rows.push(vec![
                limit.claim().into(),
                format!("{a};{x};{b};{y}"),
                rung.to_string(),
                v.to_string(),
                reference.value.to_string(),
                e.to_string(),
                last_max.map_or(String::new(), |m| m.to_string()),
                status(ok),
            ]);
        }
    }
    Ok(rep)
}

/// Random geometric arrays: first row of the RSK shape against the
/// last-passage time, and restriction against erasure.
pub fn rsk_check(arrays: usize, rows: usize, cols: usize, max_entry: Option<u64>, seed: u64) -> Result<Report, CliError> {
    if arrays == 0 || rows == 0 || cols == 0 {
        return Err(CliError::Usage("arrays, rows and cols must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gen = |rng: &mut ChaCha8Rng| -> Vec<Vec<u64>> {
        (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| match max_entry {
                        Some(m) => rng.gen_range(0..=m),
                        None => {
                            let u: f64 = rng.gen();
                            ((1.0 - u).ln() / 0.5f64.ln()).floor() as u64
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let (mut lpp_ok, mut commute_ok, mut commute_n) = (0, 0, 0);
    for _ in 0..arrays {
        let data = gen(&mut rng);
        let a = ClockArray::from_int_rows(&data).map_err(failed)?;
        if lambda1_equals_lpp_check(&a).map_err(failed)? {
            lpp_ok += 1;
        }
        if cols >= 2 {
            let split = cols / 2;
            let values = data.iter().flatten().map(|&v| v as f64).collect();
            let b = ClockArray::new(rows, vec![split, cols - split], values, Mode::Geometric).map_err(failed)?;
            commute_n += 1;
            if restriction_commutes_check(&b, 1).map_err(failed)? {
                commute_ok += 1;
            }
        }
    }
    let mut rep = Report::new(&["check", "claim", "trials", "passed", "status"]);
    let lpp = lpp_ok == arrays;
    rep.rows.push(vec![
        format!("lambda1 == lpp ({rows}x{cols})"),
        "rsk-shape-is-last-passage".into(),
        arrays.to_string(),
        lpp_ok.to_string(),
        status(lpp),
    ]);
    let com = commute_ok == commute_n;
    if commute_n > 0 {
        rep.rows.push(vec![
            "restrict then insert == insert then erase".into(),
            "restriction-commutes".into(),
            commute_n.to_string(),
            commute_ok.to_string(),
            status(com),
        ]);
    }
    rep.pass = lpp && com;
    Ok(rep)
}

/// Normalization of the Schur process and total mass of the exponential
/// limit density.
pub fn schur_check(c: &ExperimentConfig, tol: Option<f64>) -> Result<Report, CliError> {
    let s = &c.schur;
    let x = if s.x.is_empty() { vec![0.3; 2] } else { s.x.clone() };
    let y = if s.y.is_empty() { vec![vec![0.3; 2], vec![0.3]] } else { s.y.clone() };
    let params = SchurProcessParams::new(x, y).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = schur_process_normalization(&params, s.max_weight.unwrap_or(12)).map_err(failed)?;
    let mass_tol = tol.unwrap_or(1e-3);
    let total = report.total();
    let ok1 = total >= 1.0 - mass_tol && total <= 1.0 + 1e-12 && 1.0 - total <= report.tail_bound + 1e-12;
    let mut rep = Report::new(&["check", "claim", "value", "bound", "tol", "status"]);
    rep.rows.push(vec![
        "truncated schur-process mass".into(),
        "schur-process-normalization".into(),
        total.to_string(),
        report.tail_bound.to_string(),
        mass_tol.to_string(),
        status(ok1),
    ]);
    let specs: Vec<LayeredSpec> = match &c.spec {
        Some(sp) => vec![sp.build()?],
        None => [(1, vec![2], vec![3]), (2, vec![1], vec![2]), (1, vec![1, 2], vec![2, 1])]
            .into_iter()
            .map(|(n, nu, ell)| LayeredSpec::new(n, nu, ell).expect("valid default"))
            .collect(),
    };
    let mut ok = ok1;
    for sp in specs {
        let label = format!("limit-density mass n={} nu={} ell={}", sp.n(), fmt_list(sp.nu()), fmt_list(sp.ell()));
        let q = sp.k();
        let p = ExpLimitParams::from_spec(sp).map_err(|e| CliError::Usage(e.to_string()))?;
        let m = exp_limit_marginal_cdf_lambda1(&p, q, f64::INFINITY, 1e-10).map_err(failed)?;
        let good = (m - 1.0).abs() <= 1e-6;
        ok &= good;
        rep.rows.push(vec![label, "limit-density-normalization".into(), m.to_string(), String::new(), "1e-6".into(), status(good)]);
    }
    rep.pass = ok;
    Ok(rep)
}
