use super::polynomial::{schur_bialternant, skew_schur_tableau_sum, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::rsk::Partition;
use std::fmt::Write;

/// Geometric parameters: row weights `x` and per-block column weights `y[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurProcessParams {
    x: Vec<f64>,
    y: Vec<Vec<f64>>,
}

impl SchurProcessParams {
    pub fn new(x: Vec<f64>, y: Vec<Vec<f64>>) -> Result<Self> {
        if x.is_empty() || y.is_empty() || y.iter().any(|b| b.is_empty()) {
            return Err(Error::InvalidParameters("need n >= 1 and nonempty blocks".into()));
        }
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !x.iter().chain(y.iter().flatten()).all(|&v| unit(v)) {
            return Err(Error::InvalidParameters("x and y must lie in (0,1)".into()));
        }
        Ok(SchurProcessParams { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn q(&self) -> usize {
        self.y.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[Vec<f64>] {
        &self.y
    }

    /// `1/Z_S = Π (1 - x_i y_j^(k))`.
    pub fn inverse_normalization(&self) -> f64 {
        let mut p = 1.0;
        for &xi in &self.x {
            for &yj in self.y.iter().flatten() {
                p *= 1.0 - xi * yj;
            }
        }
        p
    }

    /// `P(total weight >= m)`. The total weight is a sum of independent
    /// geometric variables with ratios `x_i y_j`; this is the Chernoff bound
    /// `inf_z E[z^W] z^{-m}`, exact in the limit of many small ratios.
    pub fn weight_tail_bound(&self, m: u64) -> f64 {
        let ratios: Vec<f64> = self.x.iter().flat_map(|&a| self.y.iter().flatten().map(move |&b| a * b)).collect();
        let rmax = ratios.iter().cloned().fold(0.0, f64::max);
        let log_mgf = |z: f64| ratios.iter().map(|&r| (1.0 - r).ln() - (1.0 - r * z).ln()).sum::<f64>();
        let (mut lo, mut hi) = (1.0f64, 1.0 / rmax);
        // log bound is convex in ln z; golden-section on z.
        let f = |z: f64| log_mgf(z) - m as f64 * z.ln();
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if f(a) < f(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        f(0.5 * (lo + hi)).exp().min(1.0)
    }
}

/// `P(Λ^(k) = λ^(k), k = 1..q)`.
pub fn schur_process_pmf(params: &SchurProcessParams, lambdas: &[Partition]) -> Result<f64> {
    if lambdas.len() != params.q() {
        return Err(Error::InvalidParameters(format!(
            "expected {} partitions, got {}",
            params.q(),
            lambdas.len()
        )));
    }
    let n = params.n();
    if let Some(l) = lambdas.iter().find(|l| l.length() > n) {
        return Err(Error::InvalidParameters(format!("partition {l} has more than n = {n} parts")));
    }
    let empty = Partition::empty();
    let mut w = params.inverse_normalization() * schur_bialternant(&lambdas[params.q() - 1], params.x())?;
    for k in 0..params.q() {
        let prev = if k == 0 { &empty } else { &lambdas[k - 1] };
        if !lambdas[k].contains(prev) {
            return Ok(0.0);
        }
        w *= skew_schur_tableau_sum(&lambdas[k], prev, &params.y()[k], DEFAULT_BUDGET)?;
        if w == 0.0 {
            return Ok(0.0);
        }
    }
    Ok(w)
}

/// Mass of the Schur process split by the weight `|λ^(q)|`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationReport {
    /// `(weight, mass of that stratum)` for weights `0..=max_weight`.
    pub strata: Vec<(u64, f64)>,
    /// Upper bound on the mass of weights above `max_weight`.
    pub tail_bound: f64,
}

impl NormalizationReport {
    pub fn total(&self) -> f64 {
        self.strata.iter().map(|s| s.1).sum()
    }

    /// `weight,mass,cumulative` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,mass,cumulative\n");
        let mut acc = 0.0;
        for &(w, m) in &self.strata {
            acc += m;
            let _ = writeln!(out, "{w},{m:.17e},{acc:.17e}");
        }
        out
    }
}

/// Sums the pmf over every chain `λ^(1) ⊆ … ⊆ λ^(q)` with `|λ^(q)| <= max_weight`.
pub fn schur_process_normalization(params: &SchurProcessParams, max_weight: u64) -> Result<NormalizationReport> {
    let n = params.n();
    let q = params.q();
    let mut strata = Vec::new();
    for w in 0..=max_weight {
        let mut mass = 0.0;
        for top in Partition::all_of_weight(w, n) {
            let mut chain = vec![Partition::empty(); q];
            chain[q - 1] = top;
            mass += descend(params, &mut chain, q - 1)?;
        }
        strata.push((w, mass));
    }
    Ok(NormalizationReport { strata, tail_bound: params.weight_tail_bound(max_weight + 1) })
}

/// Enumerates `λ^(k-1)` under a fixed `λ^(k)`, pruning shapes whose skew
/// diagram has a column taller than the number of block variables.
fn descend(params: &SchurProcessParams, chain: &mut Vec<Partition>, k: usize) -> Result<f64> {
    if k == 0 {
        // λ^(1) itself needs at most ℓ_1 rows.
        if chain[0].length() > params.y()[0].len() {
            return Ok(0.0);
        }
        return schur_process_pmf(params, chain);
    }
    let outer = chain[k].clone();
    let height = params.y()[k].len();
    let mut total = 0.0;
    for inner in sub_partitions(&outer, height) {
        chain[k - 1] = inner;
        total += descend(params, chain, k - 1)?;
    }
    Ok(total)
}

/// All `μ ⊆ λ` with `μ_i >= λ_{i+h}`.
fn sub_partitions(lambda: &Partition, h: usize) -> Vec<Partition> {
    let len = lambda.length();
    let mut out = Vec::new();
    let mut cur = vec![0u64; len];
    fn rec(i: usize, lambda: &Partition, h: usize, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if i == cur.len() {
            out.push(Partition::new(cur.clone()).expect("decreasing by construction"));
            return;
        }
        let hi = if i == 0 { lambda.get(0) } else { lambda.get(i).min(cur[i - 1]) };
        let lo = lambda.get(i + h);
        for v in lo..=hi {
            cur[i] = v;
            rec(i + 1, lambda, h, cur, out);
        }
    }
    rec(0, lambda, h, &mut cur, &mut out);
    out
}
