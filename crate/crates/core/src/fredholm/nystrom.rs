use super::{window_rule, FredholmProblem};
use crate::error::{Error, Result};
use crate::kernels::{Critical, EvalOptions, Part};
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// A Nyström determinant with its diagnostics. `probability` is the raw
/// determinant; values outside `[0, 1]` are flagged, not clamped.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapResult {
    pub probability: f64,
    /// Last node-doubling change plus the propagated kernel error.
    pub est_error: f64,
    /// Nodes per panel on the accepted pass.
    pub nodes: usize,
    /// `(nodes, determinant)` for every pass.
    pub history: Vec<(usize, f64)>,
    pub converged: bool,
    pub windows: Vec<(f64, f64)>,
    pub window_capped: Vec<bool>,
    /// Largest kernel error estimate over all blocks of the last pass.
    pub kernel_error: f64,
    /// Ratio of the largest to the smallest pivot of `I - M`.
    pub condition_estimate: f64,
    pub out_of_range: bool,
    pub runtime_ms: u128,
}

/// Nodes of one window, split into panels of `m` Gauss–Legendre points each.
pub(crate) struct Grid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `(lo, hi, first node index)` of every panel.
    panels: Vec<(f64, f64, usize)>,
}

/// Panel edges inside window `j`: the preimages of later windows' left ends
/// under the first-term break, where the determinant's eigenfunctions kink.
fn grid(p: &FredholmProblem, j: usize, m: usize) -> Grid {
    let (a, b) = p.windows[j];
    let mut cuts = vec![a, b];
    for (k, &(ak, _)) in p.windows.iter().enumerate() {
        if let Some(br) = p.kernel.first_term_break(p.times[j], p.times[k]) {
            let x = br.invert(ak);
            if x > a + 1e-9 * (b - a) && x < b - 1e-9 * (b - a) {
                cuts.push(x);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * (b - a));
    let mut g = Grid { nodes: Vec::new(), weights: Vec::new(), panels: Vec::new() };
    for w in cuts.windows(2) {
        let (xs, ws) = window_rule(w[0], w[1], m);
        g.panels.push((w[0], w[1], g.nodes.len()));
        g.nodes.extend(xs);
        g.weights.extend(ws);
    }
    g
}

/// Barycentric weights of the Gauss–Legendre points, up to a common factor.
fn bary(m: usize) -> Vec<f64> {
    let (t, w) = &*crate::special::gauss_legendre(m);
    (0..m).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } * ((1.0 - t[i] * t[i]) * w[i]).sqrt()).collect()
}

/// Replaces the plain first-term entries of row `x` on the panel of window
/// `k` that the break cuts with product-integration weights
/// `int F(x, z) l_c(z) dz`, split at the break. Returns `(column, delta)`.
fn row_correction(
    p: &FredholmProblem,
    ta: f64,
    x: f64,
    tb: f64,
    g: &Grid,
    d: f64,
    m: usize,
    lam: &[f64],
) -> Result<(Vec<(usize, f64)>, f64)> {
    let Some(&(u, v, first)) = g.panels.iter().find(|&&(u, v, _)| u < d && d < v) else {
        return Ok((Vec::new(), 0.0));
    };
    let q = m + 8;
    let (l, lw) = window_rule(u, d, q);
    let (r, rw) = window_rule(d, v, q);
    let pts: Vec<f64> = g.nodes[first..first + m].iter().chain(&l).chain(&r).copied().collect();
    let wts: Vec<f64> = lw.into_iter().chain(rw).collect();
    let opts = EvalOptions { part: Part::FirstTerm, ..p.eval };
    let f = p.kernel.block(ta, &[x], tb, &pts, &opts)?;
    let (c0, h) = (0.5 * (u + v), 0.5 * (v - u));
    let tn: Vec<f64> = crate::special::gauss_legendre(m).0.clone();
    let mut pi = vec![0.0; m];
    for (i, w) in wts.iter().enumerate() {
        let z = (pts[m + i] - c0) / h;
        let terms: Vec<f64> = (0..m).map(|c| lam[c] / (z - tn[c])).collect();
        let den: f64 = terms.iter().sum();
        let fw = w * f.values[(0, m + i)];
        for c in 0..m {
            pi[c] += fw * terms[c] / den;
        }
    }
    let out = (0..m).map(|c| (first + c, pi[c] - g.weights[first + c] * f.values[(0, c)])).collect();
    Ok((out, f.est_error))
}

/// The discretized operator `chi K chi` with `m` nodes per panel: rows are
/// point values, columns carry quadrature weights. Returns the matrix, the
/// largest kernel error and the grids.
pub(crate) fn discretize(p: &FredholmProblem, m: usize) -> Result<(DMatrix<f64>, f64, Vec<Grid>)> {
    let nt = p.times.len();
    let grids: Vec<Grid> = (0..nt).map(|j| grid(p, j, m)).collect();
    let offs: Vec<usize> = grids.iter().scan(0, |o, g| { let s = *o; *o += g.nodes.len(); Some(s) }).collect();
    let size: usize = grids.iter().map(|g| g.nodes.len()).sum();
    let pairs: Vec<(usize, usize)> = (0..nt).flat_map(|j| (0..nt).map(move |k| (j, k))).collect();
    let blocks = pairs
        .par_iter()
        .map(|&(j, k)| p.kernel.block(p.times[j], &grids[j].nodes, p.times[k], &grids[k].nodes, &p.eval))
        .collect::<Result<Vec<_>>>()?;
    let mut mat = DMatrix::<f64>::zeros(size, size);
    let mut kerr = 0.0f64;
    for (&(j, k), b) in pairs.iter().zip(&blocks) {
        kerr = kerr.max(b.est_error);
        for a in 0..grids[j].nodes.len() {
            for (c, w) in grids[k].weights.iter().enumerate() {
                mat[(offs[j] + a, offs[k] + c)] = w * b.values[(a, c)];
            }
        }
    }
    let lam = bary(m);
    for &(j, k) in &pairs {
        let Some(br) = p.kernel.first_term_break(p.times[j], p.times[k]) else { continue };
        let rows = grids[j]
            .nodes
            .par_iter()
            .map(|&x| row_correction(p, p.times[j], x, p.times[k], &grids[k], br.apply(x), m, &lam))
            .collect::<Result<Vec<_>>>()?;
        for (a, (cols, e)) in rows.into_iter().enumerate() {
            kerr = kerr.max(e);
            for (c, dv) in cols {
                mat[(offs[j] + a, offs[k] + c)] += dv;
            }
        }
    }
    if mat.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonConvergence("non-finite kernel entries".into()));
    }
    Ok((mat, kerr, grids))
}

/// Determinant of `I - M` for `m` nodes per panel, with the kernel error
/// bound and the pivot ratio.
fn pass(p: &FredholmProblem, m: usize) -> Result<(f64, f64, f64)> {
    let (mat, kerr, _) = discretize(p, m)?;
    let size = mat.nrows();
    let lu = (DMatrix::<f64>::identity(size, size) - mat).lu();
    let det = lu.determinant();
    let u = lu.u();
    let piv: Vec<f64> = (0..size).map(|i| u[(i, i)].abs()).collect();
    let (hi, lo) = piv.iter().fold((0.0f64, f64::INFINITY), |(h, l), &v| (h.max(v), l.min(v)));
    Ok((det, kerr, hi / lo))
}

/// `det(I - chi K chi)` by Gauss–Legendre Nyström discretization with node
/// doubling until successive values agree to `p.tol`.
pub fn nystrom_gap_probability(p: &FredholmProblem) -> Result<GapResult> {
    let start = Instant::now();
    if p.nodes == 0 || p.max_nodes < p.nodes {
        return Err(Error::InvalidParameters("need 1 <= nodes <= max_nodes".into()));
    }
    let mut history = Vec::new();
    let mut m = p.nodes;
    let (mut det, mut kerr, mut cond) = pass(p, m)?;
    history.push((m, det));
    let mut change = f64::INFINITY;
    while m * 2 <= p.max_nodes {
        m *= 2;
        let (d, k, c) = pass(p, m)?;
        change = (d - det).abs();
        det = d;
        kerr = k;
        cond = c;
        history.push((m, d));
        if change < p.tol {
            break;
        }
    }
    let converged = change < p.tol;
    if !converged && p.strict {
        return Err(Error::NonConvergence(format!(
            "node doubling to {m} still changes the determinant by {change:.2e} (value {det})"
        )));
    }
    let total_len: f64 = p.windows.iter().map(|(a, b)| b - a).sum();
    Ok(GapResult {
        probability: det,
        est_error: change + kerr * total_len,
        nodes: m,
        history,
        converged,
        windows: p.windows.clone(),
        window_capped: p.window_capped.clone(),
        kernel_error: kerr,
        condition_estimate: cond,
        out_of_range: !(-1e-8..=1.0 + 1e-8).contains(&det),
        runtime_ms: start.elapsed().as_millis(),
    })
}

/// Finite-dimensional law of the critical process,
/// `P(C(t_k) <= s_k, k = 1..N)`.
pub fn critical_fidi(times: &[f64], thresholds: &[f64], eval: &EvalOptions) -> Result<GapResult> {
    if times.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::InvalidParameters("critical times must be positive".into()));
    }
    let p = FredholmProblem::with_options(&Critical, times.to_vec(), thresholds.to_vec(), *eval)?;
    nystrom_gap_probability(&p)
}
