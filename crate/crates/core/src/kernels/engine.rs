//! Shared machinery: both backends reduce a kernel to sums over contour
//! nodes. The quadrature backend places Gauss–Legendre panels on rectangles
//! and lines; the residue backend places trapezoid circles around each pole,
//! so every residue is a discretized `residue_circle`.

use crate::error::{Error, Result};
use super::Part;
use crate::special::{circle_rule, ContourPath};
use crate::C64;
use nalgebra::DMatrix;
use rayon::prelude::*;

pub(crate) const ORDER: usize = 16;
const EPS: f64 = 2.2e-16;

pub(crate) type LogFn<'a> = dyn Fn(C64) -> Result<C64> + Sync + 'a;

/// Nodes, weights (carrying `dz / 2 pi i`) and the log of the analytic
/// factor at each node.
#[derive(Debug, Clone, Default)]
pub(crate) struct Side {
    pub nodes: Vec<C64>,
    pub weights: Vec<C64>,
    pub logf: Vec<C64>,
}

impl Side {
    fn from_parts(nodes: Vec<C64>, weights: Vec<C64>, f: &LogFn) -> Result<Side> {
        let logf = nodes.par_iter().map(|z| f(*z)).collect::<Result<Vec<_>>>()?;
        Ok(Side { nodes, weights, logf })
    }

    pub fn path(path: &ContourPath, ppu: f64, f: &LogFn) -> Result<Side> {
        let q = path.discretize(ppu, ORDER);
        Self::from_parts(q.nodes, q.weights, f)
    }

    pub fn circles(centers: &[f64], radius: f64, nodes: usize, f: &LogFn) -> Result<Side> {
        let mut zs = Vec::with_capacity(centers.len() * nodes);
        let mut ws = Vec::with_capacity(centers.len() * nodes);
        for &c in centers {
            let (z, w) = circle_rule(C64::new(c, 0.0), radius, nodes);
            zs.extend(z);
            ws.extend(w);
        }
        Self::from_parts(zs, ws, f)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }
}

/// Values stored as `Re(mant) * exp(shift)`, with a rounding bound in the
/// same units as `mant`.
pub(crate) struct Scaled {
    pub mant: DMatrix<C64>,
    pub shift: DMatrix<f64>,
    pub round: DMatrix<f64>,
}

impl Scaled {
    /// Adds `sign * exp(logpref(i, j)) * value` into `out`, and the rounding
    /// bound into `err`.
    pub fn accumulate<P: Fn(usize, usize) -> f64>(&self, out: &mut DMatrix<f64>, err: &mut DMatrix<f64>, sign: f64, logpref: P) {
        for j in 0..out.ncols() {
            for i in 0..out.nrows() {
                let s = (self.shift[(i, j)] + logpref(i, j)).exp();
                if s == 0.0 || !s.is_finite() && self.mant[(i, j)].norm() == 0.0 {
                    continue;
                }
                out[(i, j)] += sign * self.mant[(i, j)].re * s;
                err[(i, j)] += self.round[(i, j)] * s;
            }
        }
    }
}

fn split(m: &DMatrix<C64>) -> (DMatrix<f64>, DMatrix<f64>) {
    (m.map(|z| z.re), m.map(|z| z.im))
}

fn cmul(a: &(DMatrix<f64>, DMatrix<f64>), b: &(DMatrix<f64>, DMatrix<f64>)) -> (DMatrix<f64>, DMatrix<f64>) {
    let re = &a.0 * &b.0 - &a.1 * &b.1;
    let im = &a.0 * &b.1 + &a.1 * &b.0;
    (re, im)
}

/// Row factors `w_a exp(L_a + sign * node_a * c_i)` with per-row log shifts.
fn factors(side: &Side, coupling: &[f64], sign: f64) -> (DMatrix<C64>, DMatrix<f64>, Vec<f64>) {
    let na = side.len();
    let rows: Vec<(Vec<C64>, f64)> = coupling
        .par_iter()
        .map(|&c| {
            let logs: Vec<C64> = (0..na)
                .map(|a| side.logf[a] + sign * side.nodes[a] * c + side.weights[a].norm().ln())
                .collect();
            let shift = logs.iter().map(|l| l.re).filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
            let shift = if shift.is_finite() { shift } else { 0.0 };
            let row = (0..na)
                .map(|a| {
                    let w = side.weights[a] / side.weights[a].norm();
                    w * (logs[a] - shift).exp()
                })
                .collect();
            (row, shift)
        })
        .collect();
    let mut m = DMatrix::<C64>::zeros(coupling.len(), na);
    let mut shifts = Vec::with_capacity(coupling.len());
    for (i, (row, s)) in rows.into_iter().enumerate() {
        for (a, v) in row.into_iter().enumerate() {
            m[(i, a)] = v;
        }
        shifts.push(s);
    }
    let abs = m.map(|z| z.norm());
    (m, abs, shifts)
}

/// `sum_a sum_b wz_a e^{Lz_a - zeta_a X_i} ws_b e^{Ls_b + sigma_b Y_j} / (sigma_b - zeta_a)`.
pub(crate) fn double_sum(zeta: &Side, sigma: &Side, xs: &[f64], ys: &[f64]) -> Scaled {
    let (a, a_abs, sa) = factors(zeta, xs, -1.0);
    let (b, b_abs, sb) = factors(sigma, ys, 1.0);
    let c = DMatrix::<C64>::from_fn(zeta.len(), sigma.len(), |i, j| (sigma.nodes[j] - zeta.nodes[i]).inv());
    let c_abs = c.map(|z| z.norm());
    let ac = cmul(&split(&a), &split(&c));
    let bt = split(&b.transpose());
    let m = cmul(&ac, &bt);
    let mant = DMatrix::from_fn(xs.len(), ys.len(), |i, j| C64::new(m.0[(i, j)], m.1[(i, j)]));
    let round = (&a_abs * &c_abs * b_abs.transpose()) * (4.0 * EPS * ((zeta.len() + sigma.len()) as f64).sqrt());
    let shift = DMatrix::from_fn(xs.len(), ys.len(), |i, j| sa[i] + sb[j]);
    Scaled { mant, shift, round }
}

/// `sum_c w_c e^{L_c - eta_c (X_i - Y_j)}`, one pair at a time so that large
/// `X_i` and `Y_j` with a small difference stay accurate.
pub(crate) fn single_sum(eta: &Side, xs: &[f64], ys: &[f64]) -> Scaled {
    let nx = xs.len();
    let ny = ys.len();
    let cells: Vec<(C64, f64, f64)> = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % nx, k / nx);
            let d = xs[i] - ys[j];
            let logs: Vec<C64> = (0..eta.len())
                .map(|c| eta.logf[c] - eta.nodes[c] * d + eta.weights[c].norm().ln())
                .collect();
            let shift = logs.iter().map(|l| l.re).filter(|v| v.is_finite()).fold(f64::NEG_INFINITY, f64::max);
            if !shift.is_finite() {
                return (C64::new(0.0, 0.0), 0.0, 0.0);
            }
            let mut sum = C64::new(0.0, 0.0);
            let mut abs = 0.0;
            for c in 0..eta.len() {
                let v = (logs[c] - shift).exp() * (eta.weights[c] / eta.weights[c].norm());
                sum += v;
                abs += v.norm();
            }
            (sum, shift, abs * 4.0 * EPS * (eta.len() as f64).sqrt())
        })
        .collect();
    let mant = DMatrix::from_fn(nx, ny, |i, j| cells[i + j * nx].0);
    let shift = DMatrix::from_fn(nx, ny, |i, j| cells[i + j * nx].1);
    let round = DMatrix::from_fn(nx, ny, |i, j| cells[i + j * nx].2);
    Scaled { mant, shift, round }
}

/// Half-height `W` of a vertical line `Re = c` beyond which the integrand
/// (log-magnitude `logmag(w)`) contributes less than `rel` of its peak.
/// `power` is the algebraic decay exponent when the decay is only algebraic.
pub(crate) fn line_cutoff<F: Fn(f64) -> Result<f64>>(logmag: F, power: Option<f64>, rel: f64) -> Result<f64> {
    let mut peak = f64::NEG_INFINITY;
    for k in 0..=8 {
        peak = peak.max(logmag(0.25 * k as f64)?);
    }
    let tail_ok = |w: f64, lm: f64, peak: f64| -> bool {
        let factor = match power {
            Some(p) if p > 1.0 => (w / (p - 1.0)).max(1.0),
            Some(_) => f64::INFINITY,
            None => 1.0,
        };
        lm + factor.ln() < peak + rel.ln()
    };
    let mut w = 2.0;
    loop {
        let lm = logmag(w)?;
        peak = peak.max(lm);
        if tail_ok(w, lm, peak) && tail_ok(1.5 * w, logmag(1.5 * w)?, peak) {
            return Ok(w);
        }
        w *= 1.5;
        if w > 2e4 {
            return Err(Error::Budget(format!("contour line would need half-height above {w:.0}")));
        }
    }
}

/// Number of unit steps along the real axis, from `start` in direction `dir`,
/// before `logmag` falls below `rel` of its running peak for good.
pub(crate) fn real_cutoff<F: Fn(f64) -> Result<f64>>(logmag: F, start: f64, dir: f64, rel: f64, cap: usize) -> Result<usize> {
    let mut peak = f64::NEG_INFINITY;
    let mut quiet = 0;
    let mut prev = f64::INFINITY;
    for m in 0..cap {
        let lm = logmag(start + dir * m as f64)?;
        peak = peak.max(lm);
        if lm < peak + rel.ln() && lm <= prev {
            quiet += 1;
            if quiet >= 3 {
                return Ok(m + 1);
            }
        } else {
            quiet = 0;
        }
        prev = lm;
    }
    Err(Error::Budget(format!("pole series needs more than {cap} terms")))
}

/// Runs `eval(level)` at increasing resolution until successive results
/// agree to `tol` (relative to the larger of 1 and the entry), returning the
/// finest values and the error estimate (last difference plus rounding).
pub(crate) fn refine<F>(eval: F, tol: f64, levels: u32) -> Result<(DMatrix<f64>, f64)>
where
    F: Fn(u32) -> Result<(DMatrix<f64>, DMatrix<f64>)>,
{
    let (mut prev, _) = eval(0)?;
    let mut last_err = f64::INFINITY;
    for level in 1..=levels.max(1) {
        let (next, round) = eval(level)?;
        let mut worst = 0.0f64;
        let mut err = 0.0f64;
        for (k, (a, b)) in next.iter().zip(prev.iter()).enumerate() {
            let d = (a - b).abs();
            if !d.is_finite() || !a.is_finite() {
                return Err(Error::NonConvergence("non-finite kernel value".into()));
            }
            worst = worst.max(d / a.abs().max(1.0));
            err = err.max(d + round.as_slice()[k]);
        }
        last_err = err;
        prev = next;
        if worst <= tol {
            break;
        }
    }
    Ok((prev, last_err))
}

/// Geometry of one contour, resolved (truncations fixed) before refinement.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Contour {
    Rect { lo: f64, hi: f64, h: f64 },
    OpenRight { left: f64, h: f64, end: f64 },
    OpenLeft { right: f64, h: f64, end: f64 },
    Line { c: f64, w: f64 },
    Circles { centers: Vec<f64>, r: f64 },
}

impl Contour {
    pub fn side(&self, level: u32, f: &LogFn) -> Result<Side> {
        let ppu = 2.0 * f64::from(1u32 << level);
        match self {
            Contour::Rect { lo, hi, h } => Side::path(&ContourPath::rectangle(*lo, *hi, *h), ppu, f),
            Contour::OpenRight { left, h, end } => Side::path(&ContourPath::zeta_open_right(*left, *h, *end), ppu, f),
            Contour::OpenLeft { right, h, end } => Side::path(&ContourPath::sigma_open_left(*right, *h, *end), ppu, f),
            Contour::Line { c, w } => Side::path(&ContourPath::vertical_line(*c, *w), ppu, f),
            Contour::Circles { centers, r } => Side::circles(centers, *r, 32usize << level, f),
        }
    }
}

/// Where the single-integral term is nonzero, as a function of `D = X - Y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Support {
    All,
    /// Zero for `D > 0`; at `D = 0` either zero or half the closed-contour value.
    NegativeOnly { half_at_zero: bool },
}

pub(crate) enum First<'a> {
    None,
    /// `-int f(eta) e^{-eta D} d eta / 2 pi i`.
    Integral { contour: Contour, f: Box<LogFn<'a>>, support: Support },
    /// `-exp(-D^2 / 2 dt) / sqrt(2 pi dt)`.
    Gaussian { dt: f64 },
}

/// A kernel in logarithmic coordinates:
/// `L(X, Y) = first(X - Y) + int int e^{zf(zeta) + sf(sigma) - zeta X + sigma Y} / (sigma - zeta)`.
pub(crate) struct Plan<'a> {
    pub zeta: Contour,
    pub zf: Box<LogFn<'a>>,
    pub sigma: Contour,
    pub sf: Box<LogFn<'a>>,
    pub first: First<'a>,
}

impl Plan<'_> {
    /// Values of `exp(log_pref(i, j)) * L(X_i, Y_j)` and their rounding bounds.
    pub fn eval<P>(&self, xs: &[f64], ys: &[f64], level: u32, part: Part, log_pref: P) -> Result<(DMatrix<f64>, DMatrix<f64>)>
    where
        P: Fn(usize, usize) -> f64 + Copy,
    {
        let mut out = DMatrix::zeros(xs.len(), ys.len());
        let mut err = DMatrix::zeros(xs.len(), ys.len());
        if part != Part::FirstTerm {
            let zs = self.zeta.side(level, self.zf.as_ref())?;
            let ss = self.sigma.side(level, self.sf.as_ref())?;
            double_sum(&zs, &ss, xs, ys).accumulate(&mut out, &mut err, 1.0, log_pref);
        }
        if part == Part::DoubleIntegral {
            return Ok((out, err));
        }
        match &self.first {
            First::None => {}
            First::Gaussian { dt } => {
                for j in 0..ys.len() {
                    for i in 0..xs.len() {
                        let d = xs[i] - ys[j];
                        let v = (-d * d / (2.0 * dt) + log_pref(i, j)).exp() / (2.0 * std::f64::consts::PI * dt).sqrt();
                        out[(i, j)] -= v;
                        err[(i, j)] += EPS * v;
                    }
                }
            }
            First::Integral { contour, f, support } => {
                let es = contour.side(level, f.as_ref())?;
                let single = single_sum(&es, xs, ys);
                let weight = |i: usize, j: usize| -> f64 {
                    let d = xs[i] - ys[j];
                    match support {
                        Support::All => 1.0,
                        Support::NegativeOnly { half_at_zero } => {
                            if d < 0.0 {
                                1.0
                            } else if d == 0.0 && *half_at_zero {
                                0.5
                            } else {
                                0.0
                            }
                        }
                    }
                };
                for j in 0..ys.len() {
                    for i in 0..xs.len() {
                        let w = weight(i, j);
                        if w == 0.0 {
                            continue;
                        }
                        let s = (single.shift[(i, j)] + log_pref(i, j)).exp();
                        out[(i, j)] -= w * single.mant[(i, j)].re * s;
                        err[(i, j)] += w * single.round[(i, j)] * s;
                    }
                }
            }
        }
        Ok((out, err))
    }
}

/// Largest value of `coef * v` over `v` in the closed range of `vals`.
pub(crate) fn max_linear(coef: f64, vals: &[f64]) -> f64 {
    vals.iter().map(|v| coef * v).fold(f64::NEG_INFINITY, f64::max)
}

/// Relative magnitude below which contour tails are dropped.
pub(crate) const TAIL_REL: f64 = 1e-18;

/// Right-open rectangle (or residue circles at `0, 1, ..., M`) for a zeta
/// factor with poles at the non-negative integers.
pub(crate) fn zeta_open(f: &LogFn, xs: &[f64], residue: bool, s: f64) -> Result<Contour> {
    let h = 0.25 * s;
    let scan = |re: f64| -> Result<f64> { Ok(f(C64::new(re, h))?.re + max_linear(-re, xs)) };
    let m = real_cutoff(scan, 0.5, 1.0, TAIL_REL, 4000)?;
    Ok(if residue {
        Contour::Circles { centers: (0..=m).map(|k| k as f64).collect(), r: circle_radius(s) }
    } else {
        Contour::OpenRight { left: -0.25 * s, h, end: m as f64 + 1.0 }
    })
}

/// Left-open rectangle (or circles at `first, first - 1, ...`) for a sigma
/// factor with poles at the integers `<= first`.
pub(crate) fn sigma_open(f: &LogFn, ys: &[f64], first: f64, residue: bool, s: f64) -> Result<Contour> {
    let h = 0.25 * s;
    let scan = |re: f64| -> Result<f64> { Ok(f(C64::new(re, h))?.re + max_linear(re, ys)) };
    let m = real_cutoff(scan, first - 0.5, -1.0, TAIL_REL, 4000)?;
    Ok(if residue {
        Contour::Circles { centers: (0..=m).map(|k| first - k as f64).collect(), r: circle_radius(s) }
    } else {
        Contour::OpenLeft { right: -0.375 * s, h, end: -first + m as f64 + 1.0 }
    })
}

/// Vertical line at `c` truncated where `f` has decayed.
pub(crate) fn line(f: &LogFn, c: f64, power: Option<f64>) -> Result<Contour> {
    let w = line_cutoff(|w| Ok(f(C64::new(c, w))?.re - (1.0 + w).ln()), power, 1e-17)?;
    Ok(Contour::Line { c, w })
}

pub(crate) fn circle_radius(s: f64) -> f64 {
    0.25 * s.min(1.2)
}

/// Single-integral contour for a pole family `first, first - 1, ...`, either
/// a vertical line to its right or residue circles truncated for the given
/// range of `D = X - Y`.
pub(crate) fn family_first(f: &LogFn, first: f64, ds: &[f64], residue: bool, s: f64) -> Result<Contour> {
    if residue {
        let scan = |re: f64| -> Result<f64> { Ok(f(C64::new(re, 0.25))?.re + max_linear(-re, ds)) };
        let m = real_cutoff(scan, first - 0.5, -1.0, TAIL_REL, 4000)?;
        Ok(Contour::Circles { centers: (0..=m).map(|k| first - k as f64).collect(), r: circle_radius(s) })
    } else {
        line(f, first + 0.5 * s, None)
    }
}
