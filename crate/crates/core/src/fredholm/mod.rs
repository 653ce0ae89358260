//! Gap probabilities `P(T(r_k) <= s_k, k = 1..N)` as Fredholm determinants
//! `det(I - chi K chi)` over `{r_1..r_N} x R`, where `chi` restricts time
//! `r_k` to its window.

mod nystrom;
mod series;

pub use nystrom::{critical_fidi, nystrom_gap_probability, GapResult};
pub use series::{series_gap_probability, SeriesResult};

use crate::error::{Error, Result};
use crate::kernels::{EvalOptions, TimeKernel};

/// Windows are cut where the diagonal falls below this fraction of its maximum.
pub const WINDOW_DECAY: f64 = 1e-10;
/// Hard cap on window length.
pub const WINDOW_CAP: f64 = 40.0;

pub struct FredholmProblem<'a> {
    pub kernel: &'a dyn TimeKernel,
    pub times: Vec<f64>,
    /// Integration window `[lo, hi]` per time.
    pub windows: Vec<(f64, f64)>,
    /// Whether the window hit [`WINDOW_CAP`] before the diagonal decayed.
    pub window_capped: Vec<bool>,
    /// Nodes per window on the first Nyström pass.
    pub nodes: usize,
    pub max_nodes: usize,
    /// Successive node doublings must agree to this.
    pub tol: f64,
    /// Fail instead of returning an unconverged value.
    pub strict: bool,
    pub eval: EvalOptions,
}

impl<'a> FredholmProblem<'a> {
    /// Windows `(s_j, s_j + Lambda_j]` with `Lambda_j` from the kernel's own
    /// diagonal decay at time `r_j`.
    pub fn new(kernel: &'a dyn TimeKernel, times: Vec<f64>, thresholds: Vec<f64>) -> Result<Self> {
        Self::with_options(kernel, times, thresholds, EvalOptions::default())
    }

    pub fn with_options(kernel: &'a dyn TimeKernel, times: Vec<f64>, thresholds: Vec<f64>, eval: EvalOptions) -> Result<Self> {
        if thresholds.len() != times.len() {
            return Err(Error::InvalidParameters(format!(
                "{} times but {} thresholds",
                times.len(),
                thresholds.len()
            )));
        }
        let mut windows = Vec::with_capacity(times.len());
        let mut capped = Vec::with_capacity(times.len());
        for (&t, &s) in times.iter().zip(&thresholds) {
            if !s.is_finite() {
                return Err(Error::InvalidParameters(format!("threshold {s} is not finite")));
            }
            let (len, cap) = decay_length(kernel, t, s, &eval)?;
            windows.push((s, s + len));
            capped.push(cap);
        }
        let mut p = Self::with_windows(kernel, times, windows)?;
        p.window_capped = capped;
        p.eval = eval;
        Ok(p)
    }

    /// Explicit windows, e.g. `(0, e^{-s})` for multiplicative kernels.
    pub fn with_windows(kernel: &'a dyn TimeKernel, times: Vec<f64>, windows: Vec<(f64, f64)>) -> Result<Self> {
        if times.is_empty() || windows.len() != times.len() {
            return Err(Error::InvalidParameters("need one window per time and at least one time".into()));
        }
        for (i, t) in times.iter().enumerate() {
            if times[..i].contains(t) {
                return Err(Error::InvalidParameters(format!("time {t} repeated")));
            }
        }
        if windows.iter().any(|&(a, b)| !(b > a) || !a.is_finite() || !b.is_finite()) {
            return Err(Error::InvalidParameters("every window must be a finite interval with positive length".into()));
        }
        let n = times.len();
        Ok(FredholmProblem {
            kernel,
            times,
            windows,
            window_capped: vec![false; n],
            nodes: 24,
            max_nodes: 192,
            tol: 1e-6,
            strict: false,
            eval: EvalOptions::default(),
        })
    }
}

/// Length after which the diagonal `K(t, x; t, x)`, `x > s`, stays below
/// [`WINDOW_DECAY`] of its running maximum; capped at [`WINDOW_CAP`].
fn decay_length(kernel: &dyn TimeKernel, t: f64, s: f64, eval: &EvalOptions) -> Result<(f64, bool)> {
    let step = 0.5;
    let mut peak = 0.0f64;
    let mut lam = 0.0;
    while lam < WINDOW_CAP {
        // The left end itself may be a boundary of the kernel's domain.
        let x = s + lam.max(1e-3);
        let d = kernel.value(t, x, t, x, eval)?.value.abs();
        peak = peak.max(d);
        if lam > 0.0 && d < WINDOW_DECAY * peak {
            return Ok((lam, false));
        }
        lam += step;
    }
    Ok((WINDOW_CAP, true))
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub(crate) fn window_rule(a: f64, b: f64, m: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = crate::special::gauss_legendre(m);
    let (h, c) = (0.5 * (b - a), 0.5 * (b + a));
    (rule.0.iter().map(|x| c + h * x).collect(), rule.1.iter().map(|w| h * w).collect())
}
