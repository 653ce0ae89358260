use super::lpp::advance_column;
use super::sample::{exponential_column, stream_rng};
use super::spec::LayeredSpec;
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Monte Carlo probability estimate with its 95% DKW half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub samples: u64,
    pub dkw_band: f64,
    pub seed: u64,
}

/// `sqrt(ln(2/0.05) / (2 samples))`.
pub fn dkw_band(samples: u64) -> f64 {
    ((2.0f64 / 0.05).ln() / (2.0 * samples as f64)).sqrt()
}

impl McEstimate {
    pub fn from_count(hits: u64, samples: u64, seed: u64) -> Self {
        McEstimate { estimate: hits as f64 / samples as f64, samples, dkw_band: dkw_band(samples), seed }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }

    /// Parse and check the invariants (`0 <= estimate <= 1`, band matches samples).
    pub fn from_json(text: &str) -> Result<Self> {
        let e: McEstimate = serde_json::from_str(text).map_err(|err| Error::Parse(err.to_string()))?;
        if !(0.0..=1.0).contains(&e.estimate) {
            return Err(Error::Parse(format!("estimate {} outside [0,1]", e.estimate)));
        }
        if e.samples == 0 {
            return Err(Error::Parse("zero samples".into()));
        }
        let band = dkw_band(e.samples);
        if (e.dkw_band - band).abs() > 1e-12 * band {
            return Err(Error::Parse(format!("dkw_band {} does not match {} samples", e.dkw_band, e.samples)));
        }
        Ok(e)
    }
}

fn check_times(spec: &LayeredSpec, times: &[usize]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidParameters("at least one time is needed".into()));
    }
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameters("times must be strictly increasing".into()));
    }
    if times[0] == 0 || *times.last().unwrap() > spec.k() {
        return Err(Error::OutOfRange(format!("times must lie in 1..={}", spec.k())));
    }
    Ok(())
}

/// `T(r_1), ..., T(r_N)` for one environment drawn from stream `stream`;
/// `stop` may end the sweep early once the outcome is known.
fn simulate<F: Fn(usize, f64) -> bool>(spec: &LayeredSpec, times: &[usize], seed: u64, stream: u64, stop: F) -> Vec<f64> {
    let n = spec.n();
    let mut rng = stream_rng(seed, stream);
    let mut state = vec![0.0; n];
    let mut col = vec![0.0; n];
    let mut out = Vec::with_capacity(times.len());
    let mut first = true;
    let last = *times.last().unwrap();
    for m in 1..=last {
        let nu = spec.nu()[m - 1];
        for j in 1..=spec.ell()[m - 1] as usize {
            exponential_column(&mut rng, nu, j, &mut col);
            advance_column(&mut state, &col, first);
            first = false;
        }
        if times[out.len()] == m {
            out.push(state[n - 1]);
            if stop(out.len() - 1, state[n - 1]) {
                break;
            }
        }
    }
    out
}

/// Last-passage process values `T(r_j)` for `samples` independent
/// environments. Row `s` comes from stream `s`, so the result does not depend
/// on the number of worker threads.
pub fn sample_lpp_process(spec: &LayeredSpec, times: &[usize], samples: u64, seed: u64) -> Result<Vec<Vec<f64>>> {
    check_times(spec, times)?;
    Ok((0..samples).into_par_iter().map(|s| simulate(spec, times, seed, s, |_, _| false)).collect())
}

/// Estimate of `P(T(r_j) <= s_j, j = 1..N)`.
pub fn monte_carlo_joint_cdf(spec: &LayeredSpec, times: &[usize], thresholds: &[f64], samples: u64, seed: u64) -> Result<McEstimate> {
    check_times(spec, times)?;
    if thresholds.len() != times.len() {
        return Err(Error::InvalidParameters(format!("{} thresholds for {} times", thresholds.len(), times.len())));
    }
    if samples == 0 {
        return Err(Error::InvalidParameters("samples must be at least 1".into()));
    }
    let hits = (0..samples)
        .into_par_iter()
        .filter(|&s| {
            let v = simulate(spec, times, seed, s, |j, t| t > thresholds[j]);
            v.len() == times.len() && v.iter().zip(thresholds).all(|(t, th)| t <= th)
        })
        .count();
    Ok(McEstimate::from_count(hits as u64, samples, seed))
}

/// `log n + [t nu] (log((nu + ell)/nu) + ell / (2 nu (nu + ell))) - 1/(2n)`.
pub fn critical_centering(n: u64, nu: u64, ell: u64, t: f64) -> Result<f64> {
    if n == 0 || nu == 0 || ell == 0 || !(t > 0.0) {
        return Err(Error::InvalidParameters("n, nu, ell must be positive and t > 0".into()));
    }
    let steps = (t * nu as f64).floor();
    if steps < 1.0 {
        return Err(Error::InvalidParameters(format!("[t nu] = 0 for t = {t}, nu = {nu}")));
    }
    let (n, nu, ell) = (n as f64, nu as f64, ell as f64);
    Ok(n.ln() + steps * (((nu + ell) / nu).ln() + ell / (2.0 * nu * (nu + ell))) - 1.0 / (2.0 * n))
}

/// The critically rescaled last-passage time `raw - centering`.
pub fn critical_rescale(n: u64, nu: u64, ell: u64, t: f64, raw_time: f64) -> Result<f64> {
    Ok(raw_time - critical_centering(n, nu, ell, t)?)
}
