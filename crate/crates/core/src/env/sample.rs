use super::array::{ClockArray, Mode};
use super::spec::LayeredSpec;
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator for one sample: the seed selects the key, `stream` the
/// independent sub-sequence. Sample `s` of a Monte Carlo run uses stream `s`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[inline]
pub(crate) fn unit_exponential<R: Rng>(rng: &mut R) -> f64 {
    // 1 - U lies in (0, 1], so the logarithm is finite.
    -(1.0 - rng.gen::<f64>()).ln()
}

/// Fill one column (block `m`, local column `j`, both 1-based) with
/// exponential draws, top to bottom.
#[inline]
pub(crate) fn exponential_column<R: Rng>(rng: &mut R, nu_m: u32, j: usize, out: &mut [f64]) {
    for (i0, v) in out.iter_mut().enumerate() {
        let rate = (nu_m as usize + i0 + j - 1) as f64;
        *v = unit_exponential(rng) / rate;
    }
}

fn check_k(spec: &LayeredSpec, k: usize) -> Result<()> {
    if k == 0 || k > spec.k() {
        return Err(Error::OutOfRange(format!("block count {k} not in 1..={}", spec.k())));
    }
    Ok(())
}

/// Exponential array of the first `k` blocks, drawn column by column from
/// stream `stream` of `seed`.
pub fn sample_exponential_stream(spec: &LayeredSpec, k: usize, seed: u64, stream: u64) -> Result<ClockArray> {
    check_k(spec, k)?;
    let n = spec.n();
    let width = spec.width(k);
    let mut rng = stream_rng(seed, stream);
    let mut values = vec![0.0; n * width];
    let mut col = vec![0.0; n];
    let mut c = 0;
    for m in 1..=k {
        for j in 1..=spec.ell()[m - 1] as usize {
            exponential_column(&mut rng, spec.nu()[m - 1], j, &mut col);
            for i in 0..n {
                values[i * width + c] = col[i];
            }
            c += 1;
        }
    }
    let lens = spec.ell()[..k].iter().map(|&l| l as usize).collect();
    ClockArray::new(n, lens, values, Mode::Exponential)
}

/// Entry `(i, j)` of block `m` is an independent `Exp(nu_m + i + j - 2)` draw.
pub fn sample_exponential_blocks(spec: &LayeredSpec, k: usize, seed: u64) -> Result<ClockArray> {
    sample_exponential_stream(spec, k, seed, 0)
}

/// Geometric array: entry `(i, j)` of block `m` has
/// `P(= s) = (1 - x_i y_j) (x_i y_j)^s`.
pub fn sample_geometric_stream(
    spec: &LayeredSpec,
    k: usize,
    x: &[f64],
    y: &[Vec<f64>],
    seed: u64,
    stream: u64,
) -> Result<ClockArray> {
    check_k(spec, k)?;
    let n = spec.n();
    if x.len() != n || y.len() < k {
        return Err(Error::InvalidParameters(format!("need {n} x values and {k} y blocks")));
    }
    for m in 0..k {
        if y[m].len() != spec.ell()[m] as usize {
            return Err(Error::InvalidParameters(format!("y block {} needs {} values", m + 1, spec.ell()[m])));
        }
    }
    let inside = |v: f64| v > 0.0 && v < 1.0;
    if !x.iter().all(|&v| inside(v) || v == 1.0) || !y[..k].iter().flatten().all(|&v| inside(v)) {
        return Err(Error::InvalidParameters("geometric parameters must lie in (0,1)".into()));
    }
    let width = spec.width(k);
    let mut rng = stream_rng(seed, stream);
    let mut values = vec![0.0; n * width];
    let mut c = 0;
    for ym in &y[..k] {
        for &yj in ym {
            for (i, &xi) in x.iter().enumerate() {
                let p = xi * yj;
                if !inside(p) {
                    return Err(Error::InvalidParameters(format!("x_i y_j = {p} outside (0,1)")));
                }
                let e = unit_exponential(&mut rng);
                values[i * width + c] = (e / -p.ln()).floor();
            }
            c += 1;
        }
    }
    let lens = spec.ell()[..k].iter().map(|&l| l as usize).collect();
    ClockArray::new(n, lens, values, Mode::Geometric)
}

pub fn sample_geometric_blocks(spec: &LayeredSpec, k: usize, x: &[f64], y: &[Vec<f64>], seed: u64) -> Result<ClockArray> {
    sample_geometric_stream(spec, k, x, y, seed, 0)
}

/// `x_i = exp(-(i-1)/N)`, `y_j^(k) = exp(-(nu_k + j - 1)/N)`.
pub fn geometric_parameters_for_exponential_limit(spec: &LayeredSpec, big_n: u64) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    if big_n == 0 {
        return Err(Error::InvalidParameters("scale N must be at least 1".into()));
    }
    let nf = big_n as f64;
    let x = (1..=spec.n()).map(|i| (-((i - 1) as f64) / nf).exp()).collect();
    let y = spec
        .nu()
        .iter()
        .zip(spec.ell())
        .map(|(&nu, &ell)| (1..=ell as usize).map(|j| (-((nu as usize + j - 1) as f64) / nf).exp()).collect())
        .collect();
    Ok((x, y))
}
