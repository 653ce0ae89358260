use crate::env::LayeredSpec;
use crate::error::{Error, Result};
use crate::special::{gauss_kronrod_adaptive, ln_gamma};

const MAX_DIMENSION: usize = 4;
const DEPTH: u32 = 12;

/// Parameters of the exponential-limit Schur process over the first `q` blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpLimitParams {
    spec: LayeredSpec,
    log_z: f64,
}

impl ExpLimitParams {
    pub fn new(n: usize, nu: Vec<u32>, ell: Vec<u32>) -> Result<Self> {
        Self::from_spec(LayeredSpec::new(n, nu, ell)?)
    }

    pub fn from_spec(spec: LayeredSpec) -> Result<Self> {
        let n = spec.n();
        let mut log_z: f64 = (1..=n).map(|j| ln_gamma(j as f64)).sum();
        for (k, (&nu, &ell)) in spec.nu().iter().zip(spec.ell()).enumerate() {
            for j in 1..=n {
                let nu = nu as f64;
                let shift = if k == 0 { (n - j) as f64 } else { 0.0 };
                let ell = ell as f64;
                log_z += ln_gamma(nu + j as f64 - 1.0) + ln_gamma(ell - shift) - ln_gamma(nu + ell + j as f64 - 1.0);
            }
        }
        Ok(ExpLimitParams { spec, log_z })
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    pub fn q(&self) -> usize {
        self.spec.k()
    }

    pub fn spec(&self) -> &LayeredSpec {
        &self.spec
    }
}

fn det(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut d = 1.0;
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
        if a[p][k] == 0.0 {
            return 0.0;
        }
        if p != k {
            a.swap(p, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k + 1..n {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    d
}

/// Density at `u^(s)_j = exp(-λ^(s)_j)`, coordinates ordered within each time
/// (`u_1 <= … <= u_n`) and across times (`u^(s) >= u^(s+1)`). Outside that
/// region the value is zero.
fn density_u(p: &ExpLimitParams, u: &[Vec<f64>]) -> f64 {
    let n = p.n();
    for (s, us) in u.iter().enumerate() {
        if us.windows(2).any(|w| w[0] > w[1]) {
            return 0.0;
        }
        if s > 0 && (0..n).any(|j| us[j] > u[s - 1][j]) {
            return 0.0;
        }
    }
    let q = u.len();
    let top = &u[q - 1];
    let vander = det((0..n).map(|j| (0..n).map(|k| top[k].powi(j as i32)).collect()).collect());
    let mut value = vander * (-p.log_z).exp();
    for s in 0..q {
        let first = s == 0;
        let nu = p.spec.nu()[s] as i32;
        let ell = p.spec.ell()[s] as i32;
        let n_i = n as i32;
        let pw = ell - 1 - if first { n_i - 1 } else { 0 };
        let a = nu + if first { n_i - 1 } else { 0 };
        let m = (0..n)
            .map(|j| {
                let uj = u[s][j];
                (0..n)
                    .map(|k| {
                        let w = if first { 1.0 } else { u[s - 1][k] };
                        let b = nu + ell - 1 - if first { n_i - 1 - k as i32 } else { 0 };
                        if uj >= w {
                            return 0.0;
                        }
                        w.powi(-(a + pw)) * uj.powi(b - pw) * (w - uj).powi(pw)
                    })
                    .collect()
            })
            .collect();
        value *= det(m);
        if value == 0.0 {
            break;
        }
    }
    value
}

/// Joint density of `(Λ̃^(1), …, Λ̃^(q))` at ordered points
/// `λ^(s)_1 >= … >= λ^(s)_n > 0`; zero off the ordered region.
pub fn exp_limit_density(params: &ExpLimitParams, lambdas: &[Vec<f64>]) -> Result<f64> {
    if lambdas.len() != params.q() || lambdas.iter().any(|l| l.len() != params.n()) {
        return Err(Error::InvalidParameters(format!(
            "expected {} vectors of length {}",
            params.q(),
            params.n()
        )));
    }
    if lambdas.iter().flatten().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidParameters("coordinates must be positive".into()));
    }
    let u: Vec<Vec<f64>> = lambdas.iter().map(|l| l.iter().map(|&v| (-v).exp()).collect()).collect();
    Ok(density_u(params, &u))
}

/// `P(Λ̃^(q)_1 <= s)` by nested adaptive Gauss–Kronrod in `u = e^{-λ}`, where
/// the integrand is piecewise polynomial. `s = ∞` gives the total mass.
pub fn exp_limit_marginal_cdf_lambda1(params: &ExpLimitParams, q: usize, s: f64, tol: f64) -> Result<f64> {
    if q == 0 || q > params.q() {
        return Err(Error::OutOfRange(format!("time {q} outside 1..={}", params.q())));
    }
    let p = ExpLimitParams::from_spec(params.spec.truncate(q)?)?;
    let n = p.n();
    if n * q > MAX_DIMENSION {
        return Err(Error::Budget(format!("cubature in {} dimensions exceeds {MAX_DIMENSION}", n * q)));
    }
    if s.is_nan() {
        return Err(Error::InvalidParameters("threshold is NaN".into()));
    }
    if s <= 0.0 {
        return Ok(0.0);
    }
    let floor = (-s).exp();
    let mut u = vec![vec![0.0; n]; q];
    let dims = n * q;
    let v = nested(&p, &mut u, 0, dims, floor, tol);
    Ok(v.clamp(0.0, 1.0))
}

/// Integrates variable `idx`, ordered time `q` first, then downwards; inner
/// variables see the already fixed ones as lower limits and breakpoints.
fn nested(p: &ExpLimitParams, u: &mut Vec<Vec<f64>>, idx: usize, dims: usize, floor: f64, tol: f64) -> f64 {
    let n = p.n();
    let q = u.len();
    if idx == dims {
        let jac: f64 = u.iter().flatten().map(|v| 1.0 / v).product();
        return density_u(p, u) * jac;
    }
    let s = q - 1 - idx / n;
    let j = idx % n;
    let mut lo = if s == q - 1 && j == 0 { floor } else { 0.0 };
    if j > 0 {
        lo = lo.max(u[s][j - 1]);
    }
    if s + 1 < q {
        lo = lo.max(u[s + 1][j]);
    }
    let mut breaks: Vec<f64> = u
        .iter()
        .enumerate()
        .flat_map(|(t, row)| {
            let fixed = if t > s { n } else if t == s { j } else { 0 };
            row[..fixed].to_vec()
        })
        .collect();
    // Powers of 1/u^(s+1) make the integrand vary on the scale of `lo`.
    if lo > 0.0 {
        let mut b = 2.0 * lo;
        while b < 1.0 {
            breaks.push(b);
            b *= 2.0;
        }
    }
    let inner_tol = tol * 0.1;
    let mut cell = u.clone();
    let r = gauss_kronrod_adaptive(
        |x| {
            cell[s][j] = x;
            nested(p, &mut cell, idx + 1, dims, floor, inner_tol)
        },
        lo,
        1.0,
        &breaks,
        tol,
        DEPTH,
    );
    u[s][j] = 0.0;
    r.value
}
