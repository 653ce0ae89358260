use super::engine::{circle_radius, family_first, sigma_open, zeta_open, Contour, First, Plan, Support};
use super::truncated::log_falling;
use super::{eval_block, time_index, EvalOptions, KernelBlock, KernelValue, LogForm, TimeKernel};
use crate::error::{Error, Result};
use crate::special::log_gamma;
use crate::C64;

fn check_nu(nu: &[u32]) -> Result<()> {
    if nu.is_empty() || nu.contains(&0) {
        return Err(Error::InvalidParameters("need at least one nu_j and every nu_j >= 1".into()));
    }
    Ok(())
}

fn positive_log(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameters(format!("kernel needs x > 0, got {x}")));
    }
    Ok(-x.ln())
}

/// `sum_j ln Gamma(z + nu_j)`.
fn sum_log_gamma(nu: &[u32], z: C64) -> Result<C64> {
    nu.iter().map(|&v| log_gamma(z + f64::from(v))).sum()
}

/// `-(1/x) G^{r-q,0}_{0,r-q}(-; nu_{q+1} - 1, ... | y/x)`, shared by both kernels.
fn meijer_first<'a>(nu: &'a [u32], q: usize, r: usize, xs: &[f64], ys: &[f64], residue: bool, s: f64) -> Result<First<'a>> {
    if r <= q {
        return Ok(First::None);
    }
    let fnu = &nu[q..r];
    let f = move |z: C64| sum_log_gamma(fnu, z);
    let ds: Vec<f64> = xs.iter().flat_map(|x| ys.iter().map(move |y| x - y)).collect();
    let first = -f64::from(*fnu.iter().min().unwrap_or(&1));
    let contour = family_first(&f, first, &ds, residue, s)?;
    Ok(First::Integral { contour, f: Box::new(f), support: Support::All })
}

/// Extended kernel of products of Ginibre matrices, `K^G_{n, nu}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ginibre {
    n: usize,
    nu: Vec<u32>,
}

impl Ginibre {
    pub fn new(n: usize, nu: Vec<u32>) -> Result<Self> {
        check_nu(&nu)?;
        if n == 0 {
            return Err(Error::InvalidParameters("n must be at least 1".into()));
        }
        Ok(Ginibre { n, nu })
    }
}

impl LogForm for Ginibre {
    fn to_log(&self, _t: f64, x: f64) -> Result<f64> {
        positive_log(x)
    }

    fn plan<'a>(&'a self, ta: f64, tb: f64, xs: &[f64], ys: &[f64], residue: bool, s: f64) -> Result<Plan<'a>> {
        let q = time_index(ta, self.nu.len())?;
        let r = time_index(tb, self.nu.len())?;
        let n = self.n;
        let nu = &self.nu[..];
        let zf = move |z: C64| -> Result<C64> { Ok(-log_falling(n, z) - sum_log_gamma(&nu[..q], z)?) };
        let zeta = if residue {
            Contour::Circles { centers: (0..n).map(|k| k as f64).collect(), r: circle_radius(s) }
        } else {
            Contour::Rect { lo: -0.25 * s, hi: n as f64 - 1.0 + 0.5 * s, h: 0.25 * s }
        };
        let sf = move |z: C64| -> Result<C64> { Ok(log_falling(n, z) + sum_log_gamma(&nu[..r], z)?) };
        let lead = -f64::from(*nu[..r].iter().min().unwrap_or(&1));
        let sigma = sigma_open(&sf, ys, lead, residue, s)?;
        let first = meijer_first(nu, q, r, xs, ys, residue, s)?;
        Ok(Plan { zeta, zf: Box::new(zf), sigma, sf: Box::new(sf), first })
    }

    fn prefactor(&self, _ta: f64, _tb: f64) -> Result<(f64, f64)> {
        Ok((0.0, 1.0))
    }
}

impl TimeKernel for Ginibre {
    fn block(&self, ta: f64, xs: &[f64], tb: f64, ys: &[f64], opts: &EvalOptions) -> Result<KernelBlock> {
        eval_block(self, ta, xs, tb, ys, opts)
    }

    fn name(&self) -> String {
        "ginibre".into()
    }
}

/// Extended hard-edge kernel `K^H_nu`.
#[derive(Debug, Clone, PartialEq)]
pub struct HardEdge {
    nu: Vec<u32>,
}

impl HardEdge {
    pub fn new(nu: Vec<u32>) -> Result<Self> {
        check_nu(&nu)?;
        Ok(HardEdge { nu })
    }
}

impl LogForm for HardEdge {
    fn to_log(&self, _t: f64, x: f64) -> Result<f64> {
        positive_log(x)
    }

    fn plan<'a>(&'a self, ta: f64, tb: f64, xs: &[f64], ys: &[f64], residue: bool, s: f64) -> Result<Plan<'a>> {
        let q = time_index(ta, self.nu.len())?;
        let r = time_index(tb, self.nu.len())?;
        let nu = &self.nu[..];
        let zf = move |z: C64| -> Result<C64> { Ok(log_gamma(-z)? - sum_log_gamma(&nu[..q], z)?) };
        let zeta = zeta_open(&zf, xs, residue, s)?;
        let sf = move |z: C64| -> Result<C64> { Ok(sum_log_gamma(&nu[..r], z)? - log_gamma(-z)?) };
        let lead = -f64::from(*nu[..r].iter().min().unwrap_or(&1));
        let sigma = sigma_open(&sf, ys, lead, residue, s)?;
        let first = meijer_first(nu, q, r, xs, ys, residue, s)?;
        Ok(Plan { zeta, zf: Box::new(zf), sigma, sf: Box::new(sf), first })
    }

    fn prefactor(&self, _ta: f64, _tb: f64) -> Result<(f64, f64)> {
        Ok((0.0, 1.0))
    }
}

impl TimeKernel for HardEdge {
    fn block(&self, ta: f64, xs: &[f64], tb: f64, ys: &[f64], opts: &EvalOptions) -> Result<KernelBlock> {
        eval_block(self, ta, xs, tb, ys, opts)
    }

    fn name(&self) -> String {
        "hard_edge".into()
    }
}

pub fn k_ginibre(n: usize, nu: &[u32], q: usize, x: f64, r: usize, y: f64, opts: &EvalOptions) -> Result<KernelValue> {
    Ginibre::new(n, nu.to_vec())?.value(q as f64, x, r as f64, y, opts)
}

pub fn k_hard_edge(nu: &[u32], q: usize, x: f64, r: usize, y: f64, opts: &EvalOptions) -> Result<KernelValue> {
    HardEdge::new(nu.to_vec())?.value(q as f64, x, r as f64, y, opts)
}

