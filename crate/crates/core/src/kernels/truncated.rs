use super::engine::{line, Contour, First, Plan, Support};
use super::{eval_block, time_index, Break, EvalOptions, KernelBlock, KernelValue, LogForm, TimeKernel};
use crate::env::LayeredSpec;
use crate::error::{Error, Result};
use crate::special::log_gamma;
use crate::C64;
use std::collections::BTreeSet;

/// Pole spans up to this length get a closed sigma rectangle; longer ones a line.
const CLOSED_SPAN: i64 = 64;
const RESIDUE_CAP: usize = 500;

/// Truncated-unitary product kernel, in logarithmic variables on `(0, inf)`
/// (the last-passage kernel) or multiplicative ones on `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedUnitary {
    spec: LayeredSpec,
    mult: bool,
}

/// `sum_j [ln Gamma(nu_j + z) - ln Gamma(nu_j + ell_j + z)]` over the given blocks.
pub(crate) fn gamma_ratio(nu: &[u32], ell: &[u32], z: C64) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for (&v, &l) in nu.iter().zip(ell) {
        acc += log_gamma(z + f64::from(v))? - log_gamma(z + f64::from(v) + f64::from(l))?;
    }
    Ok(acc)
}

/// `sum_{k<n} ln(z - k)`.
pub(crate) fn log_falling(n: usize, z: C64) -> C64 {
    (0..n).map(|k| (z - k as f64).ln()).sum()
}

/// The finite poles `-nu_j - m`, `m < ell_j`.
fn poles(nu: &[u32], ell: &[u32]) -> Vec<f64> {
    let set: BTreeSet<i64> = nu
        .iter()
        .zip(ell)
        .flat_map(|(&v, &l)| (0..i64::from(l)).map(move |m| -i64::from(v) - m))
        .collect();
    set.into_iter().map(|p| p as f64).collect()
}

impl TruncatedUnitary {
    pub fn log(spec: LayeredSpec) -> Self {
        TruncatedUnitary { spec, mult: false }
    }

    pub fn mult(spec: LayeredSpec) -> Self {
        TruncatedUnitary { spec, mult: true }
    }

    pub fn spec(&self) -> &LayeredSpec {
        &self.spec
    }
}

impl LogForm for TruncatedUnitary {
    fn to_log(&self, _t: f64, x: f64) -> Result<f64> {
        if self.mult {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::InvalidParameters(format!("multiplicative kernel needs x in (0,1), got {x}")));
            }
            Ok(-x.ln())
        } else {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::InvalidParameters(format!("log kernel needs x > 0, got {x}")));
            }
            Ok(x)
        }
    }

    fn plan<'a>(&'a self, ta: f64, tb: f64, _xs: &[f64], _ys: &[f64], residue: bool, s: f64) -> Result<Plan<'a>> {
        let k = self.spec.k();
        let q = time_index(ta, k)?;
        let r = time_index(tb, k)?;
        let n = self.spec.n();
        let nu = self.spec.nu();
        let ell = self.spec.ell();

        let zf = move |z: C64| -> Result<C64> { Ok(-gamma_ratio(&nu[..q], &ell[..q], z)? - log_falling(n, z)) };
        let zeta = if residue {
            Contour::Circles { centers: (0..n).map(|k| k as f64).collect(), r: super::engine::circle_radius(s) }
        } else {
            Contour::Rect { lo: -0.25 * s, hi: n as f64 - 1.0 + 0.5 * s, h: 0.25 * s }
        };

        let sf = move |z: C64| -> Result<C64> { Ok(log_falling(n, z) + gamma_ratio(&nu[..r], &ell[..r], z)?) };
        let sp = poles(&nu[..r], &ell[..r]);
        let lowest = sp[0];
        let sigma = if residue && sp.len() <= RESIDUE_CAP {
            Contour::Circles { centers: sp.clone(), r: super::engine::circle_radius(s) }
        } else if -lowest as i64 <= CLOSED_SPAN {
            Contour::Rect { lo: lowest - 0.5 * s, hi: -0.375 * s, h: 0.25 * s }
        } else {
            let total: u64 = ell[..r].iter().map(|&l| u64::from(l)).sum();
            let power = total as f64 - n as f64 + 1.0;
            if power <= 1.0 {
                return Err(Error::Budget("sigma line integral is not absolutely convergent".into()));
            }
            line(&sf, -0.5 * s, Some(power))?
        };

        let first = if r > q {
            let (fnu, fell) = (&nu[q..r], &ell[q..r]);
            let fp = poles(fnu, fell);
            let contour = if residue {
                Contour::Circles { centers: fp.clone(), r: super::engine::circle_radius(s) }
            } else {
                Contour::Rect { lo: fp[0] - 0.5 * s, hi: fp[fp.len() - 1] + 0.5 * s, h: 0.25 * s }
            };
            let total: u64 = fell.iter().map(|&l| u64::from(l)).sum();
            First::Integral {
                contour,
                f: Box::new(move |z: C64| gamma_ratio(fnu, fell, z)),
                support: Support::NegativeOnly { half_at_zero: total == 1 },
            }
        } else {
            First::None
        };
        Ok(Plan { zeta, zf: Box::new(zf), sigma, sf: Box::new(sf), first })
    }

    fn prefactor(&self, _ta: f64, _tb: f64) -> Result<(f64, f64)> {
        Ok((0.0, if self.mult { 1.0 } else { 0.0 }))
    }
}

impl TimeKernel for TruncatedUnitary {
    fn block(&self, ta: f64, xs: &[f64], tb: f64, ys: &[f64], opts: &EvalOptions) -> Result<KernelBlock> {
        eval_block(self, ta, xs, tb, ys, opts)
    }

    fn first_term_break(&self, ta: f64, tb: f64) -> Option<Break> {
        let k = self.spec.k();
        match (time_index(ta, k), time_index(tb, k)) {
            (Ok(q), Ok(r)) if r > q => Some(if self.mult { Break::Scale(1.0) } else { Break::Shift(0.0) }),
            _ => None,
        }
    }

    fn name(&self) -> String {
        if self.mult { "truncated_unitary_mult" } else { "truncated_unitary_log" }.into()
    }
}

/// The last-passage kernel `K_{n, nu, ell}(q, x; r, y)`, `x, y > 0`.
pub fn k_truncated_unitary_log(spec: &LayeredSpec, q: usize, x: f64, r: usize, y: f64, opts: &EvalOptions) -> Result<KernelValue> {
    TruncatedUnitary::log(spec.clone()).value(q as f64, x, r as f64, y, opts)
}

/// The truncated-unitary product kernel `K^T(q, x; r, y)`, `x, y in (0, 1)`.
pub fn k_truncated_unitary_mult(spec: &LayeredSpec, q: usize, x: f64, r: usize, y: f64, opts: &EvalOptions) -> Result<KernelValue> {
    TruncatedUnitary::mult(spec.clone()).value(q as f64, x, r as f64, y, opts)
}
