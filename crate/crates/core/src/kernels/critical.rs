use super::engine::{line, zeta_open, First, Plan};
use super::{eval_block, EvalOptions, KernelBlock, KernelValue, LogForm, TimeKernel};
use crate::error::{Error, Result};
use crate::special::log_gamma;
use crate::C64;

/// The extended critical kernel `K_C(tau, x; t, y)` on `(0, inf) x R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Critical;

pub(crate) fn positive_time(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameters(format!("time must be positive, got {t}")));
    }
    Ok(t)
}

pub(crate) fn finite(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidParameters(format!("argument must be finite, got {x}")));
    }
    Ok(x)
}

impl LogForm for Critical {
    fn to_log(&self, _t: f64, x: f64) -> Result<f64> {
        finite(x)
    }

    fn plan<'a>(&'a self, ta: f64, tb: f64, xs: &[f64], _ys: &[f64], residue: bool, s: f64) -> Result<Plan<'a>> {
        let tau = positive_time(ta)?;
        let t = positive_time(tb)?;
        let zf = move |z: C64| -> Result<C64> { Ok(log_gamma(-z)? - 0.5 * tau * z * z) };
        let sf = move |z: C64| -> Result<C64> { Ok(0.5 * t * z * z - log_gamma(-z)?) };
        let zeta = zeta_open(&zf, xs, residue, s)?;
        let sigma = line(&sf, -0.5 * s, None)?;
        let first = if t > tau { First::Gaussian { dt: t - tau } } else { First::None };
        Ok(Plan { zeta, zf: Box::new(zf), sigma, sf: Box::new(sf), first })
    }

    fn prefactor(&self, _ta: f64, _tb: f64) -> Result<(f64, f64)> {
        Ok((0.0, 0.0))
    }
}

impl TimeKernel for Critical {
    fn block(&self, ta: f64, xs: &[f64], tb: f64, ys: &[f64], opts: &EvalOptions) -> Result<KernelBlock> {
        eval_block(self, ta, xs, tb, ys, opts)
    }

    fn name(&self) -> String {
        "critical".into()
    }
}

pub fn k_critical(tau: f64, x: f64, t: f64, y: f64, opts: &EvalOptions) -> Result<KernelValue> {
    Critical.value(tau, x, t, y, opts)
}
