//! Rescaled kernels whose limits are the hard-edge and critical kernels.

use super::critical::{finite, positive_time};
use super::engine::{circle_radius, line, zeta_open, Contour, First, Plan, Support};
use super::truncated::TruncatedUnitary;
use super::{eval_block, time_index, Break, EvalOptions, KernelBlock, KernelValue, LogForm, TimeKernel};
use crate::env::LayeredSpec;
use crate::error::{Error, Result};
use crate::special::{f_a, ln_gamma, log_gamma};
use crate::C64;

/// `[t nu]`, required to be at least 1.
fn steps(t: f64, nu: u32) -> Result<i64> {
    let p = (positive_time(t)? * f64::from(nu)).floor();
    if p < 1.0 {
        return Err(Error::InvalidParameters(format!("[t nu] must be at least 1, got t = {t}, nu = {nu}")));
    }
    Ok(p as i64)
}

/// Centered last-passage kernel: the truncated-unitary log kernel at times
/// `[tau nu]`, `[t nu]`, shifted by the critical centering and gauged by
/// `(Gamma(nu + ell) / Gamma(nu))^{[t nu] - [tau nu]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thm22 {
    pub n: usize,
    pub nu: u32,
    pub ell: u32,
}

impl Thm22 {
    pub fn new(n: usize, nu: u32, ell: u32) -> Result<Self> {
        if n == 0 || nu == 0 || ell == 0 || (ell as usize) < n {
            return Err(Error::InvalidParameters(format!("need n, nu >= 1 and ell >= n, got ({n}, {nu}, {ell})")));
        }
        Ok(Thm22 { n, nu, ell })
    }

    /// `F_nu(z) - F_{nu+ell}(z)`.
    fn log_h(&self, z: C64) -> Result<C64> {
        Ok(f_a(f64::from(self.nu), z)? - f_a(f64::from(self.nu + self.ell), z)?)
    }
}

impl LogForm for Thm22 {
    fn to_log(&self, _t: f64, x: f64) -> Result<f64> {
        finite(x)
    }

    fn plan<'a>(&'a self, ta: f64, tb: f64, _xs: &[f64], _ys: &[f64], residue: bool, s: f64) -> Result<Plan<'a>> {
        let pt = steps(ta, self.nu)? as f64;
        let ps = steps(tb, self.nu)? as f64;
        let n = self.n;
        let nf = n as f64;
        let lg = ln_gamma(nf);
        // Gamma(-z) e^{-F_n(-z)} = Gamma(n) n^{-z} e^{z/2n} / prod_{k<n} (k - z).
        let zf = move |z: C64| -> Result<C64> {
            let poly: C64 = (0..n).map(|k| (k as f64 - z).ln()).sum();
            Ok(-pt * self.log_h(z)? + lg - z * nf.ln() + z / (2.0 * nf) - poly)
        };
        let sf = move |z: C64| -> Result<C64> {
            let poly: C64 = (0..n).map(|k| (k as f64 - z).ln()).sum();
            Ok(ps * self.log_h(z)? + poly - lg + z * nf.ln() - z / (2.0 * nf))
        };
        let zeta = if residue {
            Contour::Circles { centers: (0..n).map(|k| k as f64).collect(), r: circle_radius(s) }
        } else {
            Contour::Rect { lo: -0.25 * s, hi: nf - 1.0 + 0.5 * s, h: 0.25 * s }
        };
        let sigma = line(&sf, -0.5 * s, Some(f64::from(self.ell) * ps - nf + 1.0))?;
        let delta = ps - pt;
        let first = if delta > 0.0 {
            if f64::from(self.ell) * delta < 2.0 {
                return Err(Error::InvalidParameters("the single integral needs ell * ([t nu] - [tau nu]) >= 2".into()));
            }
            let f = move |z: C64| -> Result<C64> { Ok(delta * self.log_h(z)?) };
            let contour = line(&f, -0.5 * s, Some(f64::from(self.ell) * delta))?;
            First::Integral { contour, f: Box::new(f), support: Support::All }
        } else {
            First::None
        };
        Ok(Plan { zeta, zf: Box::new(zf), sigma, sf: Box::new(sf), first })
    }

    fn prefactor(&self, _ta: f64, _tb: f64) -> Result<(f64, f64)> {
        Ok((0.0, 0.0))
    }
}

impl TimeKernel for Thm22 {
    fn block(&self, ta: f64, xs: &[f64], tb: f64, ys: &[f64], opts: &EvalOptions) -> Result<KernelBlock> {
        eval_block(self, ta, xs, tb, ys, opts)
    }

    fn first_term_break(&self, ta: f64, tb: f64) -> Option<Break> {
        let (Ok(pt), Ok(ps)) = (steps(ta, self.nu), steps(tb, self.nu)) else { return None };
        if ps <= pt {
            return None;
        }
        // h(eta; p) carries e^{p c eta}, which moves the support edge to y = x - p c.
        let (v, w) = (f64::from(self.nu), f64::from(self.nu + self.ell));
        let c = (w / v).ln() + 0.5 / v - 0.5 / w;
        Some(Break::Shift(-((ps - pt) as f64) * c))
    }

    fn name(&self) -> String {
        format!("thm22(n={},nu={},ell={})", self.n, self.nu, self.ell)
    }
}

/// Gauge-prefactored truncated-unitary kernel at the hard-edge scale
/// `x / (n prod_{j<=q} (ell_j + nu_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Thm24 {
    inner: TruncatedUnitary,
}

impl Thm24 {
    pub fn new(spec: LayeredSpec) -> Self {
        Thm24 { inner: TruncatedUnitary::mult(spec) }
    }

    /// `ln(n prod_{j<=q} (ell_j + nu_j))`.
    fn log_scale(&self, q: usize) -> f64 {
        let s = self.inner.spec();
        (s.n() as f64).ln() + s.nu()[..q].iter().zip(&s.ell()[..q]).map(|(&v, &l)| f64::from(v + l).ln()).sum::<f64>()
    }

    fn log_gammas(&self, q: usize) -> f64 {
        let s = self.inner.spec();
        s.nu()[..q].iter().zip(&s.ell()[..q]).map(|(&v, &l)| ln_gamma(f64::from(v + l))).sum()
    }
}

impl LogForm for Thm24 {
    fn to_log(&self, t: f64, x: f64) -> Result<f64> {
        let q = time_index(t, self.inner.spec().k())?;
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::InvalidParameters(format!("kernel needs x > 0, got {x}")));
        }
        let lx = x.ln() - self.log_scale(q);
        if lx >= 0.0 {
            return Err(Error::OutOfRange(format!("rescaled argument exp({lx}) is not below 1")));
        }
        Ok(-lx)
    }

    fn plan<'a>(&'a self, ta: f64, tb: f64, xs: &[f64], ys: &[f64], residue: bool, s: f64) -> Result<Plan<'a>> {
        self.inner.plan(ta, tb, xs, ys, residue, s)
    }

    fn prefactor(&self, ta: f64, tb: f64) -> Result<(f64, f64)> {
        let k = self.inner.spec().k();
        let q = time_index(ta, k)?;
        let r = time_index(tb, k)?;
        let n = self.inner.spec().n() as f64;
        let c = -n.ln() + self.log_gammas(r) - (self.log_scale(r) - n.ln()) - self.log_gammas(q);
        Ok((c, 1.0))
    }
}

impl TimeKernel for Thm24 {
    fn block(&self, ta: f64, xs: &[f64], tb: f64, ys: &[f64], opts: &EvalOptions) -> Result<KernelBlock> {
        eval_block(self, ta, xs, tb, ys, opts)
    }

    fn first_term_break(&self, ta: f64, tb: f64) -> Option<Break> {
        let k = self.inner.spec().k();
        match (time_index(ta, k), time_index(tb, k)) {
            (Ok(q), Ok(r)) if r > q => Some(Break::Scale((self.log_scale(r) - self.log_scale(q)).exp())),
            _ => None,
        }
    }

    fn name(&self) -> String {
        "thm24".into()
    }
}

/// Hard-edge kernel with constant `nu` at times `[tau nu]`, `[t nu]`, in the
/// logarithmic coordinates where it approaches the critical kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Thm25 {
    pub nu: u32,
}

impl Thm25 {
    pub fn new(nu: u32) -> Result<Self> {
        if nu == 0 {
            return Err(Error::InvalidParameters("nu must be at least 1".into()));
        }
        Ok(Thm25 { nu })
    }

    /// `ln nu - 1/(2 nu)`.
    pub fn drift(&self) -> f64 {
        let v = f64::from(self.nu);
        v.ln() - 0.5 / v
    }
}

impl LogForm for Thm25 {
    fn to_log(&self, _t: f64, x: f64) -> Result<f64> {
        finite(x)
    }

    fn plan<'a>(&'a self, ta: f64, tb: f64, xs: &[f64], _ys: &[f64], residue: bool, s: f64) -> Result<Plan<'a>> {
        let pt = steps(ta, self.nu)? as f64;
        let ps = steps(tb, self.nu)? as f64;
        let v = f64::from(self.nu);
        let zf = move |z: C64| -> Result<C64> { Ok(log_gamma(-z)? - pt * f_a(v, z)?) };
        let sf = move |z: C64| -> Result<C64> { Ok(ps * f_a(v, z)? - log_gamma(-z)?) };
        let zeta = zeta_open(&zf, xs, residue, s)?;
        let sigma = line(&sf, -0.5 * s, None)?;
        let delta = ps - pt;
        let first = if delta > 0.0 {
            let f = move |z: C64| -> Result<C64> { Ok(delta * f_a(v, z)?) };
            let contour = line(&f, -0.5 * s, None)?;
            First::Integral { contour, f: Box::new(f), support: Support::All }
        } else {
            First::None
        };
        Ok(Plan { zeta, zf: Box::new(zf), sigma, sf: Box::new(sf), first })
    }

    fn prefactor(&self, _ta: f64, _tb: f64) -> Result<(f64, f64)> {
        Ok((0.0, 0.0))
    }
}

impl TimeKernel for Thm25 {
    fn block(&self, ta: f64, xs: &[f64], tb: f64, ys: &[f64], opts: &EvalOptions) -> Result<KernelBlock> {
        eval_block(self, ta, xs, tb, ys, opts)
    }

    fn name(&self) -> String {
        format!("thm25(nu={})", self.nu)
    }
}

pub fn scaled_kernel_thm22(n: usize, nu: u32, ell: u32, tau: f64, x: f64, t: f64, y: f64, opts: &EvalOptions) -> Result<KernelValue> {
    Thm22::new(n, nu, ell)?.value(tau, x, t, y, opts)
}

pub fn scaled_kernel_thm24(spec: &LayeredSpec, q: usize, x: f64, r: usize, y: f64, opts: &EvalOptions) -> Result<KernelValue> {
    Thm24::new(spec.clone()).value(q as f64, x, r as f64, y, opts)
}

pub fn scaled_kernel_thm25(nu: u32, tau: f64, x: f64, t: f64, y: f64, opts: &EvalOptions) -> Result<KernelValue> {
    Thm25::new(nu)?.value(tau, x, t, y, opts)
}
