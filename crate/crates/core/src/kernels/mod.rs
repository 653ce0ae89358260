//! Extended kernels of the last-passage, product-matrix and limiting
//! processes, each evaluated by two independent backends.
//!
//! Every kernel is reduced to a logarithmic form
//! `L(X, Y) = first(X - Y) + double(X, Y)` with the coupling `e^{-zeta X + sigma Y}`;
//! multiplicative kernels are `e^{Y} L(-ln x, -ln y)`.

mod critical;
mod engine;
mod ginibre;
mod scaled;
mod truncated;

pub use critical::{k_critical, Critical};
pub use ginibre::{k_ginibre, k_hard_edge, Ginibre, HardEdge};
pub use scaled::{scaled_kernel_thm22, scaled_kernel_thm24, scaled_kernel_thm25, Thm22, Thm24, Thm25};
pub use truncated::{k_truncated_unitary_log, k_truncated_unitary_mult, TruncatedUnitary};

use crate::env::LayeredSpec;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Backend {
    Quadrature,
    Residue,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Quadrature => "quadrature",
            Backend::Residue => "residue",
        })
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "quadrature" => Ok(Backend::Quadrature),
            "residue" => Ok(Backend::Residue),
            other => Err(Error::Parse(format!("unknown backend {other:?}"))),
        }
    }
}

/// Which part of `first + double` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Part {
    #[default]
    Full,
    FirstTerm,
    DoubleIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub backend: Backend,
    /// Relative agreement between successive refinements that ends refinement.
    pub tol: f64,
    /// Scales contour offsets and heights; 1 is the canonical geometry.
    pub contour_scale: f64,
    /// Number of refinement doublings after the first evaluation.
    pub max_level: u32,
    pub part: Part,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { backend: Backend::Quadrature, tol: 1e-11, contour_scale: 1.0, max_level: 3, part: Part::Full }
    }
}

impl EvalOptions {
    pub fn with_backend(backend: Backend) -> Self {
        EvalOptions { backend, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    pub backend: Backend,
    pub est_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelBlock {
    pub values: DMatrix<f64>,
    pub backend: Backend,
    /// Largest estimated absolute error over the block.
    pub est_error: f64,
}

/// Parameter bundles of the kernels exposed on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelId {
    TruncatedUnitaryLog(LayeredSpec),
    TruncatedUnitaryMult(LayeredSpec),
    Ginibre { n: usize, nu: Vec<u32> },
    HardEdge { nu: Vec<u32> },
    Critical,
}

impl KernelId {
    pub fn kernel(&self) -> Result<Box<dyn TimeKernel>> {
        Ok(match self {
            KernelId::TruncatedUnitaryLog(s) => Box::new(TruncatedUnitary::log(s.clone())),
            KernelId::TruncatedUnitaryMult(s) => Box::new(TruncatedUnitary::mult(s.clone())),
            KernelId::Ginibre { n, nu } => Box::new(Ginibre::new(*n, nu.clone())?),
            KernelId::HardEdge { nu } => Box::new(HardEdge::new(nu.clone())?),
            KernelId::Critical => Box::new(Critical),
        })
    }

    pub fn evaluate(&self, q: f64, x: f64, r: f64, y: f64, opts: &EvalOptions) -> Result<KernelValue> {
        self.kernel()?.value(q, x, r, y, opts)
    }
}

/// Curve `y = f(x)` across which the first term of a kernel is not smooth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Break {
    /// `y = x + c`
    Shift(f64),
    /// `y = c x`
    Scale(f64),
}

impl Break {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Break::Shift(c) => x + c,
            Break::Scale(c) => c * x,
        }
    }

    pub fn invert(self, y: f64) -> f64 {
        match self {
            Break::Shift(c) => y - c,
            Break::Scale(c) => y / c,
        }
    }
}

/// A kernel on `times x R`, evaluated on blocks of points at two times.
pub trait TimeKernel: Sync {
    fn block(&self, ta: f64, xs: &[f64], tb: f64, ys: &[f64], opts: &EvalOptions) -> Result<KernelBlock>;

    fn name(&self) -> String;

    /// Where the first term at `(ta, tb)` jumps or has a kink, if anywhere.
    fn first_term_break(&self, _ta: f64, _tb: f64) -> Option<Break> {
        None
    }

    fn value(&self, ta: f64, x: f64, tb: f64, y: f64, opts: &EvalOptions) -> Result<KernelValue> {
        let b = self.block(ta, &[x], tb, &[y], opts)?;
        Ok(KernelValue { value: b.values[(0, 0)], backend: b.backend, est_error: b.est_error })
    }
}

/// Internal description shared by all kernels.
pub(crate) trait LogForm: Sync {
    /// Point coordinate `x -> X` at time `t`.
    fn to_log(&self, t: f64, x: f64) -> Result<f64>;
    fn plan<'a>(&'a self, ta: f64, tb: f64, xs: &[f64], ys: &[f64], residue: bool, s: f64) -> Result<engine::Plan<'a>>;
    /// `(c, k)` such that the value is `e^{c + k Y} L(X, Y)`.
    fn prefactor(&self, ta: f64, tb: f64) -> Result<(f64, f64)>;
}

pub(crate) fn eval_block<K: LogForm + ?Sized>(
    k: &K,
    ta: f64,
    xs: &[f64],
    tb: f64,
    ys: &[f64],
    opts: &EvalOptions,
) -> Result<KernelBlock> {
    if !(opts.tol > 0.0) || !(opts.contour_scale >= 0.5 && opts.contour_scale <= 2.0) {
        return Err(Error::InvalidParameters(format!(
            "tol must be positive and contour_scale in [0.5, 2], got {} and {}",
            opts.tol, opts.contour_scale
        )));
    }
    let lx = xs.iter().map(|&x| k.to_log(ta, x)).collect::<Result<Vec<_>>>()?;
    let ly = ys.iter().map(|&y| k.to_log(tb, y)).collect::<Result<Vec<_>>>()?;
    if lx.is_empty() || ly.is_empty() {
        return Ok(KernelBlock { values: DMatrix::zeros(lx.len(), ly.len()), backend: opts.backend, est_error: 0.0 });
    }
    let residue = opts.backend == Backend::Residue;
    let plan = k.plan(ta, tb, &lx, &ly, residue, opts.contour_scale)?;
    let (c, kk) = k.prefactor(ta, tb)?;
    let pref = |_: usize, j: usize| c + kk * ly[j];
    let (values, est_error) = engine::refine(|level| plan.eval(&lx, &ly, level, opts.part, pref), opts.tol, opts.max_level)?;
    Ok(KernelBlock { values, backend: opts.backend, est_error })
}

/// Fixed sample points `(q, x, r, y)` used for backend comparisons. For the
/// multiplicative kernel the coordinates are mapped through `e^{-x}`.
pub const SAMPLE_GRID: [(usize, f64, usize, f64); 12] = [
    (1, 0.5, 1, 0.5),
    (1, 1.0, 1, 2.0),
    (1, 2.0, 1, 1.0),
    (1, 0.3, 2, 0.7),
    (1, 1.5, 2, 0.8),
    (2, 0.8, 1, 1.5),
    (2, 1.0, 2, 1.0),
    (2, 2.5, 2, 0.4),
    (1, 1.0, 3, 1.8),
    (3, 1.2, 1, 0.6),
    (2, 0.6, 3, 0.9),
    (3, 2.0, 3, 3.0),
];

/// Integer time index in `1..=k`.
pub(crate) fn time_index(t: f64, k: usize) -> Result<usize> {
    if t.fract() != 0.0 || t < 1.0 || t > k as f64 {
        return Err(Error::OutOfRange(format!("time {t} is not an integer in 1..={k}")));
    }
    Ok(t as usize)
}
