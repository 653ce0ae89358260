//! Experiment configuration: TOML with a fixed schema, unknown keys rejected.
//!
//! ```toml
//! experiment = "gap"      # gap | simulate | kernel-eval | converge | rsk-check | schur-check
//! seed = 7
//! output = "out.csv"
//!
//! [spec]                  # layered environment
//! n = 1
//! nu = [1]
//! ell = [1]
//!
//! [grid]
//! times = [1]
//! thresholds = [[0.25, 0.5, 1, 2]]   # one list per time, crossed
//!
//! [check]
//! oracle = "cubature"     # none | cubature | monte-carlo
//! samples = 100000
//! tol = 1e-6
//! ```

use crate::CliError;
use perclab::env::LayeredSpec;
use perclab::kernels::{Backend, KernelId};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Gap,
    Simulate,
    KernelEval,
    Converge,
    RskCheck,
    SchurCheck,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecSection {
    pub n: usize,
    pub nu: Vec<u32>,
    pub ell: Vec<u32>,
}

impl SpecSection {
    pub fn build(&self) -> Result<LayeredSpec, CliError> {
        LayeredSpec::new(self.n, self.nu.clone(), self.ell.clone()).map_err(|e| CliError::Usage(format!("[spec]: {e}")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub times: Vec<f64>,
    #[serde(default)]
    pub thresholds: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Oracle {
    #[default]
    None,
    Cubature,
    MonteCarlo,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSection {
    #[serde(default)]
    pub oracle: Oracle,
    pub samples: Option<u64>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    TruncatedUnitaryLog,
    TruncatedUnitaryMult,
    Ginibre,
    HardEdge,
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendChoice {
    #[default]
    Both,
    Quadrature,
    Residue,
}

impl BackendChoice {
    pub fn primary(self) -> Backend {
        match self {
            BackendChoice::Residue => Backend::Residue,
            _ => Backend::Quadrature,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    pub kind: KernelKind,
    pub n: Option<usize>,
    #[serde(default)]
    pub nu: Vec<u32>,
    #[serde(default)]
    pub ell: Vec<u32>,
    #[serde(default)]
    pub backend: BackendChoice,
    /// `[q, x, r, y]` per point.
    #[serde(default)]
    pub points: Vec<[f64; 4]>,
}

impl KernelSection {
    pub fn id(&self) -> Result<KernelId, CliError> {
        let spec = || -> Result<LayeredSpec, CliError> {
            let n = self.n.ok_or_else(|| CliError::Usage("[kernel] needs n".into()))?;
            SpecSection { n, nu: self.nu.clone(), ell: self.ell.clone() }.build()
        };
        let nu = || -> Result<Vec<u32>, CliError> {
            if self.nu.is_empty() {
                Err(CliError::Usage("[kernel] needs nu".into()))
            } else {
                Ok(self.nu.clone())
            }
        };
        Ok(match self.kind {
            KernelKind::TruncatedUnitaryLog => KernelId::TruncatedUnitaryLog(spec()?),
            KernelKind::TruncatedUnitaryMult => KernelId::TruncatedUnitaryMult(spec()?),
            KernelKind::Ginibre => {
                KernelId::Ginibre { n: self.n.ok_or_else(|| CliError::Usage("[kernel] needs n".into()))?, nu: nu()? }
            }
            KernelKind::HardEdge => KernelId::HardEdge { nu: nu()? },
            KernelKind::Critical => KernelId::Critical,
        })
    }
}

/// A ladder rung: a single size, `(n, ell)`, or `(n, nu, ell)` for the critical ladder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum Rung {
    One(u32),
    /// `n:l`, for the truncated-unitary hard-edge ladder.
    Pair([u32; 2]),
    Triple([u32; 3]),
}

impl std::fmt::Display for Rung {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Rung::One(v) => write!(f, "{v}"),
            Rung::Pair([a, b]) => write!(f, "{a}:{b}"),
            Rung::Triple([a, b, c]) => write!(f, "{a}:{b}:{c}"),
        }
    }
}

/// `16,32,64`, `2:64,3:256` or `2:8:64,3:16:256`.
pub fn parse_ladder(text: &str) -> Result<Vec<Rung>, CliError> {
    text.split(',')
        .map(|part| {
            let nums: Vec<u32> = part
                .split(':')
                .map(|v| v.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("bad ladder entry {part:?}"))))
                .collect::<Result<_, _>>()?;
            match nums[..] {
                [a] => Ok(Rung::One(a)),
                [a, b] => Ok(Rung::Pair([a, b])),
                [a, b, c] => Ok(Rung::Triple([a, b, c])),
                _ => Err(CliError::Usage(format!("ladder entry {part:?} needs 1 to 3 numbers"))),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderSection {
    pub theorem: Option<String>,
    #[serde(default)]
    pub rungs: Vec<Rung>,
    /// `n` for truncated-unitary hard-edge rungs given as a bare `l`.
    pub n: Option<usize>,
    /// `[q, x, r, y]` or `[tau, x, t, y]` per point.
    #[serde(default)]
    pub points: Vec<[f64; 4]>,
    /// Bound on the last rung's error.
    pub last_max: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RskSection {
    pub arrays: Option<usize>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub max_entry: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchurSection {
    #[serde(default)]
    pub x: Vec<f64>,
    #[serde(default)]
    pub y: Vec<Vec<f64>>,
    pub max_weight: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: Option<u64>,
    pub output: Option<String>,
    pub spec: Option<SpecSection>,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub check: CheckSection,
    pub kernel: Option<KernelSection>,
    #[serde(default)]
    pub ladder: LadderSection,
    #[serde(default)]
    pub rsk: RskSection,
    #[serde(default)]
    pub schur: SchurSection,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let c: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    /// An empty config for `experiment`, filled from flags.
    pub fn empty(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            seed: None,
            output: None,
            spec: None,
            grid: GridSection::default(),
            check: CheckSection::default(),
            kernel: None,
            ladder: LadderSection::default(),
            rsk: RskSection::default(),
            schur: SchurSection::default(),
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Usage(format!("config: {m}")));
        if self.grid.times.iter().any(|t| !t.is_finite()) {
            return bad("times must be finite");
        }
        if self.grid.thresholds.iter().any(|l| l.is_empty() || l.iter().any(|s| !s.is_finite())) {
            return bad("every threshold list must be nonempty and finite");
        }
        if !self.grid.thresholds.is_empty() && self.grid.thresholds.len() != self.grid.times.len() {
            return bad("need one threshold list per time");
        }
        if let Some(t) = self.check.tol {
            if !(t > 0.0) || !t.is_finite() {
                return bad("tol must be positive");
            }
        }
        if self.check.samples == Some(0) {
            return bad("samples must be positive");
        }
        if self.ladder.points.iter().flatten().any(|v| !v.is_finite()) {
            return bad("ladder points must be finite");
        }
        if let Some(k) = &self.kernel {
            if k.points.iter().flatten().any(|v| !v.is_finite()) {
                return bad("kernel points must be finite");
            }
        }
        Ok(())
    }
}
