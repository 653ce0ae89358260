//! Schur and skew Schur polynomials, the Schur process, and its exponential
//! limit density.

mod explimit;
mod polynomial;
mod process;

pub use explimit::{exp_limit_density, exp_limit_marginal_cdf_lambda1, ExpLimitParams};
pub use polynomial::{schur_bialternant, schur_jacobi_trudi, skew_schur_tableau_sum, DEFAULT_BUDGET};
pub use process::{schur_process_normalization, schur_process_pmf, NormalizationReport, SchurProcessParams};
