//! Special functions and contour integration primitives.

mod contour;
mod gamma;
mod meijer;
mod quadrature;
mod residue;

pub use contour::{build_contour, ContourKind, ContourPath, DecayModel, Quadrature, Segment};
pub use gamma::{f_a, gamma, h_alpha, ln_gamma, log_gamma, log_sin_pi};
pub use meijer::{meijer_g_contour, meijer_g_line, meijer_g_residue, MeijerValue};
pub use quadrature::{gauss_kronrod_adaptive, gauss_legendre, pairwise_sum, pairwise_sum_c, GkResult};
pub use residue::{circle_rule, residue_circle, residue_circle_converged};
