//! Last-passage percolation in layered exponential environments, and the
//! determinantal machinery (product-matrix kernels, Fredholm determinants)
//! that describes its law.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`]: log-gamma, contour quadrature, residues, Meijer G.
//! * [`env`]: the random environment, last-passage times, Monte Carlo.
//! * [`rsk`]: partitions, tableaux and the RSK correspondence.
//! * [`schur`]: Schur polynomials, the Schur process and its exponential limit.
//! * [`kernels`]: extended kernels with two evaluation backends each.
//! * [`fredholm`]: gap probabilities as Fredholm determinants.

pub mod env;
pub mod error;
pub mod fredholm;
pub mod kernels;
pub mod rsk;
pub mod schur;
pub mod special;

pub use error::{Error, Result};

/// Complex numbers used throughout the crate.
pub type C64 = num_complex::Complex64;
