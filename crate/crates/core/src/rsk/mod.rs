//! Partitions, semi-standard (skew) tableaux and the RSK correspondence.

mod correspondence;
mod partition;
mod tableau;

pub use correspondence::{lambda1_equals_lpp_check, restriction_commutes_check, rsk_correspondence};
pub use partition::Partition;
pub use tableau::{bounded_insert, erase_above, row_insert, PathStep, Tableau};
