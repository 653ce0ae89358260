//! The layered environment: parameters, sampled clock arrays, last-passage
//! times and Monte Carlo estimates of their joint law.

mod array;
mod lpp;
mod mc;
mod sample;
mod spec;

pub use array::{ClockArray, Mode};
pub use lpp::{brute_force_lpp, last_passage_process, last_passage_time};
pub use mc::{critical_rescale, critical_centering, dkw_band, monte_carlo_joint_cdf, sample_lpp_process, McEstimate};
pub use sample::{
    geometric_parameters_for_exponential_limit, sample_exponential_blocks, sample_exponential_stream,
    sample_geometric_blocks, sample_geometric_stream, stream_rng,
};
pub use spec::LayeredSpec;
