//! Sample-size bounds, finite example distributions, generalization
//! experiments and the adversarial suites for most general and most
//! specific fitting.

pub mod adversarial;
mod bounds;
mod dist;
mod experiment;

use thiserror::Error;

pub use adversarial::{adversarial_most_general_suite, adversarial_most_specific_suite, MostGeneralSuite, MostSpecificSuite};
pub use bounds::{occam_sample_size, sample_size_bound, PacParams, Variant, ALPHABET_CONSTANT};
pub use dist::{empirical_error, ExampleDistribution};
pub use experiment::{
    generalization_experiment, median, run_trial, summarize, summary_json, to_csv, Learner, SummaryRow, Task, TrialRow,
};

#[derive(Debug, Error, PartialEq)]
pub enum PacError {
    #[error("{0} = {1} must lie strictly between 0 and 1")]
    OutOfRange(&'static str, f64),
    #[error("probabilities must be nonnegative, match the support and sum to 1 (sum {0})")]
    BadDistribution(f64),
}
