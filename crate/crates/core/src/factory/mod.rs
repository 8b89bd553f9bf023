//! Instance generators and the text codec.

mod codec;
mod gadgets;
mod random;

pub use codec::{read_instance, read_solution, write_instance, write_solution, CodecError};
pub use gadgets::{
    gen_3partition_stop, gen_3partition_stop_scaled, gen_3partition_stop_scaled_with_limit, gen_3partition_time,
    GadgetLayout, ThreePartitionSpec, SCALED_TRIP_LIMIT,
};
pub use random::{gen_random_tree, RandomTreeSpec};

use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error("spec: r must be at least 2, got {0}")]
    SmallR(u32),
    #[error("spec: expected {expected} values for 3r, got {found}")]
    Count { expected: usize, found: usize },
    #[error("spec: sum mismatch (sum of A is {sum}, r*M is {expected})")]
    SumMismatch { sum: u64, expected: u64 },
    #[error("spec: a_{index} = {value} is not strictly between M/4 and M/2")]
    OutOfRange { index: usize, value: u64 },
    #[error("spec: instance would have {trips} trips, limit {limit}")]
    TooLarge { trips: u64, limit: u64 },
    #[error("spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
