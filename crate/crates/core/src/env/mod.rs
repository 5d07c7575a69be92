//! Factored two-layer causal bandit environments over parallel graphs.

mod instance;
mod map;
mod sample;

pub use instance::{CausalInstance, ContextSpec, ValidationReport};
pub use map::{Outcome, RewardMap, StructuredMap, TransitionMap, MAX_LOOKUP_VARS};
pub use sample::{sample_round, Observation, Simulator};
