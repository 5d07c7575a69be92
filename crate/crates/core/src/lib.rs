//! Causal contextual bandits with adaptive context.
//!
//! A learner starts at context 0, performs an atomic intervention on a set of
//! independent binary variables, is carried stochastically to one of `k`
//! intermediate contexts, performs a second atomic intervention there and
//! receives a Bernoulli reward. After a fixed budget of such rounds it must
//! return a policy; its quality is the simple regret.
//!
//! The crate provides
//! - [`env`]: structured causal instances, exact transition/reward matrices and
//!   a seeded simulator;
//! - [`thresholds`]: the causal observational threshold `m` and rare sets;
//! - [`optim`]: the coverage LP, the convex min-max exploration program and λ;
//! - [`explore`]: the three-phase convex exploration algorithm;
//! - [`baselines`]: uniform, UCB and Thompson-sampling explorers;
//! - [`bench`]: instance generators, exact regret, and the Monte-Carlo harness.

pub mod baselines;
pub mod bench;
pub mod env;
pub mod error;
pub mod explore;
pub mod intervention;
pub mod matrix;
pub mod optim;
pub mod thresholds;

pub use error::{Error, Result};
pub use intervention::Intervention;
pub use matrix::{transition_threshold, Matrix, RewardMatrix, TransitionMatrix};
