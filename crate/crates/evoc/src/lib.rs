//! Agent-based simulator of cultural evolution on a toroidal grid.
//!
//! Agents hold ideas for actions, and each iteration either invent a
//! variant of their own idea or imitate the fittest neighbor. Three
//! experiment harnesses cover the invent:imitate ratio, the creator
//! fraction vs. creativity tradeoff, and self-regulated creativity.

pub mod config;
pub mod dynamics;
pub mod experiments;
pub mod fitness;
pub mod metrics;
pub mod model;
pub mod output;
pub mod plot;
pub mod rng;

pub use config::{ConfigError, ConfigFile, Neighborhood, SimConfig};
pub use experiments::{run_replicates, run_sim, sr_compare, sweep};
pub use metrics::{IterationMetrics, RunResult};
pub use model::{Action, ActionVector, AgentState, PartState, WorldState};
