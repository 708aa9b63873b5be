//! Per-iteration observables and run-level summaries.

use crate::config::SimConfig;
use crate::model::WorldState;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// p_invent at or below this counts an agent as a conformer.
pub const SEG_LOW_BAND: f64 = 0.1;
/// p_invent at or above this counts an agent as a creator.
pub const SEG_HIGH_BAND: f64 = 0.9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationMetrics {
    pub iteration: u64,
    pub mean_fitness: f64,
    pub max_fitness: f64,
    /// Number of distinct actions implemented across the society.
    pub diversity: usize,
    pub mean_p_invent: f64,
    pub frac_p_low: f64,
    pub frac_p_high: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunResult {
    pub config: SimConfig,
    pub seed: u64,
    /// One entry per iteration, including iteration 0.
    pub series: Vec<IterationMetrics>,
}

impl RunResult {
    pub fn final_metrics(&self) -> &IterationMetrics {
        self.series.last().expect("series is non-empty")
    }
}

/// Count distinct ideas by full-vector (full-sequence) equality.
pub fn diversity(world: &WorldState) -> usize {
    let distinct: HashSet<_> = world.agents.iter().map(|a| &a.idea).collect();
    distinct.len()
}

pub fn mean_fitness(world: &WorldState) -> f64 {
    let n = world.agent_count();
    world.agents.iter().map(|a| a.idea_fitness).sum::<f64>() / n as f64
}

pub fn max_fitness_now(world: &WorldState) -> f64 {
    world
        .agents
        .iter()
        .map(|a| a.idea_fitness)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Fractions of agents sitting in the extreme p_invent bands.
pub fn segregation_index(world: &WorldState) -> (f64, f64) {
    let n = world.agent_count() as f64;
    let low = world.agents.iter().filter(|a| a.p_invent <= SEG_LOW_BAND).count() as f64;
    let high = world.agents.iter().filter(|a| a.p_invent >= SEG_HIGH_BAND).count() as f64;
    (low / n, high / n)
}

pub fn iteration_metrics(world: &WorldState) -> IterationMetrics {
    let (frac_p_low, frac_p_high) = segregation_index(world);
    let n = world.agent_count() as f64;
    IterationMetrics {
        iteration: world.iteration,
        mean_fitness: mean_fitness(world),
        max_fitness: max_fitness_now(world),
        diversity: diversity(world),
        mean_p_invent: world.agents.iter().map(|a| a.p_invent).sum::<f64>() / n,
        frac_p_low,
        frac_p_high,
    }
}

/// First iteration whose mean fitness reaches `theta * f_max`, if any.
pub fn time_to_threshold(series: &[IterationMetrics], theta: f64, f_max: f64) -> Option<u64> {
    debug_assert!(theta > 0.0 && theta <= 1.0 && f_max > 0.0);
    let threshold = theta * f_max;
    series
        .iter()
        .find(|m| m.mean_fitness >= threshold)
        .map(|m| m.iteration)
}

/// Earliest iteration attaining the maximum diversity, and that maximum.
pub fn peak_diversity(series: &[IterationMetrics]) -> (u64, usize) {
    debug_assert!(!series.is_empty());
    let mut best = (series[0].iteration, series[0].diversity);
    for m in &series[1..] {
        if m.diversity > best.1 {
            best = (m.iteration, m.diversity);
        }
    }
    best
}
