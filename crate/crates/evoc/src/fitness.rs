//! Fitness landscapes over actions, plus exhaustive and DP oracles for
//! their global optima.

use crate::config::{ConfigError, SimConfig};
use crate::model::{Action, ActionVector, PartState};
use std::sync::OnceLock;
use thiserror::Error;

pub const DEFAULT_CHAIN_BETA: f64 = 2.0;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("search space {0} exceeds enumeration capacity {1}")]
    TooLarge(u128, u128),
}

/// A pure, deterministic map from actions to non-negative effectiveness.
pub trait FitnessFunction: Sync + Send {
    fn name(&self) -> &'static str;
    fn evaluate(&self, action: &Action) -> f64;
    /// Global maximum over the action space, oracle-backed.
    fn max_fitness(&self) -> f64;
}

/// Single-step evaluation of a 6-part action.
///
/// Parts are ordered (head, left arm, right arm, left leg, right leg, torso).
/// Each moving part scores 1, and a bonus of 4 applies when both arms move
/// the same way, and again when both legs do. The bonuses are the epistatic
/// component: mutating one arm of a matched pair loses more than the single
/// movement point.
pub fn eval_ref6x3(step: &ActionVector) -> f64 {
    assert_eq!(step.len(), 6, "ref6x3 requires exactly 6 parts");
    let p = &step.0;
    let moving = p.iter().filter(|v| v.is_moving()).count() as f64;
    let arm_bonus = if p[1].is_moving() && p[1] == p[2] { 4.0 } else { 0.0 };
    let leg_bonus = if p[3].is_moving() && p[3] == p[4] { 4.0 } else { 0.0 };
    moving + arm_bonus + leg_bonus
}

/// Multi-step evaluation: per-step scores plus `beta` per part that moves
/// in consecutive steps with differing directions (movement alternation).
pub fn eval_chain(action: &Action, beta: f64) -> f64 {
    let per_step: f64 = action.steps.iter().map(eval_ref6x3).sum();
    let alternation: f64 = action
        .steps
        .windows(2)
        .map(|w| alt_count(&w[0], &w[1]) as f64)
        .sum();
    per_step + beta * alternation
}

fn alt_count(a: &ActionVector, b: &ActionVector) -> usize {
    a.0.iter()
        .zip(&b.0)
        .filter(|(x, y)| x.is_moving() && y.is_moving() && x != y)
        .count()
}

pub struct Ref6x3 {
    max: OnceLock<f64>,
}

impl Ref6x3 {
    pub fn new() -> Self {
        Self { max: OnceLock::new() }
    }
}

impl Default for Ref6x3 {
    fn default() -> Self {
        Self::new()
    }
}

impl FitnessFunction for Ref6x3 {
    fn name(&self) -> &'static str {
        "ref6x3"
    }

    fn evaluate(&self, action: &Action) -> f64 {
        assert_eq!(action.steps.len(), 1, "ref6x3 is single-step");
        eval_ref6x3(&action.steps[0])
    }

    fn max_fitness(&self) -> f64 {
        *self
            .max
            .get_or_init(|| global_optimum_enumerate(eval_ref6x3, 6, 3).unwrap().0)
    }
}

pub struct Chain6x3 {
    steps: usize,
    beta: f64,
    max: OnceLock<f64>,
}

impl Chain6x3 {
    pub fn new(steps: usize, beta: f64) -> Self {
        assert!(steps >= 1);
        Self { steps, beta, max: OnceLock::new() }
    }
}

impl FitnessFunction for Chain6x3 {
    fn name(&self) -> &'static str {
        "chain6x3"
    }

    fn evaluate(&self, action: &Action) -> f64 {
        assert_eq!(action.steps.len(), self.steps, "step count mismatch");
        eval_chain(action, self.beta)
    }

    fn max_fitness(&self) -> f64 {
        *self.max.get_or_init(|| chain_optimum_dp(self.steps, self.beta))
    }
}

/// Look up a fitness function by config name.
pub fn fitness_by_name(config: &SimConfig) -> Result<Box<dyn FitnessFunction>, ConfigError> {
    match config.fitness.as_str() {
        "ref6x3" => Ok(Box::new(Ref6x3::new())),
        "chain6x3" => Ok(Box::new(Chain6x3::new(config.steps_per_action, DEFAULT_CHAIN_BETA))),
        other => Err(ConfigError::UnknownFitness(other.to_string())),
    }
}

/// All `alphabet^parts` single-step vectors, in odometer order.
fn enumerate_vectors(parts: usize, alphabet: usize) -> Vec<ActionVector> {
    let total = alphabet.pow(parts as u32);
    (0..total)
        .map(|mut code| {
            let mut v = Vec::with_capacity(parts);
            for _ in 0..parts {
                v.push(PartState::from_index(code % alphabet));
                code /= alphabet;
            }
            ActionVector(v)
        })
        .collect()
}

const ENUM_CAP: u128 = 10_000_000;

/// Exact global maximum and optimum count by full enumeration.
pub fn global_optimum_enumerate(
    f: impl Fn(&ActionVector) -> f64,
    parts: usize,
    alphabet: usize,
) -> Result<(f64, usize), OracleError> {
    let space = (alphabet as u128).pow(parts as u32);
    if space > ENUM_CAP {
        return Err(OracleError::TooLarge(space, ENUM_CAP));
    }
    let mut best = f64::NEG_INFINITY;
    let mut count = 0;
    for v in enumerate_vectors(parts, alphabet) {
        let val = f(&v);
        if val > best {
            best = val;
            count = 1;
        } else if val == best {
            count += 1;
        }
    }
    Ok((best, count))
}

/// Exact maximum of the chained landscape by dynamic programming over
/// steps; the state is the previous step vector (3^6 = 729 states).
pub fn chain_optimum_dp(steps: usize, beta: f64) -> f64 {
    assert!(steps >= 1);
    let vectors = enumerate_vectors(6, 3);
    let scores: Vec<f64> = vectors.iter().map(eval_ref6x3).collect();
    let mut best: Vec<f64> = scores.clone();
    for _ in 1..steps {
        let mut next = vec![f64::NEG_INFINITY; vectors.len()];
        for (i, prev_val) in best.iter().enumerate() {
            for (j, step_score) in scores.iter().enumerate() {
                let v = prev_val + step_score + beta * alt_count(&vectors[i], &vectors[j]) as f64;
                if v > next[j] {
                    next[j] = v;
                }
            }
        }
        best = next;
    }
    best.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(parts: [PartState; 6]) -> ActionVector {
        ActionVector(parts.to_vec())
    }

    use PartState::{Down, Rest, Up};

    #[test]
    fn all_rest_scores_zero() {
        assert_eq!(eval_ref6x3(&ActionVector::all_rest(6)), 0.0);
    }

    #[test]
    fn all_up_scores_fourteen() {
        assert_eq!(eval_ref6x3(&step([Up; 6])), 14.0);
    }

    #[test]
    fn no_symmetry_bonus() {
        assert_eq!(eval_ref6x3(&step([Up, Up, Down, Rest, Rest, Down])), 4.0);
    }

    #[test]
    fn enumeration_oracle_ref6x3() {
        let (max, count) = global_optimum_enumerate(eval_ref6x3, 6, 3).unwrap();
        assert_eq!((max, count), (14.0, 16));
    }

    #[test]
    fn enumeration_constant_zero() {
        let (max, count) = global_optimum_enumerate(|_| 0.0, 6, 3).unwrap();
        assert_eq!((max, count), (0.0, 729));
    }

    #[test]
    fn enumeration_single_part() {
        let f = |v: &ActionVector| if v.0[0].is_moving() { 1.0 } else { 0.0 };
        assert_eq!(global_optimum_enumerate(f, 1, 3).unwrap(), (1.0, 2));
    }

    #[test]
    fn enumeration_capacity_error() {
        assert!(global_optimum_enumerate(|_| 0.0, 20, 3).is_err());
    }

    #[test]
    fn chain_two_identical_steps() {
        let a = Action { steps: vec![step([Up; 6]), step([Up; 6])] };
        assert_eq!(eval_chain(&a, 2.0), 28.0);
    }

    #[test]
    fn chain_alternating_steps() {
        let a = Action { steps: vec![step([Up; 6]), step([Down; 6])] };
        assert_eq!(eval_chain(&a, 2.0), 40.0);
    }

    #[test]
    fn chain_beta_zero_is_step_sum() {
        let a = Action { steps: vec![step([Up, Up, Down, Rest, Rest, Down]), step([Up; 6])] };
        assert_eq!(eval_chain(&a, 0.0), 4.0 + 14.0);
    }

    #[test]
    fn dp_t1_matches_single_step_max() {
        assert_eq!(chain_optimum_dp(1, 2.0), 14.0);
    }

    #[test]
    fn dp_t2_matches_pairwise_enumeration() {
        // Independent route: brute force over all 729^2 step pairs.
        let vectors = enumerate_vectors(6, 3);
        let mut best = f64::NEG_INFINITY;
        for a in &vectors {
            for b in &vectors {
                let v = eval_ref6x3(a) + eval_ref6x3(b) + 2.0 * alt_count(a, b) as f64;
                best = best.max(v);
            }
        }
        assert_eq!(best, 40.0);
        assert_eq!(chain_optimum_dp(2, 2.0), best);
    }

    #[test]
    fn dp_t3_is_attained_by_full_alternation() {
        // all-Up / all-Down / all-Up scores 3*14 + 2*(2*6) = 66.
        let a = Action { steps: vec![step([Up; 6]), step([Down; 6]), step([Up; 6])] };
        assert_eq!(eval_chain(&a, 2.0), 66.0);
        assert_eq!(chain_optimum_dp(3, 2.0), 66.0);
    }

    #[test]
    fn up_down_swap_symmetry() {
        let swap = |v: &ActionVector| {
            ActionVector(
                v.0.iter()
                    .map(|&s| match s {
                        Up => Down,
                        Down => Up,
                        Rest => Rest,
                    })
                    .collect(),
            )
        };
        for v in enumerate_vectors(6, 3) {
            assert_eq!(eval_ref6x3(&v), eval_ref6x3(&swap(&v)));
        }
    }

    #[test]
    fn adding_movement_never_hurts() {
        // Changing one resting part to a moving value never lowers the score.
        for v in enumerate_vectors(6, 3) {
            let base = eval_ref6x3(&v);
            for i in 0..6 {
                if v.0[i] == Rest {
                    for m in [Up, Down] {
                        let mut w = v.clone();
                        w.0[i] = m;
                        assert!(eval_ref6x3(&w) >= base);
                    }
                }
            }
        }
    }

    #[test]
    fn evaluate_bounded_by_max() {
        let f = Ref6x3::new();
        for v in enumerate_vectors(6, 3) {
            let a = Action { steps: vec![v] };
            assert!(f.evaluate(&a) <= f.max_fitness());
        }
    }
}
