//! Domain types: actions, trend knowledge, agents, and the grid world.

use crate::config::{Neighborhood, SimConfig};
use crate::fitness::FitnessFunction;
use crate::rng::RunRng;
use serde::{Deserialize, Serialize};

/// State of one body part. `Rest` is the distinguished "not moving" state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum PartState {
    Rest = 0,
    Up = 1,
    Down = 2,
}

/// All part states, in the order used for value indexing everywhere.
pub const PART_STATES: [PartState; 3] = [PartState::Rest, PartState::Up, PartState::Down];

impl PartState {
    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        PART_STATES[i]
    }

    #[inline]
    pub fn is_moving(self) -> bool {
        self != PartState::Rest
    }
}

/// One idea for a single-step action: a fixed-length vector of part states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActionVector(pub Vec<PartState>);

impl ActionVector {
    pub fn all_rest(parts: usize) -> Self {
        Self(vec![PartState::Rest; parts])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// An idea for an action: T steps of K part states each. T = 1 is the
/// simple single-step case.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Action {
    pub steps: Vec<ActionVector>,
}

impl Action {
    pub fn all_rest(parts: usize, steps: usize) -> Self {
        Self {
            steps: vec![ActionVector::all_rest(parts); steps],
        }
    }

    /// Part state at flat position `t * K + i`.
    #[inline]
    pub fn get(&self, parts: usize, pos: usize) -> PartState {
        self.steps[pos / parts].0[pos % parts]
    }

    #[inline]
    pub fn set(&mut self, parts: usize, pos: usize, v: PartState) {
        self.steps[pos / parts].0[pos % parts] = v;
    }

    pub fn positions(&self) -> usize {
        self.steps.iter().map(ActionVector::len).sum()
    }
}

/// Per-position, per-value running record of observed action fitness.
///
/// `estimate(pos, v)` is the mean fitness of observed actions that had value
/// `v` at flat position `pos`, or 0 with no observations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendModel {
    obs_count: Vec<[u64; 3]>,
    fitness_sum: Vec<[f64; 3]>,
}

impl TrendModel {
    pub fn new(positions: usize) -> Self {
        Self {
            obs_count: vec![[0; 3]; positions],
            fitness_sum: vec![[0.0; 3]; positions],
        }
    }

    pub fn observe(&mut self, parts: usize, action: &Action, fitness: f64) {
        debug_assert!(fitness >= 0.0);
        for pos in 0..self.obs_count.len() {
            let v = action.get(parts, pos).index();
            self.obs_count[pos][v] += 1;
            self.fitness_sum[pos][v] += fitness;
        }
    }

    pub fn estimate(&self, pos: usize, value: PartState) -> f64 {
        let v = value.index();
        let n = self.obs_count[pos][v];
        if n == 0 {
            0.0
        } else {
            self.fitness_sum[pos][v] / n as f64
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AgentState {
    /// Row-major grid position.
    pub id: usize,
    pub idea: Action,
    pub idea_fitness: f64,
    pub p_invent: f64,
    pub trends: TrendModel,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorldState {
    pub width: usize,
    pub height: usize,
    pub agents: Vec<AgentState>,
    pub iteration: u64,
    /// Mean idea fitness after the most recent update (or at construction).
    pub prev_mean_fitness: f64,
}

impl WorldState {
    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }
}

/// Build the initial world: every agent stands still (all-Rest idea), and
/// exactly `round(C * N)` agents, chosen by shuffling ids with the run PRNG,
/// become creators with `p_invent = p`. Everyone else gets `p_invent = 0`.
pub fn new_world(config: &SimConfig, fitness: &dyn FitnessFunction, rng: &mut RunRng) -> WorldState {
    let n = config.agent_count();
    let idea = Action::all_rest(config.parts, config.steps_per_action);
    let idea_fitness = fitness.evaluate(&idea);

    // round-half-up of C * N
    let creator_count = (config.creator_fraction * n as f64 + 0.5).floor() as usize;
    let creator_count = creator_count.min(n);
    let mut ids: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut ids);
    let mut is_creator = vec![false; n];
    for &id in ids.iter().take(creator_count) {
        is_creator[id] = true;
    }

    let agents = (0..n)
        .map(|id| AgentState {
            id,
            idea: idea.clone(),
            idea_fitness,
            p_invent: if is_creator[id] { config.creator_p_invent } else { 0.0 },
            trends: TrendModel::new(config.positions()),
        })
        .collect();

    WorldState {
        width: config.grid_width,
        height: config.grid_height,
        agents,
        iteration: 0,
        prev_mean_fitness: idea_fitness,
    }
}

/// Neighbor ids on the torus, in fixed order N, E, S, W (plus NE, SE, SW, NW
/// for Moore). Never includes the agent itself.
pub fn neighbors(width: usize, height: usize, neighborhood: Neighborhood, agent_id: usize) -> Vec<usize> {
    let n = width * height;
    assert!(agent_id < n, "agent id {agent_id} out of range for {width}x{height} grid");
    let x = agent_id % width;
    let y = agent_id / width;
    let w = width as isize;
    let h = height as isize;
    let at = |dx: isize, dy: isize| -> usize {
        let nx = (x as isize + dx).rem_euclid(w) as usize;
        let ny = (y as isize + dy).rem_euclid(h) as usize;
        ny * width + nx
    };
    let mut out = vec![at(0, -1), at(1, 0), at(0, 1), at(-1, 0)];
    if neighborhood == Neighborhood::Moore {
        out.extend([at(1, -1), at(1, 1), at(-1, 1), at(-1, -1)]);
    }
    out
}
