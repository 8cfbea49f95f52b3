//! The society: agents on a toroidal grid acquiring ideas by creation or
//! imitation, one synchronous tick at a time.
//!
//! A tick reads every neighbour's embodiment from the snapshot taken at the
//! start of the tick and commits all new embodiments together at the end, so
//! an agent never sees another agent's same-tick change.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{MavError, Result};
use crate::fitness::{self, FitnessBackend, FitnessParams};
use crate::idea::{AlleleVector, IdeaPattern, LOCI};
use crate::network::{NetworkParams, NetworkState, TargetPattern};
use crate::rng::{agent_stream, SimRng, StreamPurpose};
use crate::variation::{mutate, MutationParams, OperatorState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MemoryBackend {
    /// The idea is stored as a value.
    #[default]
    Direct,
    /// Ideas are learned by, and read back from, the autoassociator.
    Network,
}

impl FromStr for MemoryBackend {
    type Err = MavError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(MemoryBackend::Direct),
            "network" => Ok(MemoryBackend::Network),
            other => Err(MavError::Parse(format!(
                "memory backend must be `direct` or `network`, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for MemoryBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MemoryBackend::Direct => "direct",
            MemoryBackend::Network => "network",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SocietyConfig {
    pub rows: usize,
    pub cols: usize,
    /// Probability an agent creates rather than imitates on a given tick.
    pub p_create: f64,
    pub mutation_rate: f64,
    pub mental_simulation: bool,
    pub imitation_enabled: bool,
    pub knowledge_ops: bool,
    pub iterations: usize,
    pub seed: u64,
    pub memory_backend: MemoryBackend,
    pub fitness_backend: FitnessBackend,
}

impl Default for SocietyConfig {
    fn default() -> Self {
        SocietyConfig {
            rows: 10,
            cols: 10,
            p_create: 0.5,
            mutation_rate: 0.17,
            mental_simulation: true,
            imitation_enabled: true,
            knowledge_ops: true,
            iterations: 200,
            seed: 1,
            memory_backend: MemoryBackend::Direct,
            fitness_backend: FitnessBackend::Analytic,
        }
    }
}

impl SocietyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(MavError::Config(format!(
                "grid must be non-empty, got {}x{}",
                self.rows, self.cols
            )));
        }
        for (name, value) in [
            ("p_create", self.p_create),
            ("mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(MavError::Config(format!("{name} = {value} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn agent_count(&self) -> usize {
        self.rows * self.cols
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    pub row: usize,
    pub col: usize,
}

/// The eight surrounding cells with wraparound, in the order
/// N, NE, E, SE, S, SW, W, NW.
pub fn neighbors(pos: Position, rows: usize, cols: usize) -> [Position; 8] {
    const OFFSETS: [(isize, isize); 8] = [
        (-1, 0),
        (-1, 1),
        (0, 1),
        (1, 1),
        (1, 0),
        (1, -1),
        (0, -1),
        (-1, -1),
    ];
    OFFSETS.map(|(dr, dc)| Position {
        row: (pos.row as isize + dr).rem_euclid(rows as isize) as usize,
        col: (pos.col as isize + dc).rem_euclid(cols as isize) as usize,
    })
}

/// The action displaced by an unevaluated new idea.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pending {
    pub previous_idea: IdeaPattern,
    pub previous_fitness: f64,
}

#[derive(Clone, Debug)]
pub struct Agent {
    pub id: usize,
    pub position: Position,
    /// `None` under the direct memory backend.
    pub memory: Option<Box<NetworkState>>,
    pub current_idea: IdeaPattern,
    pub embodiment: IdeaPattern,
    pub operators: OperatorState,
    pub pending: Option<Pending>,
    rng: SimRng,
    decision_rng: SimRng,
}

impl Agent {
    fn new(id: usize, position: Position, config: &SocietyConfig) -> Self {
        let memory = match config.memory_backend {
            MemoryBackend::Direct => None,
            MemoryBackend::Network => {
                let mut init = agent_stream(config.seed, id, StreamPurpose::Memory);
                let mut net = NetworkState::new(&mut init);
                net.learn(
                    &TargetPattern::from(&IdeaPattern::IMMOBILE),
                    &NetworkParams::default(),
                );
                Some(Box::new(net))
            }
        };
        Agent {
            id,
            position,
            memory,
            current_idea: IdeaPattern::IMMOBILE,
            embodiment: IdeaPattern::IMMOBILE,
            operators: OperatorState::default(),
            pending: None,
            rng: agent_stream(config.seed, id, StreamPurpose::Behaviour),
            decision_rng: agent_stream(config.seed, id, StreamPurpose::Decision),
        }
    }

    /// Stores `idea` in memory and makes the stored version current.
    fn learn(&mut self, idea: IdeaPattern) {
        self.current_idea = match self.memory.as_deref_mut() {
            None => idea,
            Some(net) => {
                net.learn(&TargetPattern::from(&idea), &NetworkParams::default());
                net.recall()
            }
        };
    }

    fn reinforce(&mut self, old: &IdeaPattern, new: &IdeaPattern) {
        self.operators
            .update_movement_bias(fitness::movement_score(old), fitness::movement_score(new));
        self.operators.update_symmetry_bias(&new.quantized());
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Creation,
    Imitation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    /// A new idea was learned and will be implemented this tick.
    Adopted(Source),
    /// A candidate was considered and turned down.
    Rejected(Source),
    /// Nothing new was found.
    Idle(Source),
}

/// Everything a step needs besides the agent and the snapshot.
#[derive(Clone, Copy, Debug)]
pub struct StepContext {
    pub mental_simulation: bool,
    pub fitness_params: FitnessParams,
    pub fitness_backend: FitnessBackend,
    pub mutation: MutationParams,
}

impl StepContext {
    pub fn from_config(config: &SocietyConfig) -> Result<Self> {
        Ok(StepContext {
            mental_simulation: config.mental_simulation,
            fitness_params: FitnessParams::default(),
            fitness_backend: config.fitness_backend,
            mutation: MutationParams::new(config.mutation_rate, config.knowledge_ops)?,
        })
    }

    pub fn fitness(&self, idea: &IdeaPattern) -> f64 {
        fitness::fitness_with(idea, &self.fitness_params, self.fitness_backend).get()
    }
}

fn adopt(agent: &mut Agent, idea: IdeaPattern, ctx: &StepContext, source: Source) -> StepOutcome {
    let old = agent.current_idea;
    if ctx.mental_simulation {
        agent.learn(idea);
        agent.reinforce(&old, &idea);
    } else {
        agent.pending = Some(Pending {
            previous_idea: old,
            previous_fitness: ctx.fitness(&old),
        });
        agent.learn(idea);
    }
    StepOutcome::Adopted(source)
}

/// Mutates the agent's current idea; with mental simulation the candidate is
/// adopted only if strictly fitter, otherwise it is tried out for a tick.
pub fn creation_step(agent: &mut Agent, ctx: &StepContext) -> StepOutcome {
    let current = agent.current_idea.quantized();
    let candidate = mutate(&current, &agent.operators, &ctx.mutation, &mut agent.rng);
    if candidate == current {
        return StepOutcome::Idle(Source::Creation);
    }
    let candidate = candidate.to_pattern();
    if ctx.mental_simulation && ctx.fitness(&candidate) <= ctx.fitness(&agent.current_idea) {
        return StepOutcome::Rejected(Source::Creation);
    }
    adopt(agent, candidate, ctx, Source::Creation)
}

/// Copies a neighbour's embodiment from `snapshot`. With mental simulation,
/// neighbours are scanned in random order until a strictly fitter one turns
/// up; otherwise one random neighbour is copied on trial.
pub fn imitation_step(
    agent: &mut Agent,
    snapshot: &[IdeaPattern],
    rows: usize,
    cols: usize,
    ctx: &StepContext,
) -> StepOutcome {
    let mut around = neighbors(agent.position, rows, cols);
    let index = |p: Position| p.row * cols + p.col;
    if ctx.mental_simulation {
        around.shuffle(&mut agent.rng);
        let own = ctx.fitness(&agent.current_idea);
        let fitter = around
            .iter()
            .map(|&p| snapshot[index(p)])
            .find(|observed| ctx.fitness(observed) > own);
        match fitter {
            Some(observed) => adopt(agent, observed, ctx, Source::Imitation),
            None => StepOutcome::Idle(Source::Imitation),
        }
    } else {
        let observed = snapshot[index(around[agent.rng.gen_range(0..around.len())])];
        if observed.quantized() == agent.current_idea.quantized() {
            return StepOutcome::Idle(Source::Imitation);
        }
        adopt(agent, observed, ctx, Source::Imitation)
    }
}

/// Settles an idea that was implemented without mental simulation: keep it
/// and learn from it if it beat the displaced action, otherwise revert.
fn evaluate_pending(agent: &mut Agent, ctx: &StepContext) {
    let Some(pending) = agent.pending.take() else {
        return;
    };
    let current = agent.current_idea;
    if ctx.fitness(&current) > pending.previous_fitness {
        agent.reinforce(&pending.previous_idea, &current);
    } else {
        agent.learn(pending.previous_idea);
    }
}

/// Per-iteration society statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRecord {
    pub iteration: usize,
    pub mean_fitness: f64,
    pub max_fitness_current: f64,
    pub max_fitness_so_far: f64,
    /// Distinct implemented actions, not counting immobility.
    pub diversity: usize,
    pub mean_locus_activation: [f64; LOCI],
    /// Agents whose embodiment is one of the optimal actions.
    pub optimal_count: usize,
    /// Most common implemented action and how many agents implement it;
    /// ties go to the earliest action in enumeration order.
    pub modal_action: AlleleVector,
    pub modal_count: usize,
}

pub struct Society {
    config: SocietyConfig,
    ctx: StepContext,
    agents: Vec<Agent>,
    iteration: usize,
    max_so_far: f64,
    optimal: std::collections::BTreeSet<AlleleVector>,
}

impl Society {
    /// All agents start immobile with default operator biases.
    pub fn new(config: SocietyConfig) -> Result<Self> {
        config.validate()?;
        let ctx = StepContext::from_config(&config)?;
        let agents = (0..config.agent_count())
            .map(|id| {
                let position = Position {
                    row: id / config.cols,
                    col: id % config.cols,
                };
                Agent::new(id, position, &config)
            })
            .collect();
        let optimal = fitness::optimal_set(&ctx.fitness_params);
        Ok(Society {
            config,
            ctx,
            agents,
            iteration: 0,
            max_so_far: f64::NEG_INFINITY,
            optimal,
        })
    }

    pub fn config(&self) -> &SocietyConfig {
        &self.config
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn embodiments(&self) -> Vec<IdeaPattern> {
        self.agents.iter().map(|a| a.embodiment).collect()
    }

    pub fn tick(&mut self) -> MetricsRecord {
        let order: Vec<usize> = (0..self.agents.len()).collect();
        self.tick_with_order(&order)
    }

    /// Runs one tick visiting agents in `order`. Any permutation gives the
    /// same result.
    pub fn tick_with_order(&mut self, order: &[usize]) -> MetricsRecord {
        assert_eq!(
            order.len(),
            self.agents.len(),
            "order must cover every agent"
        );
        let snapshot = self.embodiments();
        let (rows, cols) = (self.config.rows, self.config.cols);
        let ctx = self.ctx;
        let p_create = self.config.p_create;
        let imitation = self.config.imitation_enabled;
        for &id in order {
            let agent = &mut self.agents[id];
            if !ctx.mental_simulation {
                evaluate_pending(agent, &ctx);
            }
            let create = agent.decision_rng.gen::<f64>() < p_create;
            if create || !imitation {
                creation_step(agent, &ctx);
            } else {
                imitation_step(agent, &snapshot, rows, cols, &ctx);
            }
        }
        for agent in &mut self.agents {
            agent.embodiment = agent.current_idea;
        }
        self.iteration += 1;
        self.metrics()
    }

    /// Statistics of the current embodiments.
    pub fn metrics(&mut self) -> MetricsRecord {
        let record = compute_metrics(
            &self.agents,
            &self.ctx,
            &self.optimal,
            self.iteration,
            self.max_so_far,
        );
        self.max_so_far = record.max_fitness_so_far;
        record
    }
}

fn compute_metrics(
    agents: &[Agent],
    ctx: &StepContext,
    optimal: &std::collections::BTreeSet<AlleleVector>,
    iteration: usize,
    max_so_far: f64,
) -> MetricsRecord {
    let n = agents.len() as f64;
    let mut total = 0.0;
    let mut best = f64::NEG_INFINITY;
    let mut sums = [0.0; LOCI];
    let mut counts: HashMap<AlleleVector, usize> = HashMap::new();
    for agent in agents {
        let f = ctx.fitness(&agent.embodiment);
        total += f;
        best = best.max(f);
        for (s, v) in sums.iter_mut().zip(agent.embodiment.values()) {
            *s += v;
        }
        *counts.entry(agent.embodiment.quantized()).or_default() += 1;
    }
    let diversity = counts.keys().filter(|a| !a.is_immobile()).count();
    let optimal_count = counts
        .iter()
        .filter(|(a, _)| optimal.contains(a))
        .map(|(_, c)| c)
        .sum();
    let (modal_action, modal_count) = counts
        .iter()
        .map(|(a, c)| (*a, *c))
        .max_by(|(a1, c1), (a2, c2)| c1.cmp(c2).then(a2.cmp(a1)))
        .unwrap_or((AlleleVector::STATIONARY, 0));
    MetricsRecord {
        iteration,
        mean_fitness: total / n,
        max_fitness_current: best,
        max_fitness_so_far: max_so_far.max(best),
        diversity,
        mean_locus_activation: sums.map(|s| s / n),
        optimal_count,
        modal_action,
        modal_count,
    }
}

/// Runs a fresh society for `config.iterations` ticks. The first record
/// describes the initial state (iteration 0), followed by one per tick.
pub fn run(config: &SocietyConfig) -> Result<Vec<MetricsRecord>> {
    let mut society = Society::new(config.clone())?;
    let mut records = Vec::with_capacity(config.iterations + 1);
    records.push(society.metrics());
    for _ in 0..config.iterations {
        records.push(society.tick());
    }
    Ok(records)
}
