//! Fitness of an action: movement of every part except the head, with
//! anti-symmetric limb pairs and a stationary head.
//!
//! `F = mu * a_m + 2 * mu * a_s + mu * i`, where `a_m` is the normalized
//! movement mass over the five non-head parts, `a_s` the fraction of limb
//! pairs moving in opposite directions, and `i` is 1 when the head is at
//! rest. With `mu = 2.5` the range is [0, 10].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::MavError;
use crate::idea::{enumerate_idea_space, AlleleVector, BodyPart, IdeaPattern, LIMB_PAIRS};
use crate::network;

pub const DEFAULT_MU: f64 = 2.5;

/// Parts contributing to the movement mass.
const MOVEMENT_PARTS: [BodyPart; 5] = [
    BodyPart::LeftArm,
    BodyPart::RightArm,
    BodyPart::LeftLeg,
    BodyPart::RightLeg,
    BodyPart::Tail,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitnessParams {
    pub mu: f64,
}

impl Default for FitnessParams {
    fn default() -> Self {
        FitnessParams { mu: DEFAULT_MU }
    }
}

impl FitnessParams {
    /// Largest attainable fitness, `4 * mu`.
    pub fn max_fitness(&self) -> f64 {
        4.0 * self.mu
    }
}

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct FitnessValue(pub f64);

impl FitnessValue {
    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for FitnessValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Where the movement term comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FitnessBackend {
    /// Normalized movement mass.
    #[default]
    Analytic,
    /// Sigmoid activation of the network's movement concept unit.
    Network,
}

impl FromStr for FitnessBackend {
    type Err = MavError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(FitnessBackend::Analytic),
            "network" => Ok(FitnessBackend::Network),
            other => Err(MavError::Parse(format!(
                "fitness backend must be `analytic` or `network`, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for FitnessBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitnessBackend::Analytic => "analytic",
            FitnessBackend::Network => "network",
        })
    }
}

/// Movement mass of the five non-head parts, normalized to [0, 1].
pub fn movement_score(idea: &IdeaPattern) -> f64 {
    let mass: f64 = MOVEMENT_PARTS.iter().map(|&p| idea.get(p).abs()).sum();
    mass / (MOVEMENT_PARTS.len() as f64 * crate::idea::MAX_MOVEMENT)
}

/// Mean over the two limb pairs of "one member up, the other down".
pub fn symmetry_score(idea: &IdeaPattern) -> f64 {
    let alleles = idea.quantized();
    let anti = LIMB_PAIRS
        .iter()
        .filter(|(a, b)| {
            let (x, y) = (alleles.get(*a), alleles.get(*b));
            x.is_moving() && y == x.opposite()
        })
        .count();
    anti as f64 / LIMB_PAIRS.len() as f64
}

/// 1 when the head quantizes to Stationary.
pub fn head_term(idea: &IdeaPattern) -> f64 {
    if idea.quantized().get(BodyPart::Head).is_moving() {
        0.0
    } else {
        1.0
    }
}

pub fn fitness(idea: &IdeaPattern, params: &FitnessParams) -> FitnessValue {
    fitness_with(idea, params, FitnessBackend::Analytic)
}

pub fn fitness_with(
    idea: &IdeaPattern,
    params: &FitnessParams,
    backend: FitnessBackend,
) -> FitnessValue {
    let a_m = match backend {
        FitnessBackend::Analytic => movement_score(idea),
        FitnessBackend::Network => network::concept_activations(idea).movement,
    };
    let mu = params.mu;
    FitnessValue(mu * a_m + 2.0 * mu * symmetry_score(idea) + mu * head_term(idea))
}

/// Fitness of an allele vector through the analytic backend.
pub fn allele_fitness(alleles: AlleleVector, params: &FitnessParams) -> FitnessValue {
    fitness(&alleles.into(), params)
}

/// Every allele vector attaining the maximum fitness, found by enumeration.
pub fn optimal_set(params: &FitnessParams) -> BTreeSet<AlleleVector> {
    let scored: Vec<(AlleleVector, f64)> = enumerate_idea_space()
        .into_iter()
        .map(|v| (v, allele_fitness(v, params).get()))
        .collect();
    let best = scored
        .iter()
        .map(|&(_, f)| f)
        .fold(f64::NEG_INFINITY, f64::max);
    scored
        .into_iter()
        .filter(|&(_, f)| f == best)
        .map(|(v, _)| v)
        .collect()
}
