//! Allele-level mutation with knowledge-based biasing of direction.
//!
//! Two learned probabilities steer mutation: `p_fm`, the chance a mutation
//! event targets a moving allele rather than rest, and `p_same`, the chance a
//! limb copies the direction of its moving counterpart. Both are nudged by
//! `step` whenever an agent adopts a strictly fitter action.

use rand::Rng;

use crate::error::ContractError;
use crate::idea::{Allele, AlleleVector, BodyPart, LIMB_PAIRS, LOCI};

pub const DEFAULT_STEP: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorState {
    /// Probability that a mutation event moves away from rest.
    pub p_fm: f64,
    /// Probability a limb follows its moving counterpart's direction.
    pub p_same: f64,
    pub step: f64,
}

impl Default for OperatorState {
    fn default() -> Self {
        OperatorState {
            p_fm: 0.5,
            p_same: 0.5,
            step: DEFAULT_STEP,
        }
    }
}

impl OperatorState {
    /// Probability of back mutation; never stored.
    pub fn p_bm(&self) -> f64 {
        1.0 - self.p_fm
    }

    /// Rule 1: more movement in the fitter action raises `p_fm`, less lowers it.
    pub fn update_movement_bias(&mut self, a_m_old: f64, a_m_new: f64) {
        if a_m_new > a_m_old {
            self.p_fm = (self.p_fm + self.step).min(1.0);
        } else if a_m_new < a_m_old {
            self.p_fm = (self.p_fm - self.step).max(0.0);
        }
    }

    /// Rule 2: limb pairs moving together raise `p_same`, pairs moving in
    /// opposite directions lower it. Arms are applied before legs.
    pub fn update_symmetry_bias(&mut self, fitter: &AlleleVector) {
        for (a, b) in LIMB_PAIRS {
            let (x, y) = (fitter.get(a), fitter.get(b));
            if !x.is_moving() || !y.is_moving() {
                continue;
            }
            if x == y {
                self.p_same = (self.p_same + self.step).min(1.0);
            } else {
                self.p_same = (self.p_same - self.step).max(0.0);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MutationParams {
    /// Per-locus probability of a mutation event.
    pub rate: f64,
    /// When false, mutation ignores the learned biases and uses 0.5 for both.
    pub knowledge_ops: bool,
}

impl MutationParams {
    pub fn new(rate: f64, knowledge_ops: bool) -> Result<Self, ContractError> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(ContractError::OutOfRange {
                what: "mutation rate",
                value: rate,
                min: 0.0,
                max: 1.0,
            });
        }
        Ok(MutationParams {
            rate,
            knowledge_ops,
        })
    }
}

/// Mutates a copy of `idea`. Loci are visited in order; direction choices
/// read the unmutated snapshot.
pub fn mutate<R: Rng + ?Sized>(
    idea: &AlleleVector,
    state: &OperatorState,
    params: &MutationParams,
    rng: &mut R,
) -> AlleleVector {
    let (p_fm, p_same) = if params.knowledge_ops {
        (state.p_fm, state.p_same)
    } else {
        (0.5, 0.5)
    };
    let snapshot = *idea;
    let mut out = snapshot;
    for index in 0..LOCI {
        if rng.gen::<f64>() >= params.rate {
            continue;
        }
        let part = BodyPart::ALL[index];
        out.set(
            part,
            if rng.gen::<f64>() < p_fm {
                movement_direction(part, &snapshot, p_same, rng)
            } else {
                Allele::Stationary
            },
        );
    }
    out
}

fn movement_direction<R: Rng + ?Sized>(
    part: BodyPart,
    snapshot: &AlleleVector,
    p_same: f64,
    rng: &mut R,
) -> Allele {
    match part.counterpart().map(|c| snapshot.get(c)) {
        Some(partner) if partner.is_moving() => {
            if rng.gen::<f64>() < p_same {
                partner
            } else {
                partner.opposite()
            }
        }
        _ => {
            if rng.gen::<bool>() {
                Allele::Up
            } else {
                Allele::Down
            }
        }
    }
}
